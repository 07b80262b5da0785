"""PyBgRisk Test Defaults"""
import math

from .imports import *  # pylint: disable=W0401,W0614


class Defaults:
    """Reference numbers shared by the tests.

    Attributes
    ----------
    riskiness_11_10 : float
        R of the fifty-fifty +11/-10 gamble
    table1 : dict
        Rounded-up sufficient sigmas per gamble label: (laplace, logistic, normal)
    table1_exact : dict
        Unrounded sigmas, to the cent
    table2 : dict
        Prospect-theory sigmas per gamble label: (laplace, logistic, normal)
    """

    riskiness_11_10 = 110.0832
    normal_mu = 100000.0
    ell = 0.0

    gambles = ((11.0, 10.0), (55.0, 50.0), (110.0, 100.0), (550.0, 500.0), (1100.0, 1000.0))

    table1 = {
        "11/10": (156, 200, 3319),
        "55/50": (779, 999, 7422),
        "110/100": (1557, 1997, 10498),
        "550/500": (7785, 9984, 23526),
        "1100/1000": (15569, 19967, 33361),
    }

    table1_exact = {
        "11/10": (155.68, 199.67, 3318.06),
        "55/50": (778.41, 998.34, 7421.04),
        "110/100": (1556.81, 1996.69, 10497.82),
        "550/500": (7784.06, 9983.44, 23525.38),
        "1100/1000": (15568.12, 19966.89, 33360.78),
    }

    table2 = {
        "11/10": (62, 46, 44),
        "55/50": (306, 230, 217),
        "110/100": (612, 460, 434),
        "550/500": (3058, 2299, 2169),
        "1100/1000": (6115, 4598, 4338),
    }

    column_ratio = (math.pi / math.sqrt(3.0)) / math.sqrt(2.0)

    @staticmethod
    def fifty_fifty(gain: float, loss: float) -> Gamble:
        """Fifty-fifty gamble winning `gain` or losing `loss`."""
        return Gamble.fifty_fifty(gain, loss)

    @staticmethod
    def label(gain: float, loss: float) -> str:
        """Table label, e.g. '11/10'."""
        return f"{gain:g}/{loss:g}"
