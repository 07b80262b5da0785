"""Rendering of reports and tables as JSON, CSV or aligned text."""
import json
import logging
from typing import Optional, Union

import pandas as pd

from .const import (
    LOGGER,
    CSV_FLOAT_FORMAT,
    FORMAT_CSV,
    FORMAT_JSON,
    JSON_INDENT,
    TABLE_COLUMNS,
)
from .pybgrisk import CptThresholdRow, Helpers, ThresholdRow

_LOGGER = logging.getLogger(LOGGER)

Document = Union[dict, list[dict]]


def _rounded(value: Optional[float], round_up: bool) -> Optional[float]:
    if value is None or not round_up:
        return value
    return Helpers.round_up(value)


def threshold_row_to_dict(row: Union[ThresholdRow, CptThresholdRow], round_up: bool = False) -> dict:
    """Table row in the published column order."""
    values = (row.label, row.gain, row.loss,
              _rounded(row.sigma_laplace, round_up),
              _rounded(row.sigma_logistic, round_up),
              _rounded(row.sigma_normal, round_up))
    data = dict(zip(TABLE_COLUMNS, values))
    if isinstance(row, CptThresholdRow):
        data["points"] = row.points
    return data


def to_frame(document: Document) -> pd.DataFrame:
    rows = document if isinstance(document, list) else [document]
    return pd.DataFrame.from_records(rows)


def render(document: Document, output_format: str) -> str:
    """Text for standard output, newline terminated."""
    if output_format == FORMAT_JSON:
        return json.dumps(document, indent=JSON_INDENT) + "\n"
    frame = to_frame(document)
    _LOGGER.debug("render: %s as %s", list(frame.columns), output_format)
    if output_format == FORMAT_CSV:
        return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return frame.to_string(index=False) + "\n"
