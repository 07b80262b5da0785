"""bgrisk: riskiness, background-risk size and stochastic dominance calculator."""
