"""Expectile- and quantile-loss calibration of lumped daily rainfall-runoff models."""

__version__ = "0.1.0"

from .risk_measures import (  # noqa: E402
    Level,
    expectile_argmin_oracle,
    expectile_level_of_value,
    expectile_loss,
    mean_loss,
    prediction_expectile_level,
    quantile_loss,
    return_period_from_level,
    sample_expectile,
    sample_quantile,
)

__all__ = [
    "Level",
    "__version__",
    "expectile_argmin_oracle",
    "expectile_level_of_value",
    "expectile_loss",
    "mean_loss",
    "prediction_expectile_level",
    "quantile_loss",
    "return_period_from_level",
    "sample_expectile",
    "sample_quantile",
]
