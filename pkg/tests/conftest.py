import pytest

from expectile_hydro.evaluation import SplitSpec
from expectile_hydro.synthetic import synth_basin

# four-year record: one warm-up year, two calibration years, one evaluation year
SHORT_SPLIT = SplitSpec.from_dates(
    ("1980-01-01", "1980-12-31"),
    ("1981-01-01", "1982-12-31"),
    ("1983-01-01", "1983-12-31"),
)


@pytest.fixture(scope="session")
def short_split():
    return SHORT_SPLIT


@pytest.fixture(scope="session")
def clean_basin():
    return synth_basin(seed=1, n_years=4, noise=0.0)


@pytest.fixture(scope="session")
def noisy_basin():
    return synth_basin(seed=1, n_years=4, noise=0.25)
