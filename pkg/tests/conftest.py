import numpy as np
import pytest

from msifield.markov import FirstScaleStats
from msifield.model import MsiModel


@pytest.fixture
def rng():
    return np.random.default_rng(20130125)


@pytest.fixture
def brownian_model():
    """Simulatable model whose sheet reduces to the plain Brownian sheet."""
    return MsiModel(lam=(2.0, 2.0), hurst=(0.5, 0.5), hprime1=(0.5,), hprime2=(0.5,))


@pytest.fixture
def case_study_model():
    """The fitted Brisbane model; non-simulatable because one sheet exponent
    (1.14) escapes (0, 1)."""
    from msifield.fixtures import (
        CASE_STUDY_HPRIME1,
        CASE_STUDY_HPRIME2,
        CASE_STUDY_HURST,
        CASE_STUDY_LAMBDA,
        HORIZONTAL_BREAKPOINTS,
        VERTICAL_BREAKPOINTS,
    )

    return MsiModel(
        lam=CASE_STUDY_LAMBDA,
        hurst=CASE_STUDY_HURST,
        hprime1=CASE_STUDY_HPRIME1,
        hprime2=CASE_STUDY_HPRIME2,
        breakpoints_a=VERTICAL_BREAKPOINTS,
        breakpoints_b=HORIZONTAL_BREAKPOINTS,
    )


def make_axis_stats(rng, period, alpha=2.0, hurst=0.5):
    """Random valid per-axis first-interval statistics."""
    var = rng.uniform(0.5, 2.0, period)
    growth = alpha ** (2 * period * hurst)
    cov = np.empty(period)
    for j in range(period):
        nxt = var[(j + 1) % period] * (growth if j == period - 1 else 1.0)
        bound = np.sqrt(var[j] * nxt)
        cov[j] = rng.uniform(-0.9, 0.9) * bound
    return FirstScaleStats(period=period, variances=tuple(var), lag1=tuple(cov),
                           hurst=hurst, alpha=alpha)


@pytest.fixture
def axis_stats_factory():
    return make_axis_stats
