import numpy as np
import pytest

from . import oracles


@pytest.fixture(scope="session")
def uniform_band():
    """99.9th percentile and max of VCS under 10,000 uniform patterns.

    Built once per session from the independent oracle (K=200 over
    period (0, 1000), tau=5) and shared by every band-based test.
    """
    samples = oracles.uniform_band_samples(n_runs=10000)
    return {
        "p999": float(np.quantile(samples, 0.999)),
        "max": float(samples.max()),
        "mean": float(samples.mean()),
    }
