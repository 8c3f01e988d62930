import os

# Must happen before numpy loads its BLAS: the chains work on ~100x100
# matrices, where multithreaded BLAS only adds synchronization overhead.
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from siqreg.rng import RandomStream  # noqa: E402


@pytest.fixture
def rng():
    return RandomStream(20260810)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20260810)
