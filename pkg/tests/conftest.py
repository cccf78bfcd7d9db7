import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from simphase import complexes as cx


def random_small_complexes(count, n_range=(6, 12), d=2, c_range=(1.0, 5.0),
                           seed=20240901):
    """Deterministic corpus of small complexes for oracle comparisons."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        c = float(rng.uniform(*c_range))
        out.append(cx.sample(n, d, min(c, n), seed=int(rng.integers(0, 2**31))))
    return out


@pytest.fixture(scope="session")
def small_corpus():
    return random_small_complexes(40)
