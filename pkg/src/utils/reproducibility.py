"""
Seeding helpers for the random sampler and the extremal search.

All randomness flows through numpy ``Generator`` objects; a fixed seed
fully determines every sample stream and search trajectory. The toolkit
never draws from the legacy global generators.
"""
import os
import platform
import sys
from typing import Any, Dict, List

import numpy as np

# Read by BLAS/OpenMP once, when numpy is first imported
THREAD_VARIABLES = ('OMP_NUM_THREADS', 'MKL_NUM_THREADS', 'OPENBLAS_NUM_THREADS')


def make_rng(seed: int) -> np.random.Generator:
    """Independent PCG64 generator for ``seed``."""
    return np.random.default_rng(seed)


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """
    ``count`` statistically independent generators derived from ``seed``.

    Stream k depends only on (seed, k), so restarts may run in any order
    or concurrently without changing their draws.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def get_environment_info() -> Dict[str, Any]:
    """
    Collect environment information recorded alongside results.

    Returns:
        Dictionary of interpreter, platform and library versions, plus the
        BLAS thread pins in effect
    """
    import pydantic
    import scipy

    return {
        'python_version': sys.version,
        'platform': platform.platform(),
        'numpy_version': np.__version__,
        'scipy_version': scipy.__version__,
        'pydantic_version': pydantic.VERSION,
        'thread_pins': {name: os.environ.get(name) for name in THREAD_VARIABLES},
    }
