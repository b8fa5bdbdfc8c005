"""Small numeric helpers: deterministic direction nets and seeded RNG streams."""

import numpy as np
from scipy.stats import norm, qmc


def unit_directions(dim, count):
    """Deterministic low-discrepancy set of `count` unit vectors in R^dim.

    Built from an unscrambled Halton sequence pushed through the normal
    inverse CDF and normalized; identical on every call.
    """
    if dim < 1 or count < 1:
        raise ValueError("dim and count must be positive")
    if dim == 1:
        signs = np.ones((count, 1))
        signs[1::2] = -1.0
        return signs
    sampler = qmc.Halton(d=dim, scramble=False)
    # first Halton point is the origin; drop it
    u = sampler.random(count + 1)[1:]
    z = norm.ppf(np.clip(u, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0] = 1.0
    return z / norms[:, None]


def trial_rng(seed, trial):
    """Independent RNG for one fuzz trial; reproducible at any parallelism."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def check_finite(name, arr):
    a = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(a)):
        from .errors import DataError

        raise DataError(f"{name} contains non-finite entries")
    return a
