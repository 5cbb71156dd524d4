"""Shared numerical primitives: norms, ball projection, Gaussian tail, seeded RNG.

All linear algebra is dense double-precision numpy. Matrices and vectors are
plain ``np.ndarray`` values; stateful randomness is a ``numpy.random.Generator``
owned by a single run.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erfc

__all__ = [
    "frobenius_norm",
    "project_frobenius_ball",
    "q_function",
    "seeded_rng",
]


def frobenius_norm(a: np.ndarray) -> float:
    """sqrt(trace(a^T a)) of a real matrix (or the 2-norm of a vector)."""
    return float(np.linalg.norm(np.asarray(a, dtype=float)))


def project_frobenius_ball(a: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of ``a`` onto the Frobenius ball of given radius.

    Interior points are returned unchanged; exterior points are scaled
    radially onto the sphere.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    a = np.asarray(a, dtype=float)
    norm = np.linalg.norm(a)
    if norm <= radius:
        return a.copy()
    return a * (radius / norm)


def q_function(x):
    """Standard normal tail probability Q(x) = P(N(0,1) > x).

    Computed through the complementary error function, which stays accurate
    deep into the tail (plain quadrature of the density loses the tail).
    Accepts scalars or arrays.
    """
    out = 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
    if np.ndim(x) == 0:
        return float(out)
    return out


def seeded_rng(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator for ``seed``, optionally a derived substream.

    ``seeded_rng(s, k)`` gives an independent stream per ``(s, k)`` pair, so
    parallel runs and the channel / construction / sampling stages of one run
    can each own their own reproducible stream. The same arguments always
    reproduce the same draw sequence.
    """
    return np.random.default_rng([int(seed), *[int(k) for k in stream]])
