"""Codebook construction, nearest-neighbor decoding, and symbol error rates.

A codebook is M codewords in R^d under a norm constraint; a super-codebook is
an indexed family of such codebooks from which one is selected per round.
The symbol error rate of a round counts training codewords whose channel
output decodes strictly closer to some wrong codeword than to the one sent
(exact distance ties count as correct).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Codebook",
    "SuperCodebook",
    "make_constant_modulus_codebook",
    "generate_super_codebook",
    "nn_decode",
    "ser_decoder",
    "ser_codebook",
    "max_pairwise_distance",
    "codebook_to_dict",
    "codebook_from_dict",
    "save_codebook",
    "load_codebook",
]

POWER = "power"
CONSTANT_MODULUS = "constant_modulus"


@dataclass(frozen=True)
class Codebook:
    """M codewords (rows) in R^d with a power or constant-modulus constraint."""

    codewords: np.ndarray
    gamma_x: float
    constraint: str

    def __post_init__(self):
        cw = np.asarray(self.codewords, dtype=float)
        object.__setattr__(self, "codewords", cw)
        if cw.ndim != 2 or cw.shape[0] < 1:
            raise ValueError("codewords must be a nonempty (M, d) array")
        if not np.all(np.isfinite(cw)):
            raise ValueError("codewords must be finite")
        if self.constraint not in (POWER, CONSTANT_MODULUS):
            raise ValueError(f"unknown constraint: {self.constraint!r}")
        norms = np.linalg.norm(cw, axis=1)
        if self.constraint == POWER and np.any(norms > self.gamma_x + 1e-9):
            raise ValueError("power constraint violated: some codeword norm exceeds gamma_x")
        if self.constraint == CONSTANT_MODULUS and np.any(np.abs(norms - self.gamma_x) > 1e-9):
            raise ValueError("constant-modulus constraint violated")

    @property
    def n_codewords(self) -> int:
        return self.codewords.shape[0]

    @property
    def dim(self) -> int:
        return self.codewords.shape[1]


@dataclass(frozen=True)
class SuperCodebook:
    """Indexed family of codebooks sharing the same M and d."""

    entries: tuple

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("super-codebook must contain at least one codebook")
        m0, d0 = self.entries[0].n_codewords, self.entries[0].dim
        for cb in self.entries:
            if cb.n_codewords != m0 or cb.dim != d0:
                raise ValueError("all codebooks must share the same M and d")

    @property
    def n_codebooks(self) -> int:
        return len(self.entries)


def make_constant_modulus_codebook(n_codewords: int, dim: int, gamma_x: float,
                                   rng: np.random.Generator) -> Codebook:
    """Random codebook of i.i.d. normal directions scaled to norm gamma_x."""
    if n_codewords < 2:
        raise ValueError(f"need at least 2 codewords, got {n_codewords}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    raw = rng.standard_normal((n_codewords, dim))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    return Codebook(gamma_x * raw / norms, gamma_x, CONSTANT_MODULUS)


def generate_super_codebook(n_codebooks: int, n_codewords: int, dim: int,
                            gamma_x: float,
                            rng: np.random.Generator) -> SuperCodebook:
    """Family of random codebooks, entries uniform on (-gamma_x/sqrt(d), +).

    The element-wise range makes every codeword norm at most gamma_x, so the
    power constraint holds by construction.
    """
    if n_codebooks < 1:
        raise ValueError(f"need at least 1 codebook, got {n_codebooks}")
    bound = gamma_x / np.sqrt(dim)
    entries = []
    for _ in range(n_codebooks):
        cw = rng.uniform(-bound, bound, size=(n_codewords, dim))
        entries.append(Codebook(cw, gamma_x, POWER))
    return SuperCodebook(tuple(entries))


def _sq_distances(codewords: np.ndarray, points: np.ndarray) -> np.ndarray:
    """D[i, j] = ||codewords[j] - points[i]||^2 for rows of both arrays."""
    diff = points[:, None, :] - codewords[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def nn_decode(cb: Codebook, y: np.ndarray, kernel: np.ndarray | None = None) -> int:
    """Index of the codeword nearest to ``kernel @ y`` (identity if absent).

    Ties resolve to the smallest index.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (cb.dim,):
        raise ValueError(f"output dimension {y.shape} does not match codebook dim {cb.dim}")
    if kernel is not None:
        kernel = np.asarray(kernel, dtype=float)
        if kernel.shape != (cb.dim, cb.dim):
            raise ValueError("kernel must be d x d")
        y = kernel @ y
    return int(np.argmin(np.linalg.norm(cb.codewords - y, axis=1)))


def _ser(codewords: np.ndarray, zs: np.ndarray) -> float:
    """Fraction of rows j whose nearest wrong codeword strictly beats codeword j.

    ``zs`` holds the (possibly kernel-transformed) channel outputs, row j for
    transmitted codeword j. Ties count as correct.
    """
    d2 = _sq_distances(codewords, zs)
    own = np.diag(d2).copy()
    np.fill_diagonal(d2, np.inf)
    competitor = d2.min(axis=1)
    return float(np.mean(competitor < own))


def ser_decoder(cb: Codebook, kernel: np.ndarray, ys) -> float:
    """Empirical symbol error rate of a linear decoder kernel on one round.

    ``ys[j]`` is the channel output for transmitted codeword j; the decoder
    compares codewords against ``kernel @ ys[j]``.
    """
    ys = np.asarray(ys, dtype=float)
    if ys.shape != (cb.n_codewords, cb.dim):
        raise ValueError(f"need one output per codeword, got shape {ys.shape}")
    kernel = np.asarray(kernel, dtype=float)
    if kernel.shape != (cb.dim, cb.dim):
        raise ValueError("kernel must be d x d")
    return _ser(cb.codewords, ys @ kernel.T)


def ser_codebook(cb: Codebook, ys) -> float:
    """Empirical symbol error rate of a codebook under identity decoding."""
    ys = np.asarray(ys, dtype=float)
    if ys.shape != (cb.n_codewords, cb.dim):
        raise ValueError(f"need one output per codeword, got shape {ys.shape}")
    return _ser(cb.codewords, ys)


def max_pairwise_distance(cb: Codebook) -> float:
    """Largest Euclidean distance between two codewords."""
    if cb.n_codewords < 2:
        raise ValueError("need at least 2 codewords")
    d2 = _sq_distances(cb.codewords, cb.codewords)
    return float(np.sqrt(d2.max()))


def codebook_to_dict(cb: Codebook) -> dict:
    return {
        "M": cb.n_codewords,
        "d": cb.dim,
        "gamma_x": cb.gamma_x,
        "constraint": cb.constraint,
        "codewords": cb.codewords.tolist(),
    }


def codebook_from_dict(doc: dict) -> Codebook:
    cw = np.asarray(doc["codewords"], dtype=float)
    if cw.shape != (doc["M"], doc["d"]):
        raise ValueError("codeword array does not match declared M and d")
    return Codebook(cw, float(doc["gamma_x"]), doc["constraint"])


def save_codebook(cb: Codebook, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(codebook_to_dict(cb), fh)


def load_codebook(path) -> Codebook:
    with open(path, encoding="utf-8") as fh:
        return codebook_from_dict(json.load(fh))
