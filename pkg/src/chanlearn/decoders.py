"""Online learning of the linear decoder kernel.

The 0-1 symbol error rate is upper-bounded by a hinge surrogate summed over
ordered codeword pairs,

    (1/M) sum_j sum_{j' != j} [r - ||x_j' - G y_j||^2 + ||x_j - G y_j||^2]_+,

which is convex in G (each hinge argument is affine in G). The optimistic
learner performs two projected mirror steps per round with a Euclidean
regularizer: one from the previous round's subgradient (the hint) to pick the
kernel it plays, one from the observed subgradient to advance its auxiliary
iterate. Step sizes are self-confident, shrinking with the accumulated
squared hint error, so a slowly varying channel keeps the step size large.

When the hinge margin parameter is large enough relative to the kernel-ball
radius and the output norms, every indicator in the subgradient is active and
the subgradient no longer depends on G. That indicator-free form is the
default update; an explicit finite margin is kept for dominance checks.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .codebooks import Codebook
from .numerics import project_frobenius_ball

__all__ = [
    "SurrogateParams",
    "surrogate_loss",
    "surrogate_subgradient",
    "linearized_subgradient",
    "OptimisticDecoderLearner",
    "ls_decoder",
]


@dataclass(frozen=True)
class SurrogateParams:
    """Margin rule inputs: ball radius, output norm bound, codeword spread."""

    d_star: float
    radius: float
    output_bound: float
    horizon: int

    def margin(self) -> float:
        """Hinge margin r = 2 d* D L + 1/sqrt(T) that activates every pair."""
        return 2.0 * self.d_star * self.radius * self.output_bound + 1.0 / np.sqrt(self.horizon)

    def __post_init__(self):
        if self.radius <= 0 or self.output_bound <= 0 or self.horizon < 1:
            raise ValueError("radius and output_bound must be positive, horizon >= 1")
        if self.d_star < 1.0 / (2.0 * self.radius * self.output_bound):
            warnings.warn(
                "codeword spread d* below 1/(2 D L); margin rule gives r < 1 + 1/sqrt(T), "
                "clamping the logged surrogate margin to 1",
                stacklevel=2,
            )

    def safe_margin(self) -> float:
        return max(self.margin(), 1.0)


def _pair_hinge_args(kernel: np.ndarray, cb: Codebook, ys: np.ndarray,
                     margin: float) -> np.ndarray:
    """A[j, j'] = r - ||x_j' - G y_j||^2 + ||x_j - G y_j||^2 (diagonal zeroed)."""
    zs = ys @ kernel.T
    diff = zs[:, None, :] - cb.codewords[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    args = margin - d2 + np.diag(d2)[:, None]
    np.fill_diagonal(args, 0.0)
    return args


def _check_inputs(kernel: np.ndarray, cb: Codebook, ys, margin: float):
    if margin < 1.0:
        raise ValueError(f"margin must be >= 1, got {margin}")
    kernel = np.asarray(kernel, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if kernel.shape != (cb.dim, cb.dim):
        raise ValueError("kernel must be d x d")
    if ys.shape != (cb.n_codewords, cb.dim):
        raise ValueError(f"need one output per codeword, got shape {ys.shape}")
    return kernel, ys


def surrogate_loss(kernel: np.ndarray, cb: Codebook, ys, margin: float) -> float:
    """Pairwise hinge surrogate; dominates the 0-1 symbol error rate for r >= 1."""
    kernel, ys = _check_inputs(kernel, cb, ys, margin)
    args = _pair_hinge_args(kernel, cb, ys, margin)
    return float(np.maximum(args, 0.0).sum() / cb.n_codewords)


def surrogate_subgradient(kernel: np.ndarray, cb: Codebook, ys,
                          margin: float) -> np.ndarray:
    """Subgradient of the hinge surrogate with respect to the kernel.

    (2/M) sum over active pairs of (x_j' - x_j) y_j^T, a pair being active
    when its squared-distance gap is at most the margin.
    """
    kernel, ys = _check_inputs(kernel, cb, ys, margin)
    args = _pair_hinge_args(kernel, cb, ys, margin)
    active = (args >= 0.0).astype(float)
    np.fill_diagonal(active, 0.0)
    return _assemble_subgradient(cb.codewords, ys, active)


def linearized_subgradient(cb: Codebook, ys) -> np.ndarray:
    """Indicator-free subgradient (2/M) sum_j sum_{j' != j} (x_j' - x_j) y_j^T.

    Equals :func:`surrogate_subgradient` whenever the margin keeps every
    hinge active; it does not depend on the kernel.
    """
    ys = np.asarray(ys, dtype=float)
    if ys.shape != (cb.n_codewords, cb.dim):
        raise ValueError(f"need one output per codeword, got shape {ys.shape}")
    active = np.ones((cb.n_codewords, cb.n_codewords))
    np.fill_diagonal(active, 0.0)
    return _assemble_subgradient(cb.codewords, ys, active)


def _assemble_subgradient(codewords: np.ndarray, ys: np.ndarray,
                          active: np.ndarray) -> np.ndarray:
    # row j of s: sum_{j'} active[j, j'] (x_j' - x_j)
    s = active @ codewords - active.sum(axis=1, keepdims=True) * codewords
    m = codewords.shape[0]
    return (2.0 / m) * (s.T @ ys)


class OptimisticDecoderLearner:
    """Two-step mirror-descent learner for the decoder kernel.

    With hints enabled, each round plays the projected step taken from the
    previous round's subgradient, then advances the auxiliary iterate with
    the observed one. With ``use_hint=False`` the hint stays zero and the
    iteration reduces exactly to projected online gradient descent with
    self-confident steps built from raw gradient norms.
    """

    def __init__(self, dim: int, radius: float, params: SurrogateParams,
                 use_hint: bool = True, explicit_margin: float | None = None):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = dim
        self.radius = radius
        self.params = params
        self.use_hint = use_hint
        self.explicit_margin = explicit_margin
        self.kernel = np.zeros((dim, dim))
        self.aux = np.zeros((dim, dim))
        self.hint = np.zeros((dim, dim))
        self.cum_sq_dev = 0.0
        self.t = 1

    def step_size(self) -> float:
        return self.radius / np.sqrt(1.0 + self.cum_sq_dev)

    def _gradient(self, kernel: np.ndarray, cb: Codebook, ys) -> np.ndarray:
        if self.explicit_margin is None:
            return linearized_subgradient(cb, ys)
        return surrogate_subgradient(kernel, cb, ys, self.explicit_margin)

    def round(self, cb: Codebook, ys) -> tuple[np.ndarray, dict]:
        """Play a kernel for this round's outputs; returns (kernel, log extras)."""
        eta = self.step_size()
        played = project_frobenius_ball(self.aux - eta * self.hint, self.radius)
        grad = self._gradient(played, cb, ys)
        self.aux = project_frobenius_ball(self.aux - eta * grad, self.radius)
        deviation = float(np.linalg.norm(grad - self.hint))
        self.cum_sq_dev += deviation ** 2
        if self.use_hint:
            self.hint = grad
        margin = self.explicit_margin if self.explicit_margin is not None else self.params.safe_margin()
        sur = surrogate_loss(played, cb, ys, margin)
        self.kernel = played
        self.t += 1
        return played, {"eta": eta, "grad_dev": deviation, "surrogate": sur}


def ls_decoder(cb: Codebook, ys, ridge: float = 1e-8,
               radius: float | None = None) -> np.ndarray:
    """Least-squares baseline: estimate the gain from this round, invert it.

    Fits H_hat = Y X^T (X X^T + ridge I)^-1 on the training pairs, then
    returns the ridge-regularized pseudo-inverse of H_hat, optionally
    projected onto the Frobenius ball. With ridge = 0 an exactly singular
    system raises ``numpy.linalg.LinAlgError``.
    """
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    ys = np.asarray(ys, dtype=float)
    if ys.shape != (cb.n_codewords, cb.dim):
        raise ValueError(f"need one output per codeword, got shape {ys.shape}")
    x = cb.codewords.T
    y = ys.T
    eye = np.eye(cb.dim)
    gram = x @ x.T + ridge * eye
    h_hat = np.linalg.solve(gram, (y @ x.T).T).T
    kernel = np.linalg.solve(h_hat.T @ h_hat + ridge * eye, h_hat.T)
    if radius is not None:
        kernel = project_frobenius_ball(kernel, radius)
    return kernel
