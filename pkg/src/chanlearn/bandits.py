"""Codebook selection as an adversarial multi-armed bandit.

The selector keeps a probability vector over the codebook family and updates
it by mirror descent under a log-barrier regularizer, which confines iterates
to the strict simplex interior. Each round performs two Bregman steps: one
from per-arm hints (the most recent observed loss of every arm) to form the
sampling distribution, one from an importance-weighted loss estimate to
advance the auxiliary point. The estimate leaves unchosen coordinates at
their hints and corrects only the chosen one, which makes it unbiased and
low-variance whenever the hints are accurate, i.e. when the channel is
slowly varying.

A Bregman step with gradient g from interior point w solves

    w_i(lam) = 1 / (1/w_prev_i + eta (g_i - lam)),   sum_i w_i(lam) = 1,

for the unique multiplier lam keeping all denominators positive. The sum is
strictly increasing in lam with a pole at min_i(g_i + 1/(eta w_prev_i)), so a
doubling bracket plus bisection always converges.

EXP3 and uniform-random selection are included as baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "THEORY_MAX_ETA",
    "SolverError",
    "logbarrier_bregman_step",
    "loss_estimator",
    "BanditRoundLog",
    "LogBarrierBandit",
    "Exp3Bandit",
    "random_select",
]

# Largest learning rate for which the regret analysis of the log-barrier
# selector holds; the default learner uses it unless told otherwise.
THEORY_MAX_ETA = 1.0 / 162.0


class SolverError(RuntimeError):
    """Raised when the simplex step solver fails to converge."""


def _check_interior(w: np.ndarray, what: str = "simplex point") -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.shape[0] < 1:
        raise ValueError(f"{what} must be a nonempty vector")
    if np.any(w <= 0):
        raise ValueError(f"{what} must be strictly positive")
    if abs(w.sum() - 1.0) > 1e-8:
        raise ValueError(f"{what} must sum to 1, got {w.sum()!r}")
    return w


def logbarrier_bregman_step(w_prev: np.ndarray, grad: np.ndarray, eta: float,
                            tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Minimize <w, grad> + B(w, w_prev) over the simplex (log-barrier B).

    Returns the unique interior minimizer, solved to |sum(w) - 1| <= tol by
    safeguarded bisection on the simplex multiplier.
    """
    w_prev = _check_interior(w_prev, "w_prev")
    grad = np.asarray(grad, dtype=float)
    if grad.shape != w_prev.shape:
        raise ValueError("gradient shape does not match simplex point")
    if not np.all(np.isfinite(grad)):
        raise ValueError("gradient must be finite")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if np.all(grad == grad[0]):
        # A constant gradient is absorbed entirely by the multiplier.
        return w_prev.copy()

    base = 1.0 / w_prev + eta * grad
    # Denominators at multiplier lam are base - eta*lam, positive for lam below
    # the pole min(base)/eta. Solve in the gap above the pole-shifted origin:
    # denom_i(gap) = (base_i - min(base)) + eta*gap, which is exact near the
    # pole where the direct form would cancel. total(gap) decreases in gap.
    shifted = base - base.min()

    def total(gap: float) -> float:
        return float(np.sum(1.0 / (shifted + eta * gap)))

    iters = 0
    gap_lo = 1.0
    while total(gap_lo) < 1.0:
        gap_lo *= 0.5
        iters += 1
        if iters > max_iter:
            raise SolverError("failed to bracket the simplex multiplier (near pole)")
    gap_hi = max(2.0 * gap_lo, 2.0)
    while total(gap_hi) > 1.0:
        gap_hi *= 2.0
        iters += 1
        if iters > max_iter:
            raise SolverError("failed to bracket the simplex multiplier (far side)")

    while iters < max_iter:
        gap = 0.5 * (gap_lo + gap_hi)
        s = total(gap)
        if abs(s - 1.0) <= tol:
            return 1.0 / (shifted + eta * gap)
        if s > 1.0:
            gap_lo = gap
        else:
            gap_hi = gap
        iters += 1
    raise SolverError(f"simplex step did not reach tolerance {tol} in {max_iter} iterations")


def loss_estimator(loss_obs: float, hints: np.ndarray, w: np.ndarray,
                   chosen: int) -> np.ndarray:
    """Unbiased loss-vector estimate from one observed arm.

    Every coordinate keeps its hint; the chosen one gets
    hint + (observed - hint) / w_chosen.
    """
    w = np.asarray(w, dtype=float)
    hints = np.asarray(hints, dtype=float)
    if w[chosen] <= 0:
        raise ValueError("chosen coordinate has nonpositive probability")
    out = hints.copy()
    out[chosen] = hints[chosen] + (loss_obs - hints[chosen]) / w[chosen]
    return out


def sample_categorical(w: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an index with probabilities w (normalized defensively)."""
    cdf = np.cumsum(w)
    u = rng.uniform(0.0, 1.0) * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), len(w) - 1))


@dataclass(frozen=True)
class BanditRoundLog:
    """Per-round record: round index, arm, observed loss, played weights, eta."""

    t: int
    arm: int
    loss: float
    weights: np.ndarray
    eta: float


class LogBarrierBandit:
    """Optimistic log-barrier selector over N arms.

    ``eta`` defaults to the largest theory-compliant rate. ``doubling=True``
    enables the restart schedule: whenever the cumulative squared hint error
    crosses the next power of two, the auxiliary point resets to uniform and
    eta halves (restarts never increase eta).
    """

    def __init__(self, n_arms: int, eta: float = THEORY_MAX_ETA,
                 doubling: bool = False):
        if n_arms < 1:
            raise ValueError("need at least one arm")
        if eta <= 0:
            raise ValueError("eta must be positive")
        self.n_arms = n_arms
        self.eta = eta
        self.doubling = doubling
        self.aux = np.full(n_arms, 1.0 / n_arms)
        self.hints = np.zeros(n_arms)
        self.weights: np.ndarray | None = None
        self.cum_sq_hint_err = 0.0
        self.next_restart = 1.0
        self.t = 1
        self.round_log: list[BanditRoundLog] = []

    def choose_arm(self, rng: np.random.Generator) -> int:
        """Form this round's distribution from the hints and sample an arm."""
        self.weights = logbarrier_bregman_step(self.aux, self.hints, self.eta)
        return sample_categorical(self.weights, rng)

    def update_after_loss(self, chosen: int, loss_obs: float) -> None:
        """Advance the auxiliary point and refresh the chosen arm's hint."""
        if self.weights is None:
            raise RuntimeError("choose_arm must be called before update_after_loss")
        est = loss_estimator(loss_obs, self.hints, self.weights, chosen)
        self.aux = logbarrier_bregman_step(self.aux, est, self.eta)
        self.cum_sq_hint_err += (loss_obs - self.hints[chosen]) ** 2
        self.hints[chosen] = loss_obs
        self.round_log.append(
            BanditRoundLog(self.t, chosen, float(loss_obs), self.weights.copy(), self.eta))
        self.t += 1
        if self.doubling and self.cum_sq_hint_err >= self.next_restart:
            self.eta *= 0.5
            self.aux = np.full(self.n_arms, 1.0 / self.n_arms)
            while self.next_restart <= self.cum_sq_hint_err:
                self.next_restart *= 2.0


class Exp3Bandit:
    """EXP3 baseline: exponential weights over importance-weighted losses."""

    def __init__(self, n_arms: int, horizon: int):
        if n_arms < 1 or horizon < 1:
            raise ValueError("need at least one arm and one round")
        self.n_arms = n_arms
        self.eta = np.sqrt(2.0 * np.log(n_arms) / (n_arms * horizon)) if n_arms > 1 else 0.0
        self.cum_est = np.zeros(n_arms)
        self.weights: np.ndarray | None = None
        self.t = 1
        self.round_log: list[BanditRoundLog] = []

    def choose_arm(self, rng: np.random.Generator) -> int:
        logits = -self.eta * (self.cum_est - self.cum_est.min())
        w = np.exp(logits)
        self.weights = w / w.sum()
        return sample_categorical(self.weights, rng)

    def update_after_loss(self, chosen: int, loss_obs: float) -> None:
        if self.weights is None:
            raise RuntimeError("choose_arm must be called before update_after_loss")
        self.cum_est[chosen] += loss_obs / self.weights[chosen]
        self.round_log.append(
            BanditRoundLog(self.t, chosen, float(loss_obs), self.weights.copy(), self.eta))
        self.t += 1


def random_select(n_arms: int, rng: np.random.Generator) -> int:
    """Uniform arm choice."""
    if n_arms < 1:
        raise ValueError("need at least one arm")
    return int(rng.integers(n_arms))
