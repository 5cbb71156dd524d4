"""Time-correlated channel simulators.

Two channel families are modeled, both first-order Markov:

* a fading channel ``y = H x + w`` whose gain matrix mixes with a fresh
  innovation each round: ``H' = sqrt(1 - mu_t) H + sqrt(mu_t) E``;
* an additive-noise channel ``y = x + z`` whose noise vector follows the
  analogous recursion.

Innovation entries are drawn i.i.d. from a Gaussian or Laplace mixture.
Static Rayleigh fading and AWGN channels are the ``mu_t = 1`` special case
(state fully replaced each round) with a single-component Gaussian
innovation, so they need no code of their own.

Within a round the gain ``H`` (resp. noise ``z``) is held fixed for every
codeword of the training sequence; only the white noise ``w`` of the fading
channel is redrawn per transmitted codeword.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "MixtureDistribution",
    "MixingSchedule",
    "FadingChannelState",
    "NoiseChannelState",
    "make_mixture",
    "sample_mixture",
    "fading_step",
    "noise_step",
    "transmit_fading",
    "transmit_fading_block",
    "transmit_additive",
]


@dataclass(frozen=True)
class MixtureDistribution:
    """Finite mixture of Gaussian or Laplace components.

    kind: "gaussian" or "laplace"
    weights: component probabilities, sum to 1
    means: component locations
    scales: per-component std (Gaussian) or diversity (Laplace), all > 0
    """

    kind: str
    weights: np.ndarray
    means: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "scales", np.asarray(self.scales, dtype=float))
        if self.kind not in ("gaussian", "laplace"):
            raise ValueError(f"unknown mixture kind: {self.kind!r}")
        k = self.weights.shape[0]
        if k < 1 or self.means.shape[0] != k or self.scales.shape[0] != k:
            raise ValueError("weights, means and scales must share one length >= 1")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if np.any(self.scales <= 0):
            raise ValueError("scales must be positive")

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class MixingSchedule:
    """Mixing factor sequence mu_t: geometric (mu^t) or constant (mu)."""

    mode: str
    mu: float

    def __post_init__(self):
        if self.mode not in ("geometric", "constant"):
            raise ValueError(f"unknown schedule mode: {self.mode!r}")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")

    def mu_at(self, t: int) -> float:
        """Mixing factor used when stepping from round t to t + 1 (t >= 1)."""
        if self.mode == "geometric":
            return self.mu ** t
        return self.mu


@dataclass
class FadingChannelState:
    """Round-indexed fading channel: current d x d gain plus its dynamics."""

    t: int
    gain: np.ndarray
    schedule: MixingSchedule
    innovation: MixtureDistribution
    sigma_w: float

    def __post_init__(self):
        self.gain = np.asarray(self.gain, dtype=float)
        if self.gain.ndim != 2 or self.gain.shape[0] != self.gain.shape[1]:
            raise ValueError("gain must be a square matrix")
        if not np.all(np.isfinite(self.gain)):
            raise ValueError("gain must be finite")
        if self.sigma_w < 0:
            raise ValueError("sigma_w must be nonnegative")

    @property
    def dim(self) -> int:
        return self.gain.shape[0]


@dataclass
class NoiseChannelState:
    """Round-indexed additive-noise channel: current noise vector plus dynamics."""

    t: int
    noise: np.ndarray
    schedule: MixingSchedule
    innovation: MixtureDistribution

    def __post_init__(self):
        self.noise = np.asarray(self.noise, dtype=float)
        if self.noise.ndim != 1:
            raise ValueError("noise must be a vector")
        if not np.all(np.isfinite(self.noise)):
            raise ValueError("noise must be finite")

    @property
    def dim(self) -> int:
        return self.noise.shape[0]


def make_mixture(kind: str, n_components: int, rho: float,
                 rng: np.random.Generator) -> MixtureDistribution:
    """Draw a random mixture: Dirichlet(1,..,1) weights, Uniform(0, rho) means.

    Component scales are fixed at 1; ``rho`` controls how far the innovation
    mean can drift from zero and hence how much the channel wanders.
    """
    if n_components < 1:
        raise ValueError(f"n_components must be >= 1, got {n_components}")
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    weights = rng.dirichlet(np.ones(n_components))
    means = rng.uniform(0.0, rho, size=n_components)
    return MixtureDistribution(kind, weights, means, np.ones(n_components))


def sample_mixture(dist: MixtureDistribution, rng: np.random.Generator,
                   size=None):
    """Sample the mixture: pick a component by weight, then sample it.

    ``size=None`` returns a scalar; otherwise an array of i.i.d. draws with
    the requested shape.
    """
    shape = () if size is None else size
    idx = rng.choice(dist.n_components, size=shape, p=dist.weights)
    loc = dist.means[idx]
    scale = dist.scales[idx]
    if dist.kind == "gaussian":
        out = rng.normal(loc, scale)
    else:
        out = rng.laplace(loc, scale)
    if size is None:
        return float(out)
    return out


def fading_step(state: FadingChannelState,
                rng: np.random.Generator) -> FadingChannelState:
    """Advance the gain one round: H' = sqrt(1-mu_t) H + sqrt(mu_t) E."""
    mu = state.schedule.mu_at(state.t)
    innov = sample_mixture(state.innovation, rng, size=state.gain.shape)
    gain = np.sqrt(1.0 - mu) * state.gain + np.sqrt(mu) * innov
    return replace(state, t=state.t + 1, gain=gain)


def noise_step(state: NoiseChannelState,
               rng: np.random.Generator) -> NoiseChannelState:
    """Advance the noise one round: z' = sqrt(1-mu_t) z + sqrt(mu_t) e."""
    mu = state.schedule.mu_at(state.t)
    innov = sample_mixture(state.innovation, rng, size=state.noise.shape)
    noise = np.sqrt(1.0 - mu) * state.noise + np.sqrt(mu) * innov
    return replace(state, t=state.t + 1, noise=noise)


def transmit_fading(state: FadingChannelState, x: np.ndarray,
                    rng: np.random.Generator) -> np.ndarray:
    """One codeword through the fading channel: H x + w, w ~ N(0, sigma_w^2 I).

    The gain is read from the state, so every transmission within the same
    round sees the same H; the white noise is fresh per call.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (state.dim,):
        raise ValueError(f"codeword dimension {x.shape} does not match channel dim {state.dim}")
    w = rng.normal(0.0, state.sigma_w, size=state.dim) if state.sigma_w > 0 else 0.0
    return state.gain @ x + w


def transmit_fading_block(state: FadingChannelState, xs: np.ndarray,
                          rng: np.random.Generator) -> np.ndarray:
    """Whole training sequence through the channel in one round.

    Rows of ``xs`` are codewords; all share the round's gain, each gets its
    own white-noise draw. Equivalent to M calls of :func:`transmit_fading`
    up to RNG call order.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2 or xs.shape[1] != state.dim:
        raise ValueError(f"codeword block shape {xs.shape} does not match channel dim {state.dim}")
    ys = xs @ state.gain.T
    if state.sigma_w > 0:
        ys = ys + rng.normal(0.0, state.sigma_w, size=xs.shape)
    return ys


def transmit_additive(state: NoiseChannelState, x: np.ndarray) -> np.ndarray:
    """One codeword through the additive channel: x + z (round-shared z)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (state.dim,):
        raise ValueError(f"codeword dimension {x.shape} does not match channel dim {state.dim}")
    return x + state.noise
