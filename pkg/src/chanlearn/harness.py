"""Experiment harness: per-round protocol, round records, CSV emission.

Every run derives three independent RNG substreams from its seed (channel
evolution, codebook construction, learner sampling), so different
algorithms on the same seed face bit-identical channel realizations and
reordering seed execution never changes any single seed's output.

Per round the protocol is: the channel state is fixed, the whole training
sequence is transmitted through it, the learner's played decision is scored
with the 0-1 symbol error rate, and only then does the learner see this
round's data. The least-squares baseline is the deliberate exception: it
builds its kernel from the current round's training pairs (estimation, not
online learning).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import bandits, channels, codebooks, decoders
from .config import ExperimentConfig
from .numerics import seeded_rng

__all__ = [
    "RoundRecord",
    "run_decoder_experiment",
    "run_codebook_experiment",
    "run_single_decoder",
    "run_single_codebook",
    "running_average",
    "write_csv",
    "read_csv",
]

# Substream labels hashed together with the seed.
STREAM_CHANNEL = 0
STREAM_CODEBOOK = 1
STREAM_LEARNER = 2

LS_RIDGE = 1e-8

# Hinge margin played by the mirror-descent decoder learners. The norm-bound
# margin rule keeps every pair active, which makes the surrogate linear over
# the kernel ball; its minimizer is then a ball-corner matched filter that
# never equalizes the channel. A unit margin (the smallest that still
# dominates the 0-1 loss) keeps the hinge structure alive and the learned
# kernel converges to a zero-error equalizer.
DECODER_MARGIN = 1.0


@dataclass(frozen=True)
class RoundRecord:
    """One round of one run: loss is the 0-1 symbol error rate."""

    t: int
    loss: float
    running_avg: float
    extra: dict = field(default_factory=dict)


def running_average(losses) -> list[float]:
    """Prefix means (1/t) sum_{tau<=t} loss_tau."""
    losses = list(losses)
    if not losses:
        raise ValueError("running_average needs at least one loss")
    sums = np.cumsum(np.asarray(losses, dtype=float))
    return [float(s / (i + 1)) for i, s in enumerate(sums)]


def _records_from_losses(losses, extras) -> list[RoundRecord]:
    avgs = running_average(losses)
    return [
        RoundRecord(t + 1, float(losses[t]), avgs[t], extras[t])
        for t in range(len(losses))
    ]


def _gaussian_innovation(scale: float) -> channels.MixtureDistribution:
    return channels.MixtureDistribution("gaussian", [1.0], [0.0], [scale])


def _build_fading_state(cfg: ExperimentConfig,
                        rng: np.random.Generator) -> channels.FadingChannelState:
    if cfg.channel == "rayleigh":
        # Gain redrawn i.i.d. every round with entries N(0, 1/d).
        innovation = _gaussian_innovation(1.0 / math.sqrt(cfg.d))
        schedule = channels.MixingSchedule("constant", 1.0)
        gain = channels.sample_mixture(innovation, rng, size=(cfg.d, cfg.d))
    else:
        innovation = channels.make_mixture(
            "gaussian" if cfg.dist == "gmd" else "laplace", cfg.K, cfg.rho, rng)
        schedule = channels.MixingSchedule(cfg.mu_mode, cfg.mu)
        gain = rng.standard_normal((cfg.d, cfg.d))
    return channels.FadingChannelState(1, gain, schedule, innovation, cfg.sigma_w())


def _build_noise_state(cfg: ExperimentConfig,
                       rng: np.random.Generator) -> channels.NoiseChannelState:
    if cfg.channel == "awgn":
        innovation = _gaussian_innovation(1.0)
        schedule = channels.MixingSchedule("constant", 1.0)
    else:
        innovation = channels.make_mixture(
            "gaussian" if cfg.dist == "gmd" else "laplace", cfg.K, cfg.rho, rng)
        schedule = channels.MixingSchedule(cfg.mu_mode, cfg.mu)
    noise = channels.sample_mixture(innovation, rng, size=cfg.d)
    return channels.NoiseChannelState(1, noise, schedule, innovation)


def _surrogate_params(cfg: ExperimentConfig, cb: codebooks.Codebook) -> decoders.SurrogateParams:
    gamma_h = math.sqrt(cfg.d)
    gamma_w = cfg.sigma_w() * math.sqrt(cfg.d) * 3.0
    bound = math.sqrt(2.0 * (cfg.gamma_x * gamma_h) ** 2 + 2.0 * gamma_w ** 2)
    return decoders.SurrogateParams(
        d_star=codebooks.max_pairwise_distance(cb),
        radius=cfg.D,
        output_bound=bound,
        horizon=cfg.T,
    )


def run_single_decoder(cfg: ExperimentConfig, seed: int) -> list[RoundRecord]:
    """One seed of the decoder-learning task."""
    rng_chan = seeded_rng(seed, STREAM_CHANNEL)
    rng_cb = seeded_rng(seed, STREAM_CODEBOOK)
    cb = codebooks.make_constant_modulus_codebook(cfg.M, cfg.d, cfg.gamma_x, rng_cb)
    state = _build_fading_state(cfg, rng_chan)
    learner = None
    if cfg.algorithm in ("oomd", "ogd"):
        learner = decoders.OptimisticDecoderLearner(
            cfg.d, cfg.D, _surrogate_params(cfg, cb),
            use_hint=(cfg.algorithm == "oomd"),
            explicit_margin=DECODER_MARGIN)
    losses, extras = [], []
    for _ in range(cfg.T):
        ys = channels.transmit_fading_block(state, cb.codewords, rng_chan)
        if learner is not None:
            kernel, info = learner.round(cb, ys)
            extra = {"seed": seed, "eta": float(info["eta"]),
                     "grad_dev": float(info["grad_dev"]),
                     "surrogate": float(info["surrogate"])}
        else:
            kernel = decoders.ls_decoder(cb, ys, ridge=LS_RIDGE, radius=cfg.D)
            extra = {"seed": seed}
        losses.append(codebooks.ser_decoder(cb, kernel, ys))
        extras.append(extra)
        state = channels.fading_step(state, rng_chan)
    return _records_from_losses(losses, extras)


def run_single_codebook(cfg: ExperimentConfig, seed: int) -> list[RoundRecord]:
    """One seed of the codebook-selection task."""
    rng_chan = seeded_rng(seed, STREAM_CHANNEL)
    rng_cb = seeded_rng(seed, STREAM_CODEBOOK)
    rng_learn = seeded_rng(seed, STREAM_LEARNER)
    sc = codebooks.generate_super_codebook(cfg.N, cfg.M, cfg.d, cfg.gamma_x, rng_cb)
    state = _build_noise_state(cfg, rng_chan)
    if cfg.algorithm == "oomd":
        learner = bandits.LogBarrierBandit(cfg.N, eta=cfg.eta)
    elif cfg.algorithm == "exp3":
        learner = bandits.Exp3Bandit(cfg.N, cfg.T)
    else:
        learner = None
    losses, extras = [], []
    for _ in range(cfg.T):
        if learner is not None:
            arm = learner.choose_arm(rng_learn)
        else:
            arm = bandits.random_select(cfg.N, rng_learn)
        chosen = sc.entries[arm]
        ys = chosen.codewords + state.noise
        loss = codebooks.ser_codebook(chosen, ys)
        if learner is not None:
            learner.update_after_loss(arm, loss)
            extra = {"seed": seed, "arm": arm, "eta": float(learner.eta)}
        else:
            extra = {"seed": seed, "arm": arm}
        losses.append(loss)
        extras.append(extra)
        state = channels.noise_step(state, rng_chan)
    return _records_from_losses(losses, extras)


def run_decoder_experiment(cfg: ExperimentConfig) -> list[RoundRecord]:
    """All seeds of the decoder task, concatenated (seed tagged per row)."""
    if cfg.task != "decoder":
        raise ValueError(f"config task is {cfg.task!r}, expected 'decoder'")
    records: list[RoundRecord] = []
    for seed in cfg.seeds:
        records.extend(run_single_decoder(cfg, seed))
    return records


def run_codebook_experiment(cfg: ExperimentConfig) -> list[RoundRecord]:
    """All seeds of the codebook task, concatenated (seed tagged per row)."""
    if cfg.task != "codebook":
        raise ValueError(f"config task is {cfg.task!r}, expected 'codebook'")
    records: list[RoundRecord] = []
    for seed in cfg.seeds:
        records.extend(run_single_codebook(cfg, seed))
    return records


def _format_value(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def write_csv(records: list[RoundRecord], path) -> None:
    """Emit rows as ``t,loss,running_avg,extra...`` with a header."""
    if not records:
        raise ValueError("no records to write")
    extra_keys = list(records[0].extra)
    for rec in records:
        if list(rec.extra) != extra_keys:
            raise ValueError("all records must share the same extra columns")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "loss", "running_avg", *extra_keys])
        for rec in records:
            row = [str(rec.t), _format_value(rec.loss), _format_value(rec.running_avg)]
            row.extend(_format_value(rec.extra[k]) for k in extra_keys)
            writer.writerow(row)


def _parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_csv(path) -> list[RoundRecord]:
    """Read back a file produced by :func:`write_csv`."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["t", "loss", "running_avg"]:
            raise ValueError(f"unexpected CSV header: {header}")
        extra_keys = header[3:]
        records = []
        for row in reader:
            extra = {k: _parse_value(v) for k, v in zip(extra_keys, row[3:])}
            records.append(RoundRecord(int(row[0]), float(row[1]), float(row[2]), extra))
    return records
