"""Mixture sampling and Markov channel dynamics."""

import numpy as np
import pytest

from chanlearn.channels import (FadingChannelState, MixingSchedule,
                                MixtureDistribution, NoiseChannelState,
                                fading_step, make_mixture, noise_step,
                                sample_mixture, transmit_additive,
                                transmit_fading, transmit_fading_block)
from chanlearn.numerics import seeded_rng


class TestMakeMixture:
    def test_degenerate_single_component(self):
        dist = make_mixture("gaussian", 1, 0.0, seeded_rng(0))
        assert dist.n_components == 1
        assert dist.weights[0] == pytest.approx(1.0, abs=1e-12)
        assert dist.means[0] == 0.0
        assert dist.scales[0] == 1.0

    def test_three_component_gaussian(self):
        dist = make_mixture("gaussian", 3, 0.1, seeded_rng(1))
        assert dist.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(dist.weights >= 0)
        assert np.all((dist.means >= 0) & (dist.means <= 0.1))

    def test_laplace_mean_range(self):
        dist = make_mixture("laplace", 3, 0.7, seeded_rng(2))
        assert dist.kind == "laplace"
        assert np.all((dist.means >= 0) & (dist.means <= 0.7))

    def test_zero_components_rejected(self):
        with pytest.raises(ValueError):
            make_mixture("gaussian", 0, 0.1, seeded_rng(3))

    def test_negative_rho_rejected(self):
        with pytest.raises(ValueError):
            make_mixture("gaussian", 2, -0.1, seeded_rng(3))


class TestSampleMixture:
    def test_standard_normal_moments(self):
        dist = MixtureDistribution("gaussian", [1.0], [0.0], [1.0])
        x = sample_mixture(dist, seeded_rng(4), size=100_000)
        assert abs(x.mean()) < 0.02
        assert abs(x.var() - 1.0) < 0.05

    def test_laplace_location(self):
        # Laplace(5, 1) has mean 5 and variance 2
        dist = MixtureDistribution("laplace", [1.0], [5.0], [1.0])
        x = sample_mixture(dist, seeded_rng(5), size=100_000)
        assert abs(x.mean() - 5.0) < 0.05
        assert abs(x.var() - 2.0) < 0.1

    def test_degenerate_weights_pick_one_component(self):
        dist = MixtureDistribution("gaussian", [1.0, 0.0], [0.0, 100.0], [1.0, 1.0])
        x = sample_mixture(dist, seeded_rng(6), size=10_000)
        assert np.all(np.abs(x) < 10)  # never from the mean-100 component

    def test_scalar_draw(self):
        dist = MixtureDistribution("gaussian", [1.0], [0.0], [1.0])
        assert isinstance(sample_mixture(dist, seeded_rng(7)), float)


class TestMixingSchedule:
    def test_geometric_values_exact(self):
        sched = MixingSchedule("geometric", 0.96)
        for t in (1, 2, 5, 10):
            assert sched.mu_at(t) == 0.96 ** t

    def test_constant_values(self):
        sched = MixingSchedule("constant", 0.05)
        assert sched.mu_at(1) == sched.mu_at(1000) == 0.05

    def test_partial_survival_products_nonincreasing(self):
        sched = MixingSchedule("geometric", 0.9)
        prods = np.cumprod([1 - sched.mu_at(t) for t in range(1, 50)])
        assert np.all(np.diff(prods) <= 0)

    def test_mu_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            MixingSchedule("constant", 1.5)
        with pytest.raises(ValueError):
            MixingSchedule("geometric", -0.1)


def _gaussian(scale=1.0):
    return MixtureDistribution("gaussian", [1.0], [0.0], [scale])


class TestFadingStep:
    def test_frozen_channel_at_mu_zero(self):
        state = FadingChannelState(1, np.eye(3), MixingSchedule("constant", 0.0),
                                   _gaussian(), 0.1)
        nxt = fading_step(state, seeded_rng(8))
        np.testing.assert_array_equal(nxt.gain, state.gain)
        assert nxt.t == 2

    def test_memoryless_at_mu_one(self):
        # with full mixing the successor ignores the current gain entirely
        sched = MixingSchedule("constant", 1.0)
        a = FadingChannelState(1, np.full((3, 3), 1e6), sched, _gaussian(), 0.0)
        b = FadingChannelState(1, np.zeros((3, 3)), sched, _gaussian(), 0.0)
        ga = fading_step(a, seeded_rng(9)).gain
        gb = fading_step(b, seeded_rng(9)).gain
        np.testing.assert_array_equal(ga, gb)
        assert np.all(np.abs(ga) < 100)

    def test_entrywise_variance_stays_bounded(self):
        # geometric mixing of unit-variance states never inflates the variance:
        # var_{t+1} = (1-mu_t) var_t + mu_t var_innov keeps it near 1
        rng = seeded_rng(10)
        finals = []
        for _ in range(100):
            innov = make_mixture("gaussian", 3, 0.1, rng)
            state = FadingChannelState(1, rng.standard_normal((3, 3)),
                                       MixingSchedule("geometric", 0.96), innov, 0.0)
            for _ in range(200):
                state = fading_step(state, rng)
            finals.append(state.gain)
        entry_var = np.stack(finals).var(axis=0)
        assert entry_var.max() < 2.0


class TestNoiseStep:
    def test_frozen_at_mu_zero(self):
        state = NoiseChannelState(1, np.array([1.0, -2.0]),
                                  MixingSchedule("constant", 0.0), _gaussian())
        nxt = noise_step(state, seeded_rng(11))
        np.testing.assert_array_equal(nxt.noise, state.noise)

    def test_memoryless_at_mu_one(self):
        sched = MixingSchedule("constant", 1.0)
        a = NoiseChannelState(1, np.full(4, 1e6), sched, _gaussian())
        b = NoiseChannelState(1, np.zeros(4), sched, _gaussian())
        za = noise_step(a, seeded_rng(12)).noise
        zb = noise_step(b, seeded_rng(12)).noise
        np.testing.assert_array_equal(za, zb)

    def test_stationary_variance(self):
        # AR recursion var' = (1-mu) var + mu gives stationary variance 1
        rng = seeded_rng(13)
        state = NoiseChannelState(1, rng.standard_normal(8),
                                  MixingSchedule("constant", 0.5), _gaussian())
        samples = []
        for t in range(100_000):
            state = noise_step(state, rng)
            if t >= 100:
                samples.append(state.noise)
        var = np.concatenate(samples).var()
        assert abs(var - 1.0) < 0.05


class TestTransmit:
    def test_noiseless_identity(self):
        state = FadingChannelState(1, np.eye(2), MixingSchedule("constant", 0.0),
                                   _gaussian(), 0.0)
        x = np.array([0.3, -0.7])
        np.testing.assert_array_equal(transmit_fading(state, x, seeded_rng(14)), x)

    def test_noiseless_scaling(self):
        state = FadingChannelState(1, 2 * np.eye(2), MixingSchedule("constant", 0.0),
                                   _gaussian(), 0.0)
        y = transmit_fading(state, np.array([1.0, 1.0]), seeded_rng(15))
        np.testing.assert_allclose(y, [2.0, 2.0], atol=1e-15)

    def test_white_noise_energy(self):
        # E||w||^2 = d sigma^2 = 8 for sigma = 1, d = 8
        state = FadingChannelState(1, np.zeros((8, 8)), MixingSchedule("constant", 0.0),
                                   _gaussian(), 1.0)
        ys = transmit_fading_block(state, np.zeros((100_000, 8)), seeded_rng(16))
        energy = np.einsum("ij,ij->i", ys, ys).mean()
        assert abs(energy - 8.0) < 0.16  # within 2%

    def test_round_coherence(self):
        # two transmissions within the same round see the same gain
        rng = seeded_rng(17)
        state = FadingChannelState(1, rng.standard_normal((3, 3)),
                                   MixingSchedule("constant", 0.5), _gaussian(), 0.0)
        x = np.array([1.0, 2.0, 3.0])
        y1 = transmit_fading(state, x, rng)
        y2 = transmit_fading(state, x, rng)
        np.testing.assert_array_equal(y1, y2)

    def test_dimension_mismatch(self):
        state = FadingChannelState(1, np.eye(3), MixingSchedule("constant", 0.0),
                                   _gaussian(), 0.0)
        with pytest.raises(ValueError):
            transmit_fading(state, np.zeros(2), seeded_rng(18))

    def test_additive_identities(self):
        state = NoiseChannelState(1, np.zeros(2), MixingSchedule("constant", 0.0),
                                  _gaussian())
        x = np.array([1.0, 2.0])
        np.testing.assert_array_equal(transmit_additive(state, x), x)
        state = NoiseChannelState(1, np.array([0.5, -0.5]),
                                  MixingSchedule("constant", 0.0), _gaussian())
        np.testing.assert_array_equal(transmit_additive(state, np.zeros(2)), state.noise)
        np.testing.assert_allclose(transmit_additive(state, x), [1.5, 1.5], atol=1e-15)

    def test_additive_dimension_mismatch(self):
        state = NoiseChannelState(1, np.zeros(3), MixingSchedule("constant", 0.0),
                                  _gaussian())
        with pytest.raises(ValueError):
            transmit_additive(state, np.zeros(2))


class TestStaticVariants:
    def test_rayleigh_as_full_mixing(self):
        # i.i.d. redraw each round: constant mu = 1 plus N(0, 1/d) innovation
        d = 8
        innov = _gaussian(1.0 / np.sqrt(d))
        sched = MixingSchedule("constant", 1.0)
        rng = seeded_rng(19)
        state = FadingChannelState(1, np.zeros((d, d)), sched, innov, 0.0)
        gains = []
        for _ in range(300):
            state = fading_step(state, rng)
            gains.append(state.gain)
        entries = np.stack(gains).ravel()
        assert abs(entries.var() - 1.0 / d) < 0.01
        assert abs(entries.mean()) < 0.01
        # consecutive rounds are uncorrelated
        flat = np.stack([g.ravel() for g in gains])
        corr = np.corrcoef(flat[:-1].ravel(), flat[1:].ravel())[0, 1]
        assert abs(corr) < 0.05

    def test_awgn_as_full_mixing(self):
        sched = MixingSchedule("constant", 1.0)
        rng = seeded_rng(20)
        state = NoiseChannelState(1, np.zeros(6), sched, _gaussian(1.0))
        zs = []
        for _ in range(2000):
            state = noise_step(state, rng)
            zs.append(state.noise)
        entries = np.stack(zs).ravel()
        assert abs(entries.var() - 1.0) < 0.05
        assert abs(entries.mean()) < 0.05
