"""Codebook construction, decoding, and symbol-error rates."""

import numpy as np
import pytest

from chanlearn.codebooks import (Codebook, codebook_from_dict, codebook_to_dict,
                                 generate_super_codebook, load_codebook,
                                 make_constant_modulus_codebook,
                                 max_pairwise_distance, nn_decode, save_codebook,
                                 ser_codebook, ser_decoder)
from chanlearn.numerics import seeded_rng

ANTIPODAL = Codebook([[1.0, 0.0], [-1.0, 0.0]], 1.0, "constant_modulus")


class TestConstantModulusCodebook:
    def test_norm_constraint(self):
        cb = make_constant_modulus_codebook(2, 2, 1.0, seeded_rng(0))
        np.testing.assert_allclose(np.linalg.norm(cb.codewords, axis=1), 1.0, atol=1e-9)

    def test_large_codebook_spread_bound(self):
        cb = make_constant_modulus_codebook(64, 8, 1.0, seeded_rng(1))
        assert cb.n_codewords == 64
        assert max_pairwise_distance(cb) <= 2.0 + 1e-12

    def test_deterministic_under_seed(self):
        a = make_constant_modulus_codebook(8, 4, 1.0, seeded_rng(2))
        b = make_constant_modulus_codebook(8, 4, 1.0, seeded_rng(2))
        np.testing.assert_array_equal(a.codewords, b.codewords)

    def test_too_few_codewords_rejected(self):
        with pytest.raises(ValueError):
            make_constant_modulus_codebook(1, 4, 1.0, seeded_rng(3))


class TestSuperCodebook:
    def test_hundred_codebook_family(self):
        sc = generate_super_codebook(100, 16, 8, 1.0, seeded_rng(4))
        assert sc.n_codebooks == 100
        for cb in sc.entries:
            assert np.all(np.linalg.norm(cb.codewords, axis=1) <= 1.0 + 1e-12)

    def test_singleton(self):
        sc = generate_super_codebook(1, 4, 2, 1.0, seeded_rng(5))
        assert sc.n_codebooks == 1

    def test_entries_within_elementwise_range(self):
        sc = generate_super_codebook(10, 8, 4, 1.0, seeded_rng(6))
        bound = 1.0 / np.sqrt(4)
        for cb in sc.entries:
            assert np.all(np.abs(cb.codewords) < bound)

    def test_mixed_shapes_rejected(self):
        from chanlearn.codebooks import SuperCodebook
        a = make_constant_modulus_codebook(4, 2, 1.0, seeded_rng(7))
        b = make_constant_modulus_codebook(4, 3, 1.0, seeded_rng(7))
        with pytest.raises(ValueError):
            SuperCodebook((a, b))


class TestNNDecode:
    def test_exact_codeword_match(self):
        cb = make_constant_modulus_codebook(6, 3, 1.0, seeded_rng(8))
        assert nn_decode(cb, cb.codewords[3], np.eye(3)) == 3

    def test_zero_kernel_ties_break_to_smallest_index(self):
        assert nn_decode(ANTIPODAL, np.array([0.2, 5.0]), np.zeros((2, 2))) == 0

    def test_two_ary_distance_comparison(self):
        # distances^2: (1-0.2)^2 + 25 = 25.64 vs (-1-0.2)^2 + 25 = 26.44
        assert nn_decode(ANTIPODAL, np.array([0.2, 5.0])) == 0

    def test_kernel_rescaling_invariance(self):
        rng = seeded_rng(9)
        cb = make_constant_modulus_codebook(8, 4, 1.0, rng)
        for _ in range(20):
            g = rng.standard_normal((4, 4))
            y = rng.standard_normal(4)
            assert nn_decode(cb, y, g) == nn_decode(cb, y, 3.7 * g)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            nn_decode(ANTIPODAL, np.zeros(3))


class TestSerDecoder:
    def test_noiseless_identity_channel(self):
        cb = make_constant_modulus_codebook(8, 4, 1.0, seeded_rng(10))
        assert ser_decoder(cb, np.eye(4), cb.codewords) == 0.0

    def test_zero_kernel_ties_count_correct(self):
        # codeword norms exactly equal in float64 so all distances tie exactly
        cw = np.vstack([np.eye(4), -np.eye(4)])
        cb = Codebook(cw, 1.0, "constant_modulus")
        ys = seeded_rng(12).standard_normal((8, 4))
        assert ser_decoder(cb, np.zeros((4, 4)), ys) == 0.0

    def test_half_errors(self):
        # first output lands nearer the wrong codeword, second is exact
        ys = np.array([[-0.1, 0.0], [-1.0, 0.0]])
        assert ser_decoder(ANTIPODAL, np.eye(2), ys) == 0.5

    def test_values_are_multiples_of_inverse_m(self):
        rng = seeded_rng(13)
        cb = make_constant_modulus_codebook(5, 3, 1.0, rng)
        for _ in range(50):
            val = ser_decoder(cb, rng.standard_normal((3, 3)),
                              rng.standard_normal((5, 3)))
            assert min(abs(val - k / 5) for k in range(6)) < 1e-12

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            ser_decoder(ANTIPODAL, np.eye(2), np.zeros((3, 2)))


class TestSerCodebook:
    def test_zero_noise(self):
        cb = make_constant_modulus_codebook(8, 4, 1.0, seeded_rng(14))
        assert ser_codebook(cb, cb.codewords) == 0.0

    def test_midpoint_tie_counts_correct(self):
        ys = ANTIPODAL.codewords + np.array([-1.0, 0.0])
        assert ser_codebook(ANTIPODAL, ys) == 0.0

    def test_half_errors_under_shared_offset(self):
        ys = ANTIPODAL.codewords + np.array([-1.5, 0.0])
        assert ser_codebook(ANTIPODAL, ys) == 0.5


class TestMaxPairwiseDistance:
    def test_antipodal_pair(self):
        assert max_pairwise_distance(ANTIPODAL) == pytest.approx(2.0, abs=1e-15)

    def test_constant_modulus_bound(self):
        cb = make_constant_modulus_codebook(16, 5, 1.3, seeded_rng(15))
        assert max_pairwise_distance(cb) <= 2 * 1.3 + 1e-12

    def test_three_codewords_enumeration(self):
        cb = Codebook([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]], 1.0, "constant_modulus")
        # pairwise distances: sqrt(2), 2, sqrt(2)
        assert max_pairwise_distance(cb) == pytest.approx(2.0, abs=1e-15)


class TestSerialization:
    def test_round_trip_dict(self):
        cb = make_constant_modulus_codebook(6, 4, 1.0, seeded_rng(16))
        again = codebook_from_dict(codebook_to_dict(cb))
        np.testing.assert_array_equal(again.codewords, cb.codewords)
        assert again.constraint == cb.constraint
        assert again.gamma_x == cb.gamma_x

    def test_round_trip_file(self, tmp_path):
        cb = generate_super_codebook(1, 4, 3, 1.0, seeded_rng(17)).entries[0]
        path = tmp_path / "cb.json"
        save_codebook(cb, path)
        again = load_codebook(path)
        np.testing.assert_array_equal(again.codewords, cb.codewords)

    def test_shape_mismatch_rejected(self):
        doc = codebook_to_dict(ANTIPODAL)
        doc["M"] = 3
        with pytest.raises(ValueError):
            codebook_from_dict(doc)

    def test_constraint_violation_rejected(self):
        with pytest.raises(ValueError):
            Codebook([[1.0, 0.0], [2.0, 0.0]], 1.0, "constant_modulus")
        with pytest.raises(ValueError):
            Codebook([[3.0, 0.0]], 1.0, "power")
