from fractions import Fraction as F

import numpy as np
import pytest

from detic.channel import (
    BadShapeError,
    UndefinedTopPartError,
    deinterleave,
    extract_top,
    interleave,
    interleave_expand,
    make_channel,
    signal_v,
    signal_w,
    transmit,
)
from detic.gf2 import bitvec

# Family anchor points of the region catalog.
ANCHORS = [(F(2), F(0)), (F(6, 5), F(2, 5)), (F(4, 3), F(2, 3)), (F(2), F(2, 3))]


class TestMakeChannel:
    def test_worked_example_params(self):
        ch = make_channel(3, 10, F(8, 5), F(9, 10))
        assert (ch.up_shift, ch.down_shift, ch.surviving_pipes) == (6, 1, 9)

    def test_non_integral_beta_n(self):
        with pytest.raises(BadShapeError, match="beta"):
            make_channel(3, 10, F(8, 5), F(1, 3))

    def test_too_few_pairs(self):
        with pytest.raises(BadShapeError, match="K"):
            make_channel(2, 10, F(8, 5), F(9, 10))

    @pytest.mark.parametrize("alpha,beta", [(F(5, 2), F(0)), (F(1, 2), F(0)), (F(3, 2), F(3, 2))])
    def test_out_of_range(self, alpha, beta):
        with pytest.raises(BadShapeError):
            make_channel(3, 2, alpha, beta)


class TestSignals:
    def test_up_image(self):
        ch = make_channel(3, 2, F(3, 2), F(1, 2))
        assert np.array_equal(signal_v(ch, bitvec([1, 0])), bitvec([0, 1, 0, 0]))

    def test_up_image_no_shift_at_alpha_one(self):
        ch = make_channel(3, 2, F(1), F(1, 2))
        assert np.array_equal(signal_v(ch, bitvec([1, 1])), bitvec([0, 0, 1, 1]))

    def test_up_image_full_shift(self):
        ch = make_channel(3, 1, F(2), F(0))
        assert np.array_equal(signal_v(ch, bitvec([1])), bitvec([1, 0]))

    def test_down_image(self):
        ch = make_channel(3, 2, F(3, 2), F(1, 2))
        assert np.array_equal(signal_w(ch, bitvec([1, 0])), bitvec([0, 0, 0, 1]))

    def test_down_image_vanishes_at_beta_zero(self):
        ch = make_channel(3, 2, F(3, 2), F(0))
        assert np.array_equal(signal_w(ch, bitvec([1, 1])), bitvec([0, 0, 0, 0]))

    def test_down_image_no_shift_at_beta_one(self):
        ch = make_channel(3, 2, F(3, 2), F(1))
        assert np.array_equal(signal_w(ch, bitvec([1, 0])), bitvec([0, 0, 1, 0]))

    def test_supports(self):
        # The up image occupies levels (2-a)N+1..(3-a)N, the direct image
        # N+1..2N, the down image (2-b)N+1..2N fed by the top b*N pipes.
        for alpha, beta in ANCHORS:
            n = 15
            ch = make_channel(3, n, alpha, beta)
            ones = bitvec([1] * n)
            v = signal_v(ch, ones)
            lo = int((2 - alpha) * n)
            hi = int((3 - alpha) * n)
            assert np.array_equal(np.nonzero(v)[0], np.arange(lo, hi))
            w = signal_w(ch, ones)
            assert np.array_equal(np.nonzero(w)[0], np.arange(int((2 - beta) * n), 2 * n))

    def test_images_disjoint_iff_gap_at_least_one(self):
        for n, alpha, beta in [
            (6, F(2), F(0)),
            (6, F(3, 2), F(1, 2)),
            (6, F(3, 2), F(2, 3)),
            (10, F(8, 5), F(9, 10)),
            (6, F(7, 6), F(1, 2)),
        ]:
            ch = make_channel(3, n, alpha, beta)
            ones = bitvec([1] * n)
            overlap = signal_v(ch, ones) & signal_w(ch, ones)
            assert bool(overlap.any()) == (alpha - beta < 1)


class TestExtractTop:
    def test_small_case(self):
        ch = make_channel(3, 3, F(4, 3), F(2, 3))
        assert np.array_equal(extract_top(ch, bitvec([1, 0, 1])), bitvec([1]))

    def test_undefined_at_gap_one(self):
        ch = make_channel(3, 2, F(3, 2), F(1, 2))
        with pytest.raises(UndefinedTopPartError):
            extract_top(ch, bitvec([1, 0]))

    def test_two_pipe_case(self):
        ch = make_channel(3, 6, F(3, 2), F(5, 6))
        assert np.array_equal(extract_top(ch, bitvec([1, 0, 1, 1, 0, 0])), bitvec([1, 0]))


class TestTransmit:
    def test_three_pair_single_pipe(self):
        ch = make_channel(3, 1, F(2), F(0))
        ys = transmit(ch, [bitvec([1]), bitvec([0]), bitvec([0])])
        assert [list(y) for y in ys] == [[0, 1], [0, 0], [1, 0]]

    def test_zero_in_zero_out(self):
        ch = make_channel(4, 3, F(4, 3), F(2, 3))
        ys = transmit(ch, [bitvec([0, 0, 0])] * 4)
        assert all(not y.any() for y in ys)

    def test_cyclic_relabeling(self):
        rng = np.random.default_rng(11)
        ch = make_channel(3, 5, F(7, 5), F(3, 5))
        xs = [rng.integers(0, 2, 5, dtype=np.uint8) for _ in range(3)]
        ys = transmit(ch, xs)
        ys_shifted = transmit(ch, [xs[2], xs[0], xs[1]])
        for i in range(3):
            assert np.array_equal(ys_shifted[i], ys[(i - 1) % 3])

    def test_linearity(self):
        rng = np.random.default_rng(12)
        ch = make_channel(5, 4, F(7, 4), F(1, 2))
        xs = [rng.integers(0, 2, 4, dtype=np.uint8) for _ in range(5)]
        xs2 = [rng.integers(0, 2, 4, dtype=np.uint8) for _ in range(5)]
        lhs = transmit(ch, [a ^ b for a, b in zip(xs, xs2)])
        rhs = [a ^ b for a, b in zip(transmit(ch, xs), transmit(ch, xs2))]
        for a, b in zip(lhs, rhs):
            assert np.array_equal(a, b)


class TestInterleaving:
    def test_expand_params(self):
        ch = make_channel(3, 1, F(2), F(0))
        assert interleave_expand(ch, 1) == ch
        assert interleave_expand(ch, 4).n == 4

    def test_roundtrip(self):
        rng = np.random.default_rng(13)
        vs = [rng.integers(0, 2, 6, dtype=np.uint8) for _ in range(3)]
        merged = interleave(vs)
        back = deinterleave(merged, 3)
        for a, b in zip(vs, back):
            assert np.array_equal(a, b)

    def test_equivalence_bit_exact(self):
        # L uses of (N, a, b), interleaved, equal one use of (LN, a, b).
        rng = np.random.default_rng(14)
        checked = 0
        for alpha, beta in ANCHORS:
            for n in range(1, 5):
                if (alpha * n).denominator != 1 or (beta * n).denominator != 1:
                    continue
                for l_uses in range(1, 5):
                    ch = make_channel(3, n, alpha, beta)
                    big = interleave_expand(ch, l_uses)
                    for _ in range(3):
                        uses = [
                            [rng.integers(0, 2, n, dtype=np.uint8) for _ in range(3)]
                            for _ in range(l_uses)
                        ]
                        per_use = [transmit(ch, xs) for xs in uses]
                        merged_out = [
                            interleave([per_use[l][k] for l in range(l_uses)])
                            for k in range(3)
                        ]
                        merged_in = [
                            interleave([uses[l][k] for l in range(l_uses)])
                            for k in range(3)
                        ]
                        direct_out = transmit(big, merged_in)
                        for a, b in zip(merged_out, direct_out):
                            assert np.array_equal(a, b)
                        checked += 1
        assert checked >= 24
