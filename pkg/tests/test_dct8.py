"""DCT tests: exact-matrix oracle properties, flow-graph equivalence,
fixed-point behaviour and the separable 2-D transform."""

import json
import math

import numpy as np
import pytest

from cordic_dct.dct8 import (
    DCT_MATRIX,
    DctEngine,
    dct2d,
    dct2d_oracle,
    dct8_cordic,
    dct8_oracle,
    idct2d_oracle,
    idct8_oracle,
    transform8,
)
from cordic_dct.fixedpoint import ArithmeticMode, OpCounter, OverflowPolicy

RNG = np.random.default_rng(20240601)

# Expected impulse response of the reference transform, frozen from direct
# evaluation of 0.5*C(k)*cos(k*pi/16).
IMPULSE_COEFS = [
    0.3535533905932738,
    0.4903926402016152,
    0.4619397662556434,
    0.4157348061512726,
    0.3535533905932738,
    0.2777851165098011,
    0.1913417161825449,
    0.0975451610080642,
]


class TestOracle:
    def test_constant_input(self):
        F = dct8_oracle(np.ones(8))
        assert F[0] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-14)
        assert np.abs(F[1:]).max() < 1e-15

    def test_impulse_input(self):
        F = dct8_oracle([1, 0, 0, 0, 0, 0, 0, 0])
        assert F == pytest.approx(IMPULSE_COEFS, abs=1e-15)

    def test_constant_scales_linearly(self):
        for a in RNG.uniform(-100, 100, size=5):
            F = dct8_oracle(np.full(8, a))
            assert F[0] == pytest.approx(a * 2.0 * math.sqrt(2.0), rel=1e-13)
            assert np.abs(F[1:]).max() < 1e-12 * max(1.0, abs(a))

    def test_matrix_is_orthonormal(self):
        gram = DCT_MATRIX @ DCT_MATRIX.T
        assert np.abs(gram - np.eye(8)).max() < 1e-12

    def test_inverse_round_trip(self):
        for _ in range(100):
            x = RNG.uniform(-256, 255, size=8)
            assert np.abs(idct8_oracle(dct8_oracle(x)) - x).max() < 1e-12

    def test_2d_round_trip(self):
        for _ in range(20):
            b = RNG.uniform(-256, 255, size=(8, 8))
            assert np.abs(idct2d_oracle(dct2d_oracle(b)) - b).max() < 1e-9
        zero = np.zeros((8, 8))
        assert np.all(dct2d_oracle(zero) == 0)
        assert np.all(idct2d_oracle(zero) == 0)


class TestFlowGraph:
    def test_zero_input(self):
        eng = DctEngine(epsilon=1e-4)
        assert np.all(dct8_cordic(np.zeros(8), eng) == 0.0)

    def test_constant_input(self):
        eng = DctEngine(epsilon=1e-4)
        F = dct8_cordic(np.ones(8), eng)
        assert F[0] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-3)
        assert np.abs(F[1:]).max() < 1e-3

    def test_impulse_matches_oracle(self):
        eng = DctEngine(epsilon=1e-4)
        x = np.zeros(8)
        x[0] = 1.0
        assert np.abs(dct8_cordic(x, eng) - dct8_oracle(x)).max() < 1e-3

    @pytest.mark.parametrize("eps,bound", [(1e-3, 1.5), (1e-4, 0.15)])
    def test_random_equivalence_bound(self, eps, bound):
        eng = DctEngine(epsilon=eps)
        X = RNG.integers(-128, 128, size=(2000, 8)).astype(np.float64)
        err = np.abs(transform8(eng, X) - X @ DCT_MATRIX.T).max()
        assert err <= bound

    def test_error_monotone_in_epsilon(self):
        X = RNG.integers(-128, 128, size=(2000, 8)).astype(np.float64)
        ref = X @ DCT_MATRIX.T
        means = []
        for eps in (1e-2, 1e-3, 1e-4, 1e-6):
            eng = DctEngine(epsilon=eps)
            means.append(np.abs(transform8(eng, X) - ref).mean())
        assert all(a >= b for a, b in zip(means, means[1:]))

    @pytest.mark.parametrize("alpha", [-1.0, 2.0])
    def test_linearity_exact_for_power_of_two_scales(self, alpha):
        # every op in the float flow commutes exactly with *2 and with
        # negation, so this holds bitwise
        eng = DctEngine(epsilon=1e-4)
        x = RNG.uniform(-100, 100, size=8)
        assert np.all(dct8_cordic(alpha * x, eng) == alpha * dct8_cordic(x, eng))

    def test_per_rotator_compensation_equivalent(self):
        X = RNG.integers(-128, 128, size=(500, 8)).astype(np.float64)
        ref = X @ DCT_MATRIX.T
        folded = DctEngine(epsilon=1e-4, compensation="folded")
        per_rot = DctEngine(epsilon=1e-4, compensation="per_rotator")
        assert np.abs(transform8(folded, X) - ref).max() <= 0.15
        assert np.abs(transform8(per_rot, X) - ref).max() <= 0.15

    def test_even_odd_stage_fidelity(self):
        # the flow's even outputs must realize the exact 4x4 half matrices
        # of the even/odd factorization, up to the plan tolerance
        A = math.cos(math.pi / 4)
        B = math.sin(3 * math.pi / 8)
        C = math.cos(3 * math.pi / 8)
        D = math.sin(7 * math.pi / 16)
        E = math.cos(3 * math.pi / 16)
        Fc = math.sin(3 * math.pi / 16)
        G = math.cos(7 * math.pi / 16)
        even = 0.5 * np.array([[A, A, A, A], [B, C, -C, -B], [A, -A, -A, A], [C, -B, B, -C]])
        odd = 0.5 * np.array([[D, E, Fc, G], [E, -G, -D, -Fc], [Fc, -D, G, E], [G, -Fc, E, -D]])

        eng = DctEngine(epsilon=1e-4)
        for _ in range(50):
            x = RNG.integers(-128, 128, size=8).astype(np.float64)
            u = np.array([x[0] + x[7], x[1] + x[6], x[2] + x[5], x[3] + x[4]])
            v = np.array([x[0] - x[7], x[1] - x[6], x[2] - x[5], x[3] - x[4]])
            F = dct8_cordic(x, eng)
            assert F[[0, 2, 4, 6]] == pytest.approx(even @ u, abs=0.15)
            assert F[[1, 3, 5, 7]] == pytest.approx(odd @ v, abs=0.15)

    def test_engine_validation(self):
        with pytest.raises(ValueError):
            DctEngine(compensation="inline")
        with pytest.raises(ValueError):
            DctEngine(epsilon=0.5)
        with pytest.raises(ValueError):
            transform8(DctEngine(), np.zeros((4, 7)))

    def test_post_scales_positive_and_plans_share_epsilon(self):
        eng = DctEngine(epsilon=1e-3)
        assert np.all(eng.post_scales > 0)
        assert len(eng.post_scales) == 8
        assert {p.tolerance for p in eng.plans.values()} == {1e-3}


class TestDct2d:
    def test_constant_block(self):
        eng = DctEngine(epsilon=1e-4)
        F = dct2d(np.ones((8, 8)), eng)
        assert F[0, 0] == pytest.approx(8.0, abs=8e-3)
        mask = np.ones((8, 8), dtype=bool)
        mask[0, 0] = False
        assert np.abs(F[mask]).max() < 8e-3

    def test_zero_block(self):
        eng = DctEngine(epsilon=1e-4)
        assert np.all(dct2d(np.zeros((8, 8)), eng) == 0.0)

    def test_random_blocks_match_2d_oracle(self):
        eng = DctEngine(epsilon=1e-4)
        bound = 2 * math.sqrt(8) * 0.15
        for _ in range(50):
            b = RNG.integers(-128, 128, size=(8, 8)).astype(np.float64)
            assert np.abs(dct2d(b, eng) - dct2d_oracle(b)).max() <= bound

    def test_fold_into_quantizer_defers_scales(self):
        plain = DctEngine(epsilon=1e-4)
        folded = DctEngine(epsilon=1e-4, fold_into_quantizer=True)
        x = RNG.uniform(-100, 100, size=8)
        deferred = dct8_cordic(x, folded) * folded.post_scales
        assert np.all(deferred == dct8_cordic(x, plain))


class TestFixedPointPath:
    def test_tracks_float_path(self):
        mode = ArithmeticMode.fixed(24, 8)
        eng_fix = DctEngine(epsilon=1e-4, mode=mode)
        eng_flt = DctEngine(epsilon=1e-4)
        X = RNG.integers(-128, 128, size=(500, 8)).astype(np.float64)
        err = np.abs(transform8(eng_fix, X) - transform8(eng_flt, X)).max()
        assert err <= 0.2  # a few dozen floor-rounded shifts at lsb 2^-8

    def test_no_multiplies(self):
        counter = OpCounter()
        mode = ArithmeticMode.fixed(24, 8, OverflowPolicy.ERROR, counter)
        eng = DctEngine(epsilon=1e-3, mode=mode)
        transform8(eng, RNG.integers(-128, 128, size=(16, 8)).astype(np.float64))
        assert counter.multiplies == 0
        assert counter.adds > 0
        assert counter.shifts > 0

    def test_saturation_counted_not_silent(self):
        counter = OpCounter()
        mode = ArithmeticMode.fixed(12, 2, OverflowPolicy.SATURATE, counter)
        eng = DctEngine(epsilon=1e-3, mode=mode)
        transform8(eng, np.full((1, 8), 250.0))
        assert counter.saturations > 0

    def test_overflow_error_policy_raises(self):
        from cordic_dct.fixedpoint import FixedPointOverflowError

        mode = ArithmeticMode.fixed(12, 2, OverflowPolicy.ERROR)
        eng = DctEngine(epsilon=1e-3, mode=mode)
        with pytest.raises(FixedPointOverflowError):
            transform8(eng, np.full((1, 8), 250.0))

    def test_operation_counts_report(self):
        eng = DctEngine(epsilon=1e-3)
        counts = eng.operation_counts()
        assert counts["multiplies"] == 0
        assert counts["adds"] > 0
        assert counts["shifts"] > 0
        assert counts["rotation_steps"]["pi/4"] == 1
        json.dumps(counts)  # must be serializable
