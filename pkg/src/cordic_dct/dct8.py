"""8-point DCT built from butterflies, fixed-angle shift-add rotators and
post-scaling, plus exact matrix oracles and the separable 8x8 transform.

The 1-D transform uses the classic even/odd factorization: sums and
differences of mirrored inputs feed an even half (two plane rotations by
pi/4 and 3pi/8) and an odd half (rotations by pi/16 and 3pi/16 followed
by recombination butterflies).  Rotations run as uncompensated
micro-rotation sequences; all constant factors -- the 1/2 and 1/(2*sqrt2)
normalization and the rotator gains -- are folded into eight per-output
post-scales applied once at the end.

The two odd rotators have different gains, so a purely per-output scale
cannot absorb both.  In the default ``folded`` compensation mode the
pi/16 rotator pair is brought onto the 3pi/16 rotator's scale by one
extra path-equalizing constant (realized as a CSD shift-add in fixed
point) before the recombination butterflies; ``per_rotator`` mode instead
compensates every rotator by its own gain right away.  Both modes agree
with the exact-matrix oracle to the plan tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from .fixedpoint import (
    ArithmeticMode,
    FixedPointFormat,
    FixedPointOverflowError,
    OpCounter,
    OverflowPolicy,
)
from .planner import IndexPolicy, RotationPlan, decompose
from .rotator import CsdScale, csd_scale

# The four rotation angles the flow graph needs, keyed for readability.
DCT_ANGLES = {
    "pi/4": math.pi / 4,
    "3pi/8": 3 * math.pi / 8,
    "pi/16": math.pi / 16,
    "3pi/16": 3 * math.pi / 16,
}

_CSD_TOLERANCE = 2.0 ** -14  # constant-scale expansion error, fixed-point path


def dct_matrix() -> np.ndarray:
    """Exact 8x8 transform matrix M[k][x] = 1/2 * C(k) * cos((2x+1)k*pi/16)."""
    m = np.empty((8, 8))
    for k in range(8):
        ck = 1.0 / math.sqrt(2.0) if k == 0 else 1.0
        for x in range(8):
            m[k, x] = 0.5 * ck * math.cos((2 * x + 1) * k * math.pi / 16.0)
    return m


DCT_MATRIX = dct_matrix()


def dct8_oracle(x) -> np.ndarray:
    """Reference 1-D DCT, straight binary64 matrix evaluation."""
    return DCT_MATRIX @ np.asarray(x, dtype=np.float64)


def idct8_oracle(coefs) -> np.ndarray:
    """Exact inverse of :func:`dct8_oracle` (the matrix is orthonormal)."""
    return DCT_MATRIX.T @ np.asarray(coefs, dtype=np.float64)


def dct2d_oracle(block) -> np.ndarray:
    b = np.asarray(block, dtype=np.float64)
    return DCT_MATRIX @ b @ DCT_MATRIX.T


def idct2d_oracle(block) -> np.ndarray:
    b = np.asarray(block, dtype=np.float64)
    return DCT_MATRIX.T @ b @ DCT_MATRIX


class DctEngine:
    """Immutable bundle of rotation plans, scales and arithmetic mode.

    Parameters
    ----------
    epsilon:
        Shared angle tolerance for the four rotation plans.
    policy:
        Index policy handed to the planner.
    mode:
        ``ArithmeticMode.exact()`` or an ``ArithmeticMode.fixed(...)``.
    compensation:
        ``"folded"`` (gains inside the eight post-scales plus one odd-path
        equalizer) or ``"per_rotator"`` (each rotator compensated inline).
    fold_into_quantizer:
        When True the eight post-scales are *not* applied by the
        transform; a quantizing codec is expected to divide them into its
        step sizes instead.
    """

    def __init__(
        self,
        epsilon: float = 1e-4,
        policy: IndexPolicy = IndexPolicy.NEAREST,
        mode: ArithmeticMode | None = None,
        compensation: str = "folded",
        fold_into_quantizer: bool = False,
    ):
        if compensation not in ("folded", "per_rotator"):
            raise ValueError(f"unknown compensation mode {compensation!r}")
        self.epsilon = epsilon
        self.policy = policy
        self.mode = mode if mode is not None else ArithmeticMode.exact()
        self.compensation = compensation
        self.fold_into_quantizer = fold_into_quantizer

        self.plans: dict[str, RotationPlan] = {
            name: decompose(angle, epsilon, policy) for name, angle in DCT_ANGLES.items()
        }
        g = {name: plan.gain for name, plan in self.plans.items()}

        half = 0.5
        eighth_norm = 0.5 / math.sqrt(2.0)  # the 1/(2*sqrt2) factor on F3/F5
        if compensation == "folded":
            # Odd-path equalizer puts the pi/16 pair on the 3pi/16 scale.
            self.equalizer = g["pi/16"] / g["3pi/16"]
            self.post_scales = np.array(
                [
                    g["pi/4"] * half,      # F0
                    g["3pi/16"] * half,    # F1
                    g["3pi/8"] * half,     # F2
                    g["3pi/16"] * eighth_norm,  # F3
                    g["pi/4"] * half,      # F4
                    g["3pi/16"] * eighth_norm,  # F5
                    g["3pi/8"] * half,     # F6
                    g["3pi/16"] * half,    # F7
                ]
            )
        else:
            self.equalizer = 1.0
            self.post_scales = np.array(
                [half, half, half, eighth_norm, half, eighth_norm, half, half]
            )

        # Shift-add expansions of every constant the fixed-point path needs.
        self._csd_post: list[CsdScale] = [
            csd_scale(s, max_terms=16, tolerance=_CSD_TOLERANCE) for s in self.post_scales
        ]
        self._csd_equalizer = csd_scale(self.equalizer, max_terms=16, tolerance=_CSD_TOLERANCE)
        self._csd_gains = {
            name: csd_scale(plan.gain, max_terms=16, tolerance=_CSD_TOLERANCE)
            for name, plan in self.plans.items()
        }

    def operation_counts(self, fmt_mode: ArithmeticMode | None = None) -> dict:
        """Adds/shifts/multiplies for one 8-point transform, JSON-friendly.

        Counted by running a single probe vector through the fixed-point
        datapath (the shift-add realization is the same regardless of the
        engine's own arithmetic mode).
        """
        counter = OpCounter()
        if fmt_mode is not None:
            fmt = fmt_mode.fmt
        elif self.mode.is_fixed:
            fmt = self.mode.fmt
        else:
            fmt = FixedPointFormat(24, 8)
        probe_mode = ArithmeticMode(fmt, OverflowPolicy.ERROR, counter)
        probe = np.arange(8, dtype=np.float64).reshape(1, 8) - 4.0
        _transform8_fixed(self, probe, probe_mode, not self.fold_into_quantizer)
        out = counter.as_dict()
        del out["saturations"]  # a probe count, not a datapath property
        out["rotation_steps"] = {name: len(p.steps) for name, p in self.plans.items()}
        return out


def _rotate_float(xc, yc, plan: RotationPlan, compensate: bool):
    for step in plan.steps:
        t = step.direction * 2.0 ** -step.index
        xc, yc = xc - t * yc, yc + t * xc
    if compensate:
        xc = xc * plan.gain
        yc = yc * plan.gain
    return xc, yc


def _transform8_float(engine: DctEngine, X: np.ndarray, apply_post: bool) -> np.ndarray:
    per_rot = engine.compensation == "per_rotator"
    x0, x1, x2, x3 = X[:, 0], X[:, 1], X[:, 2], X[:, 3]
    x4, x5, x6, x7 = X[:, 4], X[:, 5], X[:, 6], X[:, 7]

    u0, u1, u2, u3 = x0 + x7, x1 + x6, x2 + x5, x3 + x4
    v0, v1, v2, v3 = x0 - x7, x1 - x6, x2 - x5, x3 - x4

    p, q = u0 + u3, u1 + u2
    r, s = u0 - u3, u1 - u2
    g0, g1 = _rotate_float(p, q, engine.plans["pi/4"], per_rot)
    h0, h1 = _rotate_float(r, s, engine.plans["3pi/8"], per_rot)

    a1, a0 = _rotate_float(v3, v0, engine.plans["pi/16"], per_rot)
    b1, b0 = _rotate_float(v2, v1, engine.plans["3pi/16"], per_rot)
    if not per_rot:
        a0 = a0 * engine.equalizer
        a1 = a1 * engine.equalizer

    F = np.empty_like(X)
    F[:, 0] = g1
    F[:, 4] = g0
    F[:, 2] = h1
    F[:, 6] = h0
    F[:, 1] = a0 + b0
    F[:, 7] = b1 - a1
    F[:, 3] = (a0 - a1) - (b0 + b1)
    F[:, 5] = (a0 + a1) - (b0 - b1)
    if apply_post:
        F *= engine.post_scales
    return F


def _to_raw_array(X: np.ndarray, mode: ArithmeticMode) -> np.ndarray:
    scaled = X * float(1 << mode.fmt.frac_bits)
    raw = np.trunc(scaled + np.copysign(0.5, scaled)).astype(np.int64)
    return _fit_array(raw, mode)


def _fit_array(raw: np.ndarray, mode: ArithmeticMode) -> np.ndarray:
    fmt = mode.fmt
    low = (raw < fmt.min_raw)
    high = (raw > fmt.max_raw)
    n_out = int(low.sum()) + int(high.sum())
    if n_out:
        if mode.overflow is OverflowPolicy.ERROR:
            raise FixedPointOverflowError(
                f"{n_out} value(s) outside {fmt.total_bits}.{fmt.frac_bits} range"
            )
        raw = np.clip(raw, fmt.min_raw, fmt.max_raw)
        if mode.counter is not None:
            mode.counter.saturations += n_out
    return raw


def _add_raw(a, b, mode: ArithmeticMode):
    out = _fit_array(a + b, mode)
    if mode.counter is not None:
        mode.counter.adds += out.size
    return out


def _sub_raw(a, b, mode: ArithmeticMode):
    out = _fit_array(a - b, mode)
    if mode.counter is not None:
        mode.counter.adds += out.size
    return out


def _rotate_raw(xc, yc, plan: RotationPlan, mode: ArithmeticMode):
    for step in plan.steps:
        sx = xc >> step.index
        sy = yc >> step.index
        if step.direction > 0:
            nx, ny = xc - sy, yc + sx
        else:
            nx, ny = xc + sy, yc - sx
        if mode.counter is not None:
            mode.counter.shifts += sx.size + sy.size
            mode.counter.adds += nx.size + ny.size
        xc, yc = _fit_array(nx, mode), _fit_array(ny, mode)
    return xc, yc


def _csd_apply_array(raw: np.ndarray, scale: CsdScale, mode: ArithmeticMode) -> np.ndarray:
    acc = np.zeros_like(raw)
    for shift, sign in scale.terms:
        term = raw >> shift if shift >= 0 else raw << -shift
        acc = acc + term if sign > 0 else acc - term
    if mode.counter is not None:
        mode.counter.shifts += len(scale.terms) * raw.size
        mode.counter.adds += len(scale.terms) * raw.size
    return _fit_array(acc, mode)


def _transform8_fixed(
    engine: DctEngine, X: np.ndarray, mode: ArithmeticMode, apply_post: bool
) -> np.ndarray:
    per_rot = engine.compensation == "per_rotator"
    raw = _to_raw_array(np.asarray(X, dtype=np.float64), mode)
    x0, x1, x2, x3 = raw[:, 0], raw[:, 1], raw[:, 2], raw[:, 3]
    x4, x5, x6, x7 = raw[:, 4], raw[:, 5], raw[:, 6], raw[:, 7]

    u0, u1 = _add_raw(x0, x7, mode), _add_raw(x1, x6, mode)
    u2, u3 = _add_raw(x2, x5, mode), _add_raw(x3, x4, mode)
    v0, v1 = _sub_raw(x0, x7, mode), _sub_raw(x1, x6, mode)
    v2, v3 = _sub_raw(x2, x5, mode), _sub_raw(x3, x4, mode)

    p, q = _add_raw(u0, u3, mode), _add_raw(u1, u2, mode)
    r, s = _sub_raw(u0, u3, mode), _sub_raw(u1, u2, mode)
    g0, g1 = _rotate_raw(p, q, engine.plans["pi/4"], mode)
    h0, h1 = _rotate_raw(r, s, engine.plans["3pi/8"], mode)
    a1, a0 = _rotate_raw(v3, v0, engine.plans["pi/16"], mode)
    b1, b0 = _rotate_raw(v2, v1, engine.plans["3pi/16"], mode)

    if per_rot:
        g0 = _csd_apply_array(g0, engine._csd_gains["pi/4"], mode)
        g1 = _csd_apply_array(g1, engine._csd_gains["pi/4"], mode)
        h0 = _csd_apply_array(h0, engine._csd_gains["3pi/8"], mode)
        h1 = _csd_apply_array(h1, engine._csd_gains["3pi/8"], mode)
        a0 = _csd_apply_array(a0, engine._csd_gains["pi/16"], mode)
        a1 = _csd_apply_array(a1, engine._csd_gains["pi/16"], mode)
        b0 = _csd_apply_array(b0, engine._csd_gains["3pi/16"], mode)
        b1 = _csd_apply_array(b1, engine._csd_gains["3pi/16"], mode)
    else:
        a0 = _csd_apply_array(a0, engine._csd_equalizer, mode)
        a1 = _csd_apply_array(a1, engine._csd_equalizer, mode)

    cols = [None] * 8
    cols[0], cols[4], cols[2], cols[6] = g1, g0, h1, h0
    cols[1] = _add_raw(a0, b0, mode)
    cols[7] = _sub_raw(b1, a1, mode)
    cols[3] = _sub_raw(_sub_raw(a0, a1, mode), _add_raw(b0, b1, mode), mode)
    cols[5] = _sub_raw(_add_raw(a0, a1, mode), _sub_raw(b0, b1, mode), mode)
    if apply_post:
        cols = [_csd_apply_array(c, s, mode) for c, s in zip(cols, engine._csd_post)]

    out = np.empty_like(X, dtype=np.float64)
    lsb = mode.fmt.lsb
    for k in range(8):
        out[:, k] = cols[k].astype(np.float64) * lsb
    return out


def transform8(engine: DctEngine, X) -> np.ndarray:
    """Run the flow graph on each row of an (n, 8) array (or a single vec)."""
    arr = np.asarray(X, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr.reshape(1, 8)
    if arr.shape[1] != 8:
        raise ValueError(f"expected rows of 8 samples, got shape {arr.shape}")
    apply_post = not engine.fold_into_quantizer
    if engine.mode.is_fixed:
        out = _transform8_fixed(engine, arr, engine.mode, apply_post)
    else:
        out = _transform8_float(engine, arr, apply_post)
    return out[0] if single else out


def dct8_cordic(x, engine: DctEngine) -> np.ndarray:
    """Shift-add 8-point DCT of one sample vector."""
    return transform8(engine, x)


def dct2d(block, engine: DctEngine) -> np.ndarray:
    """Separable 8x8 transform: rows, transpose, rows, transpose."""
    b = np.asarray(block, dtype=np.float64)
    if b.shape != (8, 8):
        raise ValueError(f"expected an 8x8 block, got shape {b.shape}")
    rows = transform8(engine, b)
    cols = transform8(engine, rows.T)
    return cols.T
