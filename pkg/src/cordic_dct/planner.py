"""Decompose rotation angles into arctangent-radix micro-rotations.

A target angle ``theta`` is approximated by a signed sum of micro-angles
``atan(2**-i)``.  The decomposition loop subtracts the micro-angle picked
by the active index policy from the remaining residual until the residual
magnitude drops to the requested tolerance ``epsilon``:

    residual_0 = theta
    residual_k = residual_{k-1} - sigma_k * atan(2**-i_k)

``sigma_k`` is always the sign of the residual before the step, so the
identity ``theta == sum(sigma_k * atan(2**-i_k)) + residual`` holds by
construction.  Two index policies are provided:

* ``NEAREST`` (default): i = round(-log2|residual|), the shift whose
  micro-angle is nearest to the residual in the log2 domain.  All shipped
  rotation tables use this policy, and the magnitude of the residual
  strictly decreases at every step.
* ``LITERAL``: i = floor(-log2(tan|residual|)) + 1.  Also converges, but
  picks systematically smaller micro-angles and therefore needs more
  steps; kept for comparison runs.

Everything here is pure binary64 arithmetic over immutable values; plans
can be shared freely across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from io import StringIO

INDEX_MAX = 30
MAX_STEPS = 64
EPSILON_MIN = 1e-9
EPSILON_MAX = 1e-1
ANGLE_MAX = math.pi / 2

# atan(2**-i) for i = 0..INDEX_MAX, the only micro-angles a plan may use.
ATAN_TABLE = tuple(math.atan(2.0 ** -i) for i in range(INDEX_MAX + 1))


class IndexPolicy(Enum):
    """How the shift index for the next micro-rotation is chosen."""

    NEAREST = "nearest"
    LITERAL = "literal"


@dataclass(frozen=True)
class MicroRotation:
    """One elementary rotation: shift amount ``index`` and sign ``direction``."""

    index: int
    direction: int

    def __post_init__(self):
        if not 0 <= self.index <= INDEX_MAX:
            raise ValueError(f"shift index {self.index} outside [0, {INDEX_MAX}]")
        if self.direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")

    @property
    def angle(self) -> float:
        """Signed micro-angle ``direction * atan(2**-index)``."""
        return self.direction * ATAN_TABLE[self.index]


@dataclass(frozen=True)
class RotationPlan:
    """Ordered micro-rotation sequence approximating ``target`` to ``tolerance``.

    ``residual`` is the angle still missing after all steps and ``gain`` is
    the aggregate scale factor prod(1/sqrt(1 + 2**-2i)) of the unscaled
    shift-add realization.  Plans are immutable.
    """

    target: float
    tolerance: float
    steps: tuple[MicroRotation, ...]
    residual: float
    gain: float
    policy: IndexPolicy

    def __post_init__(self):
        if abs(self.residual) > self.tolerance:
            raise ValueError("plan residual exceeds tolerance")
        if bool(self.steps) == (abs(self.target) <= self.tolerance):
            raise ValueError("steps must be empty exactly when the target is within tolerance")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(s.index for s in self.steps)

    @property
    def directions(self) -> tuple[int, ...]:
        return tuple(s.direction for s in self.steps)


def _pick_index(residual: float, policy: IndexPolicy) -> int:
    a = abs(residual)
    if policy is IndexPolicy.NEAREST:
        i = round(-math.log2(a))
    else:
        i = math.floor(-math.log2(math.tan(a))) + 1
    return max(i, 0)


def decompose(theta: float, epsilon: float, policy: IndexPolicy = IndexPolicy.NEAREST) -> RotationPlan:
    """Compute the micro-rotation plan for ``theta`` to precision ``epsilon``.

    Raises ValueError if |theta| > pi/2 or epsilon is outside
    [1e-9, 1e-1], and RuntimeError if the loop fails to make progress
    (which would indicate a policy bug, not bad input).
    """
    if not math.isfinite(theta) or abs(theta) > ANGLE_MAX:
        raise ValueError(f"angle {theta!r} outside [-pi/2, pi/2]")
    if not (EPSILON_MIN <= epsilon <= EPSILON_MAX):
        raise ValueError(f"epsilon {epsilon!r} outside [{EPSILON_MIN:g}, {EPSILON_MAX:g}]")

    residual = theta
    steps = []
    while abs(residual) > epsilon:
        if len(steps) >= MAX_STEPS:
            raise RuntimeError(f"no convergence after {MAX_STEPS} steps (policy {policy})")
        i = _pick_index(residual, policy)
        if i > INDEX_MAX:
            # atan(2**-INDEX_MAX) < 1e-9 <= epsilon, so this is unreachable
            # for valid inputs; bail out rather than loop forever.
            break
        sigma = 1 if residual > 0 else -1
        nxt = residual - sigma * ATAN_TABLE[i]
        assert abs(nxt) < abs(residual), "micro-rotation must shrink the residual"
        residual = nxt
        steps.append(MicroRotation(i, sigma))

    plan_steps = tuple(steps)
    return RotationPlan(
        target=theta,
        tolerance=epsilon,
        steps=plan_steps,
        residual=residual,
        gain=_gain_of_indices(s.index for s in plan_steps),
        policy=policy,
    )


def reconstruct_angle(plan: RotationPlan) -> float:
    """Signed sum of the plan's micro-angles, i.e. the angle it realizes."""
    total = 0.0
    for step in plan.steps:
        total += step.angle
    return total


def _gain_of_indices(indices) -> float:
    k = 1.0
    for i in indices:
        # sqrt(1/(1+t)) rather than 1/sqrt(1+t): one correctly-rounded
        # operation per factor instead of two roundings
        k *= math.sqrt(1.0 / (1.0 + 2.0 ** (-2 * i)))
    return k


def gain(plan: RotationPlan) -> float:
    """Aggregate scale factor prod(1/sqrt(1 + 2**-2i)) over the plan's steps.

    Depends only on the index multiset (repeats count), never on the
    directions, and lies in (0, 1].
    """
    return _gain_of_indices(s.index for s in plan.steps)


def greedy_reference_steps(theta: float, epsilon: float) -> list[tuple[int, int]]:
    """Brute-force reference decomposition used to validate index policies.

    At every step this scans all shifts 0..INDEX_MAX and takes the one
    that leaves the smallest next residual.  It shares no index-selection
    code with :func:`decompose`.  Note that minimizing the next residual
    is not always the same choice as ``NEAREST``: whenever the residual
    falls between two micro-angles, this picks the closer micro-angle in
    the linear domain while ``NEAREST`` picks the closer one in the log2
    domain, and the two selections differ on a narrow band of residuals
    (about 8% of each octave).
    """
    if abs(theta) > ANGLE_MAX:
        raise ValueError(f"angle {theta!r} outside [-pi/2, pi/2]")
    residual = theta
    out = []
    while abs(residual) > epsilon and len(out) < MAX_STEPS:
        sigma = 1 if residual > 0 else -1
        best = min(range(INDEX_MAX + 1), key=lambda i: abs(residual - sigma * ATAN_TABLE[i]))
        residual -= sigma * ATAN_TABLE[best]
        out.append((best, sigma))
    return out


@dataclass(frozen=True)
class TableRow:
    """One decomposition summary row: (angle, epsilon) -> plan parameters."""

    angle: float
    epsilon: float
    indices: tuple[int, ...]
    directions: tuple[int, ...]
    residual: float
    gain: float

    @property
    def indices_str(self) -> str:
        return "/".join(str(i) for i in self.indices)

    @property
    def directions_str(self) -> str:
        return "".join("+" if d > 0 else "-" for d in self.directions)


def generate_table(angles, epsilons, policy: IndexPolicy = IndexPolicy.NEAREST) -> list[TableRow]:
    """Decompose every (angle, epsilon) pair into one summary row."""
    rows = []
    for theta in angles:
        for eps in epsilons:
            plan = decompose(theta, eps, policy)
            rows.append(
                TableRow(
                    angle=theta,
                    epsilon=eps,
                    indices=plan.indices,
                    directions=plan.directions,
                    residual=plan.residual,
                    gain=plan.gain,
                )
            )
    return rows


TABLE_CSV_HEADER = "angle_rad,epsilon,indices,directions,residual_rad,gain"


def table_to_csv(rows) -> str:
    """Render table rows as CSV (indices slash-separated, directions +/-)."""
    buf = StringIO()
    buf.write(TABLE_CSV_HEADER + "\n")
    for r in rows:
        buf.write(
            f"{r.angle!r},{r.epsilon:g},{r.indices_str},{r.directions_str},"
            f"{r.residual!r},{r.gain!r}\n"
        )
    return buf.getvalue()


def table_to_json(rows) -> str:
    payload = [
        {
            "angle_rad": r.angle,
            "epsilon": r.epsilon,
            "indices": list(r.indices),
            "directions": r.directions_str,
            "residual_rad": r.residual,
            "gain": r.gain,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2)
