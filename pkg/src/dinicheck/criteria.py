"""Numerical pass/fail/inconclusive tests for the hypotheses of Dini-type theorems.

Every check works on finite data, so equicontinuity and the distributed
variation condition are judged from ladders of shrinking scales. The
thresholds below are fixed so that verdicts are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CriteriaError
from .funcspace import FunctionSequence, Grid, LimitFunction
from .metrics import _CELL_SLACK, family_modulus, window_variations

__all__ = [
    "CRITERIA",
    "STATUSES",
    "HypothesisVerdict",
    "DEFAULT_DELTA_LADDER",
    "DEFAULT_WIDTH_FRACTIONS",
    "DEFAULT_ETA_LADDER",
    "DECAY_PER_HALVING",
    "FAIL_SHRINK",
    "FAIL_FLOOR_RATIO",
    "TINY_MODULUS",
    "check_monotone_in_n",
    "check_convexity",
    "check_equicontinuity",
    "check_distributed_variation",
    "check_pointwise",
]

CRITERIA = (
    "dini_monotone",
    "thm1_equicontinuity",
    "thm2_convexity",
    "thm3_distributed_variation",
    "pointwise_convergence",
)
STATUSES = ("pass", "fail", "inconclusive")

DEFAULT_DELTA_LADDER = (0.4, 0.2, 0.1, 0.05, 0.025)
DEFAULT_WIDTH_FRACTIONS = (1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64)
DEFAULT_ETA_LADDER = (1 / 3, 1 / 10, 1 / 30)

DECAY_PER_HALVING = 1.5
FAIL_SHRINK = 64.0
FAIL_FLOOR_RATIO = 0.5
TINY_MODULUS = 1e-9


@dataclass(frozen=True)
class HypothesisVerdict:
    criterion: str
    status: str
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")


def _sorted_ns(n_range, at_least: int = 1) -> list[int]:
    ns = sorted({int(n) for n in n_range})
    if len(ns) < at_least:
        raise CriteriaError(f"n_range needs at least {at_least} element(s), got {len(ns)}")
    if ns[0] < 1:
        raise CriteriaError(f"n must be >= 1, got {ns[0]}")
    return ns


def _top_quartile(ns: list[int]) -> list[int]:
    return ns[(3 * len(ns)) // 4 :] or ns[-1:]


def check_monotone_in_n(seq: FunctionSequence, n_range, g: Grid, tol: float = 1e-12) -> HypothesisVerdict:
    """Is ``f_n(x)`` monotone in ``n`` at every grid point?

    Consecutive members of ``n_range`` are compared. Equal values satisfy
    both directions; that case is reported as non-increasing.
    """
    ns = _sorted_ns(n_range, 2)
    xs = g.points
    up = (-np.inf, None, None)  # worst f_{next} - f_n, with its n and x
    down = (-np.inf, None, None)
    prev_n = prev = None
    for n, vals in seq.iter_values(ns, xs):
        if prev is not None:
            diff = vals - prev
            i = int(np.argmax(diff))
            if diff[i] > up[0]:
                up = (float(diff[i]), prev_n, float(xs[i]))
            j = int(np.argmax(-diff))
            if -diff[j] > down[0]:
                down = (float(-diff[j]), prev_n, float(xs[j]))
        prev_n, prev = n, vals

    evidence = {"worst_increase": up[0], "worst_decrease": down[0]}
    if up[0] <= tol:
        return HypothesisVerdict("dini_monotone", "pass", {"direction": "non-increasing", **evidence})
    if down[0] <= tol:
        return HypothesisVerdict("dini_monotone", "pass", {"direction": "non-decreasing", **evidence})
    evidence.update(
        increase_n=up[1], increase_x=up[2], decrease_n=down[1], decrease_x=down[2],
    )
    return HypothesisVerdict("dini_monotone", "fail", {"direction": "none", **evidence})


def check_convexity(seq: FunctionSequence, n_range, g: Grid, tol: float = 1e-12) -> HypothesisVerdict:
    """Discrete convexity: second differences ``>= -tol * max(1, max|f_n|)``."""
    if not g.uniform or len(g) < 3:
        raise CriteriaError("check_convexity needs a uniform grid with at least 3 points")
    ns = _sorted_ns(n_range)
    xs = g.points
    worst = (-np.inf, None, None, None)  # scaled violation, n, x, raw second difference
    for n, v in seq.iter_values(ns, xs):
        sd = v[:-2] - 2.0 * v[1:-1] + v[2:]
        scale = max(1.0, float(np.max(np.abs(v))))
        viol = -sd / scale
        i = int(np.argmax(viol))
        if viol[i] > worst[0]:
            worst = (float(viol[i]), n, float(xs[i + 1]), float(sd[i]))
    evidence = {
        "worst_scaled_violation": worst[0],
        "min_second_difference": worst[3],
        "witness_n": worst[1],
        "witness_x": worst[2],
    }
    status = "pass" if worst[0] <= tol else "fail"
    return HypothesisVerdict("thm2_convexity", status, evidence)


def _check_ladder(ladder: Sequence[float], name: str, min_len: int = 1) -> list[float]:
    vals = [float(v) for v in ladder]
    if len(vals) < min_len:
        raise CriteriaError(f"{name} needs at least {min_len} rungs, got {len(vals)}")
    if any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise CriteriaError(f"{name} must contain positive finite values")
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise CriteriaError(f"{name} must be strictly decreasing")
    return vals


def check_equicontinuity(seq: FunctionSequence, n_range, g: Grid, delta_ladder=DEFAULT_DELTA_LADDER) -> HypothesisVerdict:
    """Judge equicontinuity from the family modulus over a ladder of deltas.

    Pass: the modulus shrinks by at least ``DECAY_PER_HALVING`` per halving
    of delta (pro rata for other ratios), or is below ``TINY_MODULUS``.
    Fail: over a ``FAIL_SHRINK``-fold shrink of delta, the modulus never
    drops below ``FAIL_FLOOR_RATIO`` of its value at the widest rung.
    When the given ladder spans less than ``FAIL_SHRINK``, it is extended by
    halving its last rung while the grid still resolves it.
    """
    deltas = _check_ladder(delta_ladder, "delta_ladder", 4)
    floor_delta = 2 * g.spacing * (1 - _CELL_SLACK)
    if deltas[-1] < floor_delta:
        raise CriteriaError(f"delta {deltas[-1]} is below twice the grid spacing {g.spacing}")
    given = len(deltas)
    while deltas[0] / deltas[-1] < FAIL_SHRINK * (1 - 1e-12) and deltas[-1] / 2 >= floor_delta:
        deltas.append(deltas[-1] / 2)

    ns = _sorted_ns(n_range)
    table = [family_modulus(seq, ns, g, d) for d in deltas]
    omegas = [m.omega for m in table]

    def decays(i: int) -> bool:
        if omegas[i] < TINY_MODULUS:
            return True
        required = DECAY_PER_HALVING ** math.log2(deltas[i] / deltas[i + 1])
        return omegas[i] >= required * omegas[i + 1]

    evidence = {
        "table": [[d, w, m.witness_n] for d, w, m in zip(deltas, omegas, table)],
        "extended_rungs": len(deltas) - given,
        "decay_required_per_halving": DECAY_PER_HALVING,
    }
    if all(decays(i) for i in range(len(deltas) - 1)):
        return HypothesisVerdict("thm1_equicontinuity", "pass", evidence)
    floor = FAIL_FLOOR_RATIO * omegas[0]
    if deltas[0] / deltas[-1] >= FAIL_SHRINK * (1 - 1e-12) and floor > 0 and min(omegas) >= floor:
        worst = table[-1]
        evidence.update(witness_delta=worst.delta, witness_omega=worst.omega, witness_n=worst.witness_n)
        return HypothesisVerdict("thm1_equicontinuity", "fail", evidence)
    return HypothesisVerdict("thm1_equicontinuity", "inconclusive", evidence)


def check_distributed_variation(
    seq: FunctionSequence, n_range, g: Grid, width_ladder: Sequence[float], eta: float
) -> HypothesisVerdict:
    """Is variation spread out, i.e. small on every narrow window for late ``n``?

    Pass: some width admits an ``N`` no later than the top quartile of
    ``n_range`` with window variation ``< eta`` for every ``n >= N``.
    Fail: at every width some top-quartile ``n`` has a window with
    variation above ``eta``.
    """
    widths = _check_ladder(width_ladder, "width_ladder")
    if not eta > 0:
        raise CriteriaError(f"eta must be positive, got {eta}")
    ns = _sorted_ns(n_range)
    late = set(_top_quartile(ns))
    late_start = min(late)

    worst_late = [(-1.0, None, None)] * len(widths)  # variation, n, window_left
    # smallest N such that every n >= N stays below eta, per width
    tail_ok = [True] * len(widths)
    first_ok = [None] * len(widths)
    rows = {}
    bound = 0.0
    for n, profiles in window_variations(seq, ns, g, widths):
        rows[n] = profiles
        bound = max(bound, profiles[0].total_variation)
        for k, p in enumerate(profiles):
            if n in late and p.max_window_variation > worst_late[k][0]:
                worst_late[k] = (p.max_window_variation, n, p.window_left)
    for k in range(len(widths)):
        n_start = None
        for n in reversed(ns):
            if rows[n][k].max_window_variation < eta:
                n_start = n
            else:
                break
        first_ok[k] = n_start
        tail_ok[k] = n_start is not None and n_start <= late_start

    evidence = {
        "eta": float(eta),
        "table": [[w, v, wn] for w, (v, wn, _) in zip(widths, worst_late)],
        "max_total_variation": bound,
    }
    passing = [k for k in range(len(widths)) if tail_ok[k]]
    if passing:
        k = passing[0]
        evidence.update(witness_width=widths[k], witness_N=first_ok[k])
        return HypothesisVerdict("thm3_distributed_variation", "pass", evidence)
    if all(v > eta for v, _, _ in worst_late):
        v, wn, left = worst_late[-1]
        evidence.update(witness_width=widths[-1], witness_n=wn, witness_x=left, witness_variation=v)
        return HypothesisVerdict("thm3_distributed_variation", "fail", evidence)
    return HypothesisVerdict("thm3_distributed_variation", "inconclusive", evidence)


def check_pointwise(
    seq: FunctionSequence, lim: LimitFunction, probes: Sequence[float], n_range, tol: float = 1e-2
) -> HypothesisVerdict:
    """Witness ``f_n(x) -> f(x)`` at a handful of probe points.

    Passes when, at every probe, the deviation for each top-quartile ``n``
    is no larger than at the midpoint of ``n_range`` and the deviation at
    the last ``n`` is below ``tol``. A limit can only be witnessed, never
    proven, so the negative outcome is "inconclusive".
    """
    xs = np.asarray(sorted(float(p) for p in probes))
    if xs.size == 0:
        raise CriteriaError("probes must be non-empty")
    if not seq.domain.contains(xs):
        raise CriteriaError(f"probes must lie in {seq.domain}")
    ns = _sorted_ns(n_range)
    mid = ns[len(ns) // 2]
    late = _top_quartile(ns)
    wanted = sorted(set(late) | {mid})
    f = lim(xs)
    devs = {n: np.abs(v - f) for n, v in seq.iter_values(wanted, xs)}
    ref = devs[mid]
    late_devs = np.array([devs[n] for n in late])
    settled = np.all(late_devs <= ref + 1e-15, axis=0)
    final = late_devs[-1]
    ok = settled & (final < tol)
    i = int(np.argmax(final))
    evidence = {
        "probes": int(xs.size),
        "midpoint_n": mid,
        "final_n": late[-1],
        "worst_final_deviation": float(final[i]),
        "witness_x": float(xs[i]),
        "unsettled_probes": int(np.count_nonzero(~settled)),
    }
    return HypothesisVerdict("pointwise_convergence", "pass" if ok.all() else "inconclusive", evidence)
