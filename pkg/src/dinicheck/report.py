"""Convergence classification and its JSON / text / CSV serializations."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .criteria import (
    DEFAULT_DELTA_LADDER,
    DEFAULT_ETA_LADDER,
    DEFAULT_WIDTH_FRACTIONS,
    HypothesisVerdict,
    check_convexity,
    check_distributed_variation,
    check_equicontinuity,
    check_monotone_in_n,
    check_pointwise,
)
from .errors import ClassificationError, DinicheckError
from .funcspace import FunctionSequence, Grid, Interval, LimitFunction, make_uniform_grid
from .metrics import DEFAULT_GRID_SIZE, DEFAULT_TOL_X, DeviationProfile, sup_deviation, total_variation

__all__ = [
    "UNIFORMITY",
    "THEOREMS",
    "DEFAULT_TOLERANCES",
    "ClassifyConfig",
    "ConvergenceReport",
    "uniformity_trend",
    "classify",
    "emit_report",
    "emit_curves",
]

UNIFORMITY = ("uniform_trend", "non_uniform_trend", "inconclusive")
THEOREMS = ("dini", "thm1", "thm2", "thm3")
UNIFORM_DROP = 10.0
# final deviation at or above this share of the largest one reads as no decay
NON_UNIFORM_SHARE = 0.5

DEFAULT_TOLERANCES = {
    "monotone": 1e-12,
    "convexity": 1e-12,
    "pointwise": 1e-2,
    "tol_x": DEFAULT_TOL_X,
}

_THEOREM_OF = {
    "dini_monotone": "dini",
    "thm1_equicontinuity": "thm1",
    "thm2_convexity": "thm2",
    "thm3_distributed_variation": "thm3",
}


@dataclass(frozen=True)
class ClassifyConfig:
    grid_size: int = DEFAULT_GRID_SIZE
    delta_ladder: tuple = DEFAULT_DELTA_LADDER
    # None: DEFAULT_WIDTH_FRACTIONS of the interval length
    width_ladder: tuple | None = None
    eta_ladder: tuple = DEFAULT_ETA_LADDER
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    # None: 9 equally spaced points including both ends
    probes: tuple | None = None

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))


@dataclass(frozen=True)
class ConvergenceReport:
    sequence_id: str
    interval: Interval
    ns: list
    deviations: list
    verdicts: list
    uniformity: str
    applicable_theorems: list
    notes: list = field(default_factory=list)


def uniformity_trend(sup_devs: Sequence[float]) -> str:
    """Read a deviation table as a uniform, non-uniform or unclear trend.

    ``uniform_trend`` needs the second half of the table to be
    non-increasing with a net drop, and the final value below a tenth of
    the first. ``non_uniform_trend`` means the final value is still at least
    half of the largest one.
    """
    d = [float(v) for v in sup_devs]
    if not d:
        return "inconclusive"
    tail = d[len(d) // 2 :]
    eventually_decreasing = all(b <= a for a, b in zip(tail, tail[1:])) and tail[-1] < tail[0]
    if eventually_decreasing and d[-1] < d[0] / UNIFORM_DROP:
        return "uniform_trend"
    if d[-1] >= NON_UNIFORM_SHARE * max(d) and max(d) > 0:
        return "non_uniform_trend"
    return "inconclusive"


def _combine_thm3(verdicts: list[HypothesisVerdict]) -> HypothesisVerdict:
    # the most lenient eta decides failure; passing needs every eta
    statuses = [v.status for v in verdicts]
    if all(s == "pass" for s in statuses):
        status, lead = "pass", verdicts[-1]
    elif statuses[0] == "fail":
        status, lead = "fail", verdicts[0]
    else:
        status = "inconclusive"
        lead = next(v for v in verdicts if v.status != "pass")
    evidence = dict(lead.evidence)
    evidence["per_eta"] = [[v.evidence["eta"], v.status] for v in verdicts]
    return HypothesisVerdict("thm3_distributed_variation", status, evidence)


def classify(
    seq: FunctionSequence,
    lim: LimitFunction,
    interval: Interval | None,
    n_list: Sequence[int],
    config: ClassifyConfig | None = None,
) -> ConvergenceReport:
    """Run every hypothesis check and the deviation table, then classify."""
    config = config or ClassifyConfig()
    ns = [int(n) for n in n_list]
    if len(ns) < 4:
        raise ValueError(f"n_list needs at least 4 values, got {len(ns)}")
    if ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be strictly increasing positive integers")
    interval = interval or seq.domain
    if not seq.domain.includes(interval):
        raise ValueError(f"interval {interval} is not inside the domain {seq.domain}")
    if interval != seq.domain:
        seq = dataclasses.replace(seq, domain=interval)
        lim = dataclasses.replace(lim, domain=interval)

    grid = make_uniform_grid(interval, config.grid_size)
    n_range = range(ns[0], ns[-1] + 1)
    widths = config.width_ladder or tuple(interval.length * f for f in DEFAULT_WIDTH_FRACTIONS)
    probes = config.probes or tuple(np.linspace(interval.a, interval.b, 9))

    partial: dict = {"verdicts": [], "deviations": []}

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DinicheckError, ValueError, ArithmeticError) as exc:
            raise ClassificationError(name, exc, partial) from exc

    verdicts = partial["verdicts"]
    verdicts.append(stage("criteria", check_pointwise, seq, lim, probes, n_range, config.tol("pointwise")))
    verdicts.append(stage("criteria", check_monotone_in_n, seq, n_range, grid, config.tol("monotone")))
    verdicts.append(stage("criteria", check_equicontinuity, seq, n_range, grid, config.delta_ladder))
    verdicts.append(stage("criteria", check_convexity, seq, n_range, grid, config.tol("convexity")))
    per_eta = [stage("criteria", check_distributed_variation, seq, n_range, grid, widths, eta) for eta in config.eta_ladder]
    verdicts.append(_combine_thm3(per_eta))

    deviations = partial["deviations"]
    for n in ns:
        deviations.append(stage("metric", sup_deviation, seq, lim, n, config.grid_size, config.tol("tol_x")))

    uniformity = uniformity_trend([d.sup_dev for d in deviations])
    theorems = [_THEOREM_OF[v.criterion] for v in verdicts if v.criterion in _THEOREM_OF and v.status == "pass"]
    theorems.sort(key=THEOREMS.index)

    notes = []
    if verdicts[0].status != "pass":
        notes.append(
            "pointwise convergence was not witnessed at the probes "
            f"(worst final deviation {verdicts[0].evidence['worst_final_deviation']:.6g}); "
            "theorem applicability assumes it"
        )
    for thm in theorems:
        if uniformity != "uniform_trend":
            notes.append(
                f"consistency: {thm} hypotheses passed but the deviation trend is {uniformity}; "
                "suspect a numerical artifact or a false positive in the hypothesis test"
            )
    tvs = [total_variation(v) for _, v in seq.iter_values(ns, grid.points)]
    notes.append("grid total variation by n: " + ", ".join(f"{n}: {tv:.6g}" for n, tv in zip(ns, tvs)))
    return ConvergenceReport(seq.id, interval, ns, list(deviations), list(verdicts), uniformity, theorems, notes)


def _plain(value):
    """Convert evidence values to JSON-native types."""
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return value
    return value


def _as_dict(r: ConvergenceReport) -> dict:
    return {
        "sequence_id": r.sequence_id,
        "interval": {"a": float(r.interval.a), "b": float(r.interval.b)},
        "ns": [int(n) for n in r.ns],
        "deviations": [
            {"n": int(d.n), "sup_dev": float(d.sup_dev), "argmax_x": float(d.argmax_x)} for d in r.deviations
        ],
        "verdicts": [
            {"criterion": v.criterion, "status": v.status, "evidence": _plain(v.evidence)} for v in r.verdicts
        ],
        "uniformity": r.uniformity,
        "applicable_theorems": list(r.applicable_theorems),
        "notes": list(r.notes),
    }


def _fmt_evidence(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return "[" + ", ".join(_fmt_evidence(v) for v in value) + "]"
    return str(value)


def emit_report(r: ConvergenceReport, format: str = "json") -> str:
    """Serialize ``r``; floats use the shortest repr that round-trips exactly."""
    doc = _as_dict(r)
    if format == "json":
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if format != "text":
        raise ValueError(f"unknown format {format!r}")

    out = [
        f"sequence:   {doc['sequence_id']}",
        f"interval:   [{doc['interval']['a']:.12g}, {doc['interval']['b']:.12g}]",
        f"ns:         {', '.join(map(str, doc['ns']))}",
        "",
        f"{'n':>8}  {'sup_dev':>20}  {'argmax_x':>20}",
    ]
    for d in doc["deviations"]:
        out.append(f"{d['n']:>8}  {d['sup_dev']:>20.12g}  {d['argmax_x']:>20.12g}")
    out.append("")
    out.append(f"{'criterion':<28}  {'status':<12}  evidence")
    for v in doc["verdicts"]:
        ev = "; ".join(f"{k}={_fmt_evidence(val)}" for k, val in v["evidence"].items())
        out.append(f"{v['criterion']:<28}  {v['status']:<12}  {ev}")
    out.append("")
    out.append(f"uniformity:          {doc['uniformity']}")
    out.append(f"applicable theorems: {', '.join(doc['applicable_theorems']) or '(none)'}")
    for note in doc["notes"]:
        out.append(f"note: {note}")
    return "\n".join(out) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def emit_curves(
    seq: FunctionSequence,
    lim: LimitFunction,
    n_list: Sequence[int],
    g: Grid,
    base_m: int = DEFAULT_GRID_SIZE,
    tol_x: float = DEFAULT_TOL_X,
) -> tuple[str, str]:
    """Return ``(curves_csv, trend_csv)``.

    The curves file has columns ``x, f, f_<n>...`` with one row per grid
    point; the trend file has ``n, sup_dev`` per requested ``n``.
    """
    ns = sorted({int(n) for n in n_list})
    xs = g.points
    cols = [xs, lim(xs)] + [vals for _, vals in seq.iter_values(ns, xs)]
    header = ["x", "f"] + [f"f_{n}" for n in ns]
    curves = _csv([header] + [[repr(float(c[i])) for c in cols] for i in range(xs.size)])
    trend_rows = [["n", "sup_dev"]]
    for n in ns:
        trend_rows.append([str(n), repr(sup_deviation(seq, lim, n, base_m, tol_x).sup_dev)])
    return curves, _csv(trend_rows)
