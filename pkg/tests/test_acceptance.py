"""Acceptance criteria AC1-AC9, each at its stated tolerance.

Every test records a PASS/FAIL line that the terminal summary prints.
"""

import importlib.util
import io
import math
from pathlib import Path

import numpy as np

from dinicheck.cli import run
from dinicheck.criteria import (
    DEFAULT_WIDTH_FRACTIONS,
    check_convexity,
    check_distributed_variation,
    check_monotone_in_n,
)
from dinicheck.funcspace import gallery, make_uniform_grid
from dinicheck.metrics import refined_total_variation, sup_deviation, windowed_variation
from dinicheck.report import classify

GEOMETRIC = [1, 2, 4, 8, 16, 32, 64, 128]

# Brute-force Gibbs oracle, frozen before the package existed: max over a
# uniform grid of 2**17 + 1 points on [0, 2pi] of |g_n - g|, with g_n the
# plain partial sum and g the sawtooth (0 at both ends).
GIBBS_ORACLE = {
    8: 0.9997406005883218,
    16: 0.9994964599784227,
    32: 0.9990081788446478,
    64: 0.9980316172563083,
    128: 0.9960784994774011,
    256: 0.9921723069579362,
}
GIBBS_FLOOR = min(GIBBS_ORACLE.values())


def _fmt(values):
    return ", ".join(f"{v:.3g}" for v in values)


def test_ac1_monotone_sqrt(acceptance):
    seq, lim = gallery("monotone_sqrt")
    errs = []
    for n in (1, 4, 25, 100):
        p = sup_deviation(seq, lim, n)
        errs.append(max(abs(p.sup_dev - 1 / math.sqrt(n)), abs(p.argmax_x)))
    acceptance("AC1 monotone_sqrt sup = 1/sqrt(n) at x = 0", max(errs) <= 1e-6, f"worst error {max(errs):.3g} (tol 1e-6)")


def test_ac2_damped_sine(acceptance):
    seq, lim = gallery("damped_sine")
    errs = [abs(sup_deviation(seq, lim, n).sup_dev - 1 / (n + 1)) for n in (1, 9, 99)]
    acceptance("AC2 damped_sine sup = 1/(n+1)", max(errs) <= 1e-9, f"worst error {max(errs):.3g} (tol 1e-9)")


def test_ac3_bump_stationary_point(acceptance):
    seq, lim = gallery("bump")
    x_err, d_err = [], []
    for n in (16, 100, 400):
        p = sup_deviation(seq, lim, n)
        x_err.append(abs(p.argmax_x - 1 / math.sqrt(n)))
        d_err.append(abs(p.sup_dev - 1 / (2 * math.sqrt(n))))
    ok = max(x_err) <= 1e-4 and max(d_err) <= 1e-6
    acceptance(
        "AC3 bump argmax 1/sqrt(n), sup 1/(2 sqrt(n))",
        ok,
        f"argmax errors {_fmt(x_err)} (tol 1e-4); sup errors {_fmt(d_err)} (tol 1e-6)",
    )


def test_ac4_convex_oscillating(acceptance):
    seq, lim = gallery("convex_oscillating")
    g = make_uniform_grid(seq.domain, 4097)
    errs = [abs(sup_deviation(seq, lim, n).sup_dev - 1 / n) for n in (2, 4, 8, 16, 32, 64)]
    convex = check_convexity(seq, range(2, 65), g)
    mono = check_monotone_in_n(seq, range(2, 65), g)
    both_ways = mono.evidence["worst_increase"] > 0 and mono.evidence["worst_decrease"] > 0
    ok = max(errs) <= 1e-9 and convex.status == "pass" and mono.status == "fail" and both_ways
    acceptance(
        "AC4 convex_oscillating sup = 1/n, convex, zig-zag in n",
        ok,
        f"worst sup error {max(errs):.3g} (tol 1e-9); convexity {convex.status}; "
        f"monotone {mono.status} (increase n={mono.evidence.get('increase_n')}, "
        f"decrease n={mono.evidence.get('decrease_n')})",
    )


def test_ac5_tent_spike(acceptance):
    seq, lim = gallery("tent_spike")
    g = make_uniform_grid(seq.domain, 4097)
    ns = [2, 4, 8, 16, 32, 64, 128]
    sup_err = max(abs(sup_deviation(seq, lim, n).sup_dev - 1.0) for n in ns)
    tv_err = max(abs(refined_total_variation(seq, n, g)[0] - 2.0) for n in ns)
    win_min = min(windowed_variation(seq, n, g, 2 / n).max_window_variation for n in ns)
    thm3 = check_distributed_variation(seq, range(1, 129), g, DEFAULT_WIDTH_FRACTIONS, 1 / 3)
    report = classify(seq, lim, None, GEOMETRIC)
    ok = (
        sup_err <= 1e-6
        and tv_err <= 1e-3
        and win_min >= 2 - 1e-3
        and thm3.status == "fail"
        and report.applicable_theorems == []
        and report.uniformity == "non_uniform_trend"
    )
    acceptance(
        "AC5 tent_spike counterexample",
        ok,
        f"sup error {sup_err:.3g}; TV error {tv_err:.3g}; min window variation {win_min:.6f}; "
        f"thm3 {thm3.status}; theorems {report.applicable_theorems}; {report.uniformity}",
    )


def _brute_gibbs(m=2**17 + 1, ns=tuple(GIBBS_ORACLE)):
    # independent of the package: direct partial sums on a dense grid
    x = np.linspace(0.0, 2 * np.pi, m)
    target = (np.pi - x) / np.pi
    target[0] = target[-1] = 0.0
    acc = np.zeros_like(x)
    out = {}
    for k in range(1, max(ns) + 1):
        acc += np.sin(k * x) / k
        if k in ns:
            out[k] = float(np.max(np.abs(2 / np.pi * acc - target)))
    return out


def test_ac6_gibbs_persistence(acceptance):
    fresh = _brute_gibbs()
    oracle_stable = all(abs(fresh[n] - v) <= 1e-12 for n, v in GIBBS_ORACLE.items())
    seq, lim = gallery("fourier_sawtooth")
    got = {n: sup_deviation(seq, lim, n).sup_dev for n in GIBBS_ORACLE}
    gaps = {n: abs(got[n] - GIBBS_ORACLE[n]) for n in GIBBS_ORACLE}
    off = [n for n, gap in gaps.items() if gap > 1e-3]
    floor_ok = GIBBS_FLOOR > 0 and all(v >= GIBBS_FLOOR for v in got.values())
    detail = (
        f"F = {GIBBS_FLOOR:.6f}; all >= F: {floor_ok}; oracle reproduced: {oracle_stable}; "
        "gap to oracle by n: " + ", ".join(f"{n}: {gaps[n]:.2e}" for n in GIBBS_ORACLE)
    )
    if off:
        detail += (
            f"; n = {off} exceed 1e-3 because the limit jumps at x = 0, so the refined sup (~1) "
            "sits above any fixed-grid maximum"
        )
    acceptance("AC6 fourier_sawtooth Gibbs persistence", oracle_stable and floor_ok and not off, detail)


def test_ac7_verdict_table(acceptance):
    expected = {
        ("monotone_sqrt", "dini_monotone"): "pass",
        ("damped_sine", "thm1_equicontinuity"): "pass",
        ("bump", "thm1_equicontinuity"): "pass",
        ("convex_oscillating", "thm2_convexity"): "pass",
        ("tent_spike", "thm1_equicontinuity"): "fail",
        ("tent_spike", "thm3_distributed_variation"): "fail",
        ("damped_sine", "thm2_convexity"): "fail",
    }
    got = {}
    for gid in sorted({gid for gid, _ in expected}):
        seq, lim = gallery(gid)
        for v in classify(seq, lim, None, GEOMETRIC).verdicts:
            got[(gid, v.criterion)] = v.status
    wrong = [f"{gid}/{c}: {got.get((gid, c))} != {s}" for (gid, c), s in expected.items() if got.get((gid, c)) != s]
    acceptance("AC7 criteria verdict table", not wrong, "all 7 statuses match" if not wrong else "; ".join(wrong))


_PROPERTY_SUITES = [
    ("test_metrics.py", "test_variation_additivity_exact"),
    ("test_metrics.py", "test_modulus_monotone_in_delta"),
    ("test_metrics.py", "test_family_dominance"),
    ("test_metrics.py", "test_refinement_monotonicity"),
    ("test_metrics.py", "test_sup_deviation_is_grid_upper_bound"),
    ("test_criteria.py", "test_verdict_scaling_invariance"),
    ("test_exprlang.py", "test_round_trip_through_unparse"),
]


def _load(filename):
    path = Path(__file__).with_name(filename)
    spec = importlib.util.spec_from_file_location(f"_acceptance_{path.stem}", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_ac8_property_suites(acceptance):
    modules = {}
    failures, counts = [], []
    for filename, name in _PROPERTY_SUITES:
        module = modules.setdefault(filename, _load(filename))
        fn = getattr(module, name)
        examples = fn._hypothesis_internal_use_settings.max_examples
        counts.append(examples)
        if examples < 1000:
            failures.append(f"{name} runs only {examples} cases")
            continue
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report every suite
            failures.append(f"{name}: {type(exc).__name__}")
    acceptance(
        "AC8 property suites",
        not failures,
        f"{len(_PROPERTY_SUITES)} suites, min {min(counts)} cases each"
        + ("" if not failures else "; " + "; ".join(failures)),
    )


def test_ac9_interface_golden(acceptance, tmp_path):
    args = ["analyze", "--seq", "monotone_sqrt", "--ns", "1..128:geometric", "--grid", "4097"]
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        assert run(args + ["--out", str(path)], io.StringIO(), io.StringIO()) == 0
        outs.append(path.read_bytes())
    identical = outs[0] == outs[1]

    csv = tmp_path / "curves.csv"
    code = run(["curves", "--seq", "monotone_sqrt", "--ns", "1", "--grid", "3", "--out", str(csv)], io.StringIO(), io.StringIO())
    lines = csv.read_text().splitlines() if code == 0 else []
    expected = [[0.0, 0.0, 1.0], [0.5, math.sqrt(0.5), math.sqrt(1.5)], [1.0, 1.0, math.sqrt(2.0)]]
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    rows_ok = (
        lines[:1] == ["x,f,f_1"]
        and len(rows) == 3
        and all(math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-300) for r, e in zip(rows, expected) for a, b in zip(r, e))
    )
    acceptance(
        "AC9 interface golden tests",
        identical and rows_ok,
        f"JSON byte-identical: {identical} ({len(outs[0])} bytes); curves rows match: {rows_ok}",
    )
