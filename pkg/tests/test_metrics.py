import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dinicheck.errors import MetricError
from dinicheck.funcspace import Grid, Interval, eval_sequence, gallery, make_uniform_grid
from dinicheck.metrics import (
    family_modulus,
    modulus_of_continuity,
    refined_total_variation,
    sup_deviation,
    total_variation,
    window_variations,
    windowed_variation,
)

PROPS = settings(max_examples=1000, deadline=None)


def brute_modulus(v, k):
    # every pair at most k cells apart
    return max((np.abs(v[j:] - v[:-j]).max() for j in range(1, k + 1) if j < v.size), default=0.0)


# --- sup_deviation -----------------------------------------------------------


def test_sup_deviation_monotone_sqrt():
    seq, lim = gallery("monotone_sqrt")
    p = sup_deviation(seq, lim, 4)
    assert p.sup_dev == pytest.approx(0.5, abs=1e-12)
    assert p.argmax_x == 0.0
    assert p.base_grid_size == 4097


def test_sup_deviation_damped_sine():
    seq, lim = gallery("damped_sine")
    p = sup_deviation(seq, lim, 9)
    assert p.sup_dev == pytest.approx(0.1, abs=1e-12)
    # tie between pi/2 and 3pi/2 resolves to the smaller x
    assert p.argmax_x == pytest.approx(math.pi / 2, abs=1e-4)


def test_sup_deviation_bump():
    seq, lim = gallery("bump")
    p = sup_deviation(seq, lim, 100)
    assert p.sup_dev == pytest.approx(0.05, abs=1e-9)
    assert p.argmax_x == pytest.approx(0.1, abs=1e-6)
    assert p.refinement_rounds > 0


@pytest.mark.parametrize("n", [1, 3, 50, 128, 1000])
def test_sup_deviation_tent(n):
    seq, lim = gallery("tent_spike")
    assert sup_deviation(seq, lim, n).sup_dev == pytest.approx(1.0, abs=1e-6)


def test_sup_deviation_finds_off_grid_peak():
    # peak at 1/sqrt(n) is not a grid point for base_m = 33
    seq, lim = gallery("bump")
    p = sup_deviation(seq, lim, 7, base_m=33)
    assert p.sup_dev == pytest.approx(1 / (2 * math.sqrt(7)), abs=1e-12)
    assert p.argmax_x == pytest.approx(1 / math.sqrt(7), abs=1e-6)


def test_sup_deviation_preconditions():
    seq, lim = gallery("bump")
    with pytest.raises(MetricError):
        sup_deviation(seq, lim, 1, base_m=32)
    with pytest.raises(MetricError):
        sup_deviation(seq, lim, 1, tol_x=0.0)


def test_sup_deviation_invariant_holds_at_argmax():
    seq, lim = gallery("fourier_sawtooth")
    p = sup_deviation(seq, lim, 40)
    assert p.sup_dev >= abs(float(seq(40, p.argmax_x)) - float(lim(p.argmax_x))) - 1e-15
    assert seq.domain.contains(p.argmax_x)


# --- modulus -----------------------------------------------------------------


def test_modulus_constant(unit):
    g = make_uniform_grid(unit, 101)
    assert modulus_of_continuity(np.full(101, 3.0), 0.3, g) == 0.0


def test_modulus_sin_dense():
    g = make_uniform_grid(Interval(0, 2 * math.pi), 65537)
    w = modulus_of_continuity(np.sin(g.points), 0.1, g)
    assert 0.0999 <= w <= 0.1
    # the steepest window sits near where |cos| = 1, worth about 2 sin(k h / 2)
    k = int(0.1 // g.spacing)
    assert w == pytest.approx(2 * math.sin(k * g.spacing / 2), abs=1e-9)


def test_modulus_tent_window():
    seq, _ = gallery("tent_spike")
    g = make_uniform_grid(seq.domain, 4097)
    assert modulus_of_continuity(eval_sequence(seq, 8, g), 1 / 16, g) == 1.0


def test_modulus_rejects_small_delta_and_nonuniform(unit):
    g = make_uniform_grid(unit, 11)
    with pytest.raises(MetricError):
        modulus_of_continuity(np.zeros(11), 0.05, g)
    nu = Grid(unit, [0.0, 0.1, 1.0], uniform=False)
    with pytest.raises(MetricError):
        modulus_of_continuity(np.zeros(3), 0.5, nu)


def test_modulus_matches_brute_force():
    rng = np.random.default_rng(5)
    g = make_uniform_grid(Interval(0, 1), 200)
    v = rng.normal(size=200)
    for k in (1, 2, 7, 50, 199, 400):
        delta = k * g.spacing
        assert modulus_of_continuity(v, delta, g) == brute_modulus(v, k)


def test_family_modulus_examples(zero_seq, unit):
    seq, _ = gallery("damped_sine")
    g = make_uniform_grid(seq.domain, 4097)
    est = family_modulus(seq, range(1, 65), g, 0.05)
    assert est.omega <= 0.05 and est.scope == "family"
    assert (est.n_min, est.n_max) == (1, 64)

    assert family_modulus(zero_seq, range(1, 9), make_uniform_grid(unit, 65), 0.2).omega == 0.0

    seq, _ = gallery("tent_spike")
    g = make_uniform_grid(seq.domain, 4097)
    est = family_modulus(seq, range(1, 65), g, 0.01)
    assert est.omega == 1.0
    assert est.witness_n >= 50


def test_family_modulus_empty_range(zero_seq, unit):
    with pytest.raises(MetricError):
        family_modulus(zero_seq, [], make_uniform_grid(unit, 9), 0.5)


# --- total variation ---------------------------------------------------------


def test_total_variation_monotone_sqrt():
    seq, _ = gallery("monotone_sqrt")
    g = make_uniform_grid(seq.domain, 4097)
    assert total_variation(eval_sequence(seq, 1, g)) == pytest.approx(math.sqrt(2) - 1, abs=1e-9)


def test_total_variation_tent():
    seq, _ = gallery("tent_spike")
    g = Grid(seq.domain, [0.0, 0.75, 0.875, 1.0], uniform=False)
    assert total_variation(eval_sequence(seq, 4, g)) == 2.0


def test_total_variation_constant_and_short():
    assert total_variation([2.0] * 10) == 0.0
    with pytest.raises(MetricError):
        total_variation([1.0])


def test_refined_total_variation_tent():
    seq, _ = gallery("tent_spike")
    tv, g = refined_total_variation(seq, 32, make_uniform_grid(seq.domain, 4097))
    assert tv == pytest.approx(2.0, abs=1e-3)
    assert len(g) >= 4097


# --- windowed variation ------------------------------------------------------


def test_windowed_tent():
    seq, _ = gallery("tent_spike")
    p = windowed_variation(seq, 16, make_uniform_grid(seq.domain, 4097), 1 / 16)
    assert p.max_window_variation == pytest.approx(2.0, abs=1e-9)
    assert p.window_left == pytest.approx(15 / 16, abs=1e-3)


def test_windowed_monotone_sqrt():
    seq, _ = gallery("monotone_sqrt")
    p = windowed_variation(seq, 1, make_uniform_grid(seq.domain, 4097), 0.1)
    assert p.max_window_variation == pytest.approx(math.sqrt(1.1) - 1, abs=1e-6)
    assert p.window_left == 0.0


def test_windowed_zero(zero_seq, unit):
    p = windowed_variation(zero_seq, 3, make_uniform_grid(unit, 129), 0.25)
    assert p.max_window_variation == 0.0 and p.total_variation == 0.0


def test_windowed_width_guards(zero_seq, unit):
    g = make_uniform_grid(unit, 11)
    with pytest.raises(MetricError):
        windowed_variation(zero_seq, 1, g, 0.15)
    with pytest.raises(MetricError):
        windowed_variation(zero_seq, 1, g, 1.5)


def test_window_variations_batch_matches_single():
    seq, _ = gallery("bump")
    g = make_uniform_grid(seq.domain, 513)
    widths = [0.25, 0.05]
    for n, profiles in window_variations(seq, [2, 30], g, widths):
        for w, p in zip(widths, profiles):
            single = windowed_variation(seq, n, g, w)
            # the batch samples every width's right ends, a superset
            assert p.max_window_variation >= single.max_window_variation - 1e-15
            assert p.max_window_variation == pytest.approx(single.max_window_variation, rel=1e-3)
    [(_, [p])] = list(window_variations(seq, [30], g, [0.05]))
    assert p == windowed_variation(seq, 30, g, 0.05)


# --- properties --------------------------------------------------------------

_dyadic = st.integers(-(2**20), 2**20).map(lambda k: k / 1024)
_floats = st.floats(-1e3, 1e3, allow_nan=False)


@PROPS
@given(st.lists(_dyadic, min_size=3, max_size=200), st.data())
def test_variation_additivity_exact(values, data):
    c = data.draw(st.integers(1, len(values) - 2))
    assert total_variation(values[: c + 1]) + total_variation(values[c:]) == total_variation(values)


@PROPS
@given(st.lists(_floats, min_size=3, max_size=200), st.data())
def test_variation_additivity_general(values, data):
    c = data.draw(st.integers(1, len(values) - 2))
    whole = total_variation(values)
    parts = total_variation(values[: c + 1]) + total_variation(values[c:])
    assert parts == pytest.approx(whole, rel=4 * np.finfo(float).eps, abs=1e-300)


@PROPS
@given(st.lists(_dyadic, min_size=2, max_size=100))
def test_monotone_exactness(values):
    v = sorted(values)
    assert total_variation(v) == abs(v[-1] - v[0])


@PROPS
@given(
    st.lists(_floats, min_size=5, max_size=150),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
)
def test_modulus_monotone_in_delta(values, u, w):
    m = len(values)
    g = make_uniform_grid(Interval(0, 1), m)
    d1, d2 = sorted((g.spacing * (1 + u * (m - 1)), g.spacing * (1 + w * (m - 1))))
    v = np.array(values)
    w1, w2 = modulus_of_continuity(v, d1, g), modulus_of_continuity(v, d2, g)
    assert w1 <= w2
    assert w1 == brute_modulus(v, int(d1 / g.spacing * (1 + 1e-9)))


@PROPS
@given(
    st.sampled_from(["monotone_sqrt", "damped_sine", "bump", "convex_oscillating", "tent_spike"]),
    st.lists(st.integers(1, 300), min_size=1, max_size=6, unique=True),
    st.integers(2, 40),
)
def test_family_dominance(gid, ns, k):
    seq, _ = gallery(gid)
    g = make_uniform_grid(seq.domain, 257)
    delta = k * g.spacing
    fam = family_modulus(seq, sorted(ns), g, delta)
    for n in ns:
        assert fam.omega >= modulus_of_continuity(eval_sequence(seq, n, g), delta, g)


@PROPS
@given(
    st.sampled_from(["monotone_sqrt", "damped_sine", "bump", "convex_oscillating", "tent_spike", "fourier_sawtooth"]),
    st.integers(1, 200),
    st.integers(2, 200),
)
def test_refinement_monotonicity(gid, n, m):
    seq, _ = gallery(gid)
    g = make_uniform_grid(seq.domain, m)
    coarse = total_variation(eval_sequence(seq, n, g))
    fine = total_variation(eval_sequence(seq, n, g.refine()))
    assert fine >= coarse - 1e-12 * max(1.0, coarse)


@PROPS
@given(
    st.sampled_from(["monotone_sqrt", "damped_sine", "bump", "convex_oscillating", "tent_spike", "fourier_sawtooth"]),
    st.integers(1, 200),
    st.lists(st.floats(0, 1), min_size=1, max_size=50),
)
def test_sup_deviation_is_grid_upper_bound(gid, n, us):
    seq, lim = gallery(gid)
    a, b = seq.domain.a, seq.domain.b
    xs = np.array(sorted({a + u * (b - a) for u in us}))
    if gid == "fourier_sawtooth":
        # the limit jumps at both ends; points closer than ~tol_x can beat
        # any finite refinement of the ridge
        xs = xs[(xs >= 1e-6) & (xs <= b - 1e-6)]
        if xs.size == 0:
            return
    fixed = float(np.abs(seq(n, xs) - lim(xs)).max())
    assert sup_deviation(seq, lim, n, base_m=257).sup_dev >= fixed - 1e-12


@PROPS
@given(
    st.sampled_from(["monotone_sqrt", "bump", "tent_spike", "fourier_sawtooth"]),
    st.integers(1, 300),
    st.integers(2, 60),
)
def test_window_bound(gid, n, k):
    seq, _ = gallery(gid)
    g = make_uniform_grid(seq.domain, 129)
    width = min(k * g.spacing, seq.domain.length)
    p = windowed_variation(seq, n, g, width)
    assert p.max_window_variation <= p.total_variation + 1e-12
    assert seq.domain.a <= p.window_left and p.window_left + width <= seq.domain.b + 1e-12
