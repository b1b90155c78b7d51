"""Sup-norm deviation, modulus of continuity and total variation estimates.

All estimates are grid lower bounds: refining the sample set can only make
them larger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .errors import MetricError
from .funcspace import FunctionSequence, Grid, LimitFunction, eval_sequence, make_uniform_grid

__all__ = [
    "DEFAULT_GRID_SIZE",
    "DEFAULT_TOL_X",
    "DeviationProfile",
    "ModulusEstimate",
    "VariationProfile",
    "sup_deviation",
    "modulus_of_continuity",
    "family_modulus",
    "total_variation",
    "refined_total_variation",
    "windowed_variation",
    "window_variations",
]

DEFAULT_GRID_SIZE = 4097
DEFAULT_TOL_X = 1e-9
N_CANDIDATES = 5
MIN_BASE_GRID = 33
# guards floor(delta / spacing) against delta being a hair below a multiple
_CELL_SLACK = 1e-9


@dataclass(frozen=True)
class DeviationProfile:
    n: int
    sup_dev: float
    argmax_x: float
    base_grid_size: int
    refinement_rounds: int


@dataclass(frozen=True)
class ModulusEstimate:
    delta: float
    omega: float
    scope: str  # "single" or "family"
    n_min: int
    n_max: int
    witness_n: int | None = None


@dataclass(frozen=True)
class VariationProfile:
    n: int
    total_variation: float
    window_width: float
    max_window_variation: float
    window_left: float


def _local_maxima(d: np.ndarray) -> np.ndarray:
    left = np.concatenate(([-np.inf], d[:-1]))
    right = np.concatenate((d[1:], [-np.inf]))
    return np.flatnonzero((d >= left) & (d >= right))


def sup_deviation(
    seq: FunctionSequence,
    lim: LimitFunction,
    n: int,
    base_m: int = DEFAULT_GRID_SIZE,
    tol_x: float = DEFAULT_TOL_X,
) -> DeviationProfile:
    """Estimate ``sup |f_n - f|`` over the sequence's domain.

    Samples a uniform grid of ``base_m`` points, then bisects the cells next
    to the five largest local maxima and the two end cells until each bracket is narrower than
    ``tol_x``. The result never falls below the grid maximum; ties go to the
    smallest ``x``.
    """
    if base_m < MIN_BASE_GRID:
        raise MetricError(f"base_m must be >= {MIN_BASE_GRID}, got {base_m}")
    if not tol_x > 0:
        raise MetricError(f"tol_x must be positive, got {tol_x}")

    def dev(x):
        d = np.abs(seq(n, x) - lim(x))
        if not np.all(np.isfinite(d)):
            raise MetricError(f"non-finite deviation for n={n}")
        return d

    grid = make_uniform_grid(seq.domain, base_m)
    xs = grid.points
    d = dev(xs)

    peaks = _local_maxima(d)
    # stable sort on -d keeps the smaller x first among equal values
    peaks = peaks[np.argsort(-d[peaks], kind="stable")][:N_CANDIDATES]
    # a ridge squeezed against an endpoint (limit discontinuous there) has no
    # grid local maximum, so the two end cells are always searched as well
    peaks = np.union1d(peaks, [0, xs.size - 1])

    lo = xs[np.maximum(peaks - 1, 0)].copy()
    hi = xs[np.minimum(peaks + 1, xs.size - 1)].copy()
    bx = xs[peaks].copy()
    bd = d[peaks].copy()

    rounds = 0
    while np.any(hi - lo >= tol_x):
        rounds += 1
        ml = 0.5 * (lo + bx)
        mr = 0.5 * (bx + hi)
        dl = dev(ml)
        dr = dev(mr)
        # left probe wins ties with the centre (smaller x); right must beat it
        take_l = (dl >= bd) & (dl >= dr) & (ml < bx)
        take_r = ~take_l & (dr > bd)
        new_lo = np.where(take_l, lo, np.where(take_r, bx, ml))
        new_hi = np.where(take_l, bx, np.where(take_r, hi, mr))
        bx = np.where(take_l, ml, np.where(take_r, mr, bx))
        bd = np.where(take_l, dl, np.where(take_r, dr, bd))
        lo, hi = new_lo, new_hi
        if rounds > 200:
            break

    cand_x = np.concatenate((bx, xs[[int(np.argmax(d))]]))
    cand_d = np.concatenate((bd, [d.max()]))
    best = cand_d.max()
    x_best = float(cand_x[cand_d == best].min())
    return DeviationProfile(int(n), float(best), x_best, int(base_m), rounds)


def _cells(delta: float, spacing: float) -> int:
    if delta < spacing * (1 - _CELL_SLACK):
        raise MetricError(f"delta={delta} is smaller than the grid spacing {spacing}")
    return int(math.floor(delta / spacing * (1 + _CELL_SLACK)))


def modulus_of_continuity(values: Sequence[float], delta: float, grid: Grid) -> float:
    """Largest ``|v_i - v_j|`` over grid pairs with ``|x_i - x_j| <= delta``.

    Exact on the grid: a running max/min over windows of
    ``floor(delta / spacing) + 1`` consecutive samples.
    """
    if not grid.uniform:
        raise MetricError("modulus_of_continuity needs a uniform grid")
    v = np.asarray(values, dtype=float)
    if v.size != len(grid):
        raise MetricError(f"got {v.size} values for a grid of {len(grid)} points")
    size = min(_cells(delta, grid.spacing) + 1, v.size)
    # edge windows are truncated (mode="nearest" repeats a sample), which
    # only ever drops pairs, so the maximum over windows is unchanged
    hi = maximum_filter1d(v, size, mode="nearest")
    lo = minimum_filter1d(v, size, mode="nearest")
    return float(np.max(hi - lo))


def family_modulus(seq: FunctionSequence, n_range: Sequence[int], g: Grid, delta: float) -> ModulusEstimate:
    ns = list(n_range)
    if not ns:
        raise MetricError("n_range is empty")
    if not seq.domain.includes(g.interval):
        raise MetricError(f"grid interval {g.interval} is not inside the domain {seq.domain}")
    omega, witness = -1.0, None
    for n, values in seq.iter_values(ns, g.points):
        w = modulus_of_continuity(values, delta, g)
        if w > omega:
            omega, witness = w, n
    return ModulusEstimate(float(delta), omega, "family", min(ns), max(ns), witness)


def total_variation(values: Sequence[float]) -> float:
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise MetricError("total_variation needs at least 2 values")
    return math.fsum(np.abs(np.diff(v)))


def refined_total_variation(
    seq: FunctionSequence,
    n: int,
    g: Grid,
    rel_tol: float = 1e-6,
    max_rounds: int = 6,
) -> tuple[float, Grid]:
    """Total variation of ``f_n``, refining ``g`` until a round changes it by < ``rel_tol``."""
    tv = total_variation(eval_sequence(seq, n, g))
    for _ in range(max_rounds):
        finer = g.refine()
        tv_f = total_variation(eval_sequence(seq, n, finer))
        done = abs(tv_f - tv) <= rel_tol * max(tv_f, 1e-300)
        tv, g = tv_f, finer
        if done:
            break
    return tv, g


def _window_ends(g: Grid, width: float) -> tuple[np.ndarray, np.ndarray]:
    if width < 2 * g.spacing * (1 - _CELL_SLACK):
        raise MetricError(f"width={width} is below twice the grid spacing {g.spacing}")
    pts = g.points
    b = g.interval.b
    right = pts + width
    fits = right <= b + 4 * np.spacing(abs(b))
    if not fits.any():
        raise MetricError(f"width={width} exceeds the interval {g.interval}")
    return pts[fits], np.minimum(right[fits], b)


def window_variations(seq: FunctionSequence, ns: Sequence[int], g: Grid, widths: Sequence[float]):
    """Yield ``n -> [VariationProfile per width]`` for every ``n`` in ``ns``.

    One evaluation per ``n`` covers all widths: the sample set is the grid
    plus every window's right end.
    """
    if not seq.domain.includes(g.interval):
        raise MetricError(f"grid interval {g.interval} is not inside the domain {seq.domain}")
    ends = [_window_ends(g, w) for w in widths]
    union = np.unique(np.concatenate([g.points] + [r for _, r in ends]))
    index = [(np.searchsorted(union, left), np.searchsorted(union, right), left) for left, right in ends]
    for n, vals in seq.iter_values(ns, union):
        steps = np.abs(np.diff(vals))
        cum = np.concatenate(([0.0], np.cumsum(steps)))
        total = math.fsum(steps)
        profiles = []
        for w, (il, ir, left) in zip(widths, index):
            win = cum[ir] - cum[il]
            k = int(np.argmax(win))  # first maximum = smallest left endpoint
            profiles.append(VariationProfile(n, total, float(w), float(min(win[k], total)), float(left[k])))
        yield n, profiles


def windowed_variation(seq: FunctionSequence, n: int, g: Grid, width: float) -> VariationProfile:
    """Largest variation of ``f_n`` over a window ``[x_i, x_i + width]``.

    Windows start at every grid point where they fit. Each window's right
    end is sampled too, and the full-interval variation is taken over the
    same enlarged point set, so the window maximum never exceeds it.
    """
    [(_, [profile])] = list(window_variations(seq, [n], g, [width]))
    return profile
