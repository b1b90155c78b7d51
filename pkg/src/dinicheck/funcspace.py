"""Intervals, sampling grids, function sequences and the built-in gallery."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError
from .exprlang import Expression, evaluate_array, parse, uses_n

__all__ = [
    "Interval",
    "Grid",
    "ExpressionBody",
    "Builtin",
    "FunctionSequence",
    "LimitFunction",
    "make_uniform_grid",
    "eval_sequence",
    "gallery",
    "GALLERY",
    "GALLERY_IDS",
    "FOURIER_MAX_TERMS",
    "sequence_from_expression",
    "limit_from_expression",
]

FOURIER_MAX_TERMS = 4096


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise ValueError(f"interval needs a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.a) & (x <= self.b)))

    def includes(self, other: "Interval") -> bool:
        return self.a <= other.a and other.b <= self.b


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing sample points spanning ``interval`` end to end."""

    interval: Interval
    points: np.ndarray
    uniform: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a grid needs at least 2 points")
        if not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        if pts[0] != self.interval.a or pts[-1] != self.interval.b:
            raise ValueError("grid must start at a and end at b")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        """Cell width of a uniform grid (largest cell otherwise)."""
        if self.uniform:
            return self.interval.length / (self.points.size - 1)
        return float(np.diff(self.points).max())

    def refine(self) -> "Grid":
        """Insert every cell midpoint; the result contains all current points."""
        pts = self.points
        out = np.empty(2 * pts.size - 1)
        out[0::2] = pts
        out[1::2] = 0.5 * (pts[:-1] + pts[1:])
        return Grid(self.interval, out, self.uniform)

    def restrict(self, lo: int, hi: int) -> "Grid":
        """Sub-grid over points ``lo..hi`` inclusive."""
        pts = self.points[lo : hi + 1]
        return Grid(Interval(pts[0], pts[-1]), pts, self.uniform)


def make_uniform_grid(interval: Interval, m: int) -> Grid:
    if m < 2:
        raise ValueError(f"a uniform grid needs m >= 2 points, got {m}")
    pts = np.linspace(interval.a, interval.b, int(m))
    pts[-1] = interval.b
    return Grid(interval, pts, uniform=True)


@dataclass(frozen=True)
class ExpressionBody:
    expression: Expression
    source: str


@dataclass(frozen=True)
class Builtin:
    name: str
    params: tuple = ()


Body = Union[ExpressionBody, Builtin]


@dataclass(frozen=True)
class FunctionSequence:
    """The family ``(n, x) -> f_n(x)`` on ``domain``."""

    id: str
    body: Body
    domain: Interval
    _fn: Callable = field(default=None, repr=False, compare=False)

    def __call__(self, n: int, x) -> np.ndarray:
        n = int(n)
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        x = np.asarray(x, dtype=float)
        if isinstance(self.body, ExpressionBody):
            return evaluate_array(self.body.expression, x, n)
        out = np.asarray(self._fn(n, x), dtype=float)
        bad = ~np.isfinite(out)
        if bad.any():
            raise DomainError("non-finite value", -1, float(x.flat[int(np.argmax(bad))]), n)
        return out

    def iter_values(self, ns, x):
        """Yield ``(n, f_n(x))`` for ``ns`` in ascending order."""
        ns = sorted(int(n) for n in ns)
        x = np.asarray(x, dtype=float)
        if isinstance(self.body, Builtin) and self.body.name == "fourier_sawtooth":
            yield from _fourier_partial_sums(ns, x)
            return
        for n in ns:
            yield n, self(n, x)


@dataclass(frozen=True)
class LimitFunction:
    id: str
    body: Body
    domain: Interval
    _fn: Callable = field(default=None, repr=False, compare=False)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if isinstance(self.body, ExpressionBody):
            try:
                return evaluate_array(self.body.expression, x, 1)
            except DomainError as exc:
                raise DomainError(exc.reason, exc.position, exc.x) from None
        out = np.asarray(self._fn(x), dtype=float)
        bad = ~np.isfinite(out)
        if bad.any():
            raise DomainError("non-finite value", -1, float(x.flat[int(np.argmax(bad))]))
        return out


def sequence_from_expression(source: str, domain: Interval, id: str | None = None) -> FunctionSequence:
    return FunctionSequence(id or source, ExpressionBody(parse(source), source), domain)


def limit_from_expression(source: str, domain: Interval, id: str | None = None) -> LimitFunction:
    expr = parse(source)
    if uses_n(expr):
        raise ValueError(f"limit expression {source!r} must not depend on n")
    return LimitFunction(id or source, ExpressionBody(expr, source), domain)


def eval_sequence(seq: FunctionSequence, n: int, g: Grid) -> np.ndarray:
    if not seq.domain.includes(g.interval):
        raise ValueError(f"grid interval {g.interval} is not inside the domain {seq.domain}")
    return seq(n, g.points)


# --- gallery ---------------------------------------------------------------


def _tent(n, x):
    # Tent of height 1 on [1 - 1/n, 1]; zeros are pinned so that the
    # support edges and x = 1 evaluate to exactly 0.
    centre = 1.0 - 1.0 / (2 * n)
    out = np.maximum(0.0, 1.0 - 2 * n * np.abs(x - centre))
    return np.where((x <= 1.0 - 1.0 / n) | (x >= 1.0), 0.0, out)


def _fourier(n, x):
    if n > FOURIER_MAX_TERMS:
        raise ValueError(f"fourier_sawtooth supports n <= {FOURIER_MAX_TERMS}, got {n}")
    flat = np.ravel(x)
    total = np.zeros(flat.shape)
    # chunk over k to bound memory at n * chunk floats
    for k0 in range(1, n + 1, 256):
        k = np.arange(k0, min(n, k0 + 255) + 1, dtype=float)
        total += (np.sin(np.outer(k, flat)) / k[:, None]).sum(axis=0)
    return (2.0 / np.pi * total).reshape(np.shape(x))


def _fourier_partial_sums(ns, x):
    if ns and ns[-1] > FOURIER_MAX_TERMS:
        raise ValueError(f"fourier_sawtooth supports n <= {FOURIER_MAX_TERMS}, got {ns[-1]}")
    if ns and ns[0] < 1:
        raise ValueError(f"n must be >= 1, got {ns[0]}")
    total = np.zeros(x.shape)
    k = 0
    for n in ns:
        while k < n:
            k += 1
            total += np.sin(k * x) / k
        yield n, 2.0 / np.pi * total


def _sawtooth(x):
    out = (np.pi - x) / np.pi
    return np.where((x == 0.0) | (x == 2 * np.pi), 0.0, out)


@dataclass(frozen=True)
class _GalleryEntry:
    description: str
    example: str
    interval: tuple
    seq: Callable
    lim: Callable


GALLERY = {
    "monotone_sqrt": _GalleryEntry(
        "f_n(x) = sqrt(x + 1/n) -> sqrt(x), decreasing in n",
        "Example 1",
        (0.0, 1.0),
        lambda n, x: np.sqrt(x + 1.0 / n),
        np.sqrt,
    ),
    "damped_sine": _GalleryEntry(
        "f_n(x) = sin(x)/(1 + 1/n) -> sin(x), equicontinuous",
        "Example 2",
        (0.0, 2 * np.pi),
        lambda n, x: np.sin(x) / (1.0 + 1.0 / n),
        np.sin,
    ),
    "bump": _GalleryEntry(
        "f_n(x) = x/(1 + n x^2) -> 0, equicontinuous, peak at 1/sqrt(n)",
        "Example 2",
        (0.0, 1.0),
        lambda n, x: x / (1.0 + n * x * x),
        np.zeros_like,
    ),
    "convex_oscillating": _GalleryEntry(
        "f_n(x) = (1 + (-1)^n/n) x^2 -> x^2, convex but not monotone in n",
        "Example 3",
        (0.0, 1.0),
        lambda n, x: (1.0 + (-1.0) ** n / n) * x * x,
        lambda x: x * x,
    ),
    "tent_spike": _GalleryEntry(
        "unit tent on [1 - 1/n, 1] -> 0, pointwise but not uniform",
        "Example 4",
        (0.0, 1.0),
        _tent,
        np.zeros_like,
    ),
    "fourier_sawtooth": _GalleryEntry(
        "g_n(x) = (2/pi) sum_k sin(kx)/k -> (pi - x)/pi, Gibbs overshoot",
        "Example 5",
        (0.0, 2 * np.pi),
        _fourier,
        _sawtooth,
    ),
}
GALLERY_IDS = tuple(GALLERY)


def gallery(id: str) -> tuple[FunctionSequence, LimitFunction]:
    try:
        entry = GALLERY[id]
    except KeyError:
        raise KeyError(f"unknown gallery id {id!r}; choose from {', '.join(GALLERY_IDS)}") from None
    domain = Interval(*entry.interval)
    seq = FunctionSequence(id, Builtin(id), domain, entry.seq)
    lim = LimitFunction(f"{id}_limit", Builtin(id), domain, entry.lim)
    return seq, lim
