"""Input validation shared by the estimator and the CLI."""

from __future__ import annotations

import math
import re
from typing import Sequence

from .funcspace import (
    GALLERY,
    FunctionSequence,
    Interval,
    LimitFunction,
    gallery,
    limit_from_expression,
    sequence_from_expression,
)

DEFAULT_NS_SPEC = "1..128:geometric"

_RANGE_RE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*(?::\s*(geometric|\d+)\s*)?$")


def parse_range_spec(spec: str) -> list[int]:
    """Expand ``lo..hi[:step|geometric]`` or a comma list into sorted ints.

    >>> parse_range_spec("1..128:geometric")
    [1, 2, 4, 8, 16, 32, 64, 128]
    >>> parse_range_spec("3..9:3")
    [3, 6, 9]
    """
    m = _RANGE_RE.match(spec)
    if m:
        lo, hi, step = int(m.group(1)), int(m.group(2)), m.group(3)
        if lo < 1 or hi < lo:
            raise ValueError(f"range {spec!r} needs 1 <= lo <= hi")
        if step == "geometric":
            out = [1 << k for k in range(hi.bit_length() + 1) if lo <= (1 << k) <= hi]
            if not out:
                raise ValueError(f"range {spec!r} contains no power of 2")
            return out
        step = int(step) if step else 1
        if step < 1:
            raise ValueError(f"range step must be >= 1 in {spec!r}")
        return list(range(lo, hi + 1, step))
    try:
        values = sorted({int(part) for part in spec.split(",") if part.strip()})
    except ValueError:
        raise ValueError(f"cannot read n range {spec!r}; use lo..hi[:step|geometric] or a comma list") from None
    if not values or values[0] < 1:
        raise ValueError(f"n values must be positive integers, got {spec!r}")
    return values


def check_n_list(ns, min_len: int = 4) -> list[int]:
    if isinstance(ns, str):
        ns = parse_range_spec(ns)
    out = [int(n) for n in ns]
    if len(out) < min_len:
        raise ValueError(f"need at least {min_len} values of n, got {len(out)}")
    if out[0] < 1 or any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError("values of n must be strictly increasing positive integers")
    return out


def check_interval(interval) -> Interval | None:
    if interval is None or isinstance(interval, Interval):
        return interval
    if isinstance(interval, dict):
        return Interval(interval["a"], interval["b"])
    a, b = interval
    return Interval(a, b)


def check_ladder(ladder: Sequence[float] | None, name: str) -> tuple | None:
    if ladder is None:
        return None
    vals = tuple(float(v) for v in ladder)
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise ValueError(f"{name} must be a non-empty list of positive numbers")
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"{name} must be strictly decreasing")
    return vals


def check_grid_size(m) -> int:
    m = int(m)
    if m < 33:
        raise ValueError(f"grid size must be >= 33, got {m}")
    return m


def resolve_sequence(
    sequence, limit=None, interval: Interval | None = None
) -> tuple[FunctionSequence, LimitFunction]:
    """Turn a gallery id, expression text or ready object into ``(seq, lim)``.

    Expression sequences need an explicit limit; limits are never inferred.
    """
    if isinstance(sequence, FunctionSequence):
        seq, lim = sequence, limit
        if isinstance(lim, str):
            lim = limit_from_expression(lim, interval or seq.domain)
        if not isinstance(lim, LimitFunction):
            raise ValueError("a LimitFunction or limit expression is required")
        return seq, lim
    if not isinstance(sequence, str):
        raise TypeError(f"sequence must be a gallery id, expression text or FunctionSequence, got {type(sequence)!r}")
    if sequence in GALLERY:
        seq, lim = gallery(sequence)
        if limit is not None:
            lim = limit_from_expression(limit, seq.domain) if isinstance(limit, str) else limit
        return seq, lim
    domain = interval or Interval(0.0, 1.0)
    seq = sequence_from_expression(sequence, domain)
    if limit is None:
        raise ValueError(f"expression sequence {sequence!r} needs an explicit limit")
    lim = limit_from_expression(limit, domain) if isinstance(limit, str) else limit
    return seq, lim
