"""Piecewise-linear paths in h*/Q delta and their root operators.

A path is stored as its reduced expression: a tuple of ``(direction, duration)``
segments with integer pairing-vector directions and positive ``Fraction``
durations summing to one. Everything is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cartan import AffineCartanDatum, Weight, WeightError

Segment = tuple[Weight, Fraction]

ONE = Fraction(1)
ZERO = Fraction(0)


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class ClPath:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise PathError("a path needs at least one segment")
        total = ZERO
        width = len(self.segments[0][0])
        prev = None
        for d, dur in self.segments:
            if not isinstance(dur, Fraction) or dur <= 0:
                raise PathError(f"non-positive or non-exact duration {dur!r}")
            if len(d) != width:
                raise PathError("directions of different lengths")
            if d == prev:
                raise PathError("expression is not reduced")
            prev = d
            total += dur
        if total != 1:
            raise PathError(f"durations sum to {total}, not 1")

    @classmethod
    def from_segments(cls, segments: Iterable[tuple[Sequence[int], Fraction | int]]) -> "ClPath":
        """Build the reduced expression: drop empty pieces, merge equal neighbours."""
        out: list[list] = []
        for d, dur in segments:
            dur = Fraction(dur)
            if dur == 0:
                continue
            d = tuple(int(x) for x in d)
            if out and out[-1][0] == d:
                out[-1][1] += dur
            else:
                out.append([d, dur])
        return cls(tuple((d, dur) for d, dur in out))

    @classmethod
    def parse(cls, text: str) -> "ClPath":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise PathError(f"cannot parse path {text!r}")
        segs = []
        for m in re.finditer(r"\(([-\d,\s]+)\)@(-?\d+)/(\d+)", body):
            d = tuple(int(x) for x in m.group(1).split(","))
            segs.append((d, Fraction(int(m.group(2)), int(m.group(3)))))
        if not segs:
            raise PathError(f"cannot parse path {text!r}")
        return cls(tuple(segs))

    def __str__(self) -> str:
        parts = []
        for d, dur in self.segments:
            parts.append("(" + ",".join(str(x) for x in d) + f")@{dur.numerator}/{dur.denominator}")
        return "[" + ", ".join(parts) + "]"

    __repr__ = __str__

    @property
    def key(self) -> str:
        return str(self)

    @property
    def weight(self) -> Weight:
        w = [ZERO] * len(self.segments[0][0])
        for d, dur in self.segments:
            for k, x in enumerate(d):
                w[k] += x * dur
        if any(x.denominator != 1 for x in w):
            raise PathError(f"endpoint of {self} is not integral")
        return tuple(int(x) for x in w)

    @property
    def initial(self) -> Weight:
        return self.segments[0][0]

    @property
    def final(self) -> Weight:
        return self.segments[-1][0]

    def is_straight(self) -> bool:
        return len(self.segments) == 1

    def pieces(self):
        """Yield ``(start, end, direction)`` for every segment."""
        t = ZERO
        for d, dur in self.segments:
            yield t, t + dur, d
            t += dur


def straight(mu: Sequence[int], datum: AffineCartanDatum | None = None) -> ClPath:
    if datum is not None and datum.level(mu) != 0:
        raise WeightError(f"{tuple(mu)} is not level zero")
    return ClPath(((tuple(mu), ONE),))


def initial(eta: ClPath) -> Weight:
    return eta.initial


def final(eta: ClPath) -> Weight:
    return eta.final


def weight(eta: ClPath) -> Weight:
    return eta.weight


def evaluate(eta: ClPath, t: Fraction | int) -> tuple[Fraction, ...]:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise PathError(f"t = {t} outside [0, 1]")
    out = [ZERO] * len(eta.segments[0][0])
    for a, b, d in eta.pieces():
        span = min(b, t) - a
        if span <= 0:
            break
        for k, x in enumerate(d):
            out[k] += x * span
    return tuple(out)


def validate(datum: AffineCartanDatum, eta: ClPath) -> None:
    """Datum-dependent invariants: width, level-zero directions, integral endpoint
    and integral local minima of every H_j."""
    n = len(datum.cartan)
    for d, _ in eta.segments:
        if len(d) != n:
            raise PathError(f"{eta}: direction width {len(d)} != {n}")
        if datum.level(d) != 0:
            raise PathError(f"{eta}: direction {d} is not level zero")
    eta.weight
    for j in datum.index_set:
        for v in _local_minima(_heights(eta, j)):
            if v.denominator != 1:
                raise PathError(f"{eta}: H_{j} has a non-integral local minimum {v}")


def _heights(eta: ClPath, j: int) -> list[Fraction]:
    h = [ZERO]
    for d, dur in eta.segments:
        h.append(h[-1] + d[j] * dur)
    return h


def _local_minima(h: list[Fraction]) -> list[Fraction]:
    # consecutive breakpoints never carry equal values on a reduced path with
    # a nonzero slope, but flat segments can; collapse plateaus first
    vals = [h[0]]
    for x in h[1:]:
        if x != vals[-1]:
            vals.append(x)
    mins = []
    for k, v in enumerate(vals):
        left = vals[k - 1] if k > 0 else None
        right = vals[k + 1] if k + 1 < len(vals) else None
        if (left is None or left > v) and (right is None or right > v):
            mins.append(v)
    return mins


def _times(eta: ClPath) -> list[Fraction]:
    ts = [ZERO]
    for _, dur in eta.segments:
        ts.append(ts[-1] + dur)
    return ts


def _minimum(eta: ClPath, j: int, h: list[Fraction]) -> int:
    m = min(h)
    if m.denominator != 1:
        raise PathError(f"{eta}: minimum of H_{j} is {m}, not an integer")
    return int(m)


def _crossing(a, b, ha, hb, level):
    """Time in ``[a, b]`` where the affine function through (a,ha),(b,hb) hits ``level``."""
    if ha == hb:
        return a
    return a + (level - ha) / (hb - ha) * (b - a)


def _raise_cuts(eta: ClPath, j: int):
    h = _heights(eta, j)
    m = _minimum(eta, j, h)
    if m == 0:
        return m, None, None
    ts = _times(eta)
    u1 = next(u for u, v in enumerate(h) if v == m)
    t1 = ts[u1]
    target = m + 1
    for u in range(u1, 0, -1):
        ha, hb = h[u - 1], h[u]
        if hb == target:
            return m, ts[u], t1
        if ha >= target:
            return m, _crossing(ts[u - 1], ts[u], ha, hb, target), t1
    raise AssertionError(f"no t0 for e_{j} on {eta}")


def _lower_cuts(eta: ClPath, j: int):
    h = _heights(eta, j)
    m = _minimum(eta, j, h)
    if h[-1] - m == 0:
        return m, None, None
    ts = _times(eta)
    u0 = max(u for u, v in enumerate(h) if v == m)
    t0 = ts[u0]
    target = m + 1
    for u in range(u0 + 1, len(h)):
        ha, hb = h[u - 1], h[u]
        if hb >= target:
            return m, t0, _crossing(ts[u - 1], ts[u], ha, hb, target)
    raise AssertionError(f"no t1 for f_{j} on {eta}")


def h_profile(eta: ClPath, j: int):
    """``(m_j, t0, t1)`` for the raising operator; ``t0, t1`` are None when m_j = 0."""
    return _raise_cuts(eta, j)


def epsilon(eta: ClPath, j: int) -> int:
    return -_minimum(eta, j, _heights(eta, j))


def phi(eta: ClPath, j: int) -> int:
    h = _heights(eta, j)
    return int(h[-1]) - _minimum(eta, j, h)


def _reflect_middle(datum: AffineCartanDatum, eta: ClPath, j: int, t0: Fraction, t1: Fraction) -> ClPath:
    alpha = datum.simple_root(j)
    segs = []
    for a, b, d in eta.pieces():
        for lo, hi, flip in ((a, min(b, t0), False), (max(a, t0), min(b, t1), True), (max(a, t1), b, False)):
            if hi > lo:
                if flip and d[j]:
                    c = d[j]
                    segs.append((tuple(x - c * y for x, y in zip(d, alpha)), hi - lo))
                else:
                    segs.append((d, hi - lo))
    return ClPath.from_segments(segs)


def raise_path(datum: AffineCartanDatum, eta: ClPath, j: int) -> ClPath | None:
    """The root operator e_j; None stands for the crystal zero."""
    m, t0, t1 = _raise_cuts(eta, j)
    if m == 0:
        return None
    out = _reflect_middle(datum, eta, j, t0, t1)
    assert out.weight == tuple(x + y for x, y in zip(eta.weight, datum.simple_root(j)))
    return out


def lower_path(datum: AffineCartanDatum, eta: ClPath, j: int) -> ClPath | None:
    """The root operator f_j; None stands for the crystal zero."""
    m, t0, t1 = _lower_cuts(eta, j)
    if t0 is None:
        return None
    out = _reflect_middle(datum, eta, j, t0, t1)
    assert out.weight == tuple(x - y for x, y in zip(eta.weight, datum.simple_root(j)))
    return out


def raise_max(datum: AffineCartanDatum, eta: ClPath, j: int) -> ClPath:
    while (nxt := raise_path(datum, eta, j)) is not None:
        eta = nxt
    return eta


def concat(eta1: ClPath, eta2: ClPath) -> ClPath:
    """``eta1 * eta2``: eta1 at double speed on [0, 1/2], then eta2 from eta1(1)."""
    half = Fraction(1, 2)
    segs = [(tuple(2 * x for x in d), dur * half) for d, dur in eta1.segments]
    segs += [(tuple(2 * x for x in d), dur * half) for d, dur in eta2.segments]
    return ClPath.from_segments(segs)


class PathOps:
    """Crystal operations on bare paths, the same interface a CrystalGraph offers."""

    def __init__(self, datum: AffineCartanDatum):
        self.datum = datum

    def raise_(self, eta, j):
        return raise_path(self.datum, eta, j)

    def lower(self, eta, j):
        return lower_path(self.datum, eta, j)

    def eps(self, eta, j):
        return epsilon(eta, j)

    def phi(self, eta, j):
        return phi(eta, j)

    def wt(self, eta):
        return eta.weight
