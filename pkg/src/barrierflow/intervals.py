"""Finite unions of half-open intervals with exact, totally ordered endpoints.

Endpoints may be any type supporting ``<``, ``==``, ``+`` and ``-`` exactly:
``Fraction``, ``Coord`` or ``FieldElement``.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import NonCanonical


def _merge(intervals):
    out = []
    for lo, hi in sorted((iv for iv in intervals if iv[0] < iv[1]), key=lambda iv: iv[0]):
        if out and not out[-1][1] < lo:
            if out[-1][1] < hi:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


class IntervalSet:
    """Sorted, disjoint, non-adjacent half-open intervals ``[lo, hi)``."""

    __slots__ = ("intervals", "_los")

    def __init__(self, intervals: Iterable = (), *, canonical: bool = False):
        ivs = list(intervals) if canonical else _merge(intervals)
        self.intervals = tuple((lo, hi) for lo, hi in ivs)
        self._los = None

    @classmethod
    def checked(cls, intervals) -> "IntervalSet":
        """Accept only input that is already canonical."""
        ivs = [tuple(iv) for iv in intervals]
        for lo, hi in ivs:
            if not lo < hi:
                raise NonCanonical(f"degenerate interval [{lo}, {hi})")
        for (a, b), (c, d) in zip(ivs, ivs[1:]):
            if not b < c:
                raise NonCanonical(f"intervals [{a}, {b}) and [{c}, {d}) overlap, touch or are unsorted")
        return cls(ivs, canonical=True)

    # -- basic protocol -----------------------------------------------------
    def __iter__(self) -> Iterator:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        body = ", ".join(f"[{lo}, {hi})" for lo, hi in self.intervals)
        return f"IntervalSet({body})"

    @property
    def lo(self):
        return self.intervals[0][0]

    @property
    def hi(self):
        return self.intervals[-1][1]

    def measure(self):
        total = None
        for lo, hi in self.intervals:
            d = hi - lo
            total = d if total is None else total + d
        return Fraction(0) if total is None else total

    def endpoints(self) -> list:
        out = []
        for lo, hi in self.intervals:
            out.append(lo)
            out.append(hi)
        return out

    def _starts(self):
        if self._los is None:
            self._los = [lo for lo, _ in self.intervals]
        return self._los

    def index_of(self, x) -> int:
        """Index of the interval containing x, or -1."""
        i = bisect_right(self._starts(), x) - 1
        if i >= 0 and x < self.intervals[i][1]:
            return i
        return -1

    def contains(self, x) -> bool:
        return self.index_of(x) >= 0

    __contains__ = contains

    # -- set algebra --------------------------------------------------------
    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    __or__ = union

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        a, b = self.intervals, other.intervals
        i = j = 0
        out = []
        while i < len(a) and j < len(b):
            lo = a[i][0] if b[j][0] < a[i][0] else b[j][0]
            hi = a[i][1] if a[i][1] < b[j][1] else b[j][1]
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out, canonical=True)

    __and__ = intersection

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        b = other.intervals
        out = []
        j = 0
        for lo, hi in self.intervals:
            while j < len(b) and not lo < b[j][1]:
                j += 1
            cur = lo
            k = j
            while k < len(b) and b[k][0] < hi:
                if cur < b[k][0]:
                    out.append((cur, b[k][0]))
                if cur < b[k][1]:
                    cur = b[k][1]
                k += 1
            if cur < hi:
                out.append((cur, hi))
        return IntervalSet(out, canonical=True)

    __sub__ = difference

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return (self - other) | (other - self)

    __xor__ = symmetric_difference

    def issubset(self, other: "IntervalSet") -> bool:
        return not (self - other)

    def translate(self, c) -> "IntervalSet":
        return IntervalSet(((lo + c, hi + c) for lo, hi in self.intervals), canonical=True)

    def clip(self, lo, hi) -> "IntervalSet":
        return self.intersection(IntervalSet([(lo, hi)], canonical=True))

    def split(self, points) -> list:
        """Intervals of the set cut at every point in ``points`` (not merged)."""
        pts = sorted(set(points))
        out = []
        k = 0
        for lo, hi in self.intervals:
            while k < len(pts) and not lo < pts[k]:
                k += 1
            cur = lo
            m = k
            while m < len(pts) and pts[m] < hi:
                out.append((cur, pts[m]))
                cur = pts[m]
                m += 1
            out.append((cur, hi))
        return out

    def pieces_in(self, lo, hi) -> list:
        """Split ``[lo, hi)`` into (a, b, inside) runs relative to this set."""
        out = []
        starts = self._starts()
        i = max(bisect_right(starts, lo) - 1, 0)
        cur = lo
        ivs = self.intervals
        while i < len(ivs) and ivs[i][0] < hi:
            s, t = ivs[i]
            if t > cur:
                if cur < s:
                    out.append((cur, s, False))
                    cur = s
                e = t if t < hi else hi
                out.append((cur, e, True))
                cur = e
            i += 1
        if cur < hi:
            out.append((cur, hi, False))
        return out
