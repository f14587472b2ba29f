"""Polysquare translation surfaces, one-sided barriers and instance files.

The squares of a surface are numbered 0..s-1.  ``right[i]`` is the square glued
to the right edge of square i and ``top[i]`` the square glued above it.  The
left edges of all squares form the section ``[0, s)``: height y on the left
edge of square i is the point ``i + y``.

A barrier is a union of intervals on left edges.  Flow reaching a barrier point
from the left continues from the matching point of the target set, where the
matching pairs the two sets in order of position, length for length.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import (
    DenominatorMismatch,
    DisconnectedSurface,
    InstanceError,
    LengthMismatch,
    NonRationalEndpoints,
    NotAPermutation,
    SchemaError,
    StreetMismatch,
)
from .intervals import IntervalSet
from .numeric import AlphaValue, Coord, as_fraction, make_alpha

__all__ = [
    "EdgeSet",
    "IntervalSet",
    "Surface",
    "SystemInstance",
    "ValidationReport",
    "glued_reversed_l_surfaces",
    "l_surface",
    "parse_instance",
    "rescale_by",
    "serialize_instance",
    "square_torus",
    "two_square_torus",
    "validate",
]


def _cycles(perm):
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = perm[j]
            out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class Surface:
    right: tuple
    top: tuple

    def __post_init__(self):
        object.__setattr__(self, "right", tuple(int(x) for x in self.right))
        object.__setattr__(self, "top", tuple(int(x) for x in self.top))

    @property
    def s(self) -> int:
        return len(self.right)

    def check(self) -> None:
        s = self.s
        if s < 1:
            raise NotAPermutation("a surface needs at least one square")
        for name, perm in (("right", self.right), ("top", self.top)):
            if len(perm) != s or sorted(perm) != list(range(s)):
                raise NotAPermutation(f"{name} neighbours {list(perm)} are not a permutation of 0..{s - 1}")
        reached = {0}
        stack = [0]
        left = self.left
        bottom = self.bottom
        while stack:
            i = stack.pop()
            for j in (self.right[i], self.top[i], left[i], bottom[i]):
                if j not in reached:
                    reached.add(j)
                    stack.append(j)
        if len(reached) != s:
            raise DisconnectedSurface(f"squares {sorted(set(range(s)) - reached)} are not reachable from square 0")

    @property
    def left(self) -> tuple:
        inv = [0] * self.s
        for i, j in enumerate(self.right):
            inv[j] = i
        return tuple(inv)

    @property
    def bottom(self) -> tuple:
        inv = [0] * self.s
        for i, j in enumerate(self.top):
            inv[j] = i
        return tuple(inv)

    def horizontal_streets(self) -> list:
        return _cycles(self.right)

    def vertical_streets(self) -> list:
        return _cycles(self.top)

    def street_of(self, square: int) -> int:
        for k, cyc in enumerate(self.horizontal_streets()):
            if square in cyc:
                return k
        raise IndexError(square)


@dataclass(frozen=True)
class EdgeSet:
    """Intervals of heights on the left edge of one square."""

    square: int
    intervals: IntervalSet


@dataclass(frozen=True)
class SystemInstance:
    surface: Surface
    barrier: tuple  # of EdgeSet
    target: tuple  # of EdgeSet
    alpha: AlphaValue
    name: str | None = field(default=None, compare=False)

    @property
    def s(self) -> int:
        return self.surface.s

    @property
    def barrier_square(self) -> int | None:
        return self.barrier[0].square if len(self.barrier) == 1 else None

    @property
    def target_square(self) -> int | None:
        return self.target[0].square if len(self.target) == 1 else None

    def coord(self, value) -> Coord:
        return Coord.of(value, self.alpha)

    def _positions(self, edges) -> IntervalSet:
        ivs = []
        for e in edges:
            for lo, hi in e.intervals:
                ivs.append((lo + e.square, hi + e.square))
        return IntervalSet(ivs)

    def barrier_positions(self) -> IntervalSet:
        """B as a subset of the section ``[0, s)``."""
        return self._positions(self.barrier)

    def target_positions(self) -> IntervalSet:
        return self._positions(self.target)

    def jump_segments(self) -> list:
        """``(b_lo, b_hi, shift)`` with B-segment [b_lo, b_hi) sent to A by ``x + shift``."""
        B = list(self.barrier_positions())
        A = list(self.target_positions())
        out = []
        i = j = 0
        pb = B[0][0] if B else None
        pa = A[0][0] if A else None
        while i < len(B) and j < len(A):
            rb = B[i][1] - pb
            ra = A[j][1] - pa
            seg = rb if rb < ra else ra
            out.append((pb, pb + seg, pa - pb))
            pb, pa = pb + seg, pa + seg
            if pb == B[i][1]:
                i += 1
                pb = B[i][0] if i < len(B) else None
            if pa == A[j][1]:
                j += 1
                pa = A[j][0] if j < len(A) else None
        return out

    def with_target(self, target) -> "SystemInstance":
        return SystemInstance(self.surface, self.barrier, tuple(target), self.alpha, self.name)


@dataclass(frozen=True)
class ValidationReport:
    streets: list
    barrier_streets: list
    target_streets: list
    aligned: bool
    rational_endpoints: bool

    def to_json(self):
        return {
            "horizontal_streets": [list(c) for c in self.streets],
            "barrier_streets": self.barrier_streets,
            "target_streets": self.target_streets,
            "aligned": self.aligned,
            "rational_endpoints": self.rational_endpoints,
        }


def validate(instance: SystemInstance) -> ValidationReport:
    """Check the surface and the barrier/target pairing; return street data."""
    surf = instance.surface
    surf.check()
    s = surf.s
    for role, edges in (("barrier", instance.barrier), ("target", instance.target)):
        for e in edges:
            if not 0 <= e.square < s:
                raise InstanceError(f"{role} square {e.square} out of range 0..{s - 1}")
            for lo, hi in e.intervals:
                if lo < 0 or hi > 1 or not lo < hi:
                    raise InstanceError(f"{role} interval [{lo}, {hi}) is not inside [0, 1)")
    B = instance.barrier_positions()
    A = instance.target_positions()
    if B.measure() != A.measure():
        raise LengthMismatch(f"|A| = {A.measure()} differs from |B| = {B.measure()}")
    if A & B:
        raise InstanceError("target and barrier overlap")
    streets = surf.horizontal_streets()
    street_index = {}
    for k, cyc in enumerate(streets):
        for i in cyc:
            street_index[i] = k
    aligned = True
    for b_lo, b_hi, shift in instance.jump_segments():
        sb = b_lo.floor() if isinstance(b_lo, Coord) else int(b_lo // 1)
        a_lo = b_lo + shift
        sa = a_lo.floor() if isinstance(a_lo, Coord) else int(a_lo // 1)
        if sb == sa:
            raise StreetMismatch(f"barrier and target both sit on square {sb}")
        if street_index[sb] != street_index[sa]:
            raise StreetMismatch(
                f"barrier square {sb} (street {street_index[sb]}) and target square {sa} "
                f"(street {street_index[sa]}) lie on different horizontal streets")
        if not (shift == int(shift.rat) and shift.mult == 0 if isinstance(shift, Coord) else Fraction(shift).denominator == 1):
            aligned = False
    rational = all(
        (not isinstance(x, Coord)) or x.mult == 0
        for e in instance.barrier + instance.target
        for iv in e.intervals
        for x in iv
    )
    return ValidationReport(
        streets=streets,
        barrier_streets=sorted({street_index[e.square] for e in instance.barrier}),
        target_streets=sorted({street_index[e.square] for e in instance.target}),
        aligned=aligned,
        rational_endpoints=rational,
    )


# ---------------------------------------------------------------------------
# magnification

def rescale_by(instance: SystemInstance, Q: int) -> SystemInstance:
    """Magnify by Q so that B and A become unions of whole edges of smaller squares.

    Square i of the original becomes a Q x Q block; the sub-square in column u
    and row v gets index ``i*Q*Q + v*Q + u``.
    """
    if not isinstance(Q, int) or Q < 1:
        raise ValueError("Q must be a positive integer")
    surf = instance.surface
    s = surf.s
    idx = lambda i, u, v: i * Q * Q + v * Q + u  # noqa: E731
    right = [0] * (s * Q * Q)
    top = [0] * (s * Q * Q)
    for i in range(s):
        for v in range(Q):
            for u in range(Q):
                k = idx(i, u, v)
                right[k] = idx(i, u + 1, v) if u + 1 < Q else idx(surf.right[i], 0, v)
                top[k] = idx(i, u, v + 1) if v + 1 < Q else idx(surf.top[i], u, 0)

    def blow_up(edges):
        out = []
        for e in edges:
            for lo, hi in e.intervals:
                for x in (lo, hi):
                    if isinstance(x, Coord) and x.mult != 0:
                        raise NonRationalEndpoints(f"endpoint {x} is not rational")
                    r = x.rat if isinstance(x, Coord) else as_fraction(x)
                    if (r * Q).denominator != 1:
                        raise DenominatorMismatch(f"endpoint {r} has a denominator not dividing {Q}")
                a = int((lo.rat if isinstance(lo, Coord) else lo) * Q)
                b = int((hi.rat if isinstance(hi, Coord) else hi) * Q)
                for v in range(a, b):
                    one = Coord.of(1, instance.alpha)
                    out.append(EdgeSet(idx(e.square, 0, v), IntervalSet([(Coord.of(0, instance.alpha), one)])))
        out.sort(key=lambda e: e.square)
        return tuple(out)

    return SystemInstance(Surface(right, top), blow_up(instance.barrier), blow_up(instance.target),
                          instance.alpha, instance.name)


# ---------------------------------------------------------------------------
# configuration files

def _parse_endpoint(x, alpha, path):
    try:
        if isinstance(x, dict):
            if set(x) - {"rat", "mult"}:
                raise SchemaError(f"unexpected keys {sorted(set(x) - {'rat', 'mult'})}", path)
            mult = x.get("mult", 0)
            if not isinstance(mult, int) or isinstance(mult, bool):
                raise SchemaError("mult must be an integer", path)
            return Coord.of({"rat": as_fraction(str(x.get("rat", "0"))), "mult": mult}, alpha)
        if isinstance(x, bool):
            raise SchemaError("endpoint must be a rational string or number", path)
        if isinstance(x, float):
            x = repr(x)
        return Coord.of(as_fraction(x if isinstance(x, int) else str(x)), alpha)
    except SchemaError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad endpoint {x!r}: {exc}", path) from None


def _parse_edges(obj, alpha, path, s):
    if obj is None:
        return ()
    items = obj if isinstance(obj, list) else [obj]
    out = []
    for k, item in enumerate(items):
        p = f"{path}[{k}]" if isinstance(obj, list) else path
        if not isinstance(item, dict) or "square" not in item or "intervals" not in item:
            raise SchemaError("expected an object with 'square' and 'intervals'", p)
        sq = item["square"]
        if not isinstance(sq, int) or isinstance(sq, bool) or not 0 <= sq < s:
            raise SchemaError(f"square must be an integer in 0..{s - 1}", f"{p}.square")
        ivs = []
        if not isinstance(item["intervals"], list):
            raise SchemaError("intervals must be a list of [lo, hi] pairs", f"{p}.intervals")
        for m, iv in enumerate(item["intervals"]):
            ip = f"{p}.intervals[{m}]"
            if not isinstance(iv, list) or len(iv) != 2:
                raise SchemaError("interval must be a [lo, hi] pair", ip)
            lo = _parse_endpoint(iv[0], alpha, ip + "[0]")
            hi = _parse_endpoint(iv[1], alpha, ip + "[1]")
            if not lo < hi:
                raise SchemaError(f"empty interval [{lo}, {hi})", ip)
            if lo < 0 or hi > 1:
                raise SchemaError(f"interval [{lo}, {hi}) leaves the edge [0, 1]", ip)
            ivs.append((lo, hi))
        ordered = sorted(ivs, key=lambda t: t[0])
        for (a, b), (c, d) in zip(ordered, ordered[1:]):
            if c < b:
                raise SchemaError(f"intervals [{a}, {b}) and [{c}, {d}) overlap", f"{p}.intervals")
        out.append(EdgeSet(sq, IntervalSet(ivs)))
    squares = [e.square for e in out]
    if len(set(squares)) != len(squares):
        raise SchemaError("each square may appear once", path)
    out.sort(key=lambda e: e.square)
    return tuple(out)


def parse_instance(text: str | dict) -> SystemInstance:
    """Build an instance from JSON text (or an already decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(exc.msg, line=exc.lineno) from None
    else:
        data = text
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    known = {"squares", "right", "top", "barrier", "target", "alpha", "name"}
    extra = set(data) - known
    if extra:
        raise SchemaError(f"unknown fields {sorted(extra)}")
    for key in ("squares", "right", "top", "alpha"):
        if key not in data:
            raise SchemaError("missing field", key)
    s = data["squares"]
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise SchemaError("must be a positive integer", "squares")
    for key in ("right", "top"):
        v = data[key]
        if not isinstance(v, list) or len(v) != s or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
            raise SchemaError(f"must be a list of {s} integers", key)
    try:
        alpha = make_alpha(data["alpha"])
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"malformed slope: {exc}", "alpha") from None
    except ValueError as exc:
        if isinstance(exc, (SchemaError,)):
            raise
        if type(exc) is ValueError:
            raise SchemaError(str(exc), "alpha") from None
        raise
    barrier = _parse_edges(data.get("barrier"), alpha, "barrier", s)
    target = _parse_edges(data.get("target"), alpha, "target", s)
    return SystemInstance(Surface(data["right"], data["top"]), barrier, target, alpha, data.get("name"))


def _endpoint_json(x):
    if isinstance(x, Coord):
        if x.mult == 0:
            return str(x.rat)
        return x.to_json()
    return str(as_fraction(x))


def _edges_json(edges):
    items = [{"square": e.square, "intervals": [[_endpoint_json(lo), _endpoint_json(hi)] for lo, hi in e.intervals]}
             for e in edges]
    if len(items) == 1:
        return items[0]
    return items


def instance_to_dict(instance: SystemInstance) -> dict:
    out = {}
    if instance.name:
        out["name"] = instance.name
    out.update({
        "squares": instance.s,
        "right": list(instance.surface.right),
        "top": list(instance.surface.top),
        "barrier": _edges_json(instance.barrier),
        "target": _edges_json(instance.target),
        "alpha": instance.alpha.to_json(),
    })
    return out


def serialize_instance(instance: SystemInstance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2) + "\n"


# ---------------------------------------------------------------------------
# small named instances

def _edges(square, intervals, alpha):
    ivs = IntervalSet([(Coord.of(lo, alpha), Coord.of(hi, alpha)) for lo, hi in intervals])
    return (EdgeSet(square, ivs),) if ivs else ()


def square_torus(n: int, alpha: AlphaValue, barrier=None, target=None) -> SystemInstance:
    """A horizontal street of n squares whose top edges are glued to their own bottoms.

    ``barrier`` and ``target`` are ``(square, intervals)`` pairs.
    """
    right = [(i + 1) % n for i in range(n)]
    top = list(range(n))
    b = _edges(barrier[0], barrier[1], alpha) if barrier else ()
    a = _edges(target[0], target[1], alpha) if target else ()
    return SystemInstance(Surface(right, top), b, a, alpha)


def two_square_torus(alpha: AlphaValue, intervals=((0, Fraction(1, 4)),)) -> SystemInstance:
    """Barrier on the edge shared by squares 0 and 1, target on the left edge of square 0."""
    inst = square_torus(2, alpha, (1, intervals), (0, intervals))
    return SystemInstance(inst.surface, inst.barrier, inst.target, alpha, "two-square torus")


def l_surface(alpha: AlphaValue, intervals) -> SystemInstance:
    """The three-square L: bottom-left 0, bottom-right 1, and 2 above square 0.

    The barrier sits on the edge between the bottom squares (left edge of 1) and
    the target on the left edge of square 0, at the same heights.
    """
    surf = Surface([1, 0, 2], [2, 1, 0])
    return SystemInstance(surf, _edges(1, intervals, alpha), _edges(0, intervals, alpha), alpha, "L-surface")


def glued_reversed_l_surfaces(alpha: AlphaValue, b) -> SystemInstance:
    """Two L-surfaces whose top square sits over the right-hand bottom square, stacked.

    Copy one has bottom squares 0, 1 and top square 2 over 1; copy two is
    3, 4, 5 placed above it, so the right-hand columns form a single vertical
    street 1, 2, 4, 5 while each bottom-left square wraps onto itself.  Each
    copy has a barrier of length b at the top of the edge between its bottom
    squares, with target on its bottom-left square.
    """
    b = as_fraction(b)
    right = [1, 0, 2, 4, 3, 5]
    top = [0, 2, 4, 3, 5, 1]
    one = Coord.of(1, alpha)
    iv = IntervalSet([(one - b, one)])
    barrier = (EdgeSet(1, iv), EdgeSet(4, iv))
    target = (EdgeSet(0, iv), EdgeSet(3, iv))
    return SystemInstance(Surface(right, top), barrier, target, alpha, "glued reversed L-surfaces")
