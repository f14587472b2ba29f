"""Regions of a surface as unions of unit-width slabs.

A slab is what an interval on the left edge of a square sweeps out while the
flow crosses one unit of horizontal distance.  Every region built here (no-go
zone, basins, sweep strips, recurrent and transient sets) starts and stops on
left edges, so it is a union of slabs.  Identifying a slab with its starting
interval on the section ``[0, s)`` turns a region into an ``IntervalSet``, its
area into the length of that set, and region algebra into interval algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import LayoutError, NonCanonical
from .flow import InducedMap, build_geodesic_map, first_hit, first_return_map, DEFAULT_STEP_CAP
from .intervals import IntervalSet
from .numeric import AlphaValue, Coord, NumberField
from .surface import Surface, SystemInstance

__all__ = [
    "RegionSet",
    "Slab",
    "area",
    "contains_point",
    "dump_region",
    "intersect",
    "load_region",
    "no_go_zone",
    "render_svg",
    "reverse_flow_partition",
    "square_areas",
    "subtract",
    "sweep_first_return",
    "union",
]


@dataclass(frozen=True)
class Slab:
    start_square: int
    y_lo: Coord
    y_hi: Coord

    @property
    def area(self):
        return self.y_hi - self.y_lo


class RegionSet:
    """A union of slabs, stored as the set of their starting points on ``[0, s)``."""

    __slots__ = ("s", "alpha", "trace")

    def __init__(self, s: int, alpha: AlphaValue, trace: IntervalSet | None = None):
        self.s = s
        self.alpha = alpha
        self.trace = trace if trace is not None else IntervalSet()

    @classmethod
    def from_slabs(cls, s, alpha, slabs) -> "RegionSet":
        ivs = []
        for sl in slabs:
            if not (0 <= sl.start_square < s) or not (0 <= sl.y_lo < sl.y_hi <= 1):
                raise NonCanonical(f"slab {sl} is not a valid slab of a {s}-square surface")
            ivs.append((sl.y_lo + sl.start_square, sl.y_hi + sl.start_square))
        return cls(s, alpha, IntervalSet(ivs))

    @classmethod
    def whole(cls, s, alpha) -> "RegionSet":
        return cls(s, alpha, IntervalSet([(Coord.of(0, alpha), Coord.of(s, alpha))]))

    def slabs(self) -> list:
        cuts = [Coord.of(k, self.alpha) for k in range(1, self.s)]
        out = []
        for lo, hi in self.trace.split(cuts):
            i = lo.floor()
            out.append(Slab(i, lo - i, hi - i))
        return out

    def __repr__(self):
        return f"RegionSet(s={self.s}, slabs={len(self.slabs())}, area={self.area()})"

    def __eq__(self, other):
        if not isinstance(other, RegionSet):
            return NotImplemented
        return self.s == other.s and self.trace == other.trace

    def __hash__(self):
        return hash((self.s, self.trace))

    def __bool__(self):
        return bool(self.trace)

    def area(self):
        return Coord.of(self.trace.measure(), self.alpha)

    def _check(self, other):
        if self.s != other.s:
            raise ValueError("regions live on different surfaces")

    def __or__(self, other):
        self._check(other)
        return RegionSet(self.s, self.alpha, self.trace | other.trace)

    def __and__(self, other):
        self._check(other)
        return RegionSet(self.s, self.alpha, self.trace & other.trace)

    def __sub__(self, other):
        self._check(other)
        return RegionSet(self.s, self.alpha, self.trace - other.trace)

    def complement(self):
        return RegionSet.whole(self.s, self.alpha) - self

    def issubset(self, other) -> bool:
        return self.trace.issubset(other.trace)


def area(region: RegionSet):
    return region.area()


def union(a: RegionSet, b: RegionSet) -> RegionSet:
    return a | b


def intersect(a: RegionSet, b: RegionSet) -> RegionSet:
    return a & b


def subtract(a: RegionSet, b: RegionSet) -> RegionSet:
    return a - b


def contains_point(region: RegionSet, surface: Surface, square: int, x: float, y: float) -> bool:
    """Float membership of the point ``(x, y)`` of a square (``0 <= x, y < 1``)."""
    y0 = y - float(region.alpha) * x
    sq = square
    bottom = surface.bottom
    while y0 < 0.0:
        y0 += 1.0
        sq = bottom[sq]
    pos = sq + y0
    ivs = region.trace.intervals
    lo, hi = 0, len(ivs)
    while lo < hi:
        m = (lo + hi) // 2
        if float(ivs[m][1]) <= pos:
            lo = m + 1
        else:
            hi = m
    return lo < len(ivs) and float(ivs[lo][0]) <= pos


# ---------------------------------------------------------------------------
# exact areas per square

def _horizontal_length(y0, k, inv_alpha):
    """Length of x in [0, 1) with k <= y0 + alpha*x < k + 1."""
    def clip(t):
        return 0 if t < 0 else (1 if t > 1 else t)

    return clip((k + 1 - y0) * inv_alpha) - clip((k - y0) * inv_alpha)


def square_areas(region: RegionSet, surface: Surface, field: NumberField | None = None) -> dict:
    """Exact area of the region inside each square, as elements of Q(alpha).

    A slab rising through several squares contributes to each; the
    integrand (horizontal time spent in a square) is piecewise linear in the
    starting height, so the trapezoid rule is exact between breakpoints.
    """
    F = field or NumberField(region.alpha)
    a = F.gen
    inv = a.inverse()
    top_count = int(float(region.alpha)) + 2
    out = {i: F(0) for i in range(surface.s)}
    for sl in region.slabs():
        lo, hi = F(sl.y_lo), F(sl.y_hi)
        sq = sl.start_square
        for k in range(top_count):
            cuts = sorted({c for c in (F(k), F(k) - a, F(k + 1), F(k + 1) - a) if lo < c < hi},
                          key=float)
            pts = [lo] + cuts + [hi]
            part = F(0)
            for u, v in zip(pts, pts[1:]):
                part = part + (v - u) * (_horizontal_length(u, k, inv) + _horizontal_length(v, k, inv)) / 2
            if not part.is_zero():
                out[sq] = out[sq] + part
            sq = surface.top[sq]
    return out


# ---------------------------------------------------------------------------
# dumps

def dump_region(region: RegionSet) -> str:
    rows = [{"square": sl.start_square, "lo": sl.y_lo.to_json(), "hi": sl.y_hi.to_json()} for sl in region.slabs()]
    return json.dumps(rows)


def load_region(text: str, s: int, alpha: AlphaValue) -> RegionSet:
    rows = json.loads(text)
    if not isinstance(rows, list):
        raise NonCanonical("a region dump is a JSON list")
    slabs = []
    for r in rows:
        try:
            slabs.append(Slab(int(r["square"]), Coord.of(r["lo"], alpha), Coord.of(r["hi"], alpha)))
        except (KeyError, TypeError, ValueError) as exc:
            raise NonCanonical(f"bad slab record {r!r}: {exc}") from None
    for (a, b) in zip(slabs, slabs[1:]):
        if (a.start_square, a.y_lo) >= (b.start_square, b.y_lo) or (a.start_square == b.start_square and b.y_lo < a.y_hi):
            raise NonCanonical(f"slabs {a} and {b} overlap or are unsorted")
    return RegionSet.from_slabs(s, alpha, slabs)


# ---------------------------------------------------------------------------
# sweeps

def sweep_first_return(instance: SystemInstance, seed: IntervalSet, stop: IntervalSet,
                       cap: int = DEFAULT_STEP_CAP) -> tuple:
    """Sweep ``seed`` by the barrier-free flow until each part lands in ``stop``.

    Returns the swept strip and the first-hit map recording the landings.
    """
    if not seed:
        raise ValueError("seed is empty")
    geo = build_geodesic_map(instance.surface, instance.alpha)
    landing = first_hit(geo, seed, stop, include_start=False, cap=cap)
    return RegionSet(instance.s, instance.alpha, landing.strip()), landing


def strip_of(landing: InducedMap, subset: IntervalSet, s: int, alpha) -> RegionSet:
    """The part of a sweep strip generated by ``subset`` of its seed."""
    return RegionSet(s, alpha, landing.strip(within=subset))


def no_go_zone(instance: SystemInstance) -> RegionSet:
    """Slab swept by B before the flow reaches the next left edge."""
    return RegionSet(instance.s, instance.alpha, instance.barrier_positions())


def reverse_flow_partition(instance: SystemInstance, cap: int = DEFAULT_STEP_CAP) -> tuple:
    """Basins ``(M_B, M_A)``: slabs whose backward orbit meets B (resp. A) first."""
    geo = build_geodesic_map(instance.surface, instance.alpha)
    back = geo.inverse()
    B = instance.barrier_positions()
    A = instance.target_positions()
    whole = RegionSet.whole(instance.s, instance.alpha)
    if not B:
        return RegionSet(instance.s, instance.alpha), whole
    hits = first_hit(back, whole.trace, A | B, include_start=True, cap=cap)
    mb, ma = [], []
    for p in hits.pieces:
        for c, d, inside in B.pieces_in(p.lo + p.shift, p.hi + p.shift):
            (mb if inside else ma).append((c - p.shift, d - p.shift))
    return RegionSet(instance.s, instance.alpha, IntervalSet(mb)), RegionSet(instance.s, instance.alpha, IntervalSet(ma))


# ---------------------------------------------------------------------------
# drawing

def auto_layout(surface: Surface) -> dict:
    """Grid cells for the squares, placing right and top neighbours next to each other."""
    pos = {0: (0, 0)}
    taken = {(0, 0)}
    queue = [0]
    while queue:
        i = queue.pop(0)
        c, r = pos[i]
        for j, cell in ((surface.right[i], (c + 1, r)), (surface.top[i], (c, r + 1)),
                        (surface.left[i], (c - 1, r)), (surface.bottom[i], (c, r - 1))):
            if j not in pos and cell not in taken:
                pos[j] = cell
                taken.add(cell)
                queue.append(j)
    col = max(c for c, _ in pos.values()) + 2
    for i in range(surface.s):
        if i not in pos:
            pos[i] = (col, 0)
            col += 1
    c0 = min(c for c, _ in pos.values())
    r0 = min(r for _, r in pos.values())
    return {i: (c - c0, r - r0) for i, (c, r) in pos.items()}


def _clip_band(poly, k):
    """Sutherland-Hodgman clip of a polygon to k <= y <= k + 1."""
    def clip(points, inside, cross):
        out = []
        for idx, p in enumerate(points):
            q = points[idx - 1]
            if inside(p):
                if not inside(q):
                    out.append(cross(q, p))
                out.append(p)
            elif inside(q):
                out.append(cross(q, p))
        return out

    def at(level):
        def cross(q, p):
            t = (level - q[1]) / (p[1] - q[1])
            return (q[0] + t * (p[0] - q[0]), level)
        return cross

    poly = clip(poly, lambda p: p[1] >= k, at(k))
    if poly:
        poly = clip(poly, lambda p: p[1] <= k + 1, at(k + 1))
    return [(x, y - k) for x, y in poly]


def render_svg(regions, surface: Surface, layout: dict | None = None, unit: int = 120,
               title: str | None = None) -> str:
    """Deterministic SVG of named regions.

    ``regions`` is a list of ``(name, RegionSet, fill)`` triples drawn in order.
    """
    if layout is None:
        layout = auto_layout(surface)
    missing = [i for i in range(surface.s) if i not in layout]
    if missing:
        raise LayoutError(f"squares {missing} have no position in the layout")
    cols = max(c for c, _ in layout.values()) + 1
    rows = max(r for _, r in layout.values()) + 1
    pad = 10
    width, height = cols * unit + 2 * pad, rows * unit + 2 * pad

    def px(i, x, y):
        c, r = layout[i]
        return pad + (c + x) * unit, pad + (rows - 1 - r + 1 - y) * unit

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    lines.append('<rect x="0" y="0" width="100%" height="100%" fill="white"/>')
    for name, region, fill in regions:
        a = float(region.alpha)
        lines.append(f'<g id="{name}" fill="{fill}" stroke="none">')
        for sl in region.slabs():
            lo, hi = float(sl.y_lo), float(sl.y_hi)
            poly = [(0.0, lo), (1.0, lo + a), (1.0, hi + a), (0.0, hi)]
            sq = sl.start_square
            for k in range(int(hi + a) + 1):
                part = _clip_band(poly, k)
                if len(part) >= 3:
                    pts = " ".join("%.4f,%.4f" % px(sq, x, y) for x, y in part)
                    lines.append(f'<polygon points="{pts}"/>')
                sq = surface.top[sq]
        lines.append("</g>")
    lines.append('<g fill="none" stroke="black" stroke-width="1">')
    for i in range(surface.s):
        x, y = px(i, 0, 1)
        lines.append(f'<rect x="{x:.4f}" y="{y:.4f}" width="{unit}" height="{unit}"/>')
        cx, cy = px(i, 0.5, 0.5)
        lines.append(f'<text x="{cx:.4f}" y="{cy:.4f}" font-size="12" text-anchor="middle" '
                     f'fill="#888" stroke="none">{i}</text>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
