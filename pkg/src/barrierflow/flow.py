"""Exact one-step maps on the section ``[0, s)``, first-return maps and a float oracle.

One step of a map moves a point on the left edge of some square across one
unit of horizontal distance to the next left edge.  Both the barrier-free map
and the dissipative map are piecewise translations; their pieces are stored
with exact ``Coord`` endpoints so that orbits of intervals can be followed
without rounding.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import kernels
from .errors import BarrierEndpointHit, IterationCapExceeded
from .intervals import IntervalSet
from .numeric import AlphaValue, Coord
from .surface import Surface, SystemInstance

__all__ = [
    "DEFAULT_STEP_CAP",
    "InducedMap",
    "InducedPiece",
    "Piece",
    "TransferMap",
    "build_dissipative_map",
    "build_geodesic_map",
    "first_hit",
    "first_return_map",
    "kac_check",
    "sampled_return_times",
    "simulate_batch",
    "simulate_trajectory",
]

DEFAULT_STEP_CAP = 10 ** 6


@dataclass(frozen=True)
class Piece:
    lo: Coord
    hi: Coord
    shift: Coord
    kind: str = "step"  # or "jump"

    @property
    def image(self):
        return (self.lo + self.shift, self.hi + self.shift)


class TransferMap:
    """A piecewise translation of ``[0, s)``."""

    def __init__(self, s: int, alpha: AlphaValue, pieces):
        self.s = s
        self.alpha = alpha
        self.pieces = tuple(sorted(pieces, key=lambda p: p.lo))
        self._los = [p.lo for p in self.pieces]

    def __repr__(self):
        return f"TransferMap(s={self.s}, pieces={len(self.pieces)})"

    @property
    def total_src_length(self):
        return IntervalSet((p.lo, p.hi) for p in self.pieces).measure()

    def piece_index(self, x) -> int:
        return bisect_right(self._los, x) - 1

    def __call__(self, x):
        x = Coord.of(x, self.alpha)
        return x + self.pieces[self.piece_index(x)].shift

    def split(self, lo, hi) -> Iterator:
        """Cut ``[lo, hi)`` at the piece boundaries, yielding ``(a, b, piece)``."""
        k = self.piece_index(lo)
        pieces = self.pieces
        cur = lo
        while cur < hi:
            p = pieces[k]
            end = p.hi if p.hi < hi else hi
            yield cur, end, p
            cur = end
            k += 1

    def image(self, region: IntervalSet) -> IntervalSet:
        out = []
        for lo, hi in region:
            for a, b, p in self.split(lo, hi):
                out.append((a + p.shift, b + p.shift))
        return IntervalSet(out)

    def preimage(self, region: IntervalSet) -> IntervalSet:
        out = []
        for p in self.pieces:
            ilo, ihi = p.image
            for a, b in region.clip(ilo, ihi):
                out.append((a - p.shift, b - p.shift))
        return IntervalSet(out)

    def is_bijective(self) -> bool:
        src = IntervalSet((p.lo, p.hi) for p in self.pieces)
        img = [p.image for p in self.pieces]
        total = sum((b - a for a, b in img), start=Coord.of(0, self.alpha))
        full = IntervalSet([(Coord.of(0, self.alpha), Coord.of(self.s, self.alpha))])
        return src == full and IntervalSet(img) == full and total == self.s

    def inverse(self) -> "TransferMap":
        if not self.is_bijective():
            raise ValueError("only a bijective map can be inverted")
        return TransferMap(self.s, self.alpha, [Piece(*p.image, -p.shift, p.kind) for p in self.pieces])

    def discontinuities(self) -> list:
        return [p.lo for p in self.pieces] + [self.pieces[-1].hi]

    def float_tables(self):
        """Arrays ``(lo, shift)`` for the float kernels."""
        lo = np.array([float(p.lo) for p in self.pieces], dtype=np.float64)
        sh = np.array([float(p.shift) for p in self.pieces], dtype=np.float64)
        return lo, sh


def build_geodesic_map(surface: Surface, alpha: AlphaValue) -> TransferMap:
    """One unit step of the barrier-free flow, as an exchange of 2s intervals."""
    a = Coord._mk(0, 1, alpha)
    m0 = a.floor()
    cut = 1 - (a - m0)  # heights above this cross one more top edge
    pieces = []
    for i in range(surface.s):
        for lo, hi, m in ((Coord.of(0, alpha), cut, m0), (cut, Coord.of(1, alpha), m0 + 1)):
            j = i
            for _ in range(m):
                j = surface.top[j]
            target = surface.right[j]
            pieces.append(Piece(lo + i, hi + i, a + (target - i - m)))
    return TransferMap(surface.s, alpha, pieces)


def build_dissipative_map(instance: SystemInstance) -> TransferMap:
    """The geodesic step, with landings on the barrier sent on to the target."""
    geo = build_geodesic_map(instance.surface, instance.alpha)
    jumps = instance.jump_segments()
    if not jumps:
        return geo
    B = IntervalSet((lo, hi) for lo, hi, _ in jumps)
    pieces = []
    for p in geo.pieces:
        ilo, ihi = p.image
        for a, b, inside in B.pieces_in(ilo, ihi):
            if not inside:
                pieces.append(Piece(a - p.shift, b - p.shift, p.shift, p.kind))
                continue
            # a run inside B may still cross several matching segments
            k = bisect_right([j[0] for j in jumps], a) - 1
            cur = a
            while cur < b:
                jlo, jhi, jsh = jumps[k]
                end = jhi if jhi < b else b
                pieces.append(Piece(cur - p.shift, end - p.shift, p.shift + jsh, "jump"))
                cur = end
                k += 1
    return TransferMap(instance.s, instance.alpha, pieces)


# ---------------------------------------------------------------------------
# first return and first hit

class _Node:
    """Linked path of offsets; ``offset`` is the total translation so far."""

    __slots__ = ("prev", "offset")

    def __init__(self, prev, offset):
        self.prev = prev
        self.offset = offset

    def offsets(self) -> list:
        out = []
        node = self
        while node is not None:
            out.append(node.offset)
            node = node.prev
        out.reverse()
        return out


@dataclass(frozen=True)
class InducedPiece:
    lo: Coord
    hi: Coord
    shift: Coord
    steps: int
    node: _Node

    @property
    def image(self):
        return (self.lo + self.shift, self.hi + self.shift)

    @property
    def length(self):
        return self.hi - self.lo


class InducedMap:
    """Pieces of a section with their first hitting times and total translations."""

    def __init__(self, domain: IntervalSet, pieces, alpha: AlphaValue, s: int):
        self.domain = domain
        self.pieces = tuple(sorted(pieces, key=lambda p: p.lo))
        self.alpha = alpha
        self.s = s
        self._los = [p.lo for p in self.pieces]

    def __repr__(self):
        return f"InducedMap(pieces={len(self.pieces)}, threshold={self.threshold})"

    @property
    def threshold(self) -> int:
        return max((p.steps for p in self.pieces), default=0)

    def piece_at(self, x) -> InducedPiece | None:
        k = bisect_right(self._los, x) - 1
        if k >= 0 and x < self.pieces[k].hi:
            return self.pieces[k]
        return None

    def __call__(self, x):
        p = self.piece_at(Coord.of(x, self.alpha))
        if p is None:
            raise ValueError(f"{x} is outside the domain")
        return x + p.shift

    def image(self) -> IntervalSet:
        return IntervalSet(p.image for p in self.pieces)

    def path(self, piece: InducedPiece) -> list:
        """Offsets of the piece after 0, 1, ..., steps-1 steps."""
        return piece.node.offsets()[:piece.steps]

    def strip(self, within: IntervalSet | None = None) -> IntervalSet:
        """Union of the positions visited before the hit, as a subset of the section."""
        out = []
        for p in self.pieces:
            if within is None:
                parts = [(p.lo, p.hi)]
            else:
                parts = list(within.clip(p.lo, p.hi))
            if not parts:
                continue
            for off in self.path(p):
                for a, b in parts:
                    out.append((a + off, b + off))
        return IntervalSet(out)

    def merged(self) -> "InducedMap":
        """Adjacent pieces with equal translation and time combined."""
        out = []
        for p in self.pieces:
            if out and out[-1].hi == p.lo and out[-1].shift == p.shift and out[-1].steps == p.steps:
                q = out[-1]
                out[-1] = InducedPiece(q.lo, p.hi, q.shift, q.steps, q.node)
            else:
                out.append(p)
        return InducedMap(self.domain, out, self.alpha, self.s)


def _advance(tmap: TransferMap, start: IntervalSet, stop: IntervalSet, *, include_start: bool, cap: int):
    """Follow ``start`` under ``tmap`` until each part lies in ``stop``."""
    zero = Coord.of(0, tmap.alpha)
    done = []
    work = []
    for lo, hi in start:
        root = _Node(None, zero)
        if include_start:
            for a, b, inside in stop.pieces_in(lo, hi):
                if inside:
                    done.append(InducedPiece(a, b, zero, 0, root))
                else:
                    work.append((a, b, zero, 0, root))
        else:
            work.append((lo, hi, zero, 0, root))
    while work:
        lo, hi, off, steps, node = work.pop()
        if steps >= cap:
            raise IterationCapExceeded(cap)
        for a, b, p in tmap.split(lo, hi):
            noff = off + p.shift
            child = _Node(node, noff)
            na, nb = a + p.shift, b + p.shift
            for c, d, inside in stop.pieces_in(na, nb):
                if inside:
                    done.append(InducedPiece(c - noff, d - noff, noff, steps + 1, child))
                else:
                    work.append((c, d, noff, steps + 1, child))
    return done


def first_return_map(tmap: TransferMap, S: IntervalSet, cap: int = DEFAULT_STEP_CAP) -> InducedMap:
    """Kakutani's induced map on S, exact, with constant return time per piece."""
    if not S:
        raise ValueError("the section S is empty")
    return InducedMap(S, _advance(tmap, S, S, include_start=False, cap=cap), tmap.alpha, tmap.s)


def first_hit(tmap: TransferMap, start: IntervalSet, stop: IntervalSet, *, include_start: bool = True,
              cap: int = DEFAULT_STEP_CAP) -> InducedMap:
    """Pieces of ``start`` with the number of steps needed to enter ``stop``."""
    return InducedMap(start, _advance(tmap, start, stop, include_start=include_start, cap=cap), tmap.alpha, tmap.s)


def kac_check(induced: InducedMap):
    """Exact sum of piece length times return time."""
    total = Coord.of(0, induced.alpha)
    for p in induced.pieces:
        total = total + p.length * p.steps
    return total


# ---------------------------------------------------------------------------
# float oracle

def _tables(instance: SystemInstance):
    fmap = build_dissipative_map(instance)
    lo, sh = fmap.float_tables()
    disc = np.array(sorted({float(x) for x in fmap.discontinuities()}), dtype=np.float64)
    return fmap, lo, sh, disc


def simulate_trajectory(instance: SystemInstance, start, crossings: int, seed: int = 0, eps: float = 1e-12,
                        tables=None) -> list:
    """Float iteration of the dissipative map, returning ``(square, y)`` per crossing."""
    if crossings < 1:
        raise ValueError("crossings must be at least 1")
    _, lo, sh, disc = tables or _tables(instance)
    s = instance.s
    square, y = start
    x = float(square) + float(y)
    out = []
    for _ in range(crossings):
        k = int(np.searchsorted(disc, x))
        near = min(abs(x - disc[k]) if k < len(disc) else math.inf, abs(x - disc[k - 1]) if k > 0 else math.inf)
        if near < eps:
            raise BarrierEndpointHit(f"trajectory reached {x!r}, within {eps} of a discontinuity")
        i = int(np.searchsorted(lo, x, side="right")) - 1
        x = x + float(sh[i])
        if x >= s:
            x -= s
        elif x < 0:
            x += s
        sq = min(int(x), s - 1)
        out.append((sq, x - sq))
    return out


def simulate_batch(instance: SystemInstance, trajectories: int, steps: int, warmup: int = 0, seed: int = 0,
                   threads: int = 1, eps: float = 1e-12, backend: str | None = None):
    """Run many trajectories from uniform random starts.

    Returns ``(positions, ok)``: positions has one row per trajectory holding
    the section coordinate ``square + y`` after each post-warm-up step, and
    ``ok`` flags rows that never came within ``eps`` of a discontinuity.
    """
    _, lo, sh, disc = _tables(instance)
    rng = np.random.default_rng(seed)
    x0 = rng.random(trajectories) * instance.s
    impl = kernels.get(backend)
    if threads <= 1 or trajectories < 2 * threads:
        return impl.run_batch(x0, warmup + steps, warmup, lo, sh, disc, float(instance.s), eps)
    from concurrent.futures import ThreadPoolExecutor

    chunks = np.array_split(x0, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: impl.run_batch(c, warmup + steps, warmup, lo, sh, disc,
                                                       float(instance.s), eps), chunks))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def sampled_return_times(tmap: TransferMap, S: IntervalSet, samples: int, seed: int = 0, cap: int = 10 ** 6,
                         backend: str | None = None):
    """First return times of uniform random points of S, by float iteration."""
    lo, sh = tmap.float_tables()
    slo = np.array([float(a) for a, _ in S], dtype=np.float64)
    shi = np.array([float(b) for _, b in S], dtype=np.float64)
    rng = np.random.default_rng(seed)
    lens = shi - slo
    which = rng.choice(len(lens), size=samples, p=lens / lens.sum())
    x0 = slo[which] + rng.random(samples) * lens[which]
    return kernels.get(backend).return_times(x0, cap, lo, sh, float(tmap.s), slo, shi)


def batch_csv(positions, ok, warmup: int = 0) -> str:
    """``step,square,y`` lines, trajectories concatenated in order."""
    lines = ["step,square,y"]
    for row, good in zip(positions, ok):
        if not good:
            continue
        for k, x in enumerate(row):
            sq = int(x)
            lines.append(f"{warmup + k + 1},{sq},{x - sq:.17g}")
    return "\n".join(lines) + "\n"
