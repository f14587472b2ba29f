"""The extension process that grows the transient set until the recurrent set is exposed.

Notation on the section ``[0, s)``:

* ``T*`` is the first return of A u B under the barrier-free step.
* ``F`` sends a point of A to where ``T*`` lands, read on A: a landing on B is
  carried to A by the order-preserving length matching.
* ``A_0 = A`` and ``A_i = F(A_{i-1})``.  The sets decrease, and the process
  stops at the first exact repetition ``A_i = A_{i-1}``.

Then ``W`` is the sweep of B together with the sweeps of ``A \\ A_inf``, and
``R`` is the sweep of ``A_inf``.

A second, independent route (``minimal_clear_region``) shrinks a clear
interval of the circle until the set of squares it reaches stabilises and
reads the recurrent set off the resulting interval exchange.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InstanceError, RoundCapExceeded, VerificationFailed
from .flow import (
    DEFAULT_STEP_CAP,
    InducedMap,
    TransferMap,
    build_dissipative_map,
    build_geodesic_map,
    first_return_map,
)
from .intervals import IntervalSet
from .numeric import Coord, nearest_integer_distance
from .regions import RegionSet
from .surface import SystemInstance

__all__ = [
    "ExtensionTrace",
    "PartitionResult",
    "RoundRecord",
    "classify_subintervals",
    "detect_balance",
    "minimal_clear_region",
    "report_json",
    "run_extension",
    "sigma_map",
    "verify_partition",
]

PERFECT = "perfect_balance"
IMBALANCED = "imbalanced"


# ---------------------------------------------------------------------------
# the return map of A u B

class _Returns:
    """``T*`` together with the matching, shared by every routine below."""

    def __init__(self, instance: SystemInstance, cap: int):
        self.instance = instance
        self.A = instance.target_positions()
        self.B = instance.barrier_positions()
        self.jumps = instance.jump_segments()
        self.geo = build_geodesic_map(instance.surface, instance.alpha)
        self.S = self.A | self.B
        self.tstar = first_return_map(self.geo, self.S, cap=cap) if self.S else None

    def b_to_a(self, region: IntervalSet) -> IntervalSet:
        out = []
        for lo, hi, sh in self.jumps:
            for a, b in region.clip(lo, hi):
                out.append((a + sh, b + sh))
        return IntervalSet(out)

    def a_to_b(self, region: IntervalSet) -> IntervalSet:
        out = []
        for lo, hi, sh in self.jumps:
            for a, b in region.clip(lo + sh, hi + sh):
                out.append((a - sh, b - sh))
        return IntervalSet(out)

    def landings(self, X: IntervalSet):
        """``(piece, part_lo, part_hi)`` for each T*-piece meeting X."""
        for p in self.tstar.pieces:
            for a, b in X.clip(p.lo, p.hi):
                yield p, a, b

    def F(self, X: IntervalSet) -> IntervalSet:
        """Image of ``X`` (a subset of A) read on A."""
        on_a, on_b = [], []
        for p, a, b in self.landings(X):
            for c, d, inside in self.B.pieces_in(a + p.shift, b + p.shift):
                (on_b if inside else on_a).append((c, d))
        return IntervalSet(on_a) | self.b_to_a(IntervalSet(on_b))

    def strip(self, X: IntervalSet) -> IntervalSet:
        return self.tstar.strip(within=X) if X else IntervalSet()


# ---------------------------------------------------------------------------

@dataclass
class RoundRecord:
    index: int
    removed: IntervalSet
    strip: IntervalSet
    counts: dict
    special_sum: int
    horizontal_length: int
    splitting_free: bool


@dataclass
class ExtensionTrace:
    rounds: list = field(default_factory=list)

    @property
    def special_sums(self) -> list:
        return [r.special_sum for r in self.rounds]

    @property
    def horizontal_lengths(self) -> list:
        return [r.horizontal_length for r in self.rounds]


@dataclass
class PartitionResult:
    recurrent: RegionSet
    transient: RegionSet
    case_flag: str
    rounds: int
    A_sequence: list
    witness: object = None

    @property
    def A_limit(self) -> IntervalSet:
        return self.A_sequence[-1]


def detect_balance(instance: SystemInstance, cap: int = DEFAULT_STEP_CAP, _ret: _Returns | None = None):
    """``(flag, overlap)``: overlap is the length of A hit twice by ``F``."""
    ret = _ret or _Returns(instance, cap)
    zero = Coord.of(0, instance.alpha)
    if not ret.A:
        return PERFECT, zero
    overlap = ret.A.measure() - ret.F(ret.A).measure()
    return (PERFECT if overlap == 0 else IMBALANCED), overlap


def _colours(ret: _Returns, W: IntervalSet):
    """Parts of A whose left neighbour is in W, seen from A and from B."""
    tw = ret.geo.image(W)
    gray_a = ret.A & tw
    gray_b = ret.b_to_a(ret.B & tw)
    return gray_a, gray_b


def classify_subintervals(instance: SystemInstance, A_i: IntervalSet, current_W, cap: int = DEFAULT_STEP_CAP,
                          _ret: _Returns | None = None):
    """Split ``A_i`` by the colour left of each point and of its B counterpart.

    Gray means inside the current transient set.  Returns the four sets
    ``(ww, gg, wg, gw)`` and the special sum ``#ww + #gg``.
    """
    ret = _ret or _Returns(instance, cap)
    W = current_W.trace if isinstance(current_W, RegionSet) else current_W
    ga, gb = _colours(ret, W)
    gg = A_i & ga & gb
    wg = (A_i & gb) - ga
    gw = (A_i & ga) - gb
    ww = A_i - (ga | gb)
    return ww, gg, wg, gw, len(ww) + len(gg)


def _splitting_free(ret: _Returns, removed: IntervalSet) -> bool:
    for lo, hi in removed:
        p = ret.tstar.piece_at(lo)
        if p is None or p.hi < hi:
            return False
    return True


def _lineage(ret: _Returns, gg: IntervalSet, previous: list) -> list:
    """Horizontal flow length behind each gg interval, traced through earlier rounds."""
    out = []
    for lo, hi in gg:
        best = 0
        target = IntervalSet([(lo, hi)])
        for (plo, phi), length in previous:
            for p, a, b in ret.landings(IntervalSet([(plo, phi)])):
                land = IntervalSet([(a + p.shift, b + p.shift)])
                land = (land - ret.B) | ret.b_to_a(land & ret.B)
                if land & target:
                    best = max(best, length + p.steps)
        out.append(((lo, hi), best))
    return out


def run_extension(instance: SystemInstance, round_cap: int = 10 ** 4, cap: int = DEFAULT_STEP_CAP,
                  seed: IntervalSet | None = None):
    """Compute ``(PartitionResult, ExtensionTrace)``.

    ``seed`` replaces A as the starting set ``A_0`` (it must be a subset of A);
    seeding with the final ``A_inf`` reproduces the result with no rounds.
    """
    s, alpha = instance.s, instance.alpha
    if not instance.barrier:
        whole = RegionSet.whole(s, alpha)
        return (PartitionResult(whole, RegionSet(s, alpha), PERFECT, 0, [IntervalSet()], Coord.of(0, alpha)),
                ExtensionTrace())
    ret = _Returns(instance, cap)
    flag, witness = detect_balance(instance, _ret=ret)
    A0 = ret.A if seed is None else seed
    if not A0.issubset(ret.A):
        raise ValueError("the seed must lie inside A")
    W = ret.strip(ret.B) | ret.strip(ret.A - A0)
    seq = [A0]
    trace = ExtensionTrace()
    lineage = []
    while True:
        cur = seq[-1]
        nxt = ret.F(cur)
        if nxt == cur:
            break
        if not nxt.issubset(cur) or not nxt.measure() < cur.measure():
            raise VerificationFailed("A_i failed to shrink strictly; interval bookkeeping is inconsistent")
        if len(trace.rounds) >= round_cap:
            raise RoundCapExceeded(round_cap)
        ww, gg, wg, gw, S = classify_subintervals(instance, cur, W, _ret=ret)
        removed = cur - nxt
        if gg != removed:
            raise VerificationFailed("gg subintervals differ from the removed set A_(i-1) \\ A_i")
        lineage = [((lo, hi), 0) for lo, hi in gg] if not trace.rounds else _lineage(ret, gg, lineage)
        strip = ret.strip(removed)
        W = W | strip
        trace.rounds.append(RoundRecord(
            index=len(trace.rounds) + 1,
            removed=removed,
            strip=strip,
            counts={"ww": len(ww), "gg": len(gg), "wg": len(wg), "gw": len(gw)},
            special_sum=S,
            horizontal_length=sum(length for _, length in lineage),
            splitting_free=_splitting_free(ret, removed),
        ))
        seq.append(nxt)
    R = RegionSet(s, alpha, ret.strip(seq[-1]))
    result = PartitionResult(R, RegionSet(s, alpha, W), flag, len(trace.rounds), seq, witness)
    checks = verify_partition(instance, result)
    if not all(checks.values()):
        failed = [k for k, v in checks.items() if not v]
        raise VerificationFailed(f"partition checks failed: {failed}")
    return result, trace


def verify_partition(instance: SystemInstance, result: PartitionResult, fmap: TransferMap | None = None) -> dict:
    """Exact checks of a computed partition; every value should be True."""
    f = fmap or build_dissipative_map(instance)
    R, W = result.recurrent.trace, result.transient.trace
    whole = RegionSet.whole(instance.s, instance.alpha).trace
    total = result.recurrent.area() + result.transient.area()
    image_w = f.image(W)
    out = {
        "areas_sum_to_s": total == instance.s,
        "disjoint": not (R & W),
        "cover": (R | W) == whole,
        "recurrent_invariant": f.image(R) == R,
        "transient_maps_into_surface": image_w.issubset(whole),
    }
    # with matching heights the step projects onto a rotation of the circle,
    # whose invariant multiplicity is constant, so the area is a whole number
    if _aligned(instance):
        area = Coord.of(result.recurrent.area(), instance.alpha)
        out["recurrent_area_integer"] = area.mult == 0 and area.rat.denominator == 1
    return out


# ---------------------------------------------------------------------------
# stable and clear intervals

def _splitting_points(instance: SystemInstance) -> list:
    pts = {Coord.of(0, instance.alpha)}
    for e in instance.barrier:
        for lo, hi in e.intervals:
            for x in (lo, hi):
                pts.add(x.mod1())
    return sorted(pts)


def _rotation(alpha, extra=()) -> TransferMap:
    """The circle rotation on [0, 1), with pieces also cut at the given points."""
    from .flow import Piece

    a = Coord._mk(Fraction(0), 1, alpha).mod1()
    cut = 1 - a
    cuts = sorted({c for c in extra if 0 < c < 1} | {cut})
    pts = [Coord.of(0, alpha)] + cuts + [Coord.of(1, alpha)]
    pieces = []
    for lo, hi in zip(pts, pts[1:]):
        pieces.append(Piece(lo, hi, a if lo < cut else a - 1))
    return TransferMap(1, alpha, pieces)


def _open_hits(lo, hi, Q) -> bool:
    return any(lo < q < hi for q in Q)


def sigma_map(instance: SystemInstance, I, k: int, fmap: TransferMap | None = None):
    """``(stable, clear, sigma)`` for an open interval ``I = (a, b)`` of [0, 1).

    ``sigma`` lists the square reached from each square after k steps, or is
    None when I is not k-stable.
    """
    alpha = instance.alpha
    a, b = (Coord.of(x, alpha) for x in I)
    if not (0 <= a < b <= 1):
        raise ValueError("I must be a nondegenerate subinterval of [0, 1)")
    Q = _splitting_points(instance)
    step = Coord._mk(Fraction(0), 1, alpha)
    length = b - a
    lo = a
    for j in range(k + 1):
        if j:
            lo = (lo + step).mod1()
        if lo + length > 1 or _open_hits(lo, lo + length, Q):
            return False, False, None
    clear = all(not (nearest_integer_distance(alpha, d) < length) for d in range(1, k + 1))
    f = fmap or build_dissipative_map(instance)
    xs = [a + i for i in range(instance.s)]
    for _ in range(k):
        xs = [f(x) for x in xs]
    return True, clear, [x.floor() for x in xs]


def _aligned(instance: SystemInstance) -> bool:
    return all(sh.mult == 0 and sh.rat.denominator == 1 for _, _, sh in instance.jump_segments())


def _dyadic_between(lo, hi):
    """A dyadic rational strictly inside ``(lo, hi)``, close to the midpoint."""
    mid = (float(lo) + float(hi)) / 2
    m = max(1, 3 - math.floor(math.log2(float(hi) - float(lo))))
    while True:
        x = Fraction(round(mid * 2 ** m), 2 ** m)
        if lo < x < hi:
            return x
        m += 1


def _half_width(r, room):
    """Largest power of 1/2 with ``2*w < r`` and ``w < room``."""
    m = max(1, -math.floor(math.log2(min(float(r), float(room)))))
    while True:
        w = Fraction(1, 2 ** m)
        if 2 * w < r and w < room:
            return w
        m += 1


def minimal_clear_region(instance: SystemInstance, cap: int = DEFAULT_STEP_CAP, *, return_trace: bool = False):
    """Recurrent set by repeatedly shrinking a clear interval.

    Requires the barrier and target to sit at the same heights, so that the
    dissipative step projects onto the circle rotation.
    """
    s, alpha = instance.s, instance.alpha
    if not instance.barrier:
        whole = RegionSet.whole(s, alpha)
        return (whole, []) if return_trace else whole
    if not _aligned(instance):
        raise InstanceError("the shrinking algorithm needs A and B at identical heights")
    f = build_dissipative_map(instance)
    Q = _splitting_points(instance)
    step = Coord._mk(Fraction(0), 1, alpha)
    g = _rotation(alpha, [(q - step).mod1() for q in Q])
    positive = [q for q in Q if q > 0]
    first = positive[0] if positive else Coord.of(1, alpha)
    I = (Coord.of(0, alpha), first)
    k = 0
    M1 = tuple(range(s))
    history = []

    def push(lo, times):
        for _ in range(times):
            lo = (lo + step).mod1()
        return lo

    while True:
        length = I[1] - I[0]
        dlo = push(I[0], k)
        D = IntervalSet([(dlo, dlo + length)])
        ret = first_return_map(g, D, cap=cap)
        history.append({"k": k, "interval": (I[0], I[1]), "squares": list(M1), "pieces": len(ret.pieces)})
        shrink = None
        M3s = []
        for p in ret.pieces:
            xs = [p.lo + i for i in M1]
            for _ in range(p.steps):
                xs = [f(x) for x in xs]
            M3 = tuple(sorted({x.floor() for x in xs}))
            M3s.append(M3)
            if not set(M3).issubset(M1):
                raise VerificationFailed("squares reached after a return left the current image set")
            if M3 != M1 and (shrink is None or len(M3) < len(shrink[1])):
                shrink = (p, M3)
        if shrink is None:
            out = []
            for p in ret.pieces:
                for i in M1:
                    lo, hi = p.lo + i, p.hi + i
                    for _ in range(p.steps):
                        out.append((lo, hi))
                        piece = f.pieces[f.piece_index(lo)]
                        if piece.hi < hi:
                            raise VerificationFailed("a stable interval was split by the map")
                        lo, hi = lo + piece.shift, hi + piece.shift
            region = RegionSet(s, alpha, IntervalSet(out))
            return (region, history) if return_trace else region
        p, M3 = shrink
        kstar = k + p.steps
        back = (-step * k)
        plo = (p.lo + back).floor()
        plo = p.lo + back - plo
        phi = plo + (p.hi - p.lo)
        x = _dyadic_between(plo, phi)
        r = min(nearest_integer_distance(alpha, d) for d in range(1, kstar + 1))
        room = min(x - plo, phi - x)
        rp = _half_width(r, room)
        I = (Coord.of(x - rp, alpha), Coord.of(x + rp, alpha))
        k = kstar
        M1 = M3


def report_json(instance: SystemInstance, result: PartitionResult, trace: ExtensionTrace) -> dict:
    def exact(v):
        v = Coord.of(v, instance.alpha)
        return {"rat": str(v.rat), "mult": v.mult, "float": float("%.17g" % float(v))}

    return {
        "case": result.case_flag,
        "rounds": result.rounds,
        "area_R": exact(result.recurrent.area()),
        "area_W": exact(result.transient.area()),
        "overlap_witness": exact(result.witness),
        "S_sequence": trace.special_sums,
        "L_sequence": trace.horizontal_lengths,
        "splitting_free": [r.splitting_free for r in trace.rounds],
        "A_lengths": [exact(a.measure()) for a in result.A_sequence],
    }
