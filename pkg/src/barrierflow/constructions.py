"""Constructive generators: a small-attractor torus and a dissipative cubic map.

``build_small_attractor`` places a barrier and its target on two nearly
coincident early crossings of a long self-avoiding strip on the unit torus.
Everything behind the barrier along the strip is transient, so the attractor
is at most ``4/sqrt(n)`` of the torus.  The torus is cut into ``n`` vertical
slices of width ``1/n`` and stretched to an ``n``-square horizontal cylinder,
so the slope becomes ``alpha/n`` and areas scale by ``n``.

The second half is the three-branch interval translation map with slope the
cubic root of ``x^3 - x^2 - 3x + 1`` in ``(0, 1)``.  Its endpoints involve
``alpha^2``, so it lives in the cubic number field rather than on coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IntervalExplosion, PigeonholeFailed, VerificationFailed, WeakConvergentGrowth
from .numeric import AlphaValue, Coord, FieldElement, convergents
from .surface import SystemInstance, square_torus

__all__ = [
    "BKMap",
    "BKPiece",
    "SmallAttractorCertificate",
    "bk_alpha",
    "bk_apply",
    "bk_attractor_decay",
    "bk_conjugacy_residual",
    "bk_expected",
    "bk_induce",
    "bk_map",
    "build_small_attractor",
    "crossing_gaps",
]


# ---------------------------------------------------------------------------
# small attractor on the unit torus

@dataclass
class SmallAttractorCertificate:
    n: int
    k: int
    q_k: int
    q_next: int
    base_length: Fraction
    window: int
    nu1: int
    nu2: int
    distance: Coord
    B: list
    A: list
    common_length: Coord
    min_gap: Coord
    checks: dict
    measured_R_area: Coord | None = None
    measured_W_area: Coord | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Coord):
                return {"rat": str(x.rat), "mult": x.mult, "float": float(x)}
            if isinstance(x, Fraction):
                return {"rat": str(x), "mult": 0, "float": float(x)}
            return x

        return {
            "n": self.n,
            "k": self.k,
            "q_k": self.q_k,
            "q_next": self.q_next,
            "base_length": enc(self.base_length),
            "window": self.window,
            "nu1": self.nu1,
            "nu2": self.nu2,
            "distance": enc(self.distance),
            "B": [[enc(lo), enc(hi)] for lo, hi in self.B],
            "A": [[enc(lo), enc(hi)] for lo, hi in self.A],
            "common_length": enc(self.common_length),
            "min_gap": enc(self.min_gap),
            "measured_R_area": enc(self.measured_R_area) if self.measured_R_area is not None else None,
            "measured_W_area": enc(self.measured_W_area) if self.measured_W_area is not None else None,
            "checks": dict(self.checks),
        }


def crossing_gaps(alpha: AlphaValue, q: int) -> Coord:
    """Smallest circular gap between the points ``{j*alpha}``, ``0 <= j < q``.

    Every vertical line meets the first ``q`` crossings of a geodesic at a
    translate of this point set, so this is the least spacing on any line.
    """
    if q < 2:
        return Coord.of(1, alpha)
    pts = sorted(Coord._mk(Fraction(0), j, alpha).mod1() for j in range(q))
    best = pts[0] + 1 - pts[-1]
    for a, b in zip(pts, pts[1:]):
        if b - a < best:
            best = b - a
    return best


def _sqrt_n_bound_holds(field, lhs, n: int) -> bool:
    """Whether ``(sqrt(n) - 2) * lhs <= 1`` for a positive field element ``lhs``."""
    # sqrt(n) <= 2 + 1/lhs, both sides positive
    rhs = 2 + field(1) / lhs
    return field(n) <= rhs * rhs


def build_small_attractor(alpha: AlphaValue, n: int, k: int, *, run: bool = True, cap: int | None = None):
    """Torus with a barrier whose attractor covers less than ``4/sqrt(n)`` of the area.

    ``k`` indexes the convergent denominators ``q_0 = 1, q_1, ...`` of alpha
    and must satisfy ``q_{k+1}^2 > n * q_k^2``.  With ``run`` the extension
    process is run on the result and the measured areas are checked too.
    """
    if n < 9:
        raise ValueError(f"n={n}: the construction needs n >= 9")
    if k < 1:
        raise ValueError("k must be at least 1")
    conv = convergents(alpha, k + 2)
    q, q_next = conv[k][1], conv[k + 1][1]
    if q_next * q_next <= n * q * q:
        raise WeakConvergentGrowth(f"q_{k + 1}={q_next} does not exceed sqrt({n}) * q_{k}={q}")

    a1 = alpha.scaled(Fraction(1, n))
    base = Fraction(1, q) - Fraction(1, q_next)
    window = math.isqrt(n * q * q)

    # lower endpoints of the crossings nu = 1..window; crossing nu meets the
    # left edge of square nu mod n at height {nu * alpha / n}
    lows = []
    for nu in range(1, window + 1):
        lows.append((Coord._mk(Fraction(0), nu, a1).mod1(), nu))
    lows.sort()

    best = None
    m = len(lows)
    for idx in range(m):
        y, nu = lows[idx]
        for step in range(1, m):
            y2, nu2 = lows[(idx + step) % m]
            d = y2 - y if idx + step < m else y2 + 1 - y
            if best is not None and d >= best[0]:
                break
            if nu2 % n != nu % n:
                best = (d, nu, nu2)
                break
    if best is None or not best[0] < base:
        raise PigeonholeFailed(f"no two crossings on different squares overlap within the first {window}")
    d, lo_nu, hi_nu = best
    nu1, nu2 = min(lo_nu, hi_nu), max(lo_nu, hi_nu)

    # common heights of the two crossings: [y_hi, y_lo + base) on the circle
    y_lo = Coord._mk(Fraction(0), lo_nu, a1).mod1()
    start = (y_lo + d).mod1()
    end = start + base - d
    if end <= 1:
        common = [(start, end)]
    else:
        common = [(Coord.of(0, a1), end - 1), (start, Coord.of(1, a1))]

    sq_b = (nu2 - nu1) % n
    inst = square_torus(n, a1, barrier=(sq_b, common), target=(0, common))
    inst = SystemInstance(inst.surface, inst.barrier, inst.target, a1, f"small attractor n={n} k={k}")

    field = a1.field
    min_gap = crossing_gaps(alpha, q)
    common_len = base - d
    checks = {
        "convergent_growth": q_next * q_next > n * q * q,
        "n_at_least_9": n >= 9,
        "gap_at_least_base": min_gap >= base,
        "indices_in_window": 1 <= nu1 < nu2 <= window,
        "distinct_squares": sq_b != 0,
        "pigeonhole_distance": _sqrt_n_bound_holds(field, field(d) * q, n),
        # base - 1/((sqrt n - 2) q) > (1 - 4/sqrt n)/q; both use the squared form
        "length_exceeds_four_over_root_n": _common_beats(field, common_len, q, n),
    }
    cert = SmallAttractorCertificate(
        n=n, k=k, q_k=q, q_next=q_next, base_length=base, window=window,
        nu1=nu1, nu2=nu2, distance=d, B=common, A=common,
        common_length=common_len, min_gap=min_gap, checks=checks,
    )
    if run:
        from .extension import run_extension

        kwargs = {} if cap is None else {"cap": cap}
        result, _trace = run_extension(inst, **kwargs)
        r_area = result.recurrent.area()
        w_area = result.transient.area()
        cert.measured_R_area = r_area
        cert.measured_W_area = w_area
        fr = field(r_area)
        # lambda(R) = area/n < 4/sqrt(n)  <=>  area^2 < 16 n
        checks["recurrent_below_bound"] = fr * fr < 16 * n
        checks["transient_above_bound"] = (n - field(w_area)) ** 2 < 16 * n
    if not cert.ok:
        bad = [name for name, v in checks.items() if not v]
        raise VerificationFailed(f"small-attractor certificate failed: {', '.join(bad)}")
    return inst, cert


def _common_beats(field, common_len, q: int, n: int) -> bool:
    # common_len > (1 - 4/sqrt n)/q  <=>  4/sqrt n > 1 - q*common_len
    t = 1 - field(common_len) * q
    if t.sign() <= 0:
        return True
    return t * t * n < 16


# ---------------------------------------------------------------------------
# the cubic interval translation map

def bk_alpha() -> AlphaValue:
    """The root of ``x^3 - x^2 - 3x + 1`` near 0.311."""
    return AlphaValue.from_root([1, -3, -1, 1], Fraction(3, 10), Fraction(8, 25))


@dataclass(frozen=True)
class BKPiece:
    lo: FieldElement
    hi: FieldElement
    shift: FieldElement
    steps: int = 1


@dataclass
class BKMap:
    alpha: AlphaValue
    lo: FieldElement
    hi: FieldElement
    pieces: tuple

    @property
    def field(self):
        return self.alpha.field

    def piece_at(self, x) -> BKPiece:
        for p in self.pieces:
            if p.lo <= x < p.hi:
                return p
        raise ValueError(f"{float(x)} lies outside [{float(self.lo)}, {float(self.hi)})")

    def __call__(self, x) -> FieldElement:
        x = self.field(x)
        return x + self.piece_at(x).shift

    def breakpoints(self) -> list:
        return [p.lo for p in self.pieces[1:]]


def bk_map(alpha: AlphaValue | None = None) -> BKMap:
    """``x+a`` on ``[0,1-a)``, ``x+a^2`` on ``[1-a,1-a^2)``, ``x+a^2-1`` on ``[1-a^2,1)``."""
    alpha = alpha or bk_alpha()
    F = alpha.field
    a = F.gen
    a2 = a * a
    zero, one = F(0), F(1)
    pieces = (
        BKPiece(zero, one - a, a),
        BKPiece(one - a, one - a2, a2),
        BKPiece(one - a2, one, a2 - 1),
    )
    return BKMap(alpha, zero, one, pieces)


def bk_apply(tmap: BKMap, x) -> FieldElement:
    return tmap(x)


def _split_at(lo, hi, cuts):
    out, cur = [], lo
    for c in sorted(c for c in cuts if lo < c < hi):
        out.append((cur, c))
        cur = c
    out.append((cur, hi))
    return out


def _induce(tmap: BKMap, J_lo, J_hi, cap: int = 10 ** 5) -> BKMap:
    """First return of ``tmap`` to ``[J_lo, J_hi)``, adjacent equal branches merged."""
    cuts = tmap.breakpoints()
    work = [(lo, hi, tmap.field(0), 0) for lo, hi in _split_at(J_lo, J_hi, cuts)]
    done = []
    while work:
        lo, hi, acc, steps = work.pop()
        if steps > cap:
            raise VerificationFailed(f"no return to the subinterval within {cap} steps")
        x_lo, x_hi = lo + acc, hi + acc
        p = tmap.piece_at(x_lo)
        if x_hi > p.hi:
            mid = p.hi - acc
            work.append((lo, mid, acc, steps))
            work.append((mid, hi, acc, steps))
            continue
        acc2 = acc + p.shift
        y_lo, y_hi = x_lo + p.shift, x_hi + p.shift
        parts = _split_at(y_lo, y_hi, [J_lo, J_hi])
        if len(parts) > 1:
            for a, b in parts:
                work.append((a - acc2, b - acc2, acc, steps))
            continue
        if J_lo <= y_lo and y_hi <= J_hi:
            done.append(BKPiece(lo, hi, acc2, steps + 1))
        else:
            work.append((lo, hi, acc2, steps + 1))
    done.sort(key=lambda p: p.lo)
    merged = []
    for p in done:
        if merged and merged[-1].hi == p.lo and merged[-1].shift == p.shift:
            q = merged[-1]
            merged[-1] = BKPiece(q.lo, p.hi, q.shift, max(q.steps, p.steps))
        else:
            merged.append(p)
    return BKMap(tmap.alpha, J_lo, J_hi, tuple(merged))


def _subinterval(tmap: BKMap, which: str):
    a = tmap.field.gen
    if which == "I1":
        return 1 - a, tmap.field(1)
    if which == "I2":
        return tmap.field(0), a * a
    raise ValueError(f"unknown subinterval {which!r}; expected 'I1' or 'I2'")


def bk_induce(tmap: BKMap, which: str) -> BKMap:
    """First-return map on ``I1 = [1-a, 1)`` or ``I2 = [0, a^2)``."""
    lo, hi = _subinterval(tmap, which)
    return _induce(tmap, lo, hi)


def bk_expected(tmap: BKMap, which: str) -> tuple:
    """The three branches the induced map should have, as (lo, hi, shift)."""
    a = tmap.field.gen
    if which == "I1":
        return (
            (1 - a, 1 - a ** 2, a ** 2),
            (1 - a ** 2, 1 - a ** 3, a ** 3),
            (1 - a ** 3, tmap.field(1), a ** 3 - a),
        )
    if which == "I2":
        return (
            (tmap.field(0), a ** 2 - a ** 3, a ** 3),
            (a ** 2 - a ** 3, a ** 2 - a ** 4, a ** 4),
            (a ** 2 - a ** 4, a ** 2, a ** 4 - a ** 2),
        )
    raise ValueError(f"unknown subinterval {which!r}; expected 'I1' or 'I2'")


def _rescaling(tmap: BKMap, which: str):
    a = tmap.field.gen
    if which == "I1":
        return 1 - a, a
    if which == "I2":
        return tmap.field(0), a * a
    raise ValueError(f"unknown subinterval {which!r}; expected 'I1' or 'I2'")


def bk_conjugacy_residual(which: str, tmap: BKMap | None = None) -> bool:
    """Whether ``h(x) = c + r*x`` carries the map onto its first return exactly.

    ``(c, r) = (1-a, a)`` for I1 and ``(0, a^2)`` for I2.  Each branch of the
    map must go to one branch of the induced map with both endpoints and the
    translation matching after reduction in the cubic field.
    """
    tmap = tmap or bk_map()
    c, r = _rescaling(tmap, which)
    induced = bk_induce(tmap, which)
    if len(induced.pieces) != len(tmap.pieces):
        return False
    for p, ip in zip(tmap.pieces, induced.pieces):
        if not (c + r * p.lo == ip.lo and c + r * p.hi == ip.hi):
            return False
        # h(T x) - T*(h x) = r*shift - shift*
        if not (r * p.shift - ip.shift).is_zero():
            return False
    return True


def _image(tmap: BKMap, ivs: list) -> list:
    cuts = tmap.breakpoints()
    out = []
    for lo, hi in ivs:
        for a, b in _split_at(lo, hi, cuts):
            s = tmap.piece_at(a).shift
            out.append((a + s, b + s))
    out.sort(key=lambda iv: iv[0])
    merged = []
    for lo, hi in out:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def bk_attractor_decay(tmap: BKMap | None = None, levels: int = 12, interval_cap: int = 20000) -> list:
    """Exact total length of ``T^j([0,1))`` for ``j = 0..levels``.

    The images are nested, so the sequence never increases.  Raises
    IntervalExplosion, carrying the lengths found so far, when an image has
    more than ``interval_cap`` components.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    tmap = tmap or bk_map()
    ivs = [(tmap.lo, tmap.hi)]
    lengths = [tmap.hi - tmap.lo]
    for _ in range(levels):
        ivs = _image(tmap, ivs)
        if len(ivs) > interval_cap:
            raise IntervalExplosion(interval_cap, lengths)
        total = tmap.field(0)
        for lo, hi in ivs:
            total = total + (hi - lo)
        lengths.append(total)
    return lengths
