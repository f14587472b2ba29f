"""Exact arithmetic for coordinates of the form q + n*alpha.

The slope alpha is a positive irrational given either as a quadratic surd
(p + q*sqrt(d))/r or as the unique root of a rational polynomial inside an
isolating interval.  Every coordinate produced by the flow is a rational
number plus an integer multiple of alpha, so comparisons reduce to deciding
the sign of alpha minus a rational.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptyIsolation, NotIrrational

__all__ = [
    "AlphaValue",
    "Coord",
    "FieldElement",
    "NumberField",
    "as_fraction",
    "compare",
    "convergents",
    "covering_threshold",
    "make_alpha",
    "nearest_integer_distance",
]


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions and strings such as ``"3/10"`` or ``"0.8"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# polynomials over Q, coefficients in ascending degree

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p):
    return _trim([i * p[i] for i in range(1, len(p))])


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = _trim(r)
    return _trim(q), r


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _monic(p):
    p = _trim(p)
    return [c / p[-1] for c in p]


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _monic(a) if a else a


def _sturm_chain(p):
    chain = [_trim(p), _pderiv(p)]
    while chain[-1]:
        r = _pdivmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _variations(chain, x) -> int:
    signs = [_sign(_peval(c, x)) for c in chain]
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _roots_in_open(p, lo, hi) -> int:
    """Number of distinct real roots of a square-free p in the open interval."""
    chain = _sturm_chain(p)
    n = _variations(chain, lo) - _variations(chain, hi)
    if _peval(p, hi) == 0:
        n -= 1
    return n


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _integer_coeffs(p):
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p]


def _rational_roots(p):
    ints = _integer_coeffs(p)
    roots = []
    while ints and ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return roots
    if max(abs(ints[0]), abs(ints[-1])) > 10**12:
        return None
    for u in _divisors(ints[0]):
        for v in _divisors(ints[-1]):
            for cand in (Fraction(u, v), Fraction(-u, v)):
                if cand not in roots and _peval(ints, cand) == 0:
                    roots.append(cand)
    return roots


def _minimal_polynomial(p, lo, hi):
    """Irreducible monic factor of p whose root lies in (lo, hi)."""
    roots = _rational_roots(p)
    if roots is not None:
        q = list(p)
        for r in roots:
            q = _pdivmod(q, [-r, Fraction(1)])[0]
        if len(q) - 1 <= 3:
            return _monic(q)
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p))
    for factor, _ in sympy.factor_list(expr, x)[1]:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(factor, x).all_coeffs())]
        if len(coeffs) > 1 and _roots_in_open(coeffs, lo, hi) == 1:
            return _monic(coeffs)
    raise EmptyIsolation("no irreducible factor has a root in the isolating interval")


def _sign_surd(x: Fraction, y, d: int) -> int:
    """Sign of x + y*sqrt(d) for rational x, y and non-square d > 0."""
    sx, sy = _sign(x), _sign(y)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    lhs = x * x
    rhs = y * y * d
    return sx if lhs > rhs else sy


# ---------------------------------------------------------------------------

class AlphaValue:
    """A positive irrational slope with exact comparison against rationals."""

    __slots__ = (
        "minpoly",
        "surd",
        "source",
        "_lo",
        "_hi",
        "_lock",
        "_digits",
        "_cf_bits",
        "float",
        "_field",
    )

    def __init__(self, minpoly, lo, hi, surd=None, source=None):
        self.minpoly = tuple(minpoly)
        self.surd = surd
        self.source = source
        self._lo = lo
        self._hi = hi
        self._lock = threading.Lock()
        self._digits: list[int] = []
        self._cf_bits = 64
        self._field = None
        lo2, hi2 = self.enclosure(64)
        self.float = float((lo2 + hi2) / 2)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_surd(cls, p: int, q: int, d: int, r: int) -> "AlphaValue":
        for name, v in (("p", p), ("q", q), ("d", d), ("r", r)):
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"surd field {name} must be an integer")
        if r == 0:
            raise ZeroDivisionError("surd denominator r is zero")
        if d <= 0:
            raise NotIrrational(f"d={d} must be positive")
        if q == 0 or math.isqrt(d) ** 2 == d:
            raise NotIrrational(f"({p} + {q}*sqrt({d}))/{r} is rational")
        if _sign_surd(Fraction(p), q, d) * _sign(r) <= 0:
            raise ValueError("alpha must be strictly positive")
        minpoly = _monic([Fraction(p * p - q * q * d), Fraction(-2 * p * r), Fraction(r * r)])
        lo, hi = cls._surd_bounds((p, q, d, r), 64)
        return cls(minpoly, lo, hi, surd=(p, q, d, r), source={"surd": {"p": p, "q": q, "d": d, "r": r}})

    @classmethod
    def from_root(cls, coeffs: Sequence, lo, hi) -> "AlphaValue":
        p = _trim([as_fraction(c) for c in coeffs])
        lo_f, hi_f = as_fraction(lo), as_fraction(hi)
        if len(p) < 2:
            raise EmptyIsolation("constant polynomial has no roots")
        if not lo_f < hi_f:
            raise EmptyIsolation("isolating interval must satisfy lo < hi")
        g = _pgcd(p, _pderiv(p))
        if len(g) > 1:
            p = _pdivmod(p, g)[0]
        count = _roots_in_open(p, lo_f, hi_f)
        if count == 0:
            raise EmptyIsolation(f"no root of the polynomial in ({lo_f}, {hi_f})")
        if count != 1:
            raise EmptyIsolation(f"interval ({lo_f}, {hi_f}) contains {count} roots, expected one")
        roots = _rational_roots(p)
        if roots and any(lo_f < r < hi_f for r in roots):
            raise NotIrrational("the isolated root is rational")
        minpoly = _minimal_polynomial(p, lo_f, hi_f)
        if len(minpoly) == 2:
            raise NotIrrational("the isolated root is rational")
        if hi_f <= 0:
            raise ValueError("alpha must be strictly positive")
        if lo_f < 0:
            if _roots_in_open(minpoly, lo_f, Fraction(0)) or _peval(minpoly, 0) == 0:
                raise ValueError("alpha must be strictly positive")
            lo_f = Fraction(0)
        source = {"root": {"coeffs": [str(c) for c in p], "lo": str(as_fraction(lo)), "hi": str(as_fraction(hi))}}
        return cls(minpoly, lo_f, hi_f, source=source)

    @staticmethod
    def _surd_bounds(surd, bits):
        p, q, d, r = surd
        scale = 1 << bits
        s = math.isqrt(d * scale * scale)
        a = Fraction(p) + Fraction(q * s, scale)
        b = Fraction(p) + Fraction(q * (s + 1), scale)
        lo, hi = (a, b) if a < b else (b, a)
        lo, hi = lo / r, hi / r
        return (lo, hi) if lo < hi else (hi, lo)

    # -- exact queries --------------------------------------------------------
    def enclosure(self, bits: int = 64):
        """Rational (lo, hi) with lo < alpha < hi and hi - lo <= 2**-bits."""
        width = Fraction(1, 1 << bits)
        if self.surd is not None:
            lo, hi = self._surd_bounds(self.surd, bits + 4 + abs(self.surd[1]).bit_length())
            return lo, hi
        with self._lock:
            lo, hi = self._lo, self._hi
            p = self.minpoly
            s_lo = _sign(_peval(p, lo))
            while hi - lo > width:
                mid = (lo + hi) / 2
                s_mid = _sign(_peval(p, mid))
                if s_mid == s_lo:
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    def cmp_rational(self, c) -> int:
        """Sign of alpha - c for a rational c."""
        c = as_fraction(c)
        if self.surd is not None:
            p, q, d, r = self.surd
            return _sign_surd(p - c * r, q, d) * _sign(r)
        with self._lock:
            lo, hi = self._lo, self._hi
            if c <= lo:
                return 1
            if c >= hi:
                return -1
            s_c = _sign(_peval(self.minpoly, c))
            if s_c == _sign(_peval(self.minpoly, lo)):
                self._lo = c
                return 1
            self._hi = c
            return -1

    def sign_linear(self, r, m) -> int:
        """Sign of r + m*alpha."""
        if m == 0:
            return _sign(r)
        s = self.cmp_rational(-Fraction(r) / m)
        return s if m > 0 else -s

    def scaled(self, c) -> "AlphaValue":
        """The slope c*alpha for a positive rational c."""
        c = as_fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        if self.surd is not None:
            p, q, d, r = self.surd
            num, den = c.numerator, c.denominator
            return AlphaValue.from_surd(p * num, q * num, d, r * den)
        deg = len(self.minpoly) - 1
        poly = [self.minpoly[i] / c**i for i in range(deg + 1)]
        lo, hi = self.enclosure(64)
        obj = AlphaValue(_monic(poly), lo * c, hi * c)
        obj.source = {"root": {"coeffs": [str(x) for x in _monic(poly)], "lo": str(lo * c), "hi": str(hi * c)}}
        return obj

    @property
    def field(self) -> "NumberField":
        if self._field is None:
            self._field = NumberField(self)
        return self._field

    # -- continued fractions ------------------------------------------------
    def digits(self, count: int) -> list[int]:
        """First ``count`` continued-fraction digits a_0, a_1, ..."""
        with self._lock:
            have = len(self._digits)
        if have >= count:
            return self._digits[:count]
        if self.surd is not None:
            new = self._surd_digits(count)
        else:
            new = self._root_digits(count)
        with self._lock:
            if len(new) > len(self._digits):
                self._digits = new
            return self._digits[:count]

    def _surd_digits(self, count):
        p, q, d, r = self.surd
        if q > 0:
            P, D, Q = p, q * q * d, r
        else:
            P, D, Q = -p, q * q * d, -r
        if (D - P * P) % Q:
            P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
        s = math.isqrt(D)
        out = []
        for _ in range(count):
            a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
            out.append(a)
            P = a * Q - P
            Q = (D - P * P) // Q
        return out

    def _root_digits(self, count):
        bits = self._cf_bits
        while True:
            lo, hi = self.enclosure(bits)
            out = []
            x_lo, x_hi = lo, hi
            while len(out) < count:
                a_lo, a_hi = math.floor(x_lo), math.floor(x_hi)
                if a_lo != a_hi or x_lo == a_lo:
                    break
                out.append(a_lo)
                x_lo, x_hi = 1 / (x_hi - a_lo), 1 / (x_lo - a_lo)
            if len(out) >= count:
                self._cf_bits = bits
                return out
            bits *= 2

    # -- misc ---------------------------------------------------------------
    def __float__(self):
        return self.float

    def __repr__(self):
        if self.surd is not None:
            p, q, d, r = self.surd
            return f"AlphaValue(({p} + {q}*sqrt({d}))/{r} ~ {self.float:.12g})"
        return f"AlphaValue(root of {list(map(str, self.minpoly))} ~ {self.float:.12g})"

    def same_as(self, other: "AlphaValue") -> bool:
        if self is other:
            return True
        if not isinstance(other, AlphaValue) or self.minpoly != other.minpoly:
            return False
        a_lo, a_hi = self.enclosure(32)
        b_lo, b_hi = other.enclosure(32)
        lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
        return lo < hi and _roots_in_open(list(self.minpoly), lo, hi) == 1

    def __eq__(self, other):
        return isinstance(other, AlphaValue) and self.same_as(other)

    def __hash__(self):
        return hash(self.minpoly)

    def to_json(self):
        return self.source


def make_alpha(desc) -> AlphaValue:
    """Build a slope from ``{"surd": {...}}`` or ``{"root": {...}}``."""
    if isinstance(desc, AlphaValue):
        return desc
    if not isinstance(desc, dict) or len(desc) != 1:
        raise ValueError("alpha must be a dict with a single 'surd' or 'root' key")
    if "surd" in desc:
        s = desc["surd"]
        return AlphaValue.from_surd(int(s["p"]), int(s["q"]), int(s["d"]), int(s["r"]))
    if "root" in desc:
        s = desc["root"]
        return AlphaValue.from_root([as_fraction(c) if not isinstance(c, float) else Fraction(str(c)) for c in s["coeffs"]],
                                    s["lo"], s["hi"])
    raise ValueError(f"unknown alpha representation {next(iter(desc))!r}")


# ---------------------------------------------------------------------------

def _coerce(x, alpha):
    if isinstance(x, Coord):
        return x
    return Coord._mk(as_fraction(x), 0, alpha)


class Coord:
    """The real number ``rat + mult*alpha`` with exact ordering."""

    __slots__ = ("rat", "mult", "alpha", "_f", "_e")

    def __init__(self, rat=0, mult: int = 0, alpha: AlphaValue | None = None):
        if isinstance(mult, Fraction):
            if mult.denominator != 1:
                raise ValueError("Coord multiplier of alpha must be an integer")
            mult = int(mult)
        if mult and alpha is None:
            raise ValueError("a Coord with an alpha part needs its AlphaValue")
        self._set(as_fraction(rat), int(mult), alpha)

    def _set(self, rat, mult, alpha):
        self.rat = rat
        self.mult = mult
        self.alpha = alpha
        af = alpha.float if alpha is not None else 0.0
        try:
            fr = rat.numerator / rat.denominator
        except OverflowError:
            self._f, self._e = 0.0, math.inf
            return
        ma = mult * af
        self._f = fr + ma
        self._e = 4.5e-16 * (abs(fr) + abs(ma)) + 1e-300

    @classmethod
    def _mk(cls, rat, mult, alpha):
        obj = cls.__new__(cls)
        obj._set(rat, mult, alpha)
        return obj

    @classmethod
    def of(cls, value, alpha: AlphaValue) -> "Coord":
        """Parse an int, Fraction, rational string, Coord or ``{"rat","mult"}`` dict."""
        if isinstance(value, Coord):
            return value if value.alpha is alpha else cls._mk(value.rat, value.mult, alpha)
        if isinstance(value, dict):
            return cls._mk(as_fraction(value.get("rat", 0)), int(value.get("mult", 0)), alpha)
        return cls._mk(as_fraction(value), 0, alpha)

    # -- ordering -----------------------------------------------------------
    def _cmp(self, other) -> int:
        if type(other) is not Coord:
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                other = Coord._mk(Fraction(other), 0, self.alpha)
            else:
                return NotImplemented
        d = self._f - other._f
        if d > 2.0 * (self._e + other._e):
            return 1
        if -d > 2.0 * (self._e + other._e):
            return -1
        dm = self.mult - other.mult
        if dm == 0:
            return _sign(self.rat - other.rat)
        alpha = self.alpha if self.alpha is not None else other.alpha
        if self.alpha is not None and other.alpha is not None and self.alpha is not other.alpha:
            if not self.alpha.same_as(other.alpha):
                raise ValueError("comparing coordinates over different slopes")
        return alpha.sign_linear(self.rat - other.rat, dm)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if type(other) is Coord:
            return self.mult == other.mult and self.rat == other.rat
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.mult == 0 and self.rat == other
        return NotImplemented

    def __hash__(self):
        return hash(self.rat) if self.mult == 0 else hash((self.rat, self.mult))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if type(other) is Coord:
            return Coord._mk(self.rat + other.rat, self.mult + other.mult, self.alpha or other.alpha)
        if isinstance(other, (int, Fraction)):
            return Coord._mk(self.rat + other, self.mult, self.alpha)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is Coord:
            return Coord._mk(self.rat - other.rat, self.mult - other.mult, self.alpha or other.alpha)
        if isinstance(other, (int, Fraction)):
            return Coord._mk(self.rat - other, self.mult, self.alpha)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Coord._mk(other - self.rat, -self.mult, self.alpha)
        return NotImplemented

    def __neg__(self):
        return Coord._mk(-self.rat, -self.mult, self.alpha)

    def __abs__(self):
        return -self if self < 0 else self

    def __mul__(self, k):
        if isinstance(k, int) and not isinstance(k, bool):
            return Coord._mk(self.rat * k, self.mult * k, self.alpha)
        if isinstance(k, Fraction):
            m = self.mult * k
            if m.denominator != 1:
                raise ValueError("scaling would leave the ring Q + Z*alpha")
            return Coord._mk(self.rat * k, int(m), self.alpha)
        return NotImplemented

    __rmul__ = __mul__

    def __float__(self):
        if self._e == math.inf:
            return float(self.rat) + self.mult * (self.alpha.float if self.alpha else 0.0)
        return self._f

    # -- helpers ------------------------------------------------------------
    def floor(self) -> int:
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def mod1(self) -> "Coord":
        """The representative of this value in [0, 1)."""
        n = self.floor()
        return self - n if n else self

    def is_rational(self) -> bool:
        return self.mult == 0

    def to_field(self, field: "NumberField") -> "FieldElement":
        return field.element([self.rat, self.mult])

    def to_json(self):
        return {"rat": str(self.rat), "mult": self.mult}

    def __repr__(self):
        if self.mult == 0:
            return f"Coord({self.rat})"
        return f"Coord({self.rat} + {self.mult}a)"

    def __str__(self):
        if self.mult == 0:
            return str(self.rat)
        sign = "+" if self.mult > 0 else "-"
        m = abs(self.mult)
        term = "a" if m == 1 else f"{m}a"
        return f"{self.rat} {sign} {term}" if self.rat else ("-" if self.mult < 0 else "") + term


def compare(a, b, alpha: AlphaValue | None = None) -> str:
    """Return ``"less"``, ``"equal"`` or ``"greater"``."""
    if alpha is not None:
        a, b = Coord.of(a, alpha), Coord.of(b, alpha)
    c = a._cmp(b) if isinstance(a, Coord) else -Coord.of(b, alpha)._cmp(a)
    return ("less", "equal", "greater")[c + 1]


def convergents(alpha: AlphaValue, k: int) -> list[tuple[int, int]]:
    """The first ``k`` convergents p_j/q_j of alpha."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in alpha.digits(k):
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        out.append((p0, q0))
    return out


def nearest_integer_distance(alpha: AlphaValue, n: int) -> Coord:
    """``||n*alpha||`` as an exact coordinate."""
    if n < 1:
        raise ValueError("n must be positive")
    x = Coord._mk(Fraction(0), n, alpha)
    m = (x + Fraction(1, 2)).floor()
    return abs(x - m)


def covering_threshold(alpha: AlphaValue, eps) -> int:
    """First convergent denominator q_k exceeding 1/eps."""
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    k = 1
    while True:
        for _, q in convergents(alpha, k):
            if q > 1 / eps:
                return q
        k *= 2


# ---------------------------------------------------------------------------
# number field Q[x]/(m) for products of coordinates (areas, cubic maps)

class NumberField:
    """The field Q(alpha) in the power basis of alpha's minimal polynomial."""

    def __init__(self, alpha: AlphaValue):
        self.alpha = alpha
        self.modulus = [Fraction(c) for c in alpha.minpoly]
        self.degree = len(self.modulus) - 1

    def element(self, coeffs) -> "FieldElement":
        c = [as_fraction(x) for x in coeffs]
        if len(c) > self.degree:
            c = _pdivmod(c, self.modulus)[1]
        c = c + [Fraction(0)] * (self.degree - len(c))
        return FieldElement(tuple(c), self)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, Coord):
            return self.element([value.rat, value.mult])
        return self.element([value])

    @property
    def gen(self) -> "FieldElement":
        return self.element([0, 1])

    def reduce(self, poly):
        poly = _trim(poly)
        if len(poly) > self.degree:
            poly = _pdivmod(poly, self.modulus)[1]
        return poly


class FieldElement:
    """Exact element of Q(alpha); comparisons are certified by interval refinement."""

    __slots__ = ("c", "field")

    def __init__(self, coeffs, field: NumberField):
        self.c = coeffs
        self.field = field

    def _wrap(self, poly):
        poly = self.field.reduce(poly)
        return FieldElement(tuple(poly) + (Fraction(0),) * (self.field.degree - len(poly)), self.field)

    def _other(self, o):
        if isinstance(o, FieldElement):
            return o
        return self.field(o)

    def __add__(self, o):
        o = self._other(o)
        return FieldElement(tuple(a + b for a, b in zip(self.c, o.c)), self.field)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return FieldElement(tuple(a - b for a, b in zip(self.c, o.c)), self.field)

    def __rsub__(self, o):
        return self._other(o) - self

    def __neg__(self):
        return FieldElement(tuple(-a for a in self.c), self.field)

    def __mul__(self, o):
        o = self._other(o)
        return self._wrap(_pmul(list(self.c), list(o.c)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        a = _trim(list(self.c))
        if not a:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: s*a + t*m = 1
        r0, r1 = list(self.field.modulus), a
        s0, s1 = [], [Fraction(1)]
        while len(_trim(r1)) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim([x - y for x, y in _zip_pad(s0, _pmul(q, s1))])
        inv = [x / r1[0] for x in s1]
        return self._wrap(inv)

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.element([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if not any(self.c[1:]):
            return _sign(self.c[0])
        bits = 64
        while True:
            lo, hi = self.field.alpha.enclosure(bits)
            a, b = _interval_horner(self.c, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
            bits *= 2

    def _cmp(self, o):
        return (self - self._other(o)).sign()

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __le__(self, o):
        return self._cmp(o) <= 0

    def __gt__(self, o):
        return self._cmp(o) > 0

    def __ge__(self, o):
        return self._cmp(o) >= 0

    def __eq__(self, o):
        if isinstance(o, (FieldElement, Coord, int, Fraction)):
            return (self - self._other(o)).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __float__(self):
        lo, hi = self.field.alpha.enclosure(80)
        a, b = _interval_horner(self.c, lo, hi)
        return float((a + b) / 2)

    def floor(self) -> int:
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def mod1(self):
        return self - self.floor()

    def __repr__(self):
        terms = [f"{c}*a^{i}" if i else str(c) for i, c in enumerate(self.c) if c]
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _interval_horner(coeffs, lo, hi):
    """Bounds for sum c_i x^i over lo <= x <= hi."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    return a, b


def rationals_to_coords(values: Iterable, alpha: AlphaValue) -> list[Coord]:
    return [Coord.of(v, alpha) for v in values]
