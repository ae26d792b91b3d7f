"""Exact univariate polynomial arithmetic over the rationals, with Sturm-based
root counting, root isolation and sign determination on intervals.

Everything downstream (wall equations, central-charge comparisons, case
eliminations) reduces to sign questions about low-degree polynomials in the
path parameter ``t``.  Those questions are decided here exactly: coefficients
are ``fractions.Fraction`` values, root counts come from Sturm sequences on
the square-free part, and infinite interval endpoints are handled through
leading-coefficient signs rather than large-number substitution.  No floating
point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]


class ZeroPolynomialError(ValueError):
    """Raised when an operation is undefined for the zero polynomial."""


def rat(x: RatLike) -> Fraction:
    """Coerce ints, strings like ``"-2/5"``, or Fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class TPoly:
    """Polynomial in the path parameter ``t`` with exact rational coefficients.

    Coefficients are stored low degree first; trailing zeros are stripped, so
    the zero polynomial has an empty coefficient tuple.  Instances are
    immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("TPoly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "TPoly":
        return TPoly(())

    @staticmethod
    def const(c: RatLike) -> "TPoly":
        return TPoly((rat(c),))

    @staticmethod
    def t() -> "TPoly":
        return TPoly((0, 1))

    # -- basic structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return TPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    def __sub__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return TPoly(self.coeff(i) - other.coeff(i) for i in range(n))

    def __neg__(self) -> "TPoly":
        return TPoly(-c for c in self.coeffs)

    def __mul__(self, other: Union["TPoly", RatLike]) -> "TPoly":
        if not isinstance(other, TPoly):
            k = rat(other)
            return TPoly(c * k for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return TPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return TPoly(out)

    def __rmul__(self, other: RatLike) -> "TPoly":
        return self.__mul__(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"TPoly({self})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c == 0:
                continue
            s = _coeff_str(c, i)
            if parts and not s.startswith("-"):
                parts.append("+" + s)
            else:
                parts.append(s)
        return "".join(parts)

    # -- calculus and evaluation --------------------------------------------

    def eval(self, t: RatLike) -> Fraction:
        """Exact value at a rational point (Horner)."""
        tv = rat(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * tv + c
        return acc

    def derivative(self) -> "TPoly":
        return TPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    # -- euclidean structure --------------------------------------------------

    def divmod(self, other: "TPoly") -> tuple["TPoly", "TPoly"]:
        if other.is_zero:
            raise ZeroPolynomialError("division by the zero polynomial")
        q: list[Fraction] = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d, lc = other.degree, other.leading
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] / lc
            q[k] = f
            for i in range(d + 1):
                rem[k + i] -= f * other.coeffs[i]
            rem.pop()
        return TPoly(q), TPoly(rem)

    def gcd(self, other: "TPoly") -> "TPoly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a * (1 / a.leading)

    def square_free_part(self) -> "TPoly":
        """The radical p / gcd(p, p'); same roots, all simple."""
        if self.is_zero:
            raise ZeroPolynomialError("zero polynomial has no square-free part")
        if self.degree == 0:
            return TPoly.const(1)
        g = self.gcd(self.derivative())
        q, r = self.divmod(g)
        assert r.is_zero
        return q

    def sign_at(self, t: RatLike) -> int:
        v = self.eval(t)
        return (v > 0) - (v < 0)

    def sign_at_pos_infinity(self) -> int:
        if self.is_zero:
            return 0
        return 1 if self.leading > 0 else -1

    def sign_at_neg_infinity(self) -> int:
        if self.is_zero:
            return 0
        s = 1 if self.leading > 0 else -1
        return s if self.degree % 2 == 0 else -s


def _coeff_str(c: Fraction, power: int) -> str:
    num = str(c) if c.denominator != 1 else str(c.numerator)
    if power == 0:
        return num
    var = "t" if power == 1 else f"t^{power}"
    if c == 1:
        return var
    if c == -1:
        return "-" + var
    if c.denominator != 1:
        sign = "-" if c < 0 else ""
        return f"{sign}({abs(c)}){var}"
    return num + var


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TInterval:
    """Interval of path parameters with optionally infinite rational endpoints.

    ``lower=None`` means -oo and ``upper=None`` means +oo; infinite endpoints
    are always open.  A point interval has ``lower == upper`` and both ends
    closed.
    """

    lower: Optional[Fraction]
    upper: Optional[Fraction]
    lower_closed: bool = True
    upper_closed: bool = True

    def __post_init__(self):
        lo = None if self.lower is None else rat(self.lower)
        hi = None if self.upper is None else rat(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo is None and self.lower_closed:
            object.__setattr__(self, "lower_closed", False)
        if hi is None and self.upper_closed:
            object.__setattr__(self, "upper_closed", False)
        if lo is not None and hi is not None:
            if lo > hi:
                raise ValueError("empty interval: lower > upper")
            if lo == hi and not (self.lower_closed and self.upper_closed):
                raise ValueError("point interval must be closed on both ends")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def closed(a: RatLike, b: RatLike) -> "TInterval":
        return TInterval(rat(a), rat(b), True, True)

    @staticmethod
    def open(a: Optional[RatLike], b: Optional[RatLike]) -> "TInterval":
        lo = None if a is None else rat(a)
        hi = None if b is None else rat(b)
        return TInterval(lo, hi, False, False)

    @staticmethod
    def left_open(a: RatLike, b: Optional[RatLike]) -> "TInterval":
        hi = None if b is None else rat(b)
        return TInterval(rat(a), hi, False, hi is not None)

    @staticmethod
    def ray_from(a: RatLike, closed: bool = True) -> "TInterval":
        return TInterval(rat(a), None, closed, False)

    @staticmethod
    def point(a: RatLike) -> "TInterval":
        return TInterval(rat(a), rat(a), True, True)

    @staticmethod
    def whole_line() -> "TInterval":
        return TInterval(None, None, False, False)

    # -- queries -------------------------------------------------------------

    @property
    def is_point(self) -> bool:
        return self.lower is not None and self.lower == self.upper

    def contains(self, t: RatLike) -> bool:
        tv = rat(t)
        if self.lower is not None:
            if tv < self.lower or (tv == self.lower and not self.lower_closed):
                return False
        if self.upper is not None:
            if tv > self.upper or (tv == self.upper and not self.upper_closed):
                return False
        return True

    def sample_point(self) -> Fraction:
        """Some rational point inside the interval."""
        if self.lower is not None and self.upper is not None:
            return (self.lower + self.upper) / 2
        if self.lower is not None:
            return self.lower + 1
        if self.upper is not None:
            return self.upper - 1
        return Fraction(0)

    def intersect_closed(self, a: RatLike, b: RatLike) -> Optional["TInterval"]:
        """Intersection with a closed interval [a, b]; None if empty."""
        lo, lc = rat(a), True
        if self.lower is not None and (self.lower > lo or (self.lower == lo and not self.lower_closed)):
            lo, lc = self.lower, self.lower_closed
        hi, hc = rat(b), True
        if self.upper is not None and (self.upper < hi or (self.upper == hi and not self.upper_closed)):
            hi, hc = self.upper, self.upper_closed
        if lo > hi or (lo == hi and not (lc and hc)):
            return None
        return TInterval(lo, hi, lc, hc)

    def __str__(self) -> str:
        lb = "[" if self.lower_closed else "("
        rb = "]" if self.upper_closed else ")"
        lo = "-oo" if self.lower is None else str(self.lower)
        hi = "oo" if self.upper is None else str(self.upper)
        return f"{lb}{lo}, {hi}{rb}"


# ---------------------------------------------------------------------------
# Sturm sequences, root counting, isolation
# ---------------------------------------------------------------------------

def sturm_sequence(p: TPoly) -> list[TPoly]:
    """Sturm sequence of a (square-free) polynomial."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero:
        seq.append(-(seq[-2].divmod(seq[-1])[1]))
    seq.pop()
    return seq


def _sign_variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a * b < 0)


def _variations_at(seq: Sequence[TPoly], t: Optional[Fraction], at_neg_inf: bool = False) -> int:
    if t is None:
        if at_neg_inf:
            return _sign_variations([q.sign_at_neg_infinity() for q in seq])
        return _sign_variations([q.sign_at_pos_infinity() for q in seq])
    return _sign_variations([q.sign_at(t) for q in seq])


def count_roots_half_open(p: TPoly, a: Optional[Fraction], b: Optional[Fraction]) -> int:
    """Number of distinct real roots of ``p`` in (a, b]; None endpoints are infinite."""
    if p.is_zero:
        raise ZeroPolynomialError("indeterminate root set")
    if p.degree == 0:
        return 0
    sf = p.square_free_part()
    seq = sturm_sequence(sf)
    va = _variations_at(seq, a, at_neg_inf=True)
    vb = _variations_at(seq, b, at_neg_inf=False)
    return va - vb


def count_roots(p: TPoly, iv: TInterval) -> int:
    """Number of distinct real roots of ``p`` in ``iv``, respecting endpoint closure."""
    if p.is_zero:
        raise ZeroPolynomialError("indeterminate root set")
    if iv.is_point:
        return 1 if p.eval(iv.lower) == 0 else 0
    n = count_roots_half_open(p, iv.lower, iv.upper)
    if iv.lower is not None and iv.lower_closed and p.eval(iv.lower) == 0:
        n += 1
    if iv.upper is not None and not iv.upper_closed and p.eval(iv.upper) == 0:
        n -= 1
    return n


def _root_multiplicity(p: TPoly, t: Fraction) -> int:
    m, q = 0, p
    while not q.is_zero and q.eval(t) == 0:
        m += 1
        q = q.derivative()
    return m


def _cauchy_bound(p: TPoly) -> Fraction:
    """All real roots lie strictly inside (-B, B)."""
    lc = abs(p.leading)
    return Fraction(1) + max(abs(c) / lc for c in p.coeffs)


def _rational_roots(p: TPoly) -> list[Fraction]:
    """All rational roots, via the rational root theorem on cleared denominators."""
    if p.degree < 1:
        return []
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*(abs(c) for c in ints))
    ints = [c // g for c in ints]
    shift = 0
    while ints[shift] == 0:
        shift += 1
    ints = ints[shift:]
    roots = [Fraction(0)] if shift else []
    if len(ints) > 1:
        a0, an = abs(ints[0]), abs(ints[-1])
        for pnum in _divisors(a0):
            for qden in _divisors(an):
                for cand in (Fraction(pnum, qden), Fraction(-pnum, qden)):
                    if p.eval(cand) == 0 and cand not in roots:
                        roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


@dataclass(frozen=True)
class IsolatedRoot:
    """One distinct real root: either an exact rational, or an open isolating
    interval with rational endpoints containing exactly that root."""

    low: Fraction
    high: Fraction
    multiplicity: int
    exact: Optional[Fraction] = None

    def as_interval(self) -> TInterval:
        if self.exact is not None:
            return TInterval.point(self.exact)
        return TInterval.open(self.low, self.high)

    def __str__(self) -> str:
        if self.exact is not None:
            return f"t={self.exact} (mult {self.multiplicity})"
        return f"t in ({self.low}, {self.high}) (mult {self.multiplicity})"


@dataclass(frozen=True)
class RootIsolation:
    count: int
    roots: tuple[IsolatedRoot, ...]


def square_free_decomposition(p: TPoly) -> list[tuple[TPoly, int]]:
    """Yun decomposition: pairwise-coprime square-free factors with their
    multiplicities, covering all roots of ``p``.  Constant factors dropped."""
    if p.is_zero:
        raise ZeroPolynomialError("zero polynomial has no square-free decomposition")
    if p.degree < 1:
        return []
    g = p.gcd(p.derivative())
    if g.degree == 0:
        return [(p * (1 / p.leading), 1)]
    w = p.divmod(g)[0]
    y = p.derivative().divmod(g)[0]
    z = y - w.derivative()
    out: list[tuple[TPoly, int]] = []
    i = 1
    while w.degree > 0:
        gi = w.gcd(z)
        if gi.degree > 0:
            out.append((gi * (1 / gi.leading), i))
            w = w.divmod(gi)[0]
            z = z.divmod(gi)[0]
        y = z
        z = y - w.derivative()
        i += 1
    return out


def _isolate_irrational(f: TPoly, iv: TInterval, expected: int,
                        mult: int) -> list[IsolatedRoot]:
    """Isolate the ``expected`` roots of ``f`` in ``iv``; ``f`` is square-free
    with no rational roots, so no root ever sits on a rational endpoint."""
    bound = _cauchy_bound(f)
    lo = iv.lower if iv.lower is not None else -bound
    hi = iv.upper if iv.upper is not None else bound
    seq = sturm_sequence(f)
    out: list[IsolatedRoot] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _variations_at(seq, a) - _variations_at(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatedRoot(a, b, mult, None))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    assert len(out) == expected
    return out


def isolate_roots(p: TPoly, iv: TInterval) -> RootIsolation:
    """Distinct real roots of ``p`` in ``iv`` with isolating data.

    Rational roots are reported exactly (every root the wall computations
    care about is rational); irrational ones get open isolating intervals
    found by Sturm-count bisection.  Multiplicities come from the square-free
    decomposition.
    """
    if p.is_zero:
        raise ZeroPolynomialError("indeterminate root set")
    total = count_roots(p, iv)
    if total == 0:
        return RootIsolation(0, ())
    if iv.is_point:
        t0 = iv.lower
        return RootIsolation(1, (IsolatedRoot(t0, t0, _root_multiplicity(p, t0), t0),))

    found: list[IsolatedRoot] = []
    for f, mult in square_free_decomposition(p):
        rem = f
        for rt in _rational_roots(f):
            rem = rem.divmod(TPoly((-rt, 1)))[0]
            if iv.contains(rt):
                found.append(IsolatedRoot(rt, rt, mult, rt))
        k = count_roots(rem, iv) if rem.degree >= 1 else 0
        if k:
            found.extend(_isolate_irrational(rem, iv, k, mult))
    roots = tuple(sorted(found, key=lambda r: (r.low, r.high)))
    assert len(roots) == total
    return RootIsolation(total, roots)


def sturm_roots(p: TPoly, iv: TInterval) -> RootIsolation:
    """Count and isolate the distinct real roots of ``p`` in ``iv``.

    Raises ZeroPolynomialError("indeterminate root set") for the zero
    polynomial.  Multiplicities are reported per root; the count is of
    distinct roots.
    """
    return isolate_roots(p, iv)


# ---------------------------------------------------------------------------
# Sign determination
# ---------------------------------------------------------------------------

class Sign(Enum):
    ALWAYS_POSITIVE = "always-positive"
    ALWAYS_NEGATIVE = "always-negative"
    ALWAYS_ZERO = "always-zero"
    MIXED_OR_ZERO = "mixed-or-zero"


@dataclass(frozen=True)
class SignResult:
    verdict: Sign
    witnesses: tuple[IsolatedRoot, ...] = ()

    def __str__(self) -> str:
        if self.witnesses:
            w = "; ".join(str(r) for r in self.witnesses)
            return f"{self.verdict.value} ({w})"
        return self.verdict.value


def sign_on_interval(p: TPoly, iv: TInterval) -> SignResult:
    """Exact sign verdict for ``p`` on ``iv``.

    ALWAYS_POSITIVE means p(t) > 0 for every t in iv (and likewise for
    negative); a polynomial that merely touches zero inside the interval is
    MIXED_OR_ZERO, with the roots returned as witnesses.
    """
    if p.is_zero:
        return SignResult(Sign.ALWAYS_ZERO)
    if iv.is_point:
        s = p.sign_at(iv.lower)
        if s > 0:
            return SignResult(Sign.ALWAYS_POSITIVE)
        if s < 0:
            return SignResult(Sign.ALWAYS_NEGATIVE)
        return SignResult(Sign.MIXED_OR_ZERO, (IsolatedRoot(iv.lower, iv.lower, _root_multiplicity(p, iv.lower), iv.lower),))
    iso = isolate_roots(p, iv)
    if iso.count == 0:
        s = p.sign_at(iv.sample_point())
        return SignResult(Sign.ALWAYS_POSITIVE if s > 0 else Sign.ALWAYS_NEGATIVE)
    return SignResult(Sign.MIXED_OR_ZERO, iso.roots)


def poly_eval(p: TPoly, t: RatLike) -> Fraction:
    """Exact evaluation; module-level spelling of ``p.eval(t)``."""
    return p.eval(t)
