"""Central charges along the one-parameter path of stability conditions.

The path is sigma_t = sigma_{sqrt(t)*u0*H, b*H} with t > 0.  For a profile
(r, d, q, s) the charge is

    Z_t = [ b*d - s + (r*D/2)*(u0^2*t - b^2) ]  +  [ u0*(d - D*r*b) ] * sqrt(t) * i

with D the polarization degree.  The real part is degree <= 1 in t and the
imaginary part is a constant multiple of sqrt(t), so a charge is stored as a
pair of exact polynomials (re, im_coeff) and every comparison the wall
analysis needs reduces to polynomial sign questions: sqrt(t) only ever enters
through the common factor shared by all imaginary parts.

The default family u0 = 1/5, b = -2/5, D = 10 makes the imaginary quantum of
a profile the integer d + 4r; at t = 1 the real part is -(3r/5 + 2d/5 + s).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional

from .exactq import RatLike, SignResult, TInterval, TPoly, count_roots, rat, sign_on_interval
from .mukai import (
    Exclusion,
    K3Context,
    MukaiProfile,
    exclusion_check,
    hodge_ok,
    Hodge,
)


class CertificationError(RuntimeError):
    """A certified search or bound derivation could not be completed."""


@dataclass(frozen=True)
class ChargeFamily:
    """The two rational parameters of the path: omega = sqrt(t)*u0*H, beta = b*H."""

    u0: Fraction
    b: Fraction
    degree: int = 10

    def __post_init__(self):
        object.__setattr__(self, "u0", rat(self.u0))
        object.__setattr__(self, "b", rat(self.b))
        if self.u0 <= 0:
            raise ValueError("u0 must be positive")
        if self.degree <= 0:
            raise ValueError("degree must be positive")

    @property
    def quantum_unit(self) -> Fraction:
        """Generator of the value group of d - D*r*b over integer (r, d).

        im_coeff = u0 * (d - D*r*b) always lies in u0 * quantum_unit * Z, so
        imaginary parts quantize.  Equals 1 for the default family.
        """
        qb = self.b.denominator
        return Fraction(gcd(qb, abs(self.degree * self.b.numerator)), qb)

    def quantum(self, w: MukaiProfile) -> int:
        """Integer k with im_coeff(w) = u0 * quantum_unit * k.

        For the default family this is d + 4r.
        """
        val = (w.d - self.degree * w.r * self.b) / self.quantum_unit
        assert val.denominator == 1
        return int(val)


def gm10_family() -> ChargeFamily:
    """The degree-10 path: u0 = 1/5, b = -2/5."""
    return ChargeFamily(Fraction(1, 5), Fraction(-2, 5), 10)


@dataclass(frozen=True)
class ChargeValue:
    """Z(t) = re(t) + im_coeff(t) * sqrt(t) * i, both parts exact polynomials."""

    re: TPoly
    im_coeff: TPoly

    def is_zero_poly(self) -> bool:
        return self.re.is_zero and self.im_coeff.is_zero

    def __add__(self, other: "ChargeValue") -> "ChargeValue":
        return ChargeValue(self.re + other.re, self.im_coeff + other.im_coeff)

    def at(self, t: RatLike) -> tuple[Fraction, Fraction]:
        """(re(t), im_coeff(t)); the actual imaginary part is im_coeff(t)*sqrt(t)."""
        return self.re.eval(t), self.im_coeff.eval(t)


def charge(fam: ChargeFamily, w: MukaiProfile) -> ChargeValue:
    """Exact central charge of a profile along the path."""
    D, u0, b = fam.degree, fam.u0, fam.b
    re = TPoly((b * w.d - w.s - Fraction(w.r * D, 2) * b * b,
                Fraction(w.r * D, 2) * u0 * u0))
    im = TPoly((u0 * (w.d - D * w.r * b),))
    return ChargeValue(re, im)


# ---------------------------------------------------------------------------
# Position of a charge relative to the upper half plane
# ---------------------------------------------------------------------------

class HeartPosition(Enum):
    STRICT_UPPER = "strict-upper"
    REAL_NEGATIVE = "real-negative"
    REAL_POSITIVE = "real-positive"
    ZERO = "zero"
    LOWER = "lower"


def heart_position(fam: ChargeFamily, w: MukaiProfile, t: RatLike) -> HeartPosition:
    """Where Z_t(w) sits: the heart only contains classes with Im > 0 or
    (Im = 0 and Re < 0)."""
    tv = rat(t)
    if tv <= 0:
        raise ValueError("path parameter t must be positive")
    re, im = charge(fam, w).at(tv)
    if im > 0:
        return HeartPosition.STRICT_UPPER
    if im < 0:
        return HeartPosition.LOWER
    if re < 0:
        return HeartPosition.REAL_NEGATIVE
    if re > 0:
        return HeartPosition.REAL_POSITIVE
    return HeartPosition.ZERO


# ---------------------------------------------------------------------------
# Sign of Re(Z(w)/Z(v)) on an interval
# ---------------------------------------------------------------------------

def re_ratio_numerator(fam: ChargeFamily, w: MukaiProfile, v: MukaiProfile) -> TPoly:
    """Polynomial with the sign of Re(Z(w)/Z(v)): re_w*re_v + t*im_w*im_v.

    Valid wherever Z(v) is nonzero, because the denominator |Z(v)|^2 is
    positive; the t factor is Im(w)*Im(v) = im_w*im_v*t.
    """
    zw, zv = charge(fam, w), charge(fam, v)
    return zw.re * zv.re + TPoly.t() * zw.im_coeff * zv.im_coeff


def charge_vanishes_on(fam: ChargeFamily, v: MukaiProfile, iv: TInterval) -> bool:
    """Whether Z_t(v) = 0 for some t in iv (t > 0 assumed)."""
    zv = charge(fam, v)
    if zv.is_zero_poly():
        return True
    if zv.im_coeff.is_zero:
        common = zv.re
    elif zv.re.is_zero:
        common = zv.im_coeff
    else:
        common = zv.re.gcd(zv.im_coeff)
        if common.degree < 1:
            return False
    return count_roots(common, iv) > 0


def re_ratio_sign(fam: ChargeFamily, w: MukaiProfile, v: MukaiProfile,
                  iv: TInterval) -> SignResult:
    """Exact sign verdict of Re(Z_t(w)/Z_t(v)) for t in iv.

    Raises CertificationError("reference charge vanishes") when Z(v) has a
    zero in iv, where the ratio is undefined.
    """
    if charge_vanishes_on(fam, v, iv):
        raise CertificationError("reference charge vanishes")
    return sign_on_interval(re_ratio_numerator(fam, w, v), iv)


# ---------------------------------------------------------------------------
# Existence of the stability condition: no spherical sheaf class on the
# closed negative real ray
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RayCandidate:
    """A spherical sheaf-like profile whose charge reaches the ray R_{<=0}."""

    profile: MukaiProfile
    t_window: TInterval
    exclusion: Optional[Exclusion]


@dataclass(frozen=True)
class ExistenceResult:
    ok: bool
    violation: Optional[MukaiProfile]
    candidates: tuple[RayCandidate, ...]
    derived_rank_bound: int
    mode: str  # "point" or "symbolic"

    @property
    def verdict(self) -> str:
        return "no-obstruction" if self.ok else "violation"


def _rank_bound(fam: ChargeFamily, t_min: Fraction) -> int:
    """Certified bound: a spherical sheaf class with Im = 0 and Re <= 0 at
    some t >= t_min has r^2 <= 2/(D*u0^2*t_min).

    On the Im = 0 locus d = D*r*b, the ray condition forces
    s >= (r*D/2)(u0^2 t - b^2) + D*r*b^2 while sphericality q = 2rs - 2 and
    the Hodge bound q <= d^2/D force s <= (D r^2 b^2 + 2)/(2r); combining
    gives r^2 * D * u0^2 * t <= 2.
    """
    bound = Fraction(2) / (fam.degree * fam.u0 * fam.u0 * t_min)
    return isqrt(int(bound)) if bound >= 1 else 0


def _ray_profiles_at_rank(fam: ChargeFamily, r: int) -> Optional[tuple[int, Fraction, Fraction]]:
    """(d, s_lo(t) coefficients) for rank r on the Im = 0 locus, or None when
    d = D*r*b is not an integer (then no integer profile has Im = 0)."""
    d = fam.degree * r * fam.b
    if d.denominator != 1:
        return None
    # Re(t) <= 0  <=>  s >= s1*t + s0
    s1 = Fraction(r * fam.degree, 2) * fam.u0 * fam.u0
    s0 = fam.b * d - Fraction(r * fam.degree, 2) * fam.b * fam.b
    return int(d), s1, s0


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def existence_check(ctx: K3Context, fam: ChargeFamily, t: RatLike,
                    bound: Optional[int] = None) -> ExistenceResult:
    """Check the existence criterion for sigma_t at one rational t > 0.

    Enumerates all spherical sheaf-like profiles (r >= 1 forced on the
    Im = 0 locus) whose charge lies on the closed negative real ray, after
    certifying that ranks above the derived bound are impossible.  The
    stability condition exists iff every such profile is excluded.
    """
    tv = rat(t)
    if tv <= 0:
        raise ValueError("t must be positive")
    r_max = _rank_bound(fam, tv)
    if bound is None:
        bound = r_max
    if bound < r_max:
        raise CertificationError(
            f"search not exhaustive: need rank bound >= {r_max}, got {bound}")
    cands: list[RayCandidate] = []
    violation: Optional[MukaiProfile] = None
    for r in range(1, r_max + 1):
        data = _ray_profiles_at_rank(fam, r)
        if data is None:
            continue
        d, s1, s0 = data
        s_lo = _ceil_frac(s1 * tv + s0)
        # Hodge: q = 2rs - 2 <= d^2/D
        s_hi = _floor_frac((Fraction(d * d, fam.degree) + 2) / (2 * r))
        for s in range(s_lo, s_hi + 1):
            w = MukaiProfile(r, d, 2 * r * s - 2, s)
            if hodge_ok(ctx, w) is Hodge.INFEASIBLE:
                continue
            excl = exclusion_check(ctx, w)
            cands.append(RayCandidate(w, TInterval.point(tv), excl))
            if excl is None and violation is None:
                violation = w
    cands.sort(key=lambda c: c.profile.fields())
    return ExistenceResult(violation is None, violation, tuple(cands), r_max, "point")


def existence_check_symbolic(ctx: K3Context, fam: ChargeFamily,
                             iv: TInterval) -> ExistenceResult:
    """Existence criterion for every t in iv at once.

    For each rank up to the bound derived at the interval's lower end, the
    ray condition s >= s1*t + s0 holds on a t-window computed exactly, so
    each candidate profile is reported with the window where it touches the
    ray.  No obstruction means all candidates are excluded.
    """
    if iv.lower is None or iv.lower <= 0:
        raise ValueError("symbolic existence check needs an interval with positive lower end")
    r_max = _rank_bound(fam, iv.lower)
    cands: list[RayCandidate] = []
    violation: Optional[MukaiProfile] = None
    for r in range(1, r_max + 1):
        data = _ray_profiles_at_rank(fam, r)
        if data is None:
            continue
        d, s1, s0 = data
        s_hi = _floor_frac((Fraction(d * d, fam.degree) + 2) / (2 * r))
        s_lo = _ceil_frac(s1 * iv.lower + s0)
        for s in range(s_lo, s_hi + 1):
            # ray condition holds for t <= (s - s0)/s1 (s1 > 0 since r >= 1)
            t_hi = (Fraction(s) - s0) / s1
            window = iv.intersect_closed(iv.lower, t_hi)
            if window is None:
                continue
            w = MukaiProfile(r, d, 2 * r * s - 2, s)
            if hodge_ok(ctx, w) is Hodge.INFEASIBLE:
                continue
            excl = exclusion_check(ctx, w)
            cands.append(RayCandidate(w, window, excl))
            if excl is None and violation is None:
                violation = w
    cands.sort(key=lambda c: c.profile.fields())
    return ExistenceResult(violation is None, violation, tuple(cands), r_max, "symbolic")
