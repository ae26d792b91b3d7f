"""Rank-two numerical lattice of the threefold's residual category.

The lattice has a basis (kappa_1, kappa_2) in which the Euler form is -I_2,
so its isometries are exactly the eight signed permutation matrices: four
preserving the basis vectors up to sign, four swapping them.

The surface and threefold sides exchange numerical data through two lattice
maps: ``forg`` sends a surface profile (r, d, q, s) to
(s - r) kappa_1 + (2r + 2s + d) kappa_2, and ``inf`` sends
a*kappa_1 + b*kappa_2 to -a*(1, 0, -1) - b*(2, -H, 2).  The image of ``inf``
always has Delta a multiple of H, so it is stored as a reference class and
pairs against arbitrary profiles; the composite inf(forg(-)) doubles every
class in the span of (1, 0, -1) and (2, -H, 2), the numerical shadow of the
two-step equivariant construction rescaling the stability condition by 2.

The Chern-character lifts of kappa_1, kappa_2 on the threefold
(1 - h^2/5 and 2 - h + h^3/12) are documentation only; nothing here uses
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charge import ChargeFamily, ChargeValue, charge
from .exactq import RatLike, rat
from .mukai import MukaiProfile, ReferenceClass, V1, V2


@dataclass(frozen=True)
class KuClass:
    """Integer coordinates on the basis (kappa_1, kappa_2)."""

    a: int
    b: int

    def __neg__(self) -> "KuClass":
        return KuClass(-self.a, -self.b)

    def __add__(self, other: "KuClass") -> "KuClass":
        return KuClass(self.a + other.a, self.b + other.b)

    def scale(self, c: int) -> "KuClass":
        return KuClass(c * self.a, c * self.b)

    def __str__(self) -> str:
        return f"{self.a}*k1+{self.b}*k2"


def euler_ku(x: KuClass, y: KuClass) -> int:
    """Euler pairing in the kappa-basis: -(x.a*y.a + x.b*y.b)."""
    return -(x.a * y.a + x.b * y.b)


def forg(w: MukaiProfile) -> KuClass:
    """Lattice map induced by forgetting the equivariant structure."""
    return KuClass(w.s - w.r, 2 * w.r + 2 * w.s + w.d)


def inf_reference(x: KuClass) -> ReferenceClass:
    """inf(a*k1 + b*k2) = -a*(1,0,-1) - b*(2,-H,2), kept as a reference class
    (its Delta-part is b*H)."""
    return ReferenceClass(-x.a - 2 * x.b, Fraction(x.b), x.a - 2 * x.b)


def inf(x: KuClass, degree: int = 10) -> MukaiProfile:
    """Profile of the inflated class: (-a-2b, degree*b, degree*b^2, a-2b)."""
    return inf_reference(x).profile(degree)


def ku_charge(fam: ChargeFamily, x: KuClass) -> ChargeValue:
    """Central charge of a lattice class, computed through inflation."""
    return charge(fam, inf(x, fam.degree))


def ku_charge_at(fam: ChargeFamily, x: KuClass, t: RatLike) -> tuple[Fraction, Fraction]:
    """(re, im_coeff) of the class's charge at a rational t > 0."""
    tv = rat(t)
    if tv <= 0:
        raise ValueError("path parameter t must be positive")
    return ku_charge(fam, x).at(tv)


@dataclass(frozen=True)
class KuIsometry:
    """2x2 integer matrix preserving the Euler form, i.e. orthogonal."""

    m: tuple[tuple[int, int], tuple[int, int]]

    @property
    def swapping(self) -> bool:
        return self.m[0][0] == 0

    def apply(self, x: KuClass) -> KuClass:
        return KuClass(self.m[0][0] * x.a + self.m[0][1] * x.b,
                       self.m[1][0] * x.a + self.m[1][1] * x.b)

    def __str__(self) -> str:
        return f"[[{self.m[0][0]},{self.m[0][1]}],[{self.m[1][0]},{self.m[1][1]}]]"


def isometries() -> tuple[KuIsometry, ...]:
    """All isometries of the lattice: the 8 signed permutation matrices,
    found by brute force over entries in {-1, 0, 1} and ordered with the
    4 preserving ones (diagonal) first."""
    found = []
    rng = (-1, 0, 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    # M^T (-I) M = -I  <=>  M^T M = I
                    if (a * a + c * c == 1 and b * b + d * d == 1
                            and a * b + c * d == 0):
                        found.append(KuIsometry(((a, b), (c, d))))
    found.sort(key=lambda iso: (iso.swapping, iso.m))
    return tuple(found)


def v1_profile(degree: int = 10) -> MukaiProfile:
    return V1.profile(degree)


def v2_profile(degree: int = 10) -> MukaiProfile:
    return V2.profile(degree)


def span_combination(c1: int, c2: int, degree: int = 10) -> MukaiProfile:
    """Profile of c1*(1,0,-1) + c2*(2,-H,2); Delta-part is -c2*H so q is
    determined."""
    return MukaiProfile(c1 + 2 * c2, -c2 * degree, c2 * c2 * degree, -c1 + 2 * c2)
