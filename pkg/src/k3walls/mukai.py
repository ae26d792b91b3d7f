"""Numerical profiles of Mukai vectors on a polarized K3 surface.

A class (r, Delta, s) is shadowed by the integers it exposes to the
polarization: rank r, degree d = Delta.H, self-intersection q = Delta^2, and
the degree-4 component s.  This is enough for every nonexistence argument the
wall analysis needs (if no profile survives, no class exists), and for every
pairing that actually occurs, because one side always has Delta proportional
to H.  General pairing of two arbitrary profiles is deliberately undefined:
it would require the full, unknown Picard lattice.

Realizability is handled negatively.  ``exclusion_check`` applies the lattice
hypotheses of the surface (strong smoothness and Brill-Noether generality as
a configurable set of forbidden isotropic degrees, plus the unconditional
fact that a (-2)-class of degree zero cannot exist), and positively only
through explicit context flags for line and conic classes.  "Realizable"
therefore means "not excluded", never "certified to exist".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import FrozenSet, Optional

from .exactq import RatLike, rat


@dataclass(frozen=True, order=True)
class MukaiProfile:
    """Numerical shadow (r, d, q, s) of a Mukai vector; q must be even."""

    r: int
    d: int
    q: int
    s: int

    def __post_init__(self):
        if self.q % 2 != 0:
            raise ValueError(f"q must be even (the Neron-Severi lattice is even): got {self.q}")

    def __neg__(self) -> "MukaiProfile":
        return MukaiProfile(-self.r, -self.d, self.q, -self.s)

    def __add__(self, other: "MukaiProfile") -> "MukaiProfile":
        """Fieldwise sum.  Only meaningful when the Delta-parts are known to
        add inside a common rank-one sublattice; q adds like (D1+D2)^2 only if
        the caller accounts for the cross term, so this is restricted to the
        cases where one summand has q = 0 and d = 0."""
        if not (self.q == 0 and self.d == 0) and not (other.q == 0 and other.d == 0):
            raise ValueError("profile addition needs one summand with trivial Delta-part")
        return MukaiProfile(self.r + other.r, self.d + other.d, self.q + other.q, self.s + other.s)

    def scale(self, c: int) -> "MukaiProfile":
        """The profile of c times the class: q is quadratic in the class."""
        return MukaiProfile(c * self.r, c * self.d, c * c * self.q, c * self.s)

    def fields(self) -> tuple[int, int, int, int]:
        return (self.r, self.d, self.q, self.s)

    def __str__(self) -> str:
        return f"({self.r},{self.d},{self.q},{self.s})"


@dataclass(frozen=True)
class ReferenceClass:
    """A Mukai vector whose Delta-part is exactly c*H, for rational c.

    Such classes pair against arbitrary profiles, which is what makes the
    wall conditions computable at profile level.
    """

    r: int
    c: Fraction
    s: int

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))

    def profile(self, degree: int) -> MukaiProfile:
        d = self.c * degree
        q = self.c * self.c * degree
        if d.denominator != 1 or q.denominator != 1:
            raise ValueError(
                f"reference class c={self.c} does not induce an integral profile at degree {degree}"
            )
        return MukaiProfile(self.r, int(d), int(q), self.s)

    def self_pairing(self, degree: int) -> int:
        p = self.profile(degree)
        return self_pairing(p)

    def is_primitive(self, degree: int) -> bool:
        """Primitivity in the lattice: gcd of (r, H-coefficient, s).  H is
        primitive, so a lattice vector needs an integer H-coefficient."""
        self.profile(degree)  # validates integrality of the induced profile
        if self.c.denominator != 1:
            return False
        return gcd(gcd(abs(self.r), abs(int(self.c))), abs(self.s)) == 1

    def __str__(self) -> str:
        return f"({self.r},{self.c}H,{self.s})"


#: The tautological class (1, 0, -1) whose moduli theory the path walks.
V1 = ReferenceClass(1, Fraction(0), -1)

#: The rank-two class (2, -H, 2) paired with it under the lattice involution.
V2 = ReferenceClass(2, Fraction(-1), 2)


@dataclass(frozen=True)
class K3Context:
    """Polarization degree plus the lattice hypotheses of the surface.

    ``excluded_isotropic_degrees`` lists the degrees D such that no class
    with Delta^2 = 0 and |Delta.H| = D exists.  For a strongly smooth,
    Brill-Noether general degree-10 surface this is {1, 2, 3, 4}: degree 4
    is strong smoothness, degree 3 is the absence of cubic elliptic curves,
    and degrees 1-2 follow from Brill-Noether generality.  The set is
    configurable so the role of each hypothesis can be probed.
    """

    degree: int = 10
    excluded_isotropic_degrees: FrozenSet[int] = frozenset({1, 2, 3, 4})
    has_lines: bool = True
    has_conics: bool = True
    closure_bound: int = 3

    def __post_init__(self):
        if self.degree <= 0 or self.degree % 2 != 0:
            raise ValueError("polarization degree must be a positive even integer")
        object.__setattr__(self, "excluded_isotropic_degrees",
                           frozenset(int(x) for x in self.excluded_isotropic_degrees))

    def replace(self, **kw) -> "K3Context":
        data = {
            "degree": self.degree,
            "excluded_isotropic_degrees": self.excluded_isotropic_degrees,
            "has_lines": self.has_lines,
            "has_conics": self.has_conics,
            "closure_bound": self.closure_bound,
        }
        data.update(kw)
        return K3Context(**data)


def gm10_context() -> K3Context:
    """Default context: strongly smooth Brill-Noether general degree-10 surface
    that contains lines and conics."""
    return K3Context()


# ---------------------------------------------------------------------------
# Pairings
# ---------------------------------------------------------------------------

def self_pairing(w: MukaiProfile) -> int:
    """<w, w> = q - 2rs."""
    return w.q - 2 * w.r * w.s


def is_spherical(w: MukaiProfile) -> bool:
    return self_pairing(w) == -2


def is_isotropic(w: MukaiProfile) -> bool:
    return self_pairing(w) == 0


def pairing_with_reference(v: ReferenceClass, w: MukaiProfile) -> int:
    """<v, w> = c*d_w - r_v*s_w - r_w*s_v.

    Well defined because v's Delta-part is c*H, so Delta_v . Delta_w = c*d_w.
    """
    val = v.c * w.d - v.r * w.s - w.r * v.s
    if val.denominator != 1:
        raise ValueError(f"pairing of {v} with {w} is not integral")
    return int(val)


# ---------------------------------------------------------------------------
# Hodge-index feasibility
# ---------------------------------------------------------------------------

class Hodge(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    BOUNDARY_PROPORTIONAL = "boundary-proportional"


def hodge_ok(ctx: K3Context, w: MukaiProfile) -> Hodge:
    """Hodge-index test on the sublattice spanned by H and Delta.

    degree*q > d^2 is impossible (signature (1, rho-1)); equality forces
    Delta proportional to H, which is a lattice class only when degree | d.
    """
    lhs = ctx.degree * w.q
    rhs = w.d * w.d
    if lhs > rhs:
        return Hodge.INFEASIBLE
    if lhs == rhs:
        if w.d % ctx.degree != 0:
            return Hodge.INFEASIBLE
        return Hodge.BOUNDARY_PROPORTIONAL
    return Hodge.FEASIBLE


def proportionality_factor(ctx: K3Context, w: MukaiProfile) -> Optional[int]:
    """m with Delta = m*H when hodge_ok is boundary-proportional, else None."""
    if hodge_ok(ctx, w) is Hodge.BOUNDARY_PROPORTIONAL:
        return w.d // ctx.degree
    return None


# ---------------------------------------------------------------------------
# Exclusion rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Exclusion:
    """Why a profile cannot come from an actual class on the surface."""

    rule: str
    detail: str
    #: degrees from the configurable isotropic-degree set this exclusion used
    degrees_used: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


def _direct_rules(ctx: K3Context, q: int, d: int) -> Optional[Exclusion]:
    if q == 0 and d != 0 and abs(d) in ctx.excluded_isotropic_degrees:
        return Exclusion("R1", f"isotropic class of degree {abs(d)} is excluded", (abs(d),))
    if q == -2 and d == 0:
        return Exclusion("R2", "a (-2)-class or its negative is effective; "
                               "effective classes have positive degree")
    return None


def exclusion_check(ctx: K3Context, w: MukaiProfile) -> Optional[Exclusion]:
    """None when no configured rule fires ("not excluded", not "realized").

    R1: forbidden isotropic degree.  R2: (-2)-class of degree 0 (holds on any
    K3).  R3: the same two rules applied to the combinations m*H + n*Delta
    for |m|, |n| <= closure_bound.  R4/R5: (-2)-classes of degree +-1 / +-2
    are exactly line / conic classes up to sign, so they are excluded when
    the context says the surface has none.
    """
    direct = _direct_rules(ctx, w.q, w.d)
    if direct is not None:
        return direct
    if w.q == -2 and abs(w.d) == 1 and not ctx.has_lines:
        return Exclusion("R4", "(-2)-class of degree +-1 needs a line in the surface")
    if w.q == -2 and abs(w.d) == 2 and not ctx.has_conics:
        return Exclusion("R5", "(-2)-class of degree +-2 needs a conic in the surface")
    bound = ctx.closure_bound
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if (m, n) == (0, 0) or n == 0:
                continue
            q_c = ctx.degree * m * m + 2 * m * n * w.d + n * n * w.q
            d_c = ctx.degree * m + n * w.d
            hit = _direct_rules(ctx, q_c, d_c)
            if hit is not None:
                return Exclusion(
                    "R3",
                    f"combination {m}H{n:+d}Delta has square {q_c} and degree {d_c}; {hit}",
                    hit.degrees_used,
                )
    return None
