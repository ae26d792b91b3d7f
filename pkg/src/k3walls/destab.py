"""Stability certification for rigid classes along the path.

A spherical class T could only lose stability at parameter t if it sits in a
short exact sequence 0 -> A -> T -> B -> 0 in the heart with A, B of the same
phase.  Phases quantize: the imaginary quantum k of the probed factor (the
integer with Im = u0*unit*k*sqrt(t)) must satisfy 0 < k < K_T, and equality
of phases pins the real parts to K_T*Re(Z(A)) = k*Re(Z(T)), which solves for
s as a polynomial of degree one in t once the rank r is fixed.  When both
factors are forced spherical and T has Delta proportional to H, the pairing
<A, T> = -1 adds one more linear relation.  Each (k, r) case then dies by an
integrality gap, a Hodge-index violation, an exclusion rule, or an exact sign
contradiction on the interval -- and every sign claim is certified by Sturm
analysis.  A case that survives everything is reported as a candidate, never
silently dropped.

The engine follows this proof shape (quantize k, solve s(t), bound r by the
Hodge inequality, eliminate cases) instead of generic quantifier elimination,
so its certificates are auditable line by line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .charge import CertificationError, ChargeFamily, charge
from .exactq import Sign, SignResult, TInterval, TPoly, sign_on_interval
from .mukai import (
    Exclusion,
    Hodge,
    K3Context,
    MukaiProfile,
    exclusion_check,
    hodge_ok,
    self_pairing,
)


class BoundChainError(CertificationError):
    """The case analysis could not be closed in some direction."""


@dataclass(frozen=True)
class DestabProblem:
    """One stability question: does ``target`` admit an equal-phase factor
    profile anywhere on ``iv``?

    ``probe`` names which factor of the destabilizing sequence the rank
    bounds constrain ("sub" or "quotient"); the phase analysis itself is
    symmetric in the two.  ``rank_min``/``rank_max`` encode the cohomological
    constraints the sequence imposes on that factor (e.g. a subobject of a
    torsion-free sheaf is a torsion-free sheaf, so r >= 1).
    """

    target: MukaiProfile
    iv: TInterval
    probe: str = "sub"
    rank_min: Optional[int] = None
    rank_max: Optional[int] = None
    spherical_factors: bool = True
    label: str = ""

    def __post_init__(self):
        if self.probe not in ("sub", "quotient"):
            raise ValueError("probe must be 'sub' or 'quotient'")


@dataclass(frozen=True)
class CaseCertificate:
    """Why one (k, r[, s]) case admits no destabilizing profile."""

    k: int
    reason: str  # phase-gap-empty | integrality-gap | hodge-violation |
    #              exclusion | sign-contradiction
    detail: str
    r: Optional[int] = None
    s: Optional[int] = None
    t_star: Optional[Fraction] = None
    relation: str = ""
    poly: Optional[TPoly] = None
    interval: Optional[TInterval] = None
    sign: Optional[SignResult] = None
    exclusion: Optional[Exclusion] = None

    def sign_claim_holds(self) -> bool:
        """Re-verify the attached sign claim (round-trip check)."""
        if self.poly is None or self.interval is None or self.sign is None:
            return True
        return sign_on_interval(self.poly, self.interval) == self.sign


@dataclass(frozen=True)
class DestabCandidate:
    profile: MukaiProfile
    t_star: Optional[Fraction]  # None: every t in the window
    window: TInterval
    k: int


@dataclass(frozen=True)
class DestabResult:
    problem: DestabProblem
    verdict: str  # "stable-everywhere" or "candidate"
    quantum: int
    ks: tuple[int, ...]
    relations: tuple[str, ...]
    certificates: tuple[CaseCertificate, ...]
    candidates: tuple[DestabCandidate, ...]

    @property
    def stable_everywhere(self) -> bool:
        return self.verdict == "stable-everywhere"


def phase_gap(fam: ChargeFamily, target: MukaiProfile) -> list[int]:
    """Integer quanta available to a proper equal-phase factor: 0 < k < K_T.

    Empty means no factor can match phases at any t, i.e. immediate
    stability.  For the default family the quantum of (r, d, q, s) is d + 4r.
    """
    k_t = fam.quantum(target)
    if k_t <= 0:
        raise ValueError("target must lie strictly in the upper half plane (quantum > 0)")
    return list(range(1, k_t))


def _lin_str(a: Fraction, b: Fraction) -> str:
    return str(TPoly((b, a)))


@dataclass(frozen=True)
class _Relation:
    """s = (a_r*r + a_k*k)*t + (b_r*r + b_k*k), rendered over a common
    denominator M as  M*s = (M*a_r t + M*b_r) r + k-part."""

    a_r: Fraction
    a_k: Fraction
    b_r: Fraction
    b_k: Fraction

    @property
    def scale(self) -> int:
        return math.lcm(self.a_r.denominator, self.a_k.denominator,
                        self.b_r.denominator, self.b_k.denominator)

    def s_of_t(self, r: int, k: int) -> tuple[Fraction, Fraction]:
        """(slope, intercept) of s as a function of t for fixed r, k."""
        return (self.a_r * r + self.a_k * k, self.b_r * r + self.b_k * k)

    def render(self, k: Optional[int]) -> str:
        """Canonical form, k symbolic when None: e.g. 15s=(3t+12)r-4k-kt
        renders as 15s=(3t+12)r-kt-4k (terms in descending t-order)."""
        m = self.scale
        lhs = f"{m}s" if m != 1 else "s"
        r_part = f"({_lin_str(m * self.a_r, m * self.b_r)})r"
        terms = [r_part]
        if k is None:
            for coeff, mono in ((m * self.a_k, "kt"), (m * self.b_k, "k")):
                if coeff == 0:
                    continue
                terms.append(_signed_term(coeff, mono))
        else:
            at, bt = m * self.a_k * k, m * self.b_k * k
            if at != 0:
                terms.append(_signed_term(at, "t"))
            if bt != 0:
                terms.append(_signed_term(bt, ""))
        rhs = terms[0] + "".join(t if t.startswith("-") else "+" + t for t in terms[1:])
        return f"{lhs}={rhs}"


def _signed_term(coeff: Fraction, mono: str) -> str:
    assert coeff.denominator == 1
    c = coeff.numerator
    if mono == "":
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}{mono}"


def _derive_relation(fam: ChargeFamily, target: MukaiProfile, k_t: int) -> _Relation:
    """From K_T * Re(Z(A)) = k * Re(Z(T)) with d_A = unit*k + D*r*b."""
    D, u0, b = fam.degree, fam.u0, fam.b
    gamma = fam.quantum_unit
    re_t = charge(fam, target).re
    a_r = Fraction(D, 2) * u0 * u0
    a_k = -re_t.coeff(1) / k_t
    b_r = Fraction(D, 2) * b * b
    b_k = b * gamma - re_t.coeff(0) / k_t
    return _Relation(a_r, a_k, b_r, b_k)


@dataclass(frozen=True)
class _PairRelation:
    """a_r*r + a_s*s = c, from <probe, target> = -1 (both factors spherical,
    target spherical, Delta_target proportional to H).  Normalized a_s > 0."""

    a_r: int
    a_s: int
    c: int

    def render(self) -> str:
        lhs = f"{self.a_s}s" if self.a_s != 1 else "s"
        rhs_terms = []
        if self.a_r != 0:
            rhs_terms.append(_signed_term(Fraction(-self.a_r), "r"))
        if self.c != 0 or not rhs_terms:
            val = str(self.c)
            rhs_terms.append(val if (val.startswith("-") or not rhs_terms) else "+" + val)
        return f"{lhs}={''.join(rhs_terms)}"

    def s_for(self, r: int) -> Optional[int]:
        num = self.c - self.a_r * r
        if num % self.a_s != 0:
            return None
        return num // self.a_s


def _pair_relation(ctx: K3Context, fam: ChargeFamily, problem: DestabProblem,
                   k: int) -> Optional[_PairRelation]:
    """<A, T> = -1 expressed in (r, s), available only when Delta_T is a
    multiple of H so the pairing is profile-computable."""
    t = problem.target
    if not problem.spherical_factors or self_pairing(t) != -2:
        return None
    if t.d == 0 and t.q == 0:
        c_t = 0
    elif hodge_ok(ctx, t) is Hodge.BOUNDARY_PROPORTIONAL:
        c_t = t.d // ctx.degree
    else:
        return None
    gamma = fam.quantum_unit
    db = fam.degree * fam.b
    # d_A = gamma*k + D*b*r, so <A,T> = c_t*d_A - r*s_T - r_T*s = -1 becomes
    # (c_t*D*b - s_T)*r + (-r_T)*s = -1 - c_t*gamma*k
    coeff_r = c_t * db - t.s
    rhs = -1 - Fraction(c_t) * gamma * k
    if coeff_r.denominator != 1 or rhs.denominator != 1:
        return None
    a_r, a_s, c = int(coeff_r), -t.r, int(rhs)
    if a_s == 0:
        return None
    if a_s < 0:
        a_r, a_s, c = -a_r, -a_s, -c
    return _PairRelation(a_r, a_s, c)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _r_candidates(problem: DestabProblem, fam: ChargeFamily, rel: _Relation,
                  k: int, k_t: int) -> list[int]:
    """Certified finite set of ranks: outside it the Hodge gap
    D(2rs(t)-2) - d^2 is positive for every t in the interval."""
    from .walls import integer_solutions_leq

    D, b = fam.degree, fam.b
    gamma = fam.quantum_unit
    t_lo = problem.iv.lower

    def hodge_gap_at_tlo(r: int) -> Fraction:
        slope, intercept = rel.s_of_t(r, k)
        s_val = slope * t_lo + intercept
        d_val = gamma * k + D * b * r
        return D * (2 * r * s_val - 2) - d_val * d_val

    f0, f1, fm1 = hodge_gap_at_tlo(0), hodge_gap_at_tlo(1), hodge_gap_at_tlo(-1)
    a2 = (f1 + fm1 - 2 * f0) / 2
    a1 = (f1 - fm1) / 2
    a0 = f0
    if a2 <= 0:
        raise BoundChainError("rank bound does not close: Hodge gap is not "
                              "eventually positive in r")
    base = set(integer_solutions_leq(a2, a1, a0))
    # ranks where the Hodge gap decreases in t: between 0 and k*r_T/K_T
    edge = Fraction(k * problem.target.r, k_t)
    lo, hi = (0, edge) if edge >= 0 else (edge, 0)
    base.update(range(math.ceil(lo), math.floor(hi) + 1))
    out = sorted(base)
    if problem.rank_min is not None:
        out = [r for r in out if r >= problem.rank_min]
    if problem.rank_max is not None:
        out = [r for r in out if r <= problem.rank_max]
    return out


def eliminate(ctx: K3Context, fam: ChargeFamily, problem: DestabProblem) -> DestabResult:
    """Run the full case analysis; StableEverywhere iff every case dies."""
    if self_pairing(problem.target) != -2:
        raise ValueError("target must be spherical (self-pairing -2)")
    if not problem.spherical_factors:
        raise CertificationError("only spherical-factor problems are supported; "
                                 "without that forcing the case analysis does not close")
    if problem.iv.lower is None or problem.iv.lower < 1:
        raise CertificationError("case analysis is derived for intervals within [1, oo)")

    k_t = fam.quantum(problem.target)
    ks = phase_gap(fam, problem.target)
    certs: list[CaseCertificate] = []
    cands: list[DestabCandidate] = []
    relations: list[str] = []

    if not ks:
        certs.append(CaseCertificate(
            0, "phase-gap-empty",
            f"imaginary quantum of the target is {k_t}; no integer lies strictly "
            f"between 0 and {k_t}, so no proper factor can match phases"))
        return DestabResult(problem, "stable-everywhere", k_t, (), (), tuple(certs), ())

    rel = _derive_relation(fam, problem.target, k_t)
    relations.append(rel.render(None if len(ks) > 1 else ks[0]))

    pair0 = _pair_relation(ctx, fam, problem, ks[0])
    if pair0 is not None:
        relations.append(pair0.render())

    for k in ks:
        rel_str = rel.render(None if len(ks) > 1 else k)
        pair = _pair_relation(ctx, fam, problem, k)
        for r in _r_candidates(problem, fam, rel, k, k_t):
            d_frac = fam.quantum_unit * k + fam.degree * fam.b * r
            if d_frac.denominator != 1:
                certs.append(CaseCertificate(
                    k, "integrality-gap", f"degree d = {d_frac} is not an integer",
                    r=r, relation=rel_str))
                continue
            d = int(d_frac)
            slope, intercept = rel.s_of_t(r, k)
            if pair is not None:
                certs.extend(_eliminate_with_pair(
                    ctx, fam, problem, k, r, d, slope, intercept, pair, rel_str, cands))
            else:
                certs.extend(_eliminate_by_scan(
                    ctx, fam, problem, k, r, d, slope, intercept, rel_str, cands))

    verdict = "stable-everywhere" if not cands else "candidate"
    return DestabResult(problem, verdict, k_t, tuple(ks), tuple(relations),
                        tuple(certs), tuple(cands))


def standard_problems(iv: Optional[TInterval] = None) -> tuple[DestabProblem, ...]:
    """The six rigid classes whose stability on [1, oo) the suite certifies:
    the two line classes, the two conic classes, and the two tautological
    bundle classes (the rank -2 one probed through its quotient, whose
    degree -1 cohomology is torsion-free of positive rank)."""
    if iv is None:
        iv = TInterval.ray_from(1)
    return (
        DestabProblem(MukaiProfile(0, 1, -2, -1), iv, probe="sub", rank_min=1,
                      label="O_L(-2)"),
        DestabProblem(MukaiProfile(1, -1, -2, 0), iv, probe="sub", rank_min=1,
                      label="O_S(-L)"),
        DestabProblem(MukaiProfile(0, 2, -2, -1), iv, probe="sub", rank_min=0,
                      label="O_C(-2)"),
        DestabProblem(MukaiProfile(1, -2, -2, 0), iv, probe="sub", rank_min=1,
                      label="O_S(-C)"),
        DestabProblem(MukaiProfile(-2, 10, 10, -3), iv, probe="quotient", rank_max=-1,
                      label="U_S[1]"),
        DestabProblem(MukaiProfile(3, -10, 10, 2), iv, probe="sub",
                      label="V_S"),
    )


def _profile_case(ctx: K3Context, fam: ChargeFamily, problem: DestabProblem,
                  k: int, r: int, d: int, s: int, t_star: Optional[Fraction],
                  window: TInterval, rel_str: str,
                  cands: list[DestabCandidate]) -> list[CaseCertificate]:
    """Final checks once (k, r, s) and the parameter are pinned."""
    q = 2 * r * s - 2
    w = MukaiProfile(r, d, q, s)
    if hodge_ok(ctx, w) is Hodge.INFEASIBLE:
        return [CaseCertificate(
            k, "hodge-violation",
            f"profile {w}: {ctx.degree}*q = {ctx.degree * q} > d^2 = {d * d}",
            r=r, s=s, t_star=t_star, relation=rel_str)]
    excl = exclusion_check(ctx, w)
    if excl is not None:
        return [CaseCertificate(
            k, "exclusion", f"profile {w} excluded ({excl})",
            r=r, s=s, t_star=t_star, relation=rel_str, exclusion=excl)]
    cands.append(DestabCandidate(w, t_star, window, k))
    return []


def _eliminate_with_pair(ctx, fam, problem, k, r, d, slope, intercept,
                         pair: _PairRelation, rel_str: str,
                         cands: list[DestabCandidate]) -> list[CaseCertificate]:
    s = pair.s_for(r)
    if s is None:
        return [CaseCertificate(
            k, "integrality-gap",
            f"{pair.render()} has no integer solution at r = {r}",
            r=r, relation=rel_str)]
    # s(t) relation must agree: slope*t + intercept = s
    m = math.lcm(slope.denominator, intercept.denominator)
    gap = TPoly(((intercept - s) * m, slope * m))
    if gap.is_zero:
        return _profile_case(ctx, fam, problem, k, r, d, s, None, problem.iv,
                             rel_str, cands)
    verdict = sign_on_interval(gap, problem.iv)
    if verdict.verdict in (Sign.ALWAYS_POSITIVE, Sign.ALWAYS_NEGATIVE):
        return [CaseCertificate(
            k, "sign-contradiction",
            f"with {pair.render()} forcing s = {s} at r = {r}, the phase relation "
            f"leaves {m}*(s(t) - s) = {gap} with no zero on {problem.iv}",
            r=r, s=s, relation=rel_str, poly=gap, interval=problem.iv, sign=verdict)]
    t_star = -gap.coeff(0) / gap.coeff(1)
    if not problem.iv.contains(t_star):  # zero at a non-admitted endpoint
        return [CaseCertificate(
            k, "sign-contradiction",
            f"phase relation meets {pair.render()} only at t = {t_star}, outside "
            f"{problem.iv}", r=r, s=s, relation=rel_str)]
    return _profile_case(ctx, fam, problem, k, r, d, s, t_star,
                         TInterval.point(t_star), rel_str, cands)


def _hodge_gap_poly(fam: ChargeFamily, r: int, d: int,
                    slope: Fraction, intercept: Fraction) -> TPoly:
    """m * (D*(2r*s(t) - 2) - d^2), positive exactly where the Hodge bound
    fails along the phase relation."""
    m = math.lcm(slope.denominator, intercept.denominator)
    return (TPoly((intercept, slope)) * (2 * r * fam.degree)
            + TPoly((-2 * fam.degree - d * d,))) * m


def _eliminate_by_scan(ctx, fam, problem, k, r, d, slope, intercept,
                       rel_str: str, cands: list[DestabCandidate]) -> list[CaseCertificate]:
    """No pairing shortcut: enumerate the integer s values compatible with
    the parameter window and the Hodge bound; the part of the window the
    Hodge bound truncates gets one Sturm-certified violation certificate."""
    iv = problem.iv
    out: list[CaseCertificate] = []
    if slope == 0:
        s_const = intercept
        if s_const.denominator != 1:
            return [CaseCertificate(
                k, "integrality-gap",
                f"s is forced to the non-integer constant {s_const}",
                r=r, relation=rel_str)]
        return _profile_case(ctx, fam, problem, k, r, d, int(s_const), None, iv,
                             rel_str, cands)

    # s runs over the image of iv under s(t) = slope*t + intercept
    lo_img = None if iv.lower is None else slope * iv.lower + intercept
    hi_img = None if iv.upper is None else slope * iv.upper + intercept
    img_lo, img_hi = (lo_img, hi_img) if slope > 0 else (hi_img, lo_img)

    # Hodge: D(2rs - 2) <= d^2 caps s above for r > 0, below for r < 0
    hodge_cut: Optional[Fraction] = None
    cut_truncates = False
    if r != 0:
        hodge_cut = (Fraction(d * d, fam.degree) + 2) / (2 * r)
        if r > 0:
            if img_hi is None or hodge_cut < img_hi:
                cut_truncates = (img_hi is None
                                 or math.floor(img_hi) > math.floor(hodge_cut))
                img_hi = hodge_cut
        else:
            if img_lo is None or hodge_cut > img_lo:
                cut_truncates = (img_lo is None
                                 or math.ceil(img_lo) < math.ceil(hodge_cut))
                img_lo = hodge_cut

    if img_lo is None or img_hi is None:
        raise BoundChainError(
            f"case k={k}, r={r} is unbounded: s(t) = {slope}t + {intercept} "
            f"escapes every bound as t grows on {iv}")

    if cut_truncates:
        # past t_cut (in the direction the gap grows) every integer s
        # violates the Hodge bound; the gap polynomial is linear with its
        # zero at t_cut, so it is positive on the open ray beyond it
        t_cut = (hodge_cut - intercept) / slope
        gap = _hodge_gap_poly(fam, r, d, slope, intercept)
        if r * slope > 0:
            tail = TInterval.left_open(t_cut, iv.upper)
        else:
            tail = TInterval(iv.lower, t_cut, iv.lower_closed, False)
        verdict = sign_on_interval(gap, tail)
        if verdict.verdict is not Sign.ALWAYS_POSITIVE:
            raise BoundChainError("expected a certified Hodge violation on the tail")
        out.append(CaseCertificate(
            k, "hodge-violation",
            f"for t in {tail} the phase relation forces s past the Hodge cap "
            f"{hodge_cut}; gap polynomial {gap} is Sturm-positive there",
            r=r, relation=rel_str, poly=gap, interval=tail, sign=verdict))

    s_first = math.ceil(img_lo)
    s_last = math.floor(img_hi)
    hit_any = False
    for s in range(s_first, s_last + 1):
        t_star = (Fraction(s) - intercept) / slope
        if not iv.contains(t_star):
            continue
        hit_any = True
        out.extend(_profile_case(ctx, fam, problem, k, r, d, s, t_star,
                                 TInterval.point(t_star), rel_str, cands))
    if not hit_any and not cut_truncates:
        out.append(CaseCertificate(
            k, "integrality-gap",
            f"no integer s with t in {iv} meets the window [{img_lo}, {img_hi}]",
            r=r, relation=rel_str))
    return out
