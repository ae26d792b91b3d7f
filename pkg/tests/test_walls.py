"""Wall equations, certified enumerations against a brute-force oracle,
the totally-semistable elimination, and wall classification."""

from __future__ import annotations

from fractions import Fraction

import pytest

from k3walls.charge import CertificationError, gm10_family
from k3walls.exactq import TInterval, TPoly
from k3walls.mukai import MukaiProfile, ReferenceClass, V1, gm10_context, self_pairing
from k3walls.walls import (
    WallCondition,
    WallVerdict,
    classify_wall,
    enumerate_condition,
    integer_solutions_leq,
    totally_semistable_check,
    wall_equation,
    walls_on_path,
)

FAM = gm10_family()
CTX = gm10_context()
RAY1 = TInterval.ray_from(1)
OPEN1 = TInterval.left_open(1, None)


class TestWallEquation:
    def test_line_class_roots_at_eleven(self):
        p = wall_equation(FAM, V1, MukaiProfile(0, 1, -2, -1))
        assert p * 25 == TPoly((-11, 1))  # (t + 9) - 20

    def test_conic_twist_roots_at_one(self):
        p = wall_equation(FAM, V1, MukaiProfile(1, -2, -2, 0))
        assert p * 25 == TPoly((2, -2))  # 20 - 2(t + 9)

    def test_self_case_identically_zero(self):
        assert wall_equation(FAM, V1, V1.profile(10)).is_zero

    def test_polynomial_identity(self):
        # 25 * wall_equation == 20r + (t+9)d + 20s on the basis profiles
        assert wall_equation(FAM, V1, MukaiProfile(1, 0, 0, 0)) * 25 == TPoly((20,))
        assert wall_equation(FAM, V1, MukaiProfile(0, 1, 0, 0)) * 25 == TPoly((9, 1))
        assert wall_equation(FAM, V1, MukaiProfile(0, 0, 0, 1)) * 25 == TPoly((20,))

    def test_antisymmetric_under_swap(self):
        # when w also has Delta proportional to H the roles can be swapped,
        # and the wall polynomial flips sign
        pairs = [
            (ReferenceClass(-2, Fraction(1), -3), MukaiProfile(-2, 10, 10, -3)),
            (ReferenceClass(2, Fraction(-1), 2), MukaiProfile(2, -10, 10, 2)),
        ]
        for w_ref, w_prof in pairs:
            forward = wall_equation(FAM, V1, w_prof)
            backward = wall_equation(FAM, w_ref, V1.profile(10))
            assert forward == -backward


def hit_key(h):
    return (h.w.fields(), None if h.t_star is None else h.t_star)


EXPECTED_BN = {
    ((0, 0, -2, 0), None),
    ((1, -4, 0, 1), Fraction(1)), ((-1, 4, 0, -1), Fraction(1)),
    ((2, -8, 6, 2), Fraction(1)), ((-2, 8, 6, -2), Fraction(1)),
    ((1, -3, 0, 1), Fraction(13, 3)), ((-1, 3, 0, -1), Fraction(13, 3)),
    ((1, -2, 0, 1), Fraction(11)), ((-1, 2, 0, -1), Fraction(11)),
    ((1, -1, 0, 1), Fraction(31)), ((-1, 1, 0, -1), Fraction(31)),
}

EXPECTED_HC = {
    ((0, 2, 0, -1), Fraction(1)), ((1, -2, 0, 0), Fraction(1)),
    ((0, 1, 0, -1), Fraction(11)), ((1, -1, 0, 0), Fraction(11)),
}

EXPECTED_FLOP_OPEN = {
    ((2, -5, 2, 1), Fraction(3)), ((-1, 5, 2, -2), Fraction(3)),
    ((0, 1, -2, -1), Fraction(11)), ((1, -1, -2, 0), Fraction(11)),
}


class TestEnumerations:
    def test_bn_families(self):
        enum = enumerate_condition(CTX, FAM, V1, WallCondition.BN, RAY1)
        assert {hit_key(h) for h in enum.hits} == EXPECTED_BN
        assert all(h.exclusion is not None for h in enum.hits)
        assert enum.r_candidates == (-2, -1, 0, 1, 2)

    def test_hc_families(self):
        enum = enumerate_condition(CTX, FAM, V1, WallCondition.HC, RAY1)
        assert {hit_key(h) for h in enum.hits} == EXPECTED_HC
        assert all(h.exclusion is not None for h in enum.hits)

    def test_lgu_families_and_rank_range(self):
        enum = enumerate_condition(CTX, FAM, V1, WallCondition.LGU, RAY1)
        assert enum.r_candidates == (-1, 0, 1, 2, 3)
        assert all(h.exclusion is not None for h in enum.hits)
        assert len(enum.hits) == 11

    def test_flop_hits_on_open_ray(self):
        enum = enumerate_condition(CTX, FAM, V1, WallCondition.FLOP, OPEN1)
        assert {hit_key(h) for h in enum.hits} == EXPECTED_FLOP_OPEN
        by_profile = {h.w.fields(): h for h in enum.hits}
        assert by_profile[(0, 1, -2, -1)].exclusion is None
        assert by_profile[(1, -1, -2, 0)].exclusion is None
        assert by_profile[(2, -5, 2, 1)].exclusion is not None
        assert by_profile[(-1, 5, 2, -2)].exclusion is not None

    def test_flop_partners_sum_to_reference(self):
        enum = enumerate_condition(CTX, FAM, V1, WallCondition.FLOP, RAY1)
        for h in enum.hits:
            assert h.partner is not None
            assert self_pairing(h.partner) == -2
            assert h.partner.r + h.w.r == 1
            assert h.partner.d + h.w.d == 0
            assert h.partner.s + h.w.s == -1
            # the partner lands on the same wall parameter
            mirror = [g for g in enum.hits if g.w == h.partner]
            assert mirror and mirror[0].t_star == h.t_star

    def test_hits_sorted_deterministically(self):
        enum = enumerate_condition(CTX, FAM, V1, WallCondition.BN, RAY1)
        keys = [h.sort_key() for h in enum.hits]
        assert keys == sorted(keys)

    def test_requires_positive_interval(self):
        with pytest.raises(CertificationError):
            enumerate_condition(CTX, FAM, V1, WallCondition.BN, TInterval.whole_line())

    def test_requires_tautological_reference(self):
        v2 = ReferenceClass(2, Fraction(-1), 2)
        with pytest.raises(CertificationError, match="reference class"):
            enumerate_condition(CTX, FAM, v2, WallCondition.BN, RAY1)

    def test_requires_primitive_reference(self):
        v = ReferenceClass(2, Fraction(0), -2)
        with pytest.raises(ValueError, match="primitive"):
            enumerate_condition(CTX, FAM, v, WallCondition.BN, RAY1)


def oracle_scan(cond: WallCondition, t_lo: Fraction, t_hi: Fraction):
    """Independent brute-force box scan: |r|,|s| <= 10, |d| <= 60, solving
    the wall equation 20r + (t+9)d + 20s = 0 per profile."""
    eps, p = cond.eps, cond.p
    found = set()
    for r in range(-10, 11):
        for s in range(-10, 11):
            if r - s != p:
                continue
            q = 2 * r * s + eps
            for d in range(-60, 61):
                if 10 * q > d * d:
                    continue
                if 10 * q == d * d and d % 10 != 0:
                    continue
                if d == 0:
                    if 20 * r + 20 * s == 0:
                        found.add(((r, d, q, s), None))
                    continue
                t = Fraction(-20 * (r + s), d) - 9
                if t_lo <= t <= t_hi:
                    found.add(((r, d, q, s), t))
    return found


class TestOracleEquivalence:
    @pytest.mark.parametrize("cond", list(WallCondition))
    def test_certified_enumeration_matches_box_scan(self, cond):
        iv = TInterval.closed(1, 40)
        enum = enumerate_condition(CTX, FAM, V1, cond, iv)
        assert {hit_key(h) for h in enum.hits} == oracle_scan(cond, Fraction(1), Fraction(40))


class TestIntegerSolutions:
    def test_quadratic_window(self):
        # 2x^2 - 4x - 6 <= 0 on [-1, 3]
        assert integer_solutions_leq(Fraction(2), Fraction(-4), Fraction(-6)) == [-1, 0, 1, 2, 3]

    def test_no_solutions(self):
        assert integer_solutions_leq(Fraction(1), Fraction(0), Fraction(1)) == []

    def test_needs_positive_lead(self):
        with pytest.raises(ValueError):
            integer_solutions_leq(Fraction(-1), Fraction(0), Fraction(0))


class TestTotallySemistable:
    def test_clear_on_the_ray(self):
        res = totally_semistable_check(CTX, FAM, V1, RAY1)
        assert res.clear
        assert [s.name for s in res.steps] == [
            "ratio-reduction", "sign-forcing", "hodge-squeeze", "integer-chain"]
        assert all(h.exclusion is not None for h in res.isotropic_hits)

    def test_clear_without_exclusions(self):
        # the spherical-clause elimination never uses the exclusion rules
        ctx = CTX.replace(excluded_isotropic_degrees=frozenset())
        res = totally_semistable_check(ctx, FAM, V1, RAY1)
        assert res.clear
        assert any(h.exclusion is None for h in res.isotropic_hits)

    def test_degenerate_reference_guarded(self):
        v = ReferenceClass(1, Fraction(0), 0)
        with pytest.raises(ValueError, match="<v,v> > 0"):
            totally_semistable_check(CTX, FAM, v, TInterval.closed(1, 2))


class TestClassification:
    def test_flop_at_eleven_with_lines(self):
        cls = classify_wall(CTX, FAM, V1, 11)
        assert cls.verdict is WallVerdict.FLOPPING
        realized = sorted(h.w.fields() for h in cls.witnesses
                          if h.condition is WallCondition.FLOP and h.exclusion is None)
        assert realized == [(0, 1, -2, -1), (1, -1, -2, 0)]

    def test_no_lines_no_wall_at_eleven(self):
        cls = classify_wall(CTX.replace(has_lines=False), FAM, V1, 11)
        assert cls.verdict is WallVerdict.NOT_A_WALL_EXCLUDED

    def test_base_point_witnesses(self):
        cls = classify_wall(CTX, FAM, V1, 1)
        assert cls.verdict is WallVerdict.FLOPPING
        flop = {h.w.fields(): h.exclusion is None for h in cls.witnesses
                if h.condition is WallCondition.FLOP}
        assert flop == {
            (-2, 10, 10, -3): True, (3, -10, 10, 2): True,
            (0, 2, -2, -1): True, (1, -2, -2, 0): True,
            (-1, 6, 2, -2): False, (2, -6, 2, 1): False,
        }

    def test_base_point_without_conics(self):
        cls = classify_wall(CTX.replace(has_conics=False), FAM, V1, 1)
        assert cls.verdict is WallVerdict.FLOPPING
        realized = sorted(h.w.fields() for h in cls.witnesses
                          if h.condition is WallCondition.FLOP and h.exclusion is None)
        assert realized == [(-2, 10, 10, -3), (3, -10, 10, 2)]

    def test_off_wall_parameter(self):
        cls = classify_wall(CTX, FAM, V1, 7)
        assert cls.verdict in (WallVerdict.NOT_A_WALL, WallVerdict.NOT_A_WALL_EXCLUDED)


class TestWallsOnPath:
    def test_single_flop_wall_with_lines(self):
        rep = walls_on_path(CTX, FAM, V1, OPEN1)
        walls = rep.walls()
        assert [(c.t_star, c.verdict) for c in walls] == [(Fraction(11), WallVerdict.FLOPPING)]
        assert rep.gieseker_t0 == 11

    def test_no_walls_without_lines(self):
        rep = walls_on_path(CTX.replace(has_lines=False), FAM, V1, OPEN1)
        assert rep.walls() == ()
        # the t = 11 candidates are still reported, tagged
        t11 = [h for h in rep.hits if h.t_star == 11 and h.condition is WallCondition.FLOP]
        assert len(t11) == 2 and all(h.exclusion is not None for h in t11)

    def test_point_interval_at_base(self):
        rep = walls_on_path(CTX, FAM, V1, TInterval.point(1))
        assert [c.verdict for c in rep.walls()] == [WallVerdict.FLOPPING]
        flop_profiles = sorted(h.w.fields() for h in rep.hits
                               if h.condition is WallCondition.FLOP and h.exclusion is None)
        assert flop_profiles == [(-2, 10, 10, -3), (0, 2, -2, -1),
                                 (1, -2, -2, 0), (3, -10, 10, 2)]

    def test_json_shape_and_round_trip(self):
        import json
        rep = walls_on_path(CTX, FAM, V1, TInterval.left_open(1, 40))
        payload = rep.to_json_dict()
        assert set(payload) == {"vector", "interval", "hits", "classification",
                                "walls", "gieseker_t0", "bounds", "notes"}
        text = json.dumps(payload, indent=2)
        assert json.dumps(json.loads(text), indent=2) == text
        assert payload["walls"] == ["11"]
