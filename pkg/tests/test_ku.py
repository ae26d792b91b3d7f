"""Rank-two lattice: Euler form, transfer maps, isometries."""

from __future__ import annotations

from fractions import Fraction

import pytest

from k3walls.charge import gm10_family
from k3walls.ku import (
    KuClass,
    euler_ku,
    forg,
    inf,
    inf_reference,
    isometries,
    ku_charge_at,
    span_combination,
)
from k3walls.mukai import MukaiProfile, V1, V2, pairing_with_reference

FAM = gm10_family()


class TestEulerForm:
    def test_diagonal(self):
        assert euler_ku(KuClass(1, 0), KuClass(1, 0)) == -1
        assert euler_ku(KuClass(0, 1), KuClass(0, 1)) == -1

    def test_off_diagonal(self):
        assert euler_ku(KuClass(1, 0), KuClass(0, 1)) == 0

    def test_mixed(self):
        assert euler_ku(KuClass(1, 2), KuClass(-1, 0)) == 1


class TestTransferMaps:
    def test_forg_of_tautological_classes(self):
        assert forg(V1.profile(10)) == KuClass(-2, 0)
        assert forg(V2.profile(10)) == KuClass(0, -2)

    def test_forg_of_point_class(self):
        assert forg(MukaiProfile(0, 0, 0, 1)) == KuClass(1, 2)

    def test_inf_on_basis(self):
        assert inf(KuClass(-1, 0)) == MukaiProfile(1, 0, 0, -1)
        assert inf(KuClass(0, -1)) == MukaiProfile(2, -10, 10, 2)
        assert inf(KuClass(1, 1)) == MukaiProfile(-3, 10, 10, -1)

    def test_forg_is_surjective(self):
        # constructive: explicit preimages of the basis vectors
        for target in (KuClass(1, 0), KuClass(0, 1)):
            found = None
            for r in range(-3, 4):
                for d in range(-8, 9):
                    for s in range(-3, 4):
                        if forg(MukaiProfile(r, d, 0, s)) == target:
                            found = (r, d, s)
            assert found is not None

    def test_round_trip_doubles_span(self):
        for c1 in range(-5, 6):
            for c2 in range(-5, 6):
                w = span_combination(c1, c2)
                assert inf(forg(w)) == w.scale(2)

    def test_adjunction(self):
        for r in range(-5, 6):
            for d in range(-5, 6):
                for q in range(-4, 6, 2):
                    for s in range(-5, 6):
                        w = MukaiProfile(r, d, q, s)
                        for a in range(-5, 6):
                            for b in range(-5, 6):
                                x = KuClass(a, b)
                                assert pairing_with_reference(inf_reference(x), w) \
                                    == -euler_ku(forg(w), x)

    def test_pairing_doubling(self):
        for a in range(-5, 6):
            for b in range(-5, 6):
                for a2 in range(-5, 6):
                    for b2 in range(-5, 6):
                        x, y = KuClass(a, b), KuClass(a2, b2)
                        assert pairing_with_reference(inf_reference(x), inf(y)) \
                            == -2 * euler_ku(x, y)


class TestCharges:
    def test_minus_kappa1_matches_tautological_charge(self):
        assert ku_charge_at(FAM, KuClass(-1, 0), 1) == (Fraction(2, 5), Fraction(4, 5))

    def test_point_image_class_is_real_negative(self):
        # kappa_1 + 2*kappa_2 inflates to (-5, 20, 40, -3) with charge -2 at t=1
        assert inf(KuClass(1, 2)) == MukaiProfile(-5, 20, 40, -3)
        assert ku_charge_at(FAM, KuClass(1, 2), 1) == (Fraction(-2), Fraction(0))

    def test_zero_class(self):
        assert ku_charge_at(FAM, KuClass(0, 0), 1) == (0, 0)

    def test_positive_t_required(self):
        with pytest.raises(ValueError):
            ku_charge_at(FAM, KuClass(1, 0), 0)


class TestIsometries:
    def test_census(self):
        isos = isometries()
        assert len(isos) == 8
        assert sum(1 for i in isos if not i.swapping) == 4
        assert sum(1 for i in isos if i.swapping) == 4

    def test_identity_is_preserving(self):
        isos = isometries()
        identity = [i for i in isos if i.m == ((1, 0), (0, 1))]
        assert identity and not identity[0].swapping

    def test_antidiagonal_swaps(self):
        swap = [i for i in isometries() if i.m == ((0, 1), (1, 0))]
        assert swap and swap[0].swapping
        assert swap[0].apply(KuClass(3, 5)) == KuClass(5, 3)

    def test_brute_force_census(self):
        # every integer 2x2 matrix with entries in {-1,0,1} satisfying
        # M^T M = I, independently recomputed
        count = 0
        for a in (-1, 0, 1):
            for b in (-1, 0, 1):
                for c in (-1, 0, 1):
                    for d in (-1, 0, 1):
                        gram = [[a * a + c * c, a * b + c * d],
                                [a * b + c * d, b * b + d * d]]
                        if gram == [[1, 0], [0, 1]]:
                            count += 1
        assert count == len(isometries()) == 8

    def test_isometries_preserve_euler_form(self):
        for iso in isometries():
            for x in (KuClass(1, 0), KuClass(0, 1), KuClass(2, -3)):
                for y in (KuClass(1, 1), KuClass(-1, 2)):
                    assert euler_ku(iso.apply(x), iso.apply(y)) == euler_ku(x, y)
