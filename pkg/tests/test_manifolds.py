"""Tests for corner complexes, b-maps and generalized blow-up."""

from fractions import Fraction

import pytest

from blowup import exactla as la
from blowup.complexes import identity_refinement, star_subdivide_complex
from blowup.errors import NotAComplex, NotAFace, NotCompatible
from blowup.manifolds import (BMap, CornerComplex, blowup_domain,
                              chart_lift, check_basic_complex_iso,
                              check_blowdown, corner_model,
                              generalized_blowup, identity_bmap,
                              is_compatible, iterated_blowup, lift_bmap,
                              lift_face, local_atlas, ordinary_blowup)


def square():
    return corner_model(2)


def corner_blowup():
    return ordinary_blowup(square(), "H1&H2")


class TestCornerComplex:
    def test_corner_model_counts(self):
        x = corner_model(3)
        assert len(x.faces) == 8
        assert x.hypersurfaces() == ("H1", "H2", "H3")
        assert x.codim("H1&H2&H3") == 3
        assert x.codim("X") == 0
        x.validate()

    def test_order_is_containment(self):
        x = square()
        assert x.leq("X", "H1")
        assert x.leq("H1", "H1&H2")
        assert not x.leq("H1", "H2")

    def test_basic_complex(self):
        x = square()
        q = x.basic_complex()
        q.validate()
        assert q.is_smooth()
        assert q.monoids["H1&H2"].dim == 2

    def test_validate_rejects_missing_subface(self):
        bad = CornerComplex(
            {"X": [], "H1&H2": ["H1", "H2"], "H1": ["H1"]},
            [("X", "H1"), ("X", "H1&H2"), ("H1", "H1&H2")])
        with pytest.raises(NotAComplex):
            bad.validate()


class TestBMap:
    def test_identity(self):
        x = square()
        f = identity_bmap(x)
        f.validate()
        assert f.exponent_matrix("H1&H2") == la.identity(2)

    def test_validate_rejects_exponent_face_mismatch(self):
        x, y = corner_model(1), corner_model(1)
        f = BMap(x, y, {"X": "X", "H1": "H1"}, {})  # no exponent on H1
        with pytest.raises(NotAComplex):
            f.validate()

    def test_compose(self):
        x = square()
        y = corner_model(1)
        f = BMap(x, y, {"X": "X", "H1": "H1", "H2": "H1", "H1&H2": "H1"},
                 {("H1", "H1"): 1, ("H2", "H1"): 2})
        f.validate()
        g = BMap(y, y, {"X": "X", "H1": "H1"}, {("H1", "H1"): 3})
        c = f.compose(g)
        c.validate()
        assert c.alpha("H2", "H1") == 6


class TestOrdinaryBlowup:
    def test_corner_of_square(self):
        bl, charts = corner_blowup()
        bl.total.validate()
        assert len(bl.total.hypersurfaces()) == 3
        assert sorted(charts) == [((1, 0), (0, 1)), ((1, 1), (0, 1))] or \
            len(charts) == 2
        # The exceptional hypersurface maps to the corner with exponent
        # one on both coordinates.
        exc = next(h for h in bl.total.hypersurfaces()
                   if bl.blowdown.face_map[h] == "H1&H2")
        assert bl.blowdown.alpha(exc, "H1") == 1
        assert bl.blowdown.alpha(exc, "H2") == 1
        # Proper transforms keep exponent one to their images.
        others = [h for h in bl.total.hypersurfaces() if h != exc]
        for h in others:
            img = bl.blowdown.face_map[h]
            assert bl.blowdown.alpha(h, img) == 1
        assert check_basic_complex_iso(bl)

    def test_chart_matrices(self):
        bl, _ = corner_blowup()
        atlas = local_atlas(bl.refinement)
        mats = sorted(c.nu for c in atlas.charts.values())
        assert mats == [((0, 1), (1, 1)), ((1, 0), (1, 1))]

    def test_weighted(self):
        bl, charts = ordinary_blowup(square(), "H1&H2", weights=(1, 2))
        bl.total.validate()
        assert sorted(charts) == [((1, 0), (1, 2)), ((1, 2), (0, 1))]
        exc = next(h for h in bl.total.hypersurfaces()
                   if bl.blowdown.face_map[h] == "H1&H2")
        assert bl.blowdown.alpha(exc, "H1") == 1
        assert bl.blowdown.alpha(exc, "H2") == 2

    def test_blowdown_recognized(self):
        bl, _ = corner_blowup()
        is_bd, is_diffeo = check_blowdown(bl.blowdown)
        assert is_bd and not is_diffeo
        ident = identity_bmap(square())
        assert check_blowdown(ident) == (True, True)


class TestAtlas:
    def test_transitions_unimodular(self):
        bl, _ = corner_blowup()
        atlas = local_atlas(bl.refinement)
        for t in atlas.transitions.values():
            d = la.det(t)
            assert abs(d) == 1
            assert all(Fraction(x).denominator == 1
                       for row in t for x in row)

    def test_separators_separate(self):
        bl, _ = corner_blowup()
        atlas = local_atlas(bl.refinement)
        for (e1, e2), u in atlas.separators.items():
            nu1 = atlas.charts[e1].nu
            nu2 = atlas.charts[e2].nu
            shared = set(nu1) & set(nu2)
            for g in nu1:
                if g not in shared:
                    assert la.dot(g, u) > 0
            for g in nu2:
                if g not in shared:
                    assert la.dot(g, u) < 0

    def test_weighted_atlas(self):
        bl, _ = ordinary_blowup(square(), "H1&H2", weights=(2, 3))
        atlas = local_atlas(bl.refinement)
        assert len(atlas.charts) >= 2
        for t in atlas.transitions.values():
            assert la.det(t) != 0


class TestLift:
    def test_self_lift_is_identity(self):
        bl, _ = corner_blowup()
        lift = lift_bmap(bl.blowdown, bl)
        assert lift.bmap == identity_bmap(bl.total)
        lift.factoring.validate()

    def test_lift_composes_to_original(self):
        bl, _ = corner_blowup()
        x = corner_model(1)
        # H1 -> the corner with exponents (1, 2): direction inside one
        # member of the subdivision.
        f = BMap(x, square(), {"X": "X", "H1": "H1&H2"},
                 {("H1", "H1"): 1, ("H1", "H2"): 2})
        f.validate()
        assert is_compatible(f, bl.refinement)
        lift = lift_bmap(f, bl)
        lift.bmap.validate()
        assert lift.bmap.compose(bl.blowdown) == f

    def test_incompatible_raises(self):
        bl, _ = corner_blowup()
        with pytest.raises(NotCompatible):
            lift_bmap(identity_bmap(square()), bl)

    def test_chart_lift(self):
        nu = la.mat([(1, 0), (1, 1)])
        delta = la.mat([(1, 1), (2, 3)])
        mu = chart_lift(delta, nu)
        assert la.mat_mul(mu, nu) == delta

    def test_blowup_domain_makes_liftable(self):
        bl, _ = corner_blowup()
        f = identity_bmap(square())
        dom, lift, minimal = blowup_domain(f, bl)
        lift.bmap.validate()
        assert check_blowdown(dom.blowdown)[0]
        assert lift.bmap.compose(bl.blowdown) == dom.blowdown.compose(f)


class TestIterated:
    def test_lift_face(self):
        bl, _ = corner_blowup()
        lifted = lift_face(bl, "H1")
        assert bl.refinement.morphism.node_map[lifted] == "H1"

    def test_center_does_not_survive(self):
        bl, _ = corner_blowup()
        with pytest.raises(NotAFace):
            lift_face(bl, "H1&H2")

    def test_two_centers(self):
        x = corner_model(3)
        bl = iterated_blowup(x, ["H1&H2&H3", "H1&H2"])
        bl.total.validate()
        assert len(bl.total.hypersurfaces()) == 5
        assert check_basic_complex_iso(bl)
        assert check_blowdown(bl.blowdown)[0]
        assert len(bl.total.faces) == 18
