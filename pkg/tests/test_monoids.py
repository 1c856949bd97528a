"""Tests for toric monoids against brute-force lattice oracles."""

import itertools
import random
from fractions import Fraction

import pytest

from blowup import exactla as la
from blowup.errors import (NotInSupport, NotPointedLattice, NotSaturated,
                           NotSharp)
from blowup.monoids import MonoidHom, ToricMonoid, fiber_product


def ray_monoid(ambient_dim, v):
    """The monoid on a single ray, carrying its span as lattice."""
    return ToricMonoid.make(ambient_dim, [v], [v])


def random_positive_monoid(rng, dim, max_entry=3):
    """A pointed full-lattice monoid with rays in the positive orthant."""
    while True:
        k = rng.randint(dim, dim + 2)
        rays = []
        for _ in range(k):
            v = tuple(rng.randint(0, max_entry) for _ in range(dim))
            if any(v):
                rays.append(v)
        if not rays:
            continue
        try:
            return ToricMonoid.make(dim, la.identity(dim), rays)
        except NotPointedLattice:
            continue


def box_hilbert_oracle(m: ToricMonoid, bound: int):
    """Irreducible nonzero monoid elements with entries in [0, bound].

    Only valid for monoids inside the positive orthant, where any
    decomposition of a box point stays inside the box.
    """
    n = m.ambient_dim
    pts = [v for v in itertools.product(range(bound + 1), repeat=n)
           if any(v) and m.contains(v)]
    pset = set(pts)
    basis = []
    for v in pts:
        reducible = False
        for a in pset:
            b = tuple(x - y for x, y in zip(v, a))
            if b != v and any(b) and b in pset:
                reducible = True
                break
        if not reducible:
            basis.append(v)
    return sorted(basis)


class TestConstruction:
    def test_free_is_smooth(self):
        m = ToricMonoid.free(3)
        assert m.is_smooth()
        assert m.index() == 1
        assert sorted(m.hilbert_basis()) == sorted(la.identity(3))

    def test_canonical_key_ignores_ray_order(self):
        a = ToricMonoid.make(2, la.identity(2), [(0, 1), (1, 0)])
        b = ToricMonoid.make(2, la.identity(2), [(1, 0), (0, 1)])
        assert a == b and hash(a) == hash(b)
        assert a == ToricMonoid.free(2)

    def test_rays_reduced_to_extremals(self):
        m = ToricMonoid.make(2, la.identity(2), [(1, 0), (1, 1), (0, 1)])
        assert sorted(m.rays) == [(0, 1), (1, 0)]

    def test_from_generators_saturates(self):
        # Generated by (2,0),(1,1),(0,2): index-2 sublattice, saturated.
        m = ToricMonoid.from_generators(2, [(2, 0), (1, 1), (0, 2)])
        assert m.contains((1, 1))
        assert not m.contains((1, 0))
        assert m.in_support((1, 0))

    def test_not_pointed_rejected(self):
        with pytest.raises((NotSharp, AssertionError)):
            ToricMonoid.make(1, la.identity(1), [(1,), (-1,)])

    def test_trivial(self):
        m = ToricMonoid.trivial(2)
        assert m.dim == 0
        assert m.hilbert_basis() == ()
        assert m.contains((0, 0))
        assert not m.contains((1, 0))


class TestMembership:
    def test_sublattice_membership(self):
        m = ToricMonoid.make(1, la.mat([(2,)]), [(2,)])
        assert m.contains((2,))
        assert not m.contains((1,))
        assert m.in_support((1,))

    def test_relative_interior(self):
        m = ToricMonoid.free(2)
        assert m.in_relative_interior((1, 1))
        assert not m.in_relative_interior((1, 0))
        p = m.interior_point()
        assert m.in_relative_interior(p)

    def test_interior_point_of_face(self):
        m = ray_monoid(2, (1, 0))
        p = m.interior_point()
        assert p[0] > 0 and p[1] == 0


class TestHilbert:
    def test_quadratic_cone(self):
        # Cone over (1,0),(1,2): Hilbert basis needs the interior (1,1).
        m = ToricMonoid.make(2, la.identity(2), [(1, 0), (1, 2)])
        assert sorted(m.hilbert_basis()) == [(1, 0), (1, 1), (1, 2)]
        assert not m.is_smooth()
        assert m.is_simplicial()
        assert m.index() == 2

    def test_random_against_box_oracle(self):
        rng = random.Random(11)
        for _ in range(25):
            dim = rng.choice([2, 2, 3])
            m = random_positive_monoid(rng, dim)
            hb = sorted(m.hilbert_basis())
            bound = max(max(v) for v in hb)
            assert hb == box_hilbert_oracle(m, bound)

    def test_generates_monoid(self):
        rng = random.Random(12)
        for _ in range(10):
            m = random_positive_monoid(rng, 2)
            hb = m.hilbert_basis()
            # Random small nonneg combinations land back in the monoid.
            for _ in range(20):
                cs = [rng.randint(0, 3) for _ in hb]
                v = la.zeros(m.ambient_dim)
                for c, g in zip(cs, hb):
                    v = la.vadd(v, la.vscale(c, g))
                assert m.contains(v)


class TestFaces:
    def test_quadrant_face_lattice(self):
        m = ToricMonoid.free(2)
        fs = m.faces()
        assert len(fs) == 4  # 0, two rays, the whole quadrant
        dims = sorted(f.monoid.dim for f in fs)
        assert dims == [0, 1, 1, 2]

    def test_face_functionals(self):
        m = ToricMonoid.make(2, la.identity(2), [(1, 0), (1, 2)])
        for f in m.faces():
            if f.monoid.dim == m.dim:
                continue
            u = f.functional
            for g in f.monoid.rays:
                assert la.dot(g, u) == 0
            for g in m.rays:
                if g not in f.monoid.rays:
                    assert la.dot(g, u) > 0

    def test_smallest_face_containing(self):
        m = ToricMonoid.free(2)
        f = m.smallest_face_containing((3, 0))
        assert f.monoid.dim == 1
        assert m.smallest_face_containing((1, 1)).monoid == m
        assert m.smallest_face_containing((0, 0)).monoid.dim == 0

    def test_is_face_of(self):
        m = ToricMonoid.make(2, la.identity(2), [(1, 0), (1, 2)])
        assert ray_monoid(2, (1, 0)).is_face_of(m)
        assert not ray_monoid(2, (1, 1)).is_face_of(m)

    def test_face_count_cone_over_square(self):
        rays = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
        m = ToricMonoid.make(3, la.identity(3), rays)
        # 1 vertex + 4 rays + 4 facets + 1 full cone.
        assert len(m.faces()) == 10
        assert not m.is_simplicial()


class TestSubspaceOps:
    def test_intersect_with_subspace(self):
        m = ToricMonoid.free(2)
        d = m.intersect_with_subspace([(1, 1)])
        assert d.dim == 1
        assert d.rays == ((1, 1),) or d.rays == (la.primitive((1, 1)),)

    def test_intersect_keeps_lattice_saturated(self):
        m = ToricMonoid.make(2, la.identity(2), [(1, 0), (1, 2)])
        d = m.intersect_with_subspace([(2, 2)])
        assert d.contains((1, 1))

    def test_join(self):
        m = ToricMonoid.free(2)
        t1 = ray_monoid(2, (1, 0))
        t2 = ray_monoid(2, (0, 1))
        assert m.join(t1, t2) == m


class TestHoms:
    def test_validate_rejects_escape(self):
        src = ToricMonoid.free(1)
        tgt = ToricMonoid.free(2)
        bad = MonoidHom(src, tgt, la.mat([(1, -1)]))
        with pytest.raises(NotInSupport):
            bad.validate()

    def test_image_monoid(self):
        src = ToricMonoid.free(2)
        tgt = ToricMonoid.free(2)
        h = MonoidHom(src, tgt, la.mat([(1, 1), (0, 1)]))
        img = h.image_monoid()
        assert sorted(img.rays) == [(0, 1), (1, 1)]

    def test_compose(self):
        m = ToricMonoid.free(2)
        h1 = MonoidHom(m, m, la.mat([(1, 1), (0, 1)]))
        h2 = MonoidHom(m, m, la.mat([(1, 0), (1, 1)]))
        c = h1.compose(h2)
        assert c.matrix == la.mat_mul(h1.matrix, h2.matrix)

    def test_fiber_product_diagonal(self):
        n = ToricMonoid.free(1)
        h = MonoidHom(n, n, la.identity(1))
        fp = fiber_product(h, h)
        assert fp.ambient_dim == 2
        assert fp.rays == ((1, 1),)

    def test_fiber_product_addition_pattern(self):
        # Two coordinates each mapping by sum to a line.
        s = ToricMonoid.free(2)
        t = ToricMonoid.free(1)
        h = MonoidHom(s, t, la.mat([(1,), (1,)]))
        fp = fiber_product(h, h)
        assert fp.ambient_dim == 4
        assert sorted(fp.rays) == [(0, 1, 0, 1), (0, 1, 1, 0),
                                   (1, 0, 0, 1), (1, 0, 1, 0)]
        assert not fp.is_simplicial()
