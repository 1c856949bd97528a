"""Unit and property tests for the exact linear algebra kernel."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blowup import exactla as la


small_ints = st.integers(min_value=-6, max_value=6)


def small_matrix(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.tuples(*[small_ints] * c), min_size=r, max_size=r)))


def is_unimodular(u):
    return abs(la.det(u)) == 1


class TestBasics:
    def test_primitive(self):
        assert la.primitive((2, 4, -6)) == (1, 2, -3)
        assert la.primitive((-3, 0)) == (-1, 0)
        with pytest.raises(ValueError):
            la.primitive((0, 0))

    def test_vec_gcd(self):
        assert la.vec_gcd((4, 6)) == 2
        assert la.vec_gcd((0, 0)) == 0

    def test_mat_mul_identity(self):
        m = la.mat([(1, 2), (3, 4)])
        assert la.mat_mul(m, la.identity(2)) == m

    def test_clear_denominators(self):
        v = (Fraction(1, 2), Fraction(1, 3))
        assert la.clear_denominators(v) == (3, 2)


class TestHNF:
    @settings(max_examples=60, deadline=None)
    @given(small_matrix())
    def test_transform_reproduces(self, rows):
        m = la.mat(rows)
        h, u = la.hermite_normal_form(m)
        assert la.mat_mul(u, m) == h
        assert is_unimodular(u)

    @settings(max_examples=60, deadline=None)
    @given(small_matrix())
    def test_echelon_shape(self, rows):
        m = la.mat(rows)
        h, _ = la.hermite_normal_form(m)
        pivots = []
        for row in h:
            nz = [j for j, x in enumerate(row) if x]
            if nz:
                assert h[len(pivots)] == row
                if pivots:
                    assert nz[0] > pivots[-1]
                pivots.append(nz[0])
                assert row[nz[0]] > 0


class TestSNF:
    @settings(max_examples=60, deadline=None)
    @given(small_matrix())
    def test_diagonal_with_divisibility(self, rows):
        m = la.mat(rows)
        u, d, v = la.smith_normal_form(m)
        assert la.mat_mul(la.mat_mul(u, m), v) == d
        assert is_unimodular(u) and is_unimodular(v)
        diag = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]
        for i in range(len(d)):
            for j in range(len(d[0]) if d else 0):
                if i != j:
                    assert d[i][j] == 0
        nz = [x for x in diag if x]
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0


class TestKernels:
    @settings(max_examples=60, deadline=None)
    @given(small_matrix())
    def test_saturated_kernel_annihilates(self, rows):
        m = la.mat(rows)
        k = la.saturated_kernel(m)
        for row in k:
            assert la.is_zero(la.apply_row(row, m))
        assert len(k) == len(m) - la.rank(m)

    @settings(max_examples=60, deadline=None)
    @given(small_matrix())
    def test_right_kernel(self, rows):
        m = la.mat(rows)
        for v in la.right_kernel_q(m):
            for row in m:
                assert sum(Fraction(a) * Fraction(b)
                           for a, b in zip(row, v)) == 0


class TestSolve:
    def test_solve_row(self):
        m = la.mat([(1, 1, 0), (0, 2, 1)])
        v = (1, 3, 1)
        c = la.solve_row(v, m)
        assert c == (1, 1)
        assert la.solve_row((1, 0, 1), m) is None

    def test_solve_row_int(self):
        m = la.mat([(2, 0), (0, 2)])
        assert la.solve_row_int((2, 4), m) == (1, 2)
        assert la.solve_row_int((1, 0), m) is None

    def test_inverse(self):
        m = la.mat([(1, 1), (0, 1)])
        inv = la.inverse_q(m)
        prod = la.mat_mul(m, inv)
        assert all(prod[i][j] == (1 if i == j else 0)
                   for i in range(2) for j in range(2))


class TestLP:
    def test_feasible_strict(self):
        w = la.lp_feasible(2, strict=[(1, 0), (0, 1)])
        assert w is not None
        assert w[0] > 0 and w[1] > 0

    def test_infeasible(self):
        assert la.lp_feasible(1, strict=[(1,), (-1,)]) is None

    def test_zero_constraints(self):
        w = la.lp_feasible(3, strict=[(1, 0, 0)], zero=[(0, 1, 0)])
        assert w is not None
        assert w[0] > 0 and w[1] == 0

    def test_empty_is_origin(self):
        assert la.lp_feasible(2) is not None

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(small_ints, small_ints),
                    min_size=1, max_size=5))
    def test_witness_satisfies(self, strict):
        w = la.lp_feasible(2, strict=strict)
        if w is not None:
            for u in strict:
                assert la.dot(u, w) > 0
        else:
            # Brute force on a grid: no point satisfies everything.
            rng = [Fraction(i, 3) for i in range(-9, 10)]
            for x in rng:
                for y in rng:
                    assert not all(u[0] * x + u[1] * y > 0
                                   for u in strict)
