from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avgalg.exactlin import (
    Matrix,
    NoSolution,
    NotAFieldError,
    QQ,
    RingError,
    Solution,
    Submodule,
    Subspace,
    ZMod,
    char_poly,
    column_space,
    nullspace,
    poly_eval,
    rational_roots,
    ring_from_name,
    rref,
    solve_linear,
    submodule_kernel,
    subspace_contains,
    subspace_intersect,
    subspace_sum,
)


def mat(rows, ring=QQ):
    return Matrix.from_rows(ring, rows)


class TestRings:
    def test_rational_canonical(self):
        assert QQ.parse("4/6") == Fraction(2, 3)
        assert QQ.render(Fraction(-3, 1)) == "-3"
        assert QQ.render(Fraction(1, 2)) == "1/2"

    def test_zmod_canonical(self):
        z6 = ZMod(6)
        assert z6.of(-1) == 5
        assert z6.add(4, 5) == 3
        assert not z6.is_field
        assert ZMod(7).is_field

    def test_zmod_inverse(self):
        z7 = ZMod(7)
        assert z7.mul(z7.inv(3), 3) == 1
        with pytest.raises(RingError):
            ZMod(6).inv(2)

    def test_zmod_fraction_embedding(self):
        # 1/2 is 4 mod 7, no unit denominator mod 6
        assert ZMod(7).of(Fraction(1, 2)) == 4
        with pytest.raises(RingError):
            ZMod(6).of(Fraction(1, 2))

    def test_ring_names_roundtrip(self):
        assert ring_from_name("Q") is QQ
        assert ring_from_name("Zmod:6") == ZMod(6)
        with pytest.raises(RingError):
            ring_from_name("R")


class TestRref:
    def test_identity_already_reduced(self):
        m = Matrix.identity(QQ, 2)
        red, pivots = rref(m)
        assert red == m
        assert pivots == (0, 1)

    def test_rank_one(self):
        red, pivots = rref(mat([[2, 4], [1, 2]]))
        assert red.entries == ((1, 2), (0, 0))
        assert pivots == (0,)

    def test_zero_matrix(self):
        m = Matrix.zero(QQ, 2, 3)
        red, pivots = rref(m)
        assert red == m
        assert pivots == ()

    def test_non_field_rejected(self):
        with pytest.raises(NotAFieldError):
            rref(Matrix.from_rows(ZMod(6), [[2, 4]]))

    @given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3),
                    min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_idempotent_and_rowspace_preserved(self, rows):
        m = mat(rows)
        red, _ = rref(m)
        again, _ = rref(red)
        assert again == red
        assert Subspace.span(QQ, 3, m.entries) == Subspace.span(QQ, 3, red.entries)


class TestSolve:
    def test_identity_system(self):
        res = solve_linear(Matrix.identity(QQ, 3), [1, 2, 3])
        assert isinstance(res, Solution)
        assert res.particular == (1, 2, 3)
        assert res.nullspace.is_zero()

    def test_underdetermined(self):
        res = solve_linear(mat([[1, 1]]), [2])
        assert isinstance(res, Solution)
        assert res.particular == (2, 0)
        assert res.nullspace == Subspace.span(QQ, 2, [(1, -1)])

    def test_inconsistent(self):
        assert isinstance(solve_linear(mat([[1], [1]]), [1, 2]), NoSolution)

    @given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
                    min_size=2, max_size=3),
           st.lists(st.integers(-5, 5), min_size=2, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_solution_exact(self, rows, b):
        if len(b) != len(rows):
            b = (b + [0] * len(rows))[:len(rows)]
        a = mat(rows)
        res = solve_linear(a, b)
        if isinstance(res, Solution):
            assert a.apply(res.particular) == tuple(Fraction(x) for x in b)
            for v in res.nullspace.basis:
                assert all(x == 0 for x in a.apply(v))


class TestSubspaces:
    def test_nullspace_identity(self):
        assert nullspace(Matrix.identity(QQ, 3)).is_zero()

    def test_nullspace_zero_matrix(self):
        assert nullspace(Matrix.zero(QQ, 2, 2)) == Subspace.full(QQ, 2)

    def test_nullspace_row(self):
        ker = nullspace(mat([[1, 2]]))
        assert ker == Subspace.span(QQ, 2, [(-2, 1)])
        assert ker.contains_vector((-2, 1))

    def test_sum_with_zero(self):
        u = Subspace.span(QQ, 3, [(1, 0, 2), (0, 1, 1)])
        assert subspace_sum(u, Subspace.zero_space(QQ, 3)) == u

    def test_intersect_axes(self):
        e1 = Subspace.span(QQ, 2, [(1, 0)])
        e2 = Subspace.span(QQ, 2, [(0, 1)])
        assert subspace_intersect(e1, e2).is_zero()

    def test_containment(self):
        plane = Subspace.span(QQ, 3, [(1, 0, 0), (0, 1, 0)])
        line = Subspace.span(QQ, 3, [(1, 1, 0)])
        assert subspace_contains(plane, line)
        assert not subspace_contains(line, plane)

    @given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                    min_size=0, max_size=3),
           st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                    min_size=0, max_size=3))
    @settings(max_examples=80, deadline=None)
    def test_dimension_formula(self, us, vs):
        u = Subspace.span(QQ, 3, us)
        v = Subspace.span(QQ, 3, vs)
        s = subspace_sum(u, v)
        i = subspace_intersect(u, v)
        assert s.dim + i.dim == u.dim + v.dim
        assert subspace_contains(s, u) and subspace_contains(s, v)
        assert subspace_contains(u, i) and subspace_contains(v, i)


class TestCharPoly:
    def test_identity(self):
        # (t - 1)^2 = 1 - 2t + t^2
        assert char_poly(Matrix.identity(QQ, 2)) == (1, -2, 1)
        assert char_poly(Matrix.identity(QQ, 3)) == (-1, 3, -3, 1)

    def test_nilpotent(self):
        assert char_poly(mat([[0, 1], [0, 0]])) == (0, 0, 1)

    def test_companion(self):
        # multiplication-by-t matrix of Q[t]/(t^3 - 2)
        m = mat([[0, 0, 2], [1, 0, 0], [0, 1, 0]])
        assert char_poly(m) == (-2, 0, 0, 1)

    def test_over_prime_field(self):
        z7 = ZMod(7)
        assert char_poly(Matrix.identity(z7, 2)) == (1, 5, 1)

    def test_ad_matrix_of_complex_example(self):
        # ad(a)(x) = a·F(x) − x·F(a) on Q[i] with F = imaginary part, a = i:
        # ad(1) = i·0 − 1·1 = −1, ad(i) = i·1 − i·1 = 0
        ad = mat([[-1, 0], [0, 0]])
        assert rational_roots(char_poly(ad)) == (Fraction(-1), Fraction(0))


class TestRationalRoots:
    def test_repeated_and_negative(self):
        # (t - 1)^2 (t + 2) = t^3 - 3t + 2
        assert rational_roots((2, -3, 0, 1)) == (-2, 1, 1)

    def test_no_rational_roots(self):
        assert rational_roots((1, 0, 1)) == ()
        assert rational_roots((-2, 0, 1)) == ()

    def test_zero_roots_and_fractions(self):
        # t^2 (2t - 1)
        assert rational_roots((0, 0, -1, 2)) == (0, 0, Fraction(1, 2))

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            rational_roots((0, 0))

    def test_random_eigen_consistency(self):
        import random
        rng = random.Random(20260822)
        for _ in range(100):
            m = mat([[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)])
            p = char_poly(m)
            for k in set(rational_roots(p)):
                assert poly_eval(QQ, p, k) == 0
                shifted = m.sub(Matrix.identity(QQ, 3).scale(k))
                assert not nullspace(shifted).is_zero()


class TestSubmodules:
    def test_span_canonical(self):
        z6 = ZMod(6)
        a = Submodule.span(z6, 1, [(2,), (3,)])
        assert a == Submodule.span(z6, 1, [(1,)])
        assert a.contains_vector((5,))

    def test_kernel_of_doubling_mod6(self):
        z6 = ZMod(6)
        ker = submodule_kernel(z6, Matrix.from_rows(z6, [[2]]))
        assert ker == Submodule.span(z6, 1, [(3,)])
        assert ker.contains_vector((3,))
        assert not ker.contains_vector((2,))

    def test_kernel_matches_brute_force(self):
        z6 = ZMod(6)
        m = Matrix.from_rows(z6, [[2, 4], [3, 3]])
        ker = submodule_kernel(z6, m)
        for x in range(6):
            for y in range(6):
                expected = all(v == 0 for v in m.apply((x, y)))
                assert ker.contains_vector((x, y)) == expected

    def test_column_space(self):
        cs = column_space(mat([[1, 2], [2, 4]]))
        assert cs == Subspace.span(QQ, 2, [(1, 2)])
