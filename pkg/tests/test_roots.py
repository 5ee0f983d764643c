"""Root isolation: exact counts and certified intervals against constructed factorizations."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienard.errors import LienardError, ZeroPolynomialError
from lienard.funcs import NegHalfArgScale, NegHalfFactor, Poly, Polynomial, poly_fn
from lienard.roots import count_roots, isolate_roots, refine_root, sturm_sequence


def polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def from_roots(roots_with_mult, quad=None):
    """Monic polynomial with prescribed rational roots and multiplicities."""
    coeffs = [1]
    for r, m in roots_with_mult:
        factor = [-r, 1]
        for _ in range(m):
            coeffs = polymul(coeffs, factor)
    if quad is not None:
        coeffs = polymul(coeffs, quad)
    return Polynomial(coeffs)


ROOT_POOL = [Fraction(-3), Fraction(-5, 2), Fraction(-1), Fraction(-1, 3),
             Fraction(0), Fraction(1, 4), Fraction(1), Fraction(7, 3), Fraction(3)]

root_sets = st.lists(
    st.tuples(st.sampled_from(ROOT_POOL), st.integers(min_value=1, max_value=3)),
    min_size=1, max_size=4, unique_by=lambda t: t[0],
)
# x^2 + bx + c with b^2 < 4c: no real roots
pos_quads = st.one_of(
    st.none(),
    st.tuples(st.integers(min_value=1, max_value=9), st.integers(min_value=-2, max_value=2)).map(
        lambda t: [t[0] + t[1] ** 2, 2 * t[1], 1]
    ),
)


class TestSturmSequence:
    def test_textbook_chain(self):
        seq = sturm_sequence(Polynomial((-1, 0, 1)))
        assert [p.coeffs for p in seq.polys] == [(-1, 0, 1), (0, 1), (1,)]

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroPolynomialError):
            sturm_sequence(Polynomial((0,)))

    def test_constant_chain(self):
        seq = sturm_sequence(Polynomial((5,)))
        assert len(seq.polys) == 1

    def test_repeated_roots_collapse(self):
        # (x-1)^2 (x+2): squarefree part has simple roots 1 and -2
        p = Polynomial(polymul(polymul([-1, 1], [-1, 1]), [2, 1]))
        seq = sturm_sequence(p)
        assert count_roots(seq, -3, 3) == 2


class TestCountRoots:
    def test_half_open_semantics(self):
        seq = sturm_sequence(Polynomial((-1, 0, 1)))
        assert count_roots(seq, -2, 2) == 2
        assert count_roots(seq, -1, 1) == 1  # -1 excluded, 1 included
        assert count_roots(seq, -2, 0) == 1
        assert count_roots(seq, 0, 2) == 1

    def test_requires_ordered_endpoints(self):
        seq = sturm_sequence(Polynomial((-1, 0, 1)))
        with pytest.raises(LienardError):
            count_roots(seq, 2, -2)

    @settings(max_examples=60, deadline=None)
    @given(root_sets, pos_quads, st.sampled_from([Fraction(-4), Fraction(-2), Fraction(-1, 2)]),
           st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(4)]))
    def test_exact_count_against_construction(self, rm, quad, a, b):
        p = from_roots(rm, quad)
        seq = sturm_sequence(p)
        expected = sum(1 for r, _ in rm if a < r <= b)
        assert count_roots(seq, float(a), float(b)) == expected


class TestIsolateRoots:
    def test_cubic_with_three_roots(self):
        p = Polynomial((-6, 11, -6, 1))  # (x-1)(x-2)(x-3)
        ivs = isolate_roots(Poly(p), width=1e-8)
        assert len(ivs) == 3
        for iv, r in zip(ivs, (1.0, 2.0, 3.0)):
            assert iv.lo <= r <= iv.hi
            assert iv.width <= 1e-7
            assert iv.transversal

    def test_double_root_not_transversal(self):
        p = from_roots([(Fraction(1), 2)])
        (iv,) = isolate_roots(Poly(p))
        assert 1.0 in iv
        assert not iv.transversal
        assert iv.sign_change[0] == iv.sign_change[1] == 1

    def test_triple_root_changes_sign_but_not_transversal(self):
        p = from_roots([(Fraction(-1), 3)])
        (iv,) = isolate_roots(Poly(p))
        assert -1.0 in iv
        assert iv.sign_change == (-1, 1)
        assert not iv.transversal

    def test_default_range_covers_cauchy_bound(self):
        p = Polynomial((-100, 0, 1))  # roots at +-10
        ivs = isolate_roots(Poly(p))
        assert len(ivs) == 2
        assert ivs[0].lo <= -10 <= ivs[0].hi
        assert ivs[1].lo <= 10 <= ivs[1].hi

    def test_explicit_range_filters(self):
        p = Polynomial((-6, 11, -6, 1))
        ivs = isolate_roots(Poly(p), bounds=(1.5, 4.0))
        assert len(ivs) == 2

    def test_range_endpoint_root_included(self):
        p = Polynomial((-1, 0, 1))
        ivs = isolate_roots(Poly(p), bounds=(-1.0, 0.5))
        assert len(ivs) == 1
        assert -1.0 in ivs[0]

    def test_root_at_zero_plain_polynomial(self):
        p = Polynomial((0, -1, 0, 1))  # x(x^2-1)
        ivs = isolate_roots(Poly(p), width=1e-9)
        assert len(ivs) == 3
        assert ivs[1].lo <= 0.0 <= ivs[1].hi

    def test_piecewise_roots_split_by_sign(self):
        # neg piece 4(x^3-x): roots -1, 0; pos piece x^3-x: roots 0, 1
        fn = NegHalfFactor(poly_fn(0, -1, 0, 1), 4)
        ivs = isolate_roots(fn, width=1e-9)
        assert len(ivs) == 3
        assert ivs[0].lo <= -1 <= ivs[0].hi
        assert ivs[1].lo < 0 < ivs[1].hi
        assert ivs[2].lo <= 1 <= ivs[2].hi
        assert all(iv.transversal for iv in ivs)

    def test_argscale_moves_negative_roots(self):
        # neg piece p(2x): root -1 moves to -1/2
        fn = NegHalfArgScale(poly_fn(0, -1, 0, 1), 2)
        ivs = isolate_roots(fn, width=1e-9)
        assert len(ivs) == 3
        assert ivs[0].lo <= -0.5 <= ivs[0].hi
        assert ivs[2].lo <= 1 <= ivs[2].hi

    def test_breakpoint_value_owned_by_right_piece(self):
        # neg piece vanishes at 0 but fn(0) = pos(0) = 1: no root at 0
        fn = NegHalfFactor(poly_fn(0, 1), 1.0)
        shifted = NegHalfFactor(poly_fn(1, 1), 2.0)
        assert isolate_roots(fn)[0].lo < 0 < isolate_roots(fn)[0].hi
        ivs = [iv for iv in isolate_roots(shifted) if iv.lo < 0 < iv.hi]
        assert ivs == []

    def test_zero_function_rejected(self):
        with pytest.raises(LienardError):
            isolate_roots(poly_fn(0))

    def test_no_real_roots(self):
        assert isolate_roots(poly_fn(1, 0, 1)) == []

    @settings(max_examples=60, deadline=None)
    @given(root_sets, pos_quads)
    def test_all_roots_isolated_exactly_once(self, rm, quad):
        p = from_roots(rm, quad)
        ivs = isolate_roots(Poly(p), bounds=(-6.0, 6.0), width=1e-7)
        roots = sorted(float(r) for r, _ in rm)
        assert len(ivs) == len(roots)
        for iv, r in zip(ivs, roots):
            assert iv.lo <= r <= iv.hi
            assert iv.width <= 2e-7

    @settings(max_examples=60, deadline=None)
    @given(root_sets, pos_quads)
    def test_transversality_matches_multiplicity(self, rm, quad):
        p = from_roots(rm, quad)
        ivs = isolate_roots(Poly(p), bounds=(-6.0, 6.0), width=1e-7)
        for iv, (r, m) in zip(ivs, sorted(rm)):
            assert iv.transversal == (m == 1)
            assert (iv.sign_change[0] != iv.sign_change[1]) == (m % 2 == 1)

    @settings(max_examples=40, deadline=None)
    @given(root_sets, st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(3)]))
    def test_piecewise_factor_keeps_roots(self, rm, lam):
        p = from_roots(rm)
        fn = NegHalfFactor(Poly(p), lam)
        ivs = isolate_roots(fn, bounds=(-6.0, 6.0), width=1e-7)
        roots = sorted(float(r) for r, _ in rm)
        assert len(ivs) == len(roots)
        for iv, r in zip(ivs, roots):
            assert iv.lo <= r <= iv.hi


class TestRefineRoot:
    def test_refines_to_requested_width(self):
        p = Polynomial((-2, 0, 1))  # sqrt(2)
        (iv,) = isolate_roots(Poly(p), bounds=(0.1, 3.0), width=1e-3)
        fine = refine_root(Poly(p), iv, 1e-12)
        assert fine.width <= 1e-11
        assert fine.lo <= math.sqrt(2) <= fine.hi

    def test_rejects_ambiguous_interval(self):
        from lienard.roots import RootInterval

        p = Polynomial((-6, 11, -6, 1))
        fat = RootInterval(0.5, 3.5, True, (-1, 1))
        with pytest.raises(LienardError):
            refine_root(Poly(p), fat, 1e-9)
