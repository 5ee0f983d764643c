"""Hypothesis checks and the verdict ladder."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienard.errors import LienardError
from lienard.funcs import LienardSystem, poly_fn, van_der_pol
from lienard.hypo import (
    Direction,
    Tristate,
    Verdict,
    analyze,
    check_B,
    check_C,
    check_D,
    check_Ddoubleprime,
    check_Dprime,
    check_E,
)


def cubic_F_system(k, x2, x1, g=None):
    """F = k x (x - x1)(x - x2) with k > 0; friction spec via F."""
    F = poly_fn(0, k * x1 * x2, -k * (x1 + x2), k)
    return LienardSystem.from_F(F, g if g is not None else poly_fn(0, 1))


class TestCheckB:
    def test_van_der_pol_holds(self):
        assert check_B(van_der_pol()).status is Tristate.HOLDS

    def test_cubic_g_holds_without_transversality(self):
        sys = LienardSystem.from_f(poly_fn(-1, 0, 1), poly_fn(0, 0, 0, 1))
        assert check_B(sys).status is Tristate.HOLDS

    def test_reversed_g_fails(self):
        sys = LienardSystem.from_f(poly_fn(-1, 0, 1), poly_fn(0, -1))
        r = check_B(sys)
        assert r.status is Tristate.FAILS

    def test_extra_g_zero_fails(self):
        sys = LienardSystem.from_f(poly_fn(-1, 0, 1), poly_fn(0, 1, -1))
        assert check_B(sys).status is Tristate.FAILS

    def test_nonvanishing_g_fails(self):
        sys = LienardSystem.from_f(poly_fn(-1, 0, 1), poly_fn(1, 1))
        assert check_B(sys).status is Tristate.FAILS

    def test_weak_friction_form_accepted(self):
        # f = -x^2 has f(0) = 0, but F = -x^3/3 still satisfies xF < 0 near 0
        sys = LienardSystem.from_f(poly_fn(0, 0, -1), poly_fn(0, 1))
        assert check_B(sys).status is Tristate.HOLDS

    def test_positive_friction_fails(self):
        sys = LienardSystem.from_f(poly_fn(1, 0, 1), poly_fn(0, 1))
        assert check_B(sys).status is Tristate.FAILS


class TestCheckC:
    def test_van_der_pol_roots(self):
        r = check_C(van_der_pol())
        assert r.status is Tristate.HOLDS
        x1 = r.witnesses["x1"]
        x2 = r.witnesses["x2"]
        s3 = math.sqrt(3)
        assert x1[0] <= s3 <= x1[1]
        assert x2[0] <= -s3 <= x2[1]

    def test_single_zero_fails(self):
        sys = LienardSystem.from_F(poly_fn(0, 0, 0, Fraction(1, 3)), poly_fn(0, 1))
        assert check_C(sys).status is Tristate.FAILS

    def test_asymmetric_cubic_holds(self):
        sys = cubic_F_system(1.0, -2.0, 1.0)
        r = check_C(sys)
        assert r.status is Tristate.HOLDS
        assert r.witnesses["x2"][0] <= -2 <= r.witnesses["x2"][1]
        assert r.witnesses["x1"][0] <= 1 <= r.witnesses["x1"][1]

    def test_upside_down_cubic_fails_monotonicity(self):
        sys = LienardSystem.from_F(poly_fn(0, 1, 0, Fraction(-1, 3)), poly_fn(0, 1))
        r = check_C(sys)
        assert r.status is Tristate.FAILS
        assert "monotone" in r.note or "sign pattern" in r.note

    def test_five_zero_F_fails(self):
        # F = x(x^2-1)(x^2-4) has five transversal zeros
        F = poly_fn(0, 4, 0, -5, 0, 1)
        sys = LienardSystem.from_F(F, poly_fn(0, 1))
        assert check_C(sys).status is Tristate.FAILS

    def test_relaxed_flag_tolerates_touching_zero(self):
        # F = x(x+2)(x-3)(x-1)^2: double zero at 1, sign changes at -2, 0, 3
        F = poly_fn(0, -6, 11, -3, -3, 1)
        sys = LienardSystem.from_F(F, poly_fn(0, 1))
        assert check_C(sys).status is Tristate.FAILS
        r = check_C(sys, relaxed=True)
        assert r.status is Tristate.HOLDS
        assert r.witnesses["x2"][0] <= -2 <= r.witnesses["x2"][1]
        assert r.witnesses["x1"][0] <= 3 <= r.witnesses["x1"][1]


class TestCheckD:
    def test_odd_F_even_G_holds(self):
        s3 = math.sqrt(3)
        r = check_D(van_der_pol(), -s3, s3)
        assert r.status is Tristate.HOLDS
        assert r.numbers["gap"] == pytest.approx(0.0, abs=1e-12)

    def test_asymmetric_fails_with_gap(self):
        sys = cubic_F_system(1.0, -2.0, 1.0)
        r = check_D(sys, -2.0, 1.0)
        assert r.status is Tristate.FAILS
        assert r.numbers["gap"] == pytest.approx(-1.5)

    def test_tolerance_must_be_positive(self):
        with pytest.raises(LienardError):
            check_D(van_der_pol(), -1.0, 1.0, tol=0.0)


class TestCheckE:
    def test_van_der_pol_holds(self):
        assert check_E(van_der_pol()).status is Tristate.HOLDS

    def test_negative_cubic_F_fails_right(self):
        sys = LienardSystem.from_F(poly_fn(0, 0, 0, -1), poly_fn(0, 1))
        assert check_E(sys).status is Tristate.FAILS

    def test_strong_restoring_force_rescues(self):
        # same F but g = x^3: G = x^4/4 dominates the cubic F on both sides
        sys = LienardSystem.from_F(poly_fn(0, 0, 0, -1), poly_fn(0, 0, 0, 1))
        assert check_E(sys).status is Tristate.HOLDS


class TestWitnessChecks:
    def test_Dprime_holds_with_strong_left_bump(self):
        sys = cubic_F_system(4.0, -1.0, 3.0)  # G(x1) = 4.5 > G(x2) = 0.5
        r = check_Dprime(sys, -1.0, 3.0)
        assert r.status is Tristate.HOLDS
        assert -1.0 < r.witnesses["x2_star"] < 0.0
        assert float(sys.F(r.witnesses["x2_star"])) >= math.sqrt(2 * 4.5) - 1e-9

    def test_Dprime_fails_when_bump_too_small(self):
        sys = cubic_F_system(1.0, -1.0, 3.0)
        assert check_Dprime(sys, -1.0, 3.0).status is Tristate.FAILS

    def test_Dprime_not_applicable_on_balanced_system(self):
        r = check_Dprime(van_der_pol(), -math.sqrt(3), math.sqrt(3))
        assert r.status is Tristate.UNKNOWN
        assert "not applicable" in r.note

    def test_Ddoubleprime_mirror(self):
        sys = cubic_F_system(4.0, -3.0, 1.0)  # G(x1) = 0.5 < G(x2) = 4.5
        r = check_Ddoubleprime(sys, -3.0, 1.0)
        assert r.status is Tristate.HOLDS
        assert 0.0 < r.witnesses["x1_star"] < 1.0


class TestAnalyze:
    def test_van_der_pol_verdict(self):
        rep = analyze(van_der_pol())
        assert rep.verdict is Verdict.UNIQUE_STABLE_CYCLE
        assert rep.direction is Direction.MUST_CROSS_BOTH
        assert rep.x1 == pytest.approx(math.sqrt(3), abs=1e-9)
        assert rep.x2 == pytest.approx(-math.sqrt(3), abs=1e-9)
        assert rep.existence_note

    def test_witness_verdict(self):
        rep = analyze(cubic_F_system(4.0, -3.0, 1.0))
        assert rep.verdict is Verdict.UNIQUE_CYCLE_VIA_WITNESS
        assert rep.direction is Direction.MUST_CROSS_X1

    def test_at_most_one_crossing(self):
        rep = analyze(cubic_F_system(1.0, -2.0, 1.0))
        assert rep.verdict is Verdict.AT_MOST_ONE_CROSSING_CYCLE
        assert rep.direction is Direction.MUST_CROSS_X1

    def test_direction_flips_with_gap_sign(self):
        rep = analyze(cubic_F_system(1.0, -1.0, 2.0))
        assert rep.direction is Direction.MUST_CROSS_X2

    def test_no_verdict_when_B_fails(self):
        sys = LienardSystem.from_f(poly_fn(-1, 0, 1), poly_fn(0, -1))
        rep = analyze(sys)
        assert rep.verdict is Verdict.NO_VERDICT
        # C still holds for this F, so the direction rule stays populated
        assert rep.direction is Direction.MUST_CROSS_BOTH

    def test_direction_absent_when_C_fails(self):
        sys = LienardSystem.from_F(poly_fn(0, 0, 0, 1), poly_fn(0, 1))
        rep = analyze(sys)
        assert rep.verdict is Verdict.NO_VERDICT
        assert rep.direction is None

    def test_json_shape(self):
        d = analyze(van_der_pol()).to_json_dict()
        for key in ("B", "C", "D", "E", "Dprime", "Ddoubleprime"):
            assert set(d[key]) >= {"status", "witnesses", "numbers", "tolerances"}
        assert d["verdict"] == "UniqueStableCycle"
        assert d["direction"] == "MustCrossBoth"

    def test_deterministic(self):
        a = analyze(cubic_F_system(2.0, -1.5, 1.0)).to_json_dict()
        b = analyze(cubic_F_system(2.0, -1.5, 1.0)).to_json_dict()
        assert a == b

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=0.1, max_value=5.0),
        st.floats(min_value=0.2, max_value=3.0),
        st.one_of(st.just(0.0), st.floats(min_value=1e-3, max_value=2.0)),
        st.floats(min_value=0.1, max_value=2.0),
    )
    def test_odd_systems_always_balanced(self, a, b, c, d):
        # F odd with three zeros, g odd: gap vanishes by symmetry
        F = poly_fn(0, -b, 0, 0, 0, a)  # a x^5 - b x
        g = poly_fn(0, d, 0, c)
        sys = LienardSystem.from_F(F, g)
        rep = analyze(sys)
        assert rep.C.status is Tristate.HOLDS
        assert rep.D.status is Tristate.HOLDS
        assert rep.direction is Direction.MUST_CROSS_BOTH
        assert rep.verdict is Verdict.UNIQUE_STABLE_CYCLE
