"""First-order averaging: moments, amplitude polynomial, cycle predictions.

Oracle notes
------------
* Moments are cross-checked against adaptive quadrature of
  sin^2(t) cos^{2k}(t) over one period ([DERIVED], scipy.integrate.quad).
* The degree-6 even friction with products -4/81, 49/81, -14/9, 1 must
  average to r(r^2 - 1/9)(r^2 - 4/9)(r^2 - 1) with roots 1/3, 2/3, 1.
* Scaled van der Pol friction x^2 - 1 averages to pi(r^3/4 - r): the positive
  root solves r^2 = I_0/I_2 = 4, i.e. the classical radius-2 prediction.
* Prediction error of first-order averaging scales linearly in the friction
  scale, so detector fixed points must deviate from predicted radii by at
  most C*eps with one constant C across eps.
"""

import math
import random
from fractions import Fraction

import pytest
from scipy.integrate import quad

from lienard import (
    DegenerateAmplitudeError,
    LienardSystem,
    Polynomial,
    PreconditionError,
    Stability,
    analyze,
    averaged_amplitude,
    duff_levinson_f,
    duff_levinson_system,
    find_cycles,
    poly_fn,
    predict_cycles,
    wallis_moment,
)
from lienard.avg import DEFAULT_TILT_A, DEFAULT_TILT_B, wallis_pi_multiple
from lienard.hypo import Direction, Tristate


def quad_moment(k: int) -> float:
    value, err = quad(
        lambda t: math.sin(t) ** 2 * math.cos(t) ** (2 * k), 0.0, 2.0 * math.pi,
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    assert err < 1e-12
    return value


def quad_amplitude(poly: Polynomial, rho: float) -> float:
    value, err = quad(
        lambda t: rho * float(poly(rho * math.cos(t))) * math.sin(t) ** 2,
        0.0, 2.0 * math.pi,
        epsabs=1e-12, epsrel=1e-12, limit=200,
    )
    assert err < 1e-10
    return value


class TestWallisMoments:
    def test_quoted_closed_forms(self):
        assert wallis_moment(0) == pytest.approx(math.pi, rel=1e-15)
        assert wallis_moment(1) == pytest.approx(math.pi / 4.0, rel=1e-15)
        assert wallis_moment(2) == pytest.approx(math.pi / 8.0, rel=1e-15)
        assert wallis_moment(3) == pytest.approx(5.0 * math.pi / 64.0, rel=1e-15)

    def test_exact_rational_multiples(self):
        assert wallis_pi_multiple(0) == Fraction(1)
        assert wallis_pi_multiple(1) == Fraction(1, 4)
        assert wallis_pi_multiple(2) == Fraction(1, 8)
        assert wallis_pi_multiple(3) == Fraction(5, 64)

    @pytest.mark.parametrize("k", range(11))
    def test_against_adaptive_quadrature(self, k):
        # [DERIVED] adaptive numeric quadrature oracle
        assert wallis_moment(k) == pytest.approx(quad_moment(k), abs=1e-12)

    def test_odd_power_analogue_vanishes(self):
        # odd powers of cos integrate to zero against sin^2 over the period
        for k in range(4):
            value, _ = quad(
                lambda t: math.sin(t) ** 2 * math.cos(t) ** (2 * k + 1),
                0.0, 2.0 * math.pi, epsabs=1e-13, limit=200,
            )
            assert value == pytest.approx(0.0, abs=1e-12)

    def test_index_bounds(self):
        assert wallis_moment(30) > 0.0
        with pytest.raises(PreconditionError):
            wallis_moment(31)
        with pytest.raises(PreconditionError):
            wallis_moment(-1)


class TestAveragedAmplitude:
    def test_counterexample_coefficients(self):
        amp = averaged_amplitude(duff_levinson_f(1.0, 0.0, 0.0))
        target = (0.0, -4.0 / 81.0, 0.0, 49.0 / 81.0, 0.0, -14.0 / 9.0, 0.0, 1.0)
        got = amp.fbar.as_floats()
        assert len(got) == len(target)
        for g, t in zip(got, target):
            assert g == pytest.approx(t, rel=1e-13, abs=1e-16)
        assert [k for k, _ in amp.moments_used] == [0, 1, 2, 3]

    def test_even_indices_exactly_zero(self):
        rng = random.Random(7)
        for _ in range(10):
            coeffs = [rng.uniform(-3.0, 3.0) for _ in range(rng.randrange(1, 9))]
            amp = averaged_amplitude(Polynomial(coeffs))
            for even_coeff in amp.fbar.coeffs[::2]:
                assert even_coeff == 0.0

    def test_pure_even_square(self):
        amp = averaged_amplitude(Polynomial((0.0, 0.0, 1.0)))
        assert amp.fbar.as_floats() == (0.0, 0.0, 0.0, pytest.approx(math.pi / 4.0))
        assert amp.moments_used == ((1, pytest.approx(math.pi / 4.0)),)

    def test_pure_odd_averages_to_zero(self):
        amp = averaged_amplitude(Polynomial((0.0, 1.0)))
        assert amp.fbar.degree == -1
        assert amp.moments_used == ()

    def test_accepts_scalar_fn_wrapper(self):
        amp = averaged_amplitude(poly_fn(-1.0, 0.0, 1.0))
        assert amp.fbar(2.0) == pytest.approx(0.0, abs=1e-14)

    def test_rejects_genuinely_piecewise_friction(self):
        sys = duff_levinson_system(0.01)
        from lienard.funcs import NegHalfFactor

        with pytest.raises(PreconditionError):
            averaged_amplitude(NegHalfFactor(sys.f, 2.0))

    def test_matches_direct_quadrature(self):
        # spec invariant: 20 random even polynomials of degree <= 8, three radii
        rng = random.Random(2024)
        for _ in range(20):
            degree = rng.choice((0, 2, 4, 6, 8))
            coeffs = [0.0] * (degree + 1)
            for index in range(0, degree + 1, 2):
                coeffs[index] = rng.uniform(-2.0, 2.0)
            coeffs[degree] = rng.uniform(0.5, 2.0) * rng.choice((-1.0, 1.0))
            poly = Polynomial(coeffs)
            fbar = averaged_amplitude(poly).fbar
            for rho in (0.5, 1.0, 2.0):
                expected = quad_amplitude(poly, rho)
                assert float(fbar(rho)) == pytest.approx(
                    expected, rel=1e-10, abs=1e-10
                )

    def test_json_dict(self):
        payload = averaged_amplitude(Polynomial((0.0, 0.0, 1.0))).to_json_dict()
        assert payload["fbar"][3] == pytest.approx(math.pi / 4.0)
        assert payload["moments_used"] == [[1, pytest.approx(math.pi / 4.0)]]


class TestPredictCycles:
    def test_counterexample_radii_and_types(self):
        predictions = predict_cycles(duff_levinson_f(1.0, 0.0, 0.0))
        assert len(predictions) == 3
        for (radius, stability), (target, kind) in zip(
            predictions,
            (
                (1.0 / 3.0, Stability.STABLE),
                (2.0 / 3.0, Stability.UNSTABLE),
                (1.0, Stability.STABLE),
            ),
        ):
            assert radius == pytest.approx(target, abs=1e-9)
            assert stability is kind

    def test_scaled_van_der_pol_radius_two(self):
        # [DERIVED] I_2 rho^3 = I_0 rho  =>  rho^2 = I_0/I_2 = 4
        predictions = predict_cycles(Polynomial((-1.0, 0.0, 1.0)))
        assert len(predictions) == 1
        radius, stability = predictions[0]
        assert radius == pytest.approx(2.0, abs=1e-9)
        assert stability is Stability.STABLE

    def test_no_positive_roots_gives_empty(self):
        assert predict_cycles(Polynomial((0.0, 0.0, 1.0))) == []

    def test_degenerate_amplitude_raises(self):
        with pytest.raises(DegenerateAmplitudeError):
            predict_cycles(Polynomial((0.0, 1.0)))

    def test_tilt_terms_do_not_move_predictions(self):
        # the odd tilt A x + B x^3 is invisible to first-order averaging
        plain = predict_cycles(duff_levinson_f(0.01, 0.0, 0.0))
        tilted = predict_cycles(duff_levinson_f(0.01))
        assert len(plain) == len(tilted) == 3
        for (r_plain, s_plain), (r_tilted, s_tilted) in zip(plain, tilted):
            assert r_tilted == pytest.approx(r_plain, rel=1e-12)
            assert s_tilted is s_plain


class TestCounterexampleBuilder:
    def test_friction_coefficients(self):
        pieces = duff_levinson_f(1.0, 0.0, 0.0).pieces()
        assert pieces[0].coeffs == pieces[1].coeffs
        coeffs = pieces[1].as_floats()
        expected = (
            -4.0 / (81.0 * math.pi),
            0.0,
            196.0 / (81.0 * math.pi),
            0.0,
            -112.0 / (9.0 * math.pi),
            0.0,
            64.0 / (5.0 * math.pi),
        )
        for got, want in zip(coeffs, expected):
            assert got == pytest.approx(want, rel=1e-14, abs=1e-18)

    def test_default_tilt_values(self):
        assert DEFAULT_TILT_A == pytest.approx(1.0 / (100.0 * math.pi), rel=1e-15)
        assert DEFAULT_TILT_B == pytest.approx(2.0 / math.pi, rel=1e-15)

    def test_eps_scales_friction_linearly(self):
        base = duff_levinson_f(1.0).pieces()[1].as_floats()
        scaled = duff_levinson_f(0.01).pieces()[1].as_floats()
        for b, s in zip(base, scaled):
            assert s == pytest.approx(0.01 * b, rel=1e-15, abs=1e-300)

    def test_eps_zero_is_a_center(self):
        sys = duff_levinson_system(0.0)
        assert sys.F.pieces()[1].degree == -1
        assert sys.g.pieces()[1].as_floats() == (0.0, 1.0)

    def test_default_tilt_friction_zero_windows(self):
        """The tilted friction keeps three primitive zeros in known windows
        with the potential unbalanced the G(x1) < G(x2) way."""
        report = analyze(duff_levinson_system(0.01))
        assert report.C.status is Tristate.HOLDS
        assert -1.130 <= report.x2 <= -1.129
        assert 0.247 <= report.x1 <= 0.248
        assert report.D.status is Tristate.FAILS
        assert report.direction is Direction.MUST_CROSS_X1

    def test_prediction_error_scales_linearly_in_eps(self):
        """Detector fixed points deviate from predicted radii by <= C*eps
        with a single constant across eps (first-order averaging scaling)."""
        C = 0.5
        targets = (1.0 / 3.0, 2.0 / 3.0, 1.0)
        for eps in (0.005, 0.01, 0.02):
            records = find_cycles(duff_levinson_system(eps, 0.0, 0.0), 0.05, 1.3, 16)
            assert len(records) == 3
            for record, target in zip(records, targets):
                assert abs(record.x_fixed - target) <= C * eps
