"""Deformations that restore the unique-limit-cycle certificate.

A system can satisfy the geometric hypotheses (B), (C), (E) and still carry
several limit cycles when the potential balance (D) fails.  This module
implements constructive repairs:

* :func:`deform_g` rescales the restoring force on the negative half-axis so
  the potential reaches the same height at both friction zeros, making (D)
  hold exactly.
* :func:`deform_F` rescales the *argument* of the friction primitive on the
  negative half-axis, moving its negative zero inward until the potential
  heights match.  It applies only when the positive zero is the shallow one.
* :func:`poly_deform` subtracts a linear term ``lam * x`` from an odd-degree
  polynomial primitive so that the result is negative on the whole punctured
  interval between its outer sign changes; :func:`tangent_slope_bound`
  computes the smallest such slope this module certifies, and
  :func:`poly_thresholds` the curvature thresholds it relies on.
* :func:`friction_shift` subtracts a constant from the friction coefficient
  f until the usual sign pattern (C) certifies, then rebalances g.
* :func:`center_perturbation_check` verifies the structural conditions under
  which a small perturbation of the vector field keeps a unique closed orbit.

Each deformation returns a :class:`DeformOutcome` carrying the new system,
the deformation parameter, and a full hypothesis certificate for the result.

Exactness.  The critical scale factors (``lam`` in :func:`deform_g`, ``mu``
in :func:`balance_g`) are ratios of potential values at the friction zeros.
These are computed in exact rational arithmetic from the stored coefficients
(floats convert exactly to rationals), so the rebalanced potential matches at
the zeros to rational exactness, far inside any verification tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DeformRetriesExhaustedError, LienardError, PreconditionError
from .funcs import (
    LienardSystem,
    NegHalfArgScale,
    NegHalfFactor,
    Poly,
    Polynomial,
    ScalarFn,
    SubtractConst,
    SubtractLinear,
)
from .hypo import (
    DEFAULT_D_TOL,
    HypothesisReport,
    Tristate,
    Verdict,
    _F_negative_near_zero,
    _no_sign_change_on,
    analyze,
    check_B,
    check_C,
)
from .roots import default_range, isolate_roots, refine_root

__all__ = [
    "DeformOutcome",
    "balance_g",
    "center_perturbation_check",
    "deform_F",
    "deform_g",
    "friction_shift",
    "poly_deform",
    "poly_thresholds",
    "tangent_slope_bound",
]

#: Multiplicative bumps applied to the slope when a candidate fails to certify.
RETRY_FACTOR = 1.001
#: Retry budget for :func:`poly_deform` after the initial candidate.
MAX_SLOPE_RETRIES = 8
#: Default relative safety margin added on top of the certified slope bound.
DEFAULT_MARGIN = 1e-3
#: Relative width target when bisecting for the matched negative zero.
X2_STAR_REL_TOL = 1e-12
#: Doubling budget when searching for a certifying friction shift.
MAX_SHIFT_DOUBLINGS = 60
#: Bisection steps refining the friction shift once bracketed.
SHIFT_BISECT_STEPS = 20
#: Relative tolerance for "F vanishes at the declared zeros".
F_ZERO_REL_TOL = 1e-9
#: Width target (relative) when refining roots used as numeric thresholds.
ROOT_REL_WIDTH = 1e-12


@dataclass(frozen=True)
class DeformOutcome:
    """Result of a deformation: the new system, its parameter, and its proof.

    `parameter` is the scalar knob the deformation turned (a scale factor for
    the g/F deformations, the subtracted slope or shift for the polynomial
    ones).  `certificate` is the full hypothesis report of the deformed
    system; every constructor in this module guarantees its verdict is
    ``UniqueStableCycle``.
    """

    system: LienardSystem
    parameter: float
    certificate: HypothesisReport

    def to_json_dict(self) -> dict:
        return {
            "system": self.system.to_dict(),
            "parameter": self.parameter,
            "certificate": self.certificate.to_json_dict(),
        }


# ---------------------------------------------------------------------------
# exact potential evaluation


def _exact_eval(poly: Polynomial, x: Fraction) -> Fraction:
    """Horner evaluation with every coefficient lifted to Fraction."""
    acc = Fraction(0)
    for c in reversed(poly.coeffs):
        acc = acc * x + Fraction(c)
    return acc


def _exact_piecewise(fn: ScalarFn, x: float) -> Fraction:
    """Evaluate a piecewise scalar function exactly at a float point."""
    xf = Fraction(x)
    neg, pos = fn.pieces()
    return _exact_eval(pos if xf >= 0 else neg, xf)


def _potential_heights(G: ScalarFn, x1: float, x2: float) -> tuple[Fraction, Fraction]:
    """Exact G(x1), G(x2); both must be positive (guaranteed under (B))."""
    G1 = _exact_piecewise(G, x1)
    G2 = _exact_piecewise(G, x2)
    if G1 <= 0 or G2 <= 0:
        raise PreconditionError(
            "positive potential at the friction zeros",
            f"G(x1)={float(G1):.6g}, G(x2)={float(G2):.6g}",
        )
    return G1, G2


def _require_BCE(sys: LienardSystem) -> HypothesisReport:
    """Analyze and insist that (B), (C), (E) hold; return the report."""
    report = analyze(sys)
    for name, result in (("B", report.B), ("C", report.C), ("E", report.E)):
        if result.status is not Tristate.HOLDS:
            raise PreconditionError(
                f"hypothesis ({name}) holds",
                result.note or f"check reported {result.status.value}",
            )
    return report


def _with_g(sys: LienardSystem, g_new: ScalarFn) -> LienardSystem:
    """Rebuild a system with the same friction but a new restoring force."""
    if sys.spec_kind == "f":
        return LienardSystem.from_f(sys.f, g_new)
    return LienardSystem.from_F(sys.F, g_new)


# ---------------------------------------------------------------------------
# potential rebalancing (scale g on the negative half-axis)


def balance_g(g: ScalarFn, x2: float, x1: float) -> tuple[ScalarFn, float]:
    """Scale g on x < 0 so the potential matches at x2 < 0 < x1.

    Returns ``(g_new, mu)`` with ``mu = G(x1) / G(x2)`` computed exactly;
    the rebalanced potential satisfies G_new(x2) = G(x1) to rational
    exactness.  Requires x2 < 0 < x1 and positive potential at both points.
    """
    if not (x2 < 0.0 < x1):
        raise PreconditionError("x2 < 0 < x1", f"got x2={x2}, x1={x1}")
    G = g.primitive()
    G1, G2 = _potential_heights(G, x1, x2)
    mu = G1 / G2
    return NegHalfFactor(g, float(mu)), float(mu)


def deform_g(sys: LienardSystem) -> DeformOutcome:
    """Rescale g on the negative half-axis until (D) holds exactly.

    Requires (B), (C), (E).  The friction zeros x2 < 0 < x1 come from the
    (C) certificate; the scale is ``lam = G(x1) / G(x2)`` in exact rational
    arithmetic, so the deformed potential balances identically.  If (D)
    already holds the system is returned unchanged (with lam still reported).
    The outcome's certificate always concludes ``UniqueStableCycle``.
    """
    report = _require_BCE(sys)
    G1, G2 = _potential_heights(sys.G, report.x1, report.x2)
    lam = G1 / G2
    if report.D.status is Tristate.HOLDS:
        return DeformOutcome(system=sys, parameter=float(lam), certificate=report)
    deformed = _with_g(sys, NegHalfFactor(sys.g, float(lam)))
    certificate = analyze(deformed)
    if certificate.verdict is not Verdict.UNIQUE_STABLE_CYCLE:
        raise LienardError(
            "potential rebalancing failed to certify a unique stable cycle: "
            f"verdict {certificate.verdict.value}"
        )
    return DeformOutcome(system=deformed, parameter=float(lam), certificate=certificate)


# ---------------------------------------------------------------------------
# friction-argument rescaling (move the negative zero of F inward)


def _matched_negative_zero(G: ScalarFn, x2: float, target: Fraction) -> float:
    """The point x* in (x2, 0) with G(x*) = target, by exact-sign bisection.

    Under (B), G decreases strictly on (x2, 0) toward G(0) = 0, so when
    0 < target < G(x2) the matched point exists and is unique.
    """
    neg, _pos = G.pieces()
    a, b = x2, 0.0  # G(a) > target > G(b) = 0
    while (b - a) > X2_STAR_REL_TOL * abs(a):
        m = 0.5 * (a + b)
        if _exact_eval(neg, Fraction(m)) > target:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def deform_F(sys: LienardSystem) -> DeformOutcome:
    """Rescale the argument of F on x < 0 until the potential balances.

    Requires (B), (C), (E) and ``G(x1) < G(x2)``: the positive friction zero
    must be the shallow one, because this deformation can only move the
    negative zero x2 *inward* (toward 0, where the potential is lower).  The
    scale is ``lam = x2 / x2*`` where x2* in (x2, 0) satisfies G(x2*) =
    G(x1); the deformed primitive is ``F_new(x) = F(lam * x)`` for x < 0 (and
    unchanged for x >= 0), whose negative zero lands exactly at x2*.

    When the potentials already balance, or when ``G(x1) > G(x2)``, this
    deformation does not apply; use :func:`deform_g`, which handles both.
    """
    report = _require_BCE(sys)
    G1, G2 = _potential_heights(sys.G, report.x1, report.x2)
    scale = 1 + abs(float(G1)) + abs(float(G2))
    if abs(float(G1 - G2)) <= DEFAULT_D_TOL * scale:
        raise PreconditionError(
            "G(x1) < G(x2)",
            "the potentials already balance; no F-deformation is needed "
            "(deform_g returns such a system unchanged)",
        )
    if G1 > G2:
        raise PreconditionError(
            "G(x1) < G(x2)",
            f"G(x1)={float(G1):.6g} exceeds G(x2)={float(G2):.6g}; argument "
            "rescaling can only move the negative zero inward, so this shape "
            "needs the potential rebalancing deform_g instead",
        )
    x2_star = _matched_negative_zero(sys.G, report.x2, G1)
    lam = report.x2 / x2_star  # = |x2| / |x2*| > 1
    deformed = LienardSystem.from_F(NegHalfArgScale(sys.F, lam), sys.g)
    certificate = analyze(deformed)
    if certificate.verdict is not Verdict.UNIQUE_STABLE_CYCLE:
        raise LienardError(
            "friction-argument rescaling failed to certify a unique stable "
            f"cycle: verdict {certificate.verdict.value}"
        )
    return DeformOutcome(system=deformed, parameter=lam, certificate=certificate)


# ---------------------------------------------------------------------------
# polynomial slope machinery


def _require_odd_positive(P: Polynomial, who: str) -> None:
    if P.degree < 3 or P.degree % 2 == 0:
        raise PreconditionError(
            "odd degree >= 3",
            f"{who} needs an odd-degree polynomial of degree at least 3, "
            f"got degree {P.degree}",
        )
    if not Fraction(P.coeffs[-1]) > 0:
        raise PreconditionError(
            "positive leading coefficient",
            f"{who} got leading coefficient {float(P.coeffs[-1]):.6g}",
        )


def _refined_root_extremum(polys: tuple[Polynomial, ...], side: int) -> float:
    """Outermost root of any of `polys` on the given side of 0 (else 0.0).

    ``side=+1`` returns the largest positive root, ``side=-1`` the smallest
    negative one.  Roots exactly at 0 (straddling intervals) are ignored.
    """
    best = 0.0
    for q in polys:
        if q.degree < 1:
            continue
        for iv in isolate_roots(Poly(q)):
            if side > 0 and iv.lo > 0:
                best = max(best, _refine_or_mid(q, iv, 1 + iv.mid))
            elif side < 0 and iv.hi < 0:
                best = min(best, _refine_or_mid(q, iv, 1 - iv.mid))
    return best


def _refine_or_mid(q: Polynomial, iv, scale: float) -> float:
    """Refined root midpoint, falling back to the coarse one.

    Refinement re-isolates inside a padded interval and can pick up a
    neighbouring root when two roots sit closer together than the pad
    (coefficients spanning hundreds of orders of magnitude can park a root
    within a float ulp of zero).  The coarse midpoint is still inside the
    isolating interval, and every consumer here only grows its answer from
    extra candidate points, so falling back keeps the bounds valid.
    """
    try:
        return refine_root(Poly(q), iv, ROOT_REL_WIDTH * scale).mid
    except LienardError:
        return iv.mid


def poly_thresholds(P: Polynomial) -> tuple[float, Optional[float]]:
    """Curvature thresholds beyond which P is convex (x > 0) / concave (x < 0).

    Returns ``(xi_plus, xi_minus)``.  ``xi_plus`` is the largest positive
    root of P' or P'' (0.0 when neither has one): beyond it P is strictly
    increasing and convex, so no chord through the origin can touch the graph
    past ``xi_plus``.  ``xi_minus`` would be the mirror threshold below which
    P stays *above* every such chord; for an odd-degree polynomial with
    positive leading coefficient P'' tends to minus infinity as x goes to
    minus infinity, so that threshold never exists and the second entry is
    always None.  Callers must treat None as "no threshold on the negative
    side" and bound tangencies there explicitly (as
    :func:`tangent_slope_bound` does).

    Requires odd degree >= 3 and a positive leading coefficient.
    """
    _require_odd_positive(P, "poly_thresholds")
    dP = P.derivative()
    xi_plus = _refined_root_extremum((dP, dP.derivative()), +1)
    return xi_plus, None


def _tangency_slopes(P: Polynomial, dP: Polynomial, lo: float, hi: float) -> list[float]:
    """|P'(t)| at every root t of P(t) - t P'(t) inside (lo, hi).

    These are the slopes of lines through the origin tangent to the graph of
    P; the factor t = 0 (always a root, since P(0) = 0) is stripped first.
    """
    t_coeffs = [Fraction(a) for a in P.coeffs]
    for k, b in enumerate(dP.coeffs):
        t_coeffs[k + 1] -= Fraction(b)  # subtract x * P'(x)
    while len(t_coeffs) > 1 and t_coeffs[0] == 0:
        t_coeffs.pop(0)  # strip the trivial tangency at the origin
    T = Polynomial(t_coeffs)
    if T.degree < 1:
        return []
    slopes = []
    for iv in isolate_roots(Poly(T), (lo, hi)):
        if iv.lo > 0 or iv.hi < 0:
            t = _refine_or_mid(T, iv, 1 + abs(iv.mid))
            slopes.append(abs(float(dP(t))))
    return slopes


def tangent_slope_bound(P: Polynomial) -> float:
    """Smallest certified slope lam such that P(x) - lam*x has the target signs.

    For P of odd degree >= 3 with positive leading coefficient and P(0) = 0,
    any ``lam`` strictly above the returned bound makes ``P(x) - lam*x``
    negative for all x in (0, x1) and positive for all x in (x2, 0), where
    x1 > 0 > x2 are the outer sign changes of the deformed polynomial.  The
    bound is the supremum of the secant slope P(x)/x over both punctured
    neighborhoods of the origin, computed exactly from:

    * the slope at the origin, P'(0) (the secant's limit as x -> 0);
    * the slopes |P'(t)| of every line through the origin tangent to the
      graph at some t between the origin and the curvature threshold;
    * the endpoint secants P(xi)/xi at the thresholds themselves.

    Beyond the positive threshold ``xi_plus`` the polynomial is convex and
    increasing, so the secant there is dominated by the endpoint value;
    below the mirrored negative threshold it is concave and the same
    domination holds with signs flipped.  Slopes that are not binding
    (negative secant values) are clamped at zero, so the bound is never
    negative; it may therefore be slightly conservative, which is harmless
    because callers add a safety margin anyway.
    """
    _require_odd_positive(P, "tangent_slope_bound")
    if Fraction(P.coeffs[0]) != 0:
        raise PreconditionError(
            "P(0) == 0", f"constant term {float(P.coeffs[0]):.6g}"
        )
    dP = P.derivative()
    xi_plus, _ = poly_thresholds(P)
    eta_minus = _refined_root_extremum((dP, dP.derivative()), -1)
    bound = max(0.0, float(dP(0.0)))
    if xi_plus > 0.0:
        pad = 1e-9 * (1.0 + xi_plus)
        bound = max(bound, *[0.0] + _tangency_slopes(P, dP, 0.0, xi_plus + pad))
        bound = max(bound, float(P(xi_plus)) / xi_plus)
    if eta_minus < 0.0:
        pad = 1e-9 * (1.0 - eta_minus)
        bound = max(bound, *[0.0] + _tangency_slopes(P, dP, eta_minus - pad, 0.0))
        bound = max(bound, float(P(eta_minus)) / eta_minus)
    return bound


def poly_deform(
    P: Polynomial, g: ScalarFn, margin: float = DEFAULT_MARGIN
) -> DeformOutcome:
    """Subtract a linear term from P so the system F = P - lam*x certifies.

    ``lam`` starts at ``tangent_slope_bound(P) * (1 + margin) + margin`` (the
    additive term keeps lam strictly positive even when the bound is zero)
    and is bumped by 0.1% up to 8 times if the sign-pattern check declines to
    certify, which can happen when a tangency is so near the bound that the
    numerical root isolation cannot separate it.  Once (C) certifies, g is
    rebalanced via :func:`balance_g` and the full analysis must conclude
    ``UniqueStableCycle``; otherwise DeformRetriesExhaustedError reports
    every attempted slope.

    Requires P of odd degree >= 3, positive leading coefficient, P(0) = 0,
    margin > 0, and g satisfying the sign/growth hypothesis (B).
    """
    _require_odd_positive(P, "poly_deform")
    if Fraction(P.coeffs[0]) != 0:
        raise PreconditionError(
            "P(0) == 0", f"constant term {float(P.coeffs[0]):.6g}"
        )
    if not margin > 0:
        raise PreconditionError("margin > 0", f"got {margin}")
    lam = tangent_slope_bound(P) * (1.0 + margin) + margin
    rB = check_B(LienardSystem.from_F(SubtractLinear(Poly(P), lam), g))
    if rB.status is not Tristate.HOLDS:
        raise PreconditionError(
            "g satisfies (B)", rB.note or "sign/growth check failed"
        )
    attempts = []
    for _ in range(MAX_SLOPE_RETRIES + 1):
        F = SubtractLinear(Poly(P), lam)
        candidate = LienardSystem.from_F(F, g)
        rC = check_C(candidate)
        if rC.status is not Tristate.HOLDS:
            attempts.append((lam, rC.note or "sign pattern (C) not certified"))
            lam *= RETRY_FACTOR
            continue
        x1 = 0.5 * (rC.witnesses["x1"][0] + rC.witnesses["x1"][1])
        x2 = 0.5 * (rC.witnesses["x2"][0] + rC.witnesses["x2"][1])
        g_new, _mu = balance_g(g, x2, x1)
        certificate = analyze(LienardSystem.from_F(F, g_new))
        if certificate.verdict is Verdict.UNIQUE_STABLE_CYCLE:
            return DeformOutcome(
                system=LienardSystem.from_F(F, g_new),
                parameter=lam,
                certificate=certificate,
            )
        attempts.append((lam, f"verdict {certificate.verdict.value}"))
        lam *= RETRY_FACTOR
    detail = "; ".join(f"lam={a:.12g}: {why}" for a, why in attempts)
    raise DeformRetriesExhaustedError(
        f"no slope in {len(attempts)} attempts certified a unique stable "
        f"cycle ({detail})"
    )


# ---------------------------------------------------------------------------
# constant friction shift


def friction_shift(f: ScalarFn, g: ScalarFn) -> DeformOutcome:
    """Subtract a constant from f until the sign pattern (C) certifies.

    The shift starts at ``max(f(0), 0) + 1`` (enough to make the friction
    negative at the origin) and doubles until the shifted system certifies
    (C); bisection then trims the bracket for 20 steps and the *certifying*
    endpoint is kept, so the reported shift always passes.  g is rebalanced
    at the certified friction zeros and the final analysis must conclude
    ``UniqueStableCycle``.

    Requires g to satisfy the sign/growth hypothesis (B); raises
    DeformRetriesExhaustedError when no shift within the doubling budget
    certifies.
    """

    def candidate(lam: float) -> LienardSystem:
        return LienardSystem.from_f(SubtractConst(f, lam), g)

    def passes(lam: float) -> bool:
        try:
            return check_C(candidate(lam)).status is Tristate.HOLDS
        except LienardError:
            return False

    lam0 = max(float(f(0.0)), 0.0) + 1.0
    rB = check_B(candidate(lam0))
    if rB.status is not Tristate.HOLDS:
        # The shift itself forces xF < 0 near 0, so a (B) failure here can
        # only come from the restoring force.
        raise PreconditionError(
            "g satisfies (B)", rB.note or "sign/growth check failed"
        )
    if passes(lam0):
        lo, hi = 0.0, lam0
    else:
        lo, hi = lam0, None
        lam = lam0
        for _ in range(MAX_SHIFT_DOUBLINGS):
            lam *= 2.0
            if passes(lam):
                hi = lam
                break
            lo = lam
        if hi is None:
            raise DeformRetriesExhaustedError(
                f"no friction shift up to {lam:.6g} made the sign pattern "
                "(C) certify"
            )
    for _ in range(SHIFT_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    shift = hi  # the certifying endpoint of the final bracket
    rC = check_C(candidate(shift))
    x1 = 0.5 * (rC.witnesses["x1"][0] + rC.witnesses["x1"][1])
    x2 = 0.5 * (rC.witnesses["x2"][0] + rC.witnesses["x2"][1])
    g_new, _mu = balance_g(g, x2, x1)
    final = LienardSystem.from_f(SubtractConst(f, shift), g_new)
    certificate = analyze(final)
    if certificate.verdict is not Verdict.UNIQUE_STABLE_CYCLE:
        raise DeformRetriesExhaustedError(
            f"shift {shift:.6g} certifies (C) but the full analysis "
            f"concluded {certificate.verdict.value}"
        )
    return DeformOutcome(system=final, parameter=shift, certificate=certificate)


# ---------------------------------------------------------------------------
# structural robustness check


def center_perturbation_check(
    g: ScalarFn,
    F: ScalarFn,
    x2: float,
    x1: float,
    *,
    tol: float = DEFAULT_D_TOL,
) -> dict:
    """Check the structural conditions for perturbation-proof uniqueness.

    For a family obtained by small perturbations around the system
    (g, F) with friction zeros x2 < 0 < x1, a unique closed orbit survives
    when the unperturbed data satisfy, simultaneously:

    * ``potential_balance``   -- G(x1) = G(x2) within `tol` (relative);
    * ``potential_grows``     -- G(x) -> +inf as x -> +/-inf (exact leading
      signs of the potential's pieces);
    * ``F_zero_at_x1`` / ``F_zero_at_x2`` -- F vanishes at the declared
      zeros (relative to the local coefficient scale);
    * ``friction_negative_near_zero`` -- x*F(x) < 0 on a punctured
      neighborhood of the origin (exact lowest-order test);
    * ``F_monotone_outside``  -- F is nondecreasing outside [x2, x1] and
      strictly climbing at the sampled far points.

    Returns ``{"ok": bool, "failing": [names...], "numbers": {...}}`` where
    `failing` lists every condition that did not verify (empty when ok) and
    `numbers` records the measured quantities behind the decisions.
    """
    if not (x2 < 0.0 < x1):
        raise PreconditionError("x2 < 0 < x1", f"got x2={x2}, x1={x1}")
    failing: list[str] = []
    numbers: dict = {}

    G = g.primitive()
    G1 = _exact_piecewise(G, x1)
    G2 = _exact_piecewise(G, x2)
    numbers["G_x1"] = float(G1)
    numbers["G_x2"] = float(G2)
    balance_scale = 1.0 + abs(float(G1)) + abs(float(G2))
    if abs(float(G1 - G2)) > tol * balance_scale:
        failing.append("potential_balance")

    Gneg, Gpos = G.pieces()
    grows_right = Gpos.degree >= 1 and Fraction(Gpos.coeffs[-1]) > 0
    lead_neg = Fraction(Gneg.coeffs[-1])
    grows_left = Gneg.degree >= 1 and (
        lead_neg > 0 if Gneg.degree % 2 == 0 else lead_neg < 0
    )
    if not (grows_right and grows_left):
        failing.append("potential_grows")

    Fneg, Fpos = F.pieces()
    for name, piece, x in (("F_zero_at_x1", Fpos, x1), ("F_zero_at_x2", Fneg, x2)):
        value = float(piece(x))
        numbers[name.replace("F_zero_at", "F")] = value
        local_scale = 1.0 + piece.abs_sum_on(abs(x))
        if abs(value) > F_ZERO_REL_TOL * local_scale:
            failing.append(name)

    if not _F_negative_near_zero(F):
        failing.append("friction_negative_near_zero")

    f = F.derivative()
    m = 1.0 + max(default_range(f)[1], abs(x1), abs(x2))
    numbers["monotone_sample_radius"] = m
    pad_r = 1e-9 * (1.0 + abs(x1))
    pad_l = 1e-9 * (1.0 + abs(x2))
    fneg, fpos = f.pieces()
    ok_right, _ = _no_sign_change_on(f, x1 + pad_r, m)
    ok_left, _ = _no_sign_change_on(f, -m, x2 - pad_l)
    if not (ok_right and ok_left and float(fpos(m)) > 0 and float(fneg(-m)) > 0):
        failing.append("F_monotone_outside")

    return {"ok": not failing, "failing": failing, "numbers": numbers}
