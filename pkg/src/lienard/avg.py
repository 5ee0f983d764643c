"""First-order averaging for weakly damped oscillators x'' + f(x)x' + x = 0.

For small friction the radius of an orbit changes per revolution by

    r(2*pi) - r(0)  ~  -Fbar(r),    Fbar(r) = integral_0^{2pi} r f(r cos t) sin^2 t dt,

so isolated positive roots of the averaged amplitude polynomial Fbar predict
limit-cycle radii, with the sign of Fbar' at the root deciding stability.
Only even powers of f contribute: the moment

    I_{2k} = integral_0^{2pi} sin^2 t cos^{2k} t dt = 2*pi*(C(2k,k)/4^k - C(2k+2,k+1)/4^{k+1})

is an exact rational multiple of pi, while odd powers of cos integrate to
zero against sin^2 over a full period.  A degree-6 even friction whose
products a_{2k} I_{2k} are -4/81, 49/81, -14/9, 1 gives

    Fbar(r) = r (r^2 - 1/9)(r^2 - 4/9)(r^2 - 1),

three simple positive roots 1/3, 2/3, 1 and therefore three limit cycles for
small friction scales - the stock counterexample to "at most one cycle"
intuitions, built here by `duff_levinson_system`.

Orientation note: the return map's displacement per revolution is -eps*Fbar
to first order (measured against the detector and frozen): Fbar' > 0 at a
root means the displacement decreases through zero, i.e. a stable cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cycles import Stability
from .errors import DegenerateAmplitudeError, LienardError, PreconditionError
from .funcs import LienardSystem, Poly, Polynomial, ScalarFn, poly_fn
from .roots import isolate_roots, refine_root

#: Largest supported moment index (f of degree up to 60), far beyond need.
MAX_MOMENT_INDEX = 30


def wallis_pi_multiple(k: int) -> Fraction:
    """Exact rational q_k with I_{2k} = q_k * pi."""
    if not (0 <= int(k) <= MAX_MOMENT_INDEX):
        raise PreconditionError(
            f"0 <= k <= {MAX_MOMENT_INDEX}", f"got k={k!r}"
        )
    k = int(k)
    return 2 * (
        Fraction(math.comb(2 * k, k), 4**k)
        - Fraction(math.comb(2 * k + 2, k + 1), 4 ** (k + 1))
    )


def wallis_moment(k: int) -> float:
    """I_{2k} = integral over one period of sin^2 t cos^{2k} t dt."""
    return float(wallis_pi_multiple(k)) * math.pi


@dataclass(frozen=True)
class AveragedAmplitude:
    """The averaged amplitude polynomial Fbar and the moments that built it.

    `fbar` has exact zeros at every even index: only even powers a_{2k} of
    the friction contribute, each mapping to a_{2k} * I_{2k} * r^{2k+1}.
    `moments_used` lists (k, I_{2k}) for the nonzero contributions.
    """

    fbar: Polynomial
    moments_used: tuple[tuple[int, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "fbar": list(self.fbar.as_floats()),
            "moments_used": [[k, moment] for k, moment in self.moments_used],
        }


def _as_polynomial(f: Union[Polynomial, ScalarFn]) -> Polynomial:
    if isinstance(f, Polynomial):
        return f
    if isinstance(f, Poly):
        return f.poly
    if isinstance(f, ScalarFn):
        neg, pos = f.pieces()
        if neg.coeffs == pos.coeffs:
            return pos
        raise PreconditionError(
            "f is a single polynomial",
            "averaging needs one polynomial on the whole line, "
            f"got different pieces from {f!r}",
        )
    raise PreconditionError("f is a polynomial", f"got {f!r}")


def averaged_amplitude(f: Union[Polynomial, ScalarFn]) -> AveragedAmplitude:
    """Averaged amplitude Fbar(r) = sum over even 2k of a_{2k} I_{2k} r^{2k+1}.

    Odd powers of f contribute nothing; the rational part of each moment is
    carried exactly so a coefficient only rounds when the final product with
    pi is formed.
    """
    poly = _as_polynomial(f)
    coeffs = [0.0] * (poly.degree + 2 if poly.degree >= 0 else 1)
    moments = []
    for index, a in enumerate(poly.coeffs):
        if index % 2 != 0 or a == 0:
            continue
        k = index // 2
        coeffs[index + 1] = float(Fraction(a) * wallis_pi_multiple(k)) * math.pi
        moments.append((k, wallis_moment(k)))
    return AveragedAmplitude(fbar=Polynomial(coeffs), moments_used=tuple(moments))


def predict_cycles(f: Union[Polynomial, ScalarFn]) -> list[tuple[float, Stability]]:
    """Predicted (radius, stability) pairs from the simple positive roots of Fbar.

    Stability: Fbar' > 0 at the root is stable, Fbar' < 0 unstable (frozen
    against the detector; see the module orientation note).  Non-simple
    positive roots carry no first-order verdict and are omitted.  An
    identically zero Fbar (e.g. purely odd friction) carries no amplitude
    information at first order at all.
    """
    amp = averaged_amplitude(f)
    if amp.fbar.degree < 0:
        raise DegenerateAmplitudeError(
            "averaged amplitude is identically zero; "
            "first-order averaging predicts nothing for this friction"
        )
    derivative = amp.fbar.derivative()
    predictions = []
    for interval in isolate_roots(Poly(amp.fbar)):
        if interval.mid <= 0.0 or not interval.transversal:
            continue
        tight = refine_root(Poly(amp.fbar), interval, width=1e-12 * (1.0 + interval.mid))
        radius = tight.mid
        slope = float(derivative(radius))
        if slope == 0.0:
            raise LienardError(
                f"transversal root at {radius!r} evaluated to zero slope"
            )
        predictions.append(
            (radius, Stability.STABLE if slope > 0.0 else Stability.UNSTABLE)
        )
    predictions.sort(key=lambda pair: pair[0])
    return predictions


# ---------------------------------------------------------------------------
# the three-cycle counterexample family

#: Products a_{2k} * I_{2k} defining the even part of the friction.
_COUNTEREXAMPLE_PRODUCTS = (
    Fraction(-4, 81),
    Fraction(49, 81),
    Fraction(-14, 9),
    Fraction(1),
)

#: Default odd-term coefficients: A*x + B*x^3 added to f.  These defaults
#: tilt the friction just enough that its primitive F keeps exactly three
#: zeros x2 < 0 < x1 but with |x2| > x1, so the potential-balance condition
#: G(x1) = G(x2) fails while the cycle count stays three.
DEFAULT_TILT_A = 1.0 / (100.0 * math.pi)
DEFAULT_TILT_B = 2.0 / math.pi


def duff_levinson_f(
    eps: float,
    A: Optional[float] = None,
    B: Optional[float] = None,
) -> ScalarFn:
    """Friction eps*(sum a_{2k} x^{2k} + A x + B x^3) of the three-cycle example.

    The even coefficients are a_{2k} = (product_k / q_k) / pi with the exact
    rational products -4/81, 49/81, -14/9, 1 and I_{2k} = q_k*pi, so that
    averaging returns Fbar(r) = eps-independent r(r^2-1/9)(r^2-4/9)(r^2-1)
    up to rounding.  A and B default to 1/(100 pi) and 2/pi.
    """
    if A is None:
        A = DEFAULT_TILT_A
    if B is None:
        B = DEFAULT_TILT_B
    coeffs = [0.0] * 7
    for k, product in enumerate(_COUNTEREXAMPLE_PRODUCTS):
        coeffs[2 * k] = float(product / wallis_pi_multiple(k)) / math.pi
    coeffs[1] += float(A)
    coeffs[3] += float(B)
    return poly_fn(*(float(eps) * c for c in coeffs))


def duff_levinson_system(
    eps: float,
    A: Optional[float] = None,
    B: Optional[float] = None,
) -> LienardSystem:
    """Three-cycle counterexample system: x'' + duff_levinson_f(...) x' + x = 0.

    For small eps > 0 it has exactly three limit cycles with radii near 1/3,
    2/3 and 1 (stable/unstable/stable); eps = 0 degenerates to the linear
    center.  With the default tilt (A, B) the friction primitive has three
    transversal zeros x2 in [-1.130, -1.129] and x1 in [0.247, 0.248] with
    unbalanced potential G(x1) < G(x2), so uniqueness criteria relying on
    that balance correctly refuse to apply.
    """
    return LienardSystem.from_f(duff_levinson_f(eps, A, B), poly_fn(0.0, 1.0))
