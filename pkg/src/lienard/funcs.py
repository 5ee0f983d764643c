"""Scalar functions of the Lienard plane: polynomials plus the piecewise/affine
transforms used by the uniqueness-forcing deformations, and the system container.

Every function here is piecewise polynomial with a single breakpoint at x = 0,
which keeps evaluation, differentiation, antidifferentiation, and root isolation
exact (rational arithmetic) or symbolic throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import LienardError, UnsupportedVariantError

Number = Union[int, float, Fraction]


def _is_exact(c: Number) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


def _div(c: Number, n: int) -> Number:
    if _is_exact(c):
        return Fraction(c, n)
    return c / n


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, coefficients ascending by degree.

    Coefficients may be int, Fraction, or float; arithmetic preserves exactness
    when all inputs are exact. The zero polynomial is stored as (0,).
    """

    coeffs: tuple

    def __init__(self, coeffs):
        cs = list(coeffs)
        for c in cs:
            if isinstance(c, float) and not math.isfinite(c):
                raise LienardError("non-finite polynomial coefficient")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial((0,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def primitive(self) -> "Polynomial":
        if self.is_zero:
            return Polynomial((0,))
        return Polynomial((0,) + tuple(_div(c, k + 1) for k, c in enumerate(self.coeffs)))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def scale(self, k: Number) -> "Polynomial":
        return Polynomial(tuple(k * c for c in self.coeffs))

    def scale_arg(self, lam: Number) -> "Polynomial":
        """p(lam * x) as a polynomial in x."""
        out, powl = [], 1
        for c in self.coeffs:
            out.append(c * powl)
            powl = powl * lam
        return Polynomial(tuple(out))

    def as_floats(self) -> tuple:
        return tuple(float(c) for c in self.coeffs)

    def cauchy_bound(self) -> float:
        """All real roots lie inside [-bound, bound].

        Minimum of the Cauchy bound 1 + max|c_i/c_n| and the Fujiwara bound
        2 max_k |c_k/c_n|^(1/(n-k)), computed in log scale so that tiny
        leading coefficients cannot overflow.
        """
        if self.degree < 1:
            return 1.0
        n = self.degree
        lead = abs(float(self.coeffs[-1]))
        cauchy = math.inf
        biggest = max(abs(float(c)) for c in self.coeffs[:-1])
        if biggest == 0.0:
            return 1.0
        try:
            cauchy = 1.0 + biggest / lead
        except OverflowError:
            pass
        log_lead = math.log(lead)
        fuji_log = max(
            (math.log(abs(float(c))) - log_lead) / (n - k)
            for k, c in enumerate(self.coeffs[:-1])
            if c != 0
        )
        fujiwara = 2.0 * math.exp(min(fuji_log, 690.0))
        return min(cauchy, max(fujiwara, 1e-300))

    def abs_sum_on(self, r: float) -> float:
        """Upper bound for |p| on [-r, r]: sum |c_i| r^i (inf on overflow)."""
        total = 0.0
        for k, c in enumerate(self.coeffs):
            try:
                total += abs(float(c)) * r**k
            except OverflowError:
                return math.inf
        return total


class ScalarFn:
    """A real function of one real variable, as a small symbolic tree."""

    def __call__(self, x):
        raise NotImplementedError

    def primitive(self) -> "ScalarFn":
        raise NotImplementedError

    def derivative(self) -> "ScalarFn":
        raise NotImplementedError

    def pieces(self) -> tuple[Polynomial, Polynomial]:
        """Collapse the tree to (polynomial for x < 0, polynomial for x >= 0)."""
        raise NotImplementedError

    @property
    def is_piecewise(self) -> bool:
        neg, pos = self.pieces()
        return neg.coeffs != pos.coeffs

    def _check_x(self, x):
        if isinstance(x, float) and not math.isfinite(x):
            raise LienardError("non-finite evaluation point")


@dataclass(frozen=True)
class Poly(ScalarFn):
    poly: Polynomial

    def __call__(self, x):
        self._check_x(x)
        return self.poly(x)

    def primitive(self) -> ScalarFn:
        return Poly(self.poly.primitive())

    def derivative(self) -> ScalarFn:
        return Poly(self.poly.derivative())

    def pieces(self):
        return self.poly, self.poly


def _positive_lambda(lam):
    if not (float(lam) > 0):
        raise LienardError(f"lambda must be positive, got {lam}")


@dataclass(frozen=True)
class NegHalfFactor(ScalarFn):
    """base(x) for x >= 0, lam * base(x) for x < 0."""

    base: ScalarFn
    lam: Number

    def __post_init__(self):
        _positive_lambda(self.lam)

    def __call__(self, x):
        self._check_x(x)
        v = self.base(x)
        return self.lam * v if x < 0 else v

    def primitive(self) -> ScalarFn:
        # Valid because the primitive of the base vanishes at 0.
        return NegHalfFactor(self.base.primitive(), self.lam)

    def derivative(self) -> ScalarFn:
        return NegHalfFactor(self.base.derivative(), self.lam)

    def pieces(self):
        neg, pos = self.base.pieces()
        return neg.scale(self.lam), pos


@dataclass(frozen=True)
class NegHalfArgScale(ScalarFn):
    """base(x) for x >= 0, base(lam * x) for x < 0."""

    base: ScalarFn
    lam: Number

    def __post_init__(self):
        _positive_lambda(self.lam)

    def __call__(self, x):
        self._check_x(x)
        return self.base(self.lam * x) if x < 0 else self.base(x)

    def primitive(self) -> ScalarFn:
        raise UnsupportedVariantError("primitive", "NegHalfArgScale")

    def derivative(self) -> ScalarFn:
        inner = NegHalfArgScale(self.base.derivative(), self.lam)
        return NegHalfFactor(inner, self.lam)

    def pieces(self):
        neg, pos = self.base.pieces()
        return neg.scale_arg(self.lam), pos


@dataclass(frozen=True)
class SubtractConst(ScalarFn):
    """base(x) - c."""

    base: ScalarFn
    c: Number

    def __call__(self, x):
        self._check_x(x)
        return self.base(x) - self.c

    def primitive(self) -> ScalarFn:
        return SubtractLinear(self.base.primitive(), self.c)

    def derivative(self) -> ScalarFn:
        return self.base.derivative()

    def pieces(self):
        neg, pos = self.base.pieces()
        shift = Polynomial((self.c,))
        return neg - shift, pos - shift


@dataclass(frozen=True)
class SubtractLinear(ScalarFn):
    """base(x) - c*x."""

    base: ScalarFn
    c: Number

    def __call__(self, x):
        self._check_x(x)
        return self.base(x) - self.c * x

    def primitive(self) -> ScalarFn:
        # Subtracting c*x^2/2 is not one of the transforms; fold into the
        # polynomial when possible.
        p = self.base.primitive()
        if isinstance(p, Poly):
            return Poly(p.poly - Polynomial((0, 0, _div(self.c, 2))))
        raise UnsupportedVariantError("primitive", "SubtractLinear over a piecewise base")

    def derivative(self) -> ScalarFn:
        return SubtractConst(self.base.derivative(), self.c)

    def pieces(self):
        neg, pos = self.base.pieces()
        shift = Polynomial((0, self.c))
        return neg - shift, pos - shift


def poly_fn(*coeffs) -> Poly:
    """Shorthand: poly_fn(c0, c1, ...) -> Poly."""
    return Poly(Polynomial(coeffs))


# JSON codec for ScalarFn trees; this is the on-disk system-spec vocabulary.

def fn_to_dict(fn: ScalarFn) -> dict:
    if isinstance(fn, Poly):
        return {"poly": [c if isinstance(c, int) else float(c) for c in fn.poly.coeffs]}
    if isinstance(fn, NegHalfFactor):
        return {"neg_factor": {"lambda": float(fn.lam), "base": fn_to_dict(fn.base)}}
    if isinstance(fn, NegHalfArgScale):
        return {"neg_argscale": {"lambda": float(fn.lam), "base": fn_to_dict(fn.base)}}
    if isinstance(fn, SubtractConst):
        return {"sub_const": {"c": float(fn.c), "base": fn_to_dict(fn.base)}}
    if isinstance(fn, SubtractLinear):
        return {"sub_linear": {"c": float(fn.c), "base": fn_to_dict(fn.base)}}
    raise UnsupportedVariantError("fn_to_dict", type(fn).__name__)


def fn_from_dict(d: dict) -> ScalarFn:
    if not isinstance(d, dict) or len(d) != 1:
        raise LienardError(f"malformed function spec: {d!r}")
    (key, body), = d.items()
    if key == "poly":
        if not isinstance(body, list) or not all(isinstance(c, (int, float)) for c in body):
            raise LienardError("poly spec requires a list of numbers")
        return Poly(Polynomial(body))
    if key in ("neg_factor", "neg_argscale"):
        cls = NegHalfFactor if key == "neg_factor" else NegHalfArgScale
        return cls(fn_from_dict(body["base"]), body["lambda"])
    if key in ("sub_const", "sub_linear"):
        cls = SubtractConst if key == "sub_const" else SubtractLinear
        return cls(fn_from_dict(body["base"]), body["c"])
    raise LienardError(f"unknown function variant: {key!r}")


_CONTINUITY_TOL = 1e-10


@dataclass(frozen=True)
class LienardSystem:
    """The planar system x' = y - F(x), y' = -g(x), with F, G primitives
    vanishing at 0. `spec_kind` records whether the user supplied f or F."""

    f: ScalarFn
    F: ScalarFn
    g: ScalarFn
    G: ScalarFn
    spec_kind: str  # "f" or "F"

    @classmethod
    def from_f(cls, f: ScalarFn, g: ScalarFn) -> "LienardSystem":
        sys = cls(f=f, F=f.primitive(), g=g, G=g.primitive(), spec_kind="f")
        sys._validate()
        return sys

    @classmethod
    def from_F(cls, F: ScalarFn, g: ScalarFn) -> "LienardSystem":
        sys = cls(f=F.derivative(), F=F, g=g, G=g.primitive(), spec_kind="F")
        sys._validate()
        return sys

    def _validate(self):
        Fneg, Fpos = self.F.pieces()
        gneg, gpos = self.g.pieces()
        scale = 1.0 + abs(float(Fpos(0.0)))
        if abs(float(Fpos(0.0))) > _CONTINUITY_TOL * scale or abs(float(Fneg(0.0))) > _CONTINUITY_TOL * scale:
            raise LienardError("F must vanish at 0")
        if abs(float(gneg(0.0)) - float(gpos(0.0))) > _CONTINUITY_TOL * (1.0 + abs(float(gpos(0.0)))):
            raise LienardError("g must be continuous at 0")

    def to_dict(self) -> dict:
        if self.spec_kind == "f":
            return {"f": fn_to_dict(self.f), "g": fn_to_dict(self.g)}
        return {"F": fn_to_dict(self.F), "g": fn_to_dict(self.g)}

    @classmethod
    def from_dict(cls, d: dict) -> "LienardSystem":
        if not isinstance(d, dict) or "g" not in d:
            raise LienardError("system spec requires a 'g' entry")
        has_f, has_F = "f" in d, "F" in d
        if has_f == has_F:
            raise LienardError("system spec requires exactly one of 'f' or 'F'")
        g = fn_from_dict(d["g"])
        if has_f:
            return cls.from_f(fn_from_dict(d["f"]), g)
        return cls.from_F(fn_from_dict(d["F"]), g)


def van_der_pol(mu: float = 1.0) -> LienardSystem:
    """x'' + mu (x^2 - 1) x' + x = 0."""
    return LienardSystem.from_f(poly_fn(-mu, 0, mu), poly_fn(0, 1))
