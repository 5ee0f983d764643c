"""Certified real-root isolation via Sturm sequences in exact rational arithmetic.

Floats are dyadic rationals, so every input converts to Fraction exactly; the
chains are normalized to primitive integer polynomials (positive scalings only,
which preserve all sign variations). Root counts are therefore exact, and
isolating intervals are refined by count-based bisection, which is robust even
at non-transversal (even-multiplicity) zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import EndpointRootError, LienardError, ZeroPolynomialError
from .funcs import Poly, Polynomial, ScalarFn


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval for one distinct real root.

    `sign_change` holds the function's sign just below lo and just above hi;
    `transversal` means the sign changes and the derivative at the root clears
    the relative tolerance (even-multiplicity zeros report False).
    """

    lo: float
    hi: float
    transversal: bool
    sign_change: tuple[int, int]

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class SturmSequence:
    """Sturm chain of the squarefree part: [p, p', -rem(...), ...]."""

    polys: tuple[Polynomial, ...]


TRANSVERSALITY_REL_TOL = 1e-9

_Fn = Union[ScalarFn, Polynomial]


def _as_fn(fn: _Fn) -> ScalarFn:
    return Poly(fn) if isinstance(fn, Polynomial) else fn


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _to_int_coeffs(coeffs: Sequence) -> list[int]:
    """Scale a rational polynomial by a positive constant to primitive ints."""
    fracs = [_frac(c) for c in coeffs]
    while len(fracs) > 1 and fracs[-1] == 0:
        fracs.pop()
    den = 1
    for c in fracs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in fracs]
    content = 0
    for c in ints:
        content = math.gcd(content, abs(c))
    if content > 1:
        ints = [c // content for c in ints]
    return ints


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and any(c != 0 for c in r):
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        k = len(r) - 1 - db
        coef = r[-1] / lb
        q[k] = coef
        for i in range(len(b)):
            r[i + k] -= coef * b[i]
        r.pop()
    while len(r) > 1 and r[-1] == 0:
        r.pop()
    if not r:
        r = [Fraction(0)]
    return q, r


def _deriv_int(c: list[int]) -> list[int]:
    return [k * c[k] for k in range(1, len(c))] or [0]


def _squarefree_int(coeffs: list[int]) -> list[int]:
    d = _deriv_int(coeffs)
    if d == [0]:
        return coeffs
    a = [Fraction(c) for c in coeffs]
    b = [Fraction(c) for c in d]
    # gcd(p, p') by Euclid, then exact division.
    while any(c != 0 for c in b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
        if len(b) == 1 and b[0] == 0:
            break
    g = a
    if len(g) == 1:
        return coeffs
    q, _ = _poly_divmod([Fraction(c) for c in coeffs], g)
    return _to_int_coeffs(q)


def _sturm_chain_int(coeffs: list[int]) -> list[list[int]]:
    p0 = _squarefree_int(coeffs)
    chain = [p0]
    if len(p0) > 1:
        chain.append(_to_int_coeffs(_deriv_int(p0)))
        while len(chain[-1]) > 1:
            a = [Fraction(c) for c in chain[-2]]
            b = [Fraction(c) for c in chain[-1]]
            _, r = _poly_divmod(a, b)
            if len(r) == 1 and r[0] == 0:
                break
            chain.append(_to_int_coeffs([-c for c in r]))
    return chain


def _sign_at(int_coeffs: list[int], x: Fraction) -> int:
    """Exact sign of an integer polynomial at a rational point.

    Uses sign(p(n/d)) = sign(d^deg * p(n/d)), an integer Horner evaluation.
    """
    num, den = x.numerator, x.denominator
    deg = len(int_coeffs) - 1
    total = 0
    for k in range(deg, -1, -1):
        total = total * num + int_coeffs[k] * den ** (deg - k)
    return (total > 0) - (total < 0)


def _variations(chain: list[list[int]], x: Fraction) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_sequence(p: Polynomial) -> SturmSequence:
    """Canonical Sturm chain of the squarefree part of p."""
    if p.is_zero:
        raise ZeroPolynomialError("Sturm chain of the zero polynomial")
    chain = _sturm_chain_int(_to_int_coeffs(p.coeffs))
    return SturmSequence(tuple(Polynomial(c) for c in chain))


def _nudged_nonroot(chain: list[list[int]], x: Fraction) -> Fraction:
    if _sign_at(chain[0], x) != 0:
        return x
    for shift in (48, 44):
        delta = Fraction(1, 2**shift) * (1 + abs(x))
        if _sign_at(chain[0], x + delta) != 0:
            return x + delta
    raise EndpointRootError(f"endpoint {float(x):.17g} is a root even after nudging")


def count_roots(s: SturmSequence, a: float, b: float) -> int:
    """Number of distinct real roots in (a, b]."""
    if not a < b:
        raise LienardError(f"count_roots requires a < b, got {a}, {b}")
    chain = [_to_int_coeffs(p.coeffs) for p in s.polys]
    fa = _nudged_nonroot(chain, _frac(a))
    fb = _nudged_nonroot(chain, _frac(b))
    return _variations(chain, fa) - _variations(chain, fb)


def _midpoint_off_root(chain, lo: Fraction, hi: Fraction) -> Fraction:
    m = (lo + hi) / 2
    if _sign_at(chain[0], m) != 0:
        return m
    for k in range(3, 20):
        m2 = m + (hi - lo) / 2**k
        if _sign_at(chain[0], m2) != 0:
            return m2
    raise LienardError("could not find a non-root subdivision point")


def _isolate_on_chain(chain, lo: Fraction, hi: Fraction, width: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating (lo, hi] intervals of chain[0] over (lo, hi]."""
    out = []
    vlo, vhi = _variations(chain, lo), _variations(chain, hi)
    stack = [(lo, hi, vlo, vhi)]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            while b - a > width:
                m = _midpoint_off_root(chain, a, b)
                vm = _variations(chain, m)
                if va - vm == 1:
                    b, vb = m, vm
                else:
                    a, va = m, vm
            out.append((a, b))
            continue
        m = _midpoint_off_root(chain, a, b)
        vm = _variations(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.sort()
    return out


def _strip_root_at_zero(int_coeffs: list[int]) -> tuple[list[int], int]:
    m = 0
    c = list(int_coeffs)
    while len(c) > 1 and c[0] == 0:
        c.pop(0)
        m += 1
    return c, m


def _transversality_bound(dpoly: Polynomial, r: float) -> float:
    return TRANSVERSALITY_REL_TOL * (1.0 + dpoly.abs_sum_on(r))


def default_range(fn: _Fn) -> tuple[float, float]:
    """[-R, R] with R = 1 + max(1, Cauchy root bound over the pieces)."""
    neg, pos = _as_fn(fn).pieces()
    r = 1.0 + max(1.0, neg.cauchy_bound(), pos.cauchy_bound())
    return (-r, r)


def _piece_sign(piece: Polynomial, x: Fraction) -> int:
    return _sign_at(_to_int_coeffs(piece.coeffs), x)


def _emit(fn_piece_neg: Polynomial, fn_piece_pos: Polynomial, dneg: Polynomial, dpos: Polynomial,
          lo: Fraction, hi: Fraction, rmax: float) -> RootInterval:
    """Build a RootInterval with exact endpoint signs and the transversality flag."""
    piece_lo = fn_piece_neg if lo < 0 else fn_piece_pos
    piece_hi = fn_piece_neg if hi <= 0 else fn_piece_pos
    s_lo = _piece_sign(piece_lo, lo)
    s_hi = _piece_sign(piece_hi, hi)
    straddles = lo < 0 < hi
    # tolerance scale from a neighborhood of the root, not the whole range
    r_loc = min(rmax, 1.0 + max(abs(float(lo)), abs(float(hi))))
    if straddles:
        dmag = min(abs(float(dneg(0.0))), abs(float(dpos(0.0))))
        dbound = max(_transversality_bound(dneg, r_loc), _transversality_bound(dpos, r_loc))
    else:
        mid = float((lo + hi) / 2)
        dp = dneg if mid < 0 else dpos
        dmag = abs(float(dp(mid)))
        dbound = _transversality_bound(dp, r_loc)
    transversal = (s_lo * s_hi < 0) and (dmag > dbound)
    flo, fhi = float(lo), float(hi)
    if flo > lo:
        flo = math.nextafter(flo, -math.inf)
    if fhi < hi:
        fhi = math.nextafter(fhi, math.inf)
    return RootInterval(flo, fhi, transversal, (s_lo, s_hi))


def isolate_roots(fn: _Fn, bounds: Optional[tuple[float, float]] = None,
                  width: float = 1e-6) -> list[RootInterval]:
    """Isolating intervals, one per distinct real root of fn in [lo, hi].

    Piecewise functions are split at x = 0; a root exactly at 0 is attributed
    to the right piece and reported as an interval straddling 0.
    """
    fn = _as_fn(fn)
    if bounds is None:
        bounds = default_range(fn)
    lo, hi = _frac(bounds[0]), _frac(bounds[1])
    if not lo < hi:
        raise LienardError("isolate_roots requires lo < hi")
    wfrac = _frac(width) / 2
    if wfrac <= 0:
        raise LienardError("width must be positive")
    neg, pos = fn.pieces()
    dneg, dpos = neg.derivative(), pos.derivative()
    rmax = max(abs(float(lo)), abs(float(hi)))
    piecewise = neg.coeffs != pos.coeffs

    def chain_intervals(piece: Polynomial, a: Fraction, b: Fraction, drop_zero_root: bool):
        ints = _to_int_coeffs(piece.coeffs)
        if ints == [0]:
            raise LienardError("cannot isolate roots of an identically zero piece")
        if drop_zero_root:
            ints, _ = _strip_root_at_zero(ints)
        chain = _sturm_chain_int(ints)
        if len(chain[0]) == 1:
            return []
        # treat the stated range as closed: step just past an endpoint root
        if _sign_at(chain[0], a) == 0:
            a = a - Fraction(1, 2**48) * (1 + abs(a))
        if _sign_at(chain[0], b) == 0:
            b = b + Fraction(1, 2**48) * (1 + abs(b))
        found = _isolate_on_chain(chain, a, b, wfrac)
        # keep piece-root intervals strictly on their own side of 0
        fixed = []
        for ia, ib in found:
            while drop_zero_root and ib == 0:
                m = _midpoint_off_root(chain, ia, ib)
                if _variations(chain, ia) - _variations(chain, m) == 1:
                    ib = m
                else:
                    ia = m
            while drop_zero_root and ia == 0:
                m = _midpoint_off_root(chain, ia, ib)
                if _variations(chain, m) - _variations(chain, ib) == 1:
                    ia = m
                else:
                    ib = m
            fixed.append((ia, ib))
        return fixed

    raw: list[tuple[Fraction, Fraction]] = []
    zero_root = False
    if not piecewise:
        raw = chain_intervals(pos, lo, hi, drop_zero_root=False)
    else:
        if lo < 0:
            raw += chain_intervals(neg, lo, min(hi, Fraction(0)), drop_zero_root=True)
        if hi > 0:
            raw += chain_intervals(pos, max(lo, Fraction(0)), hi, drop_zero_root=True)
        # the value at the breakpoint itself comes from the right piece
        if lo <= 0 <= hi:
            zero_root = _frac(pos.coeffs[0]) == 0
        raw.sort()

    out = [_emit(neg, pos, dneg, dpos, a, b, rmax) for a, b in raw]
    if zero_root:
        delta = wfrac
        for a, b in raw:
            if b < 0:
                delta = min(delta, -b / 2)
            if a > 0:
                delta = min(delta, a / 2)
        if lo < 0:
            delta = min(delta, -lo)
        if hi > 0:
            delta = min(delta, hi)
        out.append(_emit(neg, pos, dneg, dpos, -delta, delta, rmax))
        out.sort(key=lambda r: r.lo)
    return out


def refine_root(fn: _Fn, interval: RootInterval, width: float) -> RootInterval:
    """Re-isolate a single root inside `interval` down to `width`."""
    pad = 0.25 * (interval.hi - interval.lo)
    found = isolate_roots(fn, (interval.lo - pad, interval.hi + pad), width)
    inside = [r for r in found if r.hi >= interval.lo and r.lo <= interval.hi]
    if len(inside) != 1:
        raise LienardError(f"refinement expected one root, found {len(inside)}")
    return inside[0]
