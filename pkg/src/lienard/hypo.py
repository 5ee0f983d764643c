"""Sufficient-condition checks for existence and uniqueness of limit cycles.

The conditions, for x' = y - F(x), y' = -g(x):

  (B)  restoring force: x g(x) > 0 for x != 0; friction negative at the
       origin, in the weak form x F(x) < 0 for small |x|.
  (C)  F has exactly three transversal zeros x2 < 0 < x1 (plus the one at 0)
       and is monotone increasing outside [x2, x1].
  (D)  G(x1) = G(x2), where G is the primitive of g.
  (E)  G + F -> +inf toward +inf and G - F -> +inf toward -inf.
  (D') when G(x1) > G(x2): some x2* in (x2, 0) has F(x2*) >= sqrt(2 G(x1)).
  (D'') when G(x1) < G(x2): some x1* in (0, x1) has F(x1*) <= -sqrt(2 G(x2)).

B+C+D+E force a unique stable cycle; B+C+E with a D'/D'' witness force a
unique cycle; B+C alone bound the count of cycles crossing both lines
x = x1 and x = x2 by one. The crossing direction rule: any cycle must cross
x = x2 when G(x1) >= G(x2), must cross x = x1 when G(x1) <= G(x2), and must
cross both when equality holds within tolerance.

All function cores here are piecewise polynomials, so every check is decided
exactly (Sturm counts and rational sign evaluations); `unknown` only marks
checks whose precondition failed (e.g. D' without its gap inequality).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import LienardError
from .funcs import LienardSystem, Polynomial
from .roots import RootInterval, default_range, isolate_roots, refine_root

DEFAULT_D_TOL = 1e-9


class Tristate(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Verdict(str, Enum):
    UNIQUE_STABLE_CYCLE = "UniqueStableCycle"
    UNIQUE_CYCLE_VIA_WITNESS = "UniqueCycleViaDPrime"
    AT_MOST_ONE_CROSSING_CYCLE = "AtMostOneCrossingCycle"
    NO_VERDICT = "NoVerdict"


class Direction(str, Enum):
    MUST_CROSS_X2 = "MustCrossX2"
    MUST_CROSS_X1 = "MustCrossX1"
    MUST_CROSS_BOTH = "MustCrossBoth"


@dataclass
class CheckResult:
    status: Tristate
    witnesses: dict = field(default_factory=dict)
    numbers: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    note: str = ""

    def to_json_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "witnesses": self.witnesses,
            "numbers": self.numbers,
            "tolerances": self.tolerances,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class HypothesisReport:
    B: CheckResult
    C: CheckResult
    D: CheckResult
    E: CheckResult
    Dprime: CheckResult
    Ddoubleprime: CheckResult
    verdict: Verdict
    direction: Optional[Direction]
    x1: Optional[float] = None
    x2: Optional[float] = None
    existence_note: str = ""

    def to_json_dict(self) -> dict:
        out = {
            "B": self.B.to_json_dict(),
            "C": self.C.to_json_dict(),
            "D": self.D.to_json_dict(),
            "E": self.E.to_json_dict(),
            "Dprime": self.Dprime.to_json_dict(),
            "Ddoubleprime": self.Ddoubleprime.to_json_dict(),
            "verdict": self.verdict.value,
            "direction": self.direction.value if self.direction is not None else None,
            "x1": self.x1,
            "x2": self.x2,
        }
        if self.existence_note:
            out["existence_note"] = self.existence_note
        return out


def _lowest_nonzero(poly: Polynomial) -> tuple[int, Fraction]:
    """(degree, coefficient) of the lowest-order nonzero term; (-1, 0) if none."""
    for k, c in enumerate(poly.coeffs):
        cf = Fraction(c) if not isinstance(c, Fraction) else c
        if cf != 0:
            return k, cf
    return -1, Fraction(0)


def _F_negative_near_zero(F) -> bool:
    """Exact test of x F(x) < 0 for small |x|."""
    neg, pos = F.pieces()
    kp, cp = _lowest_nonzero(pos)
    kn, cn = _lowest_nonzero(neg)
    if kp < 0 or kn < 0:
        return False
    right_ok = cp < 0
    left_sign = cn if kn % 2 == 0 else -cn
    left_ok = left_sign > 0
    return right_ok and left_ok


def check_B(sys: LienardSystem) -> CheckResult:
    """Restoring force sign plus negative friction at the origin.

    g needs x g(x) > 0 for x != 0 (so g(0) = 0 and 0 is g's only real zero,
    transversal or not); the friction side accepts either f(0) < 0 or the
    weak form x F(x) < 0 near 0, which f(0) < 0 implies.
    """
    gneg, gpos = sys.g.pieces()
    numbers: dict = {}
    if Fraction(gpos.coeffs[0]) != 0:
        return CheckResult(Tristate.FAILS, numbers={"g_at_0": float(gpos(0.0))}, note="g(0) != 0")
    if gneg.is_zero or gpos.is_zero:
        return CheckResult(Tristate.FAILS, note="g vanishes identically on one side")
    roots = isolate_roots(sys.g)
    straddle = [r for r in roots if r.lo < 0 < r.hi]
    others = [r for r in roots if not (r.lo < 0 < r.hi)]
    if others or not straddle:
        return CheckResult(
            Tristate.FAILS,
            numbers={"g_zero_count": len(roots)},
            note="g has real zeros away from 0",
        )
    if straddle[0].sign_change != (-1, 1):
        return CheckResult(Tristate.FAILS, note="x g(x) < 0 on one side of 0")
    friction_ok = _F_negative_near_zero(sys.F)
    f0 = float(sys.f(0.0))
    numbers["f_at_0"] = f0
    if not friction_ok:
        return CheckResult(Tristate.FAILS, numbers=numbers, note="x F(x) < 0 fails near 0")
    return CheckResult(Tristate.HOLDS, numbers=numbers)


def _refine_to(sys_fn, iv: RootInterval, width: float) -> RootInterval:
    if iv.width <= width:
        return iv
    return refine_root(sys_fn, iv, width)


def _no_sign_change_on(fn, lo: float, hi: float) -> tuple[bool, str]:
    """True if fn (piecewise poly) has no sign change on [lo, hi]."""
    if hi <= lo:
        return True, ""
    for iv in isolate_roots(fn, (lo, hi), width=1e-9):
        if iv.sign_change[0] != iv.sign_change[1]:
            return False, f"sign change inside [{iv.lo:.6g}, {iv.hi:.6g}]"
    return True, ""


def check_C(sys: LienardSystem, relaxed: bool = False) -> CheckResult:
    """Three-zero structure of F plus exterior monotonicity.

    Default: exactly three zeros, all transversal. With relaxed=True, zeros
    where F does not change sign are tolerated; the sign-changing zeros must
    still be exactly {x2, 0, x1}.
    """
    roots = isolate_roots(sys.F, width=1e-9)
    numbers = {"F_zero_count": len(roots)}
    zero_iv = [r for r in roots if r.lo < 0 < r.hi]
    if not zero_iv:
        return CheckResult(Tristate.FAILS, numbers=numbers, note="F has no zero at 0")
    if relaxed:
        crossing = [r for r in roots if r.sign_change[0] != r.sign_change[1]]
        if zero_iv[0] not in crossing:
            return CheckResult(Tristate.FAILS, numbers=numbers, note="F does not change sign at 0")
    else:
        crossing = roots
        if len(roots) != 3 or not all(r.transversal for r in roots):
            return CheckResult(
                Tristate.FAILS,
                numbers=numbers,
                note="F needs exactly three transversal zeros",
            )
    neg = [r for r in crossing if r.hi <= 0]
    pos = [r for r in crossing if r.lo >= 0]
    if len(crossing) != 3 or len(neg) != 1 or len(pos) != 1:
        return CheckResult(
            Tristate.FAILS,
            numbers=numbers,
            note="sign-changing zeros of F are not {x2, 0, x1}",
        )
    x2_iv, x1_iv = neg[0], pos[0]
    if x2_iv.sign_change != (-1, 1) or x1_iv.sign_change != (-1, 1) or zero_iv[0].sign_change != (1, -1):
        return CheckResult(
            Tristate.FAILS,
            numbers=numbers,
            note="F sign pattern is not (-,+,-,+) across x2, 0, x1",
        )
    x2_iv = _refine_to(sys.F, x2_iv, 1e-12 * (1.0 + abs(x2_iv.mid)))
    x1_iv = _refine_to(sys.F, x1_iv, 1e-12 * (1.0 + abs(x1_iv.mid)))

    fneg, fpos = sys.f.pieces()
    m = 1.0 + max(
        default_range(sys.f)[1],
        abs(x1_iv.hi),
        abs(x2_iv.lo),
    )
    ok_right, why_r = _no_sign_change_on(sys.f, x1_iv.hi, m)
    ok_left, why_l = _no_sign_change_on(sys.f, -m, x2_iv.lo)
    if float(fpos(m)) <= 0 or not ok_right:
        return CheckResult(
            Tristate.FAILS,
            numbers=numbers,
            witnesses={"x1": [x1_iv.lo, x1_iv.hi], "x2": [x2_iv.lo, x2_iv.hi]},
            note=f"F not monotone increasing beyond x1 ({why_r or 'f(m) <= 0'})",
        )
    if float(fneg(-m)) <= 0 or not ok_left:
        return CheckResult(
            Tristate.FAILS,
            numbers=numbers,
            witnesses={"x1": [x1_iv.lo, x1_iv.hi], "x2": [x2_iv.lo, x2_iv.hi]},
            note=f"F not monotone increasing below x2 ({why_l or 'f(-m) <= 0'})",
        )
    return CheckResult(
        Tristate.HOLDS,
        witnesses={"x1": [x1_iv.lo, x1_iv.hi], "x2": [x2_iv.lo, x2_iv.hi]},
        numbers=numbers,
    )


def _as_interval(v) -> tuple[float, float]:
    if isinstance(v, RootInterval):
        return v.lo, v.hi
    if isinstance(v, (tuple, list)) and len(v) == 2:
        return float(v[0]), float(v[1])
    return float(v), float(v)


def check_D(sys: LienardSystem, x2, x1, tol: float = DEFAULT_D_TOL) -> CheckResult:
    """Equal potential at the outer zeros: G(x1) = G(x2) within tolerance."""
    if tol <= 0:
        raise LienardError("D tolerance must be positive")
    x2lo, x2hi = _as_interval(x2)
    x1lo, x1hi = _as_interval(x1)
    g_neg, g_pos = sys.g.pieces()
    G1 = float(sys.G(0.5 * (x1lo + x1hi)))
    G2 = float(sys.G(0.5 * (x2lo + x2hi)))
    uncertainty = (x1hi - x1lo) * abs(float(g_pos(x1hi))) + (x2hi - x2lo) * abs(float(g_neg(x2lo)))
    gap = G1 - G2
    scale = 1.0 + abs(G1) + abs(G2)
    status = Tristate.HOLDS if abs(gap) <= tol * scale else Tristate.FAILS
    return CheckResult(
        status,
        numbers={"gap": gap, "G_x1": G1, "G_x2": G2, "uncertainty": uncertainty},
        tolerances={"tol": tol, "scaled_tol": tol * scale},
    )


def _tends_to_plus_infinity(poly: Polynomial, toward_plus: bool) -> bool:
    if poly.degree < 1:
        return False
    lead = float(poly.coeffs[-1])
    if toward_plus:
        return lead > 0
    return lead > 0 if poly.degree % 2 == 0 else lead < 0


def check_E(sys: LienardSystem) -> CheckResult:
    """Unbounded growth of G + F toward +inf and of G - F toward -inf.

    Decided exactly from the leading term of each polynomial half.
    """
    Fneg, Fpos = sys.F.pieces()
    Gneg, Gpos = sys.G.pieces()
    plus = Gpos + Fpos
    minus = Gneg - Fneg
    ok_plus = _tends_to_plus_infinity(plus, toward_plus=True)
    ok_minus = _tends_to_plus_infinity(minus, toward_plus=False)
    status = Tristate.HOLDS if (ok_plus and ok_minus) else Tristate.FAILS
    return CheckResult(
        status,
        numbers={
            "right_leading": float(plus.coeffs[-1]),
            "right_degree": plus.degree,
            "left_leading": float(minus.coeffs[-1]),
            "left_degree": minus.degree,
        },
        note="" if status is Tristate.HOLDS else "a side stays bounded above",
    )


def _extremum_of_F_on(sys: LienardSystem, lo: float, hi: float, maximize: bool) -> tuple[float, float]:
    """(best value, argument) of F over [lo, hi] via critical points of f."""
    best_val = -math.inf if maximize else math.inf
    best_arg = lo
    candidates = [lo, hi]
    for iv in isolate_roots(sys.f, (lo, hi), width=1e-10):
        candidates.append(iv.mid)
    for c in candidates:
        v = float(sys.F(c))
        if (maximize and v > best_val) or (not maximize and v < best_val):
            best_val, best_arg = v, c
    return best_val, best_arg


def check_Dprime(sys: LienardSystem, x2, x1) -> CheckResult:
    """Witness on the left: F reaches sqrt(2 G(x1)) somewhere in (x2, 0).

    Applicable only when G(x1) > G(x2); otherwise unknown with a note.
    """
    x2m = 0.5 * sum(_as_interval(x2))
    x1m = 0.5 * sum(_as_interval(x1))
    G1, G2 = float(sys.G(x1m)), float(sys.G(x2m))
    if not G1 > G2:
        return CheckResult(Tristate.UNKNOWN, note="not applicable: needs G(x1) > G(x2)")
    if G1 < 0:
        return CheckResult(Tristate.UNKNOWN, note="not applicable: needs G(x1) >= 0 (restoring force)")
    target = math.sqrt(2.0 * G1)
    best, arg = _extremum_of_F_on(sys, x2m, 0.0, maximize=True)
    status = Tristate.HOLDS if best >= target else Tristate.FAILS
    witnesses = {"x2_star": arg} if status is Tristate.HOLDS else {}
    return CheckResult(
        status,
        witnesses=witnesses,
        numbers={"max_F_on_left": best, "threshold": target},
    )


def check_Ddoubleprime(sys: LienardSystem, x2, x1) -> CheckResult:
    """Witness on the right: F reaches -sqrt(2 G(x2)) somewhere in (0, x1).

    Applicable only when G(x1) < G(x2); otherwise unknown with a note.
    """
    x2m = 0.5 * sum(_as_interval(x2))
    x1m = 0.5 * sum(_as_interval(x1))
    G1, G2 = float(sys.G(x1m)), float(sys.G(x2m))
    if not G1 < G2:
        return CheckResult(Tristate.UNKNOWN, note="not applicable: needs G(x1) < G(x2)")
    if G2 < 0:
        return CheckResult(Tristate.UNKNOWN, note="not applicable: needs G(x2) >= 0 (restoring force)")
    target = -math.sqrt(2.0 * G2)
    best, arg = _extremum_of_F_on(sys, 0.0, x1m, maximize=False)
    status = Tristate.HOLDS if best <= target else Tristate.FAILS
    witnesses = {"x1_star": arg} if status is Tristate.HOLDS else {}
    return CheckResult(
        status,
        witnesses=witnesses,
        numbers={"min_F_on_right": best, "threshold": target},
    )


def analyze(sys: LienardSystem, tol_D: float = DEFAULT_D_TOL, relaxed_C: bool = False) -> HypothesisReport:
    """Run every check and assemble the verdict.

    Verdict ladder: B+C+D+E -> UniqueStableCycle; B+C+E plus a D'/D''
    witness -> UniqueCycleViaDPrime; B+C -> AtMostOneCrossingCycle; else
    NoVerdict. The crossing-direction rule is populated whenever C holds.
    """
    rB = check_B(sys)
    rC = check_C(sys, relaxed=relaxed_C)
    not_applicable = CheckResult(Tristate.UNKNOWN, note="not applicable: C does not hold")
    x1 = x2 = None
    direction = None
    if rC.status is Tristate.HOLDS:
        x1_iv = rC.witnesses["x1"]
        x2_iv = rC.witnesses["x2"]
        x1 = 0.5 * (x1_iv[0] + x1_iv[1])
        x2 = 0.5 * (x2_iv[0] + x2_iv[1])
        rD = check_D(sys, x2_iv, x1_iv, tol=tol_D)
        rDp = check_Dprime(sys, x2_iv, x1_iv)
        rDpp = check_Ddoubleprime(sys, x2_iv, x1_iv)
        if rD.status is Tristate.HOLDS:
            direction = Direction.MUST_CROSS_BOTH
        elif rD.numbers["gap"] > 0:
            direction = Direction.MUST_CROSS_X2
        else:
            direction = Direction.MUST_CROSS_X1
    else:
        rD, rDp, rDpp = not_applicable, not_applicable, not_applicable
    rE = check_E(sys)

    holds = lambda r: r.status is Tristate.HOLDS  # noqa: E731
    if holds(rB) and holds(rC) and holds(rD) and holds(rE):
        verdict = Verdict.UNIQUE_STABLE_CYCLE
    elif holds(rB) and holds(rC) and holds(rE) and (holds(rDp) or holds(rDpp)):
        verdict = Verdict.UNIQUE_CYCLE_VIA_WITNESS
    elif holds(rB) and holds(rC):
        verdict = Verdict.AT_MOST_ONE_CROSSING_CYCLE
    else:
        verdict = Verdict.NO_VERDICT

    existence_note = ""
    if holds(rB) and holds(rC) and holds(rE):
        existence_note = (
            "existence expected: with B and C in place, unbounded growth of "
            "G+F and G-F confines outward orbits, so the detector should find "
            "at least one cycle"
        )

    return HypothesisReport(
        B=rB,
        C=rC,
        D=rD,
        E=rE,
        Dprime=rDp,
        Ddoubleprime=rDpp,
        verdict=verdict,
        direction=direction,
        x1=x1,
        x2=x2,
        existence_note=existence_note,
    )
