"""Poincaré return map on the half-line {y = 0, x > 0} and limit-cycle detection.

On the positive x-axis the field has y' = -g(x) < 0 whenever x*g(x) > 0 away
from the origin, so every orbit crosses the half-line transversally downward
and the flow circulates clockwise.  One *revolution* integrates from (x0, 0)
to the next downward crossing of the half-line; the induced map x0 -> x_out is
the return map, and its isolated positive fixed points are the limit cycles.

The detector samples the displacement d(x) = x_out - x on a grid, brackets its
sign changes, and bisects each bracket down to a fixed point.  Each fixed
point is then integrated once more with dense output to extract the period,
the x-extent of the orbit, the intersection flags against the two friction
zeros, and the two closed-orbit identities

    oint g(x) dt = 0        and        oint g(x) F(x) dt = 0

which hold along any periodic orbit (the first because g = -y', the second
because gF = (y - x')y' = d/dt(...) along solutions) and serve as independent
convergence diagnostics.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernel
from .errors import DivergenceError, LienardError, PreconditionError
from .funcs import LienardSystem
from .hypo import Direction
from .ode import (
    DEFAULT_ATOL,
    DEFAULT_BLOWUP,
    DEFAULT_MAX_STEPS,
    DEFAULT_RTOL,
    State,
    Trajectory,
    run_raw,
)

_log = logging.getLogger(__name__)

#: Default time horizon for a single revolution of the return map.
DEFAULT_T_MAX = 1000.0
#: Half-width of the neutral band on the return-map derivative.
NEUTRAL_BAND = 1e-4
#: Relative step for the central-difference derivative of the return map.
STABILITY_STEP_REL = 1e-5
#: Brackets are bisected until their width is below this times the fixed point
#: (tighter than the 1e-8*x contract so the fixed-point residual has margin).
BISECT_WIDTH_REL = 1e-9
#: Fixed points closer than this (relative to 1 + x) are merged.
DEDUPE_REL = 1e-5
#: Displacements below NOISE_BAND_FACTOR*(atol + rtol*x) are indistinguishable
#: from zero at the integration tolerance and never count as sign evidence.
NOISE_BAND_FACTOR = 100.0


class Stability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NEUTRAL = "neutral-within-tolerance"


@dataclass(frozen=True)
class ReturnMapSample:
    """One evaluation of the return map: x_in on the section maps to x_out
    after `period` time units (one clockwise revolution)."""

    x_in: float
    x_out: float
    period: float

    @property
    def displacement(self) -> float:
        return self.x_out - self.x_in


@dataclass(frozen=True)
class CycleRecord:
    """A detected limit cycle, keyed by its section fixed point.

    `crosses_x1` / `crosses_x2` compare the orbit extent against the outer
    friction zeros when those are attached (None otherwise).  `integral_g`
    and `integral_gF` are the closed-orbit identities, both ~0 for a
    converged cycle.
    """

    x_fixed: float
    period: float
    stability: Stability
    x_min: float
    x_max: float
    crosses_x1: Optional[bool]
    crosses_x2: Optional[bool]
    integral_gF: float
    integral_g: float

    def to_json_dict(self) -> dict:
        return {
            "x_fixed": self.x_fixed,
            "period": self.period,
            "stability": self.stability.value,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "crosses_x1": self.crosses_x1,
            "crosses_x2": self.crosses_x2,
            "integral_gF": self.integral_gF,
            "integral_g": self.integral_g,
        }


# ---------------------------------------------------------------------------
# one revolution of the flow


def _one_revolution(
    sys: LienardSystem,
    x0: float,
    *,
    rtol: float,
    atol: float,
    t_max: float,
    want_dense: bool,
    max_steps: int = DEFAULT_MAX_STEPS,
    blowup: float = DEFAULT_BLOWUP,
) -> Optional[Trajectory]:
    """Integrate from (x0, 0) to the next downward crossing of {y=0, x>0}.

    Returns None when the orbit escapes (radius guard) or does not come back
    within t_max; step-size underflow and step-budget errors propagate.
    """
    if not x0 > 0:
        raise PreconditionError("x0 > 0", f"got x0={x0!r}")
    init = State(x=float(x0), y=0.0)
    try:
        status, final, dense, (na, nr, nf) = run_raw(
            sys,
            init,
            init.t + t_max,
            rtol=rtol,
            atol=atol,
            event_kind=_kernel.EVENT_XAXIS_POS,
            event_c=0.0,
            event_dir=_kernel.DIR_DECREASING,
            want_dense=want_dense,
            max_steps=max_steps,
            blowup=blowup,
        )
    except DivergenceError:
        return None
    if status != _kernel.STATUS_EVENT:
        return None
    return Trajectory(dense, final, status, na, nr, nf)


def return_map(
    sys: LienardSystem,
    x0: float,
    *,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    t_max: float = DEFAULT_T_MAX,
) -> Optional[ReturnMapSample]:
    """Return-map sample at x0 > 0, or None when the orbit never comes back
    (escape past the radius guard, or no downward crossing before t_max)."""
    traj = _one_revolution(sys, x0, rtol=rtol, atol=atol, t_max=t_max, want_dense=False)
    if traj is None:
        return None
    return ReturnMapSample(x_in=float(x0), x_out=traj.final.x, period=traj.final.t)


# ---------------------------------------------------------------------------
# quadrature and extents from dense output


# 5-point Gauss-Legendre nodes/weights on [0, 1]; the integrands are smooth on
# each accepted step (steps are split at x = 0), so per-step quadrature error
# is far below the dense-output error itself.
_GL_NODES = (
    0.046910077030668004,
    0.23076534494715845,
    0.5,
    0.7692346550528415,
    0.953089922969332,
)
_GL_WEIGHTS = (
    0.11846344252809454,
    0.23931433524968323,
    0.28444444444444444,
    0.23931433524968323,
    0.11846344252809454,
)


def _row_x(row, theta: float) -> float:
    """x(theta) on one dense-output row."""
    return float(
        row[2]
        + row[1] * theta * (row[4] + theta * (row[5] + theta * (row[6] + theta * row[7])))
    )


def _integrals_from_traj(sys: LienardSystem, traj: Trajectory) -> tuple[float, float]:
    """(oint g dt, oint g*F dt) over [t0, t_final] of one revolution."""
    t_end = traj.final.t
    g, F = sys.g, sys.F
    total_g = 0.0
    total_gF = 0.0
    for row in traj.dense:
        t_old, h = float(row[0]), float(row[1])
        if t_old >= t_end:
            break
        theta_hi = min(1.0, (t_end - t_old) / h)
        if theta_hi <= 0.0:
            continue
        span = h * theta_hi
        for node, w in zip(_GL_NODES, _GL_WEIGHTS):
            x = _row_x(row, theta_hi * node)
            gx = float(g(x))
            total_g += span * w * gx
            total_gF += span * w * gx * float(F(x))
    return total_g, total_gF


def _extent_from_traj(traj: Trajectory) -> tuple[float, float]:
    """Exact min/max of x(t) over the revolution from the per-step quartics."""
    t_end = traj.final.t
    x_min = math.inf
    x_max = -math.inf
    for row in traj.dense:
        t_old, h = float(row[0]), float(row[1])
        if t_old >= t_end:
            break
        theta_hi = min(1.0, (t_end - t_old) / h)
        if theta_hi < 0.0:
            continue
        candidates = [_row_x(row, 0.0), _row_x(row, theta_hi)]
        # interior extrema: roots of d x(theta)/d theta, a cubic in theta
        cubic = np.array([4.0 * row[7], 3.0 * row[6], 2.0 * row[5], row[4]], dtype=float)
        if np.any(cubic != 0.0):
            for root in np.roots(cubic):
                if abs(root.imag) <= 1e-9 * (1.0 + abs(root.real)) and 0.0 < root.real < theta_hi:
                    candidates.append(_row_x(row, float(root.real)))
        x_min = min(x_min, min(candidates))
        x_max = max(x_max, max(candidates))
    if not (math.isfinite(x_min) and math.isfinite(x_max)):
        raise LienardError("revolution produced no dense output")
    return x_min, x_max


# ---------------------------------------------------------------------------
# stability


def classify_stability(
    sys: LienardSystem,
    x_fixed: float,
    *,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    t_max: float = DEFAULT_T_MAX,
) -> Stability:
    """Stability from the return-map derivative at a converged fixed point.

    Central difference with h = 1e-5*x_fixed, evaluated at 100x tighter
    tolerances (floored at 1e-12) so the finite-difference noise stays far
    below the neutral band: derivative < 1 - 1e-4 is stable, > 1 + 1e-4 is
    unstable, anything else is neutral-within-tolerance.
    """
    if not x_fixed > 0:
        raise PreconditionError("x_fixed > 0", f"got x_fixed={x_fixed!r}")
    h = STABILITY_STEP_REL * x_fixed
    fine_rtol = max(rtol * 1e-2, 1e-12)
    fine_atol = max(atol * 1e-2, 1e-12)
    below = return_map(sys, x_fixed - h, rtol=fine_rtol, atol=fine_atol, t_max=t_max)
    above = return_map(sys, x_fixed + h, rtol=fine_rtol, atol=fine_atol, t_max=t_max)
    if below is None or above is None:
        raise LienardError(
            f"return map is undefined within {h!r} of the fixed point x={x_fixed!r}"
        )
    derivative = (above.x_out - below.x_out) / (2.0 * h)
    if derivative < 1.0 - NEUTRAL_BAND:
        return Stability.STABLE
    if derivative > 1.0 + NEUTRAL_BAND:
        return Stability.UNSTABLE
    return Stability.NEUTRAL


# ---------------------------------------------------------------------------
# cycle detection


def _noise_band(x: float, rtol: float, atol: float) -> float:
    return NOISE_BAND_FACTOR * (atol + rtol * abs(x))


def _grid_worker(payload) -> Optional[float]:
    """Module-level so it is picklable for process pools."""
    sys_dict, x, rtol, atol, t_max = payload
    sample = return_map(LienardSystem.from_dict(sys_dict), x, rtol=rtol, atol=atol, t_max=t_max)
    return None if sample is None else sample.x_out


def _grid_outputs(sys, xs, rtol, atol, t_max, jobs) -> list[Optional[float]]:
    if jobs > 1:
        payloads = [(sys.to_dict(), x, rtol, atol, t_max) for x in xs]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_grid_worker, payloads))
    out = []
    for x in xs:
        sample = return_map(sys, x, rtol=rtol, atol=atol, t_max=t_max)
        out.append(None if sample is None else sample.x_out)
    return out


def _bisect_bracket(sys, xa, da, xb, db, *, rtol, atol, t_max) -> Optional[float]:
    """Shrink a sign-change bracket of the displacement to a fixed point."""
    while xb - xa > BISECT_WIDTH_REL * xa:
        xm = 0.5 * (xa + xb)
        sample = return_map(sys, xm, rtol=rtol, atol=atol, t_max=t_max)
        if sample is None:
            _log.warning("no return inside bracket at x=%.9g; dropping it", xm)
            return None
        dm = sample.x_out - xm
        if dm == 0.0:
            return xm
        if (da < 0.0) != (dm < 0.0):
            xb, db = xm, dm
        else:
            xa, da = xm, dm
    return 0.5 * (xa + xb)


def default_search_range(x1: Optional[float] = None, x2: Optional[float] = None) -> tuple[float, float]:
    """Heuristic (x_lo, x_hi) for cycle searches.

    With the outer friction zeros attached the interesting cycles reach past
    both lines, so twice (1 + the larger |zero|) bounds the section segment
    generously; without them fall back to 10.  The upper bound is heuristic:
    nothing forbids cycles beyond it, so callers should widen it when bigger
    orbits are plausible.
    """
    if x1 is not None and x2 is not None:
        hi = 2.0 * (1.0 + max(abs(float(x1)), abs(float(x2))))
    else:
        hi = 10.0
    return hi / 200.0, hi


def find_cycles(
    sys: LienardSystem,
    x_lo: float,
    x_hi: float,
    n_grid: int,
    *,
    x1: Optional[float] = None,
    x2: Optional[float] = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    t_max: float = DEFAULT_T_MAX,
    jobs: int = 1,
) -> list[CycleRecord]:
    """Detect limit cycles whose section fixed point lies in [x_lo, x_hi].

    Samples the displacement d(x) = return_map(x).x_out - x on a uniform grid
    of n_grid points, brackets strict sign changes whose endpoints are not
    both inside the integration-noise band, bisects each bracket to below
    1e-8*x, merges near-duplicates, and builds one CycleRecord per fixed
    point.  Grid points with no return are reported (logged) and treated as
    gaps; a displacement indistinguishable from zero everywhere (a continuum
    of closed orbits) yields no cycles.  Pass x1 > 0 > x2 to attach the
    line-intersection flags.
    """
    x_lo, x_hi = float(x_lo), float(x_hi)
    if not (0.0 < x_lo < x_hi):
        raise PreconditionError("0 < x_lo < x_hi", f"got ({x_lo!r}, {x_hi!r})")
    if int(n_grid) < 8:
        raise PreconditionError("n_grid >= 8", f"got {n_grid!r}")
    if (x1 is None) != (x2 is None):
        raise PreconditionError(
            "x1, x2 attached together", "pass both outer friction zeros or neither"
        )
    if x1 is not None and not (x2 < 0.0 < x1):
        raise PreconditionError("x2 < 0 < x1", f"got x1={x1!r}, x2={x2!r}")

    xs = [float(v) for v in np.linspace(x_lo, x_hi, int(n_grid))]
    outs = _grid_outputs(sys, xs, rtol, atol, t_max, int(jobs))

    gaps = [x for x, out in zip(xs, outs) if out is None]
    if gaps:
        _log.warning(
            "no return at %d of %d grid points (first gaps: %s)",
            len(gaps),
            len(xs),
            ", ".join(format(g, ".6g") for g in gaps[:5]),
        )

    displacements = [(x, out - x) for x, out in zip(xs, outs) if out is not None]
    if not displacements:
        return []
    if all(abs(d) <= _noise_band(x, rtol, atol) for x, d in displacements):
        return []

    fixed_points: list[float] = []
    for i in range(len(xs) - 1):
        if outs[i] is None or outs[i + 1] is None:
            continue
        xa, xb = xs[i], xs[i + 1]
        da, db = outs[i] - xa, outs[i + 1] - xb
        if not da * db < 0.0:
            continue
        if max(abs(da), abs(db)) <= _noise_band(xb, rtol, atol):
            continue
        root = _bisect_bracket(sys, xa, da, xb, db, rtol=rtol, atol=atol, t_max=t_max)
        if root is not None:
            fixed_points.append(root)

    fixed_points.sort()
    deduped: list[float] = []
    for x in fixed_points:
        if deduped and x - deduped[-1] <= DEDUPE_REL * (1.0 + x):
            continue
        deduped.append(x)

    return [
        _build_record(sys, x, x1=x1, x2=x2, rtol=rtol, atol=atol, t_max=t_max)
        for x in deduped
    ]


def _build_record(sys, x_fixed, *, x1, x2, rtol, atol, t_max) -> CycleRecord:
    traj = _one_revolution(sys, x_fixed, rtol=rtol, atol=atol, t_max=t_max, want_dense=True)
    if traj is None:
        raise LienardError(
            f"fixed point x={x_fixed!r} stopped returning to the section during refinement"
        )
    x_min, x_max = _extent_from_traj(traj)
    integral_g, integral_gF = _integrals_from_traj(sys, traj)
    stability = classify_stability(sys, x_fixed, rtol=rtol, atol=atol, t_max=t_max)
    return CycleRecord(
        x_fixed=float(x_fixed),
        period=traj.final.t - traj.t0,
        stability=stability,
        x_min=x_min,
        x_max=x_max,
        crosses_x1=None if x1 is None else bool(x_max >= x1),
        crosses_x2=None if x2 is None else bool(x_min <= x2),
        integral_gF=integral_gF,
        integral_g=integral_g,
    )


# ---------------------------------------------------------------------------
# verifications


def cycle_integrals(
    sys: LienardSystem,
    record: CycleRecord,
    *,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> tuple[float, float]:
    """Re-integrate the cycle and return (oint g dt, oint g*F dt).

    Both vanish identically along any periodic orbit, so their computed size
    measures how well the recorded fixed point closes up.
    """
    t_max = max(DEFAULT_T_MAX, 3.0 * record.period)
    traj = _one_revolution(
        sys, record.x_fixed, rtol=rtol, atol=atol, t_max=t_max, want_dense=True
    )
    if traj is None:
        raise LienardError(
            f"recorded cycle at x={record.x_fixed!r} does not return to the section"
        )
    return _integrals_from_traj(sys, traj)


_REQUIRED_LINES = {
    Direction.MUST_CROSS_X2.value: ("x2",),
    Direction.MUST_CROSS_X1.value: ("x1",),
    Direction.MUST_CROSS_BOTH.value: ("x1", "x2"),
}


def verify_crossing_direction(
    sys: LienardSystem,
    records: Sequence[CycleRecord],
    x1: float,
    x2: float,
    direction: Union[Direction, str],
) -> list[dict]:
    """Check every detected cycle against the predicted line intersections.

    `direction` is the potential-comparison prediction (MustCrossX1,
    MustCrossX2 or MustCrossBoth).  Returns one dict per record with the
    recomputed flags, the required lines, and an `ok` verdict; an empty
    record list verifies vacuously (empty result).
    """
    key = direction.value if isinstance(direction, Direction) else str(direction)
    if key not in _REQUIRED_LINES:
        raise LienardError(f"unknown crossing direction {direction!r}")
    if not x2 < 0.0 < x1:
        raise PreconditionError("x2 < 0 < x1", f"got x1={x1!r}, x2={x2!r}")
    required = _REQUIRED_LINES[key]
    results = []
    for rec in records:
        crosses_x1 = bool(rec.x_max >= x1)
        crosses_x2 = bool(rec.x_min <= x2)
        have = {"x1": crosses_x1, "x2": crosses_x2}
        results.append(
            {
                "x_fixed": rec.x_fixed,
                "x_min": rec.x_min,
                "x_max": rec.x_max,
                "crosses_x1": crosses_x1,
                "crosses_x2": crosses_x2,
                "required": list(required),
                "ok": all(have[line] for line in required),
            }
        )
    return results
