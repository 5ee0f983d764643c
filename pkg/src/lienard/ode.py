"""Adaptive integration of the plane system x' = y - F(x), y' = -g(x).

Thin wrapper over the kernel backends: embedded 5(4) pair, dense output per
accepted step, breakpoint-aware stepping at x = 0, and event localization on
sections (vertical lines and the positive x-axis).
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import IO, Optional, Union

from . import _kernel
from .errors import DivergenceError, LienardError, StepSizeUnderflowError
from .funcs import LienardSystem

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-10
DEFAULT_BLOWUP = 1e8
DEFAULT_MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class State:
    x: float
    y: float
    t: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.t)):
            raise LienardError(f"non-finite state ({self.x}, {self.y}, {self.t})")


@dataclass(frozen=True)
class VerticalLine:
    """The section {x = c}."""

    c: float


@dataclass(frozen=True)
class PositiveXAxis:
    """The section {y = 0, x > 0}."""


Section = Union[VerticalLine, PositiveXAxis]

_DIRECTIONS = {"increasing": _kernel.DIR_INCREASING, "decreasing": _kernel.DIR_DECREASING, "either": _kernel.DIR_EITHER}


def vector_field(sys: LienardSystem, x: float, y: float) -> tuple[float, float]:
    """(x', y') = (y - F(x), -g(x))."""
    if not (math.isfinite(x) and math.isfinite(y)):
        raise LienardError("non-finite evaluation point")
    return y - float(sys.F(x)), -float(sys.g(x))


class Trajectory:
    """Accepted-step nodes plus the dense interpolant between them.

    `samples` lists the node states in strictly increasing t. `eval(t)`
    interpolates anywhere in [t0, t_final] from the per-step quartics.
    """

    def __init__(self, dense, final: State, status: int, naccept: int, nreject: int, nfev: int):
        self._dense = dense
        self.final = final
        self.status = status
        self.naccept = naccept
        self.nreject = nreject
        self.nfev = nfev
        self._t_old = dense[:, 0] if dense is not None and len(dense) else None

    @property
    def dense(self):
        return self._dense

    @property
    def t0(self) -> float:
        if self._t_old is None:
            return self.final.t
        return float(self._dense[0, 0])

    @property
    def samples(self) -> list[State]:
        out = []
        if self._dense is not None:
            for row in self._dense:
                if row[0] < self.final.t:
                    out.append(State(x=float(row[2]), y=float(row[3]), t=float(row[0])))
        out.append(self.final)
        return out

    def eval(self, t: float) -> tuple[float, float]:
        if self._t_old is None or len(self._t_old) == 0:
            return self.final.x, self.final.y
        if not self.t0 <= t <= self.final.t + 1e-12 * max(1.0, abs(self.final.t)):
            raise LienardError(f"t={t} outside trajectory range [{self.t0}, {self.final.t}]")
        i = bisect_right(self._t_old, t) - 1
        i = max(0, i)
        row = self._dense[i]
        t_old, h, x_old, y_old = row[0], row[1], row[2], row[3]
        theta = min(max((t - t_old) / h, 0.0), 1.0)
        px = theta * (row[4] + theta * (row[5] + theta * (row[6] + theta * row[7])))
        py = theta * (row[8] + theta * (row[9] + theta * (row[10] + theta * row[11])))
        return float(x_old + h * px), float(y_old + h * py)

    def to_csv(self, out: Union[str, IO[str]], n: Optional[int] = None) -> None:
        """Write t,x,y rows: node states by default, n uniform samples if given."""
        close = False
        if isinstance(out, str):
            out = open(out, "w", newline="")
            close = True
        try:
            w = csv.writer(out)
            w.writerow(["t", "x", "y"])
            if n is None:
                for s in self.samples:
                    w.writerow([repr(s.t), repr(s.x), repr(s.y)])
            else:
                if n < 2:
                    raise LienardError("csv resampling needs n >= 2")
                t0, t1 = self.t0, self.final.t
                for k in range(n):
                    t = t0 + (t1 - t0) * k / (n - 1)
                    x, y = self.eval(t)
                    w.writerow([repr(t), repr(x), repr(y)])
        finally:
            if close:
                out.close()


def _system_coeffs(sys: LienardSystem):
    Fneg, Fpos = sys.F.pieces()
    gneg, gpos = sys.g.pieces()
    return Fneg.as_floats(), Fpos.as_floats(), gneg.as_floats(), gpos.as_floats()


def run_raw(
    sys: LienardSystem,
    init: State,
    t_max: float,
    *,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    event_kind: int = _kernel.EVENT_NONE,
    event_c: float = 0.0,
    event_dir: int = _kernel.DIR_EITHER,
    want_dense: bool = True,
    max_steps: int = DEFAULT_MAX_STEPS,
    blowup: float = DEFAULT_BLOWUP,
):
    """Kernel call with error mapping; returns (status, final State, dense, stats)."""
    if not t_max > init.t:
        raise LienardError("t_max must exceed the initial time")
    if rtol <= 0 or atol <= 0:
        raise LienardError("tolerances must be positive")
    Fneg, Fpos, gneg, gpos = _system_coeffs(sys)
    status, t, x, y, dense, naccept, nreject, nfev = _kernel.run_core(
        Fneg, Fpos, gneg, gpos,
        init.x, init.y, init.t, t_max,
        rtol, atol,
        event_kind, event_c, event_dir,
        want_dense, max_steps, blowup,
    )
    if status == _kernel.STATUS_UNDERFLOW:
        raise StepSizeUnderflowError(t, x, y)
    if status == _kernel.STATUS_BLOWUP:
        raise DivergenceError(t, x, y)
    if status == _kernel.STATUS_MAXSTEPS:
        raise LienardError(f"step budget {max_steps} exhausted at t={t:.6g}")
    return status, State(x=x, y=y, t=t), dense, (naccept, nreject, nfev)


def integrate(
    sys: LienardSystem,
    init: State,
    t_max: float,
    *,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    max_steps: int = DEFAULT_MAX_STEPS,
    blowup: float = DEFAULT_BLOWUP,
) -> Trajectory:
    status, final, dense, (na, nr, nf) = run_raw(
        sys, init, t_max, rtol=rtol, atol=atol, max_steps=max_steps, blowup=blowup
    )
    return Trajectory(dense, final, status, na, nr, nf)


def next_section_crossing(
    sys: LienardSystem,
    init: State,
    section: Section,
    direction: str = "either",
    *,
    t_max: Optional[float] = None,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    max_steps: int = DEFAULT_MAX_STEPS,
    blowup: float = DEFAULT_BLOWUP,
) -> Optional[State]:
    """First state strictly after init.t on the section, or None if none occurs
    before t_max (default init.t + 1000)."""
    if direction not in _DIRECTIONS:
        raise LienardError(f"direction must be one of {sorted(_DIRECTIONS)}")
    if isinstance(section, VerticalLine):
        kind, c = _kernel.EVENT_VLINE, float(section.c)
    elif isinstance(section, PositiveXAxis):
        kind, c = _kernel.EVENT_XAXIS_POS, 0.0
    else:
        raise LienardError(f"unknown section {section!r}")
    if t_max is None:
        t_max = init.t + 1000.0
    status, final, _, _ = run_raw(
        sys, init, t_max,
        rtol=rtol, atol=atol,
        event_kind=kind, event_c=c, event_dir=_DIRECTIONS[direction],
        want_dense=False, max_steps=max_steps, blowup=blowup,
    )
    if status == _kernel.STATUS_EVENT:
        return final
    return None
