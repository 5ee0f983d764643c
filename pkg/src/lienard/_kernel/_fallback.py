"""Reference integrator kernel, pure Python.

Dormand-Prince 5(4) with FSAL and a quartic dense-output interpolant for the
plane system x' = y - F(x), y' = -g(x), where F and g are polynomials split
at the breakpoint x = 0. Steps that would cross the breakpoint are re-aimed
to land on it, so every accepted step samples a single smooth piece; events
(vertical lines and the positive x-axis) are localized on the dense
interpolant. The compiled backend mirrors this module statement for
statement; change the two together.
"""

import math

import numpy as np

STATUS_DONE = 0
STATUS_EVENT = 1
STATUS_UNDERFLOW = 2
STATUS_BLOWUP = 3
STATUS_MAXSTEPS = 4

EVENT_NONE = 0
EVENT_VLINE = 1
EVENT_XAXIS_POS = 2

DIR_INCREASING = 1
DIR_DECREASING = -1
DIR_EITHER = 0

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)
# Dense-output matrix: y(theta) = y0 + h * sum_j theta^(j+1) * (K^T P)[:, j]
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

_BREAK_PASS_THETA = 1e-10
_SNAP_REL = 1e-12
_MAX_REAIMS = 10
_EVENT_SCAN = 16
_EVENT_BISECTIONS = 60


def _peval(c, x):
    acc = 0.0
    for i in range(len(c) - 1, -1, -1):
        acc = acc * x + c[i]
    return acc


def _rms(u, v):
    # Explicit products (not **2) so the compiled mirror is bit-identical.
    return math.sqrt(0.5 * (u * u + v * v))


def _dense_eval(base, h, q0, q1, q2, q3, theta):
    return base + h * theta * (q0 + theta * (q1 + theta * (q2 + theta * q3)))


def run_core(
    Fneg,
    Fpos,
    gneg,
    gpos,
    x0,
    y0,
    t0,
    t_end,
    rtol,
    atol,
    event_kind,
    event_c,
    event_dir,
    want_dense,
    max_steps,
    blowup,
):
    """Advance from (x0, y0) at t0 toward t_end; stop at t_end or first event.

    Returns (status, t, x, y, dense, naccept, nreject, nfev). `dense` is an
    (naccept, 12) float array of rows [t_old, h, x_old, y_old, qx0..qx3,
    qy0..qy3], or None when want_dense is false.
    """
    Fneg = tuple(float(c) for c in Fneg)
    Fpos = tuple(float(c) for c in Fpos)
    gneg = tuple(float(c) for c in gneg)
    gpos = tuple(float(c) for c in gpos)

    def rhs(x, y):
        if x < 0.0:
            return y - _peval(Fneg, x), -_peval(gneg, x)
        return y - _peval(Fpos, x), -_peval(gpos, x)

    t, x, y = float(t0), float(x0), float(y0)
    t_end = float(t_end)
    span = t_end - t
    if span <= 0.0:
        raise ValueError("t_end must exceed t0")

    f1x, f1y = rhs(x, y)
    nfev = 1

    # Hairer-style first step guess
    sx = atol + rtol * abs(x)
    sy = atol + rtol * abs(y)
    d0 = _rms(x / sx, y / sy)
    d1 = _rms(f1x / sx, f1y / sy)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * (d0 / d1)
    h0 = min(h0, span)
    ex, ey = rhs(x + h0 * f1x, y + h0 * f1y)
    nfev += 1
    d2 = _rms((ex - f1x) / sx, (ey - f1y) / sy) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    h = min(100.0 * h0, h1, span)

    rows = [] if want_dense else None
    naccept = 0
    nreject = 0
    status = STATUS_MAXSTEPS
    reaims = 0
    attempts = 0

    while attempts < max_steps:
        if t_end - t <= 1e-14 * max(1.0, abs(t_end)):
            status = STATUS_DONE
            break
        if h > t_end - t:
            h = t_end - t
        if h < 1e-14 * max(1.0, abs(t)):
            status = STATUS_UNDERFLOW
            break
        attempts += 1

        k1x, k1y = f1x, f1y
        ax, ay = x + h * (_A21 * k1x), y + h * (_A21 * k1y)
        k2x, k2y = rhs(ax, ay)
        ax = x + h * (_A31 * k1x + _A32 * k2x)
        ay = y + h * (_A31 * k1y + _A32 * k2y)
        k3x, k3y = rhs(ax, ay)
        ax = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        ay = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        k4x, k4y = rhs(ax, ay)
        ax = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        ay = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        k5x, k5y = rhs(ax, ay)
        ax = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        ay = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        k6x, k6y = rhs(ax, ay)
        xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        yn = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        k7x, k7y = rhs(xn, yn)
        nfev += 6

        errx = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        erry = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        sx = atol + rtol * max(abs(x), abs(xn))
        sy = atol + rtol * max(abs(y), abs(yn))
        err = _rms(errx / sx, erry / sy)

        if err > 1.0:
            nreject += 1
            factor = max(0.2, min(1.0, 0.9 * err**-0.2))
            h *= factor
            reaims = 0
            continue

        qx0 = k1x * _P[0][0]
        qx1 = k1x * _P[0][1] + k3x * _P[2][1] + k4x * _P[3][1] + k5x * _P[4][1] + k6x * _P[5][1] + k7x * _P[6][1]
        qx2 = k1x * _P[0][2] + k3x * _P[2][2] + k4x * _P[3][2] + k5x * _P[4][2] + k6x * _P[5][2] + k7x * _P[6][2]
        qx3 = k1x * _P[0][3] + k3x * _P[2][3] + k4x * _P[3][3] + k5x * _P[4][3] + k6x * _P[5][3] + k7x * _P[6][3]
        qy0 = k1y * _P[0][0]
        qy1 = k1y * _P[0][1] + k3y * _P[2][1] + k4y * _P[3][1] + k5y * _P[4][1] + k6y * _P[5][1] + k7y * _P[6][1]
        qy2 = k1y * _P[0][2] + k3y * _P[2][2] + k4y * _P[3][2] + k5y * _P[4][2] + k6y * _P[5][2] + k7y * _P[6][2]
        qy3 = k1y * _P[0][3] + k3y * _P[2][3] + k4y * _P[3][3] + k5y * _P[4][3] + k6y * _P[5][3] + k7y * _P[6][3]

        # breakpoint: if the interpolated x changes sign inside the step,
        # shorten the step to land on x = 0, then snap.
        if reaims < _MAX_REAIMS:
            s0 = -1.0 if x < 0.0 else 1.0
            cross_theta = -1.0
            prev_theta = 0.0
            prev_val = x
            for i in range(1, _EVENT_SCAN + 1):
                th = i / _EVENT_SCAN
                val = _dense_eval(x, h, qx0, qx1, qx2, qx3, th)
                if val * s0 < 0.0:
                    a, b = prev_theta, th
                    fa = prev_val
                    for _ in range(_EVENT_BISECTIONS):
                        m = 0.5 * (a + b)
                        fm = _dense_eval(x, h, qx0, qx1, qx2, qx3, m)
                        if fm * s0 < 0.0:
                            b = m
                        else:
                            a = m
                    cross_theta = 0.5 * (a + b)
                    break
                prev_theta, prev_val = th, val
            if cross_theta > _BREAK_PASS_THETA:
                h *= cross_theta
                reaims += 1
                continue

        # accepted
        snapped = abs(xn) <= _SNAP_REL * (1.0 + abs(x))
        if snapped and xn != 0.0:
            xn = 0.0
            k7x, k7y = rhs(xn, yn)
            nfev += 1

        if rows is not None:
            rows.append((t, h, x, y, qx0, qx1, qx2, qx3, qy0, qy1, qy2, qy3))
        naccept += 1
        reaims = 0

        event_theta = -1.0
        if event_kind != EVENT_NONE:
            prev_theta = 0.0
            if event_kind == EVENT_VLINE:
                prev_res = x - event_c
            else:
                prev_res = y
            for i in range(1, _EVENT_SCAN + 1):
                th = i / _EVENT_SCAN
                if event_kind == EVENT_VLINE:
                    res = _dense_eval(x, h, qx0, qx1, qx2, qx3, th) - event_c
                else:
                    res = _dense_eval(y, h, qy0, qy1, qy2, qy3, th)
                up = prev_res < 0.0 and res >= 0.0
                down = prev_res > 0.0 and res <= 0.0
                hit = (
                    (event_dir == DIR_INCREASING and up)
                    or (event_dir == DIR_DECREASING and down)
                    or (event_dir == DIR_EITHER and (up or down))
                )
                if hit:
                    a, b = prev_theta, th
                    ra = prev_res
                    for _ in range(_EVENT_BISECTIONS):
                        m = 0.5 * (a + b)
                        if event_kind == EVENT_VLINE:
                            rm = _dense_eval(x, h, qx0, qx1, qx2, qx3, m) - event_c
                        else:
                            rm = _dense_eval(y, h, qy0, qy1, qy2, qy3, m)
                        if (ra < 0.0) == (rm < 0.0):
                            a, ra = m, rm
                        else:
                            b = m
                    th_star = 0.5 * (a + b)
                    if event_kind == EVENT_XAXIS_POS:
                        x_star = _dense_eval(x, h, qx0, qx1, qx2, qx3, th_star)
                        if x_star <= 0.0:
                            prev_theta, prev_res = th, res
                            continue
                    event_theta = th_star
                    break
                prev_theta, prev_res = th, res

        if event_theta >= 0.0:
            t_ev = t + event_theta * h
            x_ev = _dense_eval(x, h, qx0, qx1, qx2, qx3, event_theta)
            y_ev = _dense_eval(y, h, qy0, qy1, qy2, qy3, event_theta)
            if event_kind == EVENT_VLINE:
                x_ev = event_c
            else:
                y_ev = 0.0
            t, x, y = t_ev, x_ev, y_ev
            status = STATUS_EVENT
            break

        t = t + h
        x, y = xn, yn
        f1x, f1y = k7x, k7y

        if abs(x) > blowup or abs(y) > blowup:
            status = STATUS_BLOWUP
            break

        factor = max(0.2, min(10.0, 0.9 * err**-0.2)) if err > 0.0 else 10.0
        h *= factor

    dense = np.asarray(rows, dtype=np.float64).reshape(-1, 12) if rows is not None else None
    return status, t, x, y, dense, naccept, nreject, nfev
