# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled integrator kernel.

Statement-for-statement mirror of `_fallback`: Dormand-Prince 5(4) with FSAL,
quartic dense output, step re-aiming onto the breakpoint x = 0, and event
localization on the dense interpolant. Change the two modules together.

The build disables floating-point contraction so that both backends perform
the identical sequence of IEEE operations and produce identical bits.
"""

from libc.math cimport fabs, pow, sqrt

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

cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0, _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0, _E3 = -71.0 / 16695.0, _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0, _E6 = 22.0 / 525.0, _E7 = -1.0 / 40.0

# Dense-output matrix (nonzero entries); row 1 is all zero, column 0 is zero
# except for the first row.
cdef double _P0_0 = 1.0
cdef double _P0_1 = -8048581381.0 / 2820520608.0
cdef double _P0_2 = 8663915743.0 / 2820520608.0
cdef double _P0_3 = -12715105075.0 / 11282082432.0
cdef double _P2_1 = 131558114200.0 / 32700410799.0
cdef double _P2_2 = -68118460800.0 / 10900136933.0
cdef double _P2_3 = 87487479700.0 / 32700410799.0
cdef double _P3_1 = -1754552775.0 / 470086768.0
cdef double _P3_2 = 14199869525.0 / 1410260304.0
cdef double _P3_3 = -10690763975.0 / 1880347072.0
cdef double _P4_1 = 127303824393.0 / 49829197408.0
cdef double _P4_2 = -318862633887.0 / 49829197408.0
cdef double _P4_3 = 701980252875.0 / 199316789632.0
cdef double _P5_1 = -282668133.0 / 205662961.0
cdef double _P5_2 = 2019193451.0 / 616988883.0
cdef double _P5_3 = -1453857185.0 / 822651844.0
cdef double _P6_1 = 40617522.0 / 29380423.0
cdef double _P6_2 = -110615467.0 / 29380423.0
cdef double _P6_3 = 69997945.0 / 29380423.0

cdef double _BREAK_PASS_THETA = 1e-10
cdef double _SNAP_REL = 1e-12
cdef int _MAX_REAIMS = 10
cdef int _EVENT_SCAN = 16
cdef int _EVENT_BISECTIONS = 60

cdef int _ST_DONE = 0, _ST_EVENT = 1, _ST_UNDERFLOW = 2, _ST_BLOWUP = 3, _ST_MAXSTEPS = 4
cdef int _EV_NONE = 0, _EV_VLINE = 1, _EV_XAXIS_POS = 2
cdef int _DIR_INC = 1, _DIR_DEC = -1, _DIR_EITHER = 0


ctypedef struct SysC:
    const double* Fneg
    Py_ssize_t nFneg
    const double* Fpos
    Py_ssize_t nFpos
    const double* gneg
    Py_ssize_t ngneg
    const double* gpos
    Py_ssize_t ngpos


cdef inline double _peval(const double* c, Py_ssize_t n, double x) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(n - 1, -1, -1):
        acc = acc * x + c[i]
    return acc


cdef inline void _rhs(const SysC* s, double x, double y, double* ox, double* oy) noexcept nogil:
    if x < 0.0:
        ox[0] = y - _peval(s.Fneg, s.nFneg, x)
        oy[0] = -_peval(s.gneg, s.ngneg, x)
    else:
        ox[0] = y - _peval(s.Fpos, s.nFpos, x)
        oy[0] = -_peval(s.gpos, s.ngpos, x)


cdef inline double _rms(double u, double v) noexcept nogil:
    return sqrt(0.5 * (u * u + v * v))


cdef inline double _dense_eval(double base, double h, double q0, double q1,
                               double q2, double q3, double theta) noexcept nogil:
    return base + h * theta * (q0 + theta * (q1 + theta * (q2 + theta * q3)))


def run_core(
    Fneg,
    Fpos,
    gneg,
    gpos,
    double x0,
    double y0,
    double t0,
    double t_end,
    double rtol,
    double atol,
    int event_kind,
    double event_c,
    int event_dir,
    bint want_dense,
    long max_steps,
    double blowup,
):
    """Advance from (x0, y0) at t0 toward t_end; stop at t_end or first event.

    Returns (status, t, x, y, dense, naccept, nreject, nfev). `dense` is an
    (naccept, 12) float array of rows [t_old, h, x_old, y_old, qx0..qx3,
    qy0..qy3], or None when want_dense is false.
    """
    arr_Fneg = np.ascontiguousarray([float(c) for c in Fneg] or [0.0], dtype=np.float64)
    arr_Fpos = np.ascontiguousarray([float(c) for c in Fpos] or [0.0], dtype=np.float64)
    arr_gneg = np.ascontiguousarray([float(c) for c in gneg] or [0.0], dtype=np.float64)
    arr_gpos = np.ascontiguousarray([float(c) for c in gpos] or [0.0], dtype=np.float64)
    cdef double[::1] mv_Fneg = arr_Fneg
    cdef double[::1] mv_Fpos = arr_Fpos
    cdef double[::1] mv_gneg = arr_gneg
    cdef double[::1] mv_gpos = arr_gpos

    cdef SysC s
    s.Fneg = &mv_Fneg[0]
    s.nFneg = mv_Fneg.shape[0]
    s.Fpos = &mv_Fpos[0]
    s.nFpos = mv_Fpos.shape[0]
    s.gneg = &mv_gneg[0]
    s.ngneg = mv_gneg.shape[0]
    s.gpos = &mv_gpos[0]
    s.ngpos = mv_gpos.shape[0]

    cdef double t = t0, x = x0, y = y0
    cdef double span = t_end - t
    if span <= 0.0:
        raise ValueError("t_end must exceed t0")

    cdef double f1x = 0.0, f1y = 0.0
    _rhs(&s, x, y, &f1x, &f1y)
    cdef long nfev = 1

    # Hairer-style first step guess
    cdef double sx = atol + rtol * fabs(x)
    cdef double sy = atol + rtol * fabs(y)
    cdef double d0 = _rms(x / sx, y / sy)
    cdef double d1 = _rms(f1x / sx, f1y / sy)
    cdef double h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * (d0 / d1)
    if h0 > span:
        h0 = span
    cdef double ex = 0.0, ey = 0.0
    _rhs(&s, x + h0 * f1x, y + h0 * f1y, &ex, &ey)
    nfev += 1
    cdef double d2 = _rms((ex - f1x) / sx, (ey - f1y) / sy) / h0
    cdef double d12 = d1 if d1 > d2 else d2
    cdef double h1
    if d12 <= 1e-15:
        h1 = h0 * 1e-3
        if h1 < 1e-6:
            h1 = 1e-6
    else:
        h1 = pow(0.01 / d12, 0.2)
    cdef double h = 100.0 * h0
    if h1 < h:
        h = h1
    if span < h:
        h = span

    rows = [] if want_dense else None
    cdef long naccept = 0
    cdef long nreject = 0
    cdef int status = _ST_MAXSTEPS
    cdef int reaims = 0
    cdef long attempts = 0

    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y
    cdef double ax, ay, xn, yn, errx, erry, err, factor
    cdef double qx0, qx1, qx2, qx3, qy0, qy1, qy2, qy3
    cdef double s0, cross_theta, prev_theta, prev_val, th, val, a, b, fa, fm, m
    cdef double prev_res, res, rm, ra, th_star, x_star, t_ev, x_ev, y_ev, event_theta
    cdef bint snapped, up, down, hit
    cdef int i, j

    while attempts < max_steps:
        if t_end - t <= 1e-14 * (1.0 if 1.0 > fabs(t_end) else fabs(t_end)):
            status = _ST_DONE
            break
        if h > t_end - t:
            h = t_end - t
        if h < 1e-14 * (1.0 if 1.0 > fabs(t) else fabs(t)):
            status = _ST_UNDERFLOW
            break
        attempts += 1

        k1x, k1y = f1x, f1y
        ax = x + h * (_A21 * k1x)
        ay = y + h * (_A21 * k1y)
        _rhs(&s, ax, ay, &k2x, &k2y)
        ax = x + h * (_A31 * k1x + _A32 * k2x)
        ay = y + h * (_A31 * k1y + _A32 * k2y)
        _rhs(&s, ax, ay, &k3x, &k3y)
        ax = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        ay = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        _rhs(&s, ax, ay, &k4x, &k4y)
        ax = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        ay = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        _rhs(&s, ax, ay, &k5x, &k5y)
        ax = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        ay = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        _rhs(&s, ax, ay, &k6x, &k6y)
        xn = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        yn = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        _rhs(&s, xn, yn, &k7x, &k7y)
        nfev += 6

        errx = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        erry = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        sx = atol + rtol * (fabs(x) if fabs(x) > fabs(xn) else fabs(xn))
        sy = atol + rtol * (fabs(y) if fabs(y) > fabs(yn) else fabs(yn))
        err = _rms(errx / sx, erry / sy)

        if err > 1.0:
            nreject += 1
            factor = 0.9 * pow(err, -0.2)
            if factor > 1.0:
                factor = 1.0
            if factor < 0.2:
                factor = 0.2
            h *= factor
            reaims = 0
            continue

        qx0 = k1x * _P0_0
        qx1 = k1x * _P0_1 + k3x * _P2_1 + k4x * _P3_1 + k5x * _P4_1 + k6x * _P5_1 + k7x * _P6_1
        qx2 = k1x * _P0_2 + k3x * _P2_2 + k4x * _P3_2 + k5x * _P4_2 + k6x * _P5_2 + k7x * _P6_2
        qx3 = k1x * _P0_3 + k3x * _P2_3 + k4x * _P3_3 + k5x * _P4_3 + k6x * _P5_3 + k7x * _P6_3
        qy0 = k1y * _P0_0
        qy1 = k1y * _P0_1 + k3y * _P2_1 + k4y * _P3_1 + k5y * _P4_1 + k6y * _P5_1 + k7y * _P6_1
        qy2 = k1y * _P0_2 + k3y * _P2_2 + k4y * _P3_2 + k5y * _P4_2 + k6y * _P5_2 + k7y * _P6_2
        qy3 = k1y * _P0_3 + k3y * _P2_3 + k4y * _P3_3 + k5y * _P4_3 + k6y * _P5_3 + k7y * _P6_3

        # breakpoint: if the interpolated x changes sign inside the step,
        # shorten the step to land on x = 0, then snap.
        if reaims < _MAX_REAIMS:
            s0 = -1.0 if x < 0.0 else 1.0
            cross_theta = -1.0
            prev_theta = 0.0
            prev_val = x
            for i in range(1, _EVENT_SCAN + 1):
                th = i / <double>_EVENT_SCAN
                val = _dense_eval(x, h, qx0, qx1, qx2, qx3, th)
                if val * s0 < 0.0:
                    a, b = prev_theta, th
                    fa = prev_val
                    for j in range(_EVENT_BISECTIONS):
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
        snapped = fabs(xn) <= _SNAP_REL * (1.0 + fabs(x))
        if snapped and xn != 0.0:
            xn = 0.0
            _rhs(&s, xn, yn, &k7x, &k7y)
            nfev += 1

        if rows is not None:
            rows.append((t, h, x, y, qx0, qx1, qx2, qx3, qy0, qy1, qy2, qy3))
        naccept += 1
        reaims = 0

        event_theta = -1.0
        if event_kind != _EV_NONE:
            prev_theta = 0.0
            if event_kind == _EV_VLINE:
                prev_res = x - event_c
            else:
                prev_res = y
            for i in range(1, _EVENT_SCAN + 1):
                th = i / <double>_EVENT_SCAN
                if event_kind == _EV_VLINE:
                    res = _dense_eval(x, h, qx0, qx1, qx2, qx3, th) - event_c
                else:
                    res = _dense_eval(y, h, qy0, qy1, qy2, qy3, th)
                up = prev_res < 0.0 and res >= 0.0
                down = prev_res > 0.0 and res <= 0.0
                hit = (
                    (event_dir == _DIR_INC and up)
                    or (event_dir == _DIR_DEC and down)
                    or (event_dir == _DIR_EITHER and (up or down))
                )
                if hit:
                    a, b = prev_theta, th
                    ra = prev_res
                    for j in range(_EVENT_BISECTIONS):
                        m = 0.5 * (a + b)
                        if event_kind == _EV_VLINE:
                            rm = _dense_eval(x, h, qx0, qx1, qx2, qx3, m) - event_c
                        else:
                            rm = _dense_eval(y, h, qy0, qy1, qy2, qy3, m)
                        if (ra < 0.0) == (rm < 0.0):
                            a, ra = m, rm
                        else:
                            b = m
                    th_star = 0.5 * (a + b)
                    if event_kind == _EV_XAXIS_POS:
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
            if event_kind == _EV_VLINE:
                x_ev = event_c
            else:
                y_ev = 0.0
            t, x, y = t_ev, x_ev, y_ev
            status = _ST_EVENT
            break

        t = t + h
        x, y = xn, yn
        f1x, f1y = k7x, k7y

        if fabs(x) > blowup or fabs(y) > blowup:
            status = _ST_BLOWUP
            break

        if err > 0.0:
            factor = 0.9 * pow(err, -0.2)
            if factor > 10.0:
                factor = 10.0
            if factor < 0.2:
                factor = 0.2
        else:
            factor = 10.0
        h *= factor

    dense = np.asarray(rows, dtype=np.float64).reshape(-1, 12) if rows is not None else None
    return status, t, x, y, dense, naccept, nreject, nfev
