# cython: language_level=3
"""Compiled integration kernel.

Mirrors ``_pykernel`` operation for operation (model codes, parameter
vectors, Dormand-Prince 5(4) stepping, dense output), so both backends
produce the same trajectories up to floating-point round-off.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, pow, fabs, fmax, fmin, isfinite, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

NAME = "cython"

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561
cdef double A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247
cdef double A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192
cdef double B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920
cdef double E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double[7][4] P
P[0][:] = [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608,
           -12715105075.0 / 11282082432]
P[1][:] = [0.0, 0.0, 0.0, 0.0]
P[2][:] = [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933,
           87487479700.0 / 32700410799]
P[3][:] = [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304,
           -10690763975.0 / 1880347072]
P[4][:] = [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408,
           701980252875.0 / 199316789632]
P[5][:] = [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883,
           -1453857185.0 / 822651844]
P[6][:] = [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423,
           69997945.0 / 29380423]

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0

OK, UNDERFLOW, MAX_STEPS = 0, 1, 2


cdef void _rhs(int model, const double* y, double* dy, const double* p, int n) noexcept nogil:
    cdef int i
    cdef double mu, a, sigma, kappa, gamma, g2, d, f1, f2
    cdef double yf, vf, omega2, beta, eps, num, den, acc, th, w, s, c, ri, total, force
    cdef double damp, coupling, frame, lin, yacc
    if model == 5:
        mu = p[0]; a = p[1]; sigma = p[2]; kappa = p[3]; gamma = p[4]
        d = y[6] - y[4]
        f1 = -sigma * y[5] + kappa * d + y[0] * (1.0 + y[1] * y[1])
        f2 = -sigma * y[7] - kappa * d + y[2] * (1.0 + y[3] * y[3])
        g2 = gamma * gamma
        dy[0] = y[1]
        dy[1] = -y[0] + sigma * y[5] - kappa * d + mu * (a * (g2 - y[0] * y[0]) * y[1] - f1)
        dy[2] = y[3]
        dy[3] = -y[2] + sigma * y[7] + kappa * d + mu * (a * (g2 - y[2] * y[2]) * y[3] - f2)
        dy[4] = y[5]
        dy[5] = -sigma * y[5] + kappa * d + mu * f1
        dy[6] = y[7]
        dy[7] = -sigma * y[7] - kappa * d + mu * f2
        return

    yf = y[2 * n]
    vf = y[2 * n + 1]
    if model <= 2:
        sigma = p[0]; omega2 = p[1]; beta = p[2]; gamma = p[3]; eps = p[4]
        g2 = gamma * gamma
        if model == 0:
            num = -sigma * vf - omega2 * yf
            den = 1.0
            for i in range(n):
                th = y[2 * i]
                w = y[2 * i + 1]
                s = sin(th)
                c = cos(th)
                ri = eps * (g2 - th * th) * w - s
                num += beta * (w * w * s - c * ri)
                den -= beta * c * c
            acc = num / den
            for i in range(n):
                th = y[2 * i]
                w = y[2 * i + 1]
                ri = eps * (g2 - th * th) * w - sin(th)
                dy[2 * i] = w
                dy[2 * i + 1] = ri - cos(th) * acc
        else:
            total = 0.0
            for i in range(n):
                th = y[2 * i]
                w = y[2 * i + 1]
                if model == 1:
                    total += th + w * w * th - eps * (g2 - th * th) * w
                else:
                    total += th
            acc = (-sigma * vf - omega2 * yf + beta * total) / (1.0 - n * beta)
            for i in range(n):
                th = y[2 * i]
                w = y[2 * i + 1]
                force = eps * (g2 - th * th) * w if model == 1 else 0.0
                dy[2 * i] = w
                dy[2 * i + 1] = force - th - acc
        dy[2 * n] = vf
        dy[2 * n + 1] = acc
        return

    mu = p[0]; a = p[1]; damp = p[2]; omega2 = p[3]; gamma = p[4]
    g2 = gamma * gamma
    coupling = 0.0
    for i in range(n):
        th = y[2 * i]
        w = y[2 * i + 1]
        coupling += (1.0 + w * w) * th
    if model == 3:
        frame = -damp * vf - n * omega2 * yf + coupling
        lin = omega2 * yf
        yacc = -omega2 * yf + mu * frame
    else:
        frame = -n * (damp * vf + omega2 * yf) + coupling
        lin = damp * vf + omega2 * yf
        yacc = -damp * vf - omega2 * yf + mu * frame
    for i in range(n):
        th = y[2 * i]
        w = y[2 * i + 1]
        dy[2 * i] = w
        dy[2 * i + 1] = -th + lin + mu * (a * (g2 - th * th) * w - frame)
    dy[2 * n] = vf
    dy[2 * n + 1] = yacc


def rhs(int model, y, p, int n):
    """Time derivative of state ``y`` for ``model``; returns a list."""
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] out = np.empty(yv.shape[0])
    _rhs(model, &yv[0], &out[0], &pv[0], n)
    return list(out)


cdef double _rms_scaled(const double* v, const double* scale, int d) noexcept nogil:
    cdef double acc = 0.0, q
    cdef int i
    for i in range(d):
        q = v[i] / scale[i]
        acc += q * q
    return sqrt(acc / d)


def integrate(int model, y0, p, int n, double t_end, double tol, ts,
              double h_fixed=0.0, long long max_steps=10000000):
    """Integrate from t = 0 to ``t_end`` and sample the dense output at ``ts``.

    Returns ``(states, filled, status, t_last, nsteps, nreject, nfev)``.
    """
    cdef double[::1] y0v = np.ascontiguousarray(y0, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] tsv = np.ascontiguousarray(ts, dtype=np.float64)
    cdef int d = y0v.shape[0]
    cdef Py_ssize_t nsamp = tsv.shape[0]
    out_arr = np.empty((nsamp, d))
    cdef double[:, ::1] out = out_arr
    cdef double* work = <double*> malloc(13 * d * sizeof(double))
    if work == NULL:
        raise MemoryError()
    cdef double* y = work
    cdef double* ynew = work + d
    cdef double* tmp = work + 2 * d
    cdef double* k1 = work + 3 * d
    cdef double* k2 = work + 4 * d
    cdef double* k3 = work + 5 * d
    cdef double* k4 = work + 6 * d
    cdef double* k5 = work + 7 * d
    cdef double* k6 = work + 8 * d
    cdef double* k7 = work + 9 * d
    cdef double* scale = work + 10 * d
    cdef double* f1 = work + 11 * d
    cdef double* swap
    cdef int i, j
    cdef Py_ssize_t idx = 0
    cdef double t = 0.0, h, h0, h1, d0, d1, d2, big, err, e, sc, q, factor, tnew, s, s2, s3, s4
    cdef double[7] qq
    cdef long long nsteps = 0, nreject = 0, nfev = 0
    cdef int status = 0
    cdef bint fixed = h_fixed > 0
    cdef bint last, finite, just_rejected = False

    try:
        with nogil:
            for i in range(d):
                y[i] = y0v[i]
            while idx < nsamp and tsv[idx] <= 0.0:
                for i in range(d):
                    out[idx, i] = y[i]
                idx += 1
            _rhs(model, y, k1, &pv[0], n)
            nfev = 1
            for i in range(d):
                if not isfinite(k1[i]):
                    status = 1
            if status != 0:
                pass  # non-finite derivative at the start: reported as underflow at t = 0
            elif fixed:
                h = h_fixed
            else:
                for i in range(d):
                    scale[i] = tol + tol * fabs(y[i])
                d0 = _rms_scaled(y, scale, d)
                d1 = _rms_scaled(k1, scale, d)
                if d0 < 1e-5 or d1 < 1e-5:
                    h0 = 1e-6
                else:
                    h0 = 0.01 * d0 / d1
                if not (h0 > 0.0 and h0 < INFINITY):
                    h0 = 1e-6
                for i in range(d):
                    tmp[i] = y[i] + h0 * k1[i]
                _rhs(model, tmp, f1, &pv[0], n)
                nfev += 1
                for i in range(d):
                    tmp[i] = f1[i] - k1[i]
                d2 = _rms_scaled(tmp, scale, d) / h0
                big = fmax(d1, d2)
                if big <= 1e-15:
                    h1 = fmax(1e-6, h0 * 1e-3)
                else:
                    h1 = pow(0.01 / big, 0.2)
                h = fmin(fmin(100.0 * h0, h1), t_end)
                if not h > 0.0:
                    h = fmin(1e-6, t_end)

            while status == 0 and t < t_end:
                if nsteps + nreject >= max_steps:
                    status = 2
                    break
                if t + h >= t_end or t_end - (t + h) < 1e-10 * h:
                    h = t_end - t
                    last = True
                else:
                    last = False
                for i in range(d):
                    tmp[i] = y[i] + h * (A21 * k1[i])
                _rhs(model, tmp, k2, &pv[0], n)
                for i in range(d):
                    tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
                _rhs(model, tmp, k3, &pv[0], n)
                for i in range(d):
                    tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
                _rhs(model, tmp, k4, &pv[0], n)
                for i in range(d):
                    tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                _rhs(model, tmp, k5, &pv[0], n)
                for i in range(d):
                    tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                                         + A65 * k5[i])
                _rhs(model, tmp, k6, &pv[0], n)
                for i in range(d):
                    ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i]
                                          + B6 * k6[i])
                _rhs(model, ynew, k7, &pv[0], n)
                nfev += 6
                err = 0.0
                finite = True
                for i in range(d):
                    if not (isfinite(ynew[i]) and isfinite(k7[i])):
                        finite = False
                        break
                    e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                             + E7 * k7[i])
                    sc = tol + tol * fmax(fabs(y[i]), fabs(ynew[i]))
                    q = e / sc
                    err += q * q
                if finite:
                    err = sqrt(err / d)
                else:
                    err = INFINITY
                if fixed and finite:
                    err = 0.0
                if err <= 1.0:
                    tnew = t_end if last else t + h
                    while idx < nsamp and tsv[idx] <= tnew:
                        if tsv[idx] >= tnew:
                            for i in range(d):
                                out[idx, i] = ynew[i]
                        else:
                            s = (tsv[idx] - t) / h
                            s2 = s * s
                            s3 = s2 * s
                            s4 = s3 * s
                            for j in range(7):
                                qq[j] = P[j][0] * s + P[j][1] * s2 + P[j][2] * s3 + P[j][3] * s4
                            for i in range(d):
                                out[idx, i] = y[i] + h * (qq[0] * k1[i] + qq[2] * k3[i]
                                                          + qq[3] * k4[i] + qq[4] * k5[i]
                                                          + qq[5] * k6[i] + qq[6] * k7[i])
                        idx += 1
                    t = tnew
                    swap = y
                    y = ynew
                    ynew = swap
                    swap = k1
                    k1 = k7
                    k7 = swap
                    nsteps += 1
                    if not fixed:
                        if err == 0.0:
                            factor = MAX_FACTOR
                        else:
                            factor = fmin(MAX_FACTOR, SAFETY * pow(err, -0.2))
                        if just_rejected:
                            factor = fmin(factor, 1.0)
                        h *= factor
                    just_rejected = False
                else:
                    nreject += 1
                    if fixed:
                        status = 1
                        break
                    if isfinite(err):
                        factor = fmax(MIN_FACTOR, SAFETY * pow(err, -0.2))
                    else:
                        factor = MIN_FACTOR
                    h *= factor
                    just_rejected = True
                    if not h >= 1e-14 * fmax(1.0, fabs(t)):  # also catches NaN
                        status = 1
                        break
    finally:
        free(work)
    return out_arr, idx, status, t, nsteps, nreject, nfev
