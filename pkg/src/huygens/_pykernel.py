"""Pure-Python integration kernel.

Reference twin of ``_ckernel.pyx``: same right-hand sides, same
Dormand-Prince 5(4) stepper, same arithmetic order.  Used when the compiled
extension is unavailable or ``HUYGENS_KERNEL=python`` is set.

Model codes and parameter vectors (``p``)::

    0 full nonlinear   [sigma, omega2, beta, gamma, epsilon]
    1 dimensionless    [sigma, omega2, beta, gamma, epsilon]
    2 linear           [sigma, omega2, beta, gamma, epsilon]
    3 small sigma      [mu, a, b, omega2, gamma]
    4 three dof sigma  [mu, a, sigma, omega2, gamma]
    5 two mass         [mu, a, sigma, kappa, gamma]
"""
import math

import numpy as np

NAME = "python"

# Dormand-Prince 5(4) tableau; the systems are autonomous so the nodes c_i are unused
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)
# dense output: y(t + s*h) = y + h * sum_i K_i * (P[i][0] s + P[i][1] s^2 + ...)
P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0

OK, UNDERFLOW, MAX_STEPS = 0, 1, 2


def rhs(model, y, p, n):
    """Time derivative of state ``y`` (a sequence) for ``model``; returns a list."""
    dy = [0.0] * len(y)
    if model == 5:
        mu, a, sigma, kappa, gamma = p[0], p[1], p[2], p[3], p[4]
        th1, w1, th2, w2, y1, v1, y2, v2 = y
        d = y2 - y1
        f1 = -sigma * v1 + kappa * d + th1 * (1.0 + w1 * w1)
        f2 = -sigma * v2 - kappa * d + th2 * (1.0 + w2 * w2)
        g2 = gamma * gamma
        dy[0] = w1
        dy[1] = -th1 + sigma * v1 - kappa * d + mu * (a * (g2 - th1 * th1) * w1 - f1)
        dy[2] = w2
        dy[3] = -th2 + sigma * v2 + kappa * d + mu * (a * (g2 - th2 * th2) * w2 - f2)
        dy[4] = v1
        dy[5] = -sigma * v1 + kappa * d + mu * f1
        dy[6] = v2
        dy[7] = -sigma * v2 - kappa * d + mu * f2
        return dy

    yf = y[2 * n]
    vf = y[2 * n + 1]
    if model <= 2:
        sigma, omega2, beta, gamma, eps = p[0], p[1], p[2], p[3], p[4]
        g2 = gamma * gamma
        if model == 0:
            ry = -sigma * vf - omega2 * yf
            num = ry
            den = 1.0
            for i in range(n):
                th = y[2 * i]
                w = y[2 * i + 1]
                s = math.sin(th)
                c = math.cos(th)
                ri = eps * (g2 - th * th) * w - s
                num += beta * (w * w * s - c * ri)
                den -= beta * c * c
            acc = num / den
            for i in range(n):
                th = y[2 * i]
                w = y[2 * i + 1]
                ri = eps * (g2 - th * th) * w - math.sin(th)
                dy[2 * i] = w
                dy[2 * i + 1] = ri - math.cos(th) * acc
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
        return dy

    mu, a, damp, omega2, gamma = p[0], p[1], p[2], p[3], p[4]
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
    return dy


def _rms(vals):
    return math.sqrt(sum(v * v for v in vals) / len(vals))


def _initial_step(model, y0, f0, p, n, tol, t_end):
    scale = [tol + tol * abs(v) for v in y0]
    d0 = _rms([v / s for v, s in zip(y0, scale)])
    d1 = _rms([v / s for v, s in zip(f0, scale)])
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if not 0.0 < h0 < math.inf:
        h0 = 1e-6
    y1 = [v + h0 * f for v, f in zip(y0, f0)]
    f1 = rhs(model, y1, p, n)
    d2 = _rms([(a - b) / s for a, b, s in zip(f1, f0, scale)]) / h0
    big = max(d1, d2)
    if big <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / big) ** 0.2
    h = min(100.0 * h0, h1, t_end)
    return h if h > 0.0 else min(1e-6, t_end)


def integrate(model, y0, p, n, t_end, tol, ts, h_fixed=0.0, max_steps=10_000_000):
    """Integrate from t = 0 to ``t_end`` and sample the dense output at ``ts``.

    Returns ``(states, filled, status, t_last, nsteps, nreject, nfev)`` where
    ``states[:filled]`` are valid samples.
    """
    d = len(y0)
    y = [float(v) for v in y0]
    p = [float(v) for v in p]
    nsamp = len(ts)
    out = np.empty((nsamp, d))
    idx = 0
    t = 0.0
    while idx < nsamp and ts[idx] <= 0.0:
        out[idx] = y
        idx += 1
    f = rhs(model, y, p, n)
    nfev = 1
    if not all(math.isfinite(v) for v in f):
        return out, idx, UNDERFLOW, t, 0, 0, nfev
    fixed = h_fixed > 0
    if fixed:
        h = h_fixed
    else:
        h = _initial_step(model, y, f, p, n, tol, t_end)
        nfev += 1
    nsteps = nreject = 0
    status = OK
    just_rejected = False
    while t < t_end:
        if nsteps + nreject >= max_steps:
            status = MAX_STEPS
            break
        if t + h >= t_end or t_end - (t + h) < 1e-10 * h:
            h = t_end - t
            last = True
        else:
            last = False
        k1 = f
        k2 = rhs(model, [y[i] + h * (A21 * k1[i]) for i in range(d)], p, n)
        k3 = rhs(model, [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in range(d)], p, n)
        k4 = rhs(model, [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
                         for i in range(d)], p, n)
        k5 = rhs(model, [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                         for i in range(d)], p, n)
        k6 = rhs(model, [y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                                     + A65 * k5[i]) for i in range(d)], p, n)
        ynew = [y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
                for i in range(d)]
        k7 = rhs(model, ynew, p, n)
        nfev += 6
        err = 0.0
        finite = True
        for i in range(d):
            if not (math.isfinite(ynew[i]) and math.isfinite(k7[i])):
                finite = False
                break
            e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                     + E7 * k7[i])
            sc = tol + tol * max(abs(y[i]), abs(ynew[i]))
            q = e / sc
            err += q * q
        err = math.sqrt(err / d) if finite else math.inf
        if fixed and finite:
            err = 0.0
        if err <= 1.0:
            tnew = t_end if last else t + h
            while idx < nsamp and ts[idx] <= tnew:
                if ts[idx] >= tnew:
                    out[idx] = ynew
                else:
                    s = (ts[idx] - t) / h
                    s2 = s * s
                    s3 = s2 * s
                    s4 = s3 * s
                    q = [P[j][0] * s + P[j][1] * s2 + P[j][2] * s3 + P[j][3] * s4
                         for j in range(7)]
                    out[idx] = [y[i] + h * (q[0] * k1[i] + q[2] * k3[i] + q[3] * k4[i]
                                            + q[4] * k5[i] + q[5] * k6[i] + q[6] * k7[i])
                                for i in range(d)]
                idx += 1
            t = tnew
            y = ynew
            f = k7
            nsteps += 1
            if not fixed:
                if err == 0.0:
                    factor = MAX_FACTOR
                else:
                    factor = min(MAX_FACTOR, SAFETY * err ** -0.2)
                if just_rejected:
                    factor = min(factor, 1.0)
                h *= factor
            just_rejected = False
        else:
            nreject += 1
            if fixed:
                status = UNDERFLOW
                break
            if math.isfinite(err):
                factor = max(MIN_FACTOR, SAFETY * err ** -0.2)
            else:
                factor = MIN_FACTOR
            h *= factor
            just_rejected = True
            if not h >= 1e-14 * max(1.0, abs(t)):  # also catches NaN
                status = UNDERFLOW
                break
    return out, idx, status, t, nsteps, nreject, nfev
