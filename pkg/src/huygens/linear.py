"""Linear theory: the Lyapunov function of the linearized clocks, the anti-phase
asymptote it implies, and closed-form spectra of the generating systems."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ModelKind, Trajectory
from .errors import InvalidParameterError, ShapeError
from .params import DimensionlessParams, PoincareParams

__all__ = [
    "LyapunovSample",
    "ModeSet",
    "lyapunov",
    "lyapunov_series",
    "antiphase_asymptote",
    "generating_modes",
]


@dataclass(frozen=True)
class LyapunovSample:
    E: float
    Edot: float
    t: float | None = None


@dataclass(frozen=True)
class ModeSet:
    eigenvalues: tuple
    model: ModelKind

    def as_array(self):
        return np.array(self.eigenvalues, dtype=complex)


def _check_beta(params, n):
    if not 0 <= params.beta <= 1.0 / n:
        raise InvalidParameterError("beta must lie in [0, 1/n]")


def lyapunov(state, params: DimensionlessParams, t=None) -> LyapunovSample:
    """Energy-like function of the Linear model and its exact rate of change.

    ``E = beta*th^2 + (beta - n*beta^2)*dth^2 + n*Omega^2*y^2 + n*(beta*dth + dy)^2``
    with ``th`` the sum of pendulum angles; along the flow ``dE/dt = -2*n*sigma*dy^2``.
    """
    x = np.asarray(state, dtype=float)
    n = params.n
    if x.shape != (2 * n + 2,):
        raise ShapeError(f"expected a state of length {2 * n + 2}")
    _check_beta(params, n)
    beta = params.beta
    th = x[0:2 * n:2].sum()
    dth = x[1:2 * n:2].sum()
    y, dy = x[2 * n], x[2 * n + 1]
    E = (beta * th ** 2 + (beta - n * beta ** 2) * dth ** 2 + n * params.omega2 * y ** 2
         + n * (beta * dth + dy) ** 2)
    return LyapunovSample(float(E), float(-2.0 * n * params.sigma * dy ** 2), t)


def lyapunov_series(traj: Trajectory):
    """``(E, Edot)`` arrays along a Linear-model trajectory."""
    samples = [lyapunov(s, traj.params) for s in traj.states]
    return (np.array([s.E for s in samples]), np.array([s.Edot for s in samples]))


def antiphase_asymptote(theta1_0, dtheta1_0, theta2_0, dtheta2_0):
    """Amplitude and phase of the surviving anti-phase mode of the Linear model.

    ``delta = theta1 - theta2`` evolves as ``A*sin(t + phi)`` in the limit, with
    ``A = |(delta(0), delta'(0))|`` and ``phi = atan2(delta(0), delta'(0))``.
    Each pendulum then swings with amplitude ``A/2``.
    """
    d = theta1_0 - theta2_0
    dd = dtheta1_0 - dtheta2_0
    amp = math.hypot(d, dd)
    if amp == 0:
        return 0.0, 0.0
    return amp, math.atan2(d, dd)


def generating_modes(model: ModelKind, params: PoincareParams) -> ModeSet:
    """Closed-form eigenvalues of the generating matrix, pendulum modes first.

    Order: ``i, i, -i, -i`` followed by the frame modes
    (``i*Omega, -i*Omega`` / ``-(sigma -+ sqrt(sigma^2 - 4 Omega^2))/2`` /
    ``-(sigma -+ sqrt(sigma^2 - 8 kappa))/2, -sigma, 0``).
    """
    pend = [1j, 1j, -1j, -1j]
    s = params.sigma
    if model is ModelKind.SMALL_SIGMA:
        frame = [1j * params.omega, -1j * params.omega]
    elif model is ModelKind.THREE_DOF:
        root = cmath.sqrt(s * s - 4 * params.omega ** 2)
        frame = [-0.5 * (s - root), -0.5 * (s + root)]
    elif model is ModelKind.TWO_MASS:
        if params.kappa is None:
            raise InvalidParameterError("TwoMass needs kappa")
        root = cmath.sqrt(s * s - 8 * params.kappa)
        frame = [-0.5 * (s - root), -0.5 * (s + root), complex(-s), 0j]
    else:
        raise InvalidParameterError(f"no generating system for {model.tag}")
    return ModeSet(tuple(complex(v) for v in pend + frame), model)
