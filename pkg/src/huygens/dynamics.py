"""Equations of motion for every clock model and the adaptive integrator.

The stepping itself runs in a kernel module: the compiled ``_ckernel`` when
it was built, otherwise the pure-Python ``_pykernel``.  Set
``HUYGENS_KERNEL=python`` (or ``cython``) to force a choice.
"""
from __future__ import annotations

import enum
import importlib
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import IntegrationError, InvalidParameterError, NumericError, ShapeError
from .params import DimensionlessParams, PoincareParams

__all__ = [
    "ModelKind",
    "Trajectory",
    "KERNEL",
    "get_kernel",
    "rhs",
    "integrate",
    "project_rigid_mode",
    "sample_times",
    "DEFAULT_TOL",
    "DEFAULT_SAMPLE_INTERVAL",
    "DEFAULT_MAX_STEPS",
]

DEFAULT_TOL = 1e-9
DEFAULT_SAMPLE_INTERVAL = 2 * math.pi / 200
DEFAULT_MAX_STEPS = 10_000_000


class ModelKind(enum.Enum):
    """Model tag; ``code`` indexes the kernel, ``cli_name`` is the command-line spelling."""

    FULL_NONLINEAR = ("FullNonlinear", 0, "full-nonlinear")
    DIMENSIONLESS = ("Dimensionless", 1, "dimensionless")
    LINEAR = ("Linear", 2, "linear")
    SMALL_SIGMA = ("SmallSigmaFirstOrder", 3, "small-sigma")
    THREE_DOF = ("ThreeDofSigma", 4, "three-dof")
    TWO_MASS = ("TwoMass", 5, "two-mass")

    def __init__(self, tag, code, cli_name):
        self.tag = tag
        self.code = code
        self.cli_name = cli_name

    @property
    def uses_poincare_params(self):
        return self.code >= 3

    def state_size(self, n=2):
        return 2 * n + 4 if self is ModelKind.TWO_MASS else 2 * n + 2

    def columns(self, n=2):
        names = []
        for i in range(1, n + 1):
            names += [f"theta{i}", f"dtheta{i}"]
        if self is ModelKind.TWO_MASS:
            return names + ["y", "dy", "y2", "dy2"]
        return names + ["y", "dy"]

    @classmethod
    def parse(cls, name):
        for kind in cls:
            if name in (kind.tag, kind.cli_name, kind.name):
                return kind
        raise InvalidParameterError(f"unknown model {name!r}")


def get_kernel(name="auto"):
    """Return the kernel module: ``"cython"``, ``"python"`` or ``"auto"`` (compiled if built)."""
    if name in ("auto", "cython"):
        try:
            return importlib.import_module("huygens._ckernel")
        except ImportError:
            if name == "cython":
                raise
    elif name != "python":
        raise ValueError(f"unknown kernel {name!r}")
    return importlib.import_module("huygens._pykernel")


KERNEL = get_kernel(os.environ.get("HUYGENS_KERNEL", "auto"))


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: ``times`` (N,) strictly increasing, ``states`` (N, d)."""

    times: np.ndarray
    states: np.ndarray
    model: ModelKind
    params: DimensionlessParams | PoincareParams
    tol: float = DEFAULT_TOL
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def n_pendulums(self):
        d = self.states.shape[1]
        return (d - 4) // 2 if self.model is ModelKind.TWO_MASS else (d - 2) // 2

    def theta(self, i):
        """Angle of pendulum ``i`` (0-based)."""
        return self.states[:, 2 * i]

    def dtheta(self, i):
        return self.states[:, 2 * i + 1]

    def window(self, t0=None, t1=None):
        """Sub-trajectory with ``t0 <= t <= t1``."""
        mask = np.ones(len(self.times), dtype=bool)
        if t0 is not None:
            mask &= self.times >= t0
        if t1 is not None:
            mask &= self.times <= t1
        return Trajectory(self.times[mask].copy(), self.states[mask].copy(), self.model,
                          self.params, self.tol, dict(self.stats))

    @property
    def columns(self):
        return ["t"] + self.model.columns(self.n_pendulums)


def _check_params(model, params):
    if model.uses_poincare_params:
        if not isinstance(params, PoincareParams):
            raise InvalidParameterError(f"{model.tag} needs PoincareParams")
        if model is ModelKind.TWO_MASS and params.kappa is None:
            raise InvalidParameterError("TwoMass needs kappa")
    elif not isinstance(params, DimensionlessParams):
        raise InvalidParameterError(f"{model.tag} needs DimensionlessParams")


def _pendulum_count(model, size, params):
    if model is ModelKind.TWO_MASS:
        if size != 8:
            raise ShapeError(f"TwoMass state has 8 entries, got {size}")
        return 2
    if size < 4 or size % 2:
        raise ShapeError(f"{model.tag} state must have length 2n+2, got {size}")
    n = (size - 2) // 2
    if isinstance(params, DimensionlessParams) and params.n != n:
        raise ShapeError(f"state length {size} does not match n={params.n}")
    return n


def _kernel_params(model, params):
    if model.uses_poincare_params:
        p = params
        if model is ModelKind.SMALL_SIGMA:
            third = p.b if p.mu > 0 else 0.0
        else:
            third = p.sigma
        fourth = p.kappa if model is ModelKind.TWO_MASS else p.omega ** 2
        return [p.mu, p.a, third, fourth, p.gamma]
    p = params
    return [p.sigma, p.omega2, p.beta, p.gamma, p.epsilon]


def rhs(model: ModelKind, state, params) -> np.ndarray:
    """Exact time derivative of the model equations at ``state``."""
    _check_params(model, params)
    y = np.asarray(state, dtype=float)
    if y.ndim != 1:
        raise ShapeError("state must be a flat vector")
    n = _pendulum_count(model, y.size, params)
    if not np.all(np.isfinite(y)):
        raise NumericError("state contains non-finite entries")
    return np.asarray(KERNEL.rhs(model.code, y, _kernel_params(model, params), n))


def project_rigid_mode(state, params: PoincareParams) -> np.ndarray:
    """Remove the rigid-body (zero eigenvalue) component of a TwoMass state.

    The generating system conserves ``sigma*(y1+y2) + dy1 + dy2``; both casing
    positions are shifted equally so that this coordinate vanishes.
    """
    if params.sigma <= 0:
        raise InvalidParameterError("rigid-mode projection needs sigma > 0")
    x = np.array(state, dtype=float)
    if x.size != 8:
        raise ShapeError("rigid-mode projection applies to TwoMass states")
    coord = params.sigma * (x[4] + x[6]) + x[5] + x[7]
    shift = coord / (2 * params.sigma)
    x[4] -= shift
    x[6] -= shift
    return x


def sample_times(t_end, sample_interval):
    """Grid ``0, dt, 2dt, ...`` up to ``t_end``, with ``t_end`` appended when off-grid."""
    count = int(math.floor(t_end / sample_interval * (1 + 1e-12)))
    ts = sample_interval * np.arange(count + 1, dtype=float)
    ts = ts[ts <= t_end]
    if t_end - ts[-1] > 1e-9 * sample_interval:
        ts = np.append(ts, t_end)
    return ts


def integrate(model: ModelKind, state0, params, t_end: float, tol: float = DEFAULT_TOL,
              sample_interval: float = DEFAULT_SAMPLE_INTERVAL, *, step: float | None = None,
              rigid_projection: bool = False, kernel=None,
              max_steps: int = DEFAULT_MAX_STEPS) -> Trajectory:
    """Integrate ``model`` from ``state0`` over ``[0, t_end]`` with Dormand-Prince 5(4).

    The local error of every accepted step is below ``tol`` in the RMS norm of
    ``err_i / (tol + tol*|y_i|)``.  Samples come from the method's 4th-order
    dense output on a uniform grid of spacing ``sample_interval``.

    Parameters
    ----------
    step : float, optional
        Fixed step size; disables error control (used for convergence studies).
    rigid_projection : bool
        For TwoMass, project ``state0`` off the rigid-body mode first.
    kernel : module, optional
        Kernel override (see :func:`get_kernel`).
    max_steps : int
        Budget of attempted steps (accepted plus rejected).

    Raises
    ------
    IntegrationError
        Step-size underflow or step budget exhausted; carries the last good time.
    """
    _check_params(model, params)
    if not t_end > 0:
        raise InvalidParameterError("t_end must be positive")
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    if not sample_interval > 0:
        raise InvalidParameterError("sample_interval must be positive")
    y0 = np.asarray(state0, dtype=float).copy()
    if y0.ndim != 1:
        raise ShapeError("state must be a flat vector")
    n = _pendulum_count(model, y0.size, params)
    if not np.all(np.isfinite(y0)):
        raise NumericError("initial state contains non-finite entries")
    if rigid_projection:
        if model is not ModelKind.TWO_MASS:
            raise InvalidParameterError("rigid-mode projection applies to TwoMass only")
        y0 = project_rigid_mode(y0, params)
    ts = sample_times(float(t_end), float(sample_interval))
    kern = kernel or KERNEL
    states, filled, status, t_last, nsteps, nreject, nfev = kern.integrate(
        model.code, y0, _kernel_params(model, params), n, float(t_end), float(tol), ts,
        float(step or 0.0), int(max_steps))
    if status != 0:
        reason = "step-size underflow" if status == 1 else "step budget exhausted"
        raise IntegrationError(f"{model.tag} integration failed: {reason}", float(t_last))
    stats = {"nsteps": int(nsteps), "nreject": int(nreject), "nfev": int(nfev),
             "kernel": kern.NAME}
    return Trajectory(ts, states[:filled], model, params, float(tol), stats)
