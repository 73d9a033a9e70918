"""Coupled pendulum clocks: simulation, Poincaré small-parameter analysis and
regime classification."""
from .errors import *  # noqa: F401,F403
from .params import (DimensionlessParams, PhysicalParams, PoincareParams,  # noqa: F401
                     regime_thresholds, sigma_tilde, to_dimensionless, to_poincare)
from .dynamics import KERNEL, ModelKind, Trajectory, integrate, rhs  # noqa: F401

__version__ = "0.1.0"
