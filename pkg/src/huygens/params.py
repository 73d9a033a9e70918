"""Parameter layers for the clock systems and the conversions between them.

Three layers are used throughout:

* :class:`PhysicalParams` -- SI quantities (masses, length, damping, ...).
* :class:`DimensionlessParams` -- the rescaled system with time
  ``tau = sqrt(g/l) t`` and frame position ``y = x/l``.
* :class:`PoincareParams` -- the small-parameter form with ``mu = m/M`` and
  escapement strength ``epsilon = mu * a``.

The module also evaluates the modified damping ``sigma_tilde`` that controls
existence and stability of the in-phase regime, and parses flat
``key = value`` configuration files.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError, InvalidParameterError

__all__ = [
    "PhysicalParams",
    "DimensionlessParams",
    "PoincareParams",
    "ThresholdReport",
    "RegimeSummary",
    "to_dimensionless",
    "to_poincare",
    "from_poincare",
    "sigma_tilde",
    "regime_thresholds",
    "parse_config",
    "load_config",
]


def _finite(name, value):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """SI parameters of ``n`` pendulums of mass ``m``, length ``l`` on a frame of mass ``M``.

    ``c`` and ``k`` are the damping and stiffness of the frame support, ``e``
    the van der Pol escapement strength and ``gamma`` its critical angle.
    """

    m: float
    M: float
    l: float
    g: float = 9.81
    c: float = 0.0
    k: float = 0.0
    e: float = 0.0
    gamma: float = 0.0
    n: int = 2

    def __post_init__(self):
        for name in ("m", "M", "l", "g", "c", "k", "e", "gamma"):
            _finite(name, getattr(self, name))
        for name in ("m", "M", "l", "g"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be strictly positive")
        for name in ("c", "k", "e"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be non-negative")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError("pendulum count n must be an integer >= 1")


@dataclass(frozen=True)
class DimensionlessParams:
    """Rescaled system: damping ``sigma``, stiffness ``omega2`` (= Omega^2), mass ratio ``beta``."""

    sigma: float
    omega2: float
    beta: float
    gamma: float
    epsilon: float
    n: int = 2

    def __post_init__(self):
        for name in ("sigma", "omega2", "beta", "gamma", "epsilon"):
            _finite(name, getattr(self, name))
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError("pendulum count n must be an integer >= 1")
        if not 0 <= self.beta < 1.0 / self.n:
            raise InvalidParameterError(f"beta must lie in [0, 1/n), got {self.beta!r}")
        for name in ("sigma", "omega2", "epsilon"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be non-negative")

    @property
    def omega(self):
        return math.sqrt(self.omega2)


@dataclass(frozen=True)
class PoincareParams:
    """Small-parameter form: ``mu`` (= m/M), ``a`` (epsilon = mu*a), damping ``sigma``.

    ``omega`` is the frame frequency Omega itself (not its square), so the
    no-resonance condition "2*Omega not an integer" is a direct check.
    ``kappa`` is the frame stiffness of the two-mass model and is ``None``
    for the single-frame models.  ``mu = 0`` is accepted as the decoupled
    (generating) limit.
    """

    mu: float
    a: float
    sigma: float
    omega: float
    gamma: float
    kappa: float | None = None

    def __post_init__(self):
        for name in ("mu", "sigma", "omega", "gamma"):
            _finite(name, getattr(self, name))
        if self.mu < 0:
            raise InvalidParameterError("mu must be non-negative")
        if self.a < 0 or math.isnan(self.a):
            raise InvalidParameterError("a must be non-negative")
        if self.sigma < 0:
            raise InvalidParameterError("sigma must be non-negative")
        if self.omega < 0:
            raise InvalidParameterError("omega must be non-negative")
        if self.kappa is not None and (not math.isfinite(self.kappa) or self.kappa < 0):
            raise InvalidParameterError("kappa must be a non-negative finite number")

    @property
    def epsilon(self):
        return self.mu * self.a

    @property
    def b(self):
        """Damping rescaled for the small-damping model, sigma = mu * b."""
        if self.mu == 0:
            raise InvalidParameterError("b = sigma/mu is undefined for mu = 0")
        return self.sigma / self.mu


class RegimeSummary(str, enum.Enum):
    COEXIST = "Coexist"
    IN_PHASE_UNSTABLE = "InPhaseUnstable"
    ANTI_PHASE_ONLY = "AntiPhaseOnly"


@dataclass(frozen=True)
class ThresholdReport:
    """Where ``sigma_tilde`` sits relative to the in-phase stability and existence bounds.

    ``branch`` names which pair of sufficient stability inequalities applies
    (``"a*sigma<1"`` or ``"a*sigma>1"``); ``sufficient_stable`` says whether
    that pair holds.  ``diagnostic`` is ``"unclassified-by-theorem"`` when
    ``sigma_tilde`` is below the stability threshold but the sufficient
    inequalities fail, in which case no stability verdict is implied.
    """

    sigma_tilde: float
    exist_threshold: float
    stable_threshold: float
    a_sigma: float
    branch: str
    sufficient_stable: bool
    regime_summary: RegimeSummary
    diagnostic: str = ""

    def to_dict(self):
        d = asdict(self)
        d["regime_summary"] = self.regime_summary.value
        return d


def to_dimensionless(p: PhysicalParams) -> DimensionlessParams:
    total = p.M + p.n * p.m
    rate = math.sqrt(p.g / p.l)
    return DimensionlessParams(
        sigma=p.c / (total * rate),
        omega2=p.k * p.l / (total * p.g),
        beta=p.m / total,
        gamma=p.gamma,
        epsilon=p.e / (p.m * p.g * p.l),
        n=p.n,
    )


def to_poincare(d: DimensionlessParams, kappa: float | None = None) -> PoincareParams:
    """``mu = beta/(1 - n*beta)`` (which equals m/M) and ``a = epsilon/mu``.

    ``beta = 0`` gives the decoupled limit ``mu = 0``; the escapement is then
    not representable as ``mu*a`` and ``a`` is reported as ``inf`` (or 0 when
    ``epsilon`` is 0 too).
    """
    if not 0 <= d.beta < 1.0 / d.n:
        raise InvalidParameterError("beta must lie in [0, 1/n)")
    mu = d.beta / (1.0 - d.n * d.beta)
    if mu == 0:
        a = 0.0 if d.epsilon == 0 else math.inf
    else:
        a = d.epsilon / mu
    return PoincareParams(mu=mu, a=a, sigma=d.sigma, omega=math.sqrt(d.omega2),
                          gamma=d.gamma, kappa=kappa)


def from_poincare(p: PoincareParams, n: int = 2) -> DimensionlessParams:
    """Inverse of :func:`to_poincare`: ``beta = mu/(1 + n*mu)``, ``epsilon = mu*a``."""
    return DimensionlessParams(
        sigma=p.sigma,
        omega2=p.omega ** 2,
        beta=p.mu / (1.0 + n * p.mu),
        gamma=p.gamma,
        epsilon=p.mu * p.a,
        n=n,
    )


def sigma_tilde(p: PoincareParams) -> float:
    if p.a <= 0:
        raise InvalidParameterError("sigma_tilde requires a > 0")
    return p.sigma / (p.a * ((1.0 - p.omega ** 2) ** 2 + p.sigma ** 2))


def regime_thresholds(p: PoincareParams) -> ThresholdReport:
    """Classify ``sigma_tilde`` against ``gamma^2/(2(2+gamma^2))`` and ``gamma^2/2``.

    A value exactly on a threshold falls into the more restrictive regime.
    """
    if p.gamma == 0:
        raise InvalidParameterError("gamma = 0: the escapement has no limit cycle")
    st = sigma_tilde(p)
    g2 = p.gamma ** 2
    exist = g2 / 2.0
    stable = g2 / (2.0 * (2.0 + g2))
    a_sigma = p.a * p.sigma
    if a_sigma < 1:
        branch = "a*sigma<1"
        sufficient = st < stable
    elif a_sigma > 1:
        branch = "a*sigma>1"
        sufficient = (a_sigma - 1.0) / a_sigma * exist < st < stable
    else:
        branch = "a*sigma=1"
        sufficient = False
    if st >= exist:
        summary = RegimeSummary.ANTI_PHASE_ONLY
    elif st >= stable:
        summary = RegimeSummary.IN_PHASE_UNSTABLE
    else:
        summary = RegimeSummary.COEXIST
    diagnostic = ""
    if summary is RegimeSummary.COEXIST and not sufficient:
        diagnostic = "unclassified-by-theorem"
    return ThresholdReport(
        sigma_tilde=st,
        exist_threshold=exist,
        stable_threshold=stable,
        a_sigma=a_sigma,
        branch=branch,
        sufficient_stable=sufficient,
        regime_summary=summary,
        diagnostic=diagnostic,
    )


# -- configuration files ----------------------------------------------------

PHYSICAL_KEYS = frozenset({"m", "M", "l", "g", "c", "k", "e"})
DIMENSIONLESS_KEYS = frozenset({"beta", "epsilon"})
POINCARE_KEYS = frozenset({"mu", "a", "kappa"})
SHARED_KEYS = frozenset({"gamma", "n", "sigma", "omega2"})
ALL_KEYS = PHYSICAL_KEYS | DIMENSIONLESS_KEYS | POINCARE_KEYS | SHARED_KEYS | {"layer"}
LAYERS = ("physical", "dimensionless", "poincare")


@dataclass(frozen=True)
class ParamSet:
    """Parameters as read from a config, resolved to every layer reachable from it."""

    layer: str
    physical: PhysicalParams | None = None
    dimensionless: DimensionlessParams | None = None
    poincare: PoincareParams | None = None
    extra: dict = field(default_factory=dict)


def parse_config(text: str) -> dict:
    """Parse flat ``key = value`` text into a dict of numbers (``layer`` stays a string)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key == "layer":
            if value not in LAYERS:
                raise ConfigError(f"layer must be one of {LAYERS}, got {value!r}")
            values[key] = value
            continue
        try:
            values[key] = int(value) if key == "n" else float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} is not a number: {value!r}") from None
    return values


def _detect_layer(values):
    keys = set(values) - {"layer"}
    present = [name for name, ks in (("physical", PHYSICAL_KEYS),
                                      ("dimensionless", DIMENSIONLESS_KEYS),
                                      ("poincare", POINCARE_KEYS)) if keys & ks]
    if "layer" in values:
        return values["layer"]
    if len(present) > 1:
        raise ConfigError(
            f"mixed parameter layers {present}; add 'layer = ...' to disambiguate")
    if present:
        return present[0]
    raise ConfigError("cannot infer parameter layer; add 'layer = ...'")


def _require(values, keys, layer):
    missing = [k for k in keys if k not in values]
    if missing:
        raise ConfigError(f"{layer} layer is missing keys: {', '.join(missing)}")


def resolve(values: dict) -> ParamSet:
    """Build every parameter layer reachable from a parsed config."""
    layer = _detect_layer(values)
    n = int(values.get("n", 2))
    try:
        if layer == "physical":
            _require(values, ("m", "M", "l"), layer)
            phys = PhysicalParams(
                m=values["m"], M=values["M"], l=values["l"], g=values.get("g", 9.81),
                c=values.get("c", 0.0), k=values.get("k", 0.0), e=values.get("e", 0.0),
                gamma=values.get("gamma", 0.0), n=n)
            dim = to_dimensionless(phys)
            poin = to_poincare(dim, values.get("kappa")) if dim.beta > 0 else None
            return ParamSet(layer, phys, dim, poin)
        if layer == "dimensionless":
            _require(values, ("sigma", "beta", "gamma"), layer)
            dim = DimensionlessParams(
                sigma=values["sigma"], omega2=values.get("omega2", 0.0),
                beta=values["beta"], gamma=values["gamma"],
                epsilon=values.get("epsilon", 0.0), n=n)
            poin = to_poincare(dim, values.get("kappa")) if dim.beta > 0 else None
            return ParamSet(layer, None, dim, poin)
        _require(values, ("mu", "a", "sigma", "gamma"), layer)
        poin = PoincareParams(
            mu=values["mu"], a=values["a"], sigma=values["sigma"],
            omega=math.sqrt(values.get("omega2", 0.0)), gamma=values["gamma"],
            kappa=values.get("kappa"))
        return ParamSet(layer, None, from_poincare(poin, n), poin)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ParamSet:
    return resolve(parse_config(Path(path).read_text()))
