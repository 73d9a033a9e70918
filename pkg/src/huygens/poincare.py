"""Poincaré small-parameter analysis of quasi-linear systems ``x' = A x + mu Phi(x)``.

The generic engine works in the eigenbasis ``x = V xi`` of ``A``:

* the critical eigenvalues ``i n_s omega`` (integer ``n_s``) form the leading
  group and carry the generating amplitudes ``alpha_s``;
* ``P_s = <F_s e^{-i n_s omega t}>`` with ``F = V^{-1} Phi(V xi)`` is averaged
  over one period of the generating solution by trapezoid quadrature, which is
  exact here because the integrand is a trigonometric polynomial;
* periodic solutions satisfy ``Q_s = alpha_k n_k P_s - alpha_s n_s P_k = 0``
  for every leading ``s`` other than the reference index ``k``;
* the first-order period correction is ``delta1 = P_k / (i alpha_k n_k T)``;
* stability follows from the roots of ``det(dQ/dalpha - alpha_k n_k kappa I)``
  and, for non-special groups, of the averaged Jacobian determinant.

The closed-form predictions for the three clock models are implemented
alongside (:func:`closed_form_regimes`) and serve as an oracle for the engine.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ModelKind
from .errors import (DegeneracyError, DegenerateSolutionError, InvalidParameterError,
                     NoSolutionError, ResonanceError, TrivialSolutionError)
from .linear import generating_modes
from .params import PoincareParams, sigma_tilde
from .poly import Poly, variables

__all__ = [
    "Regime",
    "Source",
    "QuasiLinearSystem",
    "EigenDecomposition",
    "EigenGrouping",
    "PoincareSolution",
    "RegimePrediction",
    "PoincareEngine",
    "build_system",
    "diagonalize",
    "group_eigenvalues",
    "average_P",
    "amplitude_residual",
    "solve_amplitudes",
    "period_correction",
    "stability_leading",
    "stability_nonspecial",
    "closed_form_regimes",
    "closed_form_stability_polynomial",
    "polynomial_roots",
    "engine_regimes",
]

INTEGER_TOL = 1e-9
RESONANCE_TOL = 1e-6
CRITICAL_TOL = 1e-9
NEWTON_TOL = 1e-12
NEWTON_MAXITER = 50
STABLE_MARGIN = 1e-9
DEGENERACY_TOL = 1e-10


class Regime(str, enum.Enum):
    IN_PHASE = "InPhase"
    ANTI_PHASE = "AntiPhase"


class Source(str, enum.Enum):
    THEOREM2 = "Theorem2"
    THEOREM3 = "Theorem3"
    THEOREM4 = "Theorem4"


# -- systems ----------------------------------------------------------------

@dataclass(frozen=True)
class QuasiLinearSystem:
    """``x' = A x + mu Phi(x)`` with ``Phi`` a vector of exact polynomials.

    ``spectrum`` optionally carries the closed-form eigenvalues of ``A`` in
    the order used for the eigenbasis.
    """

    A: np.ndarray
    Phi: tuple
    mu: float
    model: ModelKind | None = None
    params: PoincareParams | None = None
    spectrum: tuple | None = None

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def degree(self):
        return max(p.degree for p in self.Phi)

    def phi(self, X):
        """``Phi`` at the columns of ``X`` (shape ``(dim, N)`` or ``(dim,)``)."""
        X = np.asarray(X)
        return np.stack([p(X) for p in self.Phi])

    def phi_jacobian(self, X):
        """``dPhi_i/dx_j`` at the columns of ``X``: shape ``(dim, dim, ...)``."""
        X = np.asarray(X)
        rows = []
        for p in self.Phi:
            rows.append(np.stack([p.diff(j)(X) for j in range(self.dim)]))
        return np.stack(rows)

    def rhs(self, x):
        x = np.asarray(x)
        return self.A @ x + self.mu * self.phi(x)


def build_system(model: ModelKind, params: PoincareParams) -> QuasiLinearSystem:
    """Matrix ``A`` and nonlinearity ``Phi`` of a two-pendulum generating model.

    For the small-damping model the frame damping enters as ``b = sigma/mu``;
    at ``mu = 0`` the nonlinearity is irrelevant and ``b`` is taken as 0.
    """
    p = params
    g2 = p.gamma ** 2
    if model is ModelKind.TWO_MASS:
        if p.kappa is None:
            raise InvalidParameterError("TwoMass needs kappa")
        kap, s = p.kappa, p.sigma
        A = np.array([
            [0, 1, 0, 0, 0, 0, 0, 0],
            [-1, 0, 0, 0, kap, s, -kap, 0],
            [0, 0, 0, 1, 0, 0, 0, 0],
            [0, 0, -1, 0, -kap, 0, kap, s],
            [0, 0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, -kap, -s, kap, 0],
            [0, 0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, kap, 0, -kap, -s],
        ], dtype=float)
        th1, w1, th2, w2, y1, v1, y2, v2 = variables(8)
        d = y2 - y1
        f1 = -s * v1 + kap * d + th1 * (1 + w1 * w1)
        f2 = -s * v2 - kap * d + th2 * (1 + w2 * w2)
        esc1 = p.a * (g2 - th1 * th1) * w1
        esc2 = p.a * (g2 - th2 * th2) * w2
        zero = Poly(8)
        Phi = (zero, esc1 - f1, zero, esc2 - f2, zero, f1, zero, f2)
    elif model in (ModelKind.SMALL_SIGMA, ModelKind.THREE_DOF):
        om2 = p.omega ** 2
        th1, w1, th2, w2, y, v = variables(6)
        coupling = (1 + w1 * w1) * th1 + (1 + w2 * w2) * th2
        if model is ModelKind.SMALL_SIGMA:
            b = p.sigma / p.mu if p.mu > 0 else 0.0
            A = np.array([
                [0, 1, 0, 0, 0, 0],
                [-1, 0, 0, 0, om2, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, -1, 0, om2, 0],
                [0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, -om2, 0],
            ], dtype=float)
            frame = -b * v - 2 * om2 * y + coupling
        else:
            s = p.sigma
            A = np.array([
                [0, 1, 0, 0, 0, 0],
                [-1, 0, 0, 0, om2, s],
                [0, 0, 0, 1, 0, 0],
                [0, 0, -1, 0, om2, s],
                [0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, -om2, -s],
            ], dtype=float)
            frame = -2 * (s * v + om2 * y) + coupling
        esc1 = p.a * (g2 - th1 * th1) * w1
        esc2 = p.a * (g2 - th2 * th2) * w2
        zero = Poly(6)
        Phi = (zero, esc1 - frame, zero, esc2 - frame, zero, frame)
    else:
        raise InvalidParameterError(f"no quasi-linear form for {model.tag}")
    spectrum = generating_modes(model, p).eigenvalues
    return QuasiLinearSystem(A, Phi, p.mu, model, p, spectrum)


# -- eigenstructure ---------------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    V: np.ndarray
    Lambda: np.ndarray
    Vinv: np.ndarray

    def reconstruct(self):
        return self.V @ np.diag(self.Lambda) @ self.Vinv


def _normalize(v, tol=1e-12):
    v = v / np.linalg.norm(v)
    lead = np.flatnonzero(np.abs(v) > tol)[0]
    return v * (abs(v[lead]) / v[lead])


def _canonical_basis(N, tol=1e-10):
    """Reduced row-echelon basis of the column span of ``N`` (columns returned)."""
    R = N.T.copy()
    m, d = R.shape
    row = 0
    for col in range(d):
        if row == m:
            break
        piv = row + int(np.argmax(np.abs(R[row:, col])))
        if abs(R[piv, col]) < tol:
            continue
        R[[row, piv]] = R[[piv, row]]
        R[row] /= R[row, col]
        for other in range(m):
            if other != row:
                R[other] -= R[other, col] * R[row]
        row += 1
    return R.T


def _same(a, b, scale):
    return abs(a - b) <= 1e-9 * scale


def diagonalize(A, spectrum=None) -> EigenDecomposition:
    """Eigen-decomposition ``A = V diag(Lambda) V^{-1}`` from a known spectrum.

    Eigenvectors come from the null space of ``A - lambda I``; a repeated
    eigenvalue gets the reduced row-echelon basis of its eigenspace, so the
    pendulum modes stay localized on single pendulums.  Columns have unit
    norm with their first nonzero entry real and positive, and the column of
    ``conj(lambda)`` is the conjugate of the column of ``lambda`` for real
    ``A``.  Without ``spectrum`` the eigenvalues are computed numerically.

    Raises
    ------
    DegeneracyError
        An eigenvalue's geometric multiplicity is short of its algebraic one
        (coalescing eigenvalues) or the eigenvector matrix is ill conditioned.
    """
    A = np.asarray(A)
    d = A.shape[0]
    if A.shape != (d, d):
        raise ValueError("A must be square")
    lam = np.array(spectrum if spectrum is not None else np.linalg.eigvals(A), dtype=complex)
    if lam.shape != (d,):
        raise ValueError("spectrum length does not match A")
    scale = max(1.0, float(np.abs(A).sum(axis=1).max()))
    real_matrix = np.isrealobj(A) or not np.any(np.imag(A))
    V = np.zeros((d, d), dtype=complex)
    done = np.zeros(d, dtype=bool)
    for i in range(d):
        if done[i]:
            continue
        same = [j for j in range(d) if not done[j] and _same(lam[j], lam[i], scale)]
        if real_matrix and lam[i].imag < -1e-9 * scale:
            partner = [j for j in range(d) if _same(lam[j], np.conj(lam[i]), scale)]
            if len(partner) == len(same) and all(done[j] for j in partner):
                for j, pj in zip(same, partner):
                    V[:, j] = np.conj(V[:, pj])
                    done[j] = True
                continue
        mult = len(same)
        _, sv, vh = np.linalg.svd(A - lam[i] * np.eye(d))
        null_tol = 1e-8 * scale
        if mult > 1 and sv[d - mult] > null_tol:
            raise DegeneracyError(
                f"eigenvalue {lam[i]:.6g} has algebraic multiplicity {mult} but a "
                f"smaller eigenspace (defective matrix; coalescing pair {same})")
        if sv[d - mult] > null_tol:
            raise DegeneracyError(f"{lam[i]:.6g} is not an eigenvalue of A")
        basis = vh[d - mult:].conj().T
        if mult > 1:
            basis = _canonical_basis(basis)
        for col, j in enumerate(same):
            V[:, j] = _normalize(basis[:, col])
            done[j] = True
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > 1e10:
        raise DegeneracyError(f"eigenvector matrix is near singular (cond={cond:.3g})")
    Vinv = np.linalg.inv(V)
    dec = EigenDecomposition(V, lam, Vinv)
    err = np.abs(dec.reconstruct() - A).sum(axis=1).max()
    if err > 1e-10 * scale:
        raise DegeneracyError(f"reconstruction error {err:.3g} exceeds tolerance")
    return dec


@dataclass(frozen=True)
class EigenGrouping:
    """Partition of eigen-indices by the role they play in the Poincaré conditions.

    ``n`` maps leading indices to their integer multipliers; ``nonspecial`` is
    a tuple of groups (index tuples) whose eigenvalues differ by integer
    multiples of ``omega``; ``nu`` maps their indices to ``Im(lambda)``.
    """

    omega: float
    leading: tuple
    n: dict
    secondary: tuple
    nonspecial: tuple
    nu: dict
    noncritical: tuple


def group_eigenvalues(Lambda, omega=1.0) -> EigenGrouping:
    """Sort eigenvalues into the leading, secondary, non-special and non-critical groups.

    Raises
    ------
    ResonanceError
        A critical eigenvalue is within ``1e-6`` of an integer or half-integer
        multiple of ``omega`` without being within ``1e-9`` of it.
    """
    if not omega > 0:
        raise InvalidParameterError("omega must be positive")
    lam = np.asarray(Lambda, dtype=complex)
    leading, secondary, rest, noncritical = [], [], [], []
    n, nu = {}, {}
    for s, value in enumerate(lam):
        if value.real < -CRITICAL_TOL:
            noncritical.append(s)
            continue
        if value.real > CRITICAL_TOL:
            raise InvalidParameterError("eigenvalue with positive real part")
        q = value.imag / omega
        dist_int = abs(q - round(q))
        dist_half = abs(q - (math.floor(q) + 0.5))
        if dist_int < INTEGER_TOL:
            leading.append(s)
            n[s] = int(round(q))
        elif dist_half < INTEGER_TOL:
            secondary.append(s)
        elif dist_int < RESONANCE_TOL or dist_half < RESONANCE_TOL:
            raise ResonanceError(
                f"eigenvalue {value:.12g} is ambiguously close to a resonance with omega={omega}")
        else:
            rest.append(s)
            nu[s] = value.imag
    if not leading:
        raise InvalidParameterError("no critical eigenvalue is a multiple of omega")
    pos = sorted(n[s] for s in leading)
    if pos != sorted(-v for v in pos):
        raise InvalidParameterError("leading group is not closed under conjugation")
    groups = []
    for s in rest:
        for g in groups:
            off = (nu[s] - nu[g[0]]) / omega
            if abs(off - round(off)) < INTEGER_TOL:
                g.append(s)
                break
        else:
            groups.append([s])
    return EigenGrouping(omega, tuple(leading), n, tuple(secondary),
                         tuple(tuple(g) for g in groups), nu, tuple(noncritical))


# -- solutions --------------------------------------------------------------

def _roots_json(roots):
    return [[float(np.real(z)), float(np.imag(z))] for z in roots]


@dataclass(frozen=True)
class PoincareSolution:
    """Generating solution found by the engine together with its first-order data.

    ``r`` is the half-amplitude (pendulum amplitude ``2r``) and ``phi`` the
    phase of pendulum 1 relative to pendulum 2.  ``alphas`` holds the complex
    amplitudes of every eigen-index (zero outside the leading group), in the
    normalization of the engine's eigenvectors.
    """

    regime: Regime | None
    r: float
    phi: float
    alphas: tuple
    delta1: float
    period: float
    leading_roots: tuple = ()
    nonspecial_roots: tuple = ()
    stable: bool | None = None
    residual: float = 0.0
    iterations: int = 0
    r2: float | None = None
    model: ModelKind | None = None

    @property
    def amplitude(self):
        return 2.0 * self.r

    @property
    def exists(self):
        return True

    def to_dict(self):
        return {
            "regime": self.regime.value if self.regime else None,
            "exists": True,
            "amplitude": self.amplitude,
            "period": self.period,
            "delta1": self.delta1,
            "stable": self.stable,
            "roots": _roots_json(tuple(self.leading_roots) + tuple(self.nonspecial_roots)),
            "leading_roots": _roots_json(self.leading_roots),
            "nonspecial_roots": _roots_json(self.nonspecial_roots),
            "r": self.r,
            "phi": self.phi,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class RegimePrediction:
    """Closed-form prediction for one regime.

    ``stable`` is ``None`` when the theory gives no verdict; ``sufficient``
    records whether the theorem's sufficient stability inequalities hold.
    """

    regime: Regime
    exists: bool
    amplitude: float | None
    period: float | None
    delta1: float | None
    stable: bool | None
    source: Source
    roots: tuple = ()
    sufficient: bool | None = None

    def to_dict(self):
        return {
            "regime": self.regime.value,
            "exists": self.exists,
            "amplitude": self.amplitude,
            "period": self.period,
            "delta1": self.delta1,
            "stable": self.stable,
            "roots": _roots_json(self.roots),
            "source": self.source.value,
            "sufficient": self.sufficient,
        }


# -- polynomial utilities ---------------------------------------------------

def polynomial_roots(coeffs):
    """Roots of ``c[0] x^m + ... + c[m]`` from the eigenvalues of its companion matrix."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "f")
    if c.size == 0:
        raise ValueError("zero polynomial")
    m = c.size - 1
    if m == 0:
        return np.array([], dtype=complex)
    C = np.zeros((m, m), dtype=complex)
    C[0, :] = -c[1:] / c[0]
    C[1:, :-1] = np.eye(m - 1)
    return np.linalg.eigvals(C)


def _char_poly(M, scale=1.0):
    """Coefficients (highest first) of ``det(M - kappa * scale * I)``.

    The determinant is sampled at ``m + 1`` points on a circle enclosing the
    roots and the coefficients are recovered by a discrete Fourier transform.
    """
    M = np.asarray(M, dtype=complex)
    m = M.shape[0]
    if m == 0:
        return np.array([1.0 + 0j])
    rho = max(1.0, float(np.abs(M).sum(axis=1).max()) / abs(scale))
    w = np.exp(2j * np.pi * np.arange(m + 1) / (m + 1))
    vals = np.array([np.linalg.det(M - rho * wj * scale * np.eye(m)) for wj in w])
    low = np.fft.fft(vals) / (m + 1)   # low[k] = a_k rho^k
    a = low / rho ** np.arange(m + 1)
    return a[::-1]


# -- engine -----------------------------------------------------------------

def _reflect(phi):
    """Phase in (-pi, pi]."""
    phi = math.remainder(phi, 2 * math.pi)
    return math.pi if phi == -math.pi else phi


class PoincareEngine:
    """Precomputed eigenbasis, grouping and quadrature for one quasi-linear system."""

    def __init__(self, system: QuasiLinearSystem, omega=1.0, decomposition=None,
                 grouping=None):
        self.system = system
        self.omega = omega
        if system.model is ModelKind.THREE_DOF:
            p = system.params
            if abs(p.sigma ** 2 - 4 * p.omega ** 2) < DEGENERACY_TOL:
                raise DegeneracyError("sigma^2 = 4 Omega^2: the two frame eigenvalues coalesce")
        if system.model is ModelKind.TWO_MASS:
            p = system.params
            if abs(p.sigma ** 2 - 8 * p.kappa) < DEGENERACY_TOL:
                raise DegeneracyError("sigma^2 = 8 kappa: the two frame eigenvalues coalesce")
        self.dec = decomposition or diagonalize(system.A, system.spectrum)
        self.grouping = grouping or group_eigenvalues(self.dec.Lambda, omega)
        g = self.grouping
        if g.secondary:
            raise NotImplementedError(
                "secondary special group is non-empty; its stability condition is not implemented")
        self.leading = list(g.leading)
        self.nvec = np.array([g.n[s] for s in self.leading])
        active = [s for s in self.leading if g.n[s] != 0]
        self.k = active[-1]
        self.zero_modes = [s for s in self.leading if g.n[s] == 0]
        nmax = max(1, int(np.abs(self.nvec).max()))
        deg = max(1, system.degree)
        self.N = 2 * (deg + 1) * nmax + 8
        self.t = 2 * np.pi / omega * np.arange(self.N) / self.N
        self.T = 2 * np.pi / omega
        # pendulum-localized positive-frequency modes for the symmetric ansatz
        V = self.dec.V
        self.positive = []
        for s in self.leading:
            if g.n[s] > 0:
                piv = int(np.flatnonzero(np.abs(V[:, s]) > 1e-12)[0])
                self.positive.append((piv, s))
        self.positive.sort()
        self.partner = {}
        for s in self.leading:
            for j in self.leading:
                if g.n[j] == -g.n[s] and np.allclose(V[:, j], np.conj(V[:, s]), atol=1e-12):
                    self.partner[s] = j

    # generating solution and averages
    def xi(self, alphas):
        """Generating solution on the quadrature nodes, shape ``(dim, N)``."""
        alphas = np.asarray(alphas, dtype=complex)
        X = np.zeros((self.system.dim, self.N), dtype=complex)
        for s in self.leading:
            X[s] = alphas[s] * np.exp(1j * self.grouping.n[s] * self.omega * self.t)
        return X

    def F(self, xi):
        return self.dec.Vinv @ self.system.phi(self.dec.V @ xi)

    def P(self, alphas):
        """``P_s`` for every eigen-index (zero outside the leading group)."""
        Fx = self.F(self.xi(alphas))
        out = np.zeros(self.system.dim, dtype=complex)
        for s in self.leading:
            out[s] = np.mean(Fx[s] * np.exp(-1j * self.grouping.n[s] * self.omega * self.t))
        return out

    def Q(self, alphas):
        """``Q_s`` for the leading indices other than ``k``, in leading order."""
        a = np.asarray(alphas, dtype=complex)
        P = self.P(a)
        n = self.grouping.n
        k = self.k
        return np.array([a[k] * n[k] * P[s] - a[s] * n[s] * P[k]
                         for s in self.leading if s != k])

    # ansatz
    def alphas_from(self, r, phi, r2=None):
        if len(self.positive) != 2:
            raise InvalidParameterError("the (r, phi) ansatz needs exactly two pendulum modes")
        a = np.zeros(self.system.dim, dtype=complex)
        amps = (r, r if r2 is None else r2)
        phases = (phi, 0.0)
        for (piv, s), rr, ph in zip(self.positive, amps, phases):
            a[s] = rr * np.exp(1j * ph) / self.dec.V[piv, s]
            if s in self.partner:
                a[self.partner[s]] = np.conj(a[s])
        return a

    def _scaled_residual(self, u, asymmetric):
        if asymmetric:
            r, r2, phi = u
        else:
            (r, phi), r2 = u, None
        a = self.alphas_from(r, phi, r2)
        q = self.Q(a) / max(abs(a[self.k]) ** 2, 1e-300)
        return np.concatenate([q.real, q.imag])

    def solve(self, r0, phi0, asymmetric=False):
        if not r0 > 0:
            raise InvalidParameterError("seed r0 must be positive")
        u = np.array([r0, r0, phi0] if asymmetric else [r0, phi0], dtype=float)
        res = self._scaled_residual(u, asymmetric)
        norm = np.linalg.norm(res)
        it = 0
        while norm >= NEWTON_TOL:
            if it >= NEWTON_MAXITER:
                raise NoSolutionError(
                    f"amplitude equations did not converge in {NEWTON_MAXITER} iterations "
                    f"(residual {norm:.3g})")
            it += 1
            J = np.empty((res.size, u.size))
            for j in range(u.size):
                h = 1e-6 * max(1.0, abs(u[j]))
                up, um = u.copy(), u.copy()
                up[j] += h
                um[j] -= h
                J[:, j] = (self._scaled_residual(up, asymmetric)
                           - self._scaled_residual(um, asymmetric)) / (2 * h)
            step = np.linalg.lstsq(J, -res, rcond=None)[0]
            # backtracking keeps Gauss-Newton from overshooting far from the root
            lam = 1.0
            while True:
                trial = u + lam * step
                tres = self._scaled_residual(trial, asymmetric)
                tnorm = np.linalg.norm(tres)
                if tnorm < norm:
                    break
                lam *= 0.5
                if lam < 1e-4:
                    raise NoSolutionError(
                        f"amplitude equations stagnated at residual {norm:.3g}: "
                        "no root near the seed")
            u, res, norm = trial, tres, tnorm
            radii = u[:2] if asymmetric else u[:1]
            if np.any(np.abs(radii) < 1e-8 * max(1.0, r0)):
                raise TrivialSolutionError("iteration collapsed onto the trivial solution r = 0")
        if asymmetric:
            r, r2, phi = u
        else:
            (r, phi), r2 = u, None
        # a negative radius is the same orbit shifted by half a period
        if r < 0:
            r, phi = -r, phi + math.pi
        if r2 is not None and r2 < 0:
            r2, phi = -r2, phi + math.pi
        phi = _reflect(phi)
        if r < 1e-8 * max(1.0, r0):
            raise TrivialSolutionError("iteration converged to the trivial solution r = 0")
        return r, phi, r2, norm, it

    def delta1(self, alphas):
        a = np.asarray(alphas, dtype=complex)
        k = self.k
        if abs(a[k]) == 0:
            raise DegenerateSolutionError("reference amplitude alpha_k is zero")
        P = self.P(a)
        d = P[k] / (1j * a[k] * self.grouping.n[k] * self.T)
        return float(d.real), float(d.imag)

    def leading_matrix(self, alphas):
        """``dQ_s/dalpha_j`` over leading indices except ``k`` and the zero modes.

        ``alpha`` components are treated as independent complex variables.
        Central differences with one Richardson step are exact for the
        quartic ``Q`` up to round-off.
        """
        a = np.asarray(alphas, dtype=complex)
        idx = [s for s in self.leading if s != self.k and s not in self.zero_modes]
        rows = [i for i, s in enumerate(s for s in self.leading if s != self.k)
                if s not in self.zero_modes]
        h0 = 1e-3 * max(1e-3, float(np.abs(a).max()))
        J = np.zeros((len(idx), len(idx)), dtype=complex)
        for col, j in enumerate(idx):
            def diff(h):
                ap, am = a.copy(), a.copy()
                ap[j] += h
                am[j] -= h
                return (self.Q(ap) - self.Q(am)) / (2 * h)
            d = (4 * diff(h0 / 2) - diff(h0)) / 3
            J[:, col] = d[rows]
        return J

    def leading_roots(self, alphas):
        a = np.asarray(alphas, dtype=complex)
        scale = a[self.k] * self.grouping.n[self.k]
        if abs(scale) < 1e-300:
            raise DegenerateSolutionError("alpha_k n_k vanishes; stability equation is singular")
        J = self.leading_matrix(a)
        coeffs = _char_poly(J, scale)
        return polynomial_roots(coeffs), coeffs

    def nonspecial_roots(self, alphas, group):
        """Roots of the averaged-Jacobian determinant for one non-special group."""
        a = np.asarray(alphas, dtype=complex)
        g = self.grouping
        k = self.k
        X = self.dec.V @ self.xi(a)
        Jphi = self.system.phi_jacobian(X)            # (d, d, N)
        JF = np.einsum("sa,abt,bj->sjt", self.dec.Vinv, Jphi, self.dec.V)
        P = self.P(a)
        shift = P[k] / (g.n[k] * self.omega * a[k])
        m = len(group)
        M = np.zeros((m, m), dtype=complex)
        for i, s in enumerate(group):
            for jj, j in enumerate(group):
                harmonic = int(round((g.nu[j] - g.nu[s]) / self.omega))
                # long-time average keeps the harmonic cancelling e^{i h t}
                M[i, jj] = np.mean(JF[s, j] * np.exp(1j * harmonic * self.omega * self.t))
            M[i, i] -= g.nu[s] * shift
        coeffs = _char_poly(M)
        return polynomial_roots(coeffs), coeffs

    def solution(self, r0, phi0, asymmetric=False):
        r, phi, r2, norm, it = self.solve(r0, phi0, asymmetric)
        a = self.alphas_from(r, phi, r2)
        d1, _ = self.delta1(a)
        if abs(phi) < 1e-6:
            regime = Regime.IN_PHASE
        elif abs(abs(phi) - math.pi) < 1e-6:
            regime = Regime.ANTI_PHASE
        else:
            regime = None
        lead, nons, stable = (), (), None
        if self.system.model is not ModelKind.TWO_MASS:
            lead = tuple(self.leading_roots(a)[0])
            roots = list(lead)
            for group in self.grouping.nonspecial:
                roots_g = tuple(self.nonspecial_roots(a, group)[0])
                nons += roots_g
                roots += roots_g
            stable = bool(all(z.real < -STABLE_MARGIN for z in roots))
        return PoincareSolution(
            regime=regime, r=float(r), phi=float(phi), alphas=tuple(complex(v) for v in a),
            delta1=d1, period=self.T * (1 - d1 * self.system.mu), leading_roots=lead,
            nonspecial_roots=nons, stable=stable, residual=float(norm), iterations=it,
            r2=None if r2 is None else float(r2), model=self.system.model)


# -- functional interface ----------------------------------------------------

def _engine(system, decomposition=None, grouping=None):
    if isinstance(system, PoincareEngine):
        return system
    return PoincareEngine(system, decomposition=decomposition, grouping=grouping)


def average_P(s, alphas, system, decomposition=None, grouping=None):
    """``P_s = <F_s e^{-i n_s omega t}>`` for leading index ``s``."""
    eng = _engine(system, decomposition, grouping)
    if s not in eng.leading:
        raise InvalidParameterError(f"index {s} is not in the leading group")
    return complex(eng.P(alphas)[s])


def amplitude_residual(alphas, system, decomposition=None, grouping=None):
    """``Q_s`` for every leading ``s`` except the reference index ``k``.

    For conjugate-paired amplitudes the components of a conjugate pair carry
    the same information, so only two real equations per pair are independent.
    """
    return _engine(system, decomposition, grouping).Q(alphas)


def solve_amplitudes(system, seed=None, *, asymmetric=False, decomposition=None,
                     grouping=None) -> PoincareSolution:
    """Solve the amplitude equations from ``seed = (r0, phi0)``.

    Under the default symmetric ansatz both pendulums have half-amplitude
    ``r`` and pendulum 2 has phase 0.  ``asymmetric=True`` (experimental)
    frees the second half-amplitude.  The result carries the period
    correction and the stability roots.

    Raises
    ------
    NoSolutionError
        No convergence in 50 iterations, or convergence to a phase other than
        the regime nearest to the seed phase.
    TrivialSolutionError
        The iteration collapsed onto ``r = 0``.
    """
    eng = _engine(system, decomposition, grouping)
    if seed is None:
        p = eng.system.params
        seed = (p.gamma if p is not None else 1.0, 0.0)
    r0, phi0 = seed
    sol = eng.solution(r0, phi0, asymmetric)
    wanted = Regime.ANTI_PHASE if abs(_reflect(phi0)) > math.pi / 2 else Regime.IN_PHASE
    if sol.regime is not wanted:
        found = sol.regime.value if sol.regime else f"phi={sol.phi:.6g}"
        raise NoSolutionError(f"no {wanted.value} solution near the seed (converged to {found})")
    return sol


def period_correction(solution: PoincareSolution, system, decomposition=None,
                      grouping=None) -> float:
    """``delta1 = P_k / (i alpha_k n_k T)`` at the solution's amplitudes."""
    return _engine(system, decomposition, grouping).delta1(solution.alphas)[0]


def stability_leading(solution: PoincareSolution, system, decomposition=None,
                      grouping=None, return_coefficients=False):
    """Roots ``kappa`` of ``det(dQ_s/dalpha_j - alpha_k n_k delta_sj kappa) = 0``."""
    roots, coeffs = _engine(system, decomposition, grouping).leading_roots(solution.alphas)
    return (roots, coeffs) if return_coefficients else roots


def stability_nonspecial(solution: PoincareSolution, system, group=0, decomposition=None,
                         grouping=None, return_coefficients=False):
    """Roots of the averaged-Jacobian condition for non-special group ``group``."""
    eng = _engine(system, decomposition, grouping)
    if not eng.grouping.nonspecial:
        raise InvalidParameterError("the system has no non-special group")
    roots, coeffs = eng.nonspecial_roots(solution.alphas, eng.grouping.nonspecial[group])
    return (roots, coeffs) if return_coefficients else roots


def engine_regimes(model: ModelKind, params: PoincareParams):
    """Engine solutions for both regimes, seeded at ``r0 = gamma``.

    Returns ``{Regime: PoincareSolution or Exception}``; a failed solve is
    reported, not raised.
    """
    out = {}
    try:
        eng = PoincareEngine(build_system(model, params))
    except Exception as exc:  # noqa: BLE001 - reported per regime
        return {Regime.IN_PHASE: exc, Regime.ANTI_PHASE: exc}
    r0 = abs(params.gamma) if params.gamma else 1.0
    for regime, phi0 in ((Regime.IN_PHASE, 0.0), (Regime.ANTI_PHASE, math.pi)):
        try:
            out[regime] = solve_amplitudes(eng, (r0, phi0))
        except Exception as exc:  # noqa: BLE001
            out[regime] = exc
    return out


# -- closed forms -------------------------------------------------------------

def closed_form_stability_polynomial(model: ModelKind, params: PoincareParams, regime: Regime,
                                     errata=False):
    """Cubic in ``kappa`` (highest power first) from the closed-form stability analysis.

    With ``errata=True`` the in-phase middle coefficient of the full-damping
    model uses the denominator ``1 + 2 sigma_tilde`` (the form the generic
    engine and direct simulation of perturbation decay both give) instead of
    the printed ``1 + 2 a sigma_tilde``.
    """
    p = params
    a, g2, s = p.a, p.gamma ** 2, p.sigma
    one_m = 1 - p.omega ** 2
    if model is ModelKind.SMALL_SIGMA:
        lin = np.array([1.0, a * g2])
        c0 = (1 + g2) ** 2 if regime is Regime.IN_PHASE else 3 * g2 ** 2 + 4 * g2 + 1
        quad = np.array([one_m ** 2, a * g2 * one_m ** 2, c0])
        return np.polymul(lin, quad)
    if model is ModelKind.THREE_DOF:
        st = sigma_tilde(p)
        st_over_s = 1.0 / (a * (one_m ** 2 + s ** 2))
        if regime is Regime.ANTI_PHASE:
            lin = np.array([1.0, a * g2])
            quad = np.array([1.0, a * ((1 + 4 * st) * g2 + 2 * st),
                             a * st_over_s * (1 + g2) * (1 + g2 * (a * s + 3))])
        else:
            lin = np.array([1.0, a * (g2 - 2 * st)])
            denom = 1 + 2 * st if errata else 1 + 2 * a * st
            quad = np.array([1.0, a * (g2 - 2 * st * (2 + g2)) / denom,
                             a * st_over_s * (1 + g2) / (1 + 2 * st) ** 2
                             * (1 + 2 * a * s * st + g2 * (1 - a * s))])
        return np.polymul(lin, quad)
    raise InvalidParameterError(f"no closed-form stability polynomial for {model.tag}")


def _stable_from(coeffs):
    roots = polynomial_roots(coeffs)
    return tuple(roots), bool(all(z.real < -STABLE_MARGIN for z in roots))


def closed_form_regimes(params: PoincareParams, model: ModelKind, errata=False):
    """Closed-form existence, amplitude, period and stability for both regimes.

    By default every formula is evaluated as stated by the theorems.  Three
    of them disagree with direct simulation; ``errata=True`` applies the
    corrections that restore agreement:

    * the first-order period deficit is ``2*pi`` times the stated one
      (``T(mu) = 2 pi (1 - delta1 mu)`` with ``delta1`` the stated coefficient);
    * the two-mass anti-phase period numerator is ``1 - 2 kappa`` rather than
      ``2 kappa - 1`` (the anti-phase period grows with ``mu`` for ``kappa > 1/2``);
    * see :func:`closed_form_stability_polynomial` for the stability polynomial.

    ``delta1`` is always reported in the convention ``T(mu) = T (1 - delta1 mu)``
    used by the generic engine.
    """
    p = params
    scale = 2 * math.pi if errata else 1.0
    if p.gamma == 0:
        raise InvalidParameterError("gamma = 0: the escapement has no limit cycle")
    g2 = p.gamma ** 2
    mu = p.mu
    two_pi = 2 * math.pi
    out = []
    if model is ModelKind.SMALL_SIGMA:
        one_m = 1 - p.omega ** 2
        b_ok = p.mu > 0 and p.sigma > 0
        for regime in (Regime.IN_PHASE, Regime.ANTI_PHASE):
            coef = (1 + g2) / one_m if regime is Regime.IN_PHASE else 0.0
            roots, stable = _stable_from(closed_form_stability_polynomial(model, p, regime))
            out.append(RegimePrediction(
                regime, True, 2 * abs(p.gamma), two_pi - scale * coef * mu,
                scale * coef / two_pi,
                stable and b_ok, Source.THEOREM2, roots))
        return out
    if model is ModelKind.THREE_DOF:
        st = sigma_tilde(p)
        one_m = 1 - p.omega ** 2
        exist_in = st < g2 / 2
        stable_thr = g2 / (2 * (2 + g2))
        a_s = p.a * p.sigma
        if a_s < 1:
            sufficient = st < stable_thr
        elif a_s > 1:
            sufficient = (a_s - 1) / a_s * g2 / 2 < st < stable_thr
        else:
            sufficient = False
        if exist_in:
            coef = one_m * (1 + g2) / (one_m ** 2 + 2 * p.sigma / p.a + p.sigma ** 2)
            roots, stable = _stable_from(
                closed_form_stability_polynomial(model, p, Regime.IN_PHASE, errata))
            out.append(RegimePrediction(
                Regime.IN_PHASE, True, 2 * math.sqrt((g2 - 2 * st) / (1 + 2 * st)),
                two_pi - scale * coef * mu, scale * coef / two_pi, stable, Source.THEOREM3,
                roots, sufficient))
        else:
            out.append(RegimePrediction(Regime.IN_PHASE, False, None, None, None, None,
                                        Source.THEOREM3, (), False))
        roots, stable = _stable_from(closed_form_stability_polynomial(model, p, Regime.ANTI_PHASE))
        out.append(RegimePrediction(Regime.ANTI_PHASE, True, 2 * abs(p.gamma), two_pi, 0.0,
                                    stable, Source.THEOREM3, roots, p.a > 0 and p.sigma > 0))
        return out
    if model is ModelKind.TWO_MASS:
        if p.kappa is None:
            raise InvalidParameterError("TwoMass needs kappa")
        s, a, kap = p.sigma, p.a, p.kappa
        s_in = s / (a * (1 + s ** 2))
        s_an = s / (a * ((2 * kap - 1) ** 2 + s ** 2))
        entries = (
            (Regime.IN_PHASE, s_in, (1 + g2) / (1 + s / a + s ** 2)),
            (Regime.ANTI_PHASE, s_an,
             (1 - 2 * kap if errata else 2 * kap - 1) * (1 + g2) / ((2 * kap - 1) ** 2 + s / a + s ** 2)),
        )
        for regime, sx, coef in entries:
            if g2 > sx:
                out.append(RegimePrediction(
                    regime, True, 2 * math.sqrt((g2 - sx) / (1 + sx)),
                    two_pi - scale * coef * mu / 2, scale * coef / (2 * two_pi), None,
                    Source.THEOREM4))
            else:
                out.append(RegimePrediction(regime, False, None, None, None, None,
                                            Source.THEOREM4))
        return out
    raise InvalidParameterError(f"no closed-form theory for {model.tag}")
