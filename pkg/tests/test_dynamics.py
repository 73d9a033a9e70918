import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from huygens.dynamics import (DEFAULT_SAMPLE_INTERVAL, ModelKind, get_kernel, integrate,
                              project_rigid_mode, rhs, sample_times)
from huygens.errors import IntegrationError, InvalidParameterError, NumericError, ShapeError
from huygens.params import DimensionlessParams, PoincareParams, from_poincare
from huygens.poincare import build_system

from conftest import three_dof_matrix, two_mass_matrix

TWO_PI = 2 * math.pi
rng = np.random.default_rng(20240611)

DIM = DimensionlessParams(sigma=0.3, omega2=0.2, beta=0.05, gamma=0.2, epsilon=0.4)
POIN = PoincareParams(mu=0.02, a=3.0, sigma=0.3, omega=0.4, gamma=0.3, kappa=2.0)


# -- independent right-hand-side oracles ---------------------------------------------

def dimensionless_oracle(x, d, nonlinear, forcing=True):
    """Solve the mass-matrix form of the pendulum equations for the accelerations.

    ``forcing=False`` drops both right-hand sides (escapement and cubic coupling).
    """
    n = d.n
    th, w = x[0:2 * n:2], x[1:2 * n:2]
    y, v = x[2 * n], x[2 * n + 1]
    F = d.epsilon * (d.gamma ** 2 - th ** 2) * w if forcing else np.zeros(n)
    M = np.zeros((n + 1, n + 1))
    rhs_ = np.zeros(n + 1)
    c = np.cos(th) if nonlinear else np.ones(n)
    s = np.sin(th) if nonlinear else th
    for i in range(n):
        M[i, i] = 1.0
        M[i, n] = c[i]
        rhs_[i] = F[i] - s[i]
    M[n, :n] = d.beta * c
    M[n, n] = 1.0
    rhs_[n] = d.beta * np.sum(w ** 2 * s) * forcing - d.sigma * v - d.omega2 * y
    acc = np.linalg.solve(M, rhs_)
    out = np.empty_like(x)
    out[0:2 * n:2] = w
    out[1:2 * n:2] = acc[:n]
    out[2 * n], out[2 * n + 1] = v, acc[n]
    return out


def test_model_state_sizes_and_columns():
    assert ModelKind.THREE_DOF.state_size() == 6
    assert ModelKind.TWO_MASS.state_size() == 8
    assert ModelKind.DIMENSIONLESS.state_size(3) == 8
    assert ModelKind.TWO_MASS.columns() == ["theta1", "dtheta1", "theta2", "dtheta2",
                                            "y", "dy", "y2", "dy2"]
    assert ModelKind.parse("three-dof") is ModelKind.THREE_DOF
    assert ModelKind.parse("ThreeDofSigma") is ModelKind.THREE_DOF
    with pytest.raises(InvalidParameterError):
        ModelKind.parse("four-dof")


def test_linear_equilibrium():
    assert np.all(rhs(ModelKind.LINEAR, np.zeros(6), DIM) == 0)


def test_decoupled_harmonic_limit():
    d = DimensionlessParams(0.0, 0.0, 0.0, 0.0, 0.0)
    out = rhs(ModelKind.DIMENSIONLESS, [1.0, 0, 0, 0, 0, 0], d)
    assert out[1] == -1.0
    assert np.all(out[[0, 2, 3, 4, 5]] == 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dimensionless_matches_mass_matrix_oracle(n):
    d = DimensionlessParams(0.3, 0.2, 0.05, 0.2, 0.4, n=n)
    for _ in range(50):
        x = rng.normal(scale=0.5, size=2 * n + 2)
        np.testing.assert_allclose(rhs(ModelKind.DIMENSIONLESS, x, d),
                                   dimensionless_oracle(x, d, False), rtol=1e-12, atol=1e-14)


def test_full_nonlinear_matches_lagrangian_oracle():
    for _ in range(50):
        x = rng.normal(scale=0.8, size=6)
        np.testing.assert_allclose(rhs(ModelKind.FULL_NONLINEAR, x, DIM),
                                   dimensionless_oracle(x, DIM, True), rtol=1e-12, atol=1e-14)


def test_linear_model_drops_right_hand_sides():
    for _ in range(50):
        x = rng.normal(size=6)
        np.testing.assert_allclose(rhs(ModelKind.LINEAR, x, DIM),
                                   dimensionless_oracle(x, DIM, False, forcing=False),
                                   rtol=1e-12, atol=1e-14)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_linear_rhs_is_linear(alpha, beta):
    s1, s2 = rng.normal(size=6), rng.normal(size=6)
    lhs = rhs(ModelKind.LINEAR, alpha * s1 + beta * s2, DIM)
    rhs_ = alpha * rhs(ModelKind.LINEAR, s1, DIM) + beta * rhs(ModelKind.LINEAR, s2, DIM)
    np.testing.assert_allclose(lhs, rhs_, rtol=1e-13, atol=1e-13)


def test_three_dof_generating_system_is_printed_matrix():
    p = PoincareParams(0.0, 3.0, 0.3, 0.4, 0.3)
    A = three_dof_matrix(0.3, 0.4)
    for _ in range(100):
        x = rng.normal(size=6)
        np.testing.assert_allclose(rhs(ModelKind.THREE_DOF, x, p), A @ x, rtol=0, atol=1e-14)


def test_two_mass_generating_system_is_printed_matrix():
    p = PoincareParams(0.0, 3.0, 0.3, 0.0, 0.3, kappa=2.0)
    A = two_mass_matrix(0.3, 2.0)
    for _ in range(100):
        x = rng.normal(size=8)
        np.testing.assert_allclose(rhs(ModelKind.TWO_MASS, x, p), A @ x, rtol=0, atol=1e-14)


@pytest.mark.parametrize("model", [ModelKind.SMALL_SIGMA, ModelKind.THREE_DOF,
                                   ModelKind.TWO_MASS])
def test_kernel_matches_polynomial_quasilinear_form(model):
    """Kernel RHS and the exact polynomial A x + mu Phi(x) are separate implementations."""
    sys_ = build_system(model, POIN)
    for _ in range(50):
        x = rng.normal(scale=0.5, size=sys_.dim)
        np.testing.assert_allclose(rhs(model, x, POIN), sys_.rhs(x), rtol=1e-12, atol=1e-14)


def test_rhs_validation():
    with pytest.raises(ShapeError):
        rhs(ModelKind.THREE_DOF, np.zeros(5), POIN)
    with pytest.raises(ShapeError):
        rhs(ModelKind.TWO_MASS, np.zeros(6), POIN)
    with pytest.raises(NumericError):
        rhs(ModelKind.THREE_DOF, [np.nan, 0, 0, 0, 0, 0], POIN)
    with pytest.raises(InvalidParameterError):
        rhs(ModelKind.THREE_DOF, np.zeros(6), DIM)
    with pytest.raises(InvalidParameterError):
        rhs(ModelKind.DIMENSIONLESS, np.zeros(6), POIN)
    with pytest.raises(InvalidParameterError):
        rhs(ModelKind.TWO_MASS, np.zeros(8), PoincareParams(0.01, 1, 0.1, 0, 0.1))


# -- integrator ----------------------------------------------------------------------

def test_sample_times_grid():
    ts = sample_times(1.0, 0.3)
    np.testing.assert_allclose(ts, [0, 0.3, 0.6, 0.9, 1.0])
    assert len(sample_times(TWO_PI, DEFAULT_SAMPLE_INTERVAL)) == 201


def test_trajectory_shape_and_monotone_times():
    tr = integrate(ModelKind.THREE_DOF, [0.1, 0, -0.2, 0, 0, 0], POIN, 20.0)
    assert tr.states.shape == (len(tr.times), 6)
    assert np.all(np.diff(tr.times) > 0)
    assert tr.times[-1] == 20.0
    assert np.all(np.isfinite(tr.states))
    assert tr.columns == ["t", "theta1", "dtheta1", "theta2", "dtheta2", "y", "dy"]
    with pytest.raises(ValueError):
        tr.states[0, 0] = 1.0  # read-only
    w = tr.window(5.0, 10.0)
    assert w.times[0] >= 5.0 and w.times[-1] <= 10.0


def test_zero_state_stays_zero():
    tr = integrate(ModelKind.DIMENSIONLESS, np.zeros(6), DIM, 50.0)
    assert np.all(tr.states == 0)


@pytest.mark.parametrize("tol,bound", [(1e-10, 5e-7), (1e-12, 1e-8)])
def test_harmonic_energy_conserved(tol, bound):
    # a 5(4) pair drifts in proportion to tol; 1e-8 over 1000 cycles needs tol = 1e-12
    d = DimensionlessParams(0.0, 0.0, 0.0, 0.0, 0.0)
    tr = integrate(ModelKind.LINEAR, [0.3, 0.1, 0, 0, 0, 0], d, 1000 * TWO_PI, tol=tol,
                   sample_interval=TWO_PI / 20)
    energy = tr.theta(0) ** 2 + tr.dtheta(0) ** 2
    assert np.max(np.abs(energy - energy[0])) < bound


def test_decoupled_van_der_pol_limit_amplitude():
    # beta = 0 decouples the frame: each pendulum is a van der Pol oscillator
    gamma, eps = 0.2, 0.1
    d = DimensionlessParams(0.3, 0.2, 0.0, gamma, eps)
    for theta0 in (0.05, 0.6):
        tr = integrate(ModelKind.DIMENSIONLESS, [theta0, 0, -theta0, 0, 0, 0], d, 300 * TWO_PI,
                       sample_interval=TWO_PI / 50)
        for i in (0, 1):
            amp = np.hypot(tr.theta(i), tr.dtheta(i))[-500:].mean()
            assert amp == pytest.approx(2 * gamma, rel=eps)


def test_time_reversal_of_conservative_system():
    d = DimensionlessParams(0.0, 0.3, 0.05, 0.2, 0.0)
    y0 = np.array([0.2, 0.0, -0.1, 0.05, 0.01, 0.0])
    tol = 1e-11
    fwd = integrate(ModelKind.DIMENSIONLESS, y0, d, 20.0, tol=tol)
    back0 = fwd.states[-1] * np.array([1, -1, 1, -1, 1, -1])
    bwd = integrate(ModelKind.DIMENSIONLESS, back0, d, 20.0, tol=tol)
    end = bwd.states[-1] * np.array([1, -1, 1, -1, 1, -1])
    assert np.max(np.abs(end - y0)) < 10 * tol * 100  # global error over ~3 periods


def test_formulations_agree_to_second_order_in_mu():
    gaps = []
    for mu in (1e-3, 2e-3):
        p = PoincareParams(mu, 5.0, 0.3, 0.4, 0.3)
        y0 = [0.1, 0, -0.2, 0.05, 0, 0]
        a = integrate(ModelKind.DIMENSIONLESS, y0, from_poincare(p), 50 * TWO_PI, tol=1e-12)
        b = integrate(ModelKind.THREE_DOF, y0, p, 50 * TWO_PI, tol=1e-12)
        gaps.append(np.max(np.abs(a.states - b.states)))
    assert gaps[0] < 10 * 1e-3 ** 2 * 1.0  # C ~ 7 observed
    assert 3.0 < gaps[1] / gaps[0] < 5.0  # quadratic scaling


def test_kernels_identical():
    py, cy = get_kernel("python"), get_kernel("auto")
    for model, params, y0 in [(ModelKind.DIMENSIONLESS, DIM, [0.1, 0, 0.3, 0, 0, 0]),
                              (ModelKind.THREE_DOF, POIN, [0.1, 0, 0.3, 0, 0, 0]),
                              (ModelKind.TWO_MASS, POIN, [0.1, 0, 0.3, 0, 0, 0, 0, 0])]:
        a = integrate(model, y0, params, 30.0, kernel=py)
        b = integrate(model, y0, params, 30.0, kernel=cy)
        assert np.array_equal(a.states, b.states)
        assert a.stats["nsteps"] == b.stats["nsteps"]


def test_get_kernel_names():
    assert get_kernel("python").NAME == "python"
    assert get_kernel("auto").NAME in ("python", "cython")
    with pytest.raises(ValueError):
        get_kernel("fortran")


def test_deterministic():
    a = integrate(ModelKind.DIMENSIONLESS, [0.1, 0, 0.3, 0, 0, 0], DIM, 30.0)
    b = integrate(ModelKind.DIMENSIONLESS, [0.1, 0, 0.3, 0, 0, 0], DIM, 30.0)
    assert np.array_equal(a.states, b.states)


def test_integration_failures_carry_last_time():
    with pytest.raises(IntegrationError) as err:
        integrate(ModelKind.DIMENSIONLESS, [1e100, 1e100, 0, 0, 0, 0], DIM, 10.0)
    assert err.value.t_last == 0.0
    with pytest.raises(IntegrationError) as err:
        integrate(ModelKind.DIMENSIONLESS, [1e5, 1e5, 0, 0, 0, 0], DIM, 10.0, max_steps=2000)
    assert 0 < err.value.t_last < 10.0


@pytest.mark.parametrize("kw", [dict(t_end=0.0), dict(tol=0.0), dict(sample_interval=-1.0)])
def test_integrate_argument_validation(kw):
    args = dict(t_end=1.0, tol=1e-9, sample_interval=0.1)
    args.update(kw)
    with pytest.raises(InvalidParameterError):
        integrate(ModelKind.DIMENSIONLESS, np.zeros(6), DIM, **args)


def test_integrate_rejects_bad_state():
    with pytest.raises(NumericError):
        integrate(ModelKind.DIMENSIONLESS, [np.inf, 0, 0, 0, 0, 0], DIM, 1.0)
    with pytest.raises(ShapeError):
        integrate(ModelKind.DIMENSIONLESS, np.zeros(7), DIM, 1.0)


def test_rigid_mode_projection():
    p = POIN
    x = np.array([0.1, 0.2, -0.1, 0.0, 0.3, 0.1, 0.2, -0.4])
    y = project_rigid_mode(x, p)
    assert p.sigma * (y[4] + y[6]) + y[5] + y[7] == pytest.approx(0.0, abs=1e-15)
    # the projected state stays off the rigid mode along the generating flow
    A = two_mass_matrix(p.sigma, p.kappa)
    assert p.sigma * ((A @ y)[4] + (A @ y)[6]) + (A @ y)[5] + (A @ y)[7] == pytest.approx(0, abs=1e-14)
    with pytest.raises(InvalidParameterError):
        integrate(ModelKind.THREE_DOF, np.zeros(6), p, 1.0, rigid_projection=True)


def test_fixed_step_convergence_is_fifth_order():
    d = DimensionlessParams(0.0, 0.0, 0.0, 0.0, 0.0)
    t_end = 4 * TWO_PI
    exact = math.cos(t_end) * 0.5
    errs = []
    steps = (TWO_PI / 16, TWO_PI / 32)
    for h in steps:
        tr = integrate(ModelKind.LINEAR, [0.5, 0, 0, 0, 0, 0], d, t_end, step=h,
                       sample_interval=t_end)
        errs.append(abs(tr.states[-1, 0] - exact))
    order = math.log(errs[0] / errs[1]) / math.log(2)
    assert abs(order - 5) < 0.3
