import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from huygens.errors import ConfigError, InvalidParameterError
from huygens.params import (DimensionlessParams, PhysicalParams, PoincareParams, RegimeSummary,
                            from_poincare, load_config, parse_config, regime_thresholds,
                            resolve, sigma_tilde, to_dimensionless, to_poincare)

from conftest import CZ


def czolczynski(**kw):
    return PhysicalParams(**{**CZ, **kw})


# -- to_dimensionless --------------------------------------------------------

def test_czolczynski_dimensionless_values():
    d = to_dimensionless(czolczynski())
    # hand evaluation: M + 2m = 12.172, sqrt(g/l) = 6.03892...
    total = 11.856 + 2 * 0.158
    rate = math.sqrt(9.81 / 0.269)
    assert d.beta == pytest.approx(0.158 / total, rel=1e-15)
    assert d.beta == pytest.approx(0.012980, abs=1e-6)
    assert d.omega2 == pytest.approx(0.002672, abs=5e-7)
    assert d.sigma == pytest.approx(0.16130, abs=1e-5)
    assert d.sigma == pytest.approx(11.856 / (total * rate), rel=1e-15)


def test_dimensionless_formulas_are_dimensionally_consistent():
    # scaling every mass by s leaves beta, sigma (c scaled too), omega2 (k scaled too) unchanged
    p = czolczynski()
    q = czolczynski(m=2 * p.m, M=2 * p.M, c=2 * p.c, k=2 * p.k)
    a, b = to_dimensionless(p), to_dimensionless(q)
    for f in ("beta", "sigma", "omega2"):
        assert getattr(a, f) == pytest.approx(getattr(b, f), rel=1e-14)


def test_small_m_limit():
    d = to_dimensionless(czolczynski(m=1e-300))
    d0 = to_dimensionless(czolczynski())
    assert d.beta < 1e-299
    assert d.sigma == 11.856 / (11.856 * math.sqrt(9.81 / 0.269))
    assert d.omega2 == 1.186 * 0.269 / (11.856 * 9.81)
    assert d.sigma != d0.sigma


def test_sigma_homogeneous_in_damping_and_total_mass():
    p = czolczynski()
    q = czolczynski(c=2 * p.c, M=2 * (p.M + 2 * p.m) - 2 * p.m)
    assert to_dimensionless(q).sigma == pytest.approx(to_dimensionless(p).sigma, rel=1e-14)


def test_epsilon_from_escapement():
    d = to_dimensionless(czolczynski(e=0.5))
    assert d.epsilon == pytest.approx(0.5 / (0.158 * 9.81 * 0.269), rel=1e-15)


@pytest.mark.parametrize("field", ["m", "M", "l", "g"])
@pytest.mark.parametrize("value", [0.0, -1.0])
def test_non_positive_physical_rejected(field, value):
    with pytest.raises(InvalidParameterError):
        czolczynski(**{field: value})


@pytest.mark.parametrize("field", ["c", "k", "e"])
def test_negative_physical_rejected(field):
    with pytest.raises(InvalidParameterError):
        czolczynski(**{field: -0.1})


def test_bad_pendulum_count():
    with pytest.raises(InvalidParameterError):
        czolczynski(n=0)


# -- to_poincare -----------------------------------------------------------

def test_mu_from_beta():
    d = DimensionlessParams(0.1, 0.0, 0.012980, 0.122, 0.0)
    # mu = beta / (1 - 2 beta) = 0.01298 / 0.97404
    assert to_poincare(d).mu == pytest.approx(0.012980 / 0.97404, rel=1e-14)
    assert to_poincare(d).mu == pytest.approx(0.013326, abs=5e-7)


def test_beta_zero_gives_mu_zero():
    p = to_poincare(DimensionlessParams(0.1, 0.0, 0.0, 0.1, 0.0))
    assert p.mu == 0
    assert p.a == 0
    assert to_poincare(DimensionlessParams(0.1, 0.0, 0.0, 0.1, 0.2)).a == math.inf


def test_a_from_epsilon():
    beta = 0.01 / (1 + 2 * 0.01)  # mu = 0.01
    p = to_poincare(DimensionlessParams(0.1, 0.25, beta, 0.1, 0.1))
    assert p.mu == pytest.approx(0.01, rel=1e-14)
    assert p.a == pytest.approx(10.0, rel=1e-13)
    assert p.omega == 0.5


def test_beta_at_bound_rejected():
    with pytest.raises(InvalidParameterError):
        DimensionlessParams(0.1, 0.0, 0.5, 0.1, 0.0)


def test_mu_equals_mass_ratio_two_routes():
    p = czolczynski()
    mu = to_poincare(to_dimensionless(p)).mu
    assert mu == pytest.approx(p.m / p.M, rel=1e-12)


@given(mu=st.floats(1e-6, 0.3), a=st.floats(0.0, 50.0), sigma=st.floats(0.0, 3.0),
       omega=st.floats(0.0, 2.0), gamma=st.floats(0.01, 1.0))
def test_poincare_round_trip(mu, a, sigma, omega, gamma):
    p = PoincareParams(mu, a, sigma, omega, gamma)
    q = to_poincare(from_poincare(p))
    assert q.mu == pytest.approx(mu, rel=1e-12)
    assert q.a == pytest.approx(a, rel=1e-10, abs=1e-12)
    assert q.sigma == sigma and q.gamma == gamma
    assert q.omega == pytest.approx(omega, rel=1e-15, abs=1e-150)


def test_epsilon_is_mu_a():
    p = PoincareParams(0.02, 3.0, 0.1, 0.0, 0.1)
    assert p.epsilon == pytest.approx(0.06)
    assert p.b == pytest.approx(5.0)
    with pytest.raises(InvalidParameterError):
        replace(p, mu=0.0).b


# -- sigma_tilde / thresholds ------------------------------------------------------

def test_sigma_tilde_examples():
    assert sigma_tilde(PoincareParams(0.01, 5, 0.1, 0.0, 0.5)) == pytest.approx(0.02 / 1.01, rel=1e-15)
    assert sigma_tilde(PoincareParams(0.01, 5, 0.0, 0.0, 0.5)) == 0
    assert sigma_tilde(PoincareParams(0.01, 1, 1.0, 1.0, 0.5)) == 1.0


def test_sigma_tilde_needs_positive_a():
    with pytest.raises(InvalidParameterError):
        sigma_tilde(PoincareParams(0.01, 0.0, 0.1, 0.0, 0.5))


def test_threshold_values():
    r = regime_thresholds(PoincareParams(0.01, 5, 0.1, 0.0, 0.122))
    assert r.stable_threshold == pytest.approx(0.0036935, abs=5e-8)
    assert r.exist_threshold == pytest.approx(0.0074420, abs=5e-8)


def test_threshold_boundary_is_restrictive():
    # sigma = a = gamma = 1, Omega = 0: sigma_tilde = 1/2 = gamma^2/2 exactly in floating point
    r = regime_thresholds(PoincareParams(0.01, 1.0, 1.0, 0.0, 1.0))
    assert r.sigma_tilde == r.exist_threshold == 0.5
    assert r.regime_summary is RegimeSummary.ANTI_PHASE_ONLY
    # and on the stability bound: gamma^2/(2(2+gamma^2)) = 1/6 with gamma = 1
    p = PoincareParams(0.01, 3.0, 1.0, 0.0, 1.0)
    r = regime_thresholds(p)
    assert r.sigma_tilde == pytest.approx(1 / 6, rel=1e-15)
    if r.sigma_tilde >= r.stable_threshold:
        assert r.regime_summary is RegimeSummary.IN_PHASE_UNSTABLE


def test_small_sigma_coexists():
    r = regime_thresholds(PoincareParams(0.01, 5.0, 1e-6, 0.0, 0.122))
    assert r.regime_summary is RegimeSummary.COEXIST
    assert r.sufficient_stable and r.branch == "a*sigma<1"


def test_unclassified_diagnostic():
    # a*sigma > 1 and sigma_tilde below the stability threshold but below the lower bound
    p = PoincareParams(0.01, 100.0, 0.1, 0.0, 0.5)
    r = regime_thresholds(p)
    assert r.branch == "a*sigma>1"
    assert r.regime_summary is RegimeSummary.COEXIST
    assert not r.sufficient_stable
    assert r.diagnostic == "unclassified-by-theorem"


def test_gamma_zero_rejected():
    with pytest.raises(InvalidParameterError):
        regime_thresholds(PoincareParams(0.01, 5.0, 0.1, 0.0, 0.0))


@given(g=st.floats(1e-3, 10.0))
def test_thresholds_strictly_ordered(g):
    r = regime_thresholds(PoincareParams(0.01, 1.0, 0.1, 0.0, g))
    assert r.stable_threshold < r.exist_threshold


@given(a=st.floats(0.1, 20.0), omega=st.floats(0.0, 0.95), s1=st.floats(0.0, 1.0),
       s2=st.floats(0.0, 1.0))
def test_sigma_tilde_monotone_in_sigma(a, omega, s1, s2):
    lim = abs(1 - omega ** 2)
    s1, s2 = sorted((s1 * lim, s2 * lim))
    t1 = sigma_tilde(PoincareParams(0.01, a, s1, omega, 0.1))
    t2 = sigma_tilde(PoincareParams(0.01, a, s2, omega, 0.1))
    assert t1 <= t2 * (1 + 1e-12)


@given(a1=st.floats(0.1, 20.0), a2=st.floats(0.1, 20.0), s=st.floats(1e-3, 3.0),
       omega=st.floats(0.0, 2.0))
def test_sigma_tilde_decreasing_in_a(a1, a2, s, omega):
    a1, a2 = sorted((a1, a2))
    t1 = sigma_tilde(PoincareParams(0.01, a1, s, omega, 0.1))
    t2 = sigma_tilde(PoincareParams(0.01, a2, s, omega, 0.1))
    assert t2 <= t1


ORDER = {RegimeSummary.COEXIST: 2, RegimeSummary.IN_PHASE_UNSTABLE: 1,
         RegimeSummary.ANTI_PHASE_ONLY: 0}


@given(a=st.floats(0.5, 20.0), g=st.floats(0.05, 1.0))
def test_summary_never_reenters_higher_regime(a, g):
    prev = 3
    for i in range(60):
        s = 0.999 * i / 59  # sigma in [0, |1 - Omega^2|] with Omega = 0
        r = regime_thresholds(PoincareParams(0.01, a, s, 0.0, g))
        assert ORDER[r.regime_summary] <= prev
        prev = ORDER[r.regime_summary]


# -- configuration --------------------------------------------------------------------

def test_parse_physical_config(tmp_path):
    f = tmp_path / "cz.cfg"
    f.write_text("# Czolczynski\nm = 0.158\nM = 11.856\nl = 0.269\nc = 11.856\n"
                 "k = 1.186\ngamma = 0.122\n")
    ps = load_config(f)
    assert ps.layer == "physical"
    assert ps.dimensionless == to_dimensionless(czolczynski())
    assert ps.poincare.mu == pytest.approx(0.158 / 11.856, rel=1e-12)


def test_mixed_layers_rejected_without_layer_key():
    with pytest.raises(ConfigError):
        resolve(parse_config("m = 0.1\nM = 1\nl = 1\nbeta = 0.01\n"))


def test_layer_key_disambiguates():
    ps = resolve(parse_config("layer = dimensionless\nsigma = 0.1\nbeta = 0.01\ngamma = 0.1\n"
                              "epsilon = 0.05\nmu = 0.3\n"))
    assert ps.layer == "dimensionless"
    assert ps.dimensionless.beta == 0.01


def test_poincare_layer_config():
    ps = resolve(parse_config("mu = 0.01\na = 5\nsigma = 0.1\ngamma = 0.5\nomega2 = 0.25\n"))
    assert ps.poincare == PoincareParams(0.01, 5.0, 0.1, 0.5, 0.5)
    assert ps.dimensionless.epsilon == pytest.approx(0.05)


@pytest.mark.parametrize("text", [
    "m 0.1",
    "bogus = 1",
    "m = abc",
    "m = 1\nm = 2",
    "layer = nowhere",
    "sigma = 0.1",
    "beta = 0.01\nsigma = 0.1",
    "m = -1\nM = 1\nl = 1",
])
def test_bad_config_rejected(text):
    with pytest.raises(ConfigError):
        resolve(parse_config(text))
