import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import norm

from isoprof.errors import DomainError
from isoprof.potential import Potential
from isoprof.profile import (
    ProfileFn,
    a_grid_spec,
    cheeger_linear,
    estimate_d1_d2,
    gaussian_profile,
    i_phi,
    l_alpha,
    l_phi,
    log_z_phi,
)

masses = st.floats(min_value=1e-12, max_value=1 - 1e-12)


def test_l_phi_examples():
    p2 = Potential.power(2)
    a = math.exp(-4)
    assert l_phi(p2, a) == pytest.approx(2 * a)
    assert l_phi(p2, 0.5) == pytest.approx(math.sqrt(math.log(2)) / 2)
    assert l_phi(Potential.power(1), 0.3) == pytest.approx(0.3)
    assert l_phi(p2, 0.0) == 0.0 and l_phi(p2, 1.0) == 0.0
    with pytest.raises(DomainError):
        l_phi(p2, 1.5)


@given(a=masses)
def test_exponential_profile_is_linear(a):
    assert i_phi(Potential.power(1), a) == pytest.approx(min(a, 1 - a), rel=1e-9)


@given(a=masses)
def test_quadratic_profile_is_rescaled_gaussian(a):
    # density exp(-x^2)/sqrt(pi) is N(0, 1/2): profile sqrt(2) * phi(Phi^-1(a))
    b = min(a, 1 - a)
    exact = math.sqrt(2) * norm.pdf(norm.ppf(b))
    assert i_phi(Potential.power(2), a) == pytest.approx(exact, rel=1e-8)


def test_i_phi_examples():
    p = Potential.power(2)
    assert i_phi(p, 0.5) == pytest.approx(1 / math.sqrt(math.pi))
    assert i_phi(p, 0.3) == pytest.approx(i_phi(p, 0.7), abs=1e-10)
    assert math.exp(log_z_phi(p)) == pytest.approx(math.sqrt(math.pi))


@given(a=masses, lam=st.floats(min_value=0.2, max_value=5.0), alpha=st.sampled_from([1.2, 1.5, 3.0]))
def test_profiles_scale_linearly(a, lam, alpha):
    p = Potential.power(alpha)
    q = p.with_lambda(lam)
    assert i_phi(q, a) == pytest.approx(lam * i_phi(p, a), rel=1e-8)
    assert l_phi(q, a) == pytest.approx(lam * l_phi(p, a), rel=1e-12)


def test_gaussian_profile_examples():
    assert gaussian_profile(0.5) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert gaussian_profile(norm.cdf(-1)) == pytest.approx(norm.pdf(1), rel=1e-12)
    assert gaussian_profile(0.2) == pytest.approx(gaussian_profile(0.8), rel=1e-12)
    assert gaussian_profile(1e-300) > 0


def test_l_alpha_and_cheeger():
    assert l_alpha(2, math.exp(-4)) == pytest.approx(2 * math.exp(-4))
    assert l_alpha(1, 0.3) == pytest.approx(0.3)
    assert cheeger_linear(0.8) == pytest.approx(0.2)


def test_profile_fn():
    p = Potential.power(1.5)
    J = ProfileFn.i_phi(p)
    assert J(0.3) == i_phi(p, 0.3)
    np.testing.assert_allclose(J(np.array([0.1, 0.9])), [i_phi(p, 0.1)] * 2)
    assert ProfileFn.gaussian()(0.5) == gaussian_profile(0.5)
    assert "I_phi" in J.label
    with pytest.raises(ValueError):
        ProfileFn("nope")
    with pytest.raises(ValueError):
        ProfileFn("L_phi")
    with pytest.raises(ValueError):
        ProfileFn("L_alpha")


@pytest.mark.parametrize("alpha", [1.0, 1.2, 1.5, 2.0])
def test_i_phi_concave_symmetric_vanishing(alpha):
    p = Potential.power(alpha)
    a = np.linspace(0, 1, 200)
    v = np.array([i_phi(p, x) for x in a])
    assert v[0] == 0 and v[-1] == 0
    np.testing.assert_allclose(v, v[::-1], atol=1e-12)
    assert np.all(v[:-2] - 2 * v[1:-1] + v[2:] <= 1e-12)


def test_d1_d2():
    e = estimate_d1_d2(Potential.power(1))
    assert e.d1_hat == pytest.approx(1.0) and e.d2_hat == pytest.approx(1.0)
    e = estimate_d1_d2(Potential.power(2, lam=3.0))
    assert 0.5 <= e.d1_hat <= e.d2_hat <= 3
    assert e.conforming
    assert not estimate_d1_d2(Potential.power(3)).conforming


def test_a_grid_spec():
    np.testing.assert_allclose(a_grid_spec("0.1:0.5:5"), [0.1, 0.2, 0.3, 0.4, 0.5])
    assert a_grid_spec("1e-6:0.5:7", "log")[0] == pytest.approx(1e-6)
    for bad in ("0.1:0.5", "0.5:0.1:3", "a:b:c", "0:1:0"):
        with pytest.raises(DomainError):
            a_grid_spec(bad)
    with pytest.raises(DomainError):
        a_grid_spec("0:0.5:3", "log")
