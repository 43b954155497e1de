import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gammainc

from isoprof.bounds import (
    BoundCertificate,
    bobkov_bound,
    bobkov_optimize,
    certificate_upper_bound,
    certify,
    dimension_free_check,
    prop_nu_big,
    prop_small,
    select_c1_cutoff,
    select_k_big,
    select_k_small,
    split_constant,
    tensorize,
    theorem_mualpha,
    theorem_muphi,
)
from isoprof.errors import DomainError
from isoprof.ledger import ConstantsLedger, concentration
from isoprof.potential import Potential
from isoprof.profile import ProfileFn
from isoprof.radial import cached_normalize
from isoprof.witness import radial_profile, upper_bound

LEDGER = ConstantsLedger()
masses = st.floats(min_value=1e-6, max_value=0.5)


def entropy(a):
    return -a * math.log(a) - (1 - a) * math.log1p(-a)


# raw inequality ---------------------------------------------------------------


def test_bobkov_bound_trivial_cases():
    assert bobkov_bound(0.3, 2.0, 0.0) == pytest.approx(entropy(0.3) / 4)
    assert bobkov_bound(0.3, 2.0, -math.inf) == 0.0
    with pytest.raises(DomainError):
        bobkov_bound(0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        bobkov_bound(0.3, 0.0, 0.0)


@given(a=masses, r=st.floats(min_value=1e-3, max_value=1e3), lb=st.floats(min_value=-0.7, max_value=0.0),
       k=st.floats(min_value=1.0, max_value=10.0), d=st.floats(min_value=0.0, max_value=0.5))
def test_bobkov_bound_monotone(a, r, lb, k, d):
    assert bobkov_bound(a, k * r, lb) <= bobkov_bound(a, r, lb)
    assert bobkov_bound(a, r, lb - d) <= bobkov_bound(a, r, lb)


def test_bobkov_bound_with_independent_ball_mass():
    n, a, delta = 50, 0.1, 0.4
    m = cached_normalize(n, Potential.power(2))
    lo, hi = m.r0 * (1 - delta), m.r0 * (1 + delta)
    oracle = math.log(gammainc(n / 2, hi**2) - gammainc(n / 2, lo**2))
    assert m.log_interval_mass(lo, hi) == pytest.approx(oracle, rel=1e-10, abs=1e-12)
    assert bobkov_bound(a, delta * m.r0, m.log_interval_mass(lo, hi)) == pytest.approx(
        max(0.0, (entropy(a) + oracle) / (2 * delta * m.r0)), rel=1e-9)


def test_bobkov_optimize():
    m = cached_normalize(10, Potential.power(2))
    cert = bobkov_optimize(m, 0.3)
    assert cert.route == "bobkov_direct" and cert.valid and cert.value > 0
    for centre in (0.0, m.r0):
        for r in np.geomspace(0.1, 10, 25):
            probe = bobkov_bound(0.3, r, m.log_interval_mass(centre - r, centre + r))
            assert cert.value >= probe * (1 - 1e-12)
    assert cert.value <= radial_profile(m, 0.3)
    exp1 = cached_normalize(1, Potential.power(1))
    assert 0 < bobkov_optimize(exp1, 0.25, "full").value <= 0.25
    assert bobkov_optimize(m, 0.7).value == 0.0


# constant selection -------------------------------------------------------------


@pytest.mark.parametrize("c", [0.05, 0.3, 1.0, 3.0])
@pytest.mark.parametrize("regime", ["h0", "h2"])
def test_small_set_k_is_minimal(c, regime):
    sel = select_k_small(c, regime)
    assert sel.satisfied()
    assert all(v >= 0 for v in sel.slacks.values())
    assert not sel.satisfied(sel.K * (1 - 1e-9))
    assert not sel.satisfied(sel.K - 1)


def test_small_set_k_for_c_one():
    sel = select_k_small(1.0, "h0")
    # Kc >= 2 and K - 1 >= 1 both give 2; the exponential constraint is the binding one
    assert sel.K > 2
    g3 = math.e * sel.K * math.exp(-(sel.K - 1))
    assert g3 == pytest.approx(0.5, rel=1e-9)


def test_small_set_k_monotone_in_inverse_c():
    for regime in ("h0", "h2"):
        ks = [select_k_small(c, regime).K for c in (4.0, 1.0, 0.25, 0.0625)]
        assert ks == sorted(ks)


@pytest.mark.parametrize("C1", [1 + 1e-9, 2.0, 10.0, 1e3])
def test_large_set_k(C1):
    sel = select_k_big(C1)
    assert sel.K >= max(1.0, math.log(C1) / math.log(2))
    assert 0.5 * math.log(2) + math.log1p(-C1 * 2.0**-sel.K) >= 0
    assert not sel.satisfied(sel.K * (1 - 1e-9))


def test_cutoff_constant():
    x = select_c1_cutoff(10.0, 0.2)
    assert x >= 2
    assert math.log(10.0) + 1 + math.log(x) - x <= -0.2
    assert select_c1_cutoff(0.5, 1e-9) >= 2


# range-specific constructions ------------------------------------------------------


def test_prop_nu_big_gate_and_sandwich():
    p = Potential.power(2)
    cert = prop_nu_big(100, p, 0.25, LEDGER)
    assert cert.valid and cert.value > 0
    m = cached_normalize(100, p)
    assert cert.value <= radial_profile(m, 0.25)
    c = cert.constant("c")
    low = prop_nu_big(100, p, 0.5 * math.exp(-c * 100), LEDGER)
    assert low.value == 0 and not low.valid
    assert any("exp(-cn) <= a" in cond and not ok for cond, ok in low.validity)
    assert prop_nu_big(1, p, 0.25).value == 0.0


def test_prop_small():
    p = Potential.power(3)
    a = math.exp(-25)
    cert = prop_small(20, p, a, 1.0, "h2", LEDGER)
    assert cert.valid and cert.value > 0
    assert cert.value <= upper_bound(20, p, a)
    assert cert.value <= radial_profile(cached_normalize(20, p), a)
    above = prop_small(20, p, math.exp(-20) * 1.001, 1.0, "h2", LEDGER)
    assert above.value == 0 and not above.valid
    not_h2 = prop_small(20, Potential.power(1.5), a, 1.0, "h2", LEDGER)
    assert not not_h2.valid and not_h2.value == 0
    h0 = prop_small(20, Potential.power(1.5), a, 1.0, "h0", LEDGER)
    assert h0.valid and 0 < h0.value <= upper_bound(20, Potential.power(1.5), a)


def test_tensorize():
    p = Potential.power(2)
    m = cached_normalize(50, p)
    J = ProfileFn.gaussian()
    cert = tensorize(0.5, 7.0, J, m, 0.1, LEDGER)
    assert cert.valid
    assert cert.constant("r2") > cert.constant("r1")
    assert cert.value == pytest.approx(LEDGER.kappa2 * min(0.5, 7.0 / cert.constant("r2")) * J(0.1))
    tiny = tensorize(0.5, 7.0, J, m, 1e-120, LEDGER)
    assert tiny.value == 0
    assert ("kappa1 nu[r1, inf) <= a", False) in tiny.validity


def test_tensorized_theorem_route_below_witness():
    p = Potential.power(2)
    cert = certify("tensor", 50, p, 0.1)
    assert cert.valid and cert.value > 0
    assert cert.value <= upper_bound(50, p, 0.1)


# assembled bounds -----------------------------------------------------------------


def test_theorem_examples():
    p = Potential.power(2)
    cert = theorem_muphi(10, p, 0.2)
    assert cert.valid and 0 < cert.value <= upper_bound(10, p, 0.2)
    assert theorem_muphi(10, p, 0.8).value == pytest.approx(cert.value)
    assert theorem_muphi(10, p, 0.0).value == 0 and theorem_muphi(10, p, 1.0).value == 0


def test_theorem_exponents():
    c2 = theorem_mualpha(10, 2.0, 0.2)
    assert c2.constant("prefactor") == pytest.approx(1.0) and c2.constant("exponent") == pytest.approx(0.5)
    c1 = theorem_mualpha(10, 1.0, 0.2)
    assert c1.constant("prefactor") == pytest.approx(10**-0.5) and c1.constant("exponent") == 0.0
    assert c1.route == "theorem_mualpha"


@pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0, 3.0])
def test_theorem_is_homogeneous_in_lambda(alpha):
    for lam in (0.3, 4.0):
        for a in (1e-8, 0.05, 0.4):
            base = theorem_muphi(10, Potential.power(alpha), a).value
            assert theorem_muphi(10, Potential.power(alpha, lam), a).value == pytest.approx(lam * base, rel=1e-9)


@pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [5, 10, 50, 200])
def test_routes_agree_at_the_split(alpha, n):
    # both routes are positive at a = exp(-cn); after removing the tensorisation
    # factor kappa2 they agree within a factor 10
    p = Potential.power(alpha)
    m = cached_normalize(n, p.rescaled(p.inverse(1.0)))
    c, _ = split_constant(LEDGER, m)
    a = math.exp(-c * n)
    t = theorem_muphi(n, p, a, route="tensor").value
    s = theorem_muphi(n, p, a, route="small").value
    assert t > 0 and s > 0
    assert 0.1 <= (t / LEDGER.kappa2) / s <= 10


def test_split_constant_sources():
    m = cached_normalize(10, Potential.power(2))
    c, prov = split_constant(LEDGER, m)
    c1, C1, _ = concentration(LEDGER, m)
    assert prov == "derived" and c == pytest.approx(c1 / select_k_big(C1).K)
    assert split_constant(LEDGER.with_overrides(split_c=0.3), m) == (0.3, "assumed")
    assert split_constant(LEDGER, cached_normalize(1, Potential.power(2)))[0] == pytest.approx(math.log(2))


@pytest.mark.parametrize("route", ["auto", "bobkov", "big", "small", "tensor"])
@pytest.mark.parametrize("alpha", [1.0, 3.0])
def test_certify_sandwich(route, alpha):
    p = Potential.power(alpha)
    for n in (1, 3, 30):
        for a in (1e-9, 1e-3, 0.2, 0.5, 0.9):
            cert = certify(route, n, p, a)
            assert cert.value >= 0
            assert cert.value <= certificate_upper_bound(cert, p) * (1 + 1e-6)


def test_certify_unknown_route():
    with pytest.raises(DomainError):
        certify("nope", 3, Potential.power(2), 0.2)


def test_certificate_json():
    cert = theorem_muphi(5, Potential.power(2), 0.1)
    d = cert.to_json()
    assert set(d) >= {"a", "value", "route", "constants_used", "validity"}
    provs = {c["provenance"] for c in d["constants_used"]}
    assert provs <= {"assumed", "estimated", "derived"}
    assert "assumed" in provs
    empty = BoundCertificate(0.1, 0.0, "tensorized", "full", 2, "x")
    assert empty.valid and empty.finalize(3.0).value == 3.0


def test_ledger_validation():
    with pytest.raises(ValueError):
        ConstantsLedger(kappa=0)
    with pytest.raises(ValueError):
        ConstantsLedger(c1=0.5)
    led = ConstantsLedger(kappa=1.0)
    assert led.kappa1 == pytest.approx(4.0) and led.kappa2 == pytest.approx(1 / (2 * math.sqrt(2)))
    names = [e[0] for e in led.entries()]
    assert names[:3] == ["kappa", "kappa1", "kappa2"]


# dimension-free behaviour ------------------------------------------------------------


def test_dimension_free_gaussian_is_constant():
    table = dimension_free_check(Potential.power(2), [5, 20, 100, 200])
    assert table.hypothesis == "h2_prime"
    np.testing.assert_allclose(table.coefficients, 1 / math.sqrt(2), rtol=1e-9)


def test_dimension_free_cubic_ratio():
    table = dimension_free_check(Potential.power(3), [10, 20, 50, 100, 200])
    assert table.ratio <= 2


def test_dimension_free_exponential_bounded_below():
    table = dimension_free_check(Potential.power(1), [2, 10, 100, 200])
    assert table.hypothesis == "h1_prime"
    assert table.coefficients.min() >= 1.0
