import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssx import domain_tests as dt
from ssx import matrix_core as mc
from ssx import symmetric_pair as sp
from ssx.errors import ModelError, WitnessError

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def hyp32():
    return sp.build_so_pair(3, 2)


@pytest.fixture(scope="module")
def boost(hyp32):
    return sp.cartan_of_kind(hyp32, "noncompact").generators[0].matrix


def test_omega_thresholds_on_a(hyp32, boost):
    # alpha(A) = 1, so t A is in omega iff |t| < pi/2 and in omega' iff |t| < pi/4.
    assert dt.in_omega(hyp32, 1.5 * boost) is True
    assert dt.in_omega(hyp32, 1.6 * boost) is False
    assert dt.in_omega(hyp32, np.pi / 2 * boost) is None
    assert dt.in_omega_prime(hyp32, 0.78 * boost) is True
    assert dt.in_omega_prime(hyp32, 0.79 * boost) is False
    assert dt.in_omega_zero(hyp32, 1.5 * boost) is True


def test_compact_directions_always_in_omega(hyp32):
    R = sp.cartan_of_kind(hyp32, "compact").generators[0].matrix
    assert dt.in_omega(hyp32, 40.0 * R) is True
    assert dt.in_omega_prime(hyp32, 40.0 * R) is True


def test_predicates_reject_h(hyp32):
    X = hyp32.basis[int(np.flatnonzero(hyp32.masks["h"])[0])]
    with pytest.raises(ModelError):
        dt.in_omega(hyp32, X)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_omega_prime_inside_omega(seed):
    pair = sp.build_so_pair(2, 2, (-1, 1, -1, 1))
    X = sp.random_element(pair, np.random.default_rng(seed), "q", 3.0)
    if dt.in_omega_prime(pair, X) is True:
        assert dt.in_omega(pair, X) is not False


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dphi_routes_agree(seed):
    pair = sp.build_so_pair(3, 2)
    X = sp.random_element(pair, np.random.default_rng(seed), "q", 5.0)
    v = dt.dphi_regular(pair, X)
    if not v.indeterminate:
        assert v.dphi_regular_spectral == v.dphi_regular_cosine
    if v.in_omega:
        assert v.regular is True and v.dphi_regular_cosine is not False


def test_dphi_singular_at_half_pi(hyp32, boost):
    v = dt.dphi_regular(hyp32, np.pi / 2 * boost)
    assert v.dphi_regular_spectral is False
    assert v.dphi_regular_cosine is False
    w = dt.dphi_regular(hyp32, 1.0 * boost)
    assert w.dphi_regular_spectral and w.dphi_regular_cosine


def test_nilpotents_regular(hyp32, rng):
    for _ in range(20):
        N = dt.random_nilpotent(hyp32, rng)
        assert np.linalg.norm(np.linalg.matrix_power(N, 3)) < 1e-8 * (1 + np.linalg.norm(N)) ** 3
        v = dt.dphi_regular(hyp32, N)
        assert v.dphi_regular_spectral and v.dphi_regular_cosine


def test_jordan_mixed_parts(rng):
    pair = sp.build_so_pair(3, 2, (-1, 1, 1, 1, -1))
    assert dt.jordan_mixed_templates(pair)
    assert not dt.jordan_mixed_templates(sp.build_so_pair(3, 2))
    for _ in range(10):
        X, S, N = dt.random_jordan_mixed(pair, rng)
        S2, N2 = dt.jordan_in_q(pair, X)
        scale = 1 + np.linalg.norm(X)
        assert np.linalg.norm(S2 - S) < 1e-5 * scale
        assert np.linalg.norm(S2 @ N2 - N2 @ S2) < 1e-5 * scale ** 2
        assert dt.same_verdict(dt.dphi_regular(pair, X), dt.dphi_regular(pair, S))


def test_cosine_route_near_critical_jordan_mixed():
    # sigma_min of cos(ad_X)|h shrinks like delta^3 here, so the cosine route abstains.
    pair = sp.build_so_pair(3, 2, (-1, 1, 1, 1, -1))
    S0, N0 = dt.jordan_mixed_templates(pair)[0]
    near = dt.dphi_regular(pair, (np.pi / 2 + 1e-3) * S0 + 3 * N0)
    assert near.dphi_regular_spectral is True and near.dphi_regular_cosine is None
    assert near.regular is True and near.indeterminate
    on = dt.dphi_regular(pair, np.pi / 2 * S0 + 3 * N0)
    assert on.dphi_regular_spectral is False and on.dphi_regular_cosine is False


def test_defective_eigenvalue_counts_as_real():
    # The eigenvalue pi/2 + 1e-3 of ad_X is defective and splits off the real
    # axis in floating point; membership must still see it.
    pair = sp.build_so_pair(3, 2, (-1, 1, 1, 1, -1))
    S0, N0 = dt.jordan_mixed_templates(pair)[0]
    X = (np.pi / 2 + 1e-3) * S0 + 3 * N0
    assert dt.in_omega(pair, X) is False
    assert dt.in_omega(pair, (np.pi / 2 - 1e-3) * S0 + 3 * N0) is True


def test_regular_semisimple_on_mixed_cartan(so31_rank2):
    c = sp.cartan_of_kind(so31_rank2, "mixed")
    gens = [g.matrix for g in c.generators]
    generic = 0.3 * gens[0] + 0.4 * gens[1]
    assert dt.regular_semisimple_sigma_tau(so31_rank2, c, generic)
    assert not dt.regular_semisimple_sigma_tau(so31_rank2, c, 0 * generic)


def test_isotropy_and_fourth_power(hyp32, rng):
    X = sp.random_element(hyp32, rng, "q", 1.0)
    eye = np.eye(hyp32.n)
    assert dt.isotropy_condition(hyp32, eye, X)
    h = sp.random_group_element(hyp32, rng, "h")
    assert dt.fourth_power_necessary(hyp32, h, X, sp.Ad(h, X))
    Y = sp.random_element(hyp32, rng, "q", 1.0)
    assert not dt.fourth_power_necessary(hyp32, h, X, Y)
    with pytest.raises(ModelError):
        dt.isotropy_condition(hyp32, 2 * eye, X)


def test_energy_is_half_killing(hyp32, boost):
    assert dt.energy(hyp32, boost) == pytest.approx(0.5 * (hyp32.n - 2) * np.trace(boost @ boost))


def test_collision_witness(so31_rank2):
    w = dt.higher_rank_collision_witness(so31_rank2)
    d = w.to_dict()
    assert d["exp_difference"] < 1e-10
    assert d["in_omega_X"] and d["in_omega_X_gamma"]
    assert d["energy_gap"] > 1e-6
    assert d["in_omega_prime_X_gamma"] is False
    assert np.linalg.norm(mc.matrix_exp(1j * w.gamma) - np.eye(4)) < 1e-10
    assert sp.subspace_residual(so31_rank2, w.gamma, "qp") < 1e-10


def test_collision_witness_unavailable(so22_rank2):
    with pytest.raises(WitnessError, match="noncompact"):
        dt.higher_rank_collision_witness(so22_rank2)
    with pytest.raises(WitnessError):
        dt.higher_rank_collision_witness(sp.build_so_pair(3, 2))
