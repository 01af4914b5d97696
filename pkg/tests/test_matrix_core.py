import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ssx import matrix_core as mc
from ssx.errors import ClusterError, ExpOverflowError

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def small_matrix(n):
    return arrays(np.float64, (n, n), elements=finite)


def test_as_square_rejects_bad_input():
    with pytest.raises(ValueError):
        mc.as_square(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        mc.as_square(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        mc.as_square(np.zeros((0, 0)))


@pytest.mark.parametrize("M", [
    [[2, 1], [1, 2]],
    [[0, -1], [1, 0]],
    [[1, 2, 0], [0, 1, 3], [4, 0, 1]],
    [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0]],
])
def test_spectrum_matches_charpoly_roots(M):
    lam = sympy.symbols("lam")
    roots = sympy.Poly(sympy.Matrix(M).charpoly(lam).as_expr(), lam).nroots(n=30)
    expect = np.sort_complex(np.array([complex(r) for r in roots]))
    got = np.sort_complex(mc.spectrum(np.array(M, float)).eigenvalues)
    assert np.allclose(got, expect, atol=1e-10)


def test_spectrum_real_subset():
    rep = mc.spectrum(np.diag([1.0, -2.0]) + np.array([[0, 0], [0, 0]]))
    assert list(rep.real_eigenvalues) == [-2.0, 1.0]
    rot = mc.spectrum(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert rot.real_eigenvalues.size == 0
    assert rot.real_part_max == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(small_matrix(4))
def test_spectrum_count_and_real_subset(M):
    rep = mc.spectrum(M)
    assert rep.eigenvalues.size == 4
    for r in rep.real_eigenvalues:
        assert np.min(np.abs(rep.eigenvalues - r)) <= rep.tol_imag + 1e-12


def test_exp_of_nilpotent_is_truncated_series():
    N = np.array([[0.0, 1.0, 2.0], [0.0, 0.0, 3.0], [0.0, 0.0, 0.0]])
    assert np.allclose(mc.matrix_exp(N), np.eye(3) + N + N @ N / 2, atol=1e-14)


def test_exp_refuses_huge_norm():
    with pytest.raises(ExpOverflowError):
        mc.matrix_exp(np.eye(2) * 800.0)


@settings(max_examples=60, deadline=None)
@given(small_matrix(3))
def test_cos_sin_pythagoras(M):
    C, S = mc.matrix_cos(M), mc.matrix_sin(M)
    assert np.allclose(C @ C + S @ S, np.eye(3), atol=1e-8 * (1 + np.linalg.norm(C) ** 2))


def test_cos_closed_forms():
    # J^2 = -1 gives cos(tJ) = cosh(t); a symmetric B with B^2 = 1 gives cos(tB) = cos(t).
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    B = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(mc.matrix_cos(0.7 * J), np.cosh(0.7) * np.eye(2))
    assert np.allclose(mc.matrix_cos(0.7 * B), np.cos(0.7) * np.eye(2))


def test_kernel_helpers():
    M = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert mc.is_singular(M)
    K = mc.null_space(M)
    assert K.shape == (2, 1)
    assert np.allclose(M @ K, 0)
    assert not mc.is_singular(np.eye(3))


def _conjugate(rng, D):
    n = D.shape[0]
    P = rng.standard_normal((n, n)) + 2 * np.eye(n)
    return P @ D @ np.linalg.inv(P)


def test_jordan_chevalley_of_jordan_block(rng):
    D = np.diag([2.0, 2.0, 2.0, -1.0])
    Nb = np.zeros((4, 4))
    Nb[0, 1] = Nb[1, 2] = 1.0
    P = rng.standard_normal((4, 4)) + 3 * np.eye(4)
    Pi = np.linalg.inv(P)
    S, N = mc.jordan_chevalley(P @ (D + Nb) @ Pi)
    assert np.allclose(S, P @ D @ Pi, atol=1e-6)
    assert np.allclose(N, P @ Nb @ Pi, atol=1e-6)
    assert np.allclose(S @ N, N @ S, atol=1e-6)
    assert np.allclose(np.linalg.matrix_power(N, 3), 0, atol=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3, unique=True), st.integers(0, 2**32 - 1))
def test_jordan_chevalley_diagonalisable_has_zero_nilpotent(vals, seed):
    vals = np.array(vals)
    gaps = np.abs(vals[:, None] - vals[None, :])[np.triu_indices(3, 1)]
    if gaps.min() < 0.05:
        return
    M = _conjugate(np.random.default_rng(seed), np.diag(vals))
    S, N = mc.jordan_chevalley(M)
    assert np.allclose(S + N, M)
    assert np.linalg.norm(N) < 1e-6 * (1 + np.linalg.norm(M))


def test_jordan_chevalley_refuses_close_clusters():
    with pytest.raises(ClusterError) as exc:
        mc.jordan_chevalley(np.diag([1.0, 1.0 + 5e-4]))
    assert exc.value.clusters


def _brute_clusters(values, tol):
    # Transitive closure by repeated merging of overlapping groups.
    groups = [{i} for i in range(len(values))]
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                if any(abs(values[i] - values[j]) <= tol for i in groups[a] for j in groups[b]):
                    groups[a] |= groups.pop(b)
                    merged = True
                    break
            if merged:
                break
    return sorted(sorted(g) for g in groups)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-3, 3)), min_size=1, max_size=12))
def test_cluster_matches_brute_force(pts):
    values = np.array([complex(a * 0.1, b * 0.1) for a, b in pts])
    tol = 0.15
    assert sorted(mc._cluster(values, tol)) == _brute_clusters(values, tol)
    means, radii = mc.cluster_spectrum(values, tol)
    expected = sorted((np.mean(values[g]).real, np.mean(values[g]).imag)
                      for g in _brute_clusters(values, tol))
    got = sorted(zip(means.real, means.imag))
    assert np.allclose(got, expected)
    assert np.all(radii >= 0) and np.all(radii <= tol * len(values))
