"""Dense matrix kernel: spectra, exponential, cosine, Jordan-Chevalley.

Every rank or realness decision in the package goes through the tolerances
defined here so that boundary behaviour is uniform.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ClusterError, ExpOverflowError, SpectrumError

# Norm above which exp(M) is refused (e^700 is near the float64 limit).
EXP_NORM_LIMIT = 700.0


def tol_imag(M) -> float:
    """Threshold on |Im lambda| for calling an eigenvalue real."""
    return 1e-8 * (1.0 + np.linalg.norm(M, 2))


def tol_rank(singular_values) -> float:
    return 1e-8 * (float(np.max(singular_values, initial=0.0)) + 1.0)


def tol_backward(singular_values, n) -> float:
    """Rounding floor for singular values of a computed ``n x n`` matrix.

    Singular values move by at most the norm of the perturbation, so anything
    below this is indistinguishable from an exact zero.
    """
    return 64.0 * n * np.finfo(float).eps * float(np.max(singular_values, initial=0.0))


def as_square(M) -> np.ndarray:
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    real_part_max: float
    real_eigenvalues: np.ndarray
    tol_imag: float


def spectrum(M, tol=None) -> SpectrumReport:
    """All eigenvalues of ``M`` with multiplicity, split into real / non-real.

    Near-real eigenvalues count as real; domain predicates rely on that
    pessimistic convention.
    """
    A = as_square(M)
    try:
        w = scipy.linalg.eigvals(A, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SpectrumError(
            f"eigenvalue iteration did not converge for {A.shape[0]}x{A.shape[0]} "
            f"matrix (norm {np.linalg.norm(A):.3e}): {exc}"
        ) from exc
    t = tol_imag(A) if tol is None else tol
    real = np.sort(w[np.abs(w.imag) <= t].real)
    return SpectrumReport(
        eigenvalues=w,
        real_part_max=float(np.max(w.real)),
        real_eigenvalues=real,
        tol_imag=t,
    )


def matrix_exp(M) -> np.ndarray:
    A = as_square(M)
    norm = np.linalg.norm(A, 1)
    if norm > EXP_NORM_LIMIT:
        raise ExpOverflowError(f"matrix 1-norm {norm:.3e} exceeds {EXP_NORM_LIMIT}")
    E = scipy.linalg.expm(A)
    if not np.all(np.isfinite(E)):
        raise ExpOverflowError("matrix exponential overflowed")
    return E


def matrix_cos(M) -> np.ndarray:
    A = as_square(M).astype(complex)
    C = 0.5 * (matrix_exp(1j * A) + matrix_exp(-1j * A))
    if np.isrealobj(M) or not np.any(np.asarray(M).imag):
        return C.real
    return C


def matrix_sin(M) -> np.ndarray:
    A = as_square(M).astype(complex)
    S = (matrix_exp(1j * A) - matrix_exp(-1j * A)) / 2j
    if np.isrealobj(M) or not np.any(np.asarray(M).imag):
        return S.real
    return S


def smallest_singular_value(M) -> tuple[float, float]:
    """Return ``(sigma_min, tol_rank)`` for a kernel-triviality decision."""
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if s.size == 0:
        return np.inf, 0.0
    return float(s[-1]), tol_rank(s)


def is_singular(M) -> bool:
    smin, tol = smallest_singular_value(M)
    return smin <= tol


def null_space(M, tol=None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``M``."""
    A = np.atleast_2d(np.asarray(M))
    u, s, vh = np.linalg.svd(A)
    t = tol_rank(s) if tol is None else tol
    rank = int(np.sum(s > t))
    return vh[rank:].conj().T


def _cluster_labels(values, tol):
    """Single-linkage component labels (smallest member index) at distance ``tol``."""
    adj = np.abs(values[:, None] - values[None, :]) <= tol
    labels = np.arange(values.size)
    while True:
        new = np.min(np.where(adj, labels[None, :], values.size), axis=1)
        if np.array_equal(new, labels):
            return labels
        labels = new


def _cluster(values, tol):
    """Single-linkage clustering of complex numbers at distance ``tol``."""
    values = np.asarray(values)
    groups = {}
    for i, lab in enumerate(_cluster_labels(values, tol)):
        groups.setdefault(lab, []).append(i)
    return sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))


def cluster_spectrum(values, tol):
    """Means and radii of single-linkage eigenvalue clusters.

    The mean of a cluster produced by a defective eigenvalue is accurate to
    rounding even though the members spread like a root of machine epsilon.
    """
    values = np.asarray(values, dtype=complex)
    labels = _cluster_labels(values, tol)
    uniq, inv = np.unique(labels, return_inverse=True)
    means = np.bincount(inv, weights=values.real) + 1j * np.bincount(inv, weights=values.imag)
    means /= np.bincount(inv)
    radii = np.zeros(uniq.size)
    np.maximum.at(radii, inv, np.abs(values - means[inv]))
    return means, radii


def _spectral_projector(A, select):
    """Projector onto the invariant subspace of eigenvalues picked by ``select``."""
    n = A.shape[0]
    T, Z, k = scipy.linalg.schur(A, output="complex", sort=select)
    if k == n:
        return np.eye(n, dtype=complex), k
    if k == 0:
        return np.zeros((n, n), dtype=complex), k
    T11, T12, T22 = T[:k, :k], T[:k, k:], T[k:, k:]
    # T11 Y - Y T22 = -T12 block-diagonalises T via W = [[I, Y], [0, I]].
    Y = scipy.linalg.solve_sylvester(T11, -T22, -T12)
    W = np.eye(n, dtype=complex)
    W[:k, k:] = Y
    Winv = np.eye(n, dtype=complex)
    Winv[:k, k:] = -Y
    D = np.zeros((n, n), dtype=complex)
    D[:k, :k] = np.eye(k)
    return Z @ W @ D @ Winv @ Z.conj().T, k


def jordan_chevalley(M, tol_cluster=None, gap_factor=10.0):
    """Additive Jordan decomposition ``M = S + N``.

    Eigenvalues are clustered (single linkage at ``tol_cluster``); ``S`` is
    the sum over clusters of the cluster mean times the spectral projector.
    Raises :class:`ClusterError` when two clusters sit closer than
    ``gap_factor * tol_cluster``, where the split is not trustworthy.
    """
    A = as_square(M)
    real_input = np.isrealobj(A) or not np.any(A.imag)
    n = A.shape[0]
    scale = 1.0 + np.linalg.norm(A, 2)
    if tol_cluster is None:
        # Defective eigenvalues of a size-k block scatter like eps**(1/k).
        tol_cluster = 1e-4 * scale
    w = spectrum(A).eigenvalues
    groups = _cluster(w, tol_cluster)
    means = []
    for g in groups:
        means.append(np.mean(w[g]))
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            gap = min(abs(w[a] - w[b]) for a in groups[i] for b in groups[j])
            if gap < gap_factor * tol_cluster:
                raise ClusterError(
                    f"clusters at {means[i]:.6g} and {means[j]:.6g} separated by "
                    f"{gap:.3e} < {gap_factor * tol_cluster:.3e}",
                    clusters=[(complex(m), len(g)) for m, g in zip(means, groups)],
                )
    S = np.zeros((n, n), dtype=complex)
    Ac = A.astype(complex)
    for g, mu in zip(groups, means):
        members = w[g]
        radius = max(abs(members - mu)) + tol_cluster

        def select(z, mu=mu, radius=radius):
            return abs(z - mu) <= radius

        P, k = _spectral_projector(Ac, select)
        if k != len(g):
            raise ClusterError(
                f"Schur reordering picked {k} eigenvalues for a cluster of {len(g)}",
                clusters=[(complex(m), len(gg)) for m, gg in zip(means, groups)],
            )
        # The cluster mean is better conditioned as trace(A P) / trace(P).
        mu_refined = np.trace(Ac @ P) / k
        S += mu_refined * P
    if real_input:
        S = S.real
    N = A - S
    return S, N
