"""The complex quadric ``z_1^2 + ... + z_p^2 - z_{p+1}^2 - ... - z_{p+q}^2 = -1``.

G = SO(p, q)_0 acts linearly; ``F(Z) = sum eps_j |z_j|^2`` is G-invariant and
separates the closed orbits. The base point is ``x0 = e_n``, whose stabiliser
is SO(p, q - 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import domain_tests as dt
from . import matrix_core as mc
from . import symmetric_pair as sp
from .errors import DegenerateStratumError, ModelError, NumericsError, RegionError

QUADRIC_TOL = 1e-9
BAND_TOL = 1e-8
REGION_MARGIN = dt.TOL_MARGIN

ORBIT_KINDS = ("ClosedQ", "SymmetricGH", "NilpotentN", "ClosedP",
               "NilpotentM", "SymmetricGL", "ClosedR", "Unclassified")


def _eps(p, q):
    return np.array([1.0] * p + [-1.0] * q)


@dataclass(frozen=True, eq=False)
class QuadricPoint:
    p: int
    q: int
    Z: np.ndarray

    @property
    def n(self):
        return self.p + self.q

    @property
    def u(self):
        return self.Z.real

    @property
    def v(self):
        return self.Z.imag

    @property
    def quadric_value(self):
        return complex(np.sum(_eps(self.p, self.q) * self.Z * self.Z))

    @property
    def quadric_residual(self):
        return abs(self.quadric_value + 1.0)

    def translate(self, g):
        return QuadricPoint(self.p, self.q, np.asarray(g) @ self.Z)

    def to_list(self):
        return [[float(z.real), float(z.imag)] for z in self.Z]


def quadric_point(p, q, Z, tol=QUADRIC_TOL):
    """Validated point on the quadric."""
    if p <= 2 or q <= 2:
        raise ModelError(f"the quadric model needs p, q > 2, got ({p}, {q})")
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (p + q,):
        raise ModelError(f"expected a vector of length {p + q}, got shape {Z.shape}")
    pt = QuadricPoint(p, q, Z)
    if pt.quadric_residual > tol * (1.0 + np.sum(np.abs(Z) ** 2)):
        raise ModelError(f"point is off the quadric: residual {pt.quadric_residual:.3e}")
    return pt


def quadric_form(pt, w):
    """Real quadratic form ``q(w) = sum eps_j w_j^2`` of signature (p, q)."""
    return float(np.sum(_eps(pt.p, pt.q) * np.asarray(w) ** 2))


def F_invariant(pt):
    return float(np.sum(_eps(pt.p, pt.q) * np.abs(pt.Z) ** 2))


# ---------------------------------------------------------------------------
# Base points and slices


def base_point(p, q):
    Z = np.zeros(p + q, dtype=complex)
    Z[-1] = 1.0
    return quadric_point(p, q, Z)


def point_y(p, q):
    Z = np.zeros(p + q, dtype=complex)
    Z[0] = 1j
    return quadric_point(p, q, Z)


def point_m(p, q):
    """Base point of the nilpotent orbit on ``F = 1``."""
    Z = np.zeros(p + q, dtype=complex)
    Z[0] = 1j
    Z[p - 1] = 1.0
    Z[p] = 1.0
    return quadric_point(p, q, Z)


def point_n(p, q):
    """Base point of the nilpotent orbit on ``F = -1``."""
    Z = np.zeros(p + q, dtype=complex)
    Z[0] = 1j
    Z[p] = 1j
    Z[-1] = 1.0
    return quadric_point(p, q, Z)


def slice_point(kind, parameter, p, q):
    """Points ``Q(s)``, ``P(t)``, ``R(sigma)`` of the three slices.

    Accepted ranges: ``s <= 0``, ``0 <= t <= pi/2``, ``sigma >= 0``.
    """
    x = float(parameter)
    n = p + q
    Z = np.zeros(n, dtype=complex)
    if kind == "Q":
        if x > 0:
            raise ModelError(f"Q(s) needs s <= 0, got {x}")
        Z[-2] = 1j * np.sinh(x)
        Z[-1] = np.cosh(x)
    elif kind == "P":
        if not 0.0 <= x <= np.pi / 2:
            raise ModelError(f"P(t) needs 0 <= t <= pi/2, got {x}")
        Z[0] = 1j * np.sin(x)
        Z[-1] = np.cos(x)
    elif kind == "R":
        if x < 0:
            raise ModelError(f"R(sigma) needs sigma >= 0, got {x}")
        Z[0] = 1j * np.cosh(x)
        Z[1] = np.sinh(x)
    else:
        raise ModelError(f"unknown slice {kind!r}")
    return quadric_point(p, q, Z)


def closed_form_F(kind, parameter):
    """Value of F on a slice point from the slice parameter alone."""
    x = float(parameter)
    if kind == "Q":
        return -(np.sinh(x) ** 2 + np.cosh(x) ** 2)
    if kind == "P":
        return 1.0 - 2.0 * np.cos(x) ** 2
    if kind == "R":
        return np.cosh(x) ** 2 + np.sinh(x) ** 2
    raise ModelError(f"unknown slice {kind!r}")


# ---------------------------------------------------------------------------
# Orbit classification


@dataclass(frozen=True)
class OrbitLabel:
    kind: str
    parameter: float | None = None
    F: float = 0.0

    def to_dict(self):
        return {"kind": self.kind, "parameter": self.parameter, "F": self.F}


def classify_orbit(pt, tol=BAND_TOL):
    F = F_invariant(pt)
    scale = 1.0 + float(np.sum(np.abs(pt.Z) ** 2))
    band = tol * scale
    if abs(F + 1.0) <= band:
        if np.linalg.norm(pt.v) <= band:
            return OrbitLabel("SymmetricGH", None, F)
        if abs(quadric_form(pt, pt.v)) <= band:
            return OrbitLabel("NilpotentN", None, F)
        return OrbitLabel("Unclassified", None, F)
    if abs(F - 1.0) <= band:
        if np.linalg.norm(pt.u) <= band:
            return OrbitLabel("SymmetricGL", None, F)
        if abs(quadric_form(pt, pt.u)) <= band:
            return OrbitLabel("NilpotentM", None, F)
        return OrbitLabel("Unclassified", None, F)
    if F < -1.0:
        return OrbitLabel("ClosedQ", float(-0.5 * np.arccosh(-F)), F)
    if F < 1.0:
        return OrbitLabel("ClosedP", float(np.arccos(np.sqrt((1.0 - F) / 2.0))), F)
    return OrbitLabel("ClosedR", float(0.5 * np.arccosh(F)), F)


def in_D(pt):
    """Membership in ``D = {F < 1}``."""
    return F_invariant(pt) < 1.0


def in_D_prime(pt):
    """Membership in ``D' = {-F < 1}``."""
    return -F_invariant(pt) < 1.0


# ---------------------------------------------------------------------------
# Group action and polar map


def random_group_element(p, q, rng, max_norm=2.0):
    pair = sp.hyperboloid_pair(p, q)
    return sp.random_group_element(pair, rng, "g", max_norm)


def random_translate(pt, rng, max_norm=2.0):
    return pt.translate(random_group_element(pt.p, pt.q, rng, max_norm))


def polar_map_point(pair, g, X):
    """``g exp(iX) x0`` for the hyperboloid pair."""
    if pair.tau_signs != (1,) * (pair.n - 1) + (-1,):
        raise ModelError("polar_map_point needs the pair built with tau = (1, ..., 1, -1)")
    dt._require_group(pair, g)
    M = sp.require_in(pair, X, "q")
    x0 = np.zeros(pair.n, dtype=complex)
    x0[-1] = 1.0
    Z = np.asarray(g) @ (mc.matrix_exp(1j * M) @ x0)
    pt = QuadricPoint(pair.p_sig, pair.q_sig, Z)
    if pt.quadric_residual > QUADRIC_TOL * (1.0 + np.sum(np.abs(Z) ** 2)):
        raise NumericsError(f"polar map left the quadric: residual {pt.quadric_residual:.3e}")
    return pt


# ---------------------------------------------------------------------------
# Hermitian forms on tangent spaces


@dataclass(frozen=True)
class SignatureTriple:
    n_pos: int
    n_neg: int
    n_zero: int

    def as_tuple(self):
        return (self.n_pos, self.n_neg, self.n_zero)

    def to_dict(self):
        return {"n_pos": self.n_pos, "n_neg": self.n_neg, "n_zero": self.n_zero}


def signature(H, rel_tol=1e-8):
    """Sign counts of a Hermitian matrix with zero band ``rel_tol * (max|eig| + 1)``."""
    H = 0.5 * (H + H.conj().T)
    w = np.linalg.eigvalsh(H)
    band = rel_tol * (float(np.max(np.abs(w), initial=0.0)) + 1.0)
    return SignatureTriple(int(np.sum(w > band)), int(np.sum(w < -band)),
                           int(np.sum(np.abs(w) <= band)))


def _kernel_basis(rows, what):
    A = np.atleast_2d(np.asarray(rows, dtype=complex))
    s = np.linalg.svd(A, compute_uv=False)
    if np.sum(s > mc.tol_rank(s)) < A.shape[0]:
        raise DegenerateStratumError(f"{what}: constraint covectors are dependent")
    return mc.null_space(A)


def holomorphic_tangent(pt):
    """Orthonormal basis (columns) of ``T_Z X = {w : sum eps_j z_j w_j = 0}``."""
    e = _eps(pt.p, pt.q)
    return _kernel_basis([e * pt.Z], "holomorphic tangent")


def levi_tangent(pt):
    """Complex tangent space of the level set of F through ``pt`` inside X."""
    e = _eps(pt.p, pt.q)
    return _kernel_basis([e * pt.Z, e * pt.Z.conj()], "Levi form")


def levi_form(pt, level_function="F"):
    """Levi matrix of ``F`` (or ``-F``) on the complex tangent space of its level set."""
    if level_function not in ("F", "-F"):
        raise ModelError(f"level_function must be 'F' or '-F', got {level_function!r}")
    B = levi_tangent(pt)
    H = B.conj().T @ np.diag(_eps(pt.p, pt.q)) @ B
    return -H if level_function == "-F" else H


def levi_signature(pt, level_function="F"):
    return signature(levi_form(pt, level_function))


# ---------------------------------------------------------------------------
# Transported energy and its complex Hessian


@lru_cache(maxsize=32)
def energy_constants(p, q):
    """``(c, c')`` with ``E(t A) = c t^2`` on a and ``E(s R) = -c' s^2`` on t."""
    pair = sp.hyperboloid_pair(p, q)
    A = sp.cartan_of_kind(pair, "noncompact").generators[0].matrix
    R = sp.cartan_of_kind(pair, "compact").generators[0].matrix
    return dt.energy(pair, A), -dt.energy(pair, R)


def region_of(F):
    if abs(F + 1.0) < REGION_MARGIN or abs(F - 1.0) < REGION_MARGIN:
        raise RegionError(f"F = {F:.12g} is within {REGION_MARGIN} of an orbit boundary")
    if F > 1.0:
        raise RegionError(f"F = {F:.6g} > 1 lies outside D")
    return "Q" if F < -1.0 else "P"


def _energy_derivatives(F, c, cp):
    """``G(F), G'(F), G''(F)`` for the transported energy ``E = G(F)``."""
    x = -F
    if x < 1.0:
        a = np.arccos(x)
        one = 1.0 - x * x
        u = 0.25 * a * a
        du = -a / (2.0 * np.sqrt(one))
        d2u = 0.5 * (1.0 / one - a * x / one ** 1.5)
        k = c
    else:
        b = np.arccosh(x)
        one = x * x - 1.0
        b1 = 1.0 / np.sqrt(one)
        b2 = -x / one ** 1.5
        u = -0.25 * b * b
        du = -0.5 * b * b1
        d2u = -0.5 * (b1 * b1 + b * b2)
        k = cp
    # d/dF = -d/dx
    return k * u, -k * du, k * d2u


def _sqrt_derivatives(G0, G1, G2):
    s = np.sign(G0)
    K = np.sqrt(abs(G0))
    return K, s * G1 / (2 * K), s * G2 / (2 * K) - G1 * G1 / (4 * K ** 3)


def transported_energy(pt):
    """The G-invariant potential ``E o phi^-1`` on D as a function of F."""
    F = F_invariant(pt)
    region_of(F)
    c, cp = energy_constants(pt.p, pt.q)
    return float(_energy_derivatives(F, c, cp)[0])


def complex_hessian(pt, potential="E"):
    """Complex Hessian of ``E`` (or ``sqrt|E|``) on ``T_Z X``.

    Returns ``(H, B)`` with ``B`` the tangent basis. For ``f = G(F)``:
    ``H(w) = G'(F) sum eps |w|^2 + G''(F) |sum eps conj(z) w|^2``.
    """
    F = F_invariant(pt)
    region_of(F)
    c, cp = energy_constants(pt.p, pt.q)
    G0, G1, G2 = _energy_derivatives(F, c, cp)
    if potential == "sqrt":
        if abs(G0) < 1e-14:
            raise RegionError("sqrt|E| is not smooth on the null set E = 0")
        G0, G1, G2 = _sqrt_derivatives(G0, G1, G2)
    elif potential != "E":
        raise ModelError(f"potential must be 'E' or 'sqrt', got {potential!r}")
    e = _eps(pt.p, pt.q)
    B = holomorphic_tangent(pt)
    a = e * pt.Z
    la = B.conj().T @ a
    H = G1 * (B.conj().T @ np.diag(e) @ B) + G2 * np.outer(la, la.conj())
    return 0.5 * (H + H.conj().T), B


def kahler_hessian_signature(pt, scale=1.0):
    H, _ = complex_hessian(pt, "E")
    return signature(scale * H)


def monge_ampere_residual(pt, potential="sqrt"):
    """``min|eig| / max|eig|`` of the complex Hessian of ``sqrt|E|`` on ``T_Z X``."""
    H, _ = complex_hessian(pt, potential)
    w = np.abs(np.linalg.eigvalsh(H))
    return float(np.min(w) / np.max(w))


def potential_value(pt_or_Z, p, q, potential="E"):
    Z = pt_or_Z.Z if isinstance(pt_or_Z, QuadricPoint) else np.asarray(pt_or_Z)
    F = float(np.sum(_eps(p, q) * np.abs(Z) ** 2))
    c, cp = energy_constants(p, q)
    G0 = _energy_derivatives(F, c, cp)[0]
    return float(np.sqrt(abs(G0))) if potential == "sqrt" else float(G0)


def finite_difference_hessian(pt, potential="E", h=1e-4, basis=None):
    """Complex Hessian on ``T_Z X`` by central differences of the potential.

    ``H[i, j] = d^2 f / dw_i d conj(w_j)`` via the directional Laplacian
    ``(f(z+hw) + f(z-hw) + f(z+ihw) + f(z-ihw) - 4 f(z)) / (4 h^2)`` and
    polarisation. The potential is evaluated through F on the ambient space,
    which is where the closed form is defined.
    """
    if basis is None:
        basis = holomorphic_tangent(pt)
    z = pt.Z

    def f(Z):
        return potential_value(Z, pt.p, pt.q, potential)

    f0 = f(z)

    def lap(w):
        return (f(z + h * w) + f(z - h * w) + f(z + 1j * h * w) + f(z - 1j * h * w)
                - 4.0 * f0) / (4.0 * h * h)

    k = basis.shape[1]
    H = np.zeros((k, k), dtype=complex)
    diag = [lap(basis[:, i]) for i in range(k)]
    for i in range(k):
        H[i, i] = diag[i]
        for j in range(i + 1, k):
            wi, wj = basis[:, i], basis[:, j]
            re = (lap(wi + wj) - lap(wi - wj)) / 4.0
            im = (lap(wi + 1j * wj) - lap(wi - 1j * wj)) / 4.0
            # lap(wi + c wj) has cross term 2 Re(c H[i, j]), so im = -Im H[i, j].
            H[i, j] = re - 1j * im
            H[j, i] = np.conj(H[i, j])
    return H


# Collision trials live in their own module; re-exported here for convenience.
from .injectivity import TrialReport, injectivity_trial  # noqa: E402,F401
