"""Matrix models of orthogonal symmetric pairs (g, theta, tau).

``g = so(p, q)`` is realised on R^(p+q) with the form ``J = diag(+1 x p, -1 x q)``.
The basis is ``G_ij = E_ij - e_i e_j E_ji`` for ``i < j`` in lexicographic order;
each basis element is a joint eigenvector of the Cartan involution
``theta(X) = J X J`` and of ``tau(X) = T X T`` with ``T = diag(tau_signs)``, so
both involutions are diagonal in this basis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np

from . import matrix_core as mc
from .errors import ModelError, UnsupportedModelError

SCHEMA_VERSION = 1

# Part names of the combined decomposition, in storage order.
PART_NAMES = ("hk", "hp", "qk", "qp")

# Irrational weights for a generic element of a Cartan subspace.
_GENERIC_WEIGHTS = (1.0, np.sqrt(2.0), np.sqrt(3.0), np.sqrt(5.0), np.sqrt(7.0))


def _so_tag(p, q):
    if p + q < 2:
        return None
    if p == 0 or q == 0:
        return f"so({p + q})"
    return f"so({p},{q})"


def family_tag(p_sig, q_sig, tau_signs):
    eps = [1] * p_sig + [-1] * q_sig
    plus = [e for e, t in zip(eps, tau_signs) if t == 1]
    minus = [e for e, t in zip(eps, tau_signs) if t == -1]
    parts = []
    for block in (plus, minus):
        tag = _so_tag(block.count(1), block.count(-1))
        if tag:
            parts.append(tag)
    return f"so({p_sig},{q_sig})/" + ("+".join(parts) if parts else "0")


@dataclass(frozen=True, eq=False)
class SymmetricPairModel:
    p_sig: int
    q_sig: int
    tau_signs: tuple
    index_pairs: tuple
    basis: np.ndarray = field(repr=False)
    theta_matrix: np.ndarray = field(repr=False)
    tau_matrix: np.ndarray = field(repr=False)
    killing_gram: np.ndarray = field(repr=False)
    structure: np.ndarray = field(repr=False)
    family_tag: str

    @property
    def n(self):
        return self.p_sig + self.q_sig

    @property
    def dim(self):
        return len(self.index_pairs)

    @property
    def J(self):
        return np.diag([1.0] * self.p_sig + [-1.0] * self.q_sig)

    @property
    def T(self):
        return np.diag(np.asarray(self.tau_signs, dtype=float))

    @cached_property
    def masks(self):
        th = np.diag(self.theta_matrix)
        ta = np.diag(self.tau_matrix)
        m = {
            "hk": (ta > 0) & (th > 0),
            "hp": (ta > 0) & (th < 0),
            "qk": (ta < 0) & (th > 0),
            "qp": (ta < 0) & (th < 0),
        }
        m["h"] = ta > 0
        m["q"] = ta < 0
        m["k"] = th > 0
        m["p"] = th < 0
        m["g"] = np.ones_like(ta, dtype=bool)
        return m

    def subspace_dim(self, name):
        return int(np.sum(self.masks[name]))

    def subspace_basis(self, name):
        """Basis matrices of the named subspace (``h``, ``q``, ``qk``, ...)."""
        return self.basis[self.masks[name]]

    def coords(self, M):
        M = np.asarray(M)
        return np.array([M[i, j] for i, j in self.index_pairs])

    def matrix(self, coords):
        return np.tensordot(np.asarray(coords), self.basis, axes=1)

    def g_residual(self, M):
        M = np.asarray(M)
        return float(np.linalg.norm(M.T @ self.J + self.J @ M))

    @property
    def rank(self):
        plus = sum(1 for t in self.tau_signs if t == 1)
        return min(plus, self.n - plus)

    def theta(self, M):
        J = self.J
        return J @ np.asarray(M) @ J

    def tau(self, M):
        T = self.T
        return T @ np.asarray(M) @ T

    def killing(self, X, Y):
        return float(self.coords(X) @ self.killing_gram @ self.coords(Y))

    def bracket(self, X, Y):
        return X @ Y - Y @ X


def _basis_element(n, i, j, eps):
    M = np.zeros((n, n))
    M[i, j] = 1.0
    M[j, i] = -eps[i] * eps[j]
    return M


def build_so_pair(p_sig, q_sig, tau_signs=None) -> SymmetricPairModel:
    """Model of ``so(p_sig, q_sig)`` with ``tau = Ad(diag(tau_signs))``.

    The default sign pattern ``(1, ..., 1, -1)`` gives the hyperboloid pair
    ``so(p, q) / so(p, q - 1)``.
    """
    n = p_sig + q_sig
    if p_sig < 0 or q_sig < 0 or n < 3:
        raise ModelError(f"need p_sig + q_sig >= 3, got ({p_sig}, {q_sig})")
    if tau_signs is None:
        tau_signs = (1,) * (n - 1) + (-1,)
    tau_signs = tuple(int(t) for t in tau_signs)
    if len(tau_signs) != n or any(t not in (1, -1) for t in tau_signs):
        raise ModelError(f"tau_signs must be {n} entries of +-1, got {tau_signs}")
    if len(set(tau_signs)) == 1:
        raise ModelError("tau_signs all equal: tau is trivial and q = 0")
    return _build_cached(p_sig, q_sig, tau_signs)


@lru_cache(maxsize=64)
def _build_cached(p_sig, q_sig, tau_signs):
    n = p_sig + q_sig
    eps = [1] * p_sig + [-1] * q_sig
    pairs = tuple(combinations(range(n), 2))
    basis = np.array([_basis_element(n, i, j, eps) for i, j in pairs])
    theta = np.diag([float(eps[i] * eps[j]) for i, j in pairs])
    tau = np.diag([float(tau_signs[i] * tau_signs[j]) for i, j in pairs])

    dim = len(pairs)

    def coords(M):
        return np.array([M[i, j] for i, j in pairs])

    # structure[k] = matrix of ad(basis[k]) in the basis
    structure = np.zeros((dim, dim, dim))
    for k in range(dim):
        for l in range(dim):
            structure[k][:, l] = coords(basis[k] @ basis[l] - basis[l] @ basis[k])
    killing = np.einsum("kab,lba->kl", structure, structure)
    for arr in (basis, theta, tau, killing, structure):
        arr.setflags(write=False)
    return SymmetricPairModel(
        p_sig=p_sig,
        q_sig=q_sig,
        tau_signs=tau_signs,
        index_pairs=pairs,
        basis=basis,
        theta_matrix=theta,
        tau_matrix=tau,
        killing_gram=killing,
        structure=structure,
        family_tag=family_tag(p_sig, q_sig, tau_signs),
    )


def hyperboloid_pair(p, q):
    """The pair ``so(p, q) / so(p, q - 1)`` of the real hyperboloid."""
    return build_so_pair(p, q, (1,) * (p + q - 1) + (-1,))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    matrix: np.ndarray
    coords: np.ndarray
    parts: tuple  # matrices in h&k, h&p, q&k, q&p

    def part(self, name):
        return self.parts[PART_NAMES.index(name)]


def _as_matrix(X):
    if isinstance(X, AlgebraElement):
        return X.matrix
    return np.asarray(X)


def decompose(pair, X, tol=1e-10) -> AlgebraElement:
    M = _as_matrix(X)
    if M.shape != (pair.n, pair.n):
        raise ModelError(f"expected {pair.n}x{pair.n} matrix, got {M.shape}")
    res = pair.g_residual(M)
    if res > tol * (1.0 + np.linalg.norm(M)):
        raise ModelError(f"matrix not in g: residual {res:.3e}")
    c = pair.coords(M)
    parts = tuple(pair.matrix(np.where(pair.masks[name], c, 0.0)) for name in PART_NAMES)
    return AlgebraElement(matrix=pair.matrix(c), coords=c, parts=parts)


def element(pair, coords) -> AlgebraElement:
    return decompose(pair, pair.matrix(coords))


def subspace_residual(pair, X, name):
    """Norm of the component of ``X`` outside the named subspace."""
    c = pair.coords(_as_matrix(X))
    return float(np.linalg.norm(np.where(pair.masks[name], 0.0, c)))


def require_in(pair, X, name, tol=1e-10):
    M = _as_matrix(X)
    res = pair.g_residual(M)
    scale = 1.0 + np.linalg.norm(M)
    if res > tol * scale:
        raise ModelError(f"matrix not in g: residual {res:.3e}")
    out = subspace_residual(pair, M, name)
    if out > tol * scale:
        raise ModelError(f"element not in {name}: residual {out:.3e}")
    return M


def ad_matrix(pair, X) -> np.ndarray:
    """Matrix of ``ad_X = [X, .]`` over the stored basis."""
    c = pair.coords(_as_matrix(X))
    return np.tensordot(c, pair.structure, axes=1)


# ---------------------------------------------------------------------------
# Cartan subspaces and restricted roots


@dataclass(frozen=True)
class RootData:
    """A joint eigenvalue functional of ad on a Cartan subspace."""

    values: tuple  # alpha(generator_i), complex
    multiplicity: int
    vectors: np.ndarray = field(repr=False)  # columns span the root space (coords, complex)
    kind: str = ""  # real | imaginary | complex


@dataclass(frozen=True, eq=False)
class CartanSubspaceData:
    kind: str  # compact | noncompact | mixed
    generators: tuple
    restricted_type: str  # A1 | BC1 | higher
    multiplicities: dict
    signatures: dict
    roots: tuple = field(repr=False, default=())
    compact_dim: int = 0
    noncompact_dim: int = 0

    def element(self, coeffs):
        M = sum(c * g.matrix for c, g in zip(coeffs, self.generators))
        return M


def joint_roots(pair, generators, tol=1e-7):
    """Joint eigen-decomposition of ``ad`` over commuting ``generators``.

    Returns the nonzero roots as :class:`RootData` (root vectors in basis
    coordinates) and the dimension of the common zero eigenspace.
    """
    mats = [ad_matrix(pair, g) for g in generators]
    weights = _GENERIC_WEIGHTS[: len(mats)]
    generic = sum(w * m for w, m in zip(weights, mats))
    w, V = np.linalg.eig(generic)
    scale = 1.0 + max(np.linalg.norm(m, 2) for m in mats)
    groups = mc._cluster(w, tol * scale)
    roots = []
    zero_dim = 0
    for g in groups:
        Vg = V[:, g]
        pinv = np.linalg.pinv(Vg)
        vals = tuple(complex(np.trace(pinv @ m @ Vg) / len(g)) for m in mats)
        vals = tuple(
            complex(v.real if abs(v.real) > tol * scale else 0.0,
                    v.imag if abs(v.imag) > tol * scale else 0.0)
            for v in vals
        )
        if all(v == 0 for v in vals):
            zero_dim += len(g)
            continue
        roots.append(RootData(values=vals, multiplicity=len(g), vectors=Vg))
    roots.sort(key=lambda r: tuple((v.real, v.imag) for v in r.values))
    return roots, zero_dim


def _classify_roots(roots, compact_idx, noncompact_idx):
    out = []
    for r in roots:
        on_k = any(r.values[i] != 0 for i in compact_idx)
        on_p = any(r.values[i] != 0 for i in noncompact_idx)
        if on_k and on_p:
            kind = "complex"
        elif on_p:
            kind = "real"
        else:
            kind = "imaginary"
        out.append(RootData(values=r.values, multiplicity=r.multiplicity,
                            vectors=r.vectors, kind=kind))
    return tuple(out)


def _tau_theta_signature(pair, vectors):
    """(+1, -1) eigenspace dims of tau*theta restricted to a root space."""
    D = pair.tau_matrix @ pair.theta_matrix
    restricted = np.linalg.pinv(vectors) @ D @ vectors
    ev = np.linalg.eigvals(restricted).real
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def _rank_one_data(pair, kind, gen):
    roots, _ = joint_roots(pair, [gen.matrix])
    positive = []
    for r in roots:
        v = r.values[0]
        val = v.real if kind == "noncompact" else v.imag
        if val > 0:
            positive.append((val, r))
    positive.sort(key=lambda t: t[0])
    alpha = positive[0][0]
    mult = {"alpha": 0, "2alpha": 0}
    sigs = {}
    for val, r in positive:
        if np.isclose(val, alpha, rtol=1e-8):
            key = "alpha"
        elif np.isclose(val, 2 * alpha, rtol=1e-8):
            key = "2alpha"
        else:
            raise UnsupportedModelError(f"unexpected restricted root value {val}/{alpha}")
        mult[key] += r.multiplicity
        if kind == "noncompact":
            plus, minus = _tau_theta_signature(pair, r.vectors)
            sigs[f"m+({key})"] = sigs.get(f"m+({key})", 0) + plus
            sigs[f"m-({key})"] = sigs.get(f"m-({key})", 0) + minus
    if kind == "noncompact":
        for key in ("alpha", "2alpha"):
            sigs.setdefault(f"m+({key})", 0)
            sigs.setdefault(f"m-({key})", 0)
    rtype = "BC1" if mult["2alpha"] else "A1"
    cls = _classify_roots(roots, [0] if kind == "compact" else [],
                          [0] if kind == "noncompact" else [])
    return CartanSubspaceData(
        kind=kind,
        generators=(gen,),
        restricted_type=rtype,
        multiplicities={**mult, "alpha_value": alpha},
        signatures=sigs,
        roots=cls,
        compact_dim=1 if kind == "compact" else 0,
        noncompact_dim=1 if kind == "noncompact" else 0,
    )


def _generator(pair, i, j):
    k = pair.index_pairs.index((min(i, j), max(i, j)))
    return element(pair, np.eye(pair.dim)[k])


def _rank_one_subspaces(pair):
    n = pair.n
    eps = [1] * pair.p_sig + [-1] * pair.q_sig
    signs = pair.tau_signs
    odd = [i for i in range(n) if signs.count(signs[i]) == 1][0]
    same = [j for j in range(n) if j != odd and eps[j] == eps[odd]]
    other = [j for j in range(n) if eps[j] != eps[odd]]
    out = []
    # Nearest same-sign partner for the rotation, farthest opposite-sign
    # partner for the boost: for tau = (1,...,1,-1) this gives the slices
    # Q(s) = exp(i s R_{n-1,n}) x0 and P(t) = exp(i t B_{1,n}) x0.
    if same:
        j = min(same, key=lambda j: (abs(j - odd), j))
        out.append(_rank_one_data(pair, "compact", _generator(pair, odd, j)))
    if other:
        j = max(other, key=lambda j: (abs(j - odd), -j))
        out.append(_rank_one_data(pair, "noncompact", _generator(pair, odd, j)))
    return out


def _candidate_directions(dim):
    eye = np.eye(dim)
    cands = [eye[i] for i in range(dim)]
    for i, j in combinations(range(dim), 2):
        cands.append(eye[i] + eye[j])
        cands.append(eye[i] - eye[j])
    return cands


def _normalize_direction(v):
    v = np.real_if_close(v).real
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    v[np.abs(v) < 1e-12] = 0.0
    return v


def _commutant_dim(pair, generators, name="q"):
    idx = np.flatnonzero(pair.masks[name])
    blocks = [ad_matrix(pair, g)[:, idx] for g in generators]
    return mc.null_space(np.vstack(blocks)).shape[1]


def _abelian_pair_in(pair, name):
    """Two commuting independent directions inside a subspace, or None."""
    idx = np.flatnonzero(pair.masks[name])
    if len(idx) < 2:
        return None
    for a in _candidate_directions(len(idx)):
        x = np.zeros(pair.dim)
        x[idx] = a
        X = pair.matrix(x)
        K = mc.null_space(ad_matrix(pair, X)[:, idx])
        for col in K.T:
            y = _normalize_direction(col)
            if abs(abs(np.dot(y, a)) / (np.linalg.norm(y) * np.linalg.norm(a)) - 1) < 1e-9:
                continue
            # orthogonalise against a
            y = y - np.dot(y, a) / np.dot(a, a) * a
            y = _normalize_direction(y)
            Y = np.zeros(pair.dim)
            Y[idx] = y
            return X, pair.matrix(Y)
    return None


def _mixed_pair(pair):
    kidx = np.flatnonzero(pair.masks["qk"])
    pidx = np.flatnonzero(pair.masks["qp"])
    for a in _candidate_directions(len(kidx)):
        x = np.zeros(pair.dim)
        x[kidx] = a
        X = pair.matrix(x)
        K = mc.null_space(ad_matrix(pair, X)[:, pidx])
        if K.shape[1] == 0:
            continue
        y = np.zeros(pair.dim)
        y[pidx] = _normalize_direction(K[:, 0])
        return X, pair.matrix(y)
    return None


def _rank_two_data(pair, kind, X, Y):
    gens = tuple(decompose(pair, M) for M in (X, Y))
    if _commutant_dim(pair, [X, Y]) != 2:
        return None
    compact_idx = [i for i, g in enumerate(gens) if subspace_residual(pair, g.matrix, "qk") < 1e-12]
    noncompact_idx = [i for i in range(2) if i not in compact_idx]
    roots, _ = joint_roots(pair, [X, Y])
    roots = _classify_roots(roots, compact_idx, noncompact_idx)
    mult = {}
    for r in roots:
        mult[r.kind] = mult.get(r.kind, 0) + r.multiplicity
    return CartanSubspaceData(
        kind=kind,
        generators=gens,
        restricted_type="higher",
        multiplicities=mult,
        signatures={},
        roots=roots,
        compact_dim=len(compact_idx),
        noncompact_dim=len(noncompact_idx),
    )


def cartan_subspaces(pair):
    """theta-stable Cartan subspaces of ``q`` for the supported families.

    Rank one: the compact ``t`` in ``q&k`` and the noncompact ``a`` in
    ``q&p`` (whichever exist). Rank two: every one of the compact, noncompact
    and mixed ``c = c_k + c_p`` types that the model admits.
    """
    if pair.rank == 1:
        return _rank_one_subspaces(pair)
    if pair.rank != 2:
        raise UnsupportedModelError(f"rank {pair.rank} models are not supported")
    out = []
    for kind, name in (("compact", "qk"), ("noncompact", "qp")):
        found = _abelian_pair_in(pair, name)
        if found is not None:
            data = _rank_two_data(pair, kind, *found)
            if data is not None:
                out.append(data)
    mixed = _mixed_pair(pair)
    if mixed is not None:
        data = _rank_two_data(pair, "mixed", *mixed)
        if data is not None:
            out.append(data)
    if not out:
        raise UnsupportedModelError(f"no Cartan subspace found for {pair.family_tag}")
    return out


def cartan_of_kind(pair, kind):
    for c in cartan_subspaces(pair):
        if c.kind == kind:
            return c
    raise UnsupportedModelError(f"{pair.family_tag} has no {kind} Cartan subspace")


def maximally_split(pair):
    """The Cartan subspace with the largest noncompact part."""
    return max(cartan_subspaces(pair), key=lambda c: (c.noncompact_dim, c.kind == "mixed"))


def cartan_subalgebra_extending(pair, cartan):
    """Elementary generators ``b`` in the centraliser of ``c`` inside ``h``
    such that ``b + c`` is a Cartan subalgebra of ``g``."""
    gens = [g.matrix for g in cartan.generators]
    chosen = []
    for k in np.flatnonzero(pair.masks["h"]):
        B = pair.basis[k]
        if all(np.allclose(pair.bracket(B, M), 0) for M in gens + chosen):
            chosen.append(B)
    full = gens + chosen
    if mc.null_space(np.vstack([ad_matrix(pair, M) for M in full])).shape[1] != len(full):
        raise UnsupportedModelError("could not extend the Cartan subspace to a Cartan subalgebra")
    return chosen


def coroot(pair, generators, values):
    """Coefficients of the inverse root ``h_lambda`` over ``generators``.

    ``values[i] = lambda(generators[i])``; ``h_lambda`` is ``2 t / lambda(t)``
    where ``t`` represents ``lambda`` through the Killing form on the span.
    """
    K = np.array([[pair.killing(a, b) for b in generators] for a in generators])
    lam = np.asarray(values, dtype=complex)
    t = np.linalg.solve(K, lam)
    return 2.0 * t / (lam @ t)


# ---------------------------------------------------------------------------
# Static classification data

RANK_ONE_CATALOG = (
    ("so(p+1,q+1)_0/so(p+1,q)", "A1", True),
    ("su(p+1,q+1)/s(u(p+1,q)+u(1))", "BC1", False),
    ("sp(p+1,q+1)/sp(p+1,q)+sp(1)", "BC1", False),
    ("sl(n+2,R)/gl(n+1,R)", "BC1", False),
    ("sp(n+2,R)/sp(n+1,R)+sp(1,R)", "BC1", False),
    ("f4(-20)/so(8,1)", "BC1", False),
    ("f4(4)/so(5,4)", "BC1", False),
)


def rank_one_catalog():
    """The seven rank-one families with their restricted root types.

    ``matrix_model`` is true only where :func:`build_so_pair` provides a model.
    """
    return [
        {"pair": name, "restricted_type": rt, "matrix_model": supported}
        for name, rt, supported in RANK_ONE_CATALOG
    ]


# ---------------------------------------------------------------------------
# Serialisation


def model_to_dict(pair):
    return {
        "schema_version": SCHEMA_VERSION,
        "p_sig": pair.p_sig,
        "q_sig": pair.q_sig,
        "tau_signs": list(pair.tau_signs),
        "family_tag": pair.family_tag,
        "index_pairs": [list(ij) for ij in pair.index_pairs],
        "basis": pair.basis.astype(int).tolist(),
    }


def model_to_json(pair):
    return json.dumps(model_to_dict(pair), sort_keys=True)


def model_from_json(text):
    data = json.loads(text) if isinstance(text, str) else text
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ModelError(f"unsupported schema_version {data.get('schema_version')}")
    pair = build_so_pair(data["p_sig"], data["q_sig"], tuple(data["tau_signs"]))
    if not np.array_equal(pair.basis, np.asarray(data["basis"], dtype=float)):
        raise ModelError("serialised basis does not match the rebuilt model")
    return pair


# ---------------------------------------------------------------------------
# Sampling


def random_element(pair, rng, subspace="g", max_norm=2.0):
    """Random element of a subspace with spectral norm uniform in [0, max_norm]."""
    c = np.where(pair.masks[subspace], rng.standard_normal(pair.dim), 0.0)
    M = pair.matrix(c)
    norm = np.linalg.norm(M, 2)
    if norm == 0:
        return M
    return M * (max_norm * rng.uniform() / norm)


def random_group_element(pair, rng, subspace="g", max_norm=2.0):
    """``exp`` of a random algebra element; lands in the identity component."""
    return mc.matrix_exp(random_element(pair, rng, subspace, max_norm))


def group_tau(pair, g):
    T = pair.T
    return T @ g @ T


def Ad(g, X):
    return g @ X @ np.linalg.inv(g)
