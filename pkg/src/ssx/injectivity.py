"""Randomised collision trials for the polar map ``[g, X] -> g exp(iX) H^C``.

Points of ``G^C / H^C`` are represented by
``g x e_k`` when tau flips a single coordinate ``k`` (``H^C`` is the stabiliser
of ``e_k``), and by ``g x T (g x)^-1`` otherwise (``H^C`` is the full fixed
group of tau).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import domain_tests as dt
from . import matrix_core as mc
from . import symmetric_pair as sp
from .errors import ModelError, SSXError
from .parallel import ordered_map, sample_rng

COLLISION_TOL = 1e-8
CERTIFICATE_TOL = 1e-7
DOMAINS = ("omega", "omega_prime")
_MAX_TRIES = 200
_DETAIL_LIMIT = 20

STREAM_RANDOM, STREAM_EQUIVALENT, STREAM_LATTICE = 0, 1, 2


def _odd_index(pair):
    """Index of the coordinate whose tau sign occurs exactly once, if any."""
    t = pair.tau_signs
    for sign in (-1, 1):
        if t.count(sign) == 1:
            return t.index(sign)
    return None


def image(pair, g, X):
    """Point of ``G^C / H^C`` represented by ``g exp(iX)``."""
    x = np.asarray(g) @ mc.matrix_exp(1j * np.asarray(X))
    k = _odd_index(pair)
    if k is not None:
        return x[:, k]
    return (x @ pair.T @ np.linalg.inv(x)).ravel()


def in_H(pair, h, tol=CERTIFICATE_TOL):
    h = np.asarray(h)
    scale = 1.0 + np.linalg.norm(h)
    if np.linalg.norm(h.T @ pair.J @ h - pair.J) > tol * scale ** 2:
        return False
    if np.linalg.norm(pair.T @ h @ pair.T - h) > tol * scale:
        return False
    k = _odd_index(pair)
    if k is not None and abs(h[k, k] - 1.0) > tol * scale:
        return False
    return True


def certificate(pair, g1, X, g2, Y, tol=CERTIFICATE_TOL):
    """Whether ``[g1, X] = [g2, Y]`` via ``h = g2^-1 g1`` in H with ``Y = Ad_h X``."""
    h = np.linalg.solve(g2, g1)
    if not in_H(pair, h, tol):
        return False
    return bool(np.linalg.norm(sp.Ad(h, X) - Y) < tol * (1.0 + np.linalg.norm(X)))


def in_domain(pair, X, domain):
    if domain == "omega":
        return dt.in_omega(pair, X) is True
    if domain == "omega_prime":
        return dt.in_omega_prime(pair, X) is True
    raise ModelError(f"unknown domain {domain!r}; expected one of {DOMAINS}")


def sample_in_domain(pair, rng, domain, max_norm=3.0):
    for _ in range(_MAX_TRIES):
        X = sp.random_element(pair, rng, "q", max_norm)
        if in_domain(pair, X, domain):
            return X
    raise SSXError(f"no sample in {domain} after {_MAX_TRIES} tries")


def _compare(pair, domain, g1, X, g2, Y, use_filter=True, known_in_domain=False):
    """Classify a candidate pair. Membership is checked first."""
    inside = known_in_domain or (in_domain(pair, X, domain) and in_domain(pair, Y, domain))
    rec = {"in_domain": bool(inside)}
    im1, im2 = image(pair, g1, X), image(pair, g2, Y)
    dist = float(np.linalg.norm(im1 - im2))
    collided = dist < COLLISION_TOL * (1.0 + np.linalg.norm(im1))
    rec["image_distance"] = dist
    rec["collision"] = bool(collided)
    if use_filter:
        g = np.linalg.solve(g2, g1)
        rec["fourth_power"] = dt.fourth_power_necessary(pair, g, X, Y)
    if collided:
        rec["certificate"] = certificate(pair, g1, X, g2, Y)
    return rec


@dataclass
class TrialReport:
    model: str
    domain: str
    seed: int
    n_samples: int
    sampled_pairs: int = 0
    collisions: int = 0
    equivalent_collisions: int = 0
    nonequivalent_collisions: int = 0
    filtered_by_fourth_power: int = 0
    fourth_power_violations: int = 0
    constructed_equivalent: int = 0
    constructed_equivalent_passed: int = 0
    lattice_partners: int = 0
    lattice_partners_colliding: int = 0
    rejected_by_membership: int = 0
    expected_nonequivalent_collisions: int = 0
    witness: dict | None = None
    details: list = field(default_factory=list)

    @property
    def passed(self):
        return (self.nonequivalent_collisions == 0
                and self.fourth_power_violations == 0
                and self.constructed_equivalent_passed == self.constructed_equivalent
                and self.lattice_partners_colliding == self.lattice_partners)

    def to_dict(self):
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def _random_pair(pair, domain, seed, i, max_norm):
    rng = sample_rng(seed, i, STREAM_RANDOM)
    g1 = sp.random_group_element(pair, rng)
    g2 = sp.random_group_element(pair, rng)
    X = sample_in_domain(pair, rng, domain, max_norm)
    Y = sample_in_domain(pair, rng, domain, max_norm)
    return _compare(pair, domain, g1, X, g2, Y, known_in_domain=True)


def _equivalent_pair(pair, domain, seed, i, max_norm):
    rng = sample_rng(seed, i, STREAM_EQUIVALENT)
    g = sp.random_group_element(pair, rng)
    h = sp.random_group_element(pair, rng, "h")
    X = sample_in_domain(pair, rng, domain, max_norm)
    Y = sp.Ad(h, X)
    return _compare(pair, domain, g, X, g @ np.linalg.inv(h), Y, use_filter=False)


def _lattice_pair(pair, domain, seed, i, gamma_data):
    """``X`` and a lattice translate ``Y`` with ``exp(iY) = exp(iX)``; Y is outside the domain."""
    rng = sample_rng(seed, i, STREAM_LATTICE)
    g = sp.random_group_element(pair, rng)
    # A mild h keeps exp(i Ad_h(X + gamma)) far from overflow.
    h = sp.random_group_element(pair, rng, "h", max_norm=0.5)
    base, shift, bound = gamma_data
    x = rng.uniform(-bound, bound)
    k = int(rng.choice([-1, 1]))
    X = sp.Ad(h, x * base)
    Y = sp.Ad(h, x * base + k * shift)
    return _compare(pair, domain, g, X, g, Y, use_filter=False)


def _lattice_data(pair, domain):
    """(direction, lattice shift commuting with it, coefficient bound inside the domain)."""
    margin = 0.05
    if pair.rank == 1:
        cartan = sp.cartan_of_kind(pair, "noncompact")
        A = cartan.generators[0].matrix
        alpha = cartan.multiplicities["alpha_value"]
        top = 2.0 if cartan.restricted_type == "BC1" else 1.0
        limit = (np.pi / 2 if domain == "omega" else np.pi / 4) / (top * alpha)
        return A, 2 * np.pi * A, limit - margin
    from .root_lattice import gamma_lattice_element

    cartan = sp.cartan_of_kind(pair, "mixed")
    gamma = gamma_lattice_element(pair, cartan).matrix
    ck = [g.matrix for g in cartan.generators
          if sp.subspace_residual(pair, g.matrix, "qk") < 1e-12][0]
    return ck, gamma, 1.5


def injectivity_trial(pair, domain, n_samples, seed, n_equivalent=100, n_lattice=100,
                      inject_witness=False, max_norm=3.0):
    """Sample pairs in ``domain`` and count collisions of the polar map.

    Streams: ``n_samples`` independent random pairs (with the fourth-power
    filter), ``n_equivalent`` constructed equivalent pairs, ``n_lattice``
    lattice translates ``(X, X + gamma)`` that collide but must be excluded by
    membership, and optionally the higher-rank witness.
    """
    if domain not in DOMAINS:
        raise ModelError(f"unknown domain {domain!r}; expected one of {DOMAINS}")
    rep = TrialReport(model=pair.family_tag, domain=domain, seed=int(seed), n_samples=n_samples)

    def note(kind, i, rec):
        if len(rep.details) < _DETAIL_LIMIT:
            rep.details.append({"stream": kind, "index": i, **rec})

    randoms = ordered_map(lambda i: _random_pair(pair, domain, seed, i, max_norm), range(n_samples))
    for i, rec in enumerate(randoms):
        rep.sampled_pairs += 1
        if not rec["fourth_power"]:
            rep.filtered_by_fourth_power += 1
            if rec["collision"]:
                rep.fourth_power_violations += 1
                note("random", i, rec)
        if rec["collision"]:
            rep.collisions += 1
            if rec["certificate"]:
                rep.equivalent_collisions += 1
            else:
                rep.nonequivalent_collisions += 1
                note("random", i, rec)

    equivs = ordered_map(lambda i: _equivalent_pair(pair, domain, seed, i, max_norm),
                         range(n_equivalent))
    for i, rec in enumerate(equivs):
        rep.constructed_equivalent += 1
        if rec["collision"]:
            rep.collisions += 1
            if rec["certificate"]:
                rep.equivalent_collisions += 1
                rep.constructed_equivalent_passed += 1
            else:
                rep.nonequivalent_collisions += 1
                note("equivalent", i, rec)
        else:
            note("equivalent", i, rec)

    if n_lattice:
        data = _lattice_data(pair, domain)
        lats = ordered_map(lambda i: _lattice_pair(pair, domain, seed, i, data), range(n_lattice))
        for i, rec in enumerate(lats):
            rep.lattice_partners += 1
            if rec["collision"]:
                rep.lattice_partners_colliding += 1
            else:
                note("lattice", i, rec)
            if not rec["in_domain"]:
                rep.rejected_by_membership += 1
            elif rec["collision"]:
                rep.collisions += 1
                if rec["certificate"]:
                    rep.equivalent_collisions += 1
                elif pair.rank > 1:
                    # Same mechanism as the witness: Omega is not injective in rank two.
                    rep.expected_nonequivalent_collisions += 1
                else:
                    rep.nonequivalent_collisions += 1
                    note("lattice", i, rec)

    if inject_witness:
        rep.witness = _witness_record(pair, domain)
        if rep.witness.get("collision") and rep.witness.get("in_domain"):
            rep.collisions += 1
            if rep.witness["certificate"]:
                rep.equivalent_collisions += 1
            else:
                rep.expected_nonequivalent_collisions += 1
    return rep


def _witness_record(pair, domain):
    try:
        w = dt.higher_rank_collision_witness(pair)
    except SSXError as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    e = np.eye(pair.n)
    rec = _compare(pair, domain, e, w.X, e, w.X + w.gamma, use_filter=False)
    rec["expected_nonequivalent"] = True
    rec["energy_gap"] = abs(w.energy_X - w.energy_X_gamma)
    return rec
