"""Command-line runners: ``ssx <subcommand> [options]``.

Exit codes: 0 when every checked claim passed, 1 when a claim failed,
2 for configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import domain_tests as dt
from . import hyperboloid as hy
from . import injectivity as inj
from . import report as rp
from . import root_lattice as rl
from . import symmetric_pair as sp
from .errors import SSXError
from .parallel import ordered_map, sample_rng

HYPERBOLOID_COLUMNS = ["p", "q", "stratum", "parameter", "F", "n_pos", "n_neg", "n_zero"]
F_GRID = {"Q": (-1.5, -1.0, -0.5), "P": (np.pi / 6, np.pi / 4, np.pi / 3), "R": (0.5, 1.0, 1.5)}
BOUNDARY_LEVELS = (-0.5, 0.0, 0.5)


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# Shared helpers


def _tau(text):
    if text is None:
        return None
    try:
        signs = tuple(int(s) for s in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--tau expects comma-separated +-1, got {text!r}") from exc
    return signs


def _pair(args):
    return sp.build_so_pair(args.p, args.q, _tau(args.tau))


def _tolerances(args, defaults):
    tol = dict(defaults)
    for item in args.tol or []:
        name, sep, value = item.partition("=")
        if not sep or name not in tol:
            raise ConfigError(f"unknown tolerance {name!r}; this subcommand accepts {sorted(tol)}")
        try:
            tol[name] = float(value)
        except ValueError as exc:
            raise ConfigError(f"tolerance {name} needs a number, got {value!r}") from exc
    return tol


def _config(args):
    skip = {"func", "output", "format"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out["format"] = args.format
    return out


def _translates(pt, seed, stream, count, max_norm=1.0):
    """``count`` random G-translates of ``pt``, deterministic in (seed, stream)."""
    return [pt.translate(hy.random_group_element(pt.p, pt.q, sample_rng(seed, i, stream), max_norm))
            for i in range(count)]


def _hyperboloid_pq(args):
    if args.p <= 2 or args.q <= 2:
        raise ConfigError(f"the hyperboloid model needs p, q > 2, got ({args.p}, {args.q})")
    return args.p, args.q


def _sig_row(p, q, stratum, parameter, pt, sig):
    return {"p": p, "q": q, "stratum": stratum, "parameter": parameter,
            "F": hy.F_invariant(pt), **sig.to_dict()}


# ---------------------------------------------------------------------------
# Subcommands


def cmd_omega_check(args):
    pair = _pair(args)
    tol = _tolerances(args, {"margin": dt.TOL_MARGIN})

    def one(i):
        X = sp.random_element(pair, sample_rng(args.seed, i), "q", args.max_norm)
        v = dt.dphi_regular(pair, X)
        return {"index": i, "in_omega": v.in_omega, "in_omega_prime": v.in_omega_prime,
                "dphi_regular_spectral": v.dphi_regular_spectral,
                "dphi_regular_cosine": v.dphi_regular_cosine, "regular": v.regular}

    rows = ordered_map(one, range(args.samples))
    inside = [r for r in rows if r["in_omega"] is True]
    regular = all(r["regular"] is not False for r in inside)
    nested = all(r["in_omega"] is not False for r in rows if r["in_omega_prime"] is True)
    claims = [
        rp.claim("omega_regular", "dphi is regular at every sampled X in omega", regular,
                 checked=len(inside)),
        rp.claim("omega_prime_in_omega", "every sampled X in omega' lies in omega", nested),
    ]
    data = {"model": pair.family_tag,
            "counts": {"in_omega": len(inside),
                       "outside_omega": sum(r["in_omega"] is False for r in rows),
                       "indeterminate": sum(r["in_omega"] is None for r in rows)}}
    return rp.make_report("omega-check", _config(args), tol, claims, rows, data), None


def cmd_regularity(args):
    pair = _pair(args)
    tol = _tolerances(args, {"margin": dt.TOL_MARGIN})

    def one(i):
        X = sp.random_element(pair, sample_rng(args.seed, i), "q", args.max_norm)
        v = dt.dphi_regular(pair, X)
        return {"index": i, "kind": "random", **v.to_dict()}

    rows = ordered_map(one, range(args.samples))
    decided = [r for r in rows
               if r["dphi_regular_spectral"] is not None and r["dphi_regular_cosine"] is not None]
    agree = all(r["dphi_regular_spectral"] == r["dphi_regular_cosine"] for r in decided)
    claims = [rp.claim("routes_agree", "spectral and cosine verdicts agree on decided samples",
                       agree, decided=len(decided), indeterminate=len(rows) - len(decided))]

    if dt.nilpotent_triples(pair):
        nil = ordered_map(lambda i: dt.dphi_regular(
            pair, dt.random_nilpotent(pair, sample_rng(args.seed, i, 1))), range(args.nilpotent))
        ok = all(v.regular is True and v.dphi_regular_cosine is not False for v in nil)
        claims.append(rp.claim("nilpotent_regular", "every sampled nilpotent is regular", ok,
                               checked=len(nil)))
    else:
        claims.append(rp.claim("nilpotent_regular", "model has no nilpotent templates in q", None))

    if dt.jordan_mixed_templates(pair):
        def mixed(i):
            X, S, _ = dt.random_jordan_mixed(pair, sample_rng(args.seed, i, 2))
            return dt.dphi_regular(pair, X), dt.dphi_regular(pair, S)

        pairs = ordered_map(mixed, range(args.jordan))
        ok = all(dt.same_verdict(a, b) for a, b in pairs)
        claims.append(rp.claim("semisimple_part_decides", "verdict(X) equals verdict(X_s)", ok,
                               checked=len(pairs)))
    else:
        claims.append(rp.claim("semisimple_part_decides",
                               "model has no Jordan-mixed templates in q", None))
    return rp.make_report("regularity", _config(args), tol, claims, rows,
                          {"model": pair.family_tag}), None


_EXPECTED_KIND = {"Q": "ClosedQ", "P": "ClosedP", "R": "ClosedR", "x0": "SymmetricGH",
                  "y": "SymmetricGL", "m": "NilpotentM", "n": "NilpotentN"}


def _orbit_bases(p, q):
    bases = [("x0", None, hy.base_point(p, q)), ("y", None, hy.point_y(p, q)),
             ("m", None, hy.point_m(p, q)), ("n", None, hy.point_n(p, q))]
    for kind, grid in F_GRID.items():
        bases += [(kind, x, hy.slice_point(kind, x, p, q)) for x in grid]
    return bases


def cmd_orbit_classify(args):
    tol = _tolerances(args, {"band": hy.BAND_TOL})
    if args.points:
        p, q = _hyperboloid_pq(args)
        try:
            with open(args.points) as fh:
                raw = json.load(fh)
            pts = [hy.quadric_point(p, q, [complex(a, b) for a, b in z]) for z in raw]
        except (OSError, ValueError, TypeError) as exc:
            raise ConfigError(f"cannot read point file {args.points!r}: {exc}") from exc
        rows = []
        for i, pt in enumerate(pts):
            lab = hy.classify_orbit(pt, tol["band"])
            rows.append({"index": i, **lab.to_dict(), "in_D": hy.in_D(pt),
                         "in_D_prime": hy.in_D_prime(pt)})
        claims = [rp.claim("classified", "every point received a stratum label",
                           all(r["kind"] != "Unclassified" for r in rows))]
        return rp.make_report("orbit-classify", _config(args), tol, claims, rows), None

    p, q = _hyperboloid_pq(args)
    rows, stable, expected, dprime = [], True, True, True
    for b, (kind, param, base) in enumerate(_orbit_bases(p, q)):
        ref = hy.classify_orbit(base, tol["band"])
        for pt in _translates(base, args.seed, b, args.samples):
            lab = hy.classify_orbit(pt, tol["band"])
            stable &= lab.kind == ref.kind
            expected &= lab.kind == _EXPECTED_KIND[kind]
            if lab.kind in ("ClosedP", "NilpotentM", "ClosedR"):
                dprime &= hy.in_D_prime(pt)
        rows.append({"base": kind, "base_parameter": param, "kind": ref.kind,
                     "parameter": ref.parameter, "F": ref.F, "translates": args.samples})
    claims = [
        rp.claim("label_constant_on_orbits", "label(g.pt) = label(pt) on sampled translates", stable),
        rp.claim("labels_match_strata", "each base point lands in its known stratum", expected),
        rp.claim("d_prime_description", "-F < 1 on sampled points of strata P, m, R", dprime),
    ]
    return rp.make_report("orbit-classify", _config(args), tol, claims, rows), None


def cmd_f_table(args):
    p, q = _hyperboloid_pq(args)
    tol = _tolerances(args, {"closed_form": 1e-9, "ordering_margin": 1e-6})
    rows = []
    worst = 0.0
    values = {k: [] for k in F_GRID}
    stream = 0
    for kind, grid in F_GRID.items():
        for x in grid:
            base = hy.slice_point(kind, x, p, q)
            expect = hy.closed_form_F(kind, x)
            for j, pt in enumerate(_translates(base, args.seed, stream, args.samples)):
                F = hy.F_invariant(pt)
                err = abs(F - expect)
                worst = max(worst, err / (1.0 + abs(expect)))
                values[kind].append(F)
                rows.append({"p": p, "q": q, "stratum": kind, "parameter": x, "translate": j,
                             "F": F, "closed_form": expect, "abs_error": err})
            stream += 1
    m = tol["ordering_margin"]
    ordered = (max(values["Q"]) < -1 - m and -1 + m < min(values["P"])
               and max(values["P"]) < 1 - m and 1 + m < min(values["R"]))
    claims = [
        rp.claim("f_closed_form", "F on every slice translate matches its closed form",
                 worst < tol["closed_form"], worst_relative_error=worst),
        rp.claim("f_strict_ordering", "F(Q_s) < -1 < F(P_t) < 1 < F(R_sigma) with margin", ordered),
    ]
    cols = ["p", "q", "stratum", "parameter", "translate", "F", "closed_form", "abs_error"]
    return rp.make_report("f-table", _config(args), tol, claims, rows), cols


def _levi_strata(p, q):
    """(stratum, parameter, base point, expected signature)."""
    out = [("m", None, hy.point_m(p, q), (p - 2, q - 1, 1)),
           ("n", None, hy.point_n(p, q), (p - 1, q - 2, 1))]
    out += [("F<-1", s, hy.slice_point("Q", s, p, q), (p, q - 2, 0)) for s in F_GRID["Q"]]
    out += [("F>1", s, hy.slice_point("R", s, p, q), (p - 2, q, 0)) for s in F_GRID["R"]]
    for R in BOUNDARY_LEVELS:
        t = float(np.arccos(np.sqrt((1.0 - R) / 2.0)))
        out.append(("dD_R", R, hy.slice_point("P", t, p, q), (p - 1, q - 1, 0)))
    return out


def cmd_levi_table(args):
    p, q = _hyperboloid_pq(args)
    tol = _tolerances(args, {"zero_band_relative": 1e-8})
    rows, claims = [], []
    by_stratum = {}
    for b, (stratum, param, base, expect) in enumerate(_levi_strata(p, q)):
        ok = True
        for pt in _translates(base, args.seed, b, args.samples):
            sig = hy.signature(hy.levi_form(pt), tol["zero_band_relative"])
            ok &= sig.as_tuple() == expect
            rows.append(_sig_row(p, q, stratum, param, pt, sig))
        by_stratum.setdefault(stratum, [expect, True])[1] &= ok
    for stratum, (expect, ok) in by_stratum.items():
        claims.append(rp.claim(f"levi_signature_{stratum}",
                               f"Levi signature on {stratum} equals {expect}", ok,
                               expected=list(expect)))
    return rp.make_report("levi-table", _config(args), tol, claims, rows), HYPERBOLOID_COLUMNS


def _closed_orbit_points(p, q, seed, count):
    """(region, parameter, point) on Q and P slices away from the null set."""
    out = []
    stream = 0
    for region, grid in (("Q", F_GRID["Q"]), ("P", F_GRID["P"])):
        for x in grid:
            base = hy.slice_point(region, x, p, q)
            out += [(region, x, pt) for pt in _translates(base, seed, stream, count)]
            stream += 1
    return out


def cmd_kahler_signature(args):
    p, q = _hyperboloid_pq(args)
    tol = _tolerances(args, {"zero_band_relative": 1e-8, "fd_relative": 1e-4, "fd_step": 1e-4})
    expect = (p, q - 1, 0)

    def one(item):
        region, x, pt = item
        H, B = hy.complex_hessian(pt, "E")
        sig = hy.signature(H, tol["zero_band_relative"])
        Hfd = hy.finite_difference_hessian(pt, "E", tol["fd_step"], B)
        rel = float(np.linalg.norm(H - Hfd) / np.linalg.norm(H))
        return {**_sig_row(p, q, region, x, pt, sig), "fd_relative_error": rel}

    rows = ordered_map(one, _closed_orbit_points(p, q, args.seed, args.samples))
    claims = []
    for region in ("Q", "P"):
        sub = [r for r in rows if r["stratum"] == region]
        ok = all((r["n_pos"], r["n_neg"], r["n_zero"]) == expect for r in sub)
        claims.append(rp.claim(f"kahler_signature_{region}",
                               f"Hessian signature equals {expect} in region {region}", ok,
                               points=len(sub)))
    worst = max(r["fd_relative_error"] for r in rows)
    claims.append(rp.claim("hessian_matches_fd", "closed-form Hessian agrees with finite differences",
                           worst < tol["fd_relative"], worst_relative_error=worst))
    cols = HYPERBOLOID_COLUMNS + ["fd_relative_error"]
    return rp.make_report("kahler-signature", _config(args), tol, claims, rows), cols


def cmd_ma_residual(args):
    p, q = _hyperboloid_pq(args)
    tol = _tolerances(args, {"sqrt_residual_max": 1e-6, "energy_residual_min": 1e-2})

    def one(item):
        region, x, pt = item
        return {"p": p, "q": q, "stratum": region, "parameter": x, "F": hy.F_invariant(pt),
                "residual_sqrt": hy.monge_ampere_residual(pt, "sqrt"),
                "residual_energy": hy.monge_ampere_residual(pt, "E")}

    rows = ordered_map(one, _closed_orbit_points(p, q, args.seed, args.samples))
    worst_sqrt = max(r["residual_sqrt"] for r in rows)
    best_energy = min(r["residual_energy"] for r in rows)
    claims = [
        rp.claim("sqrt_energy_degenerate", "complex Hessian of sqrt|E| has a null direction",
                 worst_sqrt < tol["sqrt_residual_max"], worst=worst_sqrt),
        rp.claim("energy_nondegenerate", "contrast: Hessian of E itself is nondegenerate",
                 best_energy > tol["energy_residual_min"], smallest=best_energy),
    ]
    cols = ["p", "q", "stratum", "parameter", "F", "residual_sqrt", "residual_energy"]
    return rp.make_report("ma-residual", _config(args), tol, claims, rows), cols


def cmd_injectivity(args):
    pair = _pair(args)
    tol = _tolerances(args, {"collision": inj.COLLISION_TOL, "certificate": inj.CERTIFICATE_TOL})
    if tol["collision"] != inj.COLLISION_TOL or tol["certificate"] != inj.CERTIFICATE_TOL:
        raise ConfigError("injectivity tolerances are locked to their defaults")
    rep = inj.injectivity_trial(pair, args.domain, args.samples, args.seed,
                                n_equivalent=args.equivalent, n_lattice=args.lattice,
                                inject_witness=args.witness, max_norm=args.max_norm)
    d = rep.to_dict()
    applies = pair.rank == 1 or args.domain == "omega_prime"
    claims = [
        rp.claim("injective_on_domain", "no nonequivalent collisions in the domain",
                 (d["nonequivalent_collisions"] == 0) if applies else None,
                 nonequivalent_collisions=d["nonequivalent_collisions"]),
        rp.claim("equivalent_pairs_certified", "constructed equivalent pairs collide with certificates",
                 d["constructed_equivalent_passed"] == d["constructed_equivalent"]),
        rp.claim("fourth_power_necessary", "no collision among pairs failing the fourth-power test",
                 d["fourth_power_violations"] == 0),
    ]
    if args.lattice:
        claims.append(rp.claim("lattice_partners_collide", "lattice translates share the image",
                               d["lattice_partners_colliding"] == d["lattice_partners"]))
    if not applies:
        claims.append(rp.claim("omega_not_injective_higher_rank",
                               "omega admits nonequivalent collisions in rank two",
                               d["expected_nonequivalent_collisions"] > 0,
                               expected_nonequivalent_collisions=d["expected_nonequivalent_collisions"]))
    data = {"model": pair.family_tag, "rank": pair.rank, "trial": d}
    return rp.make_report("injectivity", _config(args), tol, claims, [], data), None


def _lemma_5_1_rows(kinds, involutions):
    rows = []
    for kind, n in kinds:
        for inv in involutions:
            r = rl.verify_lemma_5_1(kind, n, inv)
            rows.append({"lemma": "shortest_generators", "type": kind, "n": n, "involution": inv,
                         "verdict": r["verdict"], "conclusions_hold": r["conclusions_hold"],
                         "minimum": r["minimum"], "minimal_count": r["minimal_count"],
                         "hypothesis_violations": len(r["hypothesis_violations"])})
    return rows


def cmd_lattice_verify(args):
    tol = _tolerances(args, {"root_value": 1e-8})
    kind = args.type.upper() if args.type else None
    rows, claims, data = [], [], {}
    involutions = [args.involution] if args.involution else ["identity", "diagram"]
    if kind in (None, "A", "D", "E"):
        if kind is None:
            kinds = [("A", n) for n in range(1, 6)] + [("D", n) for n in range(3, 6)]
        else:
            if args.n is None:
                raise ConfigError("--n is required with --type")
            kinds = [(kind, args.n)]
        sub = _lemma_5_1_rows(kinds, involutions)
        rows += sub
        claims.append(rp.claim("simply_laced_generators_shortest",
                               "generators and differences v - tau v are shortest vectors",
                               all(r["conclusions_hold"] for r in sub),
                               hypothesis_violations=sum(r["hypothesis_violations"] > 0 for r in sub)))
    if kind in (None, "B"):
        ns = range(2, 6) if kind is None else [args.n]
        if kind == "B" and args.n is None:
            raise ConfigError("--n is required with --type")
        ok = True
        for n in ns:
            r = rl.lemma_5_2_report(n)
            ok &= r["verdict"] == "pass"
            data[f"B{n}"] = r
            for g in r["generators"]:
                rows.append({"lemma": "long_root_shortest", "type": "B", "n": n, **g})
        claims.append(rp.claim("long_root_iff_shortest",
                               "a B_n generator is shortest exactly when its root is long", ok))
    if kind in (None, "SO"):
        models = [(args.p, args.q)] if kind == "SO" else [(2, 2), (3, 2), (2, 3), (4, 3)]
        ok = True
        for p, q in models:
            pair = sp.build_so_pair(p, q)
            r = rl.verify_lemma_5_3(pair, tol=tol["root_value"])
            ok &= r["verdict"] == "pass"
            for row in r["rows"]:
                rows.append({"lemma": "root_values_on_lattice", "type": "so", "model": r["model"],
                             **{k: v for k, v in row.items() if k != "root_values"}})
        claims.append(rp.claim("root_values_in_pi_Z",
                               "alpha(gamma) lies in pi Z with |alpha(gamma)| >= 2 pi (reduced)", ok))
    if not claims:
        raise ConfigError(f"unknown lattice type {args.type!r}; use A, B, D, E or so")
    return rp.make_report("lattice-verify", _config(args), tol, claims, rows, data), None


def cmd_rank1_catalog(args):
    tol = _tolerances(args, {})
    rows = sp.rank_one_catalog()
    checks = []
    for p, q in [(2, 2), (3, 2), (2, 3), (4, 3)]:
        pair = sp.build_so_pair(p, q)
        cartan = sp.cartan_of_kind(pair, "noncompact")
        checks.append({"model": pair.family_tag, "rank": pair.rank,
                       "restricted_type": cartan.restricted_type})
    ok = all(c["rank"] == 1 and c["restricted_type"] == "A1" for c in checks)
    claims = [rp.claim("orthogonal_family_reduced",
                       "orthogonal rank-one models have restricted root system A1", ok)]
    return rp.make_report("rank1-catalog", _config(args), tol, claims, rows,
                          {"matrix_model_checks": checks}), ["pair", "restricted_type", "matrix_model"]


def cmd_collision_witness(args):
    pair = _pair(args)
    tol = _tolerances(args, {"exp_difference": 1e-10, "energy_gap": 1e-6})
    try:
        w = dt.higher_rank_collision_witness(pair).to_dict()
    except SSXError as exc:
        claims = [rp.claim("witness_found", "a non-injectivity witness exists on this model", False,
                           error=f"{type(exc).__name__}: {exc}")]
        return rp.make_report("collision-witness", _config(args), tol, claims,
                              data={"model": pair.family_tag}), None
    claims = [
        rp.claim("witness_found", "a non-injectivity witness exists on this model", True),
        rp.claim("same_exponential", "exp(i(X + gamma)) = exp(iX)",
                 w["exp_difference"] < tol["exp_difference"], value=w["exp_difference"]),
        rp.claim("both_in_omega", "X and X + gamma lie in omega",
                 w["in_omega_X"] and w["in_omega_X_gamma"]),
        rp.claim("energies_differ", "E(X) != E(X + gamma), so the points are not equivalent",
                 w["energy_gap"] > tol["energy_gap"], value=w["energy_gap"]),
        rp.claim("outside_omega_prime", "X + gamma is not in omega'",
                 w["in_omega_prime_X_gamma"] is False),
    ]
    return rp.make_report("collision-witness", _config(args), tol, claims,
                          data={"model": pair.family_tag, "witness": w}), None


# ---------------------------------------------------------------------------
# Parser


def _common(sp_, pq=(2, 2), samples=100, tau=True):
    sp_.add_argument("--p", type=int, default=pq[0])
    sp_.add_argument("--q", type=int, default=pq[1])
    if tau:
        sp_.add_argument("--tau", default=None, help="tau sign vector, e.g. -1,1,-1,1")
    sp_.add_argument("--samples", type=int, default=samples)
    sp_.add_argument("--seed", type=int, default=0)
    sp_.add_argument("--tol", action="append", metavar="NAME=VALUE",
                     help="override a tolerance (repeatable)")
    sp_.add_argument("--format", choices=rp.FORMATS, default="json")
    sp_.add_argument("--output", default=None, help="write the report here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="ssx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("omega-check", help="domain membership sweep")
    _common(s, (3, 2), 200)
    s.add_argument("--max-norm", type=float, default=3.0)
    s.set_defaults(func=cmd_omega_check)

    s = sub.add_parser("regularity", help="dual-route regularity sweep")
    _common(s, (3, 2), 1000)
    s.add_argument("--max-norm", type=float, default=4.0)
    s.add_argument("--nilpotent", type=int, default=200)
    s.add_argument("--jordan", type=int, default=200)
    s.set_defaults(func=cmd_regularity)

    s = sub.add_parser("orbit-classify", help="classify a point file or sampled translates")
    _common(s, (3, 3), 20, tau=False)
    s.add_argument("--points", default=None, help="JSON list of points [[re, im], ...]")
    s.set_defaults(func=cmd_orbit_classify)

    s = sub.add_parser("f-table", help="F on the three slices")
    _common(s, (3, 3), 20, tau=False)
    s.set_defaults(func=cmd_f_table)

    s = sub.add_parser("levi-table", help="Levi signatures per stratum")
    _common(s, (3, 3), 10, tau=False)
    s.set_defaults(func=cmd_levi_table)

    s = sub.add_parser("kahler-signature", help="complex Hessian of the energy")
    _common(s, (3, 3), 20, tau=False)
    s.set_defaults(func=cmd_kahler_signature)

    s = sub.add_parser("ma-residual", help="Monge-Ampere residuals")
    _common(s, (3, 3), 20, tau=False)
    s.set_defaults(func=cmd_ma_residual)

    s = sub.add_parser("injectivity", help="polar map collision trial")
    _common(s, (2, 2), 1000)
    s.add_argument("--domain", choices=inj.DOMAINS, default="omega")
    s.add_argument("--equivalent", type=int, default=100)
    s.add_argument("--lattice", type=int, default=100)
    s.add_argument("--witness", action="store_true", help="inject the rank-two witness")
    s.add_argument("--max-norm", type=float, default=3.0)
    s.set_defaults(func=cmd_injectivity)

    s = sub.add_parser("lattice-verify", help="lattice lemma reports")
    _common(s, (3, 2), 0)
    s.add_argument("--type", default=None, help="A, B, D, E or so (default: all)")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--involution", choices=("identity", "diagram"), default=None)
    s.set_defaults(func=cmd_lattice_verify)

    s = sub.add_parser("rank1-catalog", help="rank-one classification table")
    _common(s, (2, 2), 0, tau=False)
    s.set_defaults(func=cmd_rank1_catalog)

    s = sub.add_parser("collision-witness", help="rank-two non-injectivity construction")
    _common(s, (3, 1), 0)
    s.set_defaults(func=cmd_collision_witness, tau="-1,1,-1,1")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        if getattr(args, "samples", 0) < 0:
            raise ConfigError("--samples must be non-negative")
        report, columns = args.func(args)
    except ConfigError as exc:
        print(f"ssx: configuration error: {exc}", file=sys.stderr)
        return 2
    except SSXError as exc:
        print(f"ssx: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = rp.render(report, args.format, columns)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rp.exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
