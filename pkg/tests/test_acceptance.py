"""Acceptance criteria, one test each, with a pass/fail line in the terminal summary."""
import io
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from ssx import cli
from ssx import domain_tests as dt
from ssx import hyperboloid as hy
from ssx import injectivity as inj
from ssx import root_lattice as rl
from ssx import symmetric_pair as sp
from ssx.errors import WitnessError
from ssx.parallel import sample_rng

pytestmark = pytest.mark.acceptance

PQ_TABLE = [(3, 3), (4, 3), (3, 4)]
SLICE_GRID = {"Q": (-1.5, -1.0, -0.5), "P": (np.pi / 6, np.pi / 4, np.pi / 3), "R": (0.5, 1.0, 1.5)}
RANK_TWO = (2, 2, (-1, 1, -1, 1))
RANK_TWO_SUBSTITUTE = (3, 1, (-1, 1, -1, 1))


def _translates(base, seed, count, max_norm=1.0):
    return [base.translate(hy.random_group_element(base.p, base.q, sample_rng(seed, i), max_norm))
            for i in range(count)]


def _record(log, key, ok, detail, elapsed, limit=None):
    status = "PASS" if ok else "FAIL"
    budget = f" (limit {limit:g} s)" if limit else ""
    log[key] = f"criterion {key}: {status}  {detail}  [{elapsed:.1f} s{budget}]"


def test_criterion_1_f_chain(acceptance_log):
    t0 = time.perf_counter()
    worst, margin_ok, seed = 0.0, True, 100
    for p, q in PQ_TABLE:
        F = {k: [] for k in SLICE_GRID}
        for kind, grid in SLICE_GRID.items():
            for x in grid:
                expect = hy.closed_form_F(kind, x)
                for pt in _translates(hy.slice_point(kind, x, p, q), seed, 20):
                    val = hy.F_invariant(pt)
                    worst = max(worst, abs(val - expect))
                    F[kind].append(val)
                seed += 1
        m = 1e-6
        margin_ok &= (max(F["Q"]) < -1 - m < -1 + m < min(F["P"])
                      and max(F["P"]) < 1 - m < 1 + m < min(F["R"]))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and margin_ok and elapsed < 10
    _record(acceptance_log, 1, ok, f"max |F - closed form| = {worst:.2e}, ordering margin ok = {margin_ok}",
            elapsed, 10)
    assert worst < 1e-9
    assert margin_ok
    assert elapsed < 10


def _levi_cases(p, q):
    out = [("m", hy.point_m(p, q), (p - 2, q - 1, 1)), ("n", hy.point_n(p, q), (p - 1, q - 2, 1))]
    out += [(f"F<-1 s={s}", hy.slice_point("Q", s, p, q), (p, q - 2, 0)) for s in SLICE_GRID["Q"]]
    out += [(f"F>1 sigma={s}", hy.slice_point("R", s, p, q), (p - 2, q, 0)) for s in SLICE_GRID["R"]]
    for R in (-0.5, 0.0, 0.5):
        t = float(np.arccos(np.sqrt((1 - R) / 2)))
        out.append((f"dD_R R={R}", hy.slice_point("P", t, p, q), (p - 1, q - 1, 0)))
    return out


def test_criterion_2_levi_table(acceptance_log):
    t0 = time.perf_counter()
    bad, checked, seed = [], 0, 200
    for p, q in PQ_TABLE:
        for label, base, expect in _levi_cases(p, q):
            for pt in _translates(base, seed, 10):
                sig = hy.signature(hy.levi_form(pt), 1e-8).as_tuple()
                checked += 1
                if sig != expect:
                    bad.append((p, q, label, sig, expect))
            seed += 1
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    _record(acceptance_log, 2, ok, f"{checked} points, {len(bad)} signature mismatches", elapsed, 30)
    assert not bad, bad[:5]
    assert elapsed < 30


def test_criterion_3_regularity(acceptance_log):
    t0 = time.perf_counter()
    models = [(3, 2, None), (2, 2, None), RANK_TWO]
    disagree, decided, nil_bad, nil_n = 0, 0, 0, 0
    for m, args in enumerate(models):
        pair = sp.build_so_pair(*args)
        for i in range(1000):
            X = sp.random_element(pair, sample_rng(300 + m, i), "q", 4.0)
            v = dt.dphi_regular(pair, X)
            if not v.indeterminate:
                decided += 1
                disagree += v.dphi_regular_spectral != v.dphi_regular_cosine
        if dt.nilpotent_triples(pair):
            for i in range(200):
                v = dt.dphi_regular(pair, dt.random_nilpotent(pair, sample_rng(300 + m, i, 1)))
                nil_n += 1
                nil_bad += not (v.dphi_regular_spectral is True and v.dphi_regular_cosine is True)
    # Rank-one models admit no commuting boost/nilpotent pair in q.
    mixed = sp.build_so_pair(3, 2, (-1, 1, 1, 1, -1))
    jm_bad, jm_split, cos_open = 0, 0, 0
    for i in range(200):
        X, S, _ = dt.random_jordan_mixed(mixed, sample_rng(310, i, 2))
        S_est, _ = dt.jordan_in_q(mixed, X)
        jm_split = max(jm_split, np.linalg.norm(S_est - S) / (1 + np.linalg.norm(X)))
        a, b = dt.dphi_regular(mixed, X), dt.dphi_regular(mixed, S_est)
        jm_bad += not dt.same_verdict(a, b)
        cos_open += a.dphi_regular_cosine is None
    elapsed = time.perf_counter() - t0
    ok = disagree == 0 and nil_bad == 0 and nil_n > 0 and jm_bad == 0 and elapsed < 60
    _record(acceptance_log, 3, ok,
             f"route disagreements {disagree}/{decided} decided; nilpotent failures {nil_bad}/{nil_n}; "
             f"Jordan-mixed mismatches {jm_bad}/200 (cosine route open on {cos_open}, "
             f"max X_s error {jm_split:.1e})", elapsed, 60)
    assert disagree == 0
    assert nil_n > 0 and nil_bad == 0
    assert jm_bad == 0
    assert elapsed < 60


def test_criterion_4_injectivity(acceptance_log):
    t0 = time.perf_counter()
    runs = [((2, 2, None), "omega"), ((3, 2, None), "omega"), (RANK_TWO, "omega_prime")]
    parts, ok = [], True
    for args, domain in runs:
        pair = sp.build_so_pair(*args)
        rep = inj.injectivity_trial(pair, domain, 10_000, seed=7, n_equivalent=100, n_lattice=100)
        ok &= (rep.nonequivalent_collisions == 0 and rep.constructed_equivalent == 100
               and rep.constructed_equivalent_passed == 100)
        parts.append(f"{pair.family_tag}/{domain}: nonequiv={rep.nonequivalent_collisions}, "
                     f"equiv certs {rep.constructed_equivalent_passed}/100")
    elapsed = time.perf_counter() - t0
    _record(acceptance_log, 4, ok and elapsed < 120, "; ".join(parts), elapsed, 120)
    assert ok
    assert elapsed < 120


def _witness_checks(pair):
    w = dt.higher_rank_collision_witness(pair)
    d = w.to_dict()
    return {
        "exp": d["exp_difference"] < 1e-10,
        "omega": d["in_omega_X"] and d["in_omega_X_gamma"],
        "energy": d["energy_gap"] > 1e-6,
        "not_omega_prime": d["in_omega_prime_X_gamma"] is False,
    }, d


@pytest.mark.xfail(raises=WitnessError, strict=True,
                   reason="so(2,2) with tau=(-1,1,-1,1) has a noncompact maximally split Cartan "
                          "subspace; no witness exists (see README, known deviation)")
def test_criterion_5_witness_rank_two_model(acceptance_log):
    t0 = time.perf_counter()
    pair = sp.build_so_pair(*RANK_TWO)
    sub = sp.build_so_pair(*RANK_TWO_SUBSTITUTE)
    sub_checks, sub_d = _witness_checks(sub)
    sub_ok = all(sub_checks.values())
    try:
        checks, _ = _witness_checks(pair)
    except WitnessError as exc:
        elapsed = time.perf_counter() - t0
        _record(acceptance_log, 5, False,
                f"{pair.family_tag}: no witness ({exc}); substitute {sub.family_tag}: "
                f"{'all four checks pass' if sub_ok else sub_checks} "
                f"(|exp diff| {sub_d['exp_difference']:.1e}, energy gap {sub_d['energy_gap']:.1f})",
                elapsed, 5)
        raise
    elapsed = time.perf_counter() - t0
    _record(acceptance_log, 5, all(checks.values()) and elapsed < 5, str(checks), elapsed, 5)
    assert all(checks.values())


def test_criterion_5_substitute_model():
    t0 = time.perf_counter()
    checks, _ = _witness_checks(sp.build_so_pair(*RANK_TWO_SUBSTITUTE))
    assert all(checks.values()), checks
    assert time.perf_counter() - t0 < 5


def test_criterion_6_lattice_lemmas(acceptance_log):
    t0 = time.perf_counter()
    l51 = []
    for kind, ns in (("A", range(1, 6)), ("D", range(3, 6))):
        for n in ns:
            for inv in ("identity", "diagram"):
                if kind == "A" and n == 1 and inv == "diagram":
                    continue
                r = rl.verify_lemma_5_1(kind, n, inv)
                l51.append((f"{kind}{n}/{inv}", r["verdict"], r["conclusions_hold"]))
    ok51 = all(c for _, _, c in l51) and all(v != "fail" for _, v, _ in l51)
    violated = [name for name, v, _ in l51 if v == "hypothesis_violated"]
    ok52 = all(rl.verify_lemma_5_2(n, i) == (i < n) for n in range(2, 6) for i in range(1, n + 1))
    l53 = [rl.verify_lemma_5_3(sp.build_so_pair(p, q)) for p, q in ((2, 2), (3, 2), (2, 3), (4, 3), (3, 3))]
    ok53 = all(r["verdict"] == "pass" and r["reduced"] for r in l53)
    elapsed = time.perf_counter() - t0
    ok = ok51 and ok52 and ok53 and elapsed < 10
    _record(acceptance_log, 6, ok,
            f"shortest generators {ok51} over {len(l51)} cases (hypothesis violated, conclusions "
            f"hold: {', '.join(violated)}); B_n long-root iff {ok52}; root values on a {ok53}", elapsed, 10)
    assert ok51 and ok52 and ok53
    assert elapsed < 10


def test_criterion_7_pseudo_kahler(acceptance_log):
    t0 = time.perf_counter()
    sig_bad, fd_worst, ma_sqrt, ma_e, count, seed = 0, 0.0, 0.0, np.inf, 0, 700
    for p, q in ((3, 3), (4, 3)):
        for region, grid in (("Q", SLICE_GRID["Q"]), ("P", SLICE_GRID["P"])):
            for x in grid:
                for pt in _translates(hy.slice_point(region, x, p, q), seed, 7):
                    H, B = hy.complex_hessian(pt, "E")
                    sig_bad += hy.signature(H).as_tuple() != (p, q - 1, 0)
                    Hfd = hy.finite_difference_hessian(pt, "E", 1e-4, B)
                    fd_worst = max(fd_worst, np.linalg.norm(H - Hfd) / np.linalg.norm(H))
                    ma_sqrt = max(ma_sqrt, hy.monge_ampere_residual(pt, "sqrt"))
                    ma_e = min(ma_e, hy.monge_ampere_residual(pt, "E"))
                    count += 1
                seed += 1
    elapsed = time.perf_counter() - t0
    ok = sig_bad == 0 and fd_worst < 1e-4 and ma_sqrt < 1e-6 and ma_e > 1e-2 and elapsed < 60
    _record(acceptance_log, 7, ok,
            f"{count} points (21 per region per model): signature mismatches {sig_bad}, "
            f"FD rel err {fd_worst:.1e}, MA sqrt|E| max {ma_sqrt:.1e}, MA E min {ma_e:.2f}", elapsed, 60)
    assert sig_bad == 0
    assert fd_worst < 1e-4
    assert ma_sqrt < 1e-6 and ma_e > 1e-2
    assert elapsed < 60


DETERMINISM_ARGS = {
    "omega-check": ["--samples", "30"],
    "regularity": ["--samples", "30", "--nilpotent", "10", "--jordan", "10"],
    "orbit-classify": ["--samples", "3"],
    "f-table": ["--samples", "3"],
    "levi-table": ["--samples", "2"],
    "kahler-signature": ["--samples", "2"],
    "ma-residual": ["--samples", "2"],
    "injectivity": ["--samples", "50", "--equivalent", "10", "--lattice", "10"],
    "lattice-verify": ["--type", "D", "--n", "4"],
    "rank1-catalog": [],
    "collision-witness": [],
}


def _run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def test_criterion_8_determinism(acceptance_log, monkeypatch):
    t0 = time.perf_counter()
    differing = []
    for sub, extra in sorted(DETERMINISM_ARGS.items()):
        for fmt in ("json", "csv"):
            argv = [sub, *extra, "--seed", "12345", "--format", fmt]
            monkeypatch.delenv("SSX_THREADS", raising=False)
            first = _run(argv)
            monkeypatch.setenv("SSX_THREADS", "4")
            second = _run(argv)
            if first != second:
                differing.append(f"{sub}/{fmt}")
    elapsed = time.perf_counter() - t0
    ok = not differing
    _record(acceptance_log, 8, ok,
            f"{len(DETERMINISM_ARGS)} subcommands x 2 formats byte-identical across runs "
            f"(1 vs 4 workers); differing: {differing or 'none'}", elapsed)
    assert not differing
