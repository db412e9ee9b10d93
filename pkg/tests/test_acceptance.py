"""Acceptance suite: one test per criterion, exact tolerances, timed where
the criterion states a budget.  Criterion 7 is long-running and excluded
from the default run; enable it with SYZCURVES_EXTENDED=1 (the CLI
equivalent is `syzcurves verify --extended`)."""

import json
import os
import random
import subprocess
import sys
import time

import pytest
from scipy.sparse import coo_matrix

from oracle import oracle_betti
from syzcurves.curves import (build_curve, multiply_raw, rational_curve,
                              riemann_roch_selfcheck, section_basis)
from syzcurves.koszul import KoszulContext, betti_table, build_differential
from syzcurves.linalg import Certification, RankPolicy, rank_mod_p, sample_primes
from syzcurves.theorems import (Status, difference_value, vandermonde_check,
                                verify_context, verify_table)

SEED = 7
POLICY = RankPolicy(prime_count=3, seed=SEED)

HYP_G2 = [1, 1, 0, 0, 0, 1]                      # y^2 = x^5 + x + 1
HYP_G3 = [1, 1, 0, 0, 0, 0, 0, 1]                # y^2 = x^7 + x + 1
HYP_G4 = [1, 1, 0, 0, 0, 0, 0, 0, 0, 1]          # y^2 = x^9 + x + 1
TRIG_G4 = [1, 2, 0, 0, 0, 1]                     # y^3 = x^5 + 2x + 1
EXT_G9 = [1, 1, 0, 0, 0, 0, 0, 1]                # y^4 = x^7 + x + 1


def corpus_models():
    out = [("rational", rational_curve(), d) for d in (3, 4, 5, 6)]
    out += [("hyp-g2", build_curve(2, HYP_G2), d) for d in (5, 6, 7)]
    out += [("hyp-g3", build_curve(2, HYP_G3), d) for d in (7, 8)]
    out += [("hyp-g4", build_curve(2, HYP_G4), 9)]
    out += [("trig-g4", build_curve(3, TRIG_G4), d) for d in (9, 10)]
    return out


@pytest.fixture(scope="module")
def corpus():
    """Full Betti tables for the whole corpus under the 3-prime policy."""
    start = time.monotonic()
    tables = {}
    for label, curve, d in corpus_models():
        ctx = KoszulContext(curve, d)
        tables[(label, d)] = (ctx, betti_table(ctx, None, None, POLICY))
    elapsed = time.monotonic() - start
    return tables, elapsed


def test_criterion_1_vanishing_rows(corpus):
    tables, elapsed = corpus
    for (label, d), (ctx, tab) in tables.items():
        r = ctx.bundle.r
        assert tab.dim(0, 0) == 1, (label, d)
        for p in range(1, r + 1):
            assert tab.dim(p, 0) == 0, (label, d, p)
        for p in range(r + 1):
            assert tab.dim(p, 3) == 0, (label, d, p)
    assert elapsed < 60, f"corpus tables took {elapsed:.1f}s"
    print(f"PASS criterion 1: q=0 and q=3 rows exact on "
          f"{len(tables)} corpus tables in {elapsed:.1f}s")


def test_criterion_2_strand_difference_identity(corpus):
    tables, _ = corpus
    for (label, d), (ctx, tab) in tables.items():
        g = ctx.curve.genus
        for p in range(ctx.bundle.r):
            got = tab.dim(p, 2) - tab.dim(p + 1, 1)
            assert got == difference_value(g, d, p), (label, d, p)
    cubic = tables[("rational", 3)][1]
    assert difference_value(0, 3, 0) == -3 == cubic.dim(0, 2) - cubic.dim(1, 1)
    assert difference_value(0, 3, 1) == -2 == cubic.dim(1, 2) - cubic.dim(2, 1)
    print("PASS criterion 2: strand difference identity exact on all tables")


def test_criterion_3_quadratic_strand_end_and_width(corpus):
    tables, _ = corpus
    genera = set()
    for (label, d), (ctx, tab) in tables.items():
        g, r = ctx.curve.genus, ctx.bundle.r
        genera.add(g)
        assert tab.dim(r - 1, 2) == g, (label, d)
        for q in range(4):
            assert tab.dim(r, q) == 0 or (r, q) == (0, 0), (label, d, q)
    assert genera == {0, 2, 3, 4}
    print("PASS criterion 3: dim K(r-1,2) = g and K(p>=r, q) = 0 on corpus")


def test_criterion_4_linear_strand_end(corpus):
    tables, _ = corpus
    for (label, d), (ctx, tab) in tables.items():
        if ctx.curve.genus >= 1:
            assert tab.dim(ctx.bundle.r - 1, 1) == 0, (label, d)
    cubic = tables[("rational", 3)][1]
    assert cubic.dim(2, 1) == 2   # sharpness of the non-rational hypothesis
    print("PASS criterion 4: K(r-1,1) = 0 for g >= 1; = 2 for the cubic")


def test_criterion_5_low_quadratic_strand(corpus):
    tables, _ = corpus
    ks = set()
    for (label, d), (ctx, tab) in tables.items():
        g, r = ctx.curve.genus, ctx.bundle.r
        k = d - 2 * g - 1
        if g >= 1:
            ks.add(k)
        for p in range(0, min(k, r) + 1):
            assert tab.dim(p, 2) == 0, (label, d, p)
    assert {0, 1, 2} <= ks
    print(f"PASS criterion 5: K(p<=k, 2) = 0 with corpus k values {sorted(ks)}")


def test_criterion_6_dichotomy_with_certification():
    start = time.monotonic()
    trig = build_curve(3, TRIG_G4)

    ctx10 = KoszulContext(trig, 10)
    rep10 = verify_context(ctx10, POLICY, p_range=[4], q_range=[1])
    p37 = next(e for e in rep10.entries if e.expectation.source == "P3.7")
    assert p37.status is Status.PASS and p37.computed == 0

    def certify_nonzero(curve, d, p):
        ctx = KoszulContext(curve, d)
        out = build_differential(ctx, p, 1)
        inc = build_differential(ctx, p + 1, 0)
        middle = ctx.middle_dim(p, 1)
        for pm in sample_primes(3, SEED, curve.bad_prime_factor):
            dim_p = middle - rank_mod_p(out, pm) - rank_mod_p(inc, pm)
            assert dim_p != 0, (d, p, pm.p)
        rep = verify_context(ctx, POLICY, p_range=[p], q_range=[1])
        gl = next(e for e in rep.entries
                  if e.expectation.source == "GL-converse")
        assert gl.status is Status.PASS and gl.computed != 0
        assert any("exact rational" in h for h in gl.expectation.hypotheses)
        exact = ctx.rank_of_differential(p, 1, POLICY.exact_variant())
        assert exact.certified is Certification.EXACT_RATIONAL

    certify_nonzero(trig, 9, 3)                       # L = K(g13)
    certify_nonzero(build_curve(2, HYP_G4), 9, 3)     # hyperelliptic
    elapsed = time.monotonic() - start
    assert elapsed < 120, f"dichotomy runs took {elapsed:.1f}s"
    print(f"PASS criterion 6: dichotomy certified in {elapsed:.1f}s")


@pytest.mark.skipif(os.environ.get("SYZCURVES_EXTENDED") != "1",
                    reason="long-running; set SYZCURVES_EXTENDED=1 "
                           "(CLI: syzcurves verify --extended)")
def test_criterion_7_extended_gonality_four():
    curve = build_curve(4, EXT_G9)
    assert curve.genus == 9
    ctx = KoszulContext(curve, 21)
    assert ctx.bundle.r == 12
    mat = build_differential(ctx, 9, 1)
    assert mat.shape == (43758, 9295)
    report = verify_context(ctx, POLICY, p_range=[9], q_range=[1],
                            escalate=False)
    p38 = next(e for e in report.entries if e.expectation.source == "P3.8")
    assert p38.status is Status.PASS and p38.computed == 0
    print("PASS criterion 7: K(9,1) = 0 for the gonality-4 genus-9 model at d=21")


def test_criterion_8_oracle_equivalence(corpus):
    tables, _ = corpus
    cases = [("rational", 3, 1, 1, []), ("rational", 4, 1, 1, []),
             ("hyp-g2", 5, 2, 5, HYP_G2)]
    for label, d, a, b, f in cases:
        ctx, tab = tables[(label, d)]
        expected = oracle_betti(a, b, f, d)
        for (p, q), dim in expected.items():
            assert tab.dim(p, q) == dim, (label, d, p, q)
    print("PASS criterion 8: tables equal the dense rational oracle")


def test_criterion_9_structural_properties(corpus):
    tables, _ = corpus

    def to_scipy(m):
        rows = [e[0] for e in m.entries]
        cols = [e[1] for e in m.entries]
        vals = [e[2] for e in m.entries]
        return coo_matrix((vals, (rows, cols)), shape=m.shape,
                          dtype="int64").tocsr()

    for (label, d), (ctx, tab) in tables.items():
        n = ctx.bundle.r + 1
        for q in range(3):
            for p in range(1, n + 1):
                prod = to_scipy(build_differential(ctx, p - 1, q + 1)) @ \
                    to_scipy(build_differential(ctx, p, q))
                assert prod.nnz == 0, (label, d, p, q)

    for label, curve, d in corpus_models():
        assert riemann_roch_selfcheck(curve, 4 * d).ok, (label, d)

    rng = random.Random(SEED)
    seen_curves = set()
    for label, curve, _ in corpus_models():
        if curve in seen_curves:
            continue
        seen_curves.add(curve)
        basis = section_basis(curve, 4 * curve.genus + 8)

        def mul(pol1, pol2):
            out = {}
            for m1, c1 in pol1.items():
                for m2, c2 in pol2.items():
                    for mono, cv in multiply_raw(curve, m1, m2):
                        out[mono] = out.get(mono, 0) + c1 * c2 * cv
            return {k: v for k, v in out.items() if v}

        for _ in range(1000):
            s, t, u = (rng.choice(basis.monomials) for _ in range(3))
            left = mul(mul({s: 1}, {t: 1}), {u: 1})
            right = mul({s: 1}, mul({t: 1}, {u: 1}))
            assert left == right, (label, s, t, u)

    assert vandermonde_check(4, 64)
    print("PASS criterion 9: d.d = 0, Riemann-Roch, associativity, binomials")


def test_criterion_10_deterministic_reports(corpus):
    spec = json.dumps({"model": "superelliptic", "a": 2, "f": HYP_G2})
    base = [sys.executable, "-m", "syzcurves.cli", "verify", "--curve", spec,
            "--d", "5", "--seed", str(SEED), "--format", "json"]
    runs = [subprocess.run(base + ["--jobs", str(j)], capture_output=True)
            for j in (1, 8, 1)]
    assert all(r.returncode == 0 for r in runs)
    assert runs[0].stdout == runs[1].stdout == runs[2].stdout
    assert runs[0].stdout.strip()
    print("PASS criterion 10: byte-identical verify JSON for jobs 1 vs 8")


def test_corpus_verification_has_no_failures(corpus):
    tables, _ = corpus
    for (label, d), (ctx, tab) in tables.items():
        report = verify_table(tab)
        assert report.passed, (label, d, [e.to_json_dict()
                                          for e in report.failures])
        assert all(e.status in (Status.PASS, Status.SKIPPED,
                                Status.INCONCLUSIVE)
                   for e in report.entries)
