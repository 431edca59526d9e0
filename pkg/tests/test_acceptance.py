"""The twelve acceptance criteria, each at its stated scale and time budget.

Each test prints one ``PASS``/``FAIL`` line with its timing.
"""

import itertools
import time

import pytest

from dgmodel import IdentityInstance, dgcore, graded
from dgmodel import adjoin as adj
from dgmodel.exactlin import Matrix, PrimeField
from dgmodel.graded import DgModule, HomogeneousMap
from dgmodel.workbench.suites import run_suite

pytestmark = pytest.mark.acceptance

SEED = 2024


@pytest.fixture
def report(capsys):
    """Yields a recorder; prints the criterion's verdict line on exit."""
    lines = []

    def record(number, name, ok, seconds, budget, detail=""):
        verdict = "PASS" if ok and seconds < budget else "FAIL"
        lines.append(f"[{verdict}] criterion {number:>2} {name}: {seconds:.1f}s "
                     f"(budget {budget}s){' ' + detail if detail else ''}")

    yield record
    with capsys.disabled():
        for line in lines:
            print("\n" + line, end="")


def suites(*plan):
    """Run ``(suite, trials, field, instance)`` entries; returns (ok, seconds, details)."""
    start = time.perf_counter()
    results = [run_suite(s, n, SEED, f, i) for s, n, f, i in plan]
    seconds = time.perf_counter() - start
    bad = [fl for r in results for fl in r.failures]
    detail = ", ".join(f"{r.suite}/{r.field}/{r.instance} {r.passed}/{r.trials}" for r in results)
    return not bad and all(r.trials == n for r, (_, n, _, _) in zip(results, plan)), seconds, detail, bad


def check(report, number, name, budget, *plan):
    ok, seconds, detail, bad = suites(*plan)
    report(number, name, ok, seconds, budget, detail)
    assert not bad, bad[:3]
    assert ok
    assert seconds < budget


def test_01_sign_calculus(report):
    check(report, 1, "sign calculus", 10, ("signs", 1000, "Q", "identity"))


def test_02_cone_and_homology(report):
    check(report, 2, "cone/homology", 10, ("cone", 200, "Q", "identity"))


def test_03_lifting_lemma(report):
    check(report, 3, "lifting lemma", 30,
          ("lifting", 250, "Q", "identity"), ("lifting", 250, "F5", "identity"))


# --- criterion 4: exhaustive representability over F2 -----------------------

F2 = PrimeField(2)
DEGS = (0, 1)


def f2_matrices(n, m):
    for bits in itertools.product((0, 1), repeat=n * m):
        yield Matrix(F2, n, m, [[F2(bits[i * m + j]) for j in range(m)] for i in range(n)])


def dg_modules(total, degrees, prefix):
    """Every dg-module over F2 with the given degrees and total dimension ``total``."""
    for ranks in itertools.product(range(total + 1), repeat=len(degrees)):
        if sum(ranks) != total:
            continue
        basis = {z: [f"{prefix}{z}_{i}" for i in range(r)] for z, r in zip(degrees, ranks) if r}
        pairs = [(z, ranks[k], ranks[k + 1]) for k, z in enumerate(degrees[:-1])
                 if ranks[k] and ranks[k + 1]]
        for mats in itertools.product(*(list(f2_matrices(n, m)) for _, n, m in pairs)):
            d = {z: mat for (z, _, _), mat in zip(pairs, mats)}
            try:
                yield DgModule(F2, basis, None, d)
            except ValueError:
                continue


def homogeneous_maps(S, T, degree):
    zs = [z for z in S.degrees() if T.rank(z + degree)]
    choices = [list(f2_matrices(S.rank(z), T.rank(z + degree))) for z in zs]
    for mats in itertools.product(*choices):
        yield HomogeneousMap(S, T, degree, dict(zip(zs, mats)))


def chain_maps(S, T):
    return [f for f in homogeneous_maps(S, T, 0) if dgcore.is_chain_map(f)]


def exhaustive_f2_bijection():
    """For every A, M on degrees {0, 1} with dim A + dim M <= 3, every α and
    every B on degrees {-1, 0, 1} of dimension <= 3: ψ maps Hom(D, B)
    bijectively onto the member pairs, and ψ^{-1} inverts it."""
    inst = IdentityInstance()
    targets = [B for n in range(4) for B in dg_modules(n, (-1, 0, 1), "b")]
    cases = 0
    for na in range(4):
        for nm in range(4 - na):
            for A in dg_modules(na, DEGS, "a"):
                for M in dg_modules(nm, DEGS, "m"):
                    for alpha in chain_maps(M, A):
                        res = adj.adjoin(inst, A, M, alpha)
                        for B in targets:
                            ks = chain_maps(res.D, B)
                            pairs = [adj.HPair(f, t) for f in chain_maps(A, B)
                                     for t in homogeneous_maps(M, B, -1)
                                     if adj.is_member(inst, alpha, adj.HPair(f, t))]
                            images = [adj.psi(res, k) for k in ks]
                            keys = {(p.f, p.t) for p in images}
                            if len(keys) != len(ks) or keys != {(p.f, p.t) for p in pairs}:
                                return False, cases
                            for p in pairs:
                                if not adj.pairs_equal(inst, adj.psi(res, adj.psi_inverse(res, p)), p):
                                    return False, cases
                            cases += 1
    return True, cases


def test_04_representability(report):
    start = time.perf_counter()
    ok_random, _, detail, bad = suites(("representability", 200, "Q", "identity"))
    ok_exhaustive, cases = exhaustive_f2_bijection()
    log_ok = adj.ADJOIN_LOG["built"] == adj.ADJOIN_LOG["verified"] > 0
    seconds = time.perf_counter() - start
    ok = ok_random and ok_exhaustive and log_ok
    report(4, "representability", ok, seconds, 60,
           f"{detail}, exhaustive F2 cases {cases}, adjoins verified "
           f"{adj.ADJOIN_LOG['verified']}/{adj.ADJOIN_LOG['built']}")
    assert not bad, bad[:3]
    assert ok_exhaustive and log_ok and ok_random
    assert seconds < 60


def test_05_named_special_cases(report):
    check(report, 5, "named special cases", 30,
          ("named", 20, "Q", "identity"), ("named", 20, "Q", "tensor"))


def test_06_mc5_ii(report):
    check(report, 6, "MC5(ii)", 60, ("mc5ii", 200, "Q", "identity"))


def test_07_mc5_i(report):
    check(report, 7, "MC5(i)", 120, ("mc5i", 200, "Q", "identity"))


def test_08_mc4_fillers(report):
    check(report, 8, "MC4 fillers", 60,
          ("mc4_tcof", 200, "Q", "identity"), ("mc4_cof", 200, "Q", "identity"))


def test_09_retracts(report):
    check(report, 9, "retract argument", 30, ("retract", 100, "Q", "identity"))


def test_10_theorem_hypothesis(report):
    check(report, 10, "theorem hypothesis", 60,
          ("hypothesis", 50, "Q", "identity"), ("hypothesis", 20, "Q", "tensor"))


def test_11_three_for_two(report):
    check(report, 11, "three-for-two", 30, ("three_for_two", 300, "Q", "identity"))


# --- criterion 12: each shipped sign mutation is caught ---------------------

MUTATIONS = {
    "shift_map sign dropped": (graded, "shift_sign", lambda r, a: 1),
    "Koszul symmetry sign dropped": (graded, "symmetry_sign", lambda m, l: 1),
    "cone offdiagonal sign flipped": (dgcore, "cone_signs", lambda: (1, -1)),
    "cone d_M[1] sign flipped": (dgcore, "cone_signs", lambda: (-1, 1)),
}

WATCHERS = (("signs", 50), ("cone", 50), ("representability", 50))


@pytest.mark.parametrize("name", list(MUTATIONS))
def test_12_mutation_sensitivity(report, monkeypatch, name):
    module, attr, fake = MUTATIONS[name]
    start = time.perf_counter()
    monkeypatch.setattr(module, attr, fake)
    caught = []
    for suite, n in WATCHERS:
        r = run_suite(suite, n, SEED, "Q", "identity", fail_fast=True)
        if r.failures:
            caught.append(suite)
    seconds = time.perf_counter() - start
    report(12, f"mutation '{name}'", bool(caught), seconds, 60, f"caught by {caught or 'nothing'}")
    assert caught
