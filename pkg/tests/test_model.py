import random

import pytest
from hypothesis import given, settings, strategies as st

from dgmodel import IdentityInstance
from dgmodel.adjoin import adjoin
from dgmodel.dgcore import PreconditionViolated, cone, identity, is_acyclic
from dgmodel.exactlin import Matrix, Q
from dgmodel.graded import DgModule, GradedModule, HomogeneousMap, direct_sum, unit_module
from dgmodel.model import (
    NoFillerAvailable,
    StagesExhausted,
    classify,
    elementary_witness,
    factor_cof_trivfib,
    factor_trivcof_fib,
    lift_standard_cof_vs_trivfib,
    lift_standard_trivcof_vs_fib,
    retract_presentation,
    standard_trivial_cofibration,
)
from dgmodel.workbench.suites import (
    trial_mc4_cof,
    trial_mc4_tcof,
    trial_mc5i,
    trial_mc5ii,
    trial_retract,
    trial_three_for_two,
)

inst = IdentityInstance()


def Q0(label):
    return DgModule.trivial(unit_module(Q, 0, label))


def zero():
    return DgModule.trivial(GradedModule.zero(Q))


def zero_to_unit():
    return HomogeneousMap.zero(zero(), Q0("y"))


def K_plus(X):
    """``X ⊕ Cone(1)`` with the projection onto X."""
    Kc = cone(identity(Q0("k"))).module
    ds = direct_sum(Kc, X)
    U = DgModule.on(ds.module, ds.block_blocks([[Kc.d, None], [None, X.d]], 1, ds))
    ds.module = U
    return U, ds.proj(1).with_ends(U, X), ds.inj(1).with_ends(X, U)


def test_classify_examples():
    X = Q0("x")
    rep = classify(inst, identity(X))
    assert rep.in_W and rep.in_Rf
    U, pr, inj = K_plus(X)
    rep = classify(inst, inj)
    assert rep.in_W and not rep.in_Rf
    rep = classify(inst, zero_to_unit())
    assert not rep.in_W and not rep.in_Rf
    assert rep.as_dict()["surjectivity"]["*"]["0"] == [0, 1]


def test_factor_zero_to_unit():
    cert = factor_trivcof_fib(inst, zero_to_unit())
    assert cert.Z.ranks == {0: 1, 1: 1}
    assert cert.Z.d.block(0) == Matrix.identity(Q, 1)
    assert is_acyclic(cert.Z)
    assert cert.ok
    assert len(cert.package.witness.steps) == 2


def test_factor_identity_and_fibration():
    X = DgModule(Q, {0: ["a"], 1: ["b"]}, None, {0: Matrix.from_rows(Q, [[2]])})
    cert = factor_trivcof_fib(inst, identity(X))
    assert cert.ok and cert.jbar @ cert.p == identity(X)
    U, pr, _ = K_plus(Q0("x"))
    cert = factor_trivcof_fib(inst, pr)
    assert cert.ok and cert.Z.dim > U.dim


def test_mc5i_early_stop_after_one_stage():
    cert = factor_cof_trivfib(inst, zero_to_unit(), max_stages=3)
    assert cert.early_stop and len(cert.stages) == 1
    assert cert.stages[0].N_ranks == {1: 1}
    assert cert.final_report.in_W_Rf and cert.ok


def test_mc5i_identity_stops_immediately():
    X = Q0("x")
    cert = factor_cof_trivfib(inst, identity(X), max_stages=3)
    assert cert.early_stop and not cert.stages
    # forcing stages past the early stop adds fresh homology at every finite stage
    with pytest.raises(StagesExhausted) as e:
        factor_cof_trivfib(inst, identity(X), max_stages=3, min_stages=2)
    cert = e.value.certificate
    assert len(cert.stages) == 3
    assert all(s.connecting_zero and s.q_surjective and s.composite_ok for s in cert.stages)


def test_mc5i_kills_a_cycle():
    f = HomogeneousMap.zero(Q0("x"), zero())
    try:
        cert = factor_cof_trivfib(inst, f, max_stages=4)
    except StagesExhausted as e:
        cert = e.certificate
    assert cert.stages and all(s.connecting_zero and s.composite_ok for s in cert.stages)
    assert cert.surjective_from_stage_2()


def test_trivcof_filler_examples():
    X = Q0("x")
    pkg = standard_trivial_cofibration(inst, X, DgModule.trivial(GradedModule(Q, {0: ["n"]})))
    D = pkg.res.D
    b = identity(D)
    c = lift_standard_trivcof_vs_fib(inst, pkg, identity(D), pkg.jbar, b)
    assert c == b
    # X = 0 and M[1] a copy of Cone(1): D is Q -> Q in degrees 0, 1
    pkg0 = standard_trivial_cofibration(inst, zero(), DgModule.trivial(GradedModule(Q, {0: ["n"]})))
    assert pkg0.res.D.ranks == {0: 1, 1: 1}
    Y = Q0("y")
    U, pr, _ = K_plus(Y)
    b = HomogeneousMap(pkg0.res.D, Y, 0, {0: Matrix.from_rows(Q, [[1]])})
    c = lift_standard_trivcof_vs_fib(inst, pkg0, pr, HomogeneousMap.zero(zero(), U), b)
    assert c @ pr == b and pkg0.jbar @ c == HomogeneousMap.zero(zero(), U)


def test_trivcof_filler_rejects_bad_squares():
    X = Q0("x")
    pkg = standard_trivial_cofibration(inst, X, DgModule.trivial(GradedModule(Q, {0: ["n"]})))
    D = pkg.res.D
    with pytest.raises(PreconditionViolated):
        lift_standard_trivcof_vs_fib(inst, pkg, identity(D), pkg.jbar.scale(Q(2)), identity(D))
    g = HomogeneousMap.zero(D, Q0("y"))
    with pytest.raises(PreconditionViolated):
        lift_standard_trivcof_vs_fib(inst, pkg, g, HomogeneousMap.zero(X, D), HomogeneousMap.zero(D, Q0("y")))


def test_cof_filler_single_cell():
    X = Q0("v")
    U, pr, _ = K_plus(X)
    # one cell: M = Q in degree 1, so D = Q in degree 0
    M = DgModule.trivial(GradedModule(Q, {1: ["m"]}))
    res = adjoin(inst, zero(), M, HomogeneousMap.zero(M, zero()))
    w_ = elementary_witness(res)
    v = HomogeneousMap(res.D, X, 0, {0: Matrix.identity(Q, 1)})
    u = HomogeneousMap.zero(zero(), U)
    w = lift_standard_cof_vs_trivfib(inst, w_, pr, u, v)
    assert w @ pr == v and res.jbar @ w == u
    w = lift_standard_cof_vs_trivfib(inst, w_, identity(X), HomogeneousMap.zero(zero(), X), v)
    assert w == v


def test_retract_examples():
    X = Q0("x")
    pres = retract_presentation(inst, identity(X))
    assert pres.source == "inverse" and pres.check(inst, identity(X))
    U, pr, inj = K_plus(X)
    with pytest.raises(NoFillerAvailable):
        retract_presentation(inst, inj)
    pkg = standard_trivial_cofibration(inst, X, DgModule.trivial(GradedModule(Q, {0: ["n"]})))
    pres = retract_presentation(inst, pkg.jbar, witness=pkg.witness)
    assert pres.check(inst, pkg.jbar)
    with pytest.raises(PreconditionViolated):
        retract_presentation(inst, zero_to_unit())


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_mc5ii_property(seed):
    trial_mc5ii(random.Random(seed), Q, "identity")


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_mc5i_property(seed):
    trial_mc5i(random.Random(seed), Q, "identity")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([trial_mc4_tcof, trial_mc4_cof, trial_retract, trial_three_for_two]))
def test_filler_retract_and_two_of_three_properties(seed, trial):
    trial(random.Random(seed), Q, "identity")
