import random

import pytest
from hypothesis import given, settings, strategies as st

from dgmodel import IdentityInstance
from dgmodel import adjoin as adj
from dgmodel.dgcore import cone, identity, is_acyclic, is_chain_map, is_iso
from dgmodel.exactlin import Matrix, Q
from dgmodel.graded import DgModule, GradedModule, HomogeneousMap, unit_module
from dgmodel.workbench.generate import random_chain_map, random_homogeneous
from dgmodel.workbench.suites import _dg, trial_named, trial_representability

inst = IdentityInstance()


def Q0(label):
    return DgModule.trivial(unit_module(Q, 0, label))


def zero():
    return DgModule.trivial(GradedModule.zero(Q))


def test_adjoin_identity_gives_the_cone():
    A, M = Q0("a"), Q0("m")
    res = adj.adjoin(inst, A, M, HomogeneousMap(M, A, 0, {0: Matrix.identity(Q, 1)}))
    assert res.D.ranks == {-1: 1, 0: 1}
    assert is_acyclic(res.D)
    assert res.jbar.block(0) == Matrix.identity(Q, 1)
    assert res.theta.block(0) == Matrix.identity(Q, 1)


def test_adjoin_zero_is_a_coproduct():
    rng = random.Random(5)
    A, M = _dg(Q, rng, "a"), _dg(Q, rng, "m")
    res = adj.adjoin(inst, A, M, HomogeneousMap.zero(M, A))
    assert res.D.dim == A.dim + M.dim
    trial_named(random.Random(5), Q, "identity")


def test_psi_of_identity_is_the_universal_pair():
    rng = random.Random(7)
    A, M = _dg(Q, rng, "a"), _dg(Q, rng, "m")
    res = adj.adjoin(inst, A, M, random_chain_map(M, A, rng))
    pair = adj.psi(res, res.identity())
    assert pair.f == res.jbar and pair.t == res.theta
    assert adj.psi_inverse(res, pair) == res.identity()


def test_psi_inverse_rejects_non_members():
    A, M = Q0("a"), Q0("m")
    res = adj.adjoin(inst, A, M, HomogeneousMap(M, A, 0, {0: Matrix.identity(Q, 1)}))
    with pytest.raises(adj.MembershipViolated):
        adj.psi_inverse(res, adj.HPair(res.jbar.scale(Q(2)), res.theta))


def test_psi_inverse_for_zero_alpha_is_blockwise():
    A, M, B = Q0("a"), Q0("m"), DgModule.trivial(GradedModule(Q, {-1: ["s"], 0: ["b"]}))
    res = adj.adjoin(inst, A, M, HomogeneousMap.zero(M, A))
    f = HomogeneousMap(A, B, 0, {0: Matrix.from_rows(Q, [[3]])})
    t = HomogeneousMap(M, B, -1, {0: Matrix.from_rows(Q, [[5]])})
    k = adj.psi_inverse(res, adj.HPair(f, t))
    # D = M[1] ⊕ A: σ^{-1}t on the first summand, f on the second
    assert k.block(-1) == Matrix.from_rows(Q, [[5]])
    assert k.block(0) == Matrix.from_rows(Q, [[3]])


def test_transfer_examples():
    rng = random.Random(11)
    A, M = _dg(Q, rng, "a"), _dg(Q, rng, "m")
    alpha = random_chain_map(M, A, rng)
    res = adj.adjoin(inst, A, M, alpha)
    tr = adj.transfer_along_homotopy(res, alpha, HomogeneousMap.zero(M, A, -1))
    assert tr.k == identity(res.D)
    h = random_homogeneous(M, A, -1, rng)
    from dgmodel.dgcore import map_boundary
    alpha2 = alpha - map_boundary(h)
    there = adj.transfer_along_homotopy(res, alpha2, h)
    back = adj.transfer_along_homotopy(there.res2, alpha, -h, res2=res)
    assert there.k @ back.k == identity(res.D)


def test_transfer_from_contractible_to_zero():
    N = Q0("n")
    M = A = cone(identity(N)).module
    alpha = identity(M)
    from dgmodel.dgcore import find_homotopy
    h = find_homotopy(alpha, HomogeneousMap.zero(M, A))
    res = adj.adjoin(inst, A, M, alpha)
    tr = adj.transfer_along_homotopy(res, HomogeneousMap.zero(M, A), h)
    assert is_iso(tr.k)
    assert tr.res2.D.dim == 2 * M.dim
    with pytest.raises(adj.HomotopyInvalid):
        adj.transfer_along_homotopy(res, alpha, h)


def test_induced_map_examples():
    rng = random.Random(13)
    A, M = _dg(Q, rng, "a"), _dg(Q, rng, "m")
    alpha = random_chain_map(M, A, rng)
    res = adj.adjoin(inst, A, M, alpha)
    assert adj.induced_map(identity(M), res, res) == identity(res.D)
    Z = zero()
    res0 = adj.adjoin(inst, A, Z, HomogeneousMap.zero(Z, A))
    assert res0.D.ranks == A.ranks
    k = adj.induced_map(HomogeneousMap.zero(Z, M), res0, res)
    assert res0.jbar @ k == res.jbar


def test_cone_of_identity_bijection():
    rng = random.Random(17)
    N = _dg(Q, rng, "n")
    T = _dg(Q, rng, "t")
    cb = adj.cone_of_identity(N)
    phi = random_homogeneous(cb.shifted, T, 0, rng)
    chi = adj.extend_from_top(cb, phi)
    assert is_chain_map(chi)
    assert adj.restrict_to_top(cb, chi) == phi
    chi2 = random_chain_map(cb.module, T, rng)
    assert adj.extend_from_top(cb, adj.restrict_to_top(cb, chi2)) == chi2


def test_cycle_killer_on_zero_to_unit():
    r = HomogeneousMap.zero(zero(), Q0("y"))
    st_ = adj.cycle_killer_stage(inst, r)
    assert st_.N.ranks == {1: 1}
    assert st_.res.D.ranks == {0: 1}
    assert is_iso(st_.q) and st_.null_homotopic


def test_cycle_killer_trivial_cases():
    Z = zero()
    st_ = adj.cycle_killer_stage(inst, identity(Z))
    assert st_.N.dim == 0 and st_.res.D.dim == 0
    X = DgModule(Q, {0: ["a"], 1: ["b"]}, None, {0: Matrix.from_rows(Q, [[1]])})
    st_ = adj.cycle_killer_stage(inst, identity(X))
    assert st_.null_homotopic
    from dgmodel.dgcore import is_epi
    assert is_epi(st_.q)


def test_every_adjoin_is_verified():
    before = dict(adj.ADJOIN_LOG)
    test_adjoin_identity_gives_the_cone()
    assert adj.ADJOIN_LOG["built"] == before["built"] + 1
    assert adj.ADJOIN_LOG["built"] - adj.ADJOIN_LOG["verified"] == before["built"] - before["verified"]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_representability_round_trips(seed):
    trial_representability(random.Random(seed), Q, "identity")


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_named_cases_tensor(seed):
    trial_named(random.Random(seed), Q, "tensor")
