import random

import pytest
from hypothesis import given, settings, strategies as st

from dgmodel.dgcore import (
    PreconditionViolated,
    cone,
    cone_map,
    find_homotopy,
    homology,
    identity,
    is_acyclic,
    is_chain_map,
    is_epi,
    is_quasi_iso,
    lift_through_surjective_qiso,
    map_boundary,
    pushout,
    sequential_colimit,
)
from dgmodel.exactlin import Matrix, Q
from dgmodel.graded import DgModule, GradedModule, HomogeneousMap, direct_sum, unit_module
from dgmodel.workbench.generate import random_chain_map, random_surjective_qiso
from dgmodel.workbench.suites import small_spec, trial_cone, trial_lifting, _dg


def m(rows):
    return Matrix.from_rows(Q, rows)


def Q0(label="x", z=0):
    return DgModule.trivial(unit_module(Q, z, label))


def K():
    return cone(identity(Q0("k"))).module


def test_cone_of_identity():
    C = K()
    assert C.ranks == {-1: 1, 0: 1}
    assert C.d.block(-1) == m([[1]])
    assert is_acyclic(C)


def test_cone_of_maps_to_and_from_zero():
    N = Q0("n")
    zero = DgModule.trivial(GradedModule.zero(Q))
    C = cone(HomogeneousMap.zero(zero, N)).module
    assert C.ranks == N.ranks
    X = DgModule(Q, {0: ["a"], 1: ["b"]}, None, {0: m([[2]])})
    C = cone(HomogeneousMap.zero(X, zero)).module
    assert C.ranks == {-1: 1, 0: 1}
    assert C.d.block(-1) == m([[-2]])


def test_cone_map_scaling():
    cb = cone(identity(Q0()))
    two = identity(Q0()).scale(Q(2))
    f = cone_map(two, two, cb, cb)
    assert f == identity(cb.module).scale(Q(2))
    assert cone_map(identity(Q0()), identity(Q0()), cb, cb) == identity(cb.module)
    cb2 = cone(two)
    with pytest.raises(PreconditionViolated):
        cone_map(identity(Q0()), identity(Q0()), cb, cb2)


def test_homology_examples():
    assert homology(Q0()).dims() == {0: 1}
    assert homology(K()).dims() == {}
    X = DgModule(Q, {0: ["a", "b"], 1: ["c"]}, None, {0: m([[1], [0]])})
    assert homology(X).dims() == {0: 1}


def test_quasi_iso_examples():
    X = Q0()
    assert is_quasi_iso(identity(X)) and is_epi(identity(X))
    ds = direct_sum(K(), X)
    S = DgModule.on(ds.module, ds.block_blocks([[K().d, None], [None, X.d]], 1, ds))
    inj2 = ds.inj(1).with_ends(X, S)
    assert is_quasi_iso(inj2) and not is_epi(inj2)
    two = DgModule.trivial(GradedModule(Q, {0: ["a", "b"]}))
    pr = HomogeneousMap(two, X, 0, {0: m([[1], [0]])})
    assert not is_quasi_iso(pr) and is_epi(pr)


def test_map_boundary_examples():
    X = DgModule(Q, {0: ["a"], 1: ["b"]}, None, {0: m([[1]])})
    assert map_boundary(identity(X)).is_zero()
    assert map_boundary(X.d).is_zero()
    N = Q0("n")
    cb = cone(identity(N).scale(Q(3)))
    h = cb.h()
    assert map_boundary(h) == cb.alpha @ cb.ibar


def test_lifting_example():
    X = Q0("v")
    Kc = cone(identity(Q0("k"))).module
    ds = direct_sum(Kc, X)
    U = DgModule.on(ds.module, ds.block_blocks([[Kc.d, None], [None, X.d]], 1, ds))
    g = ds.proj(1).with_ends(U, X)
    w = lift_through_surjective_qiso(g, -1, (3, 0), ())
    assert w == (3,)
    assert lift_through_surjective_qiso(g, -1, (0, 0), ()) == (0,)
    with pytest.raises(PreconditionViolated):
        lift_through_surjective_qiso(g, -1, (0, 1), ())


def test_lifting_through_identity_returns_v():
    X = DgModule(Q, {0: ["a"], 1: ["b"]}, None, {0: m([[1]])})
    assert lift_through_surjective_qiso(identity(X), 0, (5,), (5,)) == (5,)


def test_find_homotopy_examples():
    X = Q0()
    assert find_homotopy(identity(X), identity(X)).is_zero()
    C = K()
    h = find_homotopy(identity(C), HomogeneousMap.zero(C, C))
    assert h is not None and map_boundary(h) == identity(C)
    assert find_homotopy(identity(X), HomogeneousMap.zero(X, X)) is None


def test_pushout_examples():
    cb = cone(identity(Q0("a")))
    A = cb.alpha.target
    po = pushout(identity(A), cb.ibar)
    assert po.module.ranks == cb.module.ranks
    assert is_acyclic(po.module)
    zero = DgModule.trivial(GradedModule.zero(Q))
    B = Q0("b")
    po = pushout(HomogeneousMap.zero(zero, zero), HomogeneousMap.zero(zero, B))
    assert po.module.ranks == B.ranks
    po = pushout(identity(B), identity(B))
    assert po.module.ranks == B.ranks
    assert is_chain_map(po.leg_b) and po.leg_b == po.leg_c


def test_sequential_colimit_examples():
    X = Q0()
    col = sequential_colimit(X, [identity(X), identity(X)])
    assert col.stabilized and col.module is X
    assert sequential_colimit(X, []).stabilized
    Y = DgModule.trivial(GradedModule(Q, {0: ["a", "b"]}))
    grow = HomogeneousMap(X, Y, 0, {0: m([[1, 0]])})
    col = sequential_colimit(X, [grow])
    assert not col.stabilized and col.legs[0] == grow


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_cone_properties(seed):
    trial_cone(random.Random(seed), Q, "identity")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["Q", "F5"]))
def test_lift_satisfies_both_equations(seed, fname):
    from dgmodel.workbench.generate import field_named
    trial_lifting(random.Random(seed), field_named(fname), "identity")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_map_boundary_squares_to_zero(seed):
    rng = random.Random(seed)
    X, Y = _dg(Q, rng, "x"), _dg(Q, rng, "y")
    from dgmodel.workbench.generate import random_homogeneous
    f = random_homogeneous(X, Y, rng.randint(-2, 2), rng)
    assert map_boundary(map_boundary(f)).is_zero()
    assert map_boundary(random_chain_map(X, Y, rng)).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_pushout_preserves_injectivity(seed):
    from dgmodel.dgcore import is_mono
    from dgmodel.workbench.generate import random_injective_qiso
    rng = random.Random(seed)
    spec = small_spec(Q, rng)
    A = _dg(Q, rng, "a")
    C = _dg(Q, rng, "c")
    phi = random_injective_qiso(A, spec, rng)
    psi = random_chain_map(A, C, rng)
    po = pushout(phi, psi)
    assert is_mono(po.leg_c)
    qi = random_surjective_qiso(spec, rng)
    assert is_quasi_iso(qi) and is_epi(qi)
