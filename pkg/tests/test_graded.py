import random

from hypothesis import given, settings, strategies as st

from dgmodel.exactlin import Matrix, Q
from dgmodel.graded import (
    GradedModule,
    HomogeneousMap,
    shift_absorb,
    shift_map,
    shift_module,
    symmetry,
    tensor,
    tensor_map,
    unit_module,
)
from dgmodel.workbench.generate import random_graded, random_homogeneous
from dgmodel.workbench.suites import trial_signs


def one(z, label="x"):
    return GradedModule(Q, {z: [label]})


def test_shift_moves_degrees_down():
    S = shift_module(unit_module(Q, 0), 1)
    assert S.ranks == {-1: 1}
    assert shift_module(S, -1).ranks == {0: 1}
    V = GradedModule.from_ranks(Q, {0: 2, 3: 1})
    assert shift_module(V, 0) is V
    assert shift_module(shift_module(V, 2), -3).ranks == shift_module(V, -1).ranks


def test_shift_labels_are_traceable():
    S = shift_module(unit_module(Q, 0, "u"), 1)
    assert S.basis(-1) == ("uσ1",)
    assert shift_module(S, -1).basis(0) == ("u",)


def test_shift_map_sign():
    V, X = one(0, "v"), one(1, "x")
    f = HomogeneousMap(V, X, 1, {0: Matrix.from_rows(Q, [[7]])})
    assert shift_map(f, 1).block(-1) == Matrix.from_rows(Q, [[-7]])
    assert shift_map(f, 2).block(-2) == Matrix.from_rows(Q, [[7]])
    g = HomogeneousMap(V, one(0, "y"), 0, {0: Matrix.from_rows(Q, [[7]])})
    assert shift_map(g, 1).block(-1) == Matrix.from_rows(Q, [[7]])


def test_symmetry_sign_on_odd_classes():
    c = symmetry(one(1, "a"), one(1, "b"))
    assert c.block(2) == Matrix.from_rows(Q, [[-1]])
    c = symmetry(one(1, "a"), one(2, "b"))
    assert c.block(3) == Matrix.from_rows(Q, [[1]])


def test_shift_absorb_signs():
    left, right = shift_absorb(one(0, "v"), one(1, "w"), 1)
    assert left.block(0) == Matrix.from_rows(Q, [[-1]])
    assert right.block(0) == Matrix.from_rows(Q, [[1]])
    left, _ = shift_absorb(one(1, "v"), one(0, "w"), 1)
    assert left.block(0) == Matrix.from_rows(Q, [[1]])


def test_unit_law():
    V = GradedModule.from_ranks(Q, {-1: 1, 2: 2})
    T = tensor(unit_module(Q, 0), V)
    assert T.ranks == V.ranks


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sign_calculus_squares(seed):
    trial_signs(random.Random(seed), Q, "identity")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(-3, 3), st.integers(-3, 3))
def test_shift_is_functorial(seed, a, b):
    rng = random.Random(seed)
    V, X, Z = (random_graded(Q, rng, (-1, 1), 2, p) for p in "vxz")
    f = random_homogeneous(V, X, rng.randint(-2, 2), rng)
    h = random_homogeneous(X, Z, rng.randint(-2, 2), rng)
    assert shift_map(f @ h, a) == shift_map(f, a) @ shift_map(h, a)
    assert shift_map(shift_map(f, a), b).blocks == shift_map(f, a + b).blocks
    g = random_homogeneous(Z, V, rng.randint(-2, 2), rng)
    s = -1 if (f.degree * g.degree) % 2 else 1
    assert tensor_map(f, g) @ symmetry(X, V) == (symmetry(V, Z) @ tensor_map(g, f)).scale(s)
