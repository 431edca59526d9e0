import random

import pytest
from hypothesis import given, settings, strategies as st

from dgmodel import IdentityInstance, PreconditionViolated, SemifreeAlgebra, SemifreeInstance
from dgmodel.adjunction import WindowTooSmall, verify_theorem_hypothesis
from dgmodel.dgcore import identity, is_chain_map
from dgmodel.exactlin import Matrix, Q
from dgmodel.graded import DgModule, GradedModule, HomogeneousMap
from dgmodel.workbench.generate import random_chain_map
from dgmodel.workbench.suites import _dg, small_semifree, trial_adjunction


def test_identity_transpose_is_identity():
    inst = IdentityInstance()
    X = DgModule(Q, {0: ["a"], 1: ["b"]}, None, {0: Matrix.from_rows(Q, [[1]])})
    f = identity(X)
    assert inst.transpose(f) is f and inst.cotranspose(f) is f


def test_identity_coproduct_is_biproduct():
    inst = IdentityInstance()
    rng = random.Random(1)
    A, B = _dg(Q, rng, "a"), _dg(Q, rng, "b")
    cp = inst.coproduct(A, B)
    assert cp.obj.dim == A.dim + B.dim
    assert is_chain_map(cp.inj1) and is_chain_map(cp.inj2)
    assert inst.copair(cp, identity(A), HomogeneousMap.zero(B, A)).source is cp.obj


def test_word_counts():
    A = SemifreeAlgebra(Q, [("a", 1), ("b", 2)])
    U = SemifreeInstance(Q, (0, 4)).U_ob(A)
    assert U.ranks == {0: 1, 1: 1, 2: 2, 3: 3, 4: 5}
    assert A.words(2) == [("a", "a"), ("b",)]


def test_leibniz_rule():
    # d acts from the right: (xy)d = x(y)d + (-1)^{|y|} (x)d y
    A = SemifreeAlgebra(Q, [("a", 1), ("b", 2), ("c", 2)], {"c": {("a", "b"): 1, ("b", "a"): -1}})
    assert A.d_poly({("a", "c"): 1}) == {("a", "a", "b"): 1, ("a", "b", "a"): -1}
    assert A.d_poly({("c", "a"): 1}) == {("a", "b", "a"): -1, ("b", "a", "a"): 1}
    with pytest.raises(ValueError):
        SemifreeAlgebra(Q, [("a", 0)])
    with pytest.raises(ValueError):
        SemifreeAlgebra(Q, [("a", 1), ("b", 2)], {"b": {("a",): 1}})


def test_cotranspose_multiplies_images():
    inst = SemifreeInstance(Q, (0, 6))
    A = SemifreeAlgebra(Q, [("p", 1), ("q", 2)])
    M = DgModule.trivial(GradedModule(Q, {1: ["a"], 2: ["b"]}))
    UA = inst.U_ob(A)
    x = HomogeneousMap(M, UA, 0, {1: Matrix.from_rows(Q, [[1]]),
                                  2: Matrix.from_rows(Q, [[0, 2]])})
    l = inst.cotranspose(x, A)
    assert l.apply_word(("a", "b")) == {("p", "q"): 2}
    assert l.apply_word(("b", "a", "a")) == {("q", "p", "p"): 2}
    assert inst.transpose(l, M) == x


def test_tensor_window_limits():
    inst = SemifreeInstance(Q, (0, 4))
    with pytest.raises(PreconditionViolated):
        inst.F_ob(DgModule.trivial(GradedModule(Q, {0: ["g"]})))
    with pytest.raises(WindowTooSmall):
        inst.F_ob(DgModule.trivial(GradedModule(Q, {5: ["g"]})))


def test_hypothesis_identity_instance():
    inst = IdentityInstance()
    A = _dg(Q, random.Random(3), "a")
    for p in range(-3, 4):
        assert verify_theorem_hypothesis(inst, A, "*", p).passed


def test_hypothesis_tensor_one_generator():
    inst = SemifreeInstance(Q, (0, 6))
    A = SemifreeAlgebra(Q, [("a", 2)])
    cert = verify_theorem_hypothesis(inst, A, "*", -3, (0, 6))
    assert cert.passed and not cert.offending


def test_hypothesis_tensor_initial_object():
    inst = SemifreeInstance(Q, (0, 6))
    F0 = SemifreeAlgebra(Q, [])
    assert verify_theorem_hypothesis(inst, F0, "*", -2, (0, 6)).passed


def test_hypothesis_tensor_rejects_low_shift():
    inst = SemifreeInstance(Q, (0, 6))
    with pytest.raises(PreconditionViolated):
        verify_theorem_hypothesis(inst, SemifreeAlgebra(Q, [("a", 2)]), "*", -1, (0, 6))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["identity", "tensor"]))
def test_triangle_identities_and_round_trips(seed, inst_name):
    trial_adjunction(random.Random(seed), Q, inst_name)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_transpose_round_trip_tensor(seed):
    rng = random.Random(seed)
    inst = SemifreeInstance(Q, (0, 6))
    A = small_semifree(Q, rng)
    M = DgModule.trivial(GradedModule.from_ranks(Q, {rng.randint(1, 4): 1, rng.randint(1, 4): 1}, "m"))
    x = random_chain_map(M, inst.U_ob(A), rng)
    assert inst.transpose(inst.cotranspose(x, A), M) == x
