"""Adjoining variables: the object ``A<M, α>`` and the pairs it represents.

For ``α: M -> U A`` the object ``D = A<M, α>`` is the pushout of
``F(Cone α) <- F(U A) -> A``.  It comes with ``j̄: A -> D`` and the degree -1
map ``θ = σ · inj1 · g^t : M -> U D`` with ``(θ)d = α · U j̄``, and morphisms
``D -> B`` correspond to pairs ``(f, t)`` with ``(t)d = α · U f``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import dgcore
from .adjunction import Adjunction, Attachment
from .dgcore import ConeBundle, PreconditionViolated, cone, is_chain_map, map_boundary
from .exactlin import Matrix, kernel_basis
from .graded import (
    DgModule,
    DirectSum,
    GradedModule,
    HomogeneousMap,
    shift_map,
    shift_module,
    sigma,
    sigma_inv,
)

# every adjoin ever built checks (θ)d = α·U j̄; these counters make that auditable
ADJOIN_LOG = {"built": 0, "verified": 0}


class MembershipViolated(PreconditionViolated):
    """``(t)d != α · U f`` for a would-be pair."""


class HomotopyInvalid(PreconditionViolated):
    """``(h)d != α - α'``."""


@dataclass
class HPair:
    f: Any  # morphism A -> B in C
    t: HomogeneousMap  # degree -1, M -> U B


@dataclass
class AdjoinResult:
    inst: Adjunction
    A: Any
    M: DgModule
    alpha: HomogeneousMap
    cone: ConeBundle
    att: Attachment
    theta: HomogeneousMap

    @property
    def D(self):
        return self.att.D

    @property
    def jbar(self):
        return self.att.jbar

    @property
    def g_t(self):
        return self.att.g_t

    def identity(self):
        return self.inst.identity(self.D)


def _into(x: HomogeneousMap, module) -> HomogeneousMap:
    return x if x.target is module else x.with_ends(target=module)


def is_member(inst: Adjunction, alpha: HomogeneousMap, pair: HPair) -> bool:
    Uf = inst.U_mor(pair.f)
    if pair.t.degree != -1 or not pair.t.target.same_graded(Uf.target):
        return False
    t = pair.t.with_ends(alpha.source, Uf.target)
    return map_boundary(t) == alpha.with_ends(target=Uf.source) @ Uf


def adjoin(inst: Adjunction, A, M: DgModule, alpha: HomogeneousMap) -> AdjoinResult:
    UA = inst.U_ob(A)
    if not alpha.target.same_graded(UA):
        raise PreconditionViolated("α does not land in U A")
    alpha = alpha.with_ends(M, UA)
    if not is_chain_map(alpha):
        raise PreconditionViolated("α is not a chain map")
    cb = cone(alpha)
    att = inst.attach(A, cb)
    ADJOIN_LOG["built"] += 1
    theta = cb.h() @ att.g_t
    UD = att.g_t.target
    Uj = inst.U_mor(att.jbar)
    if cb.inj2 @ att.g_t != Uj:
        raise AssertionError("g does not restrict to j̄ along the cone inclusion")
    if map_boundary(theta) != alpha @ Uj:
        raise AssertionError("(θ)d differs from α·U j̄")
    ADJOIN_LOG["verified"] += 1
    return AdjoinResult(inst, A, M, alpha, cb, att, theta.with_ends(M, UD))


def psi(res: AdjoinResult, k) -> HPair:
    """``k: D -> B`` to ``(j̄·k, θ·U k)``."""
    inst = res.inst
    f = inst.compose(res.jbar, k)
    t = res.theta @ inst.U_mor(k)
    pair = HPair(f, t)
    if not is_member(inst, res.alpha, pair):
        raise AssertionError("ψ produced a pair outside h_{A,α}")
    return pair


def pairs_equal(inst: Adjunction, p: HPair, q: HPair) -> bool:
    return inst.equal(p.f, q.f) and p.t == q.t


def psi_inverse(res: AdjoinResult, pair: HPair):
    """The unique ``k: D -> B`` with ``ψ(k) = (f, t)``.

    Builds ``x = (σ^{-1} t ; U f) : Cone α -> U B`` and mediates through the
    pushout.
    """
    inst = res.inst
    if not is_member(inst, res.alpha, pair):
        raise MembershipViolated("(t)d != α·U f")
    Uf = inst.U_mor(pair.f)
    UB = Uf.target
    cb = res.cone
    t = pair.t.with_ends(res.M, UB)
    top = sigma_inv(res.M, 1, source=cb.shifted) @ t
    tgt = DirectSum([UB], module=UB)
    blocks = cb.summands.block_blocks([[top], [Uf.with_ends(source=cb.inj2.source)]], 0, tgt)
    x = HomogeneousMap(cb.module, UB, 0, blocks)
    if not is_chain_map(x):
        raise AssertionError("x = (σ^{-1}t; U f) is not a chain map")
    k = inst.mediate(res.att, pair.f, x)
    if not pairs_equal(inst, psi(res, k), pair):
        raise AssertionError("ψ(ψ^{-1}(f, t)) != (f, t)")
    return k


@dataclass
class Transfer:
    k: Any  # A<M,α> -> A<M,α'>
    k_inv: Any
    res2: AdjoinResult


def transfer_along_homotopy(res: AdjoinResult, alpha2: HomogeneousMap, h: HomogeneousMap,
                            res2: AdjoinResult | None = None) -> Transfer:
    """Isomorphism ``A<M,α> -> A<M,α'>`` for ``(h)d = α - α'``."""
    inst = res.inst
    alpha2 = alpha2.with_ends(res.M, res.alpha.target)
    h = h.with_ends(res.M, res.alpha.target)
    if h.degree != -1 or map_boundary(h) != res.alpha - alpha2:
        raise HomotopyInvalid("(h)d != α - α'")
    if res2 is None:
        res2 = adjoin(inst, res.A, res.M, alpha2)
    Uj2 = inst.U_mor(res2.jbar)
    k = psi_inverse(res, HPair(res2.jbar, res2.theta + h.with_ends(target=Uj2.source) @ Uj2))
    Uj = inst.U_mor(res.jbar)
    k_inv = psi_inverse(res2, HPair(res.jbar, res.theta - h.with_ends(target=Uj.source) @ Uj))
    if not inst.equal(inst.compose(res.jbar, k), res2.jbar):
        raise AssertionError("j̄·k != j̄'")
    if not (inst.equal(inst.compose(k, k_inv), res.identity())
            and inst.equal(inst.compose(k_inv, k), res2.identity())):
        raise AssertionError("transfer maps are not mutually inverse")
    return Transfer(k, k_inv, res2)


def induced_map(beta: HomogeneousMap, res1: AdjoinResult, res2: AdjoinResult):
    """``A<β> : A<M', β·α''> -> A<M'', α''>``."""
    inst = res1.inst
    if not is_chain_map(beta):
        raise PreconditionViolated("β is not a chain map")
    beta = beta.with_ends(res1.M, res2.M)
    if beta @ res2.alpha != res1.alpha:
        raise PreconditionViolated("res1 is not adjoined along β·α''")
    k = psi_inverse(res1, HPair(res2.jbar, beta @ res2.theta))
    if not inst.equal(inst.compose(res1.jbar, k), res2.jbar):
        raise AssertionError("j̄'' != j̄'·A<β>")
    if beta @ res2.theta != res1.theta @ inst.U_mor(k):
        raise AssertionError("β·θ'' != θ'·U A<β>")
    return k


# --- Cone(1_N): chain maps out of it versus maps out of N[1] -----------------

def cone_of_identity(N: DgModule) -> ConeBundle:
    return cone(dgcore.identity(N))


def restrict_to_top(cb: ConeBundle, chi: HomogeneousMap) -> HomogeneousMap:
    """Chain map ``Cone 1_N -> T`` to its degree-0 restriction ``N[1] -> T``."""
    return cb.inj1 @ chi


def extend_from_top(cb: ConeBundle, phi: HomogeneousMap) -> HomogeneousMap:
    """Degree-0 map ``φ: N[1] -> T`` to the unique chain map ``Cone 1_N -> T``
    restricting to it; on ``N`` it is ``(σ·φ)d``."""
    N = cb.alpha.source
    T = phi.target
    phi = phi.with_ends(source=cb.shifted)
    bottom = map_boundary(sigma(N, 1, target=cb.shifted) @ phi)
    tgt = DirectSum([T], module=T)
    chi = HomogeneousMap(cb.module, T, 0, cb.summands.block_blocks([[phi], [bottom]], 0, tgt))
    if not is_chain_map(chi):
        raise AssertionError("extension from N[1] is not a chain map")
    return chi


# --- killing cycles ---------------------------------------------------------

def cycle_module(X: DgModule, prefix: str = "c"):
    """``Z X`` as a module with zero differential, and its inclusion into ``X``."""
    F = X.field
    basis, index, rows = {}, {}, {}
    for z in X.degrees():
        d = X.d.block(z)
        vecs, tags = [], []
        for x in X.indices():
            pos = X.positions(z, x)
            if not pos:
                continue
            cols = X.positions(z + 1, x)
            sub = d.submatrix(pos, cols) if cols else Matrix.zeros(F, len(pos), 0)
            for v in kernel_basis(sub):
                full = [F.zero] * X.rank(z)
                for p, c in zip(pos, v):
                    full[p] = c
                vecs.append(tuple(full))
                tags.append(x)
        if vecs:
            basis[z] = [f"{prefix}{z}_{i}" for i in range(len(vecs))]
            index[z] = tags
            rows[z] = vecs
    Z = DgModule(F, basis, index, {})
    incl = HomogeneousMap(Z, X, 0, {z: Matrix(F, len(r), X.rank(z), r) for z, r in rows.items()})
    return Z, incl


@dataclass
class CycleKillerStage:
    N: DgModule
    incl: HomogeneousMap  # N -> Cone(r[-1])
    pr1: HomogeneousMap  # N -> U A
    pr2: HomogeneousMap  # N -> (U Y)[-1]
    t: HomogeneousMap  # N -> U Y, degree -1
    res: AdjoinResult
    q: Any  # D -> Y
    null_homotopic: bool  # β == ((θ, 0))d


def cycle_killer_stage(inst: Adjunction, r, prefix: str = "c") -> CycleKillerStage:
    A, Y = inst.source(r), inst.target(r)
    UA, UY = inst.U_ob(A), inst.U_ob(Y)
    Ur = inst.U_mor(r)
    r1 = shift_map(Ur, -1)
    cb = cone(r1)
    N, incl = cycle_module(cb.module, prefix)
    pr1 = (incl @ cb.proj1).with_ends(N, UA)
    pr2 = incl @ cb.proj2
    t = pr2 @ sigma(cb.alpha.target, 1, target=UY)
    res = adjoin(inst, A, N, pr1)
    q = psi_inverse(res, HPair(r, t))
    # certificate: N -> Cone(r[-1]) -> Cone(q[-1]) equals the boundary of (θ, 0)
    Uq = inst.U_mor(q)
    Uj = inst.U_mor(res.jbar)
    cb2 = cone(shift_map(Uq, -1))
    gamma = dgcore.cone_map(shift_map(Uj, -1), dgcore.identity(cb.alpha.target).with_ends(
        cb.alpha.target, cb2.alpha.target), cb, cb2)
    beta = incl @ gamma
    theta0 = res.theta.with_ends(target=cb2.shifted) @ cb2.inj1
    ok = map_boundary(theta0) == beta
    return CycleKillerStage(N, incl, pr1, pr2, t, res, q, ok)


def free_on_basis(X: GradedModule, prefix: str = "e") -> DgModule:
    """The module with zero differential on a chosen basis of ``X``."""
    basis = {z: [f"{prefix}[{l}]" for l in X.basis(z)] for z in X.degrees()}
    index = {z: X.index(z) for z in X.degrees()}
    return DgModule(X.field, basis, index, {})


def zero_alpha(inst: Adjunction, A, M: DgModule) -> HomogeneousMap:
    return HomogeneousMap.zero(M, inst.U_ob(A))


def shifted(M: DgModule, a: int) -> DgModule:
    return shift_module(M, a)
