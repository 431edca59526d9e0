"""Adjunctions ``F : dg^S <-> C : U`` and the identity instance ``C = dg^S``.

An instance supplies the handful of (co)limits the constructions use:
coproducts, the pushout of ``F(Cone α) <- F(U A) -> A`` (called
:meth:`Adjunction.attach`), its mediating maps, and transposition.  The
transpose of ``g: F C -> D`` is stored instead of ``g`` itself because some
instances cannot materialise ``F(U A)``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Sequence

from . import dgcore
from .dgcore import ConeBundle, PreconditionViolated, Pushout
from .graded import DgModule, HomogeneousMap, shift_module


class WindowTooSmall(ValueError):
    """Requested degrees fall outside what the instance can compute exactly."""


@dataclass
class Attachment:
    """Result of the pushout of ``F C <-Fī- F(U A) -ε-> A``."""

    D: Any
    jbar: Any
    g_t: HomogeneousMap  # transpose of g: C -> U D
    cone: ConeBundle
    data: Any = None


@dataclass
class Coproduct:
    obj: Any
    inj1: Any
    inj2: Any
    data: Any = None


class Adjunction(ABC):
    name = "abstract"

    # objects and morphisms of C
    @abstractmethod
    def U_ob(self, A) -> DgModule: ...

    @abstractmethod
    def U_mor(self, f) -> HomogeneousMap: ...

    @abstractmethod
    def F_ob(self, M: DgModule): ...

    @abstractmethod
    def F_mor(self, x: HomogeneousMap): ...

    @abstractmethod
    def unit(self, M: DgModule) -> HomogeneousMap: ...

    @abstractmethod
    def source(self, f): ...

    @abstractmethod
    def target(self, f): ...

    @abstractmethod
    def identity(self, A): ...

    @abstractmethod
    def compose(self, f, g):
        """Left-to-right composite ``f·g``."""

    def equal(self, f, g) -> bool:
        return f == g

    @abstractmethod
    def transpose(self, l) -> HomogeneousMap:
        """``l: F M -> A`` to ``l^t = η · U l : M -> U A``."""

    @abstractmethod
    def cotranspose(self, x: HomogeneousMap, A=None):
        """``x: M -> U A`` to ``ᵗx = F x · ε : F M -> A``."""

    @abstractmethod
    def coproduct(self, A, B) -> Coproduct: ...

    @abstractmethod
    def copair(self, cp: Coproduct, l1, l2):
        """The map out of a coproduct restricting to ``l1`` and ``l2``."""

    @abstractmethod
    def attach(self, A, cone: ConeBundle) -> Attachment: ...

    @abstractmethod
    def mediate(self, att: Attachment, f, x: HomogeneousMap):
        """The unique ``k: D -> B`` with ``j̄ k = f`` and ``g k = ᵗx``."""

    @abstractmethod
    def invert(self, f):
        """Two-sided inverse of an isomorphism, or raise PreconditionViolated."""

    def trusted_degrees(self):
        """Degree range on which homology of ``U`` is exact, or None for all."""
        return None

    def check_window(self, M: DgModule):
        """Raise WindowTooSmall when ``M`` cannot be fed to this instance."""

    def sequential_colimit(self, start, maps: Sequence):
        """Finite chain ``start -> ... -> last``: returns ``(last, legs, stabilized)``."""
        objs = [start] + [self.target(m) for m in maps]
        legs = []
        for i in range(len(objs)):
            leg = self.identity(objs[i])
            for m in maps[i:]:
                leg = self.compose(leg, m)
            legs.append(leg)
        stabilized = True
        if maps:
            try:
                self.invert(maps[-1])
            except PreconditionViolated:
                stabilized = False
        return objs[-1], legs, stabilized


class IdentityInstance(Adjunction):
    """``F = U = id``; the model structure is the projective one on ``dg^S``."""

    name = "identity"

    def U_ob(self, A):
        return A

    def U_mor(self, f):
        return f

    def F_ob(self, M):
        return M

    def F_mor(self, x):
        return x

    def unit(self, M):
        return dgcore.identity(M)

    def counit(self, A):
        return dgcore.identity(A)

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def identity(self, A):
        return dgcore.identity(A)

    def compose(self, f, g):
        return f @ g

    def transpose(self, l):
        return l

    def cotranspose(self, x, A=None):
        return x

    def coproduct(self, A, B):
        from .graded import DirectSum
        ds = DirectSum([A, B])
        blocks = ds.block_blocks([[A.d, None], [None, B.d]], 1, ds)
        S = DgModule.on(ds.module, blocks)
        ds.module = S
        return Coproduct(S, ds.inj(0).with_ends(A, S), ds.inj(1).with_ends(B, S), ds)

    def copair(self, cp, l1, l2):
        T = l1.target
        blocks = {}
        from .exactlin import Matrix
        for z in cp.obj.degrees():
            parts = [m.block(z) for m in (l1, l2) if m.source.rank(z)]
            if T.rank(z):
                blocks[z] = Matrix.vstack(T.field, parts)
        m = HomogeneousMap(cp.obj, T, 0, blocks)
        if cp.inj1 @ m != l1 or cp.inj2 @ m != l2:
            raise AssertionError("copair does not restrict correctly")
        return m

    def attach(self, A, cone):
        # ε = id_A, so the pushout is the dg pushout of C <-ī- A -id-> A
        po = dgcore.pushout(dgcore.identity(A), cone.inj2)
        return Attachment(po.module, po.leg_b, po.leg_c, cone, po)

    def mediate(self, att, f, x):
        po: Pushout = att.data
        return po.mediate(f, x)

    def invert(self, f):
        if f.degree != 0 or not dgcore.is_iso(f):
            raise PreconditionViolated("not an isomorphism")
        return dgcore.inverse(f)


def free_on(inst: Adjunction, M: DgModule):
    return inst.F_ob(M)


def shifted_cone_of_identity(k_module: DgModule, p: int) -> DgModule:
    """``Cone(id)[p]`` of a one-dimensional module."""
    return shift_module(dgcore.cone(dgcore.identity(k_module)).module, p)


@dataclass
class HypothesisCertificate:
    """Homology evidence that ``U(inj2): U A -> U(F(K_x[p]) ⊔ A)`` is a quasi-isomorphism."""

    instance: str
    index: str
    p: int
    window: tuple
    evidence: dict  # degree -> (dim H U A, dim H of the coproduct, rank)
    offending: list

    @property
    def passed(self) -> bool:
        return not self.offending

    def as_dict(self):
        return {"instance": self.instance, "index": self.index, "p": self.p,
                "window": list(self.window), "passed": self.passed,
                "offending_degrees": self.offending,
                "evidence": {str(z): list(v) for z, v in self.evidence.items()}}


def verify_theorem_hypothesis(inst: Adjunction, A, x: str, p: int, window=None) -> HypothesisCertificate:
    """Check on ``window`` that adjoining ``F(K_x[p])`` to ``A`` does not change
    homology, where ``K_x = Cone(1)`` on the unit in index ``x``."""
    from .dgcore import quasi_iso_evidence
    from .graded import unit_module

    if window is not None and hasattr(inst, "with_window"):
        lo, hi = window
        # U is exact one degree below its top, so reach one further
        inst = inst.with_window(lo, hi + 1)
    UA = inst.U_ob(A)
    F = UA.field
    unit = DgModule.trivial(unit_module(F, 0, "1", x))
    K = shift_module(dgcore.cone(dgcore.identity(unit)).module, p)
    inst.check_window(K)
    cp = inst.coproduct(inst.F_ob(K), A)
    Uinj = inst.U_mor(cp.inj2)
    if window is None:
        tr = inst.trusted_degrees()
        degs = sorted(set(Uinj.source.degrees()) | set(Uinj.target.degrees())) if tr is None \
            else list(range(tr[0], tr[1] + 1))
        window = (degs[0], degs[-1]) if degs else (0, 0)
    else:
        tr = inst.trusted_degrees()
        if tr is not None and (window[0] < tr[0] or window[1] > tr[1]):
            raise WindowTooSmall(f"window {window} exceeds the exact range {tr}")
        degs = list(range(window[0], window[1] + 1))
    ev = quasi_iso_evidence(Uinj, degs)
    bad = [z for z, (a, b, r) in ev.items() if not a == b == r]
    return HypothesisCertificate(inst.name, x, p, tuple(window), ev, bad)
