"""Model structure on ``C``: classes, factorizations, fillers and retracts.

Weak equivalences and fibrations are read off ``U``.  Cofibrations are only
ever certified by witnesses: chains of elementary adjunctions
``A -> A<M, α>`` with ``M`` free and ``d_M = 0``, optionally followed by an
isomorphism, or retracts of such chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import dgcore
from .adjoin import (
    AdjoinResult,
    HPair,
    adjoin,
    cycle_killer_stage,
    extend_from_top,
    free_on_basis,
    psi_inverse,
    zero_alpha,
)
from .adjunction import Adjunction
from .dgcore import PreconditionViolated, cone
from .exactlin import Matrix, Solver
from .graded import HomogeneousMap, component_map, shift_module, sigma


class StagesExhausted(RuntimeError):
    """The stage budget ran out before ``q_m`` became a trivial fibration."""

    def __init__(self, certificate):
        super().__init__(f"no trivial fibration after {len(certificate.stages)} stages")
        self.certificate = certificate


class NoFillerAvailable(ValueError):
    """Neither a cofibration witness nor a filler was supplied."""


# --- classes ----------------------------------------------------------------

@dataclass
class ClassReport:
    qiso: dict  # index -> degree -> (dim H source, dim H target, rank H(f))
    surj: dict  # index -> degree -> (rank, target rank)
    in_W: bool
    in_Rf: bool

    @property
    def in_W_Rf(self) -> bool:
        return self.in_W and self.in_Rf

    def as_dict(self):
        return {"in_W": self.in_W, "in_Rf": self.in_Rf, "in_W_Rf": self.in_W_Rf,
                "homology": {x: {str(z): list(v) for z, v in e.items()} for x, e in self.qiso.items()},
                "surjectivity": {x: {str(z): list(v) for z, v in e.items()} for x, e in self.surj.items()}}


def _trusted(inst: Adjunction, Uf):
    tr = inst.trusted_degrees()
    degs = sorted(set(Uf.source.degrees()) | set(Uf.target.degrees()))
    if tr is None:
        return degs
    lo, hi = tr
    return list(range(lo, hi + 1))


def classify(inst: Adjunction, f) -> ClassReport:
    Uf = inst.U_mor(f)
    degs = _trusted(inst, Uf)
    qiso, surj = {}, {}
    indices = sorted(set(Uf.source.indices()) | set(Uf.target.indices()))
    for x in indices:
        g = component_map(Uf, x) if len(indices) > 1 else Uf
        qiso[x] = dgcore.quasi_iso_evidence(g, degs)
        surj[x] = dgcore.surjectivity_evidence(g)
    in_W = all(a == b == r for e in qiso.values() for a, b, r in e.values())
    in_Rf = all(r == n for e in surj.values() for r, n in e.values())
    return ClassReport(qiso, surj, in_W, in_Rf)


def in_W(inst, f) -> bool:
    return classify(inst, f).in_W


# --- cofibration witnesses --------------------------------------------------

@dataclass
class Retract:
    """``f`` is a retract of ``j``: ``f·w = j`` and ``w·p = 1``."""

    j_witness: "CofibrationWitness"
    w: Any
    p: Any


@dataclass
class CofibrationWitness:
    """``A -> D_1 -> ... -> D_m (-> D via iso)`` built from elementary steps."""

    steps: list  # AdjoinResult, each with M free and d_M = 0
    iso: Any = None  # D_m -> D
    iso_inv: Any = None
    retract: Retract | None = None
    kind: str = "standard"

    def composite(self, inst: Adjunction):
        if self.retract is not None:
            raise ValueError("a retract witness has no composite of its own")
        m = inst.identity(self.steps[0].A)
        for s in self.steps:
            m = inst.compose(m, s.jbar)
        if self.iso is not None:
            m = inst.compose(m, self.iso)
        return m

    def validate(self, inst: Adjunction, claimed) -> bool:
        if self.retract is not None:
            r = self.retract
            j = r.j_witness.composite(inst)
            return (r.j_witness.validate(inst, j)
                    and inst.equal(inst.compose(claimed, r.w), j)
                    and inst.equal(inst.compose(r.w, r.p), inst.identity(inst.target(claimed))))
        for i, s in enumerate(self.steps):
            if not s.M.d.is_zero():
                return False
            if i and not (inst.U_ob(s.A) == inst.U_ob(self.steps[i - 1].D)):
                return False
        if self.iso is not None and self.iso_inv is not None:
            t = inst.target(self.iso)
            if not (inst.equal(inst.compose(self.iso, self.iso_inv), inst.identity(self.steps[-1].D))
                    and inst.equal(inst.compose(self.iso_inv, self.iso), inst.identity(t))):
                return False
        return inst.equal(self.composite(inst), claimed)


@dataclass
class StandardTrivial:
    """``j̄: X -> X<M, 0>`` with ``M[1] = Cone 1_{N[-1]}`` and its two-step witness."""

    res: AdjoinResult
    N: Any
    cone_bundle: Any  # Cone 1_{N[-1]}, equal to M[1]
    witness: CofibrationWitness

    @property
    def jbar(self):
        return self.res.jbar


def standard_trivial_cofibration(inst: Adjunction, X, N) -> StandardTrivial:
    """``X -> X<M, 0>`` for ``N`` free with ``d_N = 0`` and ``M = (Cone 1_{N[-1]})[-1]``."""
    if not N.d.is_zero():
        raise PreconditionViolated("N must have zero differential")
    P = shift_module(N, -1)
    cb = cone(dgcore.identity(P))
    M = shift_module(cb.module, -1)
    res = adjoin(inst, X, M, zero_alpha(inst, X, M))
    C = res.cone.shifted  # M[1], equal to cb.module
    to_C = res.cone.inj1 @ res.g_t  # M[1] -> U D, a chain map since α = 0
    # step 1: X -> X<N[-2], 0> = F(N[-1]) ⊔ X
    M1 = shift_module(P, -1)
    res1 = adjoin(inst, X, M1, zero_alpha(inst, X, M1))
    alpha2 = (res1.cone.inj1 @ res1.g_t).with_ends(source=P)
    # step 2: adjoin N[-1] along the inclusion of the new generators
    res2 = adjoin(inst, res1.D, P, alpha2)
    # the comparison D_2 -> D
    bottom = cb.inj2.with_ends(target=C) @ to_C  # P -> U D
    t1 = sigma(M1, 1, target=P) @ bottom
    f2 = psi_inverse(res1, HPair(res.jbar, t1))
    t2 = cb.h().with_ends(target=C) @ to_C
    kappa = psi_inverse(res2, HPair(f2, t2))
    kappa_inv = inst.invert(kappa)
    w = CofibrationWitness([res1, res2], kappa, kappa_inv, kind="standard trivial")
    if not w.validate(inst, res.jbar):
        raise AssertionError("two-step witness does not compose to j̄")
    return StandardTrivial(res, N, cb, w)


# --- MC5(ii) ----------------------------------------------------------------

@dataclass
class TrivCofFibCertificate:
    Z: Any
    jbar: Any
    p: Any
    package: StandardTrivial
    jbar_report: ClassReport
    p_report: ClassReport
    composite_ok: bool

    @property
    def ok(self):
        return (self.composite_ok and self.jbar_report.in_W and self.p_report.in_Rf
                and self.package.witness.validate(self.package.res.inst, self.jbar))


def factor_trivcof_fib(inst: Adjunction, f) -> TrivCofFibCertificate:
    """``f = j̄·p`` with ``j̄`` a standard trivial cofibration and ``p`` a fibration.

    ``N`` is free on the chosen basis of ``U Y`` and ``π^t: M[1] -> U Y`` sends
    ``e_y`` to ``y``.
    """
    X, Y = inst.source(f), inst.target(f)
    UY = inst.U_ob(Y)
    N = free_on_basis(UY)
    pkg = standard_trivial_cofibration(inst, X, N)
    res, cb = pkg.res, pkg.cone_bundle
    phi = HomogeneousMap(cb.shifted, UY, 0,
                         {z: Matrix.identity(UY.field, UY.rank(z)) for z in UY.degrees()})
    pi_t = extend_from_top(cb, phi)
    C = res.cone.shifted
    t = sigma(res.M, 1, target=C) @ pi_t.with_ends(source=C)
    p = psi_inverse(res, HPair(f, t))
    comp = inst.equal(inst.compose(res.jbar, p), f)
    return TrivCofFibCertificate(res.D, res.jbar, p, pkg, classify(inst, res.jbar),
                                 classify(inst, p), comp)


# --- MC5(i) -----------------------------------------------------------------

@dataclass
class StageRecord:
    D: Any  # D_{m+1}
    h: Any  # D_m -> D_{m+1}
    q: Any  # D_{m+1} -> Y
    null_homotopic: bool
    composite_ok: bool
    q_surjective: bool
    connecting_zero: bool
    N_ranks: dict


@dataclass
class CofTrivFibCertificate:
    f: Any
    stages: list = field(default_factory=list)
    early_stop: bool = False
    final_report: ClassReport | None = None
    witness: CofibrationWitness | None = None

    @property
    def q(self):
        return self.stages[-1].q if self.stages else self.f

    @property
    def D(self):
        return self.stages[-1].D if self.stages else None

    def surjective_from_stage_2(self) -> bool:
        return all(s.q_surjective for i, s in enumerate(self.stages) if i + 1 >= 2)

    @property
    def ok(self) -> bool:
        return (all(s.null_homotopic and s.composite_ok and s.connecting_zero for s in self.stages)
                and self.surjective_from_stage_2()
                and (not self.early_stop or self.final_report.in_W_Rf))


def connecting_map_is_zero(inst: Adjunction, h, q0, q1) -> bool:
    """``H(Cone U q_m) -> H(Cone U q_{m+1})`` induced by ``Cone(U h, 1)`` vanishes."""
    Uh, Uq0, Uq1 = inst.U_mor(h), inst.U_mor(q0), inst.U_mor(q1)
    c0, c1 = cone(Uq0), cone(Uq1)
    gamma = dgcore.cone_map(Uh, dgcore.identity(Uq0.target).with_ends(Uq0.target, Uq1.target), c0, c1)
    H0, H1 = dgcore.Homology(c0.module, []), dgcore.Homology(c1.module, [])
    degs = _trusted(inst, gamma)
    for z in degs:
        m = dgcore.induced_on_homology(gamma, z, H0, H1)
        if not m.is_zero():
            return False
    return True


def factor_cof_trivfib(inst: Adjunction, f, max_stages: int = 4, min_stages: int = 0):
    """``f = i·q`` by repeatedly killing cycles of ``Cone(q_m[-1])``.

    Stops early once ``q_m`` is a trivial fibration (after ``min_stages``);
    otherwise raises StagesExhausted carrying the per-stage certificate.
    """
    if max_stages < 1 or min_stages > max_stages:
        raise ValueError("need 1 <= max_stages and min_stages <= max_stages")
    cert = CofTrivFibCertificate(f)
    q = f
    incl = inst.identity(inst.source(f))
    steps = []
    for n in range(max_stages):
        if n >= min_stages:
            rep = classify(inst, q)
            if rep.in_W_Rf:
                cert.early_stop = True
                cert.final_report = rep
                break
        st = cycle_killer_stage(inst, q, prefix=f"n{n}_")
        h, q1 = st.res.jbar, st.q
        incl = inst.compose(incl, h)
        steps.append(st.res)
        rec = StageRecord(
            D=st.res.D, h=h, q=q1,
            null_homotopic=st.null_homotopic,
            composite_ok=inst.equal(inst.compose(incl, q1), f),
            q_surjective=classify(inst, q1).in_Rf,
            connecting_zero=connecting_map_is_zero(inst, h, q, q1),
            N_ranks=st.N.ranks,
        )
        cert.stages.append(rec)
        q = q1
    if cert.final_report is None:
        cert.final_report = classify(inst, q)
        cert.early_stop = False
    cert.witness = CofibrationWitness(steps) if steps else None
    if not cert.final_report.in_W_Rf:
        raise StagesExhausted(cert)
    return cert


# --- MC4 fillers ------------------------------------------------------------

def _square_commutes(inst, j, a, b, g) -> bool:
    return inst.equal(inst.compose(j, b), inst.compose(a, g))


def lift_standard_trivcof_vs_fib(inst: Adjunction, pkg: StandardTrivial, g, a, b):
    """Filler ``c`` for ``j̄·b = a·g`` with ``j̄`` standard trivial and ``g`` a fibration."""
    res, cb = pkg.res, pkg.cone_bundle
    if not _square_commutes(inst, res.jbar, a, b, g):
        raise PreconditionViolated("square does not commute")
    Ug = inst.U_mor(g)
    if not dgcore.is_epi(Ug):
        raise PreconditionViolated("g is not a fibration")
    C = res.cone.shifted
    lt = (res.cone.inj1 @ res.g_t @ inst.U_mor(b)).with_ends(source=cb.module)  # M[1] -> U B
    UA = Ug.source
    F = UA.field
    top = cb.inj1 @ lt  # N -> U B
    blocks = {}
    for z in cb.shifted.degrees():
        n = cb.shifted.rank(z)
        if not UA.rank(z):
            continue
        s = Solver(Ug.block(z))
        rows = []
        for i in range(n):
            v = s.solve(top.block(z).rows[i]) if top.target.rank(z) else ()
            if v is None:
                raise PreconditionViolated("g is not surjective")
            rows.append(v if v else [F.zero] * UA.rank(z))
        blocks[z] = Matrix(F, n, UA.rank(z), rows)
    r = extend_from_top(cb, HomogeneousMap(cb.shifted, UA, 0, blocks))
    if r @ Ug != lt:
        raise AssertionError("lifted chain map does not cover l^t")
    t = sigma(res.M, 1, target=C) @ r.with_ends(source=C)
    c = psi_inverse(res, HPair(a, t))
    if not (inst.equal(inst.compose(res.jbar, c), a) and inst.equal(inst.compose(c, g), b)):
        raise AssertionError("filler fails a triangle")
    return c


def _fill_elementary(inst: Adjunction, res: AdjoinResult, lifter, y, u, v):
    """Filler for one step ``A -> A<M, α>`` against ``y`` with ``j̄·v = u·y``."""
    if not res.M.d.is_zero():
        raise PreconditionViolated("elementary steps need d_M = 0")
    Uu, Uv = inst.U_mor(u), inst.U_mor(v)
    a_u = res.alpha @ Uu  # M -> U U'
    th_v = res.theta @ Uv  # M -> U V, degree -1
    UU = Uu.target
    F = UU.field
    blocks = {}
    for z in res.M.degrees():
        rows = []
        for i in range(res.M.rank(z)):
            uu = a_u.block(z).rows[i] if UU.rank(z) else ()
            vv = th_v.block(z).rows[i] if th_v.target.rank(z - 1) else ()
            rows.append(lifter.lift(z - 1, uu, vv))
        if UU.rank(z - 1):
            blocks[z] = Matrix(F, len(rows), UU.rank(z - 1), rows)
    r = HomogeneousMap(res.M, UU, -1, blocks)
    return psi_inverse(res, HPair(u, r))


def lift_standard_cof_vs_trivfib(inst: Adjunction, witness: CofibrationWitness, y, u, v, lifter=None):
    """Filler ``w`` for ``i·v = u·y`` with ``i`` witnessed and ``y`` a trivial fibration."""
    if witness.retract is not None:
        r = witness.retract
        c = lift_standard_cof_vs_trivfib(inst, r.j_witness, y, u, inst.compose(r.p, v), lifter)
        w = inst.compose(r.w, c)
    else:
        i = witness.composite(inst)
        if not _square_commutes(inst, i, u, v, y):
            raise PreconditionViolated("square does not commute")
        if lifter is None:
            lifter = dgcore.SurjectiveQisoLifter(inst.U_mor(y))
        back = v if witness.iso is None else inst.compose(witness.iso, v)
        # v restricted to each intermediate stage
        tails = [back]
        for s in reversed(witness.steps[1:]):
            tails.append(inst.compose(s.jbar, tails[-1]))
        tails.reverse()
        cur = u
        for s, vi in zip(witness.steps, tails):
            cur = _fill_elementary(inst, s, lifter, y, cur, vi)
        w = cur
        if witness.iso is not None:
            inv = witness.iso_inv if witness.iso_inv is not None else inst.invert(witness.iso)
            w = inst.compose(inv, w)
    i = witness.composite(inst) if witness.retract is None else None
    if i is not None and not inst.equal(inst.compose(i, w), u):
        raise AssertionError("filler fails the upper triangle")
    if not inst.equal(inst.compose(w, y), v):
        raise AssertionError("filler fails the lower triangle")
    return w


# --- retracts ---------------------------------------------------------------

@dataclass
class RetractPresentation:
    jbar: Any
    p: Any
    w: Any
    factorization: TrivCofFibCertificate
    source: str  # "witness", "filler" or "inverse"

    def check(self, inst, f) -> bool:
        Y = inst.target(f)
        return (inst.equal(inst.compose(f, self.w), self.jbar)
                and inst.equal(inst.compose(self.w, self.p), inst.identity(Y))
                and inst.equal(inst.compose(self.jbar, self.p), f))


def retract_presentation(inst: Adjunction, f, witness: CofibrationWitness | None = None,
                         filler=None) -> RetractPresentation:
    """Exhibit ``f ∈ W`` as a retract of the standard trivial cofibration of its
    trivial-cofibration/fibration factorization."""
    if not classify(inst, f).in_W:
        raise PreconditionViolated("f is not a weak equivalence")
    fac = factor_trivcof_fib(inst, f)
    Y = inst.target(f)
    one = inst.identity(Y)
    if witness is not None:
        if witness.retract is None and not witness.validate(inst, f):
            raise PreconditionViolated("witness does not compose to f")
        w = lift_standard_cof_vs_trivfib(inst, witness, fac.p, fac.jbar, one)
        how = "witness"
    elif filler is not None:
        w = filler
        how = "filler"
    else:
        try:
            w = inst.compose(inst.invert(f), fac.jbar)
        except PreconditionViolated:
            raise NoFillerAvailable("f has no cofibration witness and no filler was given") from None
        how = "inverse"
    pres = RetractPresentation(fac.jbar, fac.p, w, fac, how)
    if not pres.check(inst, f):
        raise PreconditionViolated("supplied filler does not give a retract")
    return pres


def elementary_witness(res: AdjoinResult) -> CofibrationWitness:
    return CofibrationWitness([res], kind="elementary")

