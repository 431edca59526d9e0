"""Differential graded modules: cones, homology, homotopies, lifting, pushouts."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exactlin import Matrix, Solver, cokernel_data, kernel_basis, row_space_basis
from .graded import (
    DgModule,
    DirectSum,
    GradedModule,
    HomogeneousMap,
    all_degrees,
    shift_map,
    shift_module,
)


class PreconditionViolated(ValueError):
    """Inputs break the hypotheses of an operation (a caller bug)."""


def cone_signs() -> tuple[int, int]:
    """Extra signs on the ``d_M[1]`` and ``σ^{-1}α`` blocks of the cone differential."""
    return (1, 1)


def is_chain_map(f: HomogeneousMap) -> bool:
    if f.degree != 0:
        return False
    return (f @ f.target.d) == (f.source.d @ f)


def chain_map(source: DgModule, target: DgModule, blocks) -> HomogeneousMap:
    f = HomogeneousMap(source, target, 0, blocks)
    if not is_chain_map(f):
        raise PreconditionViolated("not a chain map")
    return f


def map_boundary(f: HomogeneousMap) -> HomogeneousMap:
    """``(f)d = f d - (-1)^{deg f} d f`` (left-to-right composition)."""
    s, t = f.source, f.target
    first = f @ t.d
    second = s.d @ f
    return first + second if f.degree % 2 else first - second


def identity(m: GradedModule) -> HomogeneousMap:
    return HomogeneousMap.identity(m)


def is_iso(f: HomogeneousMap) -> bool:
    for z in all_degrees(f.source, f.target):
        b = f.block(z)
        if b.nrows != b.ncols or b.rank() != b.nrows:
            return False
    return True


def inverse(f: HomogeneousMap) -> HomogeneousMap:
    if not is_iso(f):
        raise PreconditionViolated("map is not invertible")
    return HomogeneousMap(f.target, f.source, -f.degree,
                          {f.target.key(z + f.degree): b.inverse() for z, b in f.blocks.items()})


def is_epi(f: HomogeneousMap) -> bool:
    return all(f.block(z).rank() == f.target.rank(z + f.degree)
               for z in all_degrees(f.source, f.target))


def surjectivity_evidence(f: HomogeneousMap) -> dict:
    """Per target degree: ``(rank of the block, target rank)``."""
    return {z + f.degree: (f.block(z).rank(), f.target.rank(z + f.degree))
            for z in all_degrees(f.source, f.target)}


def is_mono(f: HomogeneousMap) -> bool:
    return all(f.block(z).rank() == f.source.rank(z) for z in f.source.degrees())


# --- cones ------------------------------------------------------------------

@dataclass
class ConeBundle:
    """``Cone α = M[1] ⊕ N`` with its structure maps."""

    alpha: HomogeneousMap
    module: DgModule
    shifted: DgModule  # M[1]
    summands: DirectSum
    inj1: HomogeneousMap  # M[1] -> C
    inj2: HomogeneousMap  # N -> C  (the embedding written ī)
    proj1: HomogeneousMap  # C -> M[1]
    proj2: HomogeneousMap  # C -> N

    @property
    def ibar(self):
        return self.inj2

    def h(self) -> HomogeneousMap:
        """``M -σ-> M[1] -inj1-> C``, degree -1."""
        M = self.alpha.source
        return HomogeneousMap(M, self.shifted, -1,
                              {z: Matrix.identity(M.field, M.rank(z)) for z in M.degrees()}) @ self.inj1


def cone(alpha: HomogeneousMap, check: bool = True) -> ConeBundle:
    M, N = alpha.source, alpha.target
    if check and not is_chain_map(alpha):
        raise PreconditionViolated("cone needs a chain map")
    M1 = shift_module(M, 1)
    ds = DirectSum([M1, N])
    s_top, s_off = cone_signs()
    top = M1.d.scale(s_top) if s_top != 1 else M1.d
    off = HomogeneousMap(M1, N, 1, {z - 1: b.scale(s_off) for z, b in alpha.blocks.items()})
    grid = [[top, off], [None, N.d]]
    blocks = ds.block_blocks(grid, 1, ds)
    C = DgModule.on(ds.module, blocks, check=False)
    if check and not (C.d @ C.d).is_zero():
        raise PreconditionViolated("cone differential does not square to zero")
    ds.module = C
    inj1 = ds.inj(0).with_ends(M1, C)
    inj2 = ds.inj(1).with_ends(N, C)
    proj1 = ds.proj(0).with_ends(C, M1)
    proj2 = ds.proj(1).with_ends(C, N)
    return ConeBundle(alpha, C, M1, ds, inj1, inj2, proj1, proj2)


def cone_map(phi: HomogeneousMap, psi: HomogeneousMap, c1: ConeBundle, c2: ConeBundle) -> HomogeneousMap:
    """``Cone(φ, ψ) = diag(φ[1], ψ) : Cone α -> Cone α'`` for ``φ α' = α ψ``."""
    if (phi @ c2.alpha) != (c1.alpha @ psi):
        raise PreconditionViolated("the square φ·α' = α·ψ does not commute")
    phi1 = shift_map(phi, 1, c1.shifted, c2.shifted)
    grid = [[phi1, None], [None, psi]]
    f = HomogeneousMap(c1.module, c2.module, 0, c1.summands.block_blocks(grid, 0, c2.summands))
    if not is_chain_map(f):
        raise PreconditionViolated("induced cone map is not a chain map")
    return f


# --- homology ---------------------------------------------------------------

class HomologyDegree:
    """Cycles, boundaries and chosen class representatives in one degree."""

    def __init__(self, X: DgModule, z: int):
        F = X.field
        self.degree = z
        n = X.rank(z)
        self.size = n
        d_out = X.d.block(z)
        d_in = X.d.block(z - 1)
        self.cycles = kernel_basis(d_out)
        self.boundaries = row_space_basis(d_in) if d_in.nrows else []
        k = len(self.cycles)
        self._zsolver = None
        if k == 0:
            self.reps = []
            self._proj = Matrix.zeros(F, 0, 0)
            self.dim = 0
            return
        Z = Matrix(F, k, n, self.cycles)
        self._zsolver = Solver(Z)
        bc = [self._zsolver.solve(b) for b in self.boundaries]
        B = Matrix(F, len(bc), k, bc)
        cok = cokernel_data(B)
        self.dim = cok.dim
        self._proj = cok.projection
        self.reps = list((cok.section @ Z).rows) if cok.dim else []

    def cycle_coords(self, v):
        if self._zsolver is None:
            return ()
        return self._zsolver.solve(v)

    def class_of(self, v) -> tuple:
        """Coordinates of the class of cycle ``v`` against ``reps``."""
        if self.dim == 0:
            if self._zsolver is not None and self._zsolver.solve(v) is None:
                raise PreconditionViolated("vector is not a cycle")
            return ()
        c = self._zsolver.solve(v)
        if c is None:
            raise PreconditionViolated("vector is not a cycle")
        return self._proj.apply(c)

    def is_boundary(self, v) -> bool:
        return not any(self.class_of(v))


class Homology:
    def __init__(self, X: DgModule, degrees: Sequence[int] | None = None):
        self.module = X
        self.by_degree = {}
        for z in (X.degrees() if degrees is None else degrees):
            self.by_degree[X.key(z)] = HomologyDegree(X, z)

    def __getitem__(self, z) -> HomologyDegree:
        k = self.module.key(z)
        if k not in self.by_degree:
            self.by_degree[k] = HomologyDegree(self.module, z)
        return self.by_degree[k]

    def dims(self) -> dict:
        return {z: h.dim for z, h in self.by_degree.items() if h.dim}

    def is_zero(self) -> bool:
        return not self.dims()


def homology(X: DgModule) -> Homology:
    return Homology(X)


def is_acyclic(X: DgModule) -> bool:
    return homology(X).is_zero()


def induced_on_homology(f: HomogeneousMap, z: int, HX: Homology = None, HY: Homology = None) -> Matrix:
    HX = HX or Homology(f.source, [z])
    HY = HY or Homology(f.target, [z])
    hx, hy = HX[z], HY[z]
    F = f.field
    rows = [hy.class_of(f.apply(z, r)) for r in hx.reps]
    return Matrix(F, hx.dim, hy.dim, rows)


def quasi_iso_evidence(f: HomogeneousMap, degrees: Sequence[int] | None = None) -> dict:
    """Per degree: ``(dim H(source), dim H(target), rank H(f))``."""
    HX, HY = Homology(f.source, []), Homology(f.target, [])
    out = {}
    for z in (all_degrees(f.source, f.target) if degrees is None else degrees):
        m = induced_on_homology(f, z, HX, HY)
        out[z] = (HX[z].dim, HY[z].dim, m.rank() if m.nrows and m.ncols else 0)
    return out


def is_quasi_iso(f: HomogeneousMap, degrees: Sequence[int] | None = None) -> bool:
    return all(a == b == r for a, b, r in quasi_iso_evidence(f, degrees).values())


# --- lifting through surjective quasi-isomorphisms --------------------------

class SurjectiveQisoLifter:
    """Lifts pairs ``(u, v)`` with ``u d = 0`` and ``u g = v d`` to ``w`` with
    ``w d = u`` and ``w g = v``, for a surjective quasi-isomorphism ``g``.

    Follows the constructive argument: a primitive ``y`` of ``u``, a cycle
    ``z`` correcting the homology class of ``y g - v``, and a lift ``x`` of the
    remaining boundary defect; then ``w = y - z + x d``.
    """

    def __init__(self, g: HomogeneousMap, check: bool = True):
        if check:
            if not is_chain_map(g):
                raise PreconditionViolated("g is not a chain map")
            if not is_epi(g):
                raise PreconditionViolated("g is not surjective in every degree")
            if not is_quasi_iso(g):
                raise PreconditionViolated("g is not a quasi-isomorphism")
        self.g = g
        self.U, self.V = g.source, g.target
        self._cache = {}
        self.HU = Homology(self.U, [])
        self.HV = Homology(self.V, [])

    def _dU(self, z):
        k = self.U.key(z)
        key = ("dU", k)
        if key not in self._cache:
            self._cache[key] = Solver(self.U.d.block(k))
        return self._cache[key]

    def _dV(self, z):
        k = self.V.key(z)
        key = ("dV", k)
        if key not in self._cache:
            self._cache[key] = Solver(self.V.d.block(k))
        return self._cache[key]

    def _g(self, z):
        k = self.U.key(z)
        key = ("g", k)
        if key not in self._cache:
            self._cache[key] = Solver(self.g.block(k))
        return self._cache[key]

    def _hg(self, z):
        k = self.U.key(z)
        key = ("Hg", k)
        if key not in self._cache:
            hu, hv = self.HU[z], self.HV[z]
            F = self.g.field
            rows = [hv.class_of(self.g.apply(z, r)) for r in hu.reps]
            self._cache[key] = Solver(Matrix(F, hu.dim, hv.dim, rows)) if hu.dim else None
        return self._cache[key]

    def lift(self, n: int, u, v):
        F = self.g.field
        U, V, g = self.U, self.V, self.g
        u = tuple(F(x) for x in u)
        v = tuple(F(x) for x in v)
        if len(u) != U.rank(n + 1) or len(v) != V.rank(n):
            raise PreconditionViolated("u or v has the wrong length")
        if any(U.d.apply(n + 1, u)):
            raise PreconditionViolated("u is not a cycle")
        if g.apply(n + 1, u) != V.d.apply(n, v):
            raise PreconditionViolated("u g != v d")
        y = self._dU(n).solve(u)
        if y is None:
            raise PreconditionViolated("u is not a boundary, so g is not a quasi-isomorphism")
        c = g.apply(n, y)
        cv = tuple(a - b for a, b in zip(c, v))
        cls = self.HV[n].class_of(cv)
        if any(cls):
            hs = self._hg(n)
            coeffs = hs.solve(cls) if hs is not None else None
            if coeffs is None:
                raise PreconditionViolated("H(g) is not surjective")
            z = [F.zero] * U.rank(n)
            for a, r in zip(coeffs, self.HU[n].reps):
                if a:
                    z = [p + a * q for p, q in zip(z, r)]
            z = tuple(z)
        else:
            z = tuple([F.zero] * U.rank(n))
        zg = g.apply(n, z)
        # e d = zg - c + v
        rhs = tuple(a - b + e for a, b, e in zip(zg, c, v))
        if any(rhs):
            e = self._dV(n - 1).solve(rhs)
            if e is None:
                raise PreconditionViolated("homology correction failed")
            x = self._g(n - 1).solve(e)
            if x is None:
                raise PreconditionViolated("g is not surjective")
            xd = U.d.apply(n - 1, x)
        else:
            xd = tuple([F.zero] * U.rank(n))
        w = tuple(a - b + c_ for a, b, c_ in zip(y, z, xd))
        if U.d.apply(n, w) != u or g.apply(n, w) != v:
            raise AssertionError("lift failed its defining equations")
        return w


def lift_through_surjective_qiso(g: HomogeneousMap, n: int, u, v, check: bool = True):
    return SurjectiveQisoLifter(g, check=check).lift(n, u, v)


# --- homotopies -------------------------------------------------------------

def find_homotopy(f: HomogeneousMap, g: HomogeneousMap):
    """A degree -1 map ``h`` with ``(h)d = f - g``, or None."""
    if f.degree != g.degree:
        raise PreconditionViolated("maps of different degrees")
    X, Y = f.source, f.target
    F = f.field
    r = f.degree
    target = f - g
    # unknowns: h_z[i][j] for z in X degrees (X^z -> Y^{z+r-1})
    unk = []
    uoff = {}
    for z in X.degrees():
        m = Y.rank(z + r - 1)
        uoff[z] = len(unk)
        for i in range(X.rank(z)):
            for j in range(m):
                unk.append((z, i, j))
    eqs = []
    eoff = {}
    for z in X.degrees():
        m = Y.rank(z + r)
        eoff[z] = len(eqs)
        for i in range(X.rank(z)):
            for k in range(m):
                eqs.append((z, i, k))
    if not unk:
        return HomogeneousMap.zero(X, Y, r - 1) if target.is_zero() else None
    c_dh = -1 if (r - 1) % 2 == 0 else 1  # (h)d = h d - (-1)^{deg h} d h
    rows = [[F.zero] * len(eqs) for _ in unk]
    for u, (z, i, j) in enumerate(unk):
        # h_z then d_Y at degree z+r-1
        dY = Y.d.block(z + r - 1)
        m_out = Y.rank(z + r)
        for k in range(m_out):
            c = dY.rows[j][k]
            if c:
                rows[u][eoff[z] + i * m_out + k] += c
        # d_X at degree z-1 then h_z: contributes to equation (z-1, i', j)
        zp = X.key(z - 1)
        if zp in eoff and X.rank(zp):
            dX = X.d.block(zp)
            m_eq = Y.rank(zp + r)
            for ip in range(X.rank(zp)):
                c = dX.rows[ip][i]
                if c:
                    rows[u][eoff[zp] + ip * m_eq + j] += c_dh * c
    A = Matrix(F, len(unk), len(eqs), rows)
    rhs = []
    for (z, i, k) in eqs:
        rhs.append(target.block(z).rows[i][k])
    sol = Solver(A).solve(rhs)
    if sol is None:
        return None
    blocks = {}
    for z in X.degrees():
        m = Y.rank(z + r - 1)
        n = X.rank(z)
        if n and m:
            o = uoff[z]
            blocks[z] = Matrix(F, n, m, [sol[o + i * m: o + (i + 1) * m] for i in range(n)])
    h = HomogeneousMap(X, Y, r - 1, blocks)
    if map_boundary(h) != target:
        raise AssertionError("homotopy solve produced a wrong answer")
    return h


# --- pushouts and colimits --------------------------------------------------

@dataclass
class Pushout:
    module: DgModule
    leg_b: HomogeneousMap
    leg_c: HomogeneousMap
    section: dict = dc_field(repr=False)
    summands: DirectSum = dc_field(repr=False, default=None)

    def mediate(self, u: HomogeneousMap, v: HomogeneousMap) -> HomogeneousMap:
        """The unique chain map ``P -> Z`` restricting to ``u`` on B and ``v`` on C."""
        Z = u.target
        out = {}
        for z in self.module.degrees():
            parts = [m.block(z) for m in (u, v) if m.source.rank(z)]
            if not parts or not Z.rank(z):
                continue
            stacked = Matrix.vstack(u.field, parts)
            out[z] = self.section[z] @ stacked
        m = HomogeneousMap(self.module, Z, 0, out)
        if (self.leg_b @ m) != u or (self.leg_c @ m) != v:
            raise PreconditionViolated("cocone does not commute with the span")
        return m


def pushout(phi: HomogeneousMap, psi: HomogeneousMap) -> Pushout:
    """Pushout of ``B <-φ- A -ψ-> C``: the cokernel of ``a -> (aφ, -aψ)``."""
    A, B, C = phi.source, phi.target, psi.target
    if not A.same_graded(psi.source):
        raise PreconditionViolated("span legs have different sources")
    F = phi.field
    ds = DirectSum([B, C])
    S = ds.module
    grid_d = [[B.d, None], [None, C.d]]
    dS = HomogeneousMap(S, S, 1, ds.block_blocks(grid_d, 1, ds))
    proj, sec, basis, index = {}, {}, {}, {}
    for z in S.degrees():
        a = A.rank(z)
        rows = []
        if a:
            top = phi.block(z)
            bot = -psi.block(z)
            parts = []
            if B.rank(z):
                parts.append(top)
            if C.rank(z):
                parts.append(bot)
            rows = Matrix.hstack(F, parts)
        else:
            rows = Matrix.zeros(F, 0, S.rank(z))
        cok = cokernel_data(rows)
        proj[z], sec[z] = cok.projection, cok.section
        basis[z] = [S.basis(z)[j] for j in cok.complement]
        index[z] = [S.index(z)[j] for j in cok.complement]
    P = GradedModule(F, basis, index)
    dP = {}
    for z in P.degrees():
        dz = sec[z] @ dS.block(z) @ proj[S.key(z + 1)] if S.rank(z + 1) else None
        if dz is not None:
            dP[z] = dz
    P = DgModule.on(P, dP)
    pi = HomogeneousMap(S, P, 0, {z: proj[z] for z in S.degrees()})
    leg_b = ds.inj(0) @ pi
    leg_c = ds.inj(1) @ pi
    leg_b = leg_b.with_ends(B, P)
    leg_c = leg_c.with_ends(C, P)
    if not (is_chain_map(leg_b) and is_chain_map(leg_c)):
        raise AssertionError("pushout legs are not chain maps")
    return Pushout(P, leg_b, leg_c, {z: sec[z] for z in P.degrees()}, ds)


@dataclass
class SequentialColimit:
    module: DgModule
    legs: list
    stabilized: bool


def sequential_colimit(start: DgModule, maps: Sequence[HomogeneousMap]) -> SequentialColimit:
    """Finite-stage stand-in for ``colim D_n``: the last object, the composite
    legs into it, and whether the last map was already an isomorphism."""
    objs = [start] + [m.target for m in maps]
    last = objs[-1]
    legs = []
    for i in range(len(objs)):
        leg = identity(objs[i])
        for m in maps[i:]:
            leg = leg @ m
        legs.append(leg)
    stabilized = True if not maps else is_iso(maps[-1])
    return SequentialColimit(last, legs, stabilized)
