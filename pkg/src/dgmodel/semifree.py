"""Semifree dg-algebras: the tensor-algebra instance of the adjunction.

``F M`` is the free associative algebra on a basis of ``M`` and ``U`` forgets
to the underlying complex.  Generators live in degrees >= 1, so each degree
holds finitely many words; ``U`` is computed on a window ``[lo, hi]`` and the
differential is cut off at ``hi``, which leaves homology exact on
``[lo, hi - 1]``.

Polynomials are dicts ``{word: coefficient}`` with words tuples of generator
labels.  The differential is a derivation for the right-operator rule
``(xy)d = (-1)^{|y|} (xd) y + x (yd)``.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from . import dgcore
from .adjunction import Adjunction, Attachment, Coproduct, WindowTooSmall
from .dgcore import ConeBundle, PreconditionViolated
from .exactlin import Field, Matrix, kernel_basis
from .graded import DEFAULT_INDEX, DgModule, GradedModule, HomogeneousMap

SEP = "·"


def word_label(w) -> str:
    return SEP.join(w) if w else "1"


def _clean(p: dict) -> dict:
    return {w: c for w, c in p.items() if c}


def poly_add(p: dict, q: dict, c=1) -> dict:
    out = dict(p)
    for w, x in q.items():
        out[w] = out[w] + c * x if w in out else c * x
    return _clean(out)


def poly_mul(p: dict, q: dict) -> dict:
    out = {}
    for w1, a in p.items():
        for w2, b in q.items():
            w = w1 + w2
            out[w] = out[w] + a * b if w in out else a * b
    return _clean(out)


class SemifreeAlgebra:
    """Free graded algebra on ``generators`` with a derivation differential."""

    def __init__(self, field: Field, generators: Sequence[tuple[str, int]],
                 differential: Mapping[str, Mapping] | None = None, check: bool = True):
        if field.period is not None:
            raise ValueError("the tensor instance needs an ungraded coefficient field")
        self.field = field
        self.gens = tuple(str(g) for g, _ in generators)
        self.deg = {str(g): int(z) for g, z in generators}
        if len(set(self.gens)) != len(self.gens):
            raise ValueError("generator labels must be distinct")
        for g in self.gens:
            if SEP in g or g == "1":
                raise ValueError(f"bad generator label {g!r}")
            if self.deg[g] < 1:
                raise ValueError(f"generator {g} has degree {self.deg[g]} < 1")
        self.order = {g: i for i, g in enumerate(self.gens)}
        diff = differential or {}
        self.diff = {}
        for g in self.gens:
            p = {tuple(w): field(c) for w, c in diff.get(g, {}).items()}
            p = _clean(p)
            for w in p:
                if any(x not in self.deg for x in w):
                    raise ValueError(f"d({g}) uses an unknown generator")
                if self.word_degree(w) != self.deg[g] + 1:
                    raise ValueError(f"d({g}) is not homogeneous of degree {self.deg[g] + 1}")
            self.diff[g] = p
        self._words = {}
        self._pos = {}
        self._U = {}
        if check:
            for g in self.gens:
                if self.d_poly(self.diff[g]):
                    raise ValueError(f"d^2 is not zero on generator {g}")

    # words and polynomials
    def word_degree(self, w) -> int:
        return sum(self.deg[x] for x in w)

    def words(self, z: int) -> list:
        """All words of total degree ``z`` in generator order."""
        if z in self._words:
            return self._words[z]
        if z < 0:
            out = []
        elif z == 0:
            out = [()]
        else:
            out = []
            for g in self.gens:
                k = self.deg[g]
                if k <= z:
                    out.extend((g,) + rest for rest in self.words(z - k))
        self._words[z] = out
        return out

    def d_word(self, w) -> dict:
        F = self.field
        out = {}
        tail = 0
        for i in range(len(w) - 1, -1, -1):
            sign = -1 if tail % 2 else 1
            for v, c in self.diff[w[i]].items():
                nw = w[:i] + v + w[i + 1:]
                out[nw] = out[nw] + sign * c if nw in out else F(sign) * c
            tail += self.deg[w[i]]
        return _clean(out)

    def d_poly(self, p: dict) -> dict:
        out = {}
        for w, c in p.items():
            out = poly_add(out, self.d_word(w), c)
        return out

    def poly_degree(self, p: dict):
        ds = {self.word_degree(w) for w in p}
        if len(ds) > 1:
            raise ValueError("polynomial is not homogeneous")
        return ds.pop() if ds else None

    def coords(self, p: dict, z: int) -> tuple:
        pos = self._pos.get(z)
        if pos is None:
            pos = self._pos[z] = {w: i for i, w in enumerate(self.words(z))}
        v = [self.field.zero] * len(pos)
        for w, c in p.items():
            if self.word_degree(w) != z:
                raise ValueError("polynomial has the wrong degree")
            v[pos[w]] = c
        return tuple(v)

    def from_coords(self, z: int, v) -> dict:
        return _clean({w: c for w, c in zip(self.words(z), v)})

    def U(self, lo: int, hi: int) -> DgModule:
        """Underlying complex on degrees ``[lo, hi]``; d is cut off at ``hi``."""
        key = (lo, hi)
        if key in self._U:
            return self._U[key]
        F = self.field
        basis = {z: [word_label(w) for w in self.words(z)] for z in range(max(lo, 0), hi + 1)}
        blocks = {}
        for z in range(max(lo, 0), hi):
            src, tgt = self.words(z), self.words(z + 1)
            if src and tgt:
                rows = [self.coords(self.d_word(w), z + 1) for w in src]
                blocks[z] = Matrix(F, len(src), len(tgt), rows)
        m = DgModule(F, basis, None, blocks)
        self._U[key] = m
        return m

    def linear_module(self) -> DgModule:
        """The complex spanned by the generators, when every ``d(g)`` is linear."""
        F = self.field
        basis = {}
        for g in self.gens:
            basis.setdefault(self.deg[g], []).append(g)
        blocks = {}
        for z, gs in basis.items():
            tgt = basis.get(z + 1, [])
            rows = []
            for g in gs:
                row = [F.zero] * len(tgt)
                for w, c in self.diff[g].items():
                    if len(w) != 1:
                        raise ValueError("differential is not linear on generators")
                    row[tgt.index(w[0])] = c
                rows.append(row)
            if gs and tgt:
                blocks[z] = Matrix(F, len(gs), len(tgt), rows)
        return DgModule(F, basis, None, blocks)

    def __eq__(self, other):
        if not isinstance(other, SemifreeAlgebra):
            return NotImplemented
        return (self.field == other.field and self.gens == other.gens and self.deg == other.deg
                and self.diff == other.diff)

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return f"SemifreeAlgebra({[(g, self.deg[g]) for g in self.gens]})"


class AlgebraMap:
    """Morphism of semifree algebras, fixed by the images of generators."""

    def __init__(self, source: SemifreeAlgebra, target: SemifreeAlgebra,
                 images: Mapping[str, Mapping], check: bool = True):
        self.source, self.target = source, target
        F = target.field
        self.images = {g: _clean({tuple(w): F(c) for w, c in images.get(g, {}).items()})
                       for g in source.gens}
        if check:
            for g, p in self.images.items():
                if p and target.poly_degree(p) != source.deg[g]:
                    raise PreconditionViolated(f"image of {g} has the wrong degree")
                if target.d_poly(p) != self.apply_poly(source.diff[g]):
                    raise PreconditionViolated(f"map does not commute with d on {g}")

    def apply_word(self, w) -> dict:
        out = {(): self.target.field.one}
        for x in w:
            out = poly_mul(out, self.images[x])
            if not out:
                break
        return out

    def apply_poly(self, p: dict) -> dict:
        out = {}
        for w, c in p.items():
            out = poly_add(out, self.apply_word(w), c)
        return out

    def then(self, other: "AlgebraMap") -> "AlgebraMap":
        return AlgebraMap(self.source, other.target,
                          {g: other.apply_poly(p) for g, p in self.images.items()}, check=False)

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.images == other.images

    def __hash__(self):
        return hash(tuple(self.images))

    def __repr__(self):
        return f"AlgebraMap({self.images})"


def _fresh(label: str, taken) -> str:
    while label in taken:
        label += "'"
    return label


class SemifreeInstance(Adjunction):
    """``F`` = tensor algebra, ``U`` = underlying complex on ``[lo, hi]``."""

    name = "tensor"

    def __init__(self, field: Field, window: tuple[int, int] = (0, 6)):
        lo, hi = window
        if hi < lo:
            raise ValueError("empty window")
        self.field = field
        self.lo, self.hi = lo, hi

    @property
    def window(self):
        return (self.lo, self.hi)

    def with_window(self, lo, hi) -> "SemifreeInstance":
        return SemifreeInstance(self.field, (lo, hi))

    def trusted_degrees(self):
        return (self.lo, self.hi - 1)

    def check_window(self, M: GradedModule):
        if M.indices() not in ([], [DEFAULT_INDEX]) and len(M.indices()) > 1:
            raise PreconditionViolated("the tensor instance uses a single index")
        for z in M.degrees():
            if z < 1:
                raise PreconditionViolated(f"generators must have degree >= 1 (got {z})")
            if z > self.hi:
                raise WindowTooSmall(f"degree {z} lies above the window top {self.hi}")

    # functors
    def U_ob(self, A: SemifreeAlgebra) -> DgModule:
        return A.U(self.lo, self.hi)

    def U_mor(self, f: AlgebraMap) -> HomogeneousMap:
        S, T = self.U_ob(f.source), self.U_ob(f.target)
        F = self.field
        blocks = {}
        for z in S.degrees():
            ws = f.source.words(z)
            if ws and T.rank(z):
                blocks[z] = Matrix(F, len(ws), T.rank(z),
                                   [f.target.coords(f.apply_word(w), z) for w in ws])
        return HomogeneousMap(S, T, 0, blocks)

    def F_ob(self, M: DgModule) -> SemifreeAlgebra:
        self.check_window(M)
        gens, diff = [], {}
        for z in M.degrees():
            for i, g in enumerate(M.basis(z)):
                gens.append((g, z))
                row = M.d.block(z).rows[i] if M.rank(z + 1) else ()
                diff[g] = {(h,): c for h, c in zip(M.basis(z + 1), row) if c}
        return SemifreeAlgebra(M.field, gens, diff)

    def F_mor(self, x: HomogeneousMap) -> AlgebraMap:
        A, B = self.F_ob(x.source), self.F_ob(x.target)
        images = {}
        for z in x.source.degrees():
            for i, g in enumerate(x.source.basis(z)):
                row = x.block(z).rows[i] if x.target.rank(z) else ()
                images[g] = {(h,): c for h, c in zip(x.target.basis(z), row) if c}
        return AlgebraMap(A, B, images)

    def unit(self, M: DgModule) -> HomogeneousMap:
        FM = self.F_ob(M)
        UFM = self.U_ob(FM)
        blocks = {}
        for z in M.degrees():
            rows = [FM.coords({(g,): FM.field.one}, z) for g in M.basis(z)]
            blocks[z] = Matrix(self.field, len(rows), UFM.rank(z), rows)
        return HomogeneousMap(M, UFM, 0, blocks)

    def counit_images(self, A: SemifreeAlgebra) -> dict:
        """``ε_A`` on the generators of ``F(U A)``: the generator named by a
        word goes to that word.  Degree-0 words are not generators of ``F``."""
        return {word_label(w): {w: self.field.one}
                for z in range(max(self.lo, 1), self.hi + 1) for w in A.words(z)}

    def triangle_identities(self, M: DgModule, A: SemifreeAlgebra) -> bool:
        """``Fη · ε = 1`` on generators of ``F M`` and ``η · Uε = 1`` on ``U A``
        in degrees >= 1 of the window."""
        FM = self.F_ob(M)
        eps_FM = self.counit_images(FM)
        # F(η) sends g to the generator named by the one-letter word (g,)
        for g in FM.gens:
            if eps_FM[word_label((g,))] != {(g,): self.field.one}:
                return False
        eps_A = self.counit_images(A)
        for z in range(max(self.lo, 1), self.hi + 1):
            for w in A.words(z):
                if eps_A[word_label(w)] != {w: self.field.one}:
                    return False
        return True

    # morphisms
    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def identity(self, A):
        return AlgebraMap(A, A, {g: {(g,): 1} for g in A.gens}, check=False)

    def compose(self, f, g):
        if f.target != g.source:
            raise ValueError("composition target/source mismatch")
        return f.then(g)

    def transpose(self, l: AlgebraMap, M: DgModule | None = None) -> HomogeneousMap:
        M = l.source.linear_module() if M is None else M
        UA = self.U_ob(l.target)
        blocks = {}
        for z in M.degrees():
            if z > self.hi:
                raise WindowTooSmall(f"degree {z} lies above the window")
            rows = [l.target.coords(l.images[g], z) for g in M.basis(z)]
            if UA.rank(z):
                blocks[z] = Matrix(self.field, len(rows), UA.rank(z), rows)
        return HomogeneousMap(M, UA, 0, blocks)

    def cotranspose(self, x: HomogeneousMap, A: SemifreeAlgebra = None) -> AlgebraMap:
        if A is None:
            raise ValueError("the tensor instance needs the target algebra")
        FM = self.F_ob(x.source)
        images = {}
        for z in x.source.degrees():
            for i, g in enumerate(x.source.basis(z)):
                images[g] = A.from_coords(z, x.block(z).rows[i]) if x.target.rank(z) else {}
        return AlgebraMap(FM, A, images)

    # colimits
    def coproduct(self, A: SemifreeAlgebra, B: SemifreeAlgebra) -> Coproduct:
        taken = set(A.gens)
        ren = {}
        for g in B.gens:
            ren[g] = _fresh(g, taken)
            taken.add(ren[g])
        gens = [(g, A.deg[g]) for g in A.gens] + [(ren[g], B.deg[g]) for g in B.gens]
        diff = dict(A.diff)
        for g in B.gens:
            diff[ren[g]] = {tuple(ren[x] for x in w): c for w, c in B.diff[g].items()}
        S = SemifreeAlgebra(self.field, gens, diff)
        inj1 = AlgebraMap(A, S, {g: {(g,): 1} for g in A.gens})
        inj2 = AlgebraMap(B, S, {g: {(ren[g],): 1} for g in B.gens})
        return Coproduct(S, inj1, inj2, ren)

    def copair(self, cp: Coproduct, l1: AlgebraMap, l2: AlgebraMap) -> AlgebraMap:
        images = dict(l1.images)
        for g, r in cp.data.items():
            images[r] = l2.images[g]
        return AlgebraMap(cp.obj, l1.target, images)

    def attach(self, A: SemifreeAlgebra, cone: ConeBundle) -> Attachment:
        M1 = cone.shifted
        self.check_window(M1)
        for z in cone.alpha.source.degrees():
            if z > self.hi - 1:
                raise WindowTooSmall(f"M has degree {z}; the window must reach {z + 1}")
        C = cone.module
        UA = self.U_ob(A)
        if not cone.inj2.source.same_graded(UA):
            raise PreconditionViolated("the cone is not built on U A")
        taken = set(A.gens)
        new = {}
        for z in M1.degrees():
            for b in M1.basis(z):
                new[(z, b)] = _fresh(b, taken)
                taken.add(new[(z, b)])
        gens = [(g, A.deg[g]) for g in A.gens] + [(new[k], k[0]) for k in new]
        diff = dict(A.diff)
        ds = cone.summands
        for z in M1.degrees():
            row_block = C.d.block(z)
            off_m1, off_ua = ds.offset(z + 1, 0), ds.offset(z + 1, 1)
            for i, b in enumerate(M1.basis(z)):
                row = row_block.rows[i] if C.rank(z + 1) else ()
                p = {}
                for j, b2 in enumerate(M1.basis(z + 1)):
                    c = row[off_m1 + j]
                    if c:
                        p[(new[(z + 1, b2)],)] = c
                for j, w in enumerate(A.words(z + 1) if UA.rank(z + 1) else ()):
                    c = row[off_ua + j]
                    if c:
                        p[w] = c
                diff[new[(z, b)]] = p
        D = SemifreeAlgebra(self.field, gens, diff)
        jbar = AlgebraMap(A, D, {g: {(g,): 1} for g in A.gens})
        UD = self.U_ob(D)
        blocks = {}
        for z in C.degrees():
            rows = [D.coords({(new[(z, b)],): 1}, z) for b in M1.basis(z)]
            rows += [D.coords({w: 1}, z) for w in (A.words(z) if UA.rank(z) else ())]
            if rows and UD.rank(z):
                blocks[z] = Matrix(self.field, len(rows), UD.rank(z), rows)
        g_t = HomogeneousMap(C, UD, 0, blocks)
        if not dgcore.is_chain_map(g_t):
            raise AssertionError("attached generators do not give a chain map")
        return Attachment(D, jbar, g_t, cone, new)

    def mediate(self, att: Attachment, f: AlgebraMap, x: HomogeneousMap) -> AlgebraMap:
        D = att.D
        B = f.target
        images = dict(f.images)
        M1 = att.cone.shifted
        ds = att.cone.summands
        for (z, b), g in att.data.items():
            i = M1.basis(z).index(b) + ds.offset(z, 0)
            images[g] = B.from_coords(z, x.block(z).rows[i]) if x.target.rank(z) else {}
        try:
            k = AlgebraMap(D, B, images)
        except PreconditionViolated as e:
            raise PreconditionViolated(f"cocone does not commute: {e}") from None
        if att.jbar.then(k) != f or att.g_t @ self.U_mor(k) != x:
            raise PreconditionViolated("cocone does not commute with the span")
        return k

    def invert(self, f: AlgebraMap) -> AlgebraMap:
        inv = {}
        for g, p in f.images.items():
            if len(p) != 1:
                raise PreconditionViolated("only generator permutations are inverted")
            (w, c), = p.items()
            if len(w) != 1 or w[0] in inv:
                raise PreconditionViolated("only generator permutations are inverted")
            inv[w[0]] = {(g,): 1 / c}
        if set(inv) != set(f.target.gens):
            raise PreconditionViolated("not bijective on generators")
        return AlgebraMap(f.target, f.source, inv)


def random_semifree(field: Field, rng: random.Random, n_gens: int = 3,
                    degrees: Sequence[int] = (1, 2, 3), prefix: str = "a",
                    degree_list: Sequence[int] | None = None) -> SemifreeAlgebra:
    """Generators added one at a time; each differential is a random cycle of
    the subalgebra on the earlier generators.  ``degree_list`` fixes the
    generator degrees instead of drawing them from ``degrees``."""
    gens, diff = [], {}
    if degree_list is not None:
        n_gens = len(degree_list)
    for i in range(n_gens):
        z = degree_list[i] if degree_list is not None else rng.choice(list(degrees))
        sub = SemifreeAlgebra(field, gens, diff)
        p = {}
        if gens:
            X = sub.U(0, z + 2)
            cyc = kernel_basis(X.d.block(z + 1))
            v = [field.zero] * X.rank(z + 1)
            for c in cyc:
                a = field.random(rng)
                v = [x + a * y for x, y in zip(v, c)]
            p = sub.from_coords(z + 1, v)
        label = f"{prefix}{i}"
        gens.append((label, z))
        diff[label] = p
    return SemifreeAlgebra(field, gens, diff)
