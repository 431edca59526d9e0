"""Graded modules with labelled bases, homogeneous maps and the sign calculus.

Conventions (fixed once, used everywhere):

* maps act on the right and compose left to right: ``f @ g`` is "f, then g";
* ``M[a]`` has ``M[a]^z = M^{z+a}``; a basis label ``x`` of ``M`` becomes
  ``xσa`` in ``M[a]`` (``σ^a`` is the degree ``-a`` identity ``M -> M[a]``);
* ``f[a] = (-1)^{deg f * a} σ^{-a} f σ^a``;
* the Koszul rule for tensor products of maps is the right-operator one,
  ``(v⊗w)(f⊗g) = (-1)^{|w||f|} vf ⊗ wg``, which is what makes the unsigned
  identification ``(V⊗W)[a] = V⊗(W[a])`` graded natural.

A module over ``dg^S`` is a single module whose basis elements carry an
index tag in ``S``; morphisms must not mix tags.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .exactlin import Field, Matrix

DEFAULT_INDEX = "*"

_SIGMA = re.compile(r"^(.*)σ(-?\d+)$")


def shift_sign(r: int, a: int) -> int:
    return -1 if (r * a) % 2 else 1


def koszul_sign(m: int, l: int) -> int:
    return -1 if (m * l) % 2 else 1


def symmetry_sign(m: int, l: int) -> int:
    return -1 if (m * l) % 2 else 1


def shift_label(label: str, a: int) -> str:
    if a == 0:
        return label
    mo = _SIGMA.match(label)
    base, k = (mo.group(1), int(mo.group(2))) if mo else (label, 0)
    k += a
    return base if k == 0 else f"{base}σ{k}"


class GradedModule:
    """Degreewise finite free graded module.

    ``basis`` maps a degree to its ordered labels; ``index`` (optional) maps a
    degree to the tag in ``S`` of each basis element.
    """

    def __init__(self, field: Field, basis: Mapping[int, Sequence[str]],
                 index: Mapping[int, Sequence[str]] | None = None):
        self.field = field
        b, ix = {}, {}
        for z, labels in basis.items():
            labels = tuple(str(x) for x in labels)
            if not labels:
                continue
            k = field.norm(z)
            if k in b:
                raise ValueError(f"degree {z} given twice")
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {z}: {labels}")
            b[k] = labels
            tags = tuple(index[z]) if index is not None and z in index else (DEFAULT_INDEX,) * len(labels)
            if len(tags) != len(labels):
                raise ValueError(f"index tags do not match the basis in degree {z}")
            ix[k] = tags
        self._basis = dict(sorted(b.items()))
        self._index = dict(sorted(ix.items()))

    @classmethod
    def from_ranks(cls, field, ranks: Mapping[int, int], prefix="e", index=None):
        basis = {z: [f"{prefix}{z}_{i}" for i in range(n)] for z, n in ranks.items() if n}
        return cls(field, basis, index)

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    def key(self, z: int) -> int:
        return self.field.norm(z)

    def degrees(self) -> list[int]:
        return list(self._basis)

    def rank(self, z: int) -> int:
        return len(self._basis.get(self.key(z), ()))

    def basis(self, z: int) -> tuple:
        return self._basis.get(self.key(z), ())

    def index(self, z: int) -> tuple:
        return self._index.get(self.key(z), ())

    def indices(self) -> list[str]:
        return sorted({t for tags in self._index.values() for t in tags})

    def positions(self, z: int, x: str) -> list[int]:
        return [i for i, t in enumerate(self.index(z)) if t == x]

    @property
    def ranks(self) -> dict:
        return {z: len(v) for z, v in self._basis.items()}

    @property
    def dim(self) -> int:
        return sum(len(v) for v in self._basis.values())

    @property
    def window(self):
        if not self._basis:
            return None
        ks = list(self._basis)
        return (ks[0], ks[-1])

    def graded(self) -> "GradedModule":
        return self

    def same_graded(self, other) -> bool:
        return (self.field == other.field and self._basis == other._basis
                and self._index == other._index)

    def __eq__(self, other):
        if not isinstance(other, GradedModule) or isinstance(other, DgModule) != isinstance(self, DgModule):
            return NotImplemented
        return self.same_graded(other)

    def __hash__(self):
        return hash((tuple(self._basis.items()),))

    def __repr__(self):
        return f"GradedModule({self.ranks})"

    def component(self, x: str) -> "GradedModule":
        basis = {z: [l for l, t in zip(self._basis[z], self._index[z]) if t == x] for z in self._basis}
        return GradedModule(self.field, basis, {z: [x] * len(v) for z, v in basis.items()})

    def relabel(self, fn) -> "GradedModule":
        return GradedModule(self.field, {z: [fn(l) for l in v] for z, v in self._basis.items()},
                            self._index)

    def element(self, z: int, coords: Mapping[str, object]) -> tuple:
        """Row vector in degree ``z`` from a ``{label: coefficient}`` mapping."""
        F = self.field
        labels = self.basis(z)
        pos = {l: i for i, l in enumerate(labels)}
        v = [F.zero] * len(labels)
        for l, c in coords.items():
            v[pos[l]] = v[pos[l]] + F(c)
        return tuple(v)


def identity_basis_blocks(m: GradedModule) -> dict:
    return {z: Matrix.identity(m.field, m.rank(z)) for z in m.degrees()}


class HomogeneousMap:
    """Homogeneous map of degree ``degree``; ``block(z)`` is the matrix from the
    degree-``z`` part of the source to the degree-``z+degree`` part of the target."""

    def __init__(self, source: GradedModule, target: GradedModule, degree: int,
                 blocks: Mapping[int, Matrix] | None = None, check: bool = True):
        if source.field != target.field:
            raise ValueError("source and target are over different fields")
        self.source = source
        self.target = target
        self.degree = degree
        self.field = source.field
        stored = {}
        for z, mat in (blocks or {}).items():
            k = source.key(z)
            if check:
                shape = (source.rank(k), target.rank(k + degree))
                if mat.shape != shape:
                    raise ValueError(f"block at degree {z} has shape {mat.shape}, expected {shape}")
            if mat.nrows and mat.ncols and not mat.is_zero():
                if k in stored:
                    raise ValueError(f"degree {z} given twice")
                stored[k] = mat
        self._blocks = dict(sorted(stored.items()))

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {})

    @classmethod
    def identity(cls, m: GradedModule):
        return cls(m, m, 0, identity_basis_blocks(m))

    def block(self, z: int) -> Matrix:
        k = self.source.key(z)
        mat = self._blocks.get(k)
        if mat is None:
            return Matrix.zeros(self.field, self.source.rank(k), self.target.rank(k + self.degree))
        return mat

    @property
    def blocks(self) -> dict:
        return dict(self._blocks)

    def is_zero(self) -> bool:
        return not self._blocks

    def apply(self, z: int, v: Sequence) -> tuple:
        return self.block(z).apply(v)

    def _compatible(self, other):
        if not (self.source.same_graded(other.source) and self.target.same_graded(other.target)):
            raise ValueError("maps have different sources or targets")
        if self.degree != other.degree:
            raise ValueError("maps have different degrees")

    def __eq__(self, other):
        if not isinstance(other, HomogeneousMap):
            return NotImplemented
        return (self.degree == other.degree and self.source.same_graded(other.source)
                and self.target.same_graded(other.target) and self._blocks == other._blocks)

    def __hash__(self):
        return hash((self.degree, tuple(self._blocks.items())))

    def __add__(self, other):
        self._compatible(other)
        keys = set(self._blocks) | set(other._blocks)
        return HomogeneousMap(self.source, self.target, self.degree,
                              {z: self.block(z) + other.block(z) for z in keys})

    def __sub__(self, other):
        self._compatible(other)
        keys = set(self._blocks) | set(other._blocks)
        return HomogeneousMap(self.source, self.target, self.degree,
                              {z: self.block(z) - other.block(z) for z in keys})

    def __neg__(self):
        return HomogeneousMap(self.source, self.target, self.degree,
                              {z: -b for z, b in self._blocks.items()})

    def scale(self, c):
        return HomogeneousMap(self.source, self.target, self.degree,
                              {z: b.scale(c) for z, b in self._blocks.items()})

    def __matmul__(self, other: "HomogeneousMap") -> "HomogeneousMap":
        """Left-to-right composite: first ``self``, then ``other``."""
        if not self.target.same_graded(other.source):
            raise ValueError("composition target/source mismatch")
        out = {}
        for z, b in self._blocks.items():
            c = other._blocks.get(self.target.key(z + self.degree))
            if c is not None:
                out[z] = b @ c
        return HomogeneousMap(self.source, other.target, self.degree + other.degree, out)

    def with_ends(self, source=None, target=None) -> "HomogeneousMap":
        """Same matrices, reinterpreted between modules with identical graded structure."""
        s = self.source if source is None else source
        t = self.target if target is None else target
        if not (s.same_graded(self.source) and t.same_graded(self.target)):
            raise ValueError("with_ends needs identical graded structure")
        return HomogeneousMap(s, t, self.degree, self._blocks, check=False)

    def respects_indices(self) -> bool:
        tags = set(self.source.indices()) | set(self.target.indices())
        if len(tags) <= 1:
            return True
        for z, b in self._blocks.items():
            si = self.source.index(z)
            ti = self.target.index(z + self.degree)
            for i, row in enumerate(b.rows):
                for j, x in enumerate(row):
                    if x and si[i] != ti[j]:
                        return False
        return True

    def __repr__(self):
        return f"HomogeneousMap(deg={self.degree}, blocks={ {z: b.shape for z, b in self._blocks.items()} })"


class DgModule(GradedModule):
    """Graded module with a differential of degree +1 squaring to zero."""

    def __init__(self, field, basis, index=None, d_blocks: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        super().__init__(field, basis, index)
        self.d = HomogeneousMap(self, self, 1, d_blocks or {})
        if check:
            if not (self.d @ self.d).is_zero():
                raise ValueError("differential does not square to zero")
            if not self.d.respects_indices():
                raise ValueError("differential mixes index tags")

    @classmethod
    def on(cls, m: GradedModule, d_blocks=None, check=True) -> "DgModule":
        return cls(m.field, m._basis, m._index, d_blocks, check=check)

    @classmethod
    def trivial(cls, m: GradedModule) -> "DgModule":
        return cls.on(m, {})

    def graded(self) -> GradedModule:
        return GradedModule(self.field, self._basis, self._index)

    def __eq__(self, other):
        if not isinstance(other, DgModule):
            return NotImplemented
        return self.same_graded(other) and self.d._blocks == other.d._blocks

    def __hash__(self):
        return hash((tuple(self._basis.items()), tuple(self.d._blocks.items())))

    def __repr__(self):
        return f"DgModule({self.ranks})"

    def component(self, x):
        g = GradedModule.component(self, x)
        blocks = {}
        for z in self.degrees():
            rows = self.positions(z, x)
            cols = self.positions(z + 1, x)
            if rows and cols:
                blocks[z] = self.d.block(z).submatrix(rows, cols)
        return DgModule.on(g, blocks)

    def relabel(self, fn):
        return DgModule(self.field, {z: [fn(l) for l in v] for z, v in self._basis.items()},
                        self._index, self.d._blocks, check=False)


def as_graded(m: GradedModule) -> GradedModule:
    return m.graded()


# --- shifts -----------------------------------------------------------------

def shift_module(m: GradedModule, a: int) -> GradedModule:
    """``M[a]``; for a dg-module the differential becomes ``d[a]``."""
    if a == 0:
        return m
    basis = {z - a: [shift_label(l, a) for l in m.basis(z)] for z in m.degrees()}
    index = {z - a: m.index(z) for z in m.degrees()}
    g = GradedModule(m.field, basis, index)
    if isinstance(m, DgModule):
        sign = shift_sign(1, a)
        d = {z - a: b.scale(sign) for z, b in m.d.blocks.items()}
        return DgModule.on(g, d, check=False)
    return g


def shift_map(f: HomogeneousMap, a: int, source=None, target=None) -> HomogeneousMap:
    """``f[a] = (-1)^{deg f * a} σ^{-a} f σ^a : V[a] -> X[a]``."""
    s = shift_module(f.source, a) if source is None else source
    t = shift_module(f.target, a) if target is None else target
    sign = shift_sign(f.degree, a)
    return HomogeneousMap(s, t, f.degree, {z - a: b.scale(sign) for z, b in f.blocks.items()})


def sigma(m: GradedModule, a: int = 1, target=None) -> HomogeneousMap:
    """The degree ``-a`` identity ``σ^a : M -> M[a]``."""
    t = shift_module(m, a) if target is None else target
    return HomogeneousMap(m, t, -a, identity_basis_blocks(m))


def sigma_inv(m: GradedModule, a: int = 1, source=None) -> HomogeneousMap:
    """``σ^{-a} : M[a] -> M`` of degree ``a``."""
    s = shift_module(m, a) if source is None else source
    return HomogeneousMap(s, m, a, {z - a: Matrix.identity(m.field, m.rank(z)) for z in m.degrees()})


# --- direct sums ------------------------------------------------------------

class DirectSum:
    """Direct sum with its injections and projections.

    Summand order is the order given; within each degree the basis of summand
    0 comes first.
    """

    def __init__(self, summands: Sequence[GradedModule], module: GradedModule | None = None):
        self.summands = list(summands)
        if not self.summands:
            raise ValueError("need at least one summand")
        F = self.summands[0].field
        keys = sorted({z for s in self.summands for z in s.degrees()})
        basis, index = {}, {}
        self.offsets = {}
        for z in keys:
            labels, tags, off = [], [], []
            seen = set()
            for s in self.summands:
                off.append(len(labels))
                for l in s.basis(z):
                    # clashing labels get primes so the sum keeps unique labels
                    while l in seen:
                        l = l + "'"
                    seen.add(l)
                    labels.append(l)
                tags.extend(s.index(z))
            basis[z], index[z], self.offsets[z] = labels, tags, off
        self.module = module if module is not None else GradedModule(F, basis, index)
        self.field = F

    def offset(self, z, i):
        k = self.module.key(z)
        return self.offsets[k][i] if k in self.offsets else 0

    def inj(self, i: int) -> HomogeneousMap:
        s = self.summands[i]
        F = self.field
        blocks = {}
        for z in s.degrees():
            n, N, o = s.rank(z), self.module.rank(z), self.offset(z, i)
            rows = [[F.one if j == o + r else F.zero for j in range(N)] for r in range(n)]
            blocks[z] = Matrix(F, n, N, rows)
        return HomogeneousMap(s, self.module, 0, blocks)

    def proj(self, i: int) -> HomogeneousMap:
        s = self.summands[i]
        F = self.field
        blocks = {}
        for z in s.degrees():
            n, N, o = s.rank(z), self.module.rank(z), self.offset(z, i)
            rows = [[F.one if r == o + c else F.zero for c in range(n)] for r in range(N)]
            blocks[z] = Matrix(F, N, n, rows)
        return HomogeneousMap(self.module, s, 0, blocks)

    def block_blocks(self, grid, degree: int, target: "DirectSum") -> dict:
        """Per-degree matrices of the map whose (i, j) component is ``grid[i][j]``
        (a HomogeneousMap from summand i to target summand j, or None)."""
        F = self.field
        out = {}
        for z in self.module.degrees():
            rows = []
            for i, s in enumerate(self.summands):
                n = s.rank(z)
                if not n:
                    continue
                parts = []
                for j, t in enumerate(target.summands):
                    m = t.rank(z + degree)
                    if not m:
                        continue
                    g = grid[i][j]
                    parts.append(g.block(z) if g is not None else Matrix.zeros(F, n, m))
                if parts:
                    rows.append(Matrix.hstack(F, parts))
            if rows and target.module.rank(z + degree):
                out[z] = Matrix.vstack(F, rows)
        return out


def direct_sum(*mods: GradedModule) -> DirectSum:
    return DirectSum(mods)


def block_map(src: DirectSum, tgt: DirectSum, grid, degree: int = 0,
              source=None, target=None) -> HomogeneousMap:
    s = src.module if source is None else source
    t = tgt.module if target is None else target
    return HomogeneousMap(s, t, degree, src.block_blocks(grid, degree, tgt))


# --- tensor products --------------------------------------------------------

def _pairs(v, w, i, j):
    vi, wj = v.index(i), w.index(j)
    return [(a, b) for a in range(len(vi)) for b in range(len(wj)) if vi[a] == wj[b]]


def tensor(v: GradedModule, w: GradedModule) -> GradedModule:
    if v.field != w.field:
        raise ValueError("tensor factors are over different fields")
    F = v.field
    degs = sorted({F.norm(i + j) for i in v.degrees() for j in w.degrees()})
    basis, index = {}, {}
    for z in degs:
        labels, tags = [], []
        for i in v.degrees():
            j = F.norm(z - i)
            vb, wb = v.basis(i), w.basis(j)
            for a, b in _pairs(v, w, i, j):
                labels.append(f"({vb[a]}⊗{wb[b]})")
                tags.append(v.index(i)[a])
        basis[z], index[z] = labels, tags
    return GradedModule(F, basis, index)


def _tensor_positions(v, w, z):
    """Map ``(i, a, b) -> position`` in ``(V⊗W)^z``."""
    F = v.field
    pos, n = {}, 0
    for i in v.degrees():
        j = F.norm(z - i)
        for a, b in _pairs(v, w, i, j):
            pos[(i, a, b)] = n
            n += 1
    return pos, n


def tensor_map(f: HomogeneousMap, g: HomogeneousMap) -> HomogeneousMap:
    """``f⊗g`` with ``(v⊗w)(f⊗g) = (-1)^{|w| deg f} vf⊗wg``."""
    V, W, X, Y = f.source, g.source, f.target, g.target
    src, tgt = tensor(V, W), tensor(X, Y)
    F = f.field
    r = f.degree + g.degree
    blocks = {}
    for z in src.degrees():
        spos, sn = _tensor_positions(V, W, z)
        tpos, tn = _tensor_positions(X, Y, z + r)
        rows = [[F.zero] * tn for _ in range(sn)]
        for (i, a, b), p in spos.items():
            j = F.norm(z - i)
            sign = koszul_sign(j, f.degree)
            fa = f.block(i).rows[a] if f.block(i).nrows else ()
            gb = g.block(j).rows[b] if g.block(j).nrows else ()
            ti = F.norm(i + f.degree)
            for c, x in enumerate(fa):
                if not x:
                    continue
                for e, y in enumerate(gb):
                    if y:
                        q = tpos.get((ti, c, e))
                        if q is None:
                            raise ValueError("tensor map mixes index tags")
                        rows[p][q] = rows[p][q] + sign * x * y
        if sn and tn:
            blocks[z] = Matrix(F, sn, tn, rows)
    return HomogeneousMap(src, tgt, r, blocks)


def symmetry(v: GradedModule, w: GradedModule) -> HomogeneousMap:
    """``c(x⊗y) = (-1)^{|x||y|} y⊗x``."""
    src, tgt = tensor(v, w), tensor(w, v)
    F = v.field
    blocks = {}
    for z in src.degrees():
        spos, sn = _tensor_positions(v, w, z)
        tpos, tn = _tensor_positions(w, v, z)
        rows = [[F.zero] * tn for _ in range(sn)]
        for (i, a, b), p in spos.items():
            j = F.norm(z - i)
            rows[p][tpos[(j, b, a)]] = F(symmetry_sign(i, j))
        blocks[z] = Matrix(F, sn, tn, rows)
    return HomogeneousMap(src, tgt, 0, blocks)


def shift_absorb(v: GradedModule, w: GradedModule, a: int):
    """Degree-0 isomorphisms out of ``(V⊗W)[a]``.

    Returns ``(left, right)`` where ``left: (V⊗W)[a] -> V[a]⊗W`` is
    ``(v⊗w)σ^a -> (-1)^{|w|a} vσ^a⊗w`` and ``right: (V⊗W)[a] -> V⊗W[a]`` is
    the unsigned ``(v⊗w)σ^a -> v⊗wσ^a``.
    """
    F = v.field
    src = shift_module(tensor(v, w), a)
    va, wa = shift_module(v, a), shift_module(w, a)
    lt, rt = tensor(va, w), tensor(v, wa)
    left, right = {}, {}
    for z in src.degrees():
        spos, sn = _tensor_positions(v, w, z + a)
        lpos, ln = _tensor_positions(va, w, z)
        rpos, rn = _tensor_positions(v, wa, z)
        L = [[F.zero] * ln for _ in range(sn)]
        R = [[F.zero] * rn for _ in range(sn)]
        for (i, p, q), s in spos.items():
            j = F.norm(z + a - i)
            L[s][lpos[(F.norm(i - a), p, q)]] = F(koszul_sign(j, a))
            R[s][rpos[(i, p, q)]] = F.one
        left[z] = Matrix(F, sn, ln, L)
        right[z] = Matrix(F, sn, rn, R)
    return HomogeneousMap(src, lt, 0, left), HomogeneousMap(src, rt, 0, right)


def unit_module(field, degree: int = 0, label: str = "1", index: str = DEFAULT_INDEX) -> GradedModule:
    """The ground field placed in a single degree."""
    return GradedModule(field, {degree: [label]}, {degree: [index]})


def row_vectors_to_module(field, vectors: Mapping[int, Sequence], labels: Mapping[int, Sequence[str]],
                          index: Mapping[int, Sequence[str]] | None = None) -> GradedModule:
    return GradedModule(field, {z: labels[z] for z in vectors}, index)


def map_from_rows(source: GradedModule, target: GradedModule, degree: int,
                  rows: Mapping[int, Sequence[Sequence]]) -> HomogeneousMap:
    F = source.field
    blocks = {}
    for z, rs in rows.items():
        n, m = source.rank(z), target.rank(z + degree)
        if n and m:
            blocks[z] = Matrix(F, n, m, rs)
    return HomogeneousMap(source, target, degree, blocks)


def all_degrees(*mods: GradedModule) -> list[int]:
    out = set()
    for m in mods:
        out.update(m.degrees())
    return sorted(out)


def iter_basis(m: GradedModule) -> Iterable[tuple[int, int, str]]:
    for z in m.degrees():
        for i, l in enumerate(m.basis(z)):
            yield z, i, l


def component_map(f: HomogeneousMap, x: str) -> HomogeneousMap:
    """Restriction of an index-respecting map to the index-``x`` components."""
    S, T = f.source.component(x), f.target.component(x)
    blocks = {}
    for z in f.source.degrees():
        rows = f.source.positions(z, x)
        cols = f.target.positions(z + f.degree, x)
        if rows and cols:
            blocks[z] = f.block(z).submatrix(rows, cols)
    return HomogeneousMap(S, T, f.degree, blocks)
