"""Seeded random dg-modules and chain maps with known ground truth.

Every complex over a field splits as a sum of shifted units and cones of
identities, so generating in that form and conjugating by a random
automorphism yields arbitrary-looking complexes whose homology is known.
All randomness flows through :class:`random.Random` (Mersenne Twister).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field, replace

from ..adjoin import cycle_module
from ..dgcore import PreconditionViolated, is_chain_map
from ..exactlin import Field, Matrix, field_from_tag, kernel_basis, random_invertible, rref
from ..graded import DEFAULT_INDEX, DgModule, DirectSum, GradedModule, HomogeneousMap

FIELD_NAMES = {"Q": "Q", "F2": {"Fp": 2}, "F5": {"Fp": 5}, "graded": {"graded": {"p": 0, "deg_u": 2}}}


def field_named(name) -> Field:
    """``Q``, ``F<p>``, ``graded`` or a JSON field tag."""
    if isinstance(name, str) and name in FIELD_NAMES:
        return field_from_tag(FIELD_NAMES[name])
    return field_from_tag(name)


def trial_rng(*parts) -> random.Random:
    """Independent generator for one trial; string seeds hash portably."""
    return random.Random(":".join(str(p) for p in parts))


@dataclass(frozen=True)
class InstanceSpec:
    seed: int = 0
    field: object = "Q"
    window: tuple = (-3, 3)
    max_rank: int = 4
    units: int = 2
    cones: int = 2
    indices: tuple = (DEFAULT_INDEX,)

    def field_obj(self) -> Field:
        return field_named(self.field)

    def with_(self, **kw) -> "InstanceSpec":
        return replace(self, **kw)


@dataclass
class GeneratedDg:
    module: DgModule
    units: dict = dc_field(default_factory=dict)  # {index: {degree key: multiplicity}}
    cones: dict = dc_field(default_factory=dict)  # {index: {top degree key: multiplicity}}

    def homology_dims(self) -> dict:
        out = {}
        for per in self.units.values():
            for z, n in per.items():
                out[z] = out.get(z, 0) + n
        return {z: n for z, n in sorted(out.items()) if n}


def _rng_for(spec: InstanceSpec, rng):
    return rng if rng is not None else random.Random(spec.seed)


def index_automorphism(M: GradedModule, z: int, rng: random.Random) -> Matrix:
    """Random invertible matrix on ``M^z`` that never mixes index tags."""
    F = M.field
    n = M.rank(z)
    rows = [[F.zero] * n for _ in range(n)]
    for x in M.indices():
        pos = M.positions(z, x)
        if not pos:
            continue
        P = random_invertible(F, len(pos), rng)
        for a, i in enumerate(pos):
            for b, j in enumerate(pos):
                rows[i][j] = P.rows[a][b]
    return Matrix(F, n, n, rows)


def random_basis_change(X: DgModule, rng: random.Random, labels=None):
    """``(X', φ)`` with ``φ: X' -> X`` a chain isomorphism given by random
    index-respecting matrices; ``d' = P_z d P_{z+1}^{-1}``."""
    F = X.field
    P = {z: index_automorphism(X, z, rng) for z in X.degrees()}
    Pinv = {z: m.inverse() for z, m in P.items()}
    d = {}
    for z, b in X.d.blocks.items():
        d[z] = P[z] @ b @ Pinv[X.key(z + 1)]
    basis = {z: list(X.basis(z)) for z in X.degrees()}
    if labels is not None:
        basis = {z: [labels(l) for l in v] for z, v in basis.items()}
    Xp = DgModule(F, basis, {z: X.index(z) for z in X.degrees()}, d)
    phi = HomogeneousMap(Xp, X, 0, P)
    if not is_chain_map(phi):
        raise AssertionError("basis change is not a chain map")
    return Xp, phi


def _place(spec: InstanceSpec, rng, F, counts, span):
    """Pick a degree ``t`` such that degrees ``t-span+1..t`` all have room."""
    lo, hi = spec.window
    for _ in range(20):
        t = rng.randint(lo + span - 1, hi)
        keys = [F.norm(t - k) for k in range(span)]
        if len(set(keys)) < span:
            continue
        if all(counts.get(k, 0) < spec.max_rank for k in keys):
            for k in keys:
                counts[k] = counts.get(k, 0) + 1
            return t
    return None


def assemble(F: Field, units: dict, cones: dict, prefix: str = "e") -> DgModule:
    """``⊕ k[-a] ⊕ Cone(id)`` pieces in the standard basis.

    ``units`` maps an index to degree multiplicities; ``cones`` maps an index
    to the multiplicities of the top degree of each two-dimensional cone.
    """
    basis, index, edges = {}, {}, []
    n = 0

    def add(z, x):
        nonlocal n
        k = F.norm(z)
        label = f"{prefix}{n}"
        n += 1
        basis.setdefault(k, []).append(label)
        index.setdefault(k, []).append(x)
        return k, len(basis[k]) - 1

    for x in sorted(units):
        for z, m in sorted(units[x].items()):
            for _ in range(m):
                add(z, x)
    for x in sorted(cones):
        for t, m in sorted(cones[x].items()):
            for _ in range(m):
                edges.append((add(t - 1, x), add(t, x)))
    d = {}
    for (ka, ia), (kb, ib) in edges:
        if ka not in d:
            d[ka] = [[F.zero] * len(basis.get(kb, ())) for _ in basis[ka]]
        d[ka][ia][ib] = F.one
    blocks = {k: Matrix(F, len(basis[k]), len(basis[F.norm(k + 1)]), rows) for k, rows in d.items()}
    return DgModule(F, basis, index, blocks)


def random_dg_with_truth(spec: InstanceSpec, rng: random.Random | None = None,
                         prefix: str = "e", conjugate: bool = True) -> GeneratedDg:
    rng = _rng_for(spec, rng)
    F = spec.field_obj()
    counts = {}
    units, cones = {}, {}
    for x in spec.indices:
        ux, cx = {}, {}
        for _ in range(spec.units):
            t = _place(spec, rng, F, counts, 1)
            if t is not None:
                ux[F.norm(t)] = ux.get(F.norm(t), 0) + 1
        for _ in range(spec.cones):
            t = _place(spec, rng, F, counts, 2)
            if t is not None:
                cx[t] = cx.get(t, 0) + 1
        units[x], cones[x] = ux, cx
    X = assemble(F, units, cones, prefix)
    if conjugate:
        X, _ = random_basis_change(X, rng)
    return GeneratedDg(X, units, cones)


def random_dg(spec: InstanceSpec, rng: random.Random | None = None, prefix: str = "e") -> DgModule:
    return random_dg_with_truth(spec, rng, prefix).module


def dg_sum(mods) -> tuple[DgModule, DirectSum]:
    """Direct sum of dg-modules with the block-diagonal differential."""
    ds = DirectSum(list(mods))
    grid = [[m.d if i == j else None for j in range(len(mods))] for i, m in enumerate(mods)]
    S = DgModule.on(ds.module, ds.block_blocks(grid, 1, ds))
    ds.module = S
    return S, ds


# --- random chain maps ------------------------------------------------------

def _cycles_by_index(Y: DgModule):
    """``{(degree key, index): [cycle vectors]}`` with every vector index-pure."""
    _, incl = cycle_module(Y)
    Z = incl.source
    out = {}
    for z in Z.degrees():
        for tag, row in zip(Z.index(z), incl.block(z).rows):
            out.setdefault((z, tag), []).append(row)
    return out


def _random_vector(F, n, support, rng):
    v = [F.zero] * n
    for p in support:
        v[p] = F.random(rng)
    return v


def _combo(F, n, vecs, rng):
    v = [F.zero] * n
    for w in vecs:
        c = F.random(rng)
        if c:
            v = [a + c * b for a, b in zip(v, w)]
    return v


def _tag_of(M: GradedModule, z: int, v) -> str:
    tags = M.index(z)
    return next(tags[i] for i, c in enumerate(v) if c)


def random_chain_map(X: DgModule, Y: DgModule, rng: random.Random) -> HomogeneousMap:
    """Random index-respecting chain map ``X -> Y``.

    ``X^z`` is split into homology representatives, boundaries ``e_j d`` of
    complement vectors and the complement itself.  Representatives go to
    random cycles, complement vectors to random vectors, and boundaries are
    forced to ``(image of e_j) d_Y``.
    """
    F = X.field
    ycyc = _cycles_by_index(Y)
    comp, cyc = {}, {}
    for z in X.degrees():
        Z = kernel_basis(X.d.block(z))
        cyc[z] = Z
        if Z:
            R, piv, _ = rref(Matrix(F, len(Z), X.rank(z), Z), record=False)
            used = set(piv)
        else:
            used = set()
        comp[z] = [j for j in range(X.rank(z)) if j not in used]
    images = {}  # (z, position) -> image row for complement unit vectors
    for z in X.degrees():
        for j in comp[z]:
            tag = X.index(z)[j]
            images[(z, j)] = _random_vector(F, Y.rank(z), Y.positions(z, tag), rng)
    blocks = {}
    for z in X.degrees():
        n = X.rank(z)
        zm = X.key(z - 1)
        rows, imgs = [], []
        # boundaries of complement vectors one degree down
        dprev = X.d.block(zm)
        for j in comp.get(zm, []):
            b = dprev.rows[j]
            if any(b):
                rows.append(list(b))
                imgs.append(list(Y.d.block(zm).apply(images[(zm, j)])) if Y.rank(zm) and Y.rank(z)
                            else [F.zero] * Y.rank(z))
        # cycles not yet spanned become homology representatives
        for c in cyc[z]:
            trial = rows + [list(c)]
            if Matrix(F, len(trial), n, trial).rank() == len(trial):
                rows.append(list(c))
                tag = _tag_of(X, z, c)
                imgs.append(_combo(F, Y.rank(z), ycyc.get((z, tag), []), rng))
        for j in comp[z]:
            e = [F.zero] * n
            e[j] = F.one
            rows.append(e)
            imgs.append(images[(z, j)])
        if len(rows) != n:
            raise AssertionError("splitting of X^z failed")
        if not Y.rank(z):
            continue
        B = Matrix(F, n, n, rows)
        blocks[z] = B.inverse() @ Matrix(F, n, Y.rank(z), imgs)
    f = HomogeneousMap(X, Y, 0, blocks)
    if not is_chain_map(f) or not f.respects_indices():
        raise AssertionError("random_chain_map produced a non-chain map")
    return f


def random_homogeneous(V: GradedModule, X: GradedModule, degree: int, rng: random.Random) -> HomogeneousMap:
    """Random index-respecting homogeneous map of the given degree."""
    F = V.field
    blocks = {}
    for z in V.degrees():
        m = X.rank(z + degree)
        if not m:
            continue
        rows = []
        for t in V.index(z):
            rows.append(_random_vector(F, m, X.positions(z + degree, t), rng))
        blocks[z] = Matrix(F, V.rank(z), m, rows)
    return HomogeneousMap(V, X, degree, blocks)


def random_graded(F: Field, rng: random.Random, window=(-2, 2), max_rank: int = 2,
                  prefix: str = "v", indices=(DEFAULT_INDEX,)) -> GradedModule:
    basis, index = {}, {}
    n = 0
    for z in range(window[0], window[1] + 1):
        k = F.norm(z)
        for _ in range(rng.randint(0, max_rank)):
            basis.setdefault(k, []).append(f"{prefix}{n}")
            index.setdefault(k, []).append(rng.choice(indices))
            n += 1
    return GradedModule(F, basis, index)


def acyclic_like(spec: InstanceSpec, rng, prefix="k") -> DgModule:
    return random_dg(spec.with_(units=0), rng, prefix)


def random_surjective_qiso(spec: InstanceSpec, rng: random.Random | None = None,
                           target: DgModule | None = None) -> HomogeneousMap:
    """Projection ``X ⊕ K -> X`` off an acyclic ``K``, conjugated on both sides.

    With ``target`` given, the map lands in it unchanged (only the source is
    conjugated), which is what building fibrations into a fixed object needs.
    """
    rng = _rng_for(spec, rng)
    if target is None:
        X = random_dg(spec, rng, "x")
        Xp, bx = random_basis_change(X, rng)
        back = HomogeneousMap(X, Xp, 0, {z: b.inverse() for z, b in bx.blocks.items()})
    else:
        X, back = target, None
    idx = tuple(X.indices()) or spec.indices
    K = acyclic_like(spec.with_(indices=idx), rng, "k")
    S, ds = dg_sum([X, K])
    Sp, a = random_basis_change(S, rng, labels=lambda l: f"s[{l}]")
    g = a @ ds.proj(0).with_ends(S, X)
    if back is not None:
        g = g @ back
    return g


def random_injective_qiso(X: DgModule, spec: InstanceSpec, rng: random.Random) -> HomogeneousMap:
    """Inclusion ``X -> X ⊕ K`` with ``K`` acyclic, conjugated on the target."""
    idx = tuple(X.indices()) or spec.indices
    K = acyclic_like(spec.with_(indices=idx), rng, "k")
    S, ds = dg_sum([X, K])
    Sp, a = random_basis_change(S, rng, labels=lambda l: f"s[{l}]")
    a_inv = HomogeneousMap(S, Sp, 0, {z: b.inverse() for z, b in a.blocks.items()})
    return ds.inj(0).with_ends(X, S) @ a_inv


def random_qiso(X: DgModule, spec: InstanceSpec, rng: random.Random, kind: str | None = None):
    """A quasi-isomorphism out of ``X``: a basis change or an inclusion off an acyclic summand."""
    kind = kind or rng.choice(("iso", "incl"))
    if kind == "iso":
        Xp, phi = random_basis_change(X, rng, labels=lambda l: f"b[{l}]")
        return HomogeneousMap(X, Xp, 0, {z: b.inverse() for z, b in phi.blocks.items()})
    return random_injective_qiso(X, spec, rng)


def require(cond: bool, msg: str):
    if not cond:
        raise PreconditionViolated(msg)
