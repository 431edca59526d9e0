"""The on-disk JSON format.

A document looks like::

    {"field": "Q",
     "indices": ["*"],
     "modules": {"X": {"*": {"0": {"rank": 1, "basis": ["x"]}}}},
     "differentials": {"X": {"*": {"0": [["1"]]}}},
     "maps": {"f": {"degree": 0, "source": "X", "target": "Y",
                    "matrices": {"0": [["1/2"]]}}},
     "algebras": {"A": {"generators": [["a", 2]],
                        "differential": {"a": [[["b", "c"], "1"]]}}}}

Within a degree the basis of a module lists index ``indices[0]`` first, then
the next index, and so on; map matrices act on that combined basis.  Entries
are exact strings (``"a/b"`` or integers), never floats.  ``algebras`` is
only read by the tensor instance; a map may name ``"U(A)"`` as its source or
target to mean the underlying complex of algebra ``A``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field

from ..exactlin import Field, Matrix, field_from_tag
from ..graded import DEFAULT_INDEX, DgModule, GradedModule, HomogeneousMap
from ..semifree import SemifreeAlgebra


class InputError(ValueError):
    """Malformed or inconsistent input document."""


_U_REF = re.compile(r"^U\((.+)\)$")


def _fmt_matrix(F: Field, m: Matrix) -> list:
    return [[F.format(x) for x in row] for row in m.rows]


def _parse_matrix(F: Field, rows, nrows: int, ncols: int, what: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != nrows or any(
            not isinstance(r, list) or len(r) != ncols for r in rows):
        raise InputError(f"{what}: expected a {nrows}x{ncols} matrix")
    try:
        return Matrix(F, nrows, ncols, [[F.parse(str(x)) for x in r] for r in rows])
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"{what}: {e}") from None


def field_tag_json(F: Field):
    return F.tag()


def module_json(M: GradedModule, indices) -> tuple[dict, dict]:
    """``(modules entry, differentials entry)`` for one module."""
    F = M.field
    mods, diffs = {}, {}
    for x in indices:
        per = {}
        for z in M.degrees():
            pos = M.positions(z, x)
            if pos:
                per[str(z)] = {"rank": len(pos), "basis": [M.basis(z)[i] for i in pos]}
        mods[x] = per
        if isinstance(M, DgModule):
            dz = {}
            for z, b in M.d.blocks.items():
                rows, cols = M.positions(z, x), M.positions(z + 1, x)
                if rows and cols:
                    sub = b.submatrix(rows, cols)
                    if not sub.is_zero():
                        dz[str(z)] = _fmt_matrix(F, sub)
            if dz:
                diffs[x] = dz
    return mods, diffs


def map_json(f: HomogeneousMap, source: str, target: str) -> dict:
    F = f.field
    return {"degree": f.degree, "source": source, "target": target,
            "matrices": {str(z): _fmt_matrix(F, b) for z, b in f.blocks.items()}}


def algebra_json(A: SemifreeAlgebra) -> dict:
    F = A.field
    return {"generators": [[g, A.deg[g]] for g in A.gens],
            "differential": {g: [[list(w), F.format(c)] for w, c in A.diff[g].items()]
                             for g in A.gens if A.diff[g]}}


@dataclass
class Document:
    field: Field
    indices: list
    modules: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    map_ends: dict = dc_field(default_factory=dict)  # name -> (source name, target name)
    algebras: dict = dc_field(default_factory=dict)

    # building
    def add_module(self, name: str, M: GradedModule):
        for x in M.indices():
            if x not in self.indices:
                self.indices.append(x)
        self.modules[name] = M if isinstance(M, DgModule) else DgModule.trivial(M)

    def add_map(self, name: str, f: HomogeneousMap, source: str, target: str):
        self.maps[name] = f
        self.map_ends[name] = (source, target)

    def add_algebra(self, name: str, A: SemifreeAlgebra):
        self.algebras[name] = A

    def as_dict(self) -> dict:
        out = {"field": field_tag_json(self.field), "indices": list(self.indices),
               "modules": {}, "differentials": {}, "maps": {}}
        for name, M in self.modules.items():
            mods, diffs = module_json(M, self.indices)
            out["modules"][name] = mods
            if diffs:
                out["differentials"][name] = diffs
        for name, f in self.maps.items():
            s, t = self.map_ends[name]
            out["maps"][name] = map_json(f, s, t)
        if self.algebras:
            out["algebras"] = {n: algebra_json(A) for n, A in self.algebras.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())
            fh.write("\n")

    # lookup
    def module(self, name: str) -> DgModule:
        if name not in self.modules:
            raise InputError(f"no module named {name!r}")
        return self.modules[name]

    def map(self, name: str) -> HomogeneousMap:
        if name not in self.maps:
            raise InputError(f"no map named {name!r}")
        return self.maps[name]

    def algebra(self, name: str) -> SemifreeAlgebra:
        if name not in self.algebras:
            raise InputError(f"no algebra named {name!r}")
        return self.algebras[name]


def _parse_module(F, name, per_index, diffs, indices) -> DgModule:
    if not isinstance(per_index, dict):
        raise InputError(f"module {name!r} must map indices to degrees")
    basis, index, spans = {}, {}, {}
    for x in indices:
        for zs, entry in (per_index.get(x) or {}).items():
            try:
                z = int(zs)
            except ValueError:
                raise InputError(f"module {name!r}: degree {zs!r} is not an integer") from None
            labels = entry.get("basis")
            rank = entry.get("rank", len(labels) if labels is not None else None)
            if labels is None:
                labels = [f"{name}{z}_{x}_{i}" for i in range(rank)]
            if rank != len(labels):
                raise InputError(f"module {name!r} degree {z}: rank {rank} != {len(labels)} labels")
            k = F.norm(z)
            start = len(basis.get(k, []))
            basis.setdefault(k, []).extend(labels)
            index.setdefault(k, []).extend([x] * len(labels))
            spans[(k, x)] = (start, start + len(labels))
    unknown = set(per_index) - set(indices)
    if unknown:
        raise InputError(f"module {name!r} uses undeclared indices {sorted(unknown)}")
    blocks = {}
    for x, dz in (diffs or {}).items():
        if x not in indices:
            raise InputError(f"differential of {name!r} uses undeclared index {x!r}")
        for zs, rows in dz.items():
            k = F.norm(int(zs))
            k1 = F.norm(k + 1)
            r0, r1 = spans.get((k, x), (0, 0))
            c0, c1 = spans.get((k1, x), (0, 0))
            sub = _parse_matrix(F, rows, r1 - r0, c1 - c0, f"differential of {name!r} at {zs}")
            if k not in blocks:
                blocks[k] = [[F.zero] * len(basis.get(k1, [])) for _ in basis.get(k, [])]
            for i in range(r1 - r0):
                for j in range(c1 - c0):
                    blocks[k][r0 + i][c0 + j] = sub.rows[i][j]
    mats = {k: Matrix(F, len(basis[k]), len(basis.get(F.norm(k + 1), [])), rows)
            for k, rows in blocks.items() if basis.get(F.norm(k + 1))}
    try:
        return DgModule(F, basis, index, mats)
    except ValueError as e:
        raise InputError(f"module {name!r}: {e}") from None


def _parse_algebra(F, name, entry) -> SemifreeAlgebra:
    try:
        gens = [(str(g), int(z)) for g, z in entry["generators"]]
        diff = {}
        for g, terms in (entry.get("differential") or {}).items():
            diff[g] = {tuple(w): F.parse(str(c)) for w, c in terms}
        return SemifreeAlgebra(F, gens, diff)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"algebra {name!r}: {e}") from None


def loads(text: str, resolve_algebra=None) -> Document:
    """Parse a document.  ``resolve_algebra(A)`` gives the module that a
    ``"U(name)"`` reference stands for (the tensor instance's window)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"not valid JSON: {e}") from None
    if not isinstance(raw, dict) or "field" not in raw:
        raise InputError("document needs a top-level 'field'")
    try:
        F = field_from_tag(raw["field"])
    except ValueError as e:
        raise InputError(str(e)) from None
    indices = [str(x) for x in raw.get("indices", [DEFAULT_INDEX])]
    doc = Document(F, indices)
    for name, per in (raw.get("modules") or {}).items():
        doc.modules[name] = _parse_module(F, name, per, (raw.get("differentials") or {}).get(name), indices)
    for name, entry in (raw.get("algebras") or {}).items():
        doc.algebras[name] = _parse_algebra(F, name, entry)

    def resolve(ref):
        m = _U_REF.match(ref)
        if m:
            if resolve_algebra is None:
                raise InputError(f"{ref!r} needs an instance window to resolve")
            return resolve_algebra(doc.algebra(m.group(1)))
        return doc.module(ref)

    for name, entry in (raw.get("maps") or {}).items():
        try:
            s, t, deg = entry["source"], entry["target"], int(entry.get("degree", 0))
        except (KeyError, TypeError, ValueError):
            raise InputError(f"map {name!r} needs source, target and degree") from None
        S, T = resolve(s), resolve(t)
        blocks = {}
        for zs, rows in (entry.get("matrices") or {}).items():
            z = int(zs)
            blocks[z] = _parse_matrix(F, rows, S.rank(z), T.rank(z + deg), f"map {name!r} at {zs}")
        try:
            f = HomogeneousMap(S, T, deg, blocks)
        except ValueError as e:
            raise InputError(f"map {name!r}: {e}") from None
        doc.add_map(name, f, s, t)
    return doc


def load(path, resolve_algebra=None) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    return loads(text, resolve_algebra)
