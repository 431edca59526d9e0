"""Exact linear algebra over the rationals, prime fields and graded fields.

Vectors are rows and matrices act on the right: ``v -> v @ M``.  Composing
two maps ``f`` then ``g`` is the product ``F @ G``.  Every routine here is
exact; nothing ever compares against a tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class Fp:
    """Residue modulo a prime ``p``, kept in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Fp):
            if o.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        return NotImplemented

    def __add__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return Fp(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return Fp(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return Fp(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return Fp(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        if w % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is NotImplemented:
            return w
        return Fp(w, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        if isinstance(o, Fp):
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return (self.v - o) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v}"


class Field:
    """Coefficient field.  Subclasses define the element type."""

    char: int = 0
    # residue period of degrees; None for ordinary fields
    period: int | None = None

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def norm(self, z: int) -> int:
        """Canonical key of degree ``z`` (reduced mod the period, if any)."""
        return z if self.period is None else z % self.period

    def random(self, rng: random.Random, nonzero: bool = False):
        raise NotImplementedError

    def parse(self, s) -> object:
        return self(s)

    def format(self, x) -> str:
        return str(x)

    def tag(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.tag() == other.tag()

    def __hash__(self):
        return hash(repr(self.tag()))

    def __repr__(self):
        return f"{type(self).__name__}({self.tag()!r})"


class Rationals(Field):
    char = 0

    def __call__(self, x):
        if isinstance(x, Fp):
            raise TypeError("cannot coerce a prime-field residue into Q")
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def random(self, rng, nonzero=False):
        while True:
            num = rng.randint(-3, 3)
            den = rng.choice((1, 1, 1, 2, 3))
            if num or not nonzero:
                return Fraction(num, den)

    def format(self, x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def tag(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"F_p needs a prime p, got {p!r}")
        self.p = p
        self.char = p

    def __call__(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError(f"residue mod {x.p} is not in F_{self.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return Fp(x.numerator, self.p) / x.denominator
        return Fp(int(x), self.p)

    def random(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return Fp(rng.randrange(lo, self.p), self.p)

    def format(self, x):
        return str(self(x).v)

    def tag(self):
        return {"Fp": self.p}


class GradedField(Field):
    """Laurent polynomials ``K[u, 1/u]`` with ``deg u = deg_u``.

    Every homogeneous element is a monomial ``c u^m``, so a free graded module
    is pinned down by its generators modulo ``deg_u``.  Degrees are therefore
    stored as residues mod ``deg_u`` and matrix entries are the base-field
    coefficients ``c``; the exponent ``m`` is forced by the degrees (see
    :func:`forced_u_exponent`).
    """

    def __init__(self, base: Field, deg_u: int):
        if isinstance(base, GradedField) or not isinstance(base, (Rationals, PrimeField)):
            raise ValueError("graded field needs Q or F_p as base")
        if not isinstance(deg_u, int) or deg_u < 1:
            raise ValueError("deg u must be a positive integer")
        if deg_u % 2 and base.char != 2:
            raise ValueError("odd deg u breaks graded commutativity outside characteristic 2")
        self.base = base
        self.deg_u = deg_u
        self.period = deg_u
        self.char = base.char

    def __call__(self, x):
        if isinstance(x, GradedMonomial):
            x = x.c
        return self.base(x)

    def random(self, rng, nonzero=False):
        return self.base.random(rng, nonzero)

    def format(self, x):
        return self.base.format(x)

    def tag(self):
        p = self.base.char
        return {"graded": {"p": p, "deg_u": self.deg_u}}


@dataclass(frozen=True)
class GradedMonomial:
    """Homogeneous scalar ``c * u**m`` of the graded field."""

    c: object
    m: int

    def __post_init__(self):
        if not self.c and self.m != 0:
            object.__setattr__(self, "m", 0)

    def __mul__(self, other: "GradedMonomial") -> "GradedMonomial":
        return GradedMonomial(self.c * other.c, self.m + other.m)


def forced_u_exponent(src_deg: int, tgt_deg: int, map_deg: int, deg_u: int) -> int:
    """Exponent ``m`` of the entry ``c u^m`` sending a generator of degree
    ``src_deg`` to one of degree ``tgt_deg`` under a map of degree ``map_deg``."""
    gap = src_deg + map_deg - tgt_deg
    if gap % deg_u:
        raise ValueError(
            f"no monomial of degree {gap} exists when deg u = {deg_u}")
    return gap // deg_u


Q = Rationals()


def field_from_tag(tag) -> Field:
    if tag == "Q":
        return Q
    if isinstance(tag, str):
        if tag.upper().startswith("F") and tag[1:].isdigit():
            return PrimeField(int(tag[1:]))
        if tag == "graded":
            return GradedField(Q, 2)
    if isinstance(tag, dict):
        if "Fp" in tag:
            return PrimeField(int(tag["Fp"]))
        if "graded" in tag:
            g = tag["graded"]
            p = int(g.get("p", 0))
            base = Q if p == 0 else PrimeField(p)
            return GradedField(base, int(g["deg_u"]))
    raise ValueError(f"unknown field tag {tag!r}")


class Matrix:
    """Dense matrix over a field acting on row vectors from the right."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows: Sequence[Sequence] = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = field.zero
            rows = [[z] * ncols for _ in range(nrows)]
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError(f"matrix shape mismatch, expected {nrows}x{ncols}")
        self.rows = rows

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, field, n, c):
        z, c = field.zero, field(c)
        return cls(field, n, n, [[c if i == j else z for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix(self.field, self.nrows, self.ncols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check_same(other)
        return Matrix(self.field, self.nrows, self.ncols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix(self.field, self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def scale(self, c):
        c = self.field(c)
        if c == 1:
            return self
        return Matrix(self.field, self.nrows, self.ncols, [[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        z = self.field.zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            if not nz:
                out.append([z] * other.ncols)
                continue
            row = []
            for c in cols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(self.field, self.nrows, other.ncols, out)

    def apply(self, v: Sequence):
        """Row vector ``v @ self``."""
        if len(v) != self.nrows:
            raise ValueError(f"vector of length {len(v)} against {self.shape}")
        out = [self.field.zero] * self.ncols
        for a, r in zip(v, self.rows):
            if a:
                for j, b in enumerate(r):
                    if b:
                        out[j] = out[j] + a * b
        return tuple(out)

    def transpose(self):
        return Matrix(self.field, self.ncols, self.nrows,
                      [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]):
        rows, cols = list(rows), list(cols)
        return Matrix(self.field, len(rows), len(cols),
                      [[self.rows[i][j] for j in cols] for i in rows])

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("only square matrices are invertible")
        n = self.nrows
        aug = Matrix(self.field, n, 2 * n,
                     [list(r) + list(e) for r, e in zip(self.rows, Matrix.identity(self.field, n).rows)])
        R, piv, _ = rref(aug, record=False)
        if piv[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return R.submatrix(range(n), range(n, 2 * n))

    @staticmethod
    def hstack(field, blocks: Sequence["Matrix"]):
        blocks = list(blocks)
        if not blocks:
            raise ValueError("empty hstack")
        n = blocks[0].nrows
        if any(b.nrows != n for b in blocks):
            raise ValueError("hstack row mismatch")
        rows = [sum((list(b.rows[i]) for b in blocks), []) for i in range(n)]
        return Matrix(field, n, sum(b.ncols for b in blocks), rows)

    @staticmethod
    def vstack(field, blocks: Sequence["Matrix"]):
        blocks = list(blocks)
        if not blocks:
            raise ValueError("empty vstack")
        m = blocks[0].ncols
        if any(b.ncols != m for b in blocks):
            raise ValueError("vstack column mismatch")
        rows = [r for b in blocks for r in b.rows]
        return Matrix(field, len(rows), m, rows)

    @staticmethod
    def block(field, grid: Sequence[Sequence["Matrix"]]):
        return Matrix.vstack(field, [Matrix.hstack(field, row) for row in grid])


def rref(m: Matrix, record: bool = True):
    """Reduced row echelon form.

    Returns ``(R, pivots, T)`` with ``T @ m == R`` and ``T`` invertible.
    Pivots are chosen as the first nonzero entry scanning columns left to right.
    With ``record=False`` the transformation is not tracked and ``T`` is None.
    """
    F = m.field
    n, c = m.nrows, m.ncols
    A = [list(r) for r in m.rows]
    T = [list(r) for r in Matrix.identity(F, n).rows] if record else None
    pivots = []
    r = 0
    for j in range(c):
        if r == n:
            break
        k = next((i for i in range(r, n) if A[i][j]), None)
        if k is None:
            continue
        if k != r:
            A[r], A[k] = A[k], A[r]
            if record:
                T[r], T[k] = T[k], T[r]
        inv = F.one / A[r][j]
        if inv != 1:
            A[r] = [inv * x for x in A[r]]
            if record:
                T[r] = [inv * x for x in T[r]]
        pr = A[r]
        ptr = T[r] if record else None
        for i in range(n):
            if i != r:
                f = A[i][j]
                if f:
                    A[i] = [a - f * b if b else a for a, b in zip(A[i], pr)]
                    if record:
                        T[i] = [a - f * b if b else a for a, b in zip(T[i], ptr)]
        pivots.append(j)
        r += 1
    R = Matrix(F, n, c, A)
    return R, pivots, (Matrix(F, n, n, T) if record else None)


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of ``{v : v @ m == 0}``, one vector per free variable of rref(m^T)."""
    F = m.field
    R, piv, _ = rref(m.transpose(), record=False)
    pivset = set(piv)
    free = [j for j in range(m.nrows) if j not in pivset]
    basis = []
    for f in free:
        v = [F.zero] * m.nrows
        v[f] = F.one
        for i, p in enumerate(piv):
            v[p] = -R.rows[i][f]
        basis.append(tuple(v))
    return basis


class Solver:
    """Solves ``v @ m == target`` repeatedly against a fixed ``m``.

    The particular solution sets every free variable to zero.
    """

    def __init__(self, m: Matrix):
        self.m = m
        F = m.field
        mt = m.transpose()
        R, piv, T = rref(mt)
        self.field = F
        self.pivots = piv
        self.T = T
        self.rank = len(piv)

    def solve(self, target: Sequence):
        F = self.field
        if len(target) != self.m.ncols:
            raise ValueError("target length does not match the column count")
        # T @ m^T = R, so R v^T = T target^T
        t = [F(x) for x in target]
        y = [sum((a * b for a, b in zip(row, t) if a and b), F.zero) for row in self.T.rows]
        r = self.rank
        if any(y[r:]):
            return None
        v = [F.zero] * self.m.nrows
        for i, p in enumerate(self.pivots):
            v[p] = y[i]
        return tuple(v)


def solve_right(m: Matrix, target: Sequence):
    """Particular solution of ``v @ m == target`` or None when unsolvable."""
    return Solver(m).solve(target)


@dataclass(frozen=True)
class CokernelData:
    """``projection`` kills the row space of the input; ``section @ projection`` is the identity."""

    projection: Matrix
    section: Matrix
    dim: int
    complement: tuple


def cokernel_data(m: Matrix) -> CokernelData:
    F = m.field
    R, piv, _ = rref(m, record=False)
    pivset = set(piv)
    comp = [j for j in range(m.ncols) if j not in pivset]
    pos = {j: i for i, j in enumerate(comp)}
    k = len(comp)
    proj = [[F.zero] * k for _ in range(m.ncols)]
    for j in comp:
        proj[j][pos[j]] = F.one
    for i, p in enumerate(piv):
        row = R.rows[i]
        proj[p] = [-row[j] for j in comp]
    sec = [[F.one if c == j else F.zero for c in range(m.ncols)] for j in comp]
    return CokernelData(Matrix(F, m.ncols, k, proj), Matrix(F, k, m.ncols, sec), k, tuple(comp))


def row_space_basis(m: Matrix) -> list[tuple]:
    R, piv, _ = rref(m, record=False)
    return [R.rows[i] for i in range(len(piv))]


def random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    """Random invertible matrix as a product of unit-triangular factors and a
    nonzero diagonal, so no rejection sampling is needed."""
    F = field
    z, o = F.zero, F.one
    L = [[(F.random(rng) if j < i else (o if i == j else z)) for j in range(n)] for i in range(n)]
    U = [[(F.random(rng) if j > i else (F.random(rng, nonzero=True) if i == j else z))
          for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[o if perm[i] == j else z for j in range(n)] for i in range(n)]
    return Matrix(F, n, n, P) @ Matrix(F, n, n, L) @ Matrix(F, n, n, U)


def random_matrix(field: Field, nrows: int, ncols: int, rng: random.Random) -> Matrix:
    return Matrix(field, nrows, ncols,
                  [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)])
