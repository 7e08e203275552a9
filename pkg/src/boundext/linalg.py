"""Exact linear algebra over Q or a prime field.

Vectors are sparse dicts ``{index: value}`` holding no zeros.  Over Q the
values are ``int`` or ``fractions.Fraction``; over F_p they are ints in
``range(p)``.  Everything here is pure: builders are local to a call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, object]


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """Q when ``p`` is None, otherwise the prime field F_p."""

    p: Optional[int] = None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else x
            if isinstance(x, str):
                return self(Fraction(x))
            return int(x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def norm(self, x):
        if self.p is None:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        return x % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            if x == 1 or x == -1:
                return x
            return self.norm(Fraction(1) / x)
        return pow(x, -1, self.p)

    def div(self, a, b):
        if b == 1:
            return a
        if self.p is None:
            if b == -1:
                return -a
            return self.norm(Fraction(a) / b)
        return a * pow(b, -1, self.p) % self.p

    def fmt(self, x) -> str:
        return str(x)


QQ = Field()


def GF(p: int) -> Field:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return Field(p)


# -- sparse vector helpers -------------------------------------------------

def vadd(u: Vector, v: Vector, F: Field, c=1) -> Vector:
    """u + c*v as a new vector."""
    out = dict(u)
    vaxpy(out, v, F, c)
    return out


def vaxpy(out: Vector, v: Vector, F: Field, c=1) -> None:
    """out += c*v in place."""
    if c == 0:
        return
    norm = F.norm
    for k, x in v.items():
        y = norm(out.get(k, 0) + c * x)
        if y == 0:
            out.pop(k, None)
        else:
            out[k] = y


def vscale(v: Vector, c, F: Field) -> Vector:
    if c == 0:
        return {}
    norm = F.norm
    return {k: norm(c * x) for k, x in v.items()}


# -- matrices ---------------------------------------------------------------

class Matrix:
    """Exact matrix kept as sparse rows.

    ``Matrix.dense`` and ``to_dense`` convert from and to lists of lists.
    """

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Vector], field: Field = QQ):
        if len(rows) != nrows:
            raise DimensionMismatch(f"expected {nrows} rows, got {len(rows)}")
        for r in rows:
            for k in r:
                if not 0 <= k < ncols:
                    raise DimensionMismatch(f"column {k} out of range {ncols}")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(rows)
        self.field = field

    @classmethod
    def dense(cls, entries: Sequence[Sequence], field: Field = QQ, ncols: Optional[int] = None):
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise DimensionMismatch("ragged matrix")
            rows.append({j: field(x) for j, x in enumerate(row) if field(x) != 0})
        return cls(len(entries), ncols, rows, field)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[Vector], field: Field = QQ):
        rows: List[Vector] = [{} for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                rows[i][j] = x
        return cls(nrows, len(cols), rows, field)

    @classmethod
    def zero(cls, nrows: int, ncols: int, field: Field = QQ):
        return cls(nrows, ncols, [{} for _ in range(nrows)], field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ):
        return cls(n, n, [{i: 1} for i in range(n)], field)

    def to_dense(self) -> List[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                out[i][j] = x
        return out

    def transpose(self) -> "Matrix":
        cols: List[Vector] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                cols[j][i] = x
        return Matrix(self.ncols, self.nrows, cols, self.field)

    def columns(self) -> List[Vector]:
        return list(self.transpose().rows)

    def apply(self, v: Vector) -> Vector:
        norm = self.field.norm
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, x in r.items():
                y = v.get(j)
                if y is not None:
                    s += x * y
            s = norm(s)
            if s != 0:
                out[i] = s
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        F = self.field
        rows = []
        for r in self.rows:
            acc: Vector = {}
            for k, x in r.items():
                vaxpy(acc, other.rows[k], F, x)
            rows.append(acc)
        return Matrix(self.nrows, other.ncols, rows, F)

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


# -- echelon forms ----------------------------------------------------------

class _Echelon:
    """Incremental reduced row echelon form (leftmost pivots)."""

    def __init__(self, F: Field):
        self.F = F
        self.rows: Dict[int, Vector] = {}

    def reduce(self, v: Vector) -> Vector:
        v = dict(v)
        rows = self.rows
        for k in [k for k in v if k in rows]:
            c = v.get(k)
            if c:
                vaxpy(v, rows[k], self.F, -c)
        return v

    def add(self, v: Vector) -> Optional[int]:
        """Insert ``v``; return its new pivot, or None if it was dependent."""
        v = self.reduce(v)
        if not v:
            return None
        F = self.F
        p = min(v)
        c = v[p]
        if c != 1:
            inv = F.inv(c)
            v = {k: F.norm(x * inv) for k, x in v.items()}
        for r in self.rows.values():
            c = r.get(p)
            if c:
                vaxpy(r, v, F, -c)
        self.rows[p] = v
        return p


@dataclass(frozen=True)
class Subspace:
    """A subspace of k^ambient with a *keyed* basis.

    ``basis[i][keys[j]] == (i == j)``: reduced echelon rows with their pivots
    qualify, and so do kernel bases keyed by free columns.  Coordinates of a
    member are read off at the keys.
    """

    ambient: int
    basis: Tuple[Vector, ...]
    keys: Tuple[int, ...]
    field: Field = QQ

    @classmethod
    def span(cls, vectors: Iterable[Vector], ambient: int, field: Field = QQ) -> "Subspace":
        ech = _Echelon(field)
        for v in vectors:
            if any(not 0 <= k < ambient for k in v):
                raise DimensionMismatch("vector outside ambient space")
            ech.add(v)
        keys = tuple(sorted(ech.rows))
        return cls(ambient, tuple(ech.rows[k] for k in keys), keys, field)

    @classmethod
    def zero(cls, ambient: int, field: Field = QQ) -> "Subspace":
        return cls(ambient, (), (), field)

    @classmethod
    def full(cls, ambient: int, field: Field = QQ) -> "Subspace":
        return cls(ambient, tuple({i: 1} for i in range(ambient)), tuple(range(ambient)), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Vector) -> Vector:
        """Remainder of ``v`` modulo the subspace; zero at every key."""
        out = dict(v)
        F = self.field
        for b, k in zip(self.basis, self.keys):
            c = v.get(k)
            if c:
                vaxpy(out, b, F, -c)
        return out

    def __contains__(self, v: Vector) -> bool:
        return not self.reduce(v)

    def coords(self, v: Vector) -> Vector:
        """Coordinates of a member ``v`` in ``self.basis``."""
        return {j: v[k] for j, k in enumerate(self.keys) if k in v}

    def canonical(self) -> "Subspace":
        return Subspace.span(self.basis, self.ambient, self.field)

    def _check(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise DimensionMismatch(f"ambient {self.ambient} vs {other.ambient}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient, self.field)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # kernel of (x, y) -> sum x_i u_i - sum y_j w_j
        r = self.dim
        cols = list(self.basis) + [vscale(w, -1, self.field) for w in other.basis]
        _, ker = rank_and_kernel(Matrix.from_columns(self.ambient, cols, self.field))
        out = []
        for z in ker.basis:
            v: Vector = {}
            for i, c in z.items():
                if i < r:
                    vaxpy(v, self.basis[i], self.field, c)
            out.append(v)
        return Subspace.span(out, self.ambient, self.field)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(b in other for b in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.dim == other.dim and self <= other

    def __hash__(self):
        c = self.canonical()
        return hash((c.ambient, c.keys, tuple(tuple(sorted(b.items())) for b in c.basis)))

    def quotient_basis(self) -> List[int]:
        """Standard basis indices completing the subspace to the ambient space."""
        keys = set(self.keys)
        return [i for i in range(self.ambient) if i not in keys]


class Quotient:
    """The quotient k^ambient / sub with basis the non-key standard vectors."""

    def __init__(self, sub: Subspace):
        self.sub = sub
        self.complement = sub.quotient_basis()
        self.position = {c: i for i, c in enumerate(self.complement)}

    @property
    def dim(self) -> int:
        return len(self.complement)

    def project(self, v: Vector) -> Vector:
        r = self.sub.reduce(v)
        pos = self.position
        return {pos[k]: x for k, x in r.items()}

    def lift(self, i: int) -> Vector:
        return {self.complement[i]: 1}


def rank_and_kernel(m: Matrix) -> Tuple[int, Subspace]:
    """Rank of ``m`` and a basis of its right kernel (keyed by free columns)."""
    F = m.field
    ech = _Echelon(F)
    for r in m.rows:
        ech.add(r)
    pivots = ech.rows
    colrows: Dict[int, List[int]] = {}
    for p, r in pivots.items():
        for j in r:
            if j != p:
                colrows.setdefault(j, []).append(p)
    basis = []
    keys = []
    for f in range(m.ncols):
        if f in pivots:
            continue
        v = {f: 1}
        for p in colrows.get(f, ()):
            v[p] = F.norm(-pivots[p][f])
        basis.append(v)
        keys.append(f)
    return len(pivots), Subspace(m.ncols, tuple(basis), tuple(keys), F)


def rank(m: Matrix) -> int:
    ech = _Echelon(m.field)
    for r in m.rows:
        ech.add(r)
    return len(ech.rows)


def rank_of_vectors(vectors: Iterable[Vector], field: Field = QQ) -> int:
    ech = _Echelon(field)
    for v in vectors:
        ech.add(v)
    return len(ech.rows)


@dataclass(frozen=True)
class AffineSolution:
    particular: Vector
    kernel: Subspace


@dataclass(frozen=True)
class Infeasible:
    """rank(m) < rank(m | b)."""

    rank: int
    augmented_rank: int


def solve_affine(m: Matrix, b: Sequence) -> "AffineSolution | Infeasible":
    if len(b) != m.nrows:
        raise DimensionMismatch(f"rhs length {len(b)} != {m.nrows} rows")
    F = m.field
    n = m.ncols
    ech = _Echelon(F)
    for r, bi in zip(m.rows, b):
        row = dict(r)
        bi = F(bi)
        if bi != 0:
            row[n] = bi
        ech.add(row)
    if n in ech.rows:
        return Infeasible(len(ech.rows) - 1, len(ech.rows))
    x = {p: r[n] for p, r in ech.rows.items() if n in r}
    _, ker = rank_and_kernel(m)
    return AffineSolution(x, ker)


def solve_sparse(rows: Sequence[Vector], rhs: Sequence, ncols: int, F: Field) -> "AffineSolution | Infeasible":
    return solve_affine(Matrix(len(rows), ncols, rows, F), rhs)
