"""Quivers, paths and finite-dimensional quotients of path algebras.

Paths are written right to left: the word ``("b", "a")`` is ``b*a``, the path
that runs along ``a`` first and then ``b``.  Normal forms come from a
reduction system for the ideal with respect to the order
(new-arrow length, length, arrow declaration order); the basis of the
quotient is the set of paths that contain no leading path of the system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .linalg import QQ, Field, Matrix, Subspace, Vector, rank_and_kernel, vaxpy


class QuiverError(ValueError):
    pass


class UnknownName(QuiverError):
    pass


class GeneratorInhomogeneous(QuiverError):
    pass


class NotInArrowSquare(QuiverError):
    """A generator of I has a term of length < 2."""


class NotAdmissibleWithinBound(QuiverError):
    pass


class NotFiniteWithinBound(QuiverError):
    pass


class Arrow(NamedTuple):
    name: str
    source: str
    target: str
    new: bool = False


class Path(NamedTuple):
    arrows: Tuple[str, ...]
    source: str
    target: str

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.arrows)

    def __str__(self) -> str:
        return "*".join(self.arrows) if self.arrows else f"@{self.source}"


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow]):
        vertices = tuple(str(v) for v in vertices)
        if len(set(vertices)) != len(vertices):
            raise QuiverError("duplicate vertex name")
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow name")
        for a in arrows:
            for v in (a.source, a.target):
                if v not in vertices:
                    raise UnknownName(f"arrow {a.name}: unknown vertex {v}")
        self.vertices = vertices
        self.arrows = tuple(Arrow(*a) for a in arrows)
        self.arrow = {a.name: a for a in self.arrows}
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}
        self.vertex_index = {v: i for i, v in enumerate(vertices)}
        self.new_arrows = frozenset(a.name for a in self.arrows if a.new)

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def base(self) -> "Quiver":
        """The quiver without its new arrows."""
        return Quiver(self.vertices, [a for a in self.arrows if not a.new])

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.name, a.target, a.source, a.new) for a in self.arrows])

    def trivial(self, v: str) -> Path:
        if v not in self.vertex_index:
            raise UnknownName(f"unknown vertex {v}")
        return Path((), v, v)

    def path(self, arrows: Sequence[str], vertex: Optional[str] = None) -> Path:
        """Path from a written word; ``vertex`` is needed only for the empty word."""
        arrows = tuple(arrows)
        if not arrows:
            if vertex is None:
                raise QuiverError("empty word needs a vertex")
            return self.trivial(vertex)
        for name in arrows:
            if name not in self.arrow:
                raise UnknownName(f"unknown arrow {name}")
        for left, right in zip(arrows, arrows[1:]):
            if self.arrow[right].target != self.arrow[left].source:
                raise QuiverError(f"{left}*{right} is not a path")
        return Path(arrows, self.arrow[arrows[-1]].source, self.arrow[arrows[0]].target)

    def flen(self, p: Path) -> int:
        new = self.new_arrows
        return sum(1 for a in p.arrows if a in new)

    def order_key(self, p: Path):
        idx = self.arrow_index
        return (self.flen(p), len(p.arrows), tuple(idx[a] for a in p.arrows),
                self.vertex_index[p.source], self.vertex_index[p.target])


def concat(p: Path, q: Path) -> Optional[Path]:
    """The product p*q (q first), or None when the paths do not meet."""
    if p.source != q.target:
        return None
    return Path(p.arrows + q.arrows, q.source, p.target)


def enumerate_paths(q: Quiver, max_length: int) -> List[List[Path]]:
    """All paths of length 0..max_length, grouped by length.

    Within a length the order is lexicographic in arrow declaration order,
    reading the word left to right.
    """
    if max_length < 0:
        raise ValueError("max_length must be >= 0")
    levels = [[q.trivial(v) for v in q.vertices]]
    for _ in range(max_length):
        nxt = []
        for a in q.arrows:
            for p in levels[-1]:
                if p.arrows:
                    if q.arrow[p.arrows[0]].target == a.source:
                        nxt.append(Path((a.name,) + p.arrows, p.source, a.target))
                elif p.source == a.source:
                    nxt.append(Path((a.name,), a.source, a.target))
        nxt.sort(key=q.order_key)
        levels.append(nxt)
    return levels


# -- path linear combinations -----------------------------------------------

PathLinComb = Dict[Path, object]


def lincomb(q: Quiver, terms: Iterable[Tuple[object, Sequence[str], Optional[str]]], F: Field = QQ) -> PathLinComb:
    """Build a homogeneous combination from (coefficient, word, vertex) triples."""
    out: PathLinComb = {}
    for c, word, vertex in terms:
        p = q.path(word, vertex)
        x = F.norm(out.get(p, 0) + F(c))
        if x == 0:
            out.pop(p, None)
        else:
            out[p] = x
    check_homogeneous(out)
    return out


def check_homogeneous(elem: Mapping[Path, object]) -> None:
    ends = {(p.source, p.target) for p in elem}
    if len(ends) > 1:
        raise GeneratorInhomogeneous(
            "relation mixes sources/targets: " + " + ".join(str(p) for p in elem))


def _add_term(out: dict, p: Path, c, F: Field) -> None:
    x = F.norm(out.get(p, 0) + c)
    if x == 0:
        out.pop(p, None)
    else:
        out[p] = x


class ReductionSystem:
    """Leading path -> smaller combination, closed under overlaps.

    ``build`` completes a generating set; it stops with
    ``NotFiniteWithinBound`` once a leading path exceeds ``max_length``.
    """

    def __init__(self, quiver: Quiver, field: Field = QQ):
        self.quiver = quiver
        self.field = field
        self.key = quiver.order_key
        self.rules: Dict[Tuple[str, ...], Tuple[Path, PathLinComb]] = {}
        self.lengths: List[int] = []

    @classmethod
    def build(cls, quiver: Quiver, gens: Iterable[PathLinComb], field: Field = QQ,
              max_length: int = 30) -> "ReductionSystem":
        rs = cls(quiver, field)
        queue = [dict(g) for g in gens]
        while queue:
            f = rs.reduce(queue.pop(0))
            if not f:
                continue
            tip = max(f, key=rs.key)
            if not tip.arrows:
                raise QuiverError(f"the ideal contains the vertex idempotent @{tip.source}")
            if len(tip.arrows) > max_length:
                raise NotFiniteWithinBound(
                    f"overlap completion produced a leading path longer than {max_length}")
            for t in [t for t in rs.rules if _contains(t, tip.arrows)]:
                old_tip, tail = rs.rules.pop(t)
                elem = {old_tip: 1}
                for p, c in tail.items():
                    _add_term(elem, p, -c, field)
                queue.append(elem)
            rs._add(f, tip)
            queue.extend(rs._overlaps(tip.arrows))
        rs._interreduce()
        return rs

    def _add(self, f: PathLinComb, tip: Path) -> None:
        F = self.field
        c = f[tip]
        tail = {p: F.div(-x, c) for p, x in f.items() if p != tip}
        self.rules[tip.arrows] = (tip, tail)
        self.lengths = sorted({len(t) for t in self.rules})

    def _rule_elem(self, t) -> PathLinComb:
        tip, tail = self.rules[t]
        elem = {tip: 1}
        for p, c in tail.items():
            _add_term(elem, p, -c, self.field)
        return elem

    def _overlaps(self, new: Tuple[str, ...]) -> List[PathLinComb]:
        out = []
        for t in list(self.rules):
            for t1, t2 in ((new, t), (t, new)):
                for k in range(1, min(len(t1), len(t2))):
                    if t1[-k:] == t2[:k]:
                        out.append(self._spoly(t1, t2, k))
                if t1 == t2:
                    break
        return out

    def _spoly(self, t1, t2, k) -> PathLinComb:
        F = self.field
        X, Z = t1[:-k], t2[k:]
        src = self.rules[t2][0].source
        tgt = self.rules[t1][0].target
        out: PathLinComb = {}
        for p, c in self._rule_elem(t1).items():
            _add_term(out, Path(p.arrows + Z, src, tgt), c, F)
        for p, c in self._rule_elem(t2).items():
            _add_term(out, Path(X + p.arrows, src, tgt), -c, F)
        return out

    def _interreduce(self) -> None:
        for t in list(self.rules):
            tip, tail = self.rules[t]
            self.rules[t] = (tip, self.reduce(tail))

    def find(self, arrows: Tuple[str, ...]):
        rules = self.rules
        n = len(arrows)
        for L in self.lengths:
            if L > n:
                break
            for i in range(n - L + 1):
                r = rules.get(arrows[i:i + L])
                if r is not None:
                    return i, L, r
        return None

    def is_standard(self, p: Path) -> bool:
        return self.find(p.arrows) is None

    def reduce(self, elem: Mapping[Path, object]) -> PathLinComb:
        F = self.field
        work = dict(elem)
        out: PathLinComb = {}
        key = self.key
        while work:
            p = max(work, key=key)
            c = work.pop(p)
            hit = self.find(p.arrows)
            if hit is None:
                out[p] = c
                continue
            i, L, (_, tail) = hit
            left, right = p.arrows[:i], p.arrows[i + L:]
            for q, d in tail.items():
                _add_term(work, Path(left + q.arrows + right, p.source, p.target), c * d, F)
        return out

    def standard_words(self, max_length: int) -> List[List[Path]]:
        """Standard paths grouped by length, up to ``max_length``."""
        q = self.quiver
        levels = [[q.trivial(v) for v in q.vertices]]
        for _ in range(max_length):
            nxt = []
            for p in levels[-1]:
                end = p.target
                for a in q.arrows:
                    if a.source != end:
                        continue
                    word = (a.name,) + p.arrows
                    if any(word[:L] in self.rules for L in self.lengths if L <= len(word)):
                        continue
                    nxt.append(Path(word, p.source, a.target))
            if not nxt:
                break
            nxt.sort(key=self.key)
            levels.append(nxt)
        return levels


def _contains(word: Tuple[str, ...], sub: Tuple[str, ...]) -> bool:
    n, L = len(word), len(sub)
    return any(word[i:i + L] == sub for i in range(n - L + 1))


# -- finite-dimensional algebras --------------------------------------------

class FDAlgebra:
    """Finite-dimensional algebra given by structure constants.

    ``table[(i, j)]`` is the product of basis elements i and j as a sparse
    vector.  ``idempotents`` maps vertex names to orthogonal idempotents
    summing to one.
    """

    def __init__(self, field: Field, labels: Sequence[str], table: Mapping[Tuple[int, int], Vector],
                 idempotents: Mapping[str, Vector], name: str = ""):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self._table = dict(table)
        self.idempotents = dict(idempotents)
        self.name = name

    def mult(self, i: int, j: int) -> Vector:
        return self._table.get((i, j), {})

    def multiply(self, x: Vector, y: Vector) -> Vector:
        F = self.field
        out: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.mult(i, j)
                if prod:
                    vaxpy(out, prod, F, F.norm(a * b))
        return out

    def one(self) -> Vector:
        out: Vector = {}
        for e in self.idempotents.values():
            vaxpy(out, e, self.field)
        return out

    def table(self) -> Dict[Tuple[int, int], Vector]:
        return {(i, j): self.mult(i, j) for i in range(self.dim) for j in range(self.dim)
                if self.mult(i, j)}

    def to_fd(self) -> "FDAlgebra":
        return FDAlgebra(self.field, self.labels, self.table(), self.idempotents, self.name)

    def is_associative(self) -> bool:
        basis = [{i: 1} for i in range(self.dim)]
        for a in basis:
            for b in basis:
                ab = self.multiply(a, b)
                for c in basis:
                    if self.multiply(ab, c) != self.multiply(a, self.multiply(b, c)):
                        return False
        return True

    def idempotents_ok(self) -> bool:
        es = list(self.idempotents.values())
        for i, e in enumerate(es):
            for j, f in enumerate(es):
                if self.multiply(e, f) != (e if i == j else {}):
                    return False
        one = self.one()
        return all(self.multiply(one, {i: 1}) == {i: 1} == self.multiply({i: 1}, one)
                   for i in range(self.dim))

    def left_matrix(self, x: Vector) -> Matrix:
        cols = [self.multiply(x, {j: 1}) for j in range(self.dim)]
        return Matrix.from_columns(self.dim, cols, self.field)

    def trace_radical(self) -> Subspace:
        """Radical as the kernel of the trace form Tr(L_{xy}).

        Valid in characteristic 0 and in characteristic p > dim.
        """
        F = self.field
        if F.p is not None and F.p <= self.dim:
            raise ValueError("trace-form radical needs characteristic 0 or > dim")
        n = self.dim
        tr = [F.norm(sum(self.mult(k, l).get(l, 0) for l in range(n))) for k in range(n)]
        rows = []
        for i in range(n):
            row = {}
            for j in range(n):
                s = F.norm(sum(c * tr[k] for k, c in self.mult(i, j).items()))
                if s:
                    row[j] = s
            rows.append(row)
        _, ker = rank_and_kernel(Matrix(n, n, rows, F))
        return ker


class QuiverAlgebra(FDAlgebra):
    """kQ modulo the ideal generated by ``relations``, finite dimensional.

    The basis is the list of standard paths; products are concatenation
    followed by reduction.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[PathLinComb] = (), field: Field = QQ,
                 max_path_length: int = 30, name: str = ""):
        for r in relations:
            check_homogeneous(r)
        self.quiver = quiver
        self.relations = [{p: field(c) for p, c in r.items() if field(c) != 0} for r in relations]
        self.rs = ReductionSystem.build(quiver, self.relations, field, max_length=2 * max_path_length)
        levels = self.rs.standard_words(max_path_length + 1)
        if len(levels) > max_path_length + 1:
            raise NotFiniteWithinBound(
                f"standard paths of length {max_path_length + 1} exist; not finite within bound")
        self.words: List[Path] = [p for lev in levels for p in lev]
        self.index: Dict[Path, int] = {p: i for i, p in enumerate(self.words)}
        self.longest = len(levels) - 1
        self.admissibility_degree = max(2, self.longest + 1)
        idem = {v: {self.index[quiver.trivial(v)]: 1} for v in quiver.vertices}
        super().__init__(field, [str(p) for p in self.words], {}, idem, name)
        self._cache: Dict[Tuple[int, int], Vector] = {}
        self.peirce: Dict[Tuple[str, str], List[int]] = {}
        for i, p in enumerate(self.words):
            self.peirce.setdefault((p.target, p.source), []).append(i)
        self.admissible = all(len(p.arrows) >= 2 for r in self.relations for p in r)
        self._radical = None

    # elements
    def element(self, elem: Mapping[Path, object]) -> Vector:
        """Coordinates of a path combination (reduced on entry)."""
        F = self.field
        red = self.rs.reduce({p: F(c) if not isinstance(c, int) else F.norm(c) for p, c in elem.items()})
        return {self.index[p]: c for p, c in red.items()}

    def path_vector(self, p: Path) -> Vector:
        return self.element({p: 1})

    def word(self, *arrows: str, vertex: Optional[str] = None) -> Vector:
        return self.path_vector(self.quiver.path(arrows, vertex))

    def mult(self, i: int, j: int) -> Vector:
        key = (i, j)
        out = self._cache.get(key)
        if out is None:
            p = concat(self.words[i], self.words[j])
            out = {} if p is None else self.path_vector(p)
            self._cache[key] = out
        return out

    def flen(self, i: int) -> int:
        return self.quiver.flen(self.words[i])

    def radical(self) -> Subspace:
        if self._radical is None:
            if self.admissible:
                self._radical = Subspace.span(
                    ({i: 1} for i, p in enumerate(self.words) if p.arrows), self.dim, self.field)
            else:
                self._radical = self.trace_radical()
        return self._radical

    def radical_elements(self) -> Optional[List[Vector]]:
        """None when the arrows generate the radical; otherwise a basis of it."""
        if self.admissible:
            return None
        return list(self.radical().basis)

    def words_of(self, v: Vector) -> Dict[Path, object]:
        return {self.words[i]: c for i, c in v.items()}


def build_bound_quiver_algebra(q: Quiver, i_gens: Sequence[PathLinComb], max_path_length: int = 20,
                               field: Field = QQ, name: str = "B") -> QuiverAlgebra:
    """B = kQ/I with a certified admissibility degree."""
    for g in i_gens:
        check_homogeneous(g)
        for p in g:
            for a in p.arrows:
                if a not in q.arrow:
                    raise UnknownName(f"unknown arrow {a}")
            if len(p.arrows) < 2:
                raise NotInArrowSquare(f"term {p} of an I-generator has length < 2")
    try:
        alg = QuiverAlgebra(q, i_gens, field, max_path_length, name)
    except NotFiniteWithinBound as exc:
        raise NotAdmissibleWithinBound(str(exc)) from None
    return alg


def ideal_span_up_to(q: Quiver, gens: Sequence[PathLinComb], degree: int, field: Field = QQ):
    """Span of all p*g*r of length <= degree, as a subspace of the path space.

    Returns the subspace and the list of paths indexing its coordinates.
    """
    paths = [p for lev in enumerate_paths(q, degree) for p in lev]
    idx = {p: i for i, p in enumerate(paths)}
    vecs = []
    for g in gens:
        if not g:
            continue
        s, t = next(iter(g)).source, next(iter(g)).target
        lefts = [p for p in paths if p.source == t]
        rights = [p for p in paths if p.target == s]
        for left in lefts:
            for right in rights:
                v = {}
                ok = True
                for p, c in g.items():
                    w = Path(left.arrows + p.arrows + right.arrows, right.source, left.target)
                    if len(w.arrows) > degree:
                        ok = False
                        break
                    vaxpy(v, {idx[w]: field(c)}, field)
                if ok and v:
                    vecs.append(v)
    return Subspace.span(vecs, len(paths), field), paths
