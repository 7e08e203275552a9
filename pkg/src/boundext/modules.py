"""Modules and bimodules over quiver algebras.

Every module is an (L, R)-bimodule, i.e. a representation of the quiver of
L (x) R^op: it has one space per vertex pair (x, y) and one map per arrow
``("L", a, y)`` (left action of the L-arrow a) and ``("R", x, b)`` (right
action of the R-arrow b).  One-sided modules use the ground algebra ``K``
on the other side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .linalg import Field, Matrix, Quotient, Subspace, Vector, _Echelon, rank_and_kernel, vaxpy
from .quiver import FDAlgebra, Path, Quiver, QuiverAlgebra


class ModuleError(ValueError):
    pass


def ground_algebra(field: Field) -> QuiverAlgebra:
    return QuiverAlgebra(Quiver(["*"], []), (), field, name="k")


class Env(FDAlgebra):
    """The algebra L (x) R^op together with its quiver presentation.

    As an FDAlgebra its basis is the pairs (p, q), index ``p * R.dim + q``,
    with (p (x) q)(p' (x) q') = pp' (x) q'q.
    """

    def __init__(self, left: QuiverAlgebra, right: QuiverAlgebra):
        if left.field != right.field:
            raise ModuleError("algebras over different fields")
        self.L = left
        self.R = right
        self.vertices = [(x, y) for x in left.quiver.vertices for y in right.quiver.vertices]
        self.arrows: Dict[tuple, Tuple[tuple, tuple]] = {}
        for a in left.quiver.arrows:
            for y in right.quiver.vertices:
                self.arrows[("L", a.name, y)] = ((a.source, y), (a.target, y))
        for b in right.quiver.arrows:
            for x in left.quiver.vertices:
                self.arrows[("R", x, b.name)] = ((x, b.target), (x, b.source))
        self.into: Dict[tuple, List[tuple]] = {v: [] for v in self.vertices}
        for name, (_, t) in self.arrows.items():
            self.into[t].append(name)
        self.admissible = left.admissible and right.admissible
        self._proj: Dict[tuple, "Projective"] = {}
        self._larrow = {a.name: left.word(a.name) for a in left.quiver.arrows}
        self._rarrow = {b.name: right.word(b.name) for b in right.quiver.arrows}
        idem = {f"{x}|{y}": {left.index[left.quiver.trivial(x)] * right.dim + right.index[right.quiver.trivial(y)]: 1}
                for x, y in self.vertices}
        labels = [f"{p}|{q}" for p in left.labels for q in right.labels]
        super().__init__(left.field, labels, {}, idem, f"{left.name}e")

    def mult(self, i: int, j: int) -> Vector:
        n = self.R.dim
        p, q = divmod(i, n)
        p2, q2 = divmod(j, n)
        left = self.L.mult(p, p2)
        if not left:
            return {}
        right = self.R.mult(q2, q)
        F = self.field
        out = {}
        for a, x in left.items():
            for b, y in right.items():
                out[a * n + b] = F.norm(x * y)
        return out

    def projective(self, v: tuple) -> "Projective":
        proj = self._proj.get(v)
        if proj is None:
            proj = self._projective(v)
            self._proj[v] = proj
        return proj

    def _projective(self, v: tuple) -> "Projective":
        L, R, F = self.L, self.R, self.field
        x, y = v
        labels: Dict[tuple, List[Tuple[int, int]]] = {}
        for (u, w) in self.vertices:
            labels[(u, w)] = [(p, q) for p in L.peirce.get((u, x), ()) for q in R.peirce.get((y, w), ())]
        index = {u: {pq: i for i, pq in enumerate(lab)} for u, lab in labels.items()}
        maps = {}
        for name, (src, tgt) in self.arrows.items():
            cols = []
            if name[0] == "L":
                av = self._larrow[name[1]]
                for p, q in labels[src]:
                    prod = L.multiply(av, {p: 1})
                    cols.append({index[tgt][(p2, q)]: c for p2, c in prod.items()})
            else:
                bv = self._rarrow[name[2]]
                for p, q in labels[src]:
                    prod = R.multiply({q: 1}, bv)
                    cols.append({index[tgt][(p, q2)]: c for q2, c in prod.items()})
            maps[name] = cols
        parents: Dict[tuple, List[Optional[Tuple[tuple, int]]]] = {}
        for (u, w), lab in labels.items():
            par = []
            for p, q in lab:
                qw, pw = R.words[q], L.words[p]
                if qw.arrows:
                    b = qw.arrows[-1]
                    prev = R.index[Path(qw.arrows[:-1], R.quiver.arrow[b].target, qw.target)]
                    par.append((("R", u, b), index[(u, R.quiver.arrow[b].target)][(p, prev)]))
                elif pw.arrows:
                    a = pw.arrows[0]
                    prev = L.index[Path(pw.arrows[1:], pw.source, L.quiver.arrow[a].source)]
                    par.append((("L", a, w), index[(L.quiver.arrow[a].source, w)][(prev, q)]))
                else:
                    par.append(None)
            parents[(u, w)] = par
        dims = {u: len(lab) for u, lab in labels.items()}
        mod = Module(self, dims, maps, name=f"P{v}")
        return Projective(v, mod, labels, parents)

    # radical of modules -----------------------------------------------------
    def radical_images(self, M: "Module", v: tuple) -> List[Vector]:
        """Vectors spanning (rad M)_v."""
        out: List[Vector] = []
        if self.admissible:
            for name in self.into[v]:
                out.extend(c for c in M.maps[name] if c)
            return out
        u, w = v
        for side, alg in (("L", self.L), ("R", self.R)):
            rad = alg.radical_elements()
            if rad is None:
                names = [n for n in self.into[v] if n[0] == side]
                for name in names:
                    out.extend(c for c in M.maps[name] if c)
                continue
            for r in rad:
                comps: Dict[Tuple[str, str], Dict[Path, object]] = {}
                for i, c in r.items():
                    p = alg.words[i]
                    comps.setdefault((p.target, p.source), {})[p] = c
                for (t, s), elem in comps.items():
                    if side == "L" and t == u:
                        for j in range(M.dims[(s, w)]):
                            img = M.act_left(elem, (s, w), {j: 1})
                            if img:
                                out.append(img)
                    if side == "R" and s == w:
                        for j in range(M.dims[(u, t)]):
                            img = M.act_right(elem, (u, t), {j: 1})
                            if img:
                                out.append(img)
        return out


@dataclass
class Projective:
    vertex: tuple
    module: "Module"
    labels: Dict[tuple, List[Tuple[int, int]]]
    parents: Dict[tuple, List[Optional[Tuple[tuple, int]]]]


class Module:
    """A finite-dimensional module over an ``Env``; immutable by convention."""

    def __init__(self, algebra: Env, dims: Dict[tuple, int], maps: Dict[tuple, List[Vector]], name: str = ""):
        self.algebra = algebra
        self.field = algebra.field
        self.dims = {v: dims.get(v, 0) for v in algebra.vertices}
        self.maps = {}
        for arrow, (s, t) in algebra.arrows.items():
            cols = maps.get(arrow)
            if cols is None:
                cols = [{} for _ in range(self.dims[s])]
            if len(cols) != self.dims[s]:
                raise ModuleError(f"map {arrow} has {len(cols)} columns, expected {self.dims[s]}")
            self.maps[arrow] = cols
        self.name = name

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.dim == 0

    def apply(self, arrow: tuple, vec: Vector) -> Vector:
        cols = self.maps[arrow]
        F = self.field
        out: Vector = {}
        for j, c in vec.items():
            vaxpy(out, cols[j], F, c)
        return out

    def act_left(self, elem: Dict[Path, object], vertex: tuple, vec: Vector) -> Vector:
        """elem * vec for an L-element homogeneous with source vertex[0]."""
        F = self.field
        out: Vector = {}
        w = vertex[1]
        for p, c in elem.items():
            if p.source != vertex[0]:
                continue
            cur = vec
            for a in reversed(p.arrows):
                cur = self.apply(("L", a, w), cur)
                if not cur:
                    break
            vaxpy(out, cur, F, c)
        return out

    def act_right(self, elem: Dict[Path, object], vertex: tuple, vec: Vector) -> Vector:
        """vec * elem for an R-element homogeneous with target vertex[1]."""
        F = self.field
        out: Vector = {}
        u = vertex[0]
        for p, c in elem.items():
            if p.target != vertex[1]:
                continue
            cur = vec
            for b in p.arrows:
                cur = self.apply(("R", u, b), cur)
                if not cur:
                    break
            vaxpy(out, cur, F, c)
        return out

    def action_matrix(self, side: str, word: Path) -> Matrix:
        """Matrix of the action of a basis path on the whole module."""
        offs = self.offsets()
        cols: List[Vector] = []
        for v in self.algebra.vertices:
            for j in range(self.dims[v]):
                if side == "L":
                    img = self.act_left({word: 1}, v, {j: 1})
                    tv = (word.target, v[1])
                else:
                    img = self.act_right({word: 1}, v, {j: 1})
                    tv = (v[0], word.source)
                cols.append({offs[tv] + i: c for i, c in img.items()} if img else {})
        return Matrix.from_columns(self.dim, cols, self.field)

    def offsets(self) -> Dict[tuple, int]:
        offs, n = {}, 0
        for v in self.algebra.vertices:
            offs[v] = n
            n += self.dims[v]
        return offs

    def dimension_vector(self) -> Dict[tuple, int]:
        return {v: d for v, d in self.dims.items() if d}

    def is_module(self) -> bool:
        """Check the defining relations of L and R and that the two sides commute."""
        env = self.algebra
        for v in env.vertices:
            for j in range(self.dims[v]):
                e = {j: 1}
                for tip, tail in env.L.rs.rules.values():
                    if tip.source == v[0]:
                        if self.act_left({tip: 1}, v, e) != self.act_left(tail, v, e):
                            return False
                for tip, tail in env.R.rs.rules.values():
                    if tip.target == v[1]:
                        if self.act_right({tip: 1}, v, e) != self.act_right(tail, v, e):
                            return False
        for la, (ls, lt) in env.arrows.items():
            if la[0] != "L":
                continue
            for ra, (rs, rt) in env.arrows.items():
                if ra[0] != "R" or la[2] != rs[1] or ra[1] != ls[0]:
                    continue
                # la: (s,y)->(t,y); ra: (s,y)->(s,y')
                for j in range(self.dims[ls]):
                    e = {j: 1}
                    lr = self.apply(("L", la[1], rt[1]), self.apply(ra, e))
                    rl = self.apply(("R", lt[0], ra[2]), self.apply(la, e))
                    if lr != rl:
                        return False
        return True


# -- constructions ---------------------------------------------------------

def env(left: QuiverAlgebra, right: QuiverAlgebra) -> Env:
    cache = left.__dict__.setdefault("_env_cache", {})
    e = cache.get(id(right))
    if e is None or e.R is not right:
        e = Env(left, right)
        cache[id(right)] = e
    return e


def ground(alg: QuiverAlgebra) -> QuiverAlgebra:
    k = alg.__dict__.get("_ground")
    if k is None:
        k = ground_algebra(alg.field)
        alg.__dict__["_ground"] = k
    return k


def enveloping_algebra(alg: QuiverAlgebra) -> Env:
    return env(alg, alg)


def left_env(alg: QuiverAlgebra) -> Env:
    return env(alg, ground(alg))


def right_env(alg: QuiverAlgebra) -> Env:
    return env(ground(alg), alg)


def regular_bimodule(alg: QuiverAlgebra) -> Module:
    return sub_bimodule_of_regular(alg, alg, alg, lambda i: True, name=alg.name)


def sub_bimodule_of_regular(A: QuiverAlgebra, L: QuiverAlgebra, R: QuiverAlgebra, keep, name: str = "") -> Module:
    """The (L, R)-bimodule spanned by the basis words of A selected by ``keep``,
    with actions projected back onto them (a quotient of A when the rest is a
    sub-bimodule).  L and R are subalgebras of A sharing its vertices."""
    E = env(L, R)
    basis = {v: [i for i in A.peirce.get(v, ()) if keep(i)] for v in E.vertices}
    pos = {v: {i: j for j, i in enumerate(b)} for v, b in basis.items()}
    maps = {}
    for name_, (s, t) in E.arrows.items():
        cols = []
        for i in basis[s]:
            if name_[0] == "L":
                prod = A.multiply(A.word(name_[1]), {i: 1})
            else:
                prod = A.multiply({i: 1}, A.word(name_[2]))
            cols.append({pos[t][k]: c for k, c in prod.items() if k in pos[t]})
        maps[name_] = cols
    return Module(E, {v: len(b) for v, b in basis.items()}, maps, name)


def simple_module(E: Env, v: tuple) -> Module:
    return Module(E, {v: 1}, {}, name=f"S{v}")


def direct_sum(E: Env, mods: Sequence[Module], name: str = "") -> Module:
    dims = {v: sum(m.dims[v] for m in mods) for v in E.vertices}
    maps = {}
    for arrow, (s, t) in E.arrows.items():
        cols = []
        off_t = 0
        for m in mods:
            for col in m.maps[arrow]:
                cols.append({off_t + i: c for i, c in col.items()})
            off_t += m.dims[t]
        maps[arrow] = cols
    return Module(E, dims, maps, name)


def restrict(M: Module, L: QuiverAlgebra, R: QuiverAlgebra) -> Module:
    """Restrict along subalgebras L, R whose arrows are arrows of M's algebras."""
    E = env(L, R)
    if E.vertices != M.algebra.vertices:
        raise ModuleError("restriction needs the same vertices")
    return Module(E, M.dims, {a: M.maps[a] for a in E.arrows}, M.name)


def forget_right(M: Module) -> Module:
    """The underlying left module over L."""
    L = M.algebra.L
    E = left_env(L)
    ys = M.algebra.R.quiver.vertices
    dims, maps = {}, {}
    for x in L.quiver.vertices:
        dims[(x, "*")] = sum(M.dims[(x, y)] for y in ys)
    for a in L.quiver.arrows:
        cols = []
        for y in ys:
            off = sum(M.dims[(a.target, y2)] for y2 in ys[:ys.index(y)])
            for col in M.maps[("L", a.name, y)]:
                cols.append({off + i: c for i, c in col.items()})
        maps[("L", a.name, "*")] = cols
    return Module(E, dims, maps, M.name)


def forget_left(M: Module) -> Module:
    """The underlying right module over R."""
    R = M.algebra.R
    E = right_env(R)
    xs = M.algebra.L.quiver.vertices
    dims, maps = {}, {}
    for y in R.quiver.vertices:
        dims[("*", y)] = sum(M.dims[(x, y)] for x in xs)
    for b in R.quiver.arrows:
        cols = []
        for x in xs:
            off = sum(M.dims[(x2, b.source)] for x2 in xs[:xs.index(x)])
            for col in M.maps[("R", x, b.name)]:
                cols.append({off + i: c for i, c in col.items()})
        maps[("R", "*", b.name)] = cols
    return Module(E, dims, maps, M.name)


# -- tensor products -------------------------------------------------------

class TensorProduct:
    """M (x)_B N for M over (L, B) and N over (B, R).

    The free space at (x, z) has basis triples (y, i, j); the product is its
    quotient by m*b (x) n - m (x) b*n for the arrows b of B.
    """

    def __init__(self, M: Module, N: Module):
        if M.algebra.R is not N.algebra.L:
            raise ModuleError("tensor product over mismatched algebras")
        B = M.algebra.R
        self.M, self.N, self.B = M, N, B
        E = env(M.algebra.L, N.algebra.R)
        F = M.field
        self.free: Dict[tuple, Dict[tuple, int]] = {}
        self.quot: Dict[tuple, Quotient] = {}
        ys = B.quiver.vertices
        for (x, z) in E.vertices:
            trip = [(y, i, j) for y in ys for i in range(M.dims[(x, y)]) for j in range(N.dims[(y, z)])]
            idx = {t: k for k, t in enumerate(trip)}
            rels = []
            for b in B.quiver.arrows:
                y1, y2 = b.source, b.target
                for i in range(M.dims[(x, y2)]):
                    mb = M.apply(("R", x, b.name), {i: 1})
                    for j in range(N.dims[(y1, z)]):
                        bn = N.apply(("L", b.name, z), {j: 1})
                        v: Vector = {}
                        for i2, c in mb.items():
                            v[idx[(y1, i2, j)]] = c
                        for j2, c in bn.items():
                            vaxpy(v, {idx[(y2, i, j2)]: c}, F, -1)
                        if v:
                            rels.append(v)
            self.free[(x, z)] = idx
            self.quot[(x, z)] = Quotient(Subspace.span(rels, len(trip), F))
        self.rep: Dict[tuple, List[tuple]] = {}
        for v, q in self.quot.items():
            inv = {k: t for t, k in self.free[v].items()}
            self.rep[v] = [inv[c] for c in q.complement]
        maps = {}
        for arrow, (s, t) in E.arrows.items():
            cols = []
            for (y, i, j) in self.rep[s]:
                if arrow[0] == "L":
                    img = {(y, i2, j): c for i2, c in M.apply(("L", arrow[1], y), {i: 1}).items()}
                else:
                    img = {(y, i, j2): c for j2, c in N.apply(("R", y, arrow[2]), {j: 1}).items()}
                cols.append(self.project(t, img))
            maps[arrow] = cols
        self.module = Module(E, {v: q.dim for v, q in self.quot.items()}, maps,
                             name=f"({M.name} (x) {N.name})")

    def project(self, v: tuple, triples: Dict[tuple, object]) -> Vector:
        idx = self.free[v]
        return self.quot[v].project({idx[t]: c for t, c in triples.items()})

    def pair(self, v: tuple, y: str, m: Vector, n: Vector) -> Vector:
        """Coordinates of m (x) n with m in M_(x,y), n in N_(y,z)."""
        F = self.M.field
        trip = {}
        for i, a in m.items():
            for j, b in n.items():
                trip[(y, i, j)] = F.norm(a * b)
        return self.project(v, trip)


def tensor_over(M: Module, N: Module) -> Module:
    return TensorProduct(M, N).module


# -- projective covers and resolutions -------------------------------------

@dataclass
class Cover:
    module: Module
    summands: List[tuple]
    generators: List[Vector]
    P: Module
    images: Dict[tuple, List[Vector]]  # P basis -> M, per vertex
    syzygy: Module
    kernel: Dict[tuple, Subspace]  # syzygy basis inside P, per vertex


def projective_cover(M: Module) -> Cover:
    E = M.algebra
    F = M.field
    summands: List[tuple] = []
    gens: List[Vector] = []
    images: Dict[tuple, List[Vector]] = {v: [] for v in E.vertices}
    spans = {v: _Echelon(F) for v in E.vertices}
    for v in E.vertices:
        if not M.dims[v]:
            continue
        for r in E.radical_images(M, v):
            spans[v].add(r)
    for v in E.vertices:
        if not M.dims[v]:
            continue
        for j in range(M.dims[v]):
            if not spans[v].reduce({j: 1}):
                continue
            proj = E.projective(v)
            img: Dict[tuple, List[Optional[Vector]]] = {u: [None] * len(proj.parents[u]) for u in E.vertices}

            def image(u, k, proj=proj, img=img, j=j):
                got = img[u][k]
                if got is None:
                    par = proj.parents[u][k]
                    if par is None:
                        got = {j: 1}
                    else:
                        arrow, pk = par
                        got = M.apply(arrow, image(E.arrows[arrow][0], pk))
                    img[u][k] = got
                return got

            for u in E.vertices:
                for k in range(len(img[u])):
                    image(u, k)
            for u in E.vertices:
                images[u].extend(img[u])
                for w in img[u]:
                    spans[u].add(w)
            summands.append(v)
            gens.append({j: 1})
    P = direct_sum(E, [E.projective(v).module for v in summands], name=f"P({M.name})")
    kernel = {}
    for u in E.vertices:
        m = Matrix.from_columns(M.dims[u], images[u], F)
        _, ker = rank_and_kernel(m)
        kernel[u] = ker
    maps = {}
    for arrow, (s, t) in E.arrows.items():
        cols = []
        kt = kernel[t]
        for k in kernel[s].basis:
            cols.append(kt.coords(P.apply(arrow, k)))
        maps[arrow] = cols
    syz = Module(E, {u: kernel[u].dim for u in E.vertices}, maps, name=f"Omega({M.name})")
    return Cover(M, summands, gens, P, images, syz, kernel)


@dataclass(frozen=True)
class ExceedsBound:
    bound: int

    def __str__(self):
        return f"ExceedsBound({self.bound})"


def is_projective(M: Module) -> bool:
    return projective_cover(M).syzygy.is_zero()


def projective_dimension(M: Module, bound: int = 12) -> Union[int, ExceedsBound]:
    if bound < 0:
        raise ValueError("bound must be >= 0")
    cur = M
    for n in range(bound + 1):
        if cur.is_zero():
            return max(n - 1, 0)
        cov = projective_cover(cur)
        if cov.syzygy.is_zero():
            return n
        cur = cov.syzygy
    return ExceedsBound(bound)


def minimal_resolution(M: Module, length: int) -> List[Cover]:
    """Covers of M, Omega M, Omega^2 M, ... (stops early at zero)."""
    out = []
    cur = M
    for _ in range(length + 1):
        if cur.is_zero():
            break
        cov = projective_cover(cur)
        out.append(cov)
        cur = cov.syzygy
    return out


def global_dimension(alg: QuiverAlgebra, bound: int = 12, side: str = "left") -> Union[int, ExceedsBound]:
    E = left_env(alg) if side == "left" else right_env(alg)
    best = 0
    for v in E.vertices:
        pd = projective_dimension(simple_module(E, v), bound)
        if isinstance(pd, ExceedsBound):
            return pd
        best = max(best, pd)
    return best


# -- tensor nilpotency ------------------------------------------------------

@dataclass(frozen=True)
class Nilpotent:
    index: int
    dims: Tuple[int, ...]


@dataclass(frozen=True)
class NotNilpotentUpTo:
    bound: int
    dims: Tuple[int, ...]


def tensor_powers(M: Module, count: int) -> List[Module]:
    out = [M]
    while len(out) < count and not out[-1].is_zero():
        out.append(tensor_over(out[-1], M))
    return out


def tensor_power_nilpotency(M: Module, bound: int = 10, max_dim: int = 20000) -> Union[Nilpotent, NotNilpotentUpTo]:
    """First n <= bound with M^{(x)n} = 0.

    Powers of a non-nilpotent bimodule may grow exponentially; once a power
    exceeds ``max_dim`` the search stops and reports the powers computed so far.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    dims = []
    cur = M
    for n in range(1, bound + 1):
        if n > 1:
            if cur.dim * M.dim > max_dim:
                return NotNilpotentUpTo(n - 1, tuple(dims))
            cur = tensor_over(cur, M)
        dims.append(cur.dim)
        if cur.is_zero():
            return Nilpotent(n, tuple(dims))
    return NotNilpotentUpTo(bound, tuple(dims))
