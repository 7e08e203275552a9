"""Chain complexes and (relative) Hochschild homology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .extension import (ExtendedAlgebra, Verdict, boundedness_report, one_sided_projective)
from .linalg import Field, Matrix, Quotient, Subspace, Vector, rank, vaxpy
from .modules import (Env, ExceedsBound, Module, Nilpotent, TensorProduct, enveloping_algebra,
                      global_dimension, minimal_resolution, projective_dimension, regular_bimodule, restrict,
                      tensor_power_nilpotency)
from .quiver import QuiverAlgebra


class CapExceeded(ValueError):
    pass


class SectionError(ValueError):
    pass


@dataclass(frozen=True)
class HomologyTable:
    dims: Tuple[int, ...]
    exhausted: bool = True  # False when a resolution was cut off at the degree cap

    def __getitem__(self, m: int) -> int:
        return self.dims[m]

    def __len__(self):
        return len(self.dims)


class ChainComplex:
    """Spaces C_0..C_N with d_m: C_m -> C_{m-1} for 1 <= m <= N."""

    def __init__(self, dims: Sequence[int], boundaries: Dict[int, Matrix], field: Field):
        self.dims = list(dims)
        self.field = field
        self.d = {}
        for m in range(1, len(self.dims)):
            mat = boundaries.get(m)
            if mat is None:
                mat = Matrix.zero(self.dims[m - 1], self.dims[m], field)
            if (mat.nrows, mat.ncols) != (self.dims[m - 1], self.dims[m]):
                raise ValueError(f"d_{m} has shape {mat.nrows}x{mat.ncols}")
            self.d[m] = mat

    def is_complex(self) -> bool:
        return all((self.d[m - 1] @ self.d[m]).is_zero() for m in range(2, len(self.dims)))

    def homology(self, top: Optional[int] = None) -> HomologyTable:
        """dim H_m for m <= top (default: all but the last space)."""
        if top is None:
            top = len(self.dims) - 2
        ranks = {m: rank(self.d[m]) for m in self.d}
        out = []
        for m in range(top + 1):
            out.append(self.dims[m] - ranks.get(m, 0) - ranks.get(m + 1, 0))
        return HomologyTable(tuple(out))


# -- the relative bar complex -------------------------------------------------

class Section:
    """A linear section of A -> A/B, one lift per basis word of positive F-length."""

    def __init__(self, ext: ExtendedAlgebra, lifts: Optional[Dict[int, Vector]] = None):
        self.ext = ext
        A = ext.A
        self.lifts = {c: {c: 1} for c in ext.positive}
        if lifts:
            self.lifts.update(lifts)
        for c, v in self.lifts.items():
            pos = {i: x for i, x in v.items() if A.flen(i) > 0}
            if pos != {c: 1}:
                raise SectionError(f"lift of {A.words[c]} does not project back to it")
            w = A.words[c]
            for i in v:
                u = A.words[i]
                if (u.source, u.target) != (w.source, w.target):
                    raise SectionError("lifts must stay in their Peirce component")

    def __call__(self, c: int) -> Vector:
        return self.lifts[c]


def perturbed_section(ext: ExtendedAlgebra) -> Section:
    """The basis section plus a B-component on the first word that admits one."""
    A = ext.A
    for c in ext.positive:
        w = A.words[c]
        for b in ext.b_in_a:
            u = A.words[b]
            if (u.source, u.target) == (w.source, w.target):
                return Section(ext, {c: {c: 1, b: 3}})
    return Section(ext)


class CyclicTensor:
    """X (x)_{B^e} Y for B-bimodules X and Y (same Env).

    Free basis (u, w, i, j) with i in X_(u,w), j in Y_(w,u); relations
    xb (x) y - x (x) by and bx (x) y - x (x) yb for the arrows b of B.
    """

    def __init__(self, X: Module, Y: Module):
        E = X.algebra
        F = X.field
        B = E.L
        self.X, self.Y = X, Y
        free = []
        for (u, w) in E.vertices:
            for i in range(X.dims[(u, w)]):
                for j in range(Y.dims[(w, u)]):
                    free.append((u, w, i, j))
        self.index = {t: k for k, t in enumerate(free)}
        self.free = free
        rels = []
        idx = self.index
        for b in B.quiver.arrows:
            s, t = b.source, b.target
            for u in B.quiver.vertices:
                # x in X_(u,t): x*b in X_(u,s) against y in Y_(s,u)
                for i in range(X.dims[(u, t)]):
                    xb = X.apply(("R", u, b.name), {i: 1})
                    for j in range(Y.dims[(s, u)]):
                        by = Y.apply(("L", b.name, u), {j: 1})
                        v: Vector = {}
                        for i2, c in xb.items():
                            vaxpy(v, {idx[(u, s, i2, j)]: c}, F)
                        for j2, c in by.items():
                            vaxpy(v, {idx[(u, t, i, j2)]: c}, F, -1)
                        if v:
                            rels.append(v)
                # x in X_(s,w): b*x in X_(t,w) against y in Y_(w,t)
                w = u
                for i in range(X.dims[(s, w)]):
                    bx = X.apply(("L", b.name, w), {i: 1})
                    for j in range(Y.dims[(w, t)]):
                        yb = Y.apply(("R", w, b.name), {j: 1})
                        v = {}
                        for i2, c in bx.items():
                            vaxpy(v, {idx[(t, w, i2, j)]: c}, F)
                        for j2, c in yb.items():
                            vaxpy(v, {idx[(s, w, i, j2)]: c}, F, -1)
                        if v:
                            rels.append(v)
        self.quot = Quotient(Subspace.span(rels, len(free), F))
        self.rep = [free[c] for c in self.quot.complement]

    @property
    def dim(self) -> int:
        return self.quot.dim

    def pair(self, xv: Tuple[str, str], x: Vector, y: Vector) -> Vector:
        u, w = xv
        F = self.X.field
        v: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                vaxpy(v, {self.index[(u, w, i, j)]: F.norm(a * b)}, F)
        return self.quot.project(v)


class RelativeBarComplex:
    def __init__(self, ext: ExtendedAlgebra, X: Optional[Module] = None, max_deg: int = 8,
                 sigma: Optional[Section] = None):
        if max_deg < 1:
            raise ValueError("max_deg must be >= 1")
        self.ext = ext
        A, B, F = ext.A, ext.B, ext.field
        self.sigma = sigma or Section(ext)
        if X is None:
            X = regular_bimodule(A)
        self.X = X
        XB = restrict(X, B, B)
        M = ext.quotient_bimodule()
        E = M.algebra
        self.local: Dict[int, Tuple[tuple, int]] = {}
        for v in E.vertices:
            for k, i in enumerate(i for i in A.peirce.get(v, ()) if A.flen(i) > 0):
                self.local[i] = (v, k)
        self.global_ = {loc: i for i, loc in self.local.items()}
        powers: List[Module] = [regular_bimodule(B), M]
        self.tps: List[Optional[TensorProduct]] = [None, None]
        for m in range(2, max_deg + 2):
            if powers[-1].is_zero():
                powers.append(powers[-1])
                self.tps.append(None)
                continue
            tp = TensorProduct(powers[-1], M)
            self.tps.append(tp)
            powers.append(tp.module)
        self.powers = powers
        self.spaces = [CyclicTensor(XB, P) if not P.is_zero() else None for P in powers]
        dims = [s.dim if s is not None else 0 for s in self.spaces]
        bounds = {}
        for m in range(1, max_deg + 2):
            if dims[m]:
                bounds[m] = self._boundary(m)
        self.complex = ChainComplex(dims, bounds, F)
        if not self.complex.is_complex():
            raise AssertionError("relative bar differential does not square to zero")

    # expand a basis element of the m-th power into basis words of A/B
    def _expand(self, m: int, vertex: tuple, j: int) -> List[int]:
        if m == 1:
            return [self.global_[(vertex, j)]]
        y, i1, j1 = self.tps[m].rep[vertex][j]
        return self._expand(m - 1, (vertex[0], y), i1) + [self.global_[((y, vertex[1]), j1)]]

    def _tensor(self, alphas: List[Vector]):
        """(vertex, coordinates) of a pure tensor of homogeneous A/B elements."""
        A = self.ext.A
        if any(not a for a in alphas):
            return None
        cur_v, cur = None, None
        for k, a in enumerate(alphas):
            loc: Vector = {}
            vert = None
            for i, c in a.items():
                vert, pos = self.local[i]
                loc[pos] = c
            if k == 0:
                cur_v, cur = vert, loc
                continue
            if cur_v[1] != vert[0]:
                return None
            newv = (cur_v[0], vert[1])
            cur = self.tps[k + 1].pair(newv, vert[0], cur, loc)
            cur_v = newv
            if not cur:
                return None
        return cur_v, cur

    def _project(self, v: Vector) -> Vector:
        A = self.ext.A
        return {i: c for i, c in v.items() if A.flen(i) > 0}

    def _emit(self, out: Vector, m: int, xv: tuple, x: Vector, alphas: List[Vector], coef) -> None:
        F = self.ext.field
        if not x:
            return
        space = self.spaces[m]
        if space is None:
            return
        if m == 0:
            u, w = xv
            if u != w:
                return
            B = self.ext.B
            y = {B.peirce[(u, u)].index(B.index[B.quiver.trivial(u)]): 1}
            vaxpy(out, space.pair(xv, x, y), F, coef)
            return
        t = self._tensor(alphas)
        if t is None:
            return
        tv, tvec = t
        if (xv[1], xv[0]) != tv:
            return
        vaxpy(out, space.pair(xv, x, tvec), F, coef)

    def _boundary(self, m: int) -> Matrix:
        A, F = self.ext.A, self.ext.field
        X = self.X
        sig = self.sigma
        cols = []
        for (u, w, i, j) in self.spaces[m].rep:
            alph = self._expand(m, (w, u), j)
            x = {i: 1}
            out: Vector = {}
            s1 = A.words_of(sig(alph[0]))
            t1 = A.words[alph[0]]
            self._emit(out, m - 1, (u, t1.source), X.act_right(s1, (u, w), x),
                       [{a: 1} for a in alph[1:]], 1)
            for k in range(m - 1):
                prod = self._project(A.multiply(sig(alph[k]), sig(alph[k + 1])))
                rest = [{a: 1} for a in alph[:k]] + [prod] + [{a: 1} for a in alph[k + 2:]]
                self._emit(out, m - 1, (u, w), x, rest, (-1) ** (k + 1))
            sm = A.words_of(sig(alph[-1]))
            tm = A.words[alph[-1]]
            self._emit(out, m - 1, (tm.target, w), X.act_left(sm, (u, w), x),
                       [{a: 1} for a in alph[:-1]], (-1) ** m)
            cols.append(out)
        return Matrix.from_columns(self.spaces[m - 1].dim if self.spaces[m - 1] else 0, cols, F)


def relative_bar_complex(ext: ExtendedAlgebra, X: Optional[Module] = None, max_deg: int = 8,
                         sigma: Optional[Section] = None) -> ChainComplex:
    return RelativeBarComplex(ext, X, max_deg, sigma).complex


def relative_hochschild_homology(ext: ExtendedAlgebra, X: Optional[Module] = None,
                                 max_deg: int = 8) -> HomologyTable:
    return relative_bar_complex(ext, X, max_deg).homology(max_deg)


def coinvariants_dimension(X: Module) -> int:
    """dim X / span{bx - xb : b in B} for a B-bimodule X, computed directly."""
    E = X.algebra
    B = E.L
    offs = X.offsets()
    vecs = []
    for b in B.words:
        for v in E.vertices:
            for j in range(X.dims[v]):
                lv = X.act_left({b: 1}, v, {j: 1})
                rv = X.act_right({b: 1}, v, {j: 1})
                d: Vector = {}
                if lv:
                    vaxpy(d, {offs[(b.target, v[1])] + k: c for k, c in lv.items()}, X.field)
                if rv:
                    vaxpy(d, {offs[(v[0], b.source)] + k: c for k, c in rv.items()}, X.field, -1)
                if d:
                    vecs.append(d)
    return X.dim - Subspace.span(vecs, X.dim, X.field).dim


# -- Hochschild homology via minimal resolutions -------------------------------

def hochschild_complex(alg: QuiverAlgebra, X: Optional[Module] = None, max_deg: int = 8):
    """X (x)_{A^e} P_* for the minimal resolution P_* of A; returns (complex, exhausted)."""
    E = enveloping_algebra(alg)
    if X is None:
        X = regular_bimodule(alg)
    F = alg.field
    covers = minimal_resolution(regular_bimodule(alg), max_deg + 1)
    exhausted = not covers or covers[-1].syzygy.is_zero()

    def chain_dim(summands):
        return sum(X.dims[(y, x)] for (x, y) in summands)

    dims = [chain_dim(c.summands) for c in covers]
    while len(dims) < max_deg + 2:
        dims.append(0)
    bounds = {}
    for n in range(1, len(covers)):
        prev = covers[n - 1]
        cur = covers[n]
        # decode P_{n-1} coordinates at each vertex into (summand, p, q)
        decode: Dict[tuple, List[Tuple[int, int, int]]] = {}
        for v in E.vertices:
            lst = []
            for s_idx, sv in enumerate(prev.summands):
                for (p, q) in E.projective(sv).labels[v]:
                    lst.append((s_idx, p, q))
            decode[v] = lst
        out_off = []
        off = 0
        for (x, y) in prev.summands:
            out_off.append(off)
            off += X.dims[(y, x)]
        cols = []
        for g_idx, (x, y) in enumerate(cur.summands):
            gen = cur.generators[g_idx]
            ker = prev.kernel[(x, y)]
            elem: Vector = {}
            for j, c in gen.items():
                vaxpy(elem, ker.basis[j], F, c)
            for k in range(X.dims[(y, x)]):
                xi = {k: 1}
                col: Vector = {}
                for idx, c in elem.items():
                    s_idx, p, q = decode[(x, y)][idx]
                    pw, qw = alg.words[p], alg.words[q]
                    # xi (x) p g q  ->  q xi p (x) g
                    r = X.act_right({pw: 1}, (y, x), xi)
                    if not r:
                        continue
                    r = X.act_left({qw: 1}, (y, pw.source), r)
                    if not r:
                        continue
                    base = out_off[s_idx]
                    vaxpy(col, {base + t: z for t, z in r.items()}, F, c)
                cols.append(col)
        bounds[n] = Matrix.from_columns(dims[n - 1], cols, F)
    return ChainComplex(dims, bounds, F), exhausted


def hochschild_homology(alg: QuiverAlgebra, X: Optional[Module] = None, max_deg: int = 8) -> HomologyTable:
    cx, exhausted = hochschild_complex(alg, X, max_deg)
    return HomologyTable(cx.homology(max_deg).dims, exhausted)


def truncated_bar_oracle(alg: QuiverAlgebra, X: Optional[Module] = None, max_deg: int = 3,
                         cap: int = 200_000) -> HomologyTable:
    """Homology of the reduced standard complex X (x) (A/k1)^{(x)m} over k."""
    if X is None:
        X = regular_bimodule(alg)
    F = alg.field
    n = alg.dim
    one = alg.one()
    r0 = next(iter(alg.idempotents.values()))
    (ref,) = r0.keys()
    bar = [i for i in range(n) if i != ref]
    bpos = {i: k for k, i in enumerate(bar)}
    nb, dx = len(bar), X.dim
    if dx * nb ** (max_deg + 1) > cap:
        raise CapExceeded(f"bar complex needs {dx * nb ** (max_deg + 1)} > {cap} coordinates")
    L = {i: X.action_matrix("L", alg.words[i]) for i in range(n)}
    R = {i: X.action_matrix("R", alg.words[i]) for i in range(n)}

    def to_bar(v: Vector) -> Vector:
        c0 = v.get(ref, 0)
        out = dict(v)
        if c0:
            vaxpy(out, one, F, -c0)
        return {bpos[i]: c for i, c in out.items() if i != ref}

    def index(x: int, tup: Sequence[int]) -> int:
        k = x
        for t in tup:
            k = k * nb + t
        return k

    def unindex(k: int, m: int):
        tup = []
        for _ in range(m):
            k, t = divmod(k, nb)
            tup.append(t)
        return k, tuple(reversed(tup))

    dims = [dx * nb ** m for m in range(max_deg + 2)]
    bounds = {}
    for m in range(1, max_deg + 2):
        cols = []
        for k in range(dims[m]):
            x, tup = unindex(k, m)
            ex = {x: 1}
            col: Vector = {}
            a1 = bar[tup[0]]
            for xi, c in R[a1].apply(ex).items():
                vaxpy(col, {index(xi, tup[1:]): c}, F)
            for i in range(m - 1):
                prod = to_bar(alg.mult(bar[tup[i]], bar[tup[i + 1]]))
                for t, c in prod.items():
                    vaxpy(col, {index(x, tup[:i] + (t,) + tup[i + 2:]): c}, F, (-1) ** (i + 1))
            am = bar[tup[-1]]
            for xi, c in L[am].apply(ex).items():
                vaxpy(col, {index(xi, tup[:-1]): c}, F, (-1) ** m)
            cols.append(col)
        bounds[m] = Matrix.from_columns(dims[m - 1], cols, F)
    return ChainComplex(dims, bounds, F).homology(max_deg)


# -- reports -----------------------------------------------------------------------

def jz_dimension_report(ext: ExtendedAlgebra, max_deg: Optional[int] = None, bounded: Optional[bool] = None) -> dict:
    if max_deg is None:
        max_deg = ext.spec.limit("max_degree", 8)
    hb = hochschild_homology(ext.B, None, max_deg)
    ha = hochschild_homology(ext.A, None, max_deg)
    rel = relative_hochschild_homology(ext, None, max_deg)
    n0 = max_deg + 1
    for m in range(max_deg, -1, -1):
        if rel[m]:
            break
        n0 = m
    if bounded is None:
        rep = boundedness_report(ext)
        bounded = Verdict.CERTIFIED in (rep.left.bounded, rep.right.bounded)
    window = range(n0, max_deg + 1)
    injection = all(hb[m] <= ha[m] for m in window)
    equality = all(hb[m] == ha[m] for m in range(n0 + 1, max_deg + 1)) if bounded else None
    return {
        "max_degree": max_deg,
        "HH_B": list(hb.dims),
        "HH_A": list(ha.dims),
        "H_rel": list(rel.dims),
        "resolutions_exhausted": hb.exhausted and ha.exhausted,
        "n0": n0,
        "bounded": bounded,
        "injection_check": injection,
        "equality_check": equality,
        "window": [n0, max_deg],
    }


def gldim_bound_checks(ext: ExtendedAlgebra, bound: int = 12, max_tensor_power: int = 10) -> dict:
    a = global_dimension(ext.A, bound)
    b = global_dimension(ext.B, bound)
    M = ext.quotient_bimodule()
    r = projective_dimension(M, bound)
    nil = tensor_power_nilpotency(M, max_tensor_power)
    n = nil.index if isinstance(nil, Nilpotent) else None
    proj = {s: one_sided_projective(ext, s) for s in ("left", "right")}
    # the right-projective statements, or their mirrors when only the left side holds
    side = "right" if proj["right"] else ("left" if proj["left"] else None)

    def num(x):
        return x if isinstance(x, int) else None

    out = {"gldim_A": num(a), "gldim_B": num(b), "pd_bimodule": num(r), "nilpotency_index": n,
           "projective_side": side}
    if side is None:
        out["b_le_r_plus_a"] = out["a_le_n_minus_1_plus_b"] = "NotApplicable"
    else:
        if None in (num(a), num(b), num(r)):
            out["b_le_r_plus_a"] = Verdict.INCONCLUSIVE.value
        else:
            out["b_le_r_plus_a"] = "pass" if b <= r + a else "fail"
        if None in (num(a), num(b), n):
            out["a_le_n_minus_1_plus_b"] = Verdict.INCONCLUSIVE.value
        else:
            out["a_le_n_minus_1_plus_b"] = "pass" if a <= n - 1 + b else "fail"
    return out
