"""Extensions of B = kQ/I by new arrows F and relations J: A = T/J with T = kQ_F/<I>.

Words are written right to left as everywhere in the package: ``a*b*c*d``
applies d first.  Because the path order compares F-length first, the
standard words of A of F-length 0 are exactly the standard words of B, and
the standard words of positive F-length give a basis of A/B.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .linalg import (QQ, Field, Infeasible, Matrix, Quotient, Subspace, Vector, _Echelon,
                     rank_and_kernel, solve_sparse, vaxpy)
from .modules import (ExceedsBound, Module, Nilpotent, NotNilpotentUpTo, forget_left, forget_right,
                      is_projective, projective_cover, projective_dimension, sub_bimodule_of_regular,
                      tensor_power_nilpotency)
from .quiver import (Arrow, FDAlgebra, NotFiniteWithinBound, Path, PathLinComb, Quiver, QuiverAlgebra,
                     QuiverError, ReductionSystem, UnknownName, build_bound_quiver_algebra, check_homogeneous,
                     concat, enumerate_paths)

Term = Tuple[object, Tuple[str, ...], Optional[str]]  # (coefficient, word, vertex of an empty word)
Relation = Tuple[Term, ...]


class Verdict(str, enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


def conjunction(verdicts) -> Verdict:
    vs = list(verdicts)
    if Verdict.REFUTED in vs:
        return Verdict.REFUTED
    if Verdict.INCONCLUSIVE in vs:
        return Verdict.INCONCLUSIVE
    return Verdict.CERTIFIED


class JMeetsB(ValueError):
    def __init__(self, witness: Dict[Path, object]):
        self.witness = witness
        terms = " + ".join(f"{c}*{p}" for p, c in witness.items())
        super().__init__(f"J meets B: {terms} lies in both")


class NotGenerating(ValueError):
    pass


# -- extension data ----------------------------------------------------------

@dataclass(frozen=True)
class ExtensionSpec:
    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str, str], ...]
    new_arrows: Tuple[Tuple[str, str, str], ...] = ()
    i_rels: Tuple[Relation, ...] = ()
    j_rels: Tuple[Relation, ...] = ()
    field: Field = QQ
    limits: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        old = {a[0] for a in self.arrows}
        for a in self.new_arrows:
            if a[0] in old:
                raise QuiverError(f"new arrow {a[0]} clashes with an arrow of Q")

    def limit(self, name: str, default: int) -> int:
        return dict(self.limits).get(name, default)

    def quiver(self) -> Quiver:
        return Quiver(self.vertices, [Arrow(*a) for a in self.arrows])

    def extended_quiver(self) -> Quiver:
        return Quiver(self.vertices, [Arrow(*a) for a in self.arrows] +
                      [Arrow(n, s, t, True) for n, s, t in self.new_arrows])

    def with_field(self, F: Field) -> "ExtensionSpec":
        return ExtensionSpec(self.vertices, self.arrows, self.new_arrows, self.i_rels, self.j_rels, F,
                             self.limits)


def relation_to_lincomb(q: Quiver, rel: Relation, F: Field) -> PathLinComb:
    out: PathLinComb = {}
    for c, word, vertex in rel:
        p = q.path(word, vertex)
        v = F.norm(out.get(p, 0) + F(c))
        if v:
            out[p] = v
        else:
            out.pop(p, None)
    check_homogeneous(out)
    return out


def lincomb_to_relation(elem: Mapping[Path, object], key=None, F: Field = QQ) -> Relation:
    paths = sorted(elem, key=key, reverse=True) if key else list(elem)

    def rep(c):  # residues mod p as the representative of least absolute value
        return c - F.p if F.p is not None and c > F.p // 2 else c
    return tuple((rep(elem[p]), p.arrows, None if p.arrows else p.source) for p in paths)


# -- the extended algebra ----------------------------------------------------

class ExtendedAlgebra:
    """B inside A = T/J, with the data the analyses share."""

    def __init__(self, spec: ExtensionSpec):
        F = spec.field
        self.spec = spec
        self.field = F
        self.Q = spec.quiver()
        self.QF = spec.extended_quiver()
        maxlen = spec.limit("max_path_length", 20)
        i_gens = [relation_to_lincomb(self.Q, r, F) for r in spec.i_rels]
        j_gens = [relation_to_lincomb(self.QF, r, F) for r in spec.j_rels]
        self.B = build_bound_quiver_algebra(self.Q, i_gens, maxlen, F, name="B")
        self.T = ReductionSystem.build(self.QF, [{p: c for p, c in g.items()} for g in i_gens], F)
        try:
            self.A = QuiverAlgebra(self.QF, list(i_gens) + list(j_gens), F, maxlen, name="A")
        except QuiverError as exc:
            if "vertex idempotent" in str(exc):
                v = str(exc).rsplit("@", 1)[1]
                raise JMeetsB({self.Q.trivial(v): 1}) from None
            raise
        self._certify_j_meets_b()
        A, B = self.A, self.B
        self.b_in_a = [A.index[p] for p in B.words]
        self.positive = [i for i in range(A.dim) if A.flen(i) > 0]
        self._quotient: Optional[Module] = None

    def _certify_j_meets_b(self) -> None:
        # Completion elements with a Q-word as leading path span (I + J) meet kQ;
        # they must already vanish modulo I.
        for tip, tail in self.A.rs.rules.values():
            if self.QF.flen(tip):
                continue
            elem = {tip: 1}
            for p, c in tail.items():
                elem[p] = self.field.norm(elem.get(p, 0) - c)
            red = self.B.rs.reduce({p: c for p, c in elem.items() if c})
            if red:
                raise JMeetsB(red)

    @property
    def dim(self) -> int:
        return self.A.dim

    def quotient_bimodule(self) -> Module:
        if self._quotient is None:
            self._quotient = sub_bimodule_of_regular(self.A, self.B, self.B, lambda i: self.A.flen(i) > 0,
                                                     name="A/B")
        return self._quotient

    def quotient_words(self) -> List[Path]:
        return [self.A.words[i] for i in self.positive]

    def in_b(self, v: Vector) -> bool:
        return all(self.A.flen(i) == 0 for i in v)

    def t_words(self, min_flen: int, max_flen: int) -> List[Path]:
        """Standard words of T with F-length in [min_flen, max_flen]."""
        q, rs = self.QF, self.T
        level = [q.trivial(v) for v in q.vertices]
        out = [p for p in level if min_flen <= 0]
        while level:
            nxt = []
            for p in level:
                for a in q.arrows:
                    if a.source != p.target:
                        continue
                    word = (a.name,) + p.arrows
                    w = Path(word, p.source, a.target)
                    f = q.flen(w)
                    if f > max_flen:
                        continue
                    if any(word[:L] in rs.rules for L in rs.lengths if L <= len(word)):
                        continue
                    nxt.append(w)
            nxt.sort(key=q.order_key)
            out.extend(w for w in nxt if q.flen(w) >= min_flen)
            level = nxt
        out.sort(key=q.order_key)
        return out

    def t_multiply(self, x: Mapping[Path, object], y: Mapping[Path, object]) -> PathLinComb:
        F = self.field
        prod: Dict[Path, object] = {}
        for p, a in x.items():
            for r, b in y.items():
                w = concat(p, r)
                if w is not None:
                    prod[w] = F.norm(prod.get(w, 0) + a * b)
        return self.T.reduce({p: c for p, c in prod.items() if c})


def build_extension(spec: ExtensionSpec) -> ExtendedAlgebra:
    return ExtendedAlgebra(spec)


def length_index(ext: ExtendedAlgebra) -> int:
    return 1 + max((ext.A.flen(i) for i in range(ext.A.dim)), default=0)


# -- relative cycles ---------------------------------------------------------

def nonzero_paths(ext: ExtendedAlgebra) -> List[Path]:
    """Paths of Q that are not in I."""
    B = ext.B
    return [p for lev in enumerate_paths(ext.Q, B.longest) for p in lev if B.path_vector(p)]


def beta_a_words(ext: ExtendedAlgebra) -> List[Tuple[Path, str]]:
    """The relative paths of the form beta*a, as (beta, a)."""
    out = []
    paths = nonzero_paths(ext)
    for name, s, t in ext.spec.new_arrows:
        for p in paths:
            if p.source == t:
                out.append((p, name))
    return out


@dataclass(frozen=True)
class RelativeCycle:
    """beta_m a_m ... beta_1 a_1 with t(beta_m) = s(a_1); stored as units (a_i, beta_i)."""

    units: Tuple[Tuple[str, Path], ...]

    @property
    def flen(self) -> int:
        return len(self.units)

    def __str__(self):
        a1 = self.units[0][0]
        sep = "" if all(len(x) == 1 for _, b in self.units for x in b.arrows) else "*"
        body = "".join((f"({sep.join(b.arrows)})" if b.arrows else "") + a for a, b in reversed(self.units))
        return a1 + body


def enumerate_relative_cycles(ext: ExtendedAlgebra, flen_bound: Optional[int] = None) -> Iterator[RelativeCycle]:
    units = beta_a_words(ext)
    if flen_bound is None:
        flen_bound = len(units) + 1
    arrow = ext.QF.arrow
    start_of = {}
    for beta, a in units:
        start_of.setdefault(arrow[a].source, []).append((a, beta))

    def extend(seq):
        a1 = seq[0][0]
        last_beta = seq[-1][1]
        if last_beta.target == arrow[a1].source:
            yield RelativeCycle(tuple(seq))
        if len(seq) < flen_bound:
            for unit in start_of.get(last_beta.target, ()):
                yield from extend(seq + [unit])

    for beta, a in units:
        yield from extend([(a, beta)])


def has_j_interrupter(ext: ExtendedAlgebra, cycle: RelativeCycle, _cache=None) -> Optional[int]:
    """First (1-based) index i with beta_i a_i beta_{i-1} in B, indices cyclic."""
    m = cycle.flen
    for i in range(m):
        a, beta = cycle.units[i]
        prev = cycle.units[i - 1][1]
        key = (beta, a, prev)
        hit = None if _cache is None else _cache.get(key)
        if hit is None:
            w = Path(beta.arrows + (a,) + prev.arrows, prev.source, beta.target)
            hit = ext.in_b(ext.A.path_vector(w))
            if _cache is not None:
                _cache[key] = hit
        if hit:
            return i + 1
    return None


@dataclass(frozen=True)
class CriterionHolds:
    units: int  # number of relative words beta*a
    bound: int


@dataclass(frozen=True)
class CriterionFails:
    witness: RelativeCycle


@dataclass(frozen=True)
class CriterionInconclusive:
    reason: str


def nilpotency_criterion(ext: ExtendedAlgebra, flen_bound: Optional[int] = None):
    """Look for a relative cycle of F-length <= flen_bound without a J-interrupter.

    Whether a_i interrupts depends only on the consecutive units (a_{i-1}, beta_{i-1}),
    (a_i, beta_i), so an interrupter-free cycle is a closed walk in the graph whose
    edges are the uninterrupted steps.  The shortest one is found by BFS instead of
    enumerating the exponentially many cycles below the bound.
    """
    units = [(a, beta) for beta, a in beta_a_words(ext)]
    default = len(units) + 1
    bound = default if flen_bound is None else flen_bound
    arrow = ext.QF.arrow
    succ: Dict[int, List[int]] = {}
    for i, (_, prev) in enumerate(units):
        succ[i] = []
        for j, (a, beta) in enumerate(units):
            if prev.target != arrow[a].source:
                continue
            w = Path(beta.arrows + (a,) + prev.arrows, prev.source, beta.target)
            if not ext.in_b(ext.A.path_vector(w)):
                succ[i].append(j)
    best = None
    for s in range(len(units)):
        parent = {s: None}
        frontier = [s]
        depth = 1
        found = None
        while frontier and found is None and depth <= bound:
            nxt = []
            for u in frontier:
                if s in succ[u]:
                    found = u
                    break
                for v in succ[u]:
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
            if found is None:
                frontier, depth = nxt, depth + 1
        if found is not None and (best is None or depth < len(best)):
            walk = [found]
            while parent[walk[-1]] is not None:
                walk.append(parent[walk[-1]])
            best = walk[::-1]
    if best is not None:
        return CriterionFails(RelativeCycle(tuple(units[k] for k in best)))
    if bound < default:
        return CriterionInconclusive(f"cycles checked up to F-length {bound} < {default}")
    return CriterionHolds(len(units), bound)


# -- one-sided projectivity ----------------------------------------------------

@dataclass(frozen=True)
class Holds:
    side: str
    factors: Tuple[Tuple[str, Tuple[str, ...]], ...]  # new arrow -> basis words of its factor

    def summands(self) -> Dict[str, int]:
        return {a: len(ws) for a, ws in self.factors}


@dataclass(frozen=True)
class NotApplicable:
    side: str
    reason: str


def j_positive(ext: ExtendedAlgebra, n: Optional[int] = None):
    """J_{]0,n[}: elements of T of F-length in ]0, n[ which vanish in A/B.

    Returns (words, subspace over those words).
    """
    if n is None:
        n = length_index(ext)
    words = ext.t_words(1, n - 1)
    A = ext.A
    pos = {i: k for k, i in enumerate(ext.positive)}
    cols = []
    for w in words:
        v = A.path_vector(w)
        cols.append({pos[i]: c for i, c in v.items() if i in pos})
    _, ker = rank_and_kernel(Matrix.from_columns(len(pos), cols, ext.field))
    return words, ker


def _close(ext: ExtendedAlgebra, vecs: Sequence[Vector], words: Sequence[Path], left: bool, right: bool):
    """Span of vecs closed under multiplication by arrows of Q on the chosen sides."""
    F = ext.field
    idx = {w: k for k, w in enumerate(words)}
    ech = _Echelon(F)
    queue = []
    for v in vecs:
        if ech.add(v) is not None:
            queue.append(v)
    arrows = [ext.Q.path((a.name,)) for a in ext.Q.arrows]
    while queue:
        v = queue.pop()
        elem = {words[k]: c for k, c in v.items()}
        for g in arrows:
            prods = []
            if left:
                prods.append(ext.t_multiply({g: 1}, elem))
            if right:
                prods.append(ext.t_multiply(elem, {g: 1}))
            for prod in prods:
                if not prod or any(p not in idx for p in prod):
                    continue
                w = {idx[p]: c for p, c in prod.items()}
                if ech.add(w) is not None:
                    queue.append(w)
    return Subspace.span(list(ech.rows.values()), len(words), F)


def one_sided_projectivity_criterion(ext: ExtendedAlgebra, side: str = "left"):
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    n = length_index(ext)
    if n <= 1:
        return Holds(side, ())
    words, K = j_positive(ext, n)
    F = ext.field
    arrow = ext.QF.arrow
    W_vecs: List[Vector] = []
    per_arrow: Dict[str, Subspace] = {}
    for name, _, _ in ext.spec.new_arrows:
        if side == "left":
            mask = [k for k, w in enumerate(words) if w.arrows and w.arrows[0] == name]
        else:
            mask = [k for k, w in enumerate(words) if w.arrows and w.arrows[-1] == name]
        Wa = K & Subspace.span([{k: 1} for k in mask], len(words), F)
        per_arrow[name] = Wa
        W_vecs.extend(Wa.basis)
    gen = _close(ext, W_vecs, words, True, True)
    if gen.dim != K.dim:
        return NotApplicable(side, f"relations of the form a*(...) generate {gen.dim} of {K.dim} dimensions")
    factors = []
    for name, s, t in ext.spec.new_arrows:
        # the factor s(a)T^{<n-1} / Y_a (left) or T^{<n-1}t(a) / Y_a (right)
        if side == "left":
            fw = [w for w in ext.t_words(0, n - 2) if w.target == arrow[name].source]
            strip = lambda w: Path(w.arrows[1:], w.source, arrow[name].source)
        else:
            fw = [w for w in ext.t_words(0, n - 2) if w.source == arrow[name].target]
            strip = lambda w: Path(w.arrows[:-1], arrow[name].target, w.target)
        fidx = {w: k for k, w in enumerate(fw)}
        ys = []
        for v in per_arrow[name].basis:
            y = {}
            for k, c in v.items():
                y[fidx[strip(words[k])]] = c
            ys.append(y)
        Y = _close(ext, ys, fw, side == "right", side == "left")
        comp = Quotient(Y).complement
        factors.append((name, tuple(str(fw[k]) for k in comp)))
    return Holds(side, tuple(factors))


def one_sided_projective(ext: ExtendedAlgebra, side: str) -> bool:
    M = ext.quotient_bimodule()
    return is_projective(forget_right(M) if side == "left" else forget_left(M))


# -- boundedness ---------------------------------------------------------------

@dataclass
class SideReport:
    projective: Verdict
    criterion: Union[Holds, NotApplicable]
    bounded: Verdict


@dataclass
class BoundednessReport:
    tensor: Union[Nilpotent, NotNilpotentUpTo]
    tensor_verdict: Verdict
    criterion: object
    pd: Union[int, ExceedsBound]
    pd_verdict: Verdict
    left: SideReport
    right: SideReport
    consistent: bool

    def to_dict(self) -> dict:
        crit = self.criterion
        if isinstance(crit, CriterionHolds):
            crit_d = {"verdict": "Holds", "units": crit.units, "bound": crit.bound}
        elif isinstance(crit, CriterionFails):
            crit_d = {"verdict": "Fails", "witness": str(crit.witness)}
        else:
            crit_d = {"verdict": "Inconclusive", "reason": crit.reason}
        tensor = {"verdict": self.tensor_verdict.value, "dims": list(self.tensor.dims)}
        if isinstance(self.tensor, Nilpotent):
            tensor["index"] = self.tensor.index
        else:
            tensor["up_to"] = self.tensor.bound

        def side(r: SideReport):
            c = r.criterion
            cd = ({"verdict": "Holds", "factors": {a: list(ws) for a, ws in c.factors}}
                  if isinstance(c, Holds) else {"verdict": "NotApplicable", "reason": c.reason})
            return {"projective": r.projective.value, "criterion": cd, "bounded": r.bounded.value}

        return {
            "tensor_nilpotent": tensor,
            "interrupter_criterion": crit_d,
            "pd_bimodule": {"verdict": self.pd_verdict.value,
                            "value": self.pd if isinstance(self.pd, int) else None,
                            "bound": self.pd.bound if isinstance(self.pd, ExceedsBound) else None},
            "left": side(self.left),
            "right": side(self.right),
            "consistent": self.consistent,
        }


def boundedness_report(ext: ExtendedAlgebra, max_tensor_power: Optional[int] = None,
                       pd_bound: int = 12) -> BoundednessReport:
    if max_tensor_power is None:
        max_tensor_power = ext.spec.limit("max_tensor_power", 10)
    M = ext.quotient_bimodule()
    tensor = tensor_power_nilpotency(M, max_tensor_power)
    # a search that ran out of powers is reported as a refutation up to the bound
    tv = Verdict.CERTIFIED if isinstance(tensor, Nilpotent) else Verdict.REFUTED
    crit = nilpotency_criterion(ext)
    pd = projective_dimension(M, pd_bound)
    pdv = Verdict.CERTIFIED if isinstance(pd, int) else Verdict.INCONCLUSIVE
    sides = {}
    consistent = not (isinstance(crit, CriterionHolds) and not isinstance(tensor, Nilpotent))
    for s in ("left", "right"):
        proj = one_sided_projective(ext, s)
        c = one_sided_projectivity_criterion(ext, s)
        if isinstance(c, Holds) and not proj:
            consistent = False
        pv = Verdict.CERTIFIED if proj else Verdict.REFUTED
        sides[s] = SideReport(pv, c, conjunction([tv, pdv, pv]))
    return BoundednessReport(tensor, tv, crit, pd, pdv, sides["left"], sides["right"], consistent)


# -- complements and splitness -----------------------------------------------------

@dataclass(frozen=True)
class NoComplement:
    side: str
    rank: int
    augmented_rank: int


@dataclass(frozen=True)
class ComplementExists:
    side: str
    basis: Tuple[Tuple[Tuple[int, object], ...], ...]


@dataclass(frozen=True)
class IdealComplement:
    side: str
    basis: Tuple[Tuple[Tuple[int, object], ...], ...]


class _Graphs:
    """Complements of B in A written as graphs {c + phi(c)} of maps phi: C -> B.

    phi(c) is taken inside e_t B e_s for c in e_t A e_s; the idempotent
    conditions force this anyway.
    """

    def __init__(self, ext: ExtendedAlgebra):
        self.ext = ext
        A = ext.A
        self.C = ext.positive
        self.cpos = {c: k for k, c in enumerate(self.C)}
        self.var: Dict[Tuple[int, int], int] = {}
        for c in self.C:
            w = A.words[c]
            for b in ext.b_in_a:
                u = A.words[b]
                if (u.target, u.source) == (w.target, w.source):
                    self.var[(c, b)] = len(self.var)

    def split(self, v: Vector) -> Tuple[Vector, Vector]:
        A = self.ext.A
        vb = {i: c for i, c in v.items() if A.flen(i) == 0}
        vc = {i: c for i, c in v.items() if A.flen(i) > 0}
        return vb, vc

    def equations(self, side: str):
        """Rows (over phi variables) and right-hand sides for closure under B's arrows."""
        ext = self.ext
        A, F = ext.A, ext.field
        gens = [A.word(a.name) for a in ext.Q.arrows]
        rows, rhs = [], []
        for c in self.C:
            for g in gens:
                prod = A.multiply({c: 1}, g) if side == "right" else A.multiply(g, {c: 1})
                pb, pc = self.split(prod)
                eq: Dict[int, Vector] = {}  # B row -> coefficients over variables
                for (c2, b), k in self.var.items():
                    if c2 == c:
                        bg = A.multiply({b: 1}, g) if side == "right" else A.multiply(g, {b: 1})
                        for i, x in bg.items():
                            vaxpy(eq.setdefault(i, {}), {k: x}, F)
                for c2, x in pc.items():
                    for (c3, b), k in self.var.items():
                        if c3 == c2:
                            vaxpy(eq.setdefault(b, {}), {k: x}, F, -1)
                for i in set(eq) | set(pb):
                    row = eq.get(i, {})
                    val = F.norm(-pb.get(i, 0))
                    if row or val:
                        rows.append(row)
                        rhs.append(val)
        return rows, rhs

    def graph(self, phi: Vector) -> List[Vector]:
        out = []
        for c in self.C:
            v = {c: 1}
            for (c2, b), k in self.var.items():
                if c2 == c and phi.get(k):
                    v[b] = phi[k]
            out.append(v)
        return out

    def is_ideal(self, phi: Vector) -> bool:
        ext = self.ext
        A, F = ext.A, ext.field
        phi_of = {c: {} for c in self.C}
        for (c, b), k in self.var.items():
            if phi.get(k):
                phi_of[c][b] = phi[k]
        gens = [A.word(a.name) for a in ext.QF.arrows]
        for x, c in zip(self.graph(phi), self.C):
            for g in gens:
                for prod in (A.multiply(x, g), A.multiply(g, x)):
                    pb, pc = self.split(prod)
                    img: Vector = {}
                    for c2, y in pc.items():
                        vaxpy(img, phi_of[c2], F, y)
                    if img != pb:
                        return False
        return True


def complement_search(ext: ExtendedAlgebra, side: str = "right"):
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    g = _Graphs(ext)
    F = ext.field
    nvar = len(g.var)
    rows, rhs = g.equations(side)
    sol = solve_sparse(rows, rhs, nvar, F)
    if isinstance(sol, Infeasible):
        return NoComplement(side, sol.rank, sol.augmented_rank)
    other = "left" if side == "right" else "right"
    r2, h2 = g.equations(other)
    both = solve_sparse(rows + r2, rhs + h2, nvar, F)
    if not isinstance(both, Infeasible):
        candidates = [both.particular] + [_add(both.particular, k, F) for k in both.kernel.basis]
        for phi in candidates:
            if g.is_ideal(phi):
                return IdealComplement(side, _freeze(g.graph(phi)))
    return ComplementExists(side, _freeze(g.graph(sol.particular)))


def _add(u: Vector, v: Vector, F: Field) -> Vector:
    out = dict(u)
    vaxpy(out, v, F)
    return out


def _freeze(vecs):
    return tuple(tuple(sorted(v.items())) for v in vecs)


def split_verdict(ext: ExtendedAlgebra) -> Tuple[Verdict, dict]:
    found = {s: complement_search(ext, s) for s in ("right", "left")}
    if any(isinstance(r, NoComplement) for r in found.values()):
        v = Verdict.REFUTED
    elif any(isinstance(r, IdealComplement) for r in found.values()):
        v = Verdict.CERTIFIED
    else:
        v = Verdict.INCONCLUSIVE
    return v, found


def verify_ideal_complement(ext: ExtendedAlgebra, basis) -> bool:
    """B + M = A, B and M independent, A*M and M*A inside M."""
    A, F = ext.A, ext.field
    M = [dict(v) for v in basis]
    Bv = [{i: 1} for i in ext.b_in_a]
    full = Subspace.span(Bv + M, A.dim, F)
    if full.dim != A.dim or len(M) + len(Bv) != A.dim:
        return False
    Ms = Subspace.span(M, A.dim, F)
    for x in M:
        for i in range(A.dim):
            if A.multiply(x, {i: 1}) not in Ms or A.multiply({i: 1}, x) not in Ms:
                return False
    return True


# -- presentations -------------------------------------------------------------

@dataclass
class Presentation:
    spec: ExtensionSpec
    images: Dict[str, Vector]  # new arrow -> element of A
    span_length: int  # F-length needed to span A
    generators: List[PathLinComb]


def extract_presentation(A: FDAlgebra, B: QuiverAlgebra, embed: Sequence[Vector],
                         generators: Mapping[str, Vector], max_flen: int = 8) -> Presentation:
    """Write A as an extension of B by arrows and relations.

    ``embed[i]`` is the image in A of the i-th basis word of B; the images of
    B's vertices give the Peirce decomposition of A.
    """
    F = A.field
    q = B.quiver
    e = {v: embed[B.index[q.trivial(v)]] for v in q.vertices}
    new_arrows = []
    images: Dict[str, Vector] = {}
    for name, g in generators.items():
        comps = []
        for x in q.vertices:
            for y in q.vertices:
                c = A.multiply(A.multiply(e[y], g), e[x])
                if c:
                    comps.append((x, y, c))
        for x, y, c in comps:
            n = name if len(comps) == 1 else f"{name}_{x}_{y}"
            new_arrows.append((n, x, y))
            images[n] = c
    spec0 = ExtensionSpec(q.vertices, tuple((a.name, a.source, a.target) for a in q.arrows),
                          tuple(new_arrows),
                          tuple(lincomb_to_relation(r, q.order_key, F) for r in B.relations), (), F)
    shell = _Shell(spec0, B)
    QF = spec0.extended_quiver()
    letter = {a.name: embed[B.index[q.path((a.name,))]] for a in q.arrows}
    letter.update(images)
    memo: Dict[Path, Vector] = {}

    def psi(w: Path) -> Vector:
        got = memo.get(w)
        if got is None:
            if not w.arrows:
                got = e[w.source]
            elif len(w.arrows) == 1:
                got = letter[w.arrows[0]]
            else:
                rest = Path(w.arrows[1:], w.source, QF.arrow[w.arrows[1]].target)
                got = A.multiply(letter[w.arrows[0]], psi(rest))
            memo[w] = got
        return got

    # smallest F-length whose words span A
    ech = _Echelon(F)
    L0 = None
    prev = -1
    for L in range(max_flen + 1):
        for w in shell.t_words(L, L):
            ech.add(psi(w))
        r = len(ech.rows)
        if r == A.dim:
            L0 = L
            break
        if r == prev:
            raise NotGenerating(f"B and the generators span {r} of {A.dim} dimensions")
        prev = r
    if L0 is None:
        raise NotGenerating(f"A not spanned by words of F-length <= {max_flen}")
    words = shell.t_words(0, L0 + 1)
    widx = {w: k for k, w in enumerate(words)}
    m = Matrix.from_columns(A.dim, [psi(w) for w in words], F)
    _, K = rank_and_kernel(m)
    kers = sorted(K.basis, key=lambda v: QF.order_key(words[max(v, key=lambda k: QF.order_key(words[k]))]))
    chosen: List[PathLinComb] = []
    span = Subspace.zero(len(words), F)
    for k in kers:
        if span.dim == K.dim:
            break
        if k in span:
            continue
        elem = {words[i]: c for i, c in k.items()}
        chosen.append(elem)
        span = _close_full(shell, [{widx[p]: c for p, c in g.items()} for g in chosen], words)
    # the truncated closure can miss products whose top part leaves the window;
    # drop generators the others already produce (dim T/<rest> = dim A is exact)
    i_gens = [relation_to_lincomb(QF, r, F) for r in spec0.i_rels]
    for g in list(reversed(chosen)):
        rest = [h for h in chosen if h is not g]
        try:
            if QuiverAlgebra(QF, i_gens + rest, F).dim == A.dim:
                chosen = rest
        except (NotFiniteWithinBound, QuiverError):
            pass
    rels = tuple(lincomb_to_relation(g, QF.order_key, F) for g in chosen)
    spec = ExtensionSpec(spec0.vertices, spec0.arrows, spec0.new_arrows, spec0.i_rels, rels, F)
    return Presentation(spec, images, L0, chosen)


class _Shell:
    """Just enough of ExtendedAlgebra to enumerate and multiply words of T."""

    t_words = ExtendedAlgebra.t_words
    t_multiply = ExtendedAlgebra.t_multiply

    def __init__(self, spec: ExtensionSpec, B: QuiverAlgebra):
        self.spec = spec
        self.field = spec.field
        self.Q = spec.quiver()
        self.QF = spec.extended_quiver()
        i_gens = [relation_to_lincomb(self.QF, r, spec.field) for r in spec.i_rels]
        self.T = ReductionSystem.build(self.QF, i_gens, spec.field)


def _close_full(shell, vecs, words) -> Subspace:
    """Ideal span of vecs inside the truncated word space (products leaving it are dropped)."""
    F = shell.field
    idx = {w: k for k, w in enumerate(words)}
    ech = _Echelon(F)
    queue = [v for v in vecs if ech.add(v) is not None]
    arrows = [shell.QF.path((a.name,)) for a in shell.QF.arrows]
    while queue:
        v = queue.pop()
        elem = {words[k]: c for k, c in v.items()}
        for g in arrows:
            for prod in (shell.t_multiply({g: 1}, elem), shell.t_multiply(elem, {g: 1})):
                if not prod or any(p not in idx for p in prod):
                    continue
                w = {idx[p]: c for p, c in prod.items()}
                if ech.add(w) is not None:
                    queue.append(w)
    return Subspace.span(list(ech.rows.values()), len(words), F)


@dataclass
class RoundTrip:
    ok: bool
    dim: int
    bijective: bool
    multiplicative: bool
    identity_on_b: bool


def round_trip(pres: Presentation, A: FDAlgebra, B: QuiverAlgebra, embed: Sequence[Vector]) -> RoundTrip:
    """Rebuild T/J from the presentation and compare it with A through psi."""
    ext = build_extension(pres.spec)
    A2 = ext.A
    F = A.field
    letter = {a.name: embed[B.index[B.quiver.path((a.name,))]] for a in B.quiver.arrows}
    letter.update(pres.images)
    e = {v: embed[B.index[B.quiver.trivial(v)]] for v in B.quiver.vertices}

    def psi(w: Path) -> Vector:
        out = e[w.target]
        for a in w.arrows:
            out = A.multiply(out, letter[a])
        return out

    imgs = [psi(w) for w in A2.words]
    bij = A2.dim == A.dim and Subspace.span(imgs, A.dim, F).dim == A.dim
    mult = True
    for i in range(A2.dim):
        for j in range(A2.dim):
            lhs: Vector = {}
            for k, c in A2.mult(i, j).items():
                vaxpy(lhs, imgs[k], F, c)
            if lhs != A.multiply(imgs[i], imgs[j]):
                mult = False
                break
        if not mult:
            break
    idb = all(imgs[A2.index[p]] == embed[B.index[p]] for p in B.words)
    return RoundTrip(bij and mult and idb, A2.dim, bij, mult, idb)
