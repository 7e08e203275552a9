import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundext.linalg import GF, QQ
from boundext.quiver import (Arrow, FDAlgebra, GeneratorInhomogeneous, NotAdmissibleWithinBound,
                             NotFiniteWithinBound, NotInArrowSquare, Quiver, QuiverAlgebra, QuiverError,
                             build_bound_quiver_algebra, concat, enumerate_paths, ideal_span_up_to, lincomb)


def linear(n):
    return Quiver([str(i) for i in range(1, n + 1)], [Arrow(f"x{i}", str(i), str(i + 1)) for i in range(1, n)])


def loop():
    return Quiver(["1"], [Arrow("x", "1", "1")])


def count_paths(q, length):
    # adjacency matrix power oracle
    n = len(q.vertices)
    adj = [[0] * n for _ in range(n)]
    for a in q.arrows:
        adj[q.vertex_index[a.target]][q.vertex_index[a.source]] += 1
    power = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(length):
        power = [[sum(adj[i][k] * power[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return sum(map(sum, power))


def test_paths_compose_right_to_left():
    q = linear(3)
    p = q.path(["x2", "x1"])
    assert (p.source, p.target) == ("1", "3")
    assert concat(q.path(["x2"]), q.path(["x1"])) == p
    assert concat(q.path(["x1"]), q.path(["x2"])) is None
    with pytest.raises(QuiverError):
        q.path(["x1", "x2"])


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_linear_path_algebra_dimension(n):
    assert QuiverAlgebra(linear(n)).dim == n * (n + 1) // 2


@pytest.mark.parametrize("n", [1, 2, 5])
def test_truncated_polynomial(n):
    q = loop()
    A = QuiverAlgebra(q, [lincomb(q, [(1, ["x"] * n, None)])])
    assert A.dim == n and A.is_associative()


def test_infinite_algebra_detected():
    with pytest.raises(NotFiniteWithinBound):
        QuiverAlgebra(loop(), [], QQ, max_path_length=6)
    with pytest.raises(NotAdmissibleWithinBound):
        build_bound_quiver_algebra(loop(), [], max_path_length=6)


def test_generator_checks():
    q = linear(3)
    with pytest.raises(GeneratorInhomogeneous):
        lincomb(q, [(1, ["x1"], None), (1, ["x2"], None)])
    with pytest.raises(NotInArrowSquare):
        build_bound_quiver_algebra(q, [lincomb(q, [(1, ["x1"], None)])])


def test_commutative_square():
    q = Quiver("1234", [Arrow("a", "1", "2"), Arrow("b", "2", "4"), Arrow("c", "1", "3"), Arrow("d", "3", "4")])
    B = QuiverAlgebra(q, [lincomb(q, [(1, "ba", None), (-1, "dc", None)])])
    assert B.dim == 9
    assert B.word("b", "a") == B.word("d", "c")


@st.composite
def bounded_quivers(draw):
    nv = draw(st.integers(1, 3))
    vs = [str(i) for i in range(nv)]
    na = draw(st.integers(1, 4))
    arrows = [Arrow(f"a{k}", draw(st.sampled_from(vs)), draw(st.sampled_from(vs))) for k in range(na)]
    q = Quiver(vs, arrows)
    gens = [lincomb(q, [(1, p.arrows, None)]) for p in enumerate_paths(q, 4)[4]]
    length2 = enumerate_paths(q, 2)[2]
    for p in draw(st.lists(st.sampled_from(length2), max_size=3, unique=True)) if length2 else []:
        same = [r for r in length2 if (r.source, r.target) == (p.source, p.target) and r != p]
        if same and draw(st.booleans()):
            c = draw(st.integers(-2, 2))
            gens.append(lincomb(q, [(1, p.arrows, None), (c, draw(st.sampled_from(same)).arrows, None)]))
        else:
            gens.append(lincomb(q, [(1, p.arrows, None)]))
    return q, [g for g in gens if g]


@settings(max_examples=40, deadline=None)
@given(bounded_quivers(), st.sampled_from([QQ, GF(10007)]))
def test_dimension_matches_ideal_span_oracle(data, F):
    q, gens = data
    A = QuiverAlgebra(q, gens, F)
    ideal, paths = ideal_span_up_to(q, gens, 3, F)
    assert A.dim == len(paths) - ideal.dim
    for k in range(4):
        assert len(enumerate_paths(q, 3)[k]) == count_paths(q, k)


@settings(max_examples=25, deadline=None)
@given(bounded_quivers(), st.randoms(use_true_random=False))
def test_arrow_order_does_not_matter(data, rnd):
    q, gens = data
    arrows = list(q.arrows)
    rnd.shuffle(arrows)
    q2 = Quiver(q.vertices, arrows)
    gens2 = [{q2.path(p.arrows, p.source): c for p, c in g.items()} for g in gens]
    A, A2 = QuiverAlgebra(q, gens), QuiverAlgebra(q2, gens2)
    assert A.dim == A2.dim
    assert {k: len(v) for k, v in A.peirce.items()} == {k: len(v) for k, v in A2.peirce.items()}


@settings(max_examples=20, deadline=None)
@given(bounded_quivers())
def test_multiplication_is_associative(data):
    q, gens = data
    A = QuiverAlgebra(q, gens)
    if A.dim <= 25:
        assert A.is_associative()
        assert A.idempotents_ok()


def test_monomial_normal_words_avoid_relations():
    q = Quiver("12", [Arrow("a", "1", "2"), Arrow("b", "2", "1")])
    gens = [lincomb(q, [(1, "ab", None)]), lincomb(q, [(1, "bab", None)])]
    A = QuiverAlgebra(q, gens)
    bad = {("a", "b"), ("b", "a", "b")}
    for w in A.words:
        for i, j in itertools.combinations(range(len(w.arrows) + 1), 2):
            assert w.arrows[i:j] not in bad
    # brute force: all words avoiding the monomials, up to length 4
    brute = sum(1 for lev in enumerate_paths(q, 4) for p in lev
                if not any(p.arrows[i:j] in bad for i, j in itertools.combinations(range(len(p.arrows) + 1), 2)))
    assert A.dim == brute


def test_fd_algebra_matrix_units():
    lab = ["e11", "e12", "e21", "e22"]
    table = {(lab.index(f"e{i}{j}"), lab.index(f"e{j}{k}")): {lab.index(f"e{i}{k}"): 1}
             for i in (1, 2) for j in (1, 2) for k in (1, 2)}
    M = FDAlgebra(QQ, lab, table, {"1": {0: 1}, "2": {3: 1}})
    assert M.is_associative() and M.idempotents_ok()
    assert M.one() == {0: 1, 3: 1}
    assert M.trace_radical().dim == 0
