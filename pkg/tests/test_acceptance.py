"""The ten acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import itertools

import pytest

from boundext.extension import (CriterionHolds, Holds, IdealComplement, NoComplement, Verdict, boundedness_report,
                                complement_search, enumerate_relative_cycles, extract_presentation,
                                has_j_interrupter, length_index, nilpotency_criterion,
                                one_sided_projectivity_criterion, round_trip, split_verdict,
                                verify_ideal_complement)
from boundext.homology import (hochschild_homology, jz_dimension_report, gldim_bound_checks, perturbed_section,
                               relative_bar_complex, truncated_bar_oracle)
from boundext.linalg import QQ
from boundext.modules import (Nilpotent, NotNilpotentUpTo, forget_right, global_dimension, projective_cover,
                              projective_dimension, tensor_power_nilpotency)
from boundext.quiver import FDAlgebra, Quiver, QuiverAlgebra, enumerate_paths, lincomb

from conftest import FIXTURES, load
from test_quiver import loop


def report(capsys, n, checks):
    failed = [label for label, ok in checks if not ok]
    with capsys.disabled():
        print(f"\nACCEPTANCE {n}: {'PASS' if not failed else 'FAIL'}" + (f" ({', '.join(failed)})" if failed else ""))
    assert not failed


def monomial_count(q, bad, max_len):
    """Paths avoiding the forbidden subwords."""
    def ok(p):
        w = p.arrows
        return not any(w[i:j] in bad for i, j in itertools.combinations(range(len(w) + 1), 2))
    return sum(1 for lev in enumerate_paths(q, max_len) for p in lev if ok(p))


def test_criterion_1_ex6_1(capsys):
    e = load("ex6_1")
    b_oracle = monomial_count(e.Q, {("beta", "alpha")}, 12)
    be1 = sum(1 for w in e.B.words if w.source == "1")
    M = e.quotient_bimodule()
    cover = projective_cover(forget_right(M))
    crit = one_sided_projectivity_criterion(e, "left")
    cyc = next(c for c in enumerate_relative_cycles(e, 1) if str(c) == "a(bcd)a")
    nil = tensor_power_nilpotency(M, 10)
    rep = boundedness_report(e)
    verdict, found = split_verdict(e)
    report(capsys, 1, [
        ("dim B = 20", e.B.dim == 20 == b_oracle),
        ("dim A = 47", e.A.dim == 47 == b_oracle + 3 * be1),
        ("cover (Be1)^3", sorted(cover.summands) == [("1", "*")] * 3 and cover.syzygy.is_zero()),
        ("factor basis {e2, b, bc}", isinstance(crit, Holds) and crit.factors == (("a", ("@2", "b", "b*c")),)),
        ("length index 2", length_index(e) == 2),
        ("a interrupts a(bcd)a", has_j_interrupter(e, cyc) == 1),
        ("criterion holds", isinstance(nilpotency_criterion(e), CriterionHolds)),
        ("tensor powers vanish by 10", isinstance(nil, Nilpotent) and nil.index <= 10),
        ("pd finite within 10", isinstance(projective_dimension(M, 10), int)),
        ("left bounded", rep.left.bounded == Verdict.CERTIFIED),
        ("no right complement", isinstance(found["right"], NoComplement)),
        ("split refuted", verdict == Verdict.REFUTED),
    ])


def test_criterion_2_rea(capsys):
    e = load("rea")
    cyc = next(c for c in enumerate_relative_cycles(e, 1) if str(c) == "d(c)d")
    nil = tensor_power_nilpotency(e.quotient_bimodule(), 6)
    report(capsys, 2, [
        ("basis {d, cd, dc, cdc}", sorted(str(w) for w in e.quotient_words()) == ["c*d", "c*d*c", "d", "d*c"]),
        ("dcd has no interrupter", has_j_interrupter(e, cyc) is None),
        ("powers nonzero up to 6", isinstance(nil, NotNilpotentUpTo) and len(nil.dims) == 6 and all(nil.dims)),
    ])


def test_criterion_3_ex6_2(capsys):
    e = load("ex6_2")
    rep = boundedness_report(e)
    report(capsys, 3, [
        ("no relative cycles", list(enumerate_relative_cycles(e)) == []),
        ("right criterion holds", isinstance(one_sided_projectivity_criterion(e, "right"), Holds)),
        ("right bounded", rep.right.bounded == Verdict.CERTIFIED),
        ("split refuted", split_verdict(e)[0] == Verdict.REFUTED),
        ("B hereditary", e.spec.i_rels == () and global_dimension(e.B) == 1),
    ])


def has_oriented_cycle(q):
    succ = {v: [a.target for a in q.arrows if a.source == v] for v in q.vertices}
    def reach(v, seen):
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                reach(w, seen)
        return seen
    return any(v in reach(v, set()) for v in q.vertices)


def test_criterion_4_nocycle4(capsys):
    e = load("nocycle4")
    report(capsys, 4, [
        ("Q_F has an oriented cycle", has_oriented_cycle(e.QF)),
        ("no relative cycles", list(enumerate_relative_cycles(e)) == []),
        ("tensor nilpotent", isinstance(tensor_power_nilpotency(e.quotient_bimodule()), Nilpotent)),
    ])


def test_criterion_5_split_fixtures(capsys):
    e = load("split_semisimple")
    r = complement_search(e, "right")
    radical = sorted(i for i, w in enumerate(e.A.words) if w.arrows)
    found = sorted(k for v in (r.basis if isinstance(r, IdealComplement) else ()) for k, _ in v)
    cyc = load("split_semisimple_cyclic")
    report(capsys, 5, [
        ("ideal complement", isinstance(r, IdealComplement) and verify_ideal_complement(e, r.basis)),
        ("complement is the radical", found == radical),
        ("cyclic not nilpotent", isinstance(tensor_power_nilpotency(cyc.quotient_bimodule(), 10), NotNilpotentUpTo)),
    ])


def test_criterion_6_relative_homology(capsys):
    checks = []
    for name in FIXTURES:
        e = load(name)
        deg = e.spec.limit("max_degree", 6)
        c1 = relative_bar_complex(e, None, deg)
        c2 = relative_bar_complex(e, None, deg, perturbed_section(e))
        checks.append((f"{name}: d^2 = 0", c1.is_complex()))
        checks.append((f"{name}: sections agree", c1.dims == c2.dims and all(c1.d[m] == c2.d[m] for m in c1.d)))
        nil = tensor_power_nilpotency(e.quotient_bimodule())
        if isinstance(nil, Nilpotent):
            h = c1.homology(deg)
            checks.append((f"{name}: vanishing from {nil.index}", all(h[m] == 0 for m in range(nil.index, deg + 1))))
    report(capsys, 6, checks)


def test_criterion_7_jz_dimensions(capsys):
    checks = []
    for name in ("ex6_1", "ex6_2"):
        r = jz_dimension_report(load(name), 6)
        n0 = r["n0"]
        checks.append((f"{name}: equal above n0", all(r["HH_B"][m] == r["HH_A"][m] for m in range(n0 + 1, 7))))
        checks.append((f"{name}: pinned", (r["HH_B"], r["HH_A"], r["H_rel"], n0) ==
                       ([5, 0, 0, 0, 0, 0, 0], [5, 0, 0, 0, 0, 0, 0], [5, 0, 0, 0, 0, 0, 0], 1)))
    report(capsys, 7, checks)


def test_criterion_8_global_dimension_bounds(capsys):
    checks = []
    for name in ("ex6_1", "ex6_2"):
        g = gldim_bound_checks(load(name))
        a, b, r, n = g["gldim_A"], g["gldim_B"], g["pd_bimodule"], g["nilpotency_index"]
        checks.append((f"{name}: b <= r + a", None not in (a, b, r) and b <= r + a))
        checks.append((f"{name}: a <= n - 1 + b", None not in (a, b, n) and a <= n - 1 + b))
    report(capsys, 8, checks)


def test_criterion_9_oracle(capsys):
    algs = {}
    for name in FIXTURES:
        e = load(name)
        for tag, alg in (("B", e.B), ("A", e.A)):
            if alg.dim <= 8:
                algs[f"{name}.{tag}"] = alg
    q = loop()
    dual = QuiverAlgebra(q, [lincomb(q, [(1, "xx", None)])])
    checks = [(k, hochschild_homology(a, None, 3).dims == truncated_bar_oracle(a, None, 3).dims)
              for k, a in sorted(algs.items())]
    checks.append(("k[x]/(x^2)", hochschild_homology(dual, None, 3).dims[1:] == (1, 1, 1)
                   == truncated_bar_oracle(dual, None, 3).dims[1:]))
    report(capsys, 9, checks)


def test_criterion_10_presentation_round_trip(capsys):
    e = load("ex6_1")
    embed = [{i: 1} for i in e.b_in_a]
    pres = extract_presentation(e.A, e.B, embed, {"a": e.A.word("a")})
    rt = round_trip(pres, e.A, e.B, embed)
    lab = ["e11", "e12", "e21", "e22"]
    table = {(lab.index(f"e{i}{j}"), lab.index(f"e{j}{k}")): {lab.index(f"e{i}{k}"): 1}
             for i in (1, 2) for j in (1, 2) for k in (1, 2)}
    M2 = FDAlgebra(QQ, lab, table, {"1": {0: 1}, "2": {3: 1}})
    D = QuiverAlgebra(Quiver("12", []))
    emb2 = [{0: 1}, {3: 1}]
    rt2 = round_trip(extract_presentation(M2, D, emb2, {"g": {1: 1, 2: 1}}), M2, D, emb2)
    report(capsys, 10, [
        ("ex6_1", rt.ok and rt.dim == 47 and rt.multiplicative),
        ("matrix2", rt2.ok and rt2.dim == 4 and rt2.multiplicative),
    ])
