import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from boundext.extension import (ComplementExists, CriterionFails, CriterionHolds, ExtensionSpec, Holds,
                                IdealComplement, JMeetsB, NoComplement, NotApplicable, Verdict,
                                boundedness_report, build_extension, complement_search, enumerate_relative_cycles,
                                extract_presentation, has_j_interrupter, length_index, nilpotency_criterion,
                                one_sided_projective, one_sided_projectivity_criterion, round_trip, split_verdict,
                                verify_ideal_complement)
from boundext.linalg import QQ
from boundext.modules import Nilpotent, tensor_power_nilpotency
from boundext.quiver import FDAlgebra, Quiver, QuiverAlgebra

from conftest import FIXTURES, load
from test_quiver import bounded_quivers


def R(*terms):
    return tuple((c, tuple(w.split("*")), None) if not w.startswith("@") else (c, (), w[1:]) for c, w in terms)


def test_j_meeting_b_is_rejected():
    spec = load("ex6_2").spec
    bad = ExtensionSpec(spec.vertices, spec.arrows, spec.new_arrows, (),
                        spec.j_rels + (R((1, "c*b")),))
    with pytest.raises(JMeetsB) as err:
        build_extension(bad)
    assert err.value.witness


def test_ex6_1_cycles_and_interrupters():
    e = load("ex6_1")
    cycles = [str(c) for c in enumerate_relative_cycles(e, 1)]
    assert sorted(cycles) == ["a(b*c*d*alpha*beta)a", "a(bcd)a"]
    cyc = next(c for c in enumerate_relative_cycles(e, 1) if str(c) == "a(bcd)a")
    assert has_j_interrupter(e, cyc) == 1
    assert length_index(e) == 2


def test_rea_has_uninterrupted_cycle():
    e = load("rea")
    crit = nilpotency_criterion(e)
    assert isinstance(crit, CriterionFails) and str(crit.witness) == "d(c)d"


def brute_criterion(e, bound):
    return any(has_j_interrupter(e, c) is None for c in enumerate_relative_cycles(e, bound))


@pytest.mark.parametrize("name", FIXTURES)
def test_criterion_matches_cycle_enumeration(name):
    e = load(name)
    for bound in (1, 2, 3):
        assert isinstance(nilpotency_criterion(e, bound), CriterionFails) == brute_criterion(e, bound)


def test_nocycle4_has_no_relative_cycles():
    e = load("nocycle4")
    assert list(enumerate_relative_cycles(e)) == []
    assert isinstance(nilpotency_criterion(e), CriterionHolds)


def test_one_sided_criteria():
    e1, e2 = load("ex6_1"), load("ex6_2")
    h = one_sided_projectivity_criterion(e1, "left")
    assert isinstance(h, Holds) and h.factors == (("a", ("@2", "b", "b*c")),)
    assert isinstance(one_sided_projectivity_criterion(e1, "right"), NotApplicable)
    assert not one_sided_projective(e1, "right")
    assert isinstance(one_sided_projectivity_criterion(e2, "right"), Holds)


def test_complement_search_results():
    assert isinstance(complement_search(load("ex6_1"), "right"), NoComplement)
    assert isinstance(complement_search(load("ex6_1"), "left"), ComplementExists)
    assert isinstance(complement_search(load("ex6_2"), "left"), NoComplement)
    assert isinstance(complement_search(load("matrix2"), "left"), ComplementExists)
    assert split_verdict(load("matrix2"))[0] == Verdict.INCONCLUSIVE
    for name in ("nocycle4", "split_semisimple", "split_semisimple_cyclic", "rea"):
        e = load(name)
        r = complement_search(e, "right")
        assert isinstance(r, IdealComplement) and verify_ideal_complement(e, r.basis)


@pytest.mark.parametrize("name", FIXTURES)
def test_fields_agree(name):
    q, p = load(name), load(name, 10007)
    assert (q.A.dim, q.B.dim) == (p.A.dim, p.B.dim)
    assert [str(w) for w in q.quotient_words()] == [str(w) for w in p.quotient_words()]
    assert boundedness_report(q).to_dict() == boundedness_report(p).to_dict()
    assert split_verdict(q)[0] == split_verdict(p)[0]


@pytest.mark.parametrize("name", FIXTURES)
def test_report_is_consistent(name):
    assert boundedness_report(load(name)).consistent


def test_presentation_of_matrix_algebra():
    lab = ["e11", "e12", "e21", "e22"]
    table = {(lab.index(f"e{i}{j}"), lab.index(f"e{j}{k}")): {lab.index(f"e{i}{k}"): 1}
             for i in (1, 2) for j in (1, 2) for k in (1, 2)}
    M = FDAlgebra(QQ, lab, table, {"1": {0: 1}, "2": {3: 1}})
    B = QuiverAlgebra(Quiver("12", []))
    embed = [{0: 1}, {3: 1}]
    pres = extract_presentation(M, B, embed, {"g": {1: 1, 2: 1}})
    assert sorted(a[0] for a in pres.spec.new_arrows) == ["g_1_2", "g_2_1"]
    assert round_trip(pres, M, B, embed).ok


@st.composite
def monomial_extensions(draw):
    q, gens = draw(bounded_quivers())
    B = QuiverAlgebra(q, gens)
    assume(B.dim <= 12)
    vs = q.vertices
    new = [(f"n{k}", draw(st.sampled_from(vs)), draw(st.sampled_from(vs))) for k in range(draw(st.integers(1, 2)))]
    i_rels = tuple(tuple((c, p.arrows, None) for p, c in g.items()) for g in gens)
    j_rels = []
    # kill F-length two, so A is finite dimensional
    for a, sa, ta in new:
        for b, sb, tb in new:
            for w in B.words:
                if w.source == tb and w.target == sa:
                    j_rels.append(((1, (a,) + w.arrows + (b,), None),))
    # and some F-length one words, which create interrupters
    ones = [(w2.arrows + (a,) + w1.arrows) for a, s, t in new for w1 in B.words for w2 in B.words
            if w1.target == s and w2.source == t]
    for word in draw(st.lists(st.sampled_from(ones), max_size=4, unique=True)):
        j_rels.append(((1, word, None),))
    return ExtensionSpec(vs, tuple((a.name, a.source, a.target) for a in q.arrows), tuple(new), i_rels,
                         tuple(j_rels))


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(monomial_extensions())
def test_criteria_are_sound(spec):
    e = build_extension(spec)
    crit = nilpotency_criterion(e)
    if isinstance(crit, CriterionHolds):
        # powers of a non-nilpotent bimodule grow exponentially, so only the claim is checked
        assert isinstance(tensor_power_nilpotency(e.quotient_bimodule(), 8), Nilpotent)
    else:
        assert has_j_interrupter(e, crit.witness) is None
    for side in ("left", "right"):
        if isinstance(one_sided_projectivity_criterion(e, side), Holds):
            assert one_sided_projective(e, side)
    for side in ("left", "right"):
        r = complement_search(e, side)
        if isinstance(r, IdealComplement):
            assert verify_ideal_complement(e, r.basis)
