import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundext.cli import dumps, fixture_names, fixture_text, main, parse_field
from boundext.extension import ExtensionSpec
from boundext.linalg import GF, QQ
from boundext.specfile import (SpecInhomogeneous, SpecSyntaxError, SpecUnknownName, parse_lincomb, parse_spec,
                               serialize_spec, spec_digest)

from conftest import FIXTURES

HEAD = "vertex 1\nvertex 2\nvertex 3\narrow x : 1 -> 2\narrow y : 2 -> 3\narrow z : 1 -> 3\n"


def test_all_fixtures_ship():
    assert sorted(FIXTURES) == fixture_names()


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip(name):
    spec = parse_spec(fixture_text(name))
    assert parse_spec(serialize_spec(spec)) == spec


def test_ex6_1_fixture_shape():
    spec = parse_spec(fixture_text("ex6_1"))
    assert (len(spec.vertices), len(spec.arrows), len(spec.new_arrows), len(spec.j_rels)) == (5, 5, 1, 1)


def test_lincomb_grammar():
    terms = parse_lincomb("2 x*y - 3/2 z + @1")
    assert [t[:3] for t in terms] == [(2, ("x", "y"), None), (Fraction(-3, 2), ("z",), None), (1, (), "1")]


@pytest.mark.parametrize("text, err, line", [
    (HEAD + "rel I beta*alpha\n", SpecUnknownName, 7),
    (HEAD + "rel I y*x + 1\n", SpecSyntaxError, 7),
    (HEAD + "rel I y*x z\n", SpecSyntaxError, 7),
    (HEAD + "newarrow n : 3 -> 1\nrel J x*n - z*n\n", SpecInhomogeneous, 8),
    (HEAD + "rel I x*y\n", SpecSyntaxError, 7),
    (HEAD + "arrow w : 1 -> 9\n", SpecUnknownName, 7),
    ("vertex 1\nfield F 12\n", SpecSyntaxError, 2),
    ("vertex 1\nlimit max_wibble 3\n", SpecSyntaxError, 2),
    ("bogus\n", SpecSyntaxError, 1),
])
def test_parse_errors_have_positions(text, err, line):
    with pytest.raises(err) as exc:
        parse_spec(text)
    assert exc.value.line == line and exc.value.col >= 1


def test_comments_and_field():
    spec = parse_spec("# header\nfield F 10007  # mod p\n" + HEAD + "rel I y*x   # zero\n")
    assert spec.field == GF(10007) and len(spec.i_rels) == 1


coefs = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=7)).filter(bool)


@settings(max_examples=50)
@given(st.lists(st.tuples(coefs, st.sampled_from([("z", "n"), ("y", "x", "n")])), min_size=1, max_size=2,
                unique_by=lambda t: t[1]),
       st.sampled_from([QQ, GF(10007)]))
def test_serialize_round_trip(terms, F):
    rel = tuple((c.numerator if Fraction(c).denominator == 1 else c, w, None) for c, w in terms)
    spec = ExtensionSpec(("1", "2", "3"), (("x", "1", "2"), ("y", "2", "3"), ("z", "1", "3")),
                         (("n", "3", "1"),), (), (rel,), F, (("max_degree", 4),))
    assert parse_spec(serialize_spec(spec)) == spec


def test_parse_field():
    assert parse_field("Q") == QQ
    assert parse_field("F10007") == GF(10007) == parse_field("F:10007")
    with pytest.raises(ValueError):
        parse_field("R")


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_check_ex6_1(capsys):
    code, out = run(["check", "--fixture", "ex6_1"], capsys)
    assert "left_bounded: Certified" in out.out and "split: Refuted" in out.out
    assert code == 0


def test_check_rea(capsys):
    code, out = run(["check", "--fixture", "rea"], capsys)
    assert "tensor_nilpotent: Refuted (up to bound)" in out.out
    assert code == 1


def test_check_ex6_2(capsys):
    code, out = run(["check", "--fixture", "ex6_2"], capsys)
    assert "right_bounded: Certified" in out.out and "split: Refuted" in out.out
    assert code == 0


def test_split_command_exit_codes(capsys):
    assert run(["split", "--fixture", "ex6_1"], capsys)[0] == 1
    assert run(["split", "--fixture", "nocycle4"], capsys)[0] == 0
    assert run(["split", "--fixture", "matrix2"], capsys)[0] == 2


def test_input_errors_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.qext"
    bad.write_text("vertex 1\nrel I beta*alpha\n")
    code, out = run(["check", str(bad)], capsys)
    assert code == 3 and "line 2" in out.err
    assert run(["check", "--fixture", "nope"], capsys)[0] == 3
    assert run(["check"], capsys)[0] == 3
    assert run(["check", "--fixture", "ex6_1", "--field", "F12"], capsys)[0] == 3


def test_j_meeting_b_is_an_input_error(tmp_path, capsys):
    spec = fixture_text("ex6_2") + "rel J c*b\n"
    p = tmp_path / "meet.qext"
    p.write_text(spec)
    assert run(["check", str(p)], capsys)[0] == 3


def test_reports_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["all", "--fixture", "ex6_2", "--json", str(a)], capsys)
    run(["all", "--fixture", "ex6_2", "--json", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["spec_digest"] == spec_digest(parse_spec(fixture_text("ex6_2")))
    assert dumps(report) == a.read_text()


@pytest.mark.parametrize("name", FIXTURES)
def test_rational_and_prime_field_agree(name, tmp_path, capsys):
    q, p = tmp_path / "q.json", tmp_path / "p.json"
    cq = run(["all", "--fixture", name, "--json", str(q)], capsys)[0]
    cp = run(["all", "--fixture", name, "--field", "F10007", "--json", str(p)], capsys)[0]
    rq, rp = json.loads(q.read_text()), json.loads(p.read_text())
    for r in (rq, rp):
        del r["field"], r["spec_digest"]
    assert cq == cp and rq == rp


def test_json_to_stdout(capsys):
    code, out = run(["present", "--fixture", "matrix2", "--json", "-"], capsys)
    report = json.loads(out.out)
    assert code == 0 and report["analyses"]["present"]["round_trip"]["ok"]


def test_homology_and_gldim_commands(capsys):
    code, out = run(["homology", "--fixture", "ex6_1", "--max-degree", "4", "--json", "-"], capsys)
    rec = json.loads(out.out)["analyses"]["homology"]
    assert code == 0 and rec["HH_A"] == rec["HH_B"] == [5, 0, 0, 0, 0]
    code, out = run(["gldim", "--fixture", "ex6_2", "--json", "-"], capsys)
    assert code == 0 and json.loads(out.out)["analyses"]["gldim"]["gldim_B"] == 1
