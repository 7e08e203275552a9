"""Command line front end: `boundext <command> [spec.qext | --fixture name]`."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from typing import List, Optional

from . import __version__
from .extension import (ExtendedAlgebra, IdealComplement, JMeetsB, NoComplement, Verdict, boundedness_report,
                        build_extension, enumerate_relative_cycles, extract_presentation, length_index,
                        round_trip, split_verdict, verify_ideal_complement)
from .homology import jz_dimension_report, gldim_bound_checks, perturbed_section, relative_bar_complex
from .linalg import GF, QQ
from .modules import Nilpotent
from .quiver import QuiverError
from .specfile import SpecError, parse_spec, serialize_lincomb, spec_digest

COMMANDS = ("check", "homology", "gldim", "split", "present", "all")
EXIT = {Verdict.CERTIFIED: 0, Verdict.REFUTED: 1, Verdict.INCONCLUSIVE: 2}
INPUT_ERROR = 3
# the headline verdict of each analysis; the others are diagnostics
NOTES = (
    "Searches are bounded: tensor_nilpotent Refuted means every power up to the stated bound is nonzero.",
    "A projective dimension beyond the bound is reported as Inconclusive, never as infinite.",
)
GATES = {"check": "bounded", "homology": "homology_checks", "gldim": "gldim_bounds", "split": "split",
         "present": "presentation"}


def fixture_names() -> List[str]:
    files = resources.files("boundext").joinpath("fixtures").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".qext"))


def fixture_text(name: str) -> str:
    path = resources.files("boundext").joinpath("fixtures", f"{name}.qext")
    if not path.is_file():
        raise SpecError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return path.read_text()


def parse_field(text: str):
    t = text.strip().upper().replace(":", "").replace(" ", "")
    if t == "Q":
        return QQ
    if t.startswith("F"):
        t = t[1:]
    if t.isdigit():
        return GF(int(t))
    raise ValueError(f"bad field {text!r}; use Q or F<prime>")


def _canon(x):
    """JSON-ready copy with canonical numbers."""
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    if isinstance(x, Verdict):
        return x.value
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def dumps(report: dict) -> str:
    return json.dumps(_canon(report), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def worst(verdicts) -> Verdict:
    vs = list(verdicts)
    if Verdict.REFUTED in vs:
        return Verdict.REFUTED
    if Verdict.INCONCLUSIVE in vs:
        return Verdict.INCONCLUSIVE
    return Verdict.CERTIFIED


def _either(a: Verdict, b: Verdict) -> Verdict:
    if Verdict.CERTIFIED in (a, b):
        return Verdict.CERTIFIED
    if Verdict.INCONCLUSIVE in (a, b):
        return Verdict.INCONCLUSIVE
    return Verdict.REFUTED


def _complement(ext: ExtendedAlgebra, r) -> dict:
    if isinstance(r, NoComplement):
        return {"result": "NoComplement", "rank": r.rank, "augmented_rank": r.augmented_rank}
    out = {"result": type(r).__name__, "dim": len(r.basis)}
    if isinstance(r, IdealComplement):
        out["verified"] = verify_ideal_complement(ext, r.basis)
    return out


# -- analyses: each returns (record, headline verdicts) -----------------------

def analyse_split(ext: ExtendedAlgebra, opts):
    v, found = split_verdict(ext)
    rec = {"verdict": v, "right": _complement(ext, found["right"]), "left": _complement(ext, found["left"])}
    return rec, {"split": v}


def analyse_check(ext: ExtendedAlgebra, opts):
    A, B = ext.A, ext.B
    rep = boundedness_report(ext, opts.tensor_bound, opts.bound)
    cycles = [str(c) for c in enumerate_relative_cycles(ext, 1)]
    rec = {
        "dims": {"B": B.dim, "A": A.dim, "quotient": A.dim - B.dim},
        "quotient_basis": [str(w) for w in ext.quotient_words()],
        "length_index": length_index(ext),
        "relative_cycles_flen1": cycles,
        "boundedness": rep.to_dict(),
    }
    split, sv = analyse_split(ext, opts)
    rec["split"] = split
    verdicts = {"tensor_nilpotent": rep.tensor_verdict, "left_bounded": rep.left.bounded,
                "right_bounded": rep.right.bounded, "split": sv["split"]}
    verdicts["bounded"] = _either(rep.left.bounded, rep.right.bounded)
    return rec, verdicts


def analyse_homology(ext: ExtendedAlgebra, opts):
    deg = opts.max_degree
    rep = boundedness_report(ext, opts.tensor_bound, opts.bound)
    bounded = Verdict.CERTIFIED in (rep.left.bounded, rep.right.bounded)
    jz = jz_dimension_report(ext, deg, bounded)
    c1 = relative_bar_complex(ext, None, deg)
    c2 = relative_bar_complex(ext, None, deg, perturbed_section(ext))
    same = c1.dims == c2.dims and all(c1.d[m] == c2.d[m] for m in c1.d)
    index = rep.tensor.index if isinstance(rep.tensor, Nilpotent) else None
    vanishing = None
    if index is not None:
        vanishing = all(jz["H_rel"][m] == 0 for m in range(index, deg + 1))
    rec = dict(jz)
    rec.update({"d_squared_zero": c1.is_complex(), "section_independent": same,
                "nilpotency_index": index, "vanishing_above_index": vanishing})
    checks = [c1.is_complex(), same, jz["injection_check"]]
    if vanishing is not None:
        checks.append(vanishing)
    if jz["equality_check"] is not None:
        checks.append(jz["equality_check"])
    v = Verdict.CERTIFIED if all(checks) else Verdict.REFUTED
    return rec, {"homology_checks": v}


def analyse_gldim(ext: ExtendedAlgebra, opts):
    rec = gldim_bound_checks(ext, opts.bound, opts.tensor_bound)
    vs = []
    for key in ("b_le_r_plus_a", "a_le_n_minus_1_plus_b"):
        vs.append({"pass": Verdict.CERTIFIED, "fail": Verdict.REFUTED}.get(rec[key], Verdict.INCONCLUSIVE))
    return rec, {"gldim_bounds": worst(vs)}


def analyse_present(ext: ExtendedAlgebra, opts):
    A, B = ext.A, ext.B
    embed = [{i: 1} for i in ext.b_in_a]
    gens = {name: A.word(name) for name, _, _ in ext.spec.new_arrows}
    pres = extract_presentation(A, B, embed, gens)
    rt = round_trip(pres, A, B, embed)
    rec = {
        "new_arrows": [list(a) for a in pres.spec.new_arrows],
        "j_relations": [serialize_lincomb(r) for r in pres.spec.j_rels],
        "span_length": pres.span_length,
        "round_trip": {"ok": rt.ok, "dim": rt.dim, "bijective": rt.bijective,
                       "multiplicative": rt.multiplicative, "identity_on_b": rt.identity_on_b},
    }
    return rec, {"presentation": Verdict.CERTIFIED if rt.ok else Verdict.REFUTED}


ANALYSES = {"check": analyse_check, "homology": analyse_homology, "gldim": analyse_gldim,
            "split": analyse_split, "present": analyse_present}


def run(command: str, spec, opts) -> dict:
    """Build the extension, run the analyses and assemble the report."""
    ext = build_extension(spec)
    names = [c for c in ANALYSES if c != "split"] if command == "all" else [command]
    analyses, verdicts = {}, {}
    for name in names:
        rec, vs = ANALYSES[name](ext, opts)
        analyses[name] = rec
        verdicts.update(vs)
    gating = [verdicts[GATES[name]] for name in names]
    return {
        "tool": "boundext",
        "version": __version__,
        "spec_digest": spec_digest(spec),
        "field": str(spec.field),
        "command": command,
        "analyses": analyses,
        "verdicts": verdicts,
        "exit_code": EXIT[worst(gating)],
        "notes": list(NOTES),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boundext", description="Bounded extensions of bound quiver algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", nargs="?", help="path to a .qext file")
    p.add_argument("--fixture", help="use a bundled example instead of a file")
    p.add_argument("--field", help="override the field: Q or F<prime>")
    p.add_argument("--max-degree", type=int, help="top homological degree (default: the limit in the input, else 6)")
    p.add_argument("--bound", type=int, default=12, help="search bound for projective dimensions")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if (args.spec is None) == (args.fixture is None):
            raise SpecError("give exactly one of a spec file or --fixture")
        if args.fixture:
            text = fixture_text(args.fixture)
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_spec(text)
        if args.field:
            spec = spec.with_field(parse_field(args.field))
        args.max_degree = args.max_degree or spec.limit("max_degree", 6)
        args.tensor_bound = spec.limit("max_tensor_power", 10)
        report = run(args.command, spec, args)
    except (SpecError, QuiverError, JMeetsB, OSError, ValueError) as exc:
        print(f"boundext: error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    out = dumps(report)
    if args.json == "-":
        sys.stdout.write(out)
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        for k, v in sorted(report["verdicts"].items()):
            print(f"{k}: {_canon(v)}" + (" (up to bound)" if k == "tensor_nilpotent" and v == Verdict.REFUTED else ""))
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
