"""The line-oriented .qext format.

    field Q                      # or: field F 10007
    vertex 1
    arrow alpha : 5 -> 1
    newarrow a : 2 -> 1
    rel I beta*alpha
    rel J a*b*c*d - alpha*beta   # x*y means first y, then x; @v is a vertex
    limit max_degree 6
"""

from __future__ import annotations

import hashlib
import re
from fractions import Fraction
from typing import List, Tuple

from .extension import ExtensionSpec, relation_to_lincomb
from .linalg import GF, QQ, Field
from .quiver import GeneratorInhomogeneous, QuiverError

LIMITS = ("max_path_length", "max_tensor_power", "max_degree")


class SpecError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)


class SpecSyntaxError(SpecError):
    pass


class SpecUnknownName(SpecError):
    pass


class SpecInhomogeneous(SpecError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<sign>[+-])|(?P<num>\d+(?:/\d+)?)(?P<star>\*)?|(?P<path>@[\w.]+|[A-Za-z_][\w.]*(?:\*[A-Za-z_][\w.]*)*))")


def _coef(text: str):
    c = Fraction(text)
    return c.numerator if c.denominator == 1 else c


def parse_lincomb(text: str, line: int = 0, col0: int = 1):
    """Terms (coefficient, word, vertex) of a linear combination of paths."""
    terms = []
    pos = 0
    sign = None
    coef = None
    expect_sign = False
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecSyntaxError(f"unexpected {text[pos:].strip()[:10]!r}", line, col0 + pos)
        col = col0 + m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("sign"):
            if sign is not None or coef is not None:
                raise SpecSyntaxError("misplaced sign", line, col)
            sign = -1 if m.group("sign") == "-" else 1
            expect_sign = False
        elif m.group("num"):
            if coef is not None or expect_sign:
                raise SpecSyntaxError("misplaced coefficient", line, col)
            coef = _coef(m.group("num"))
        else:
            if expect_sign:
                raise SpecSyntaxError("missing + or - between terms", line, col)
            p = m.group("path")
            c = (sign or 1) * (1 if coef is None else coef)
            if p.startswith("@"):
                terms.append((c, (), p[1:], col))
            else:
                terms.append((c, tuple(p.split("*")), None, col))
            sign, coef, expect_sign = None, None, True
        pos = m.end()
    if sign is not None or coef is not None:
        raise SpecSyntaxError("dangling sign or coefficient", line, col0 + len(text))
    if not terms:
        raise SpecSyntaxError("empty relation", line, col0)
    return terms


def parse_spec(text: str) -> ExtensionSpec:
    field: Field = QQ
    vertices: List[str] = []
    arrows: List[Tuple[str, str, str]] = []
    new_arrows: List[Tuple[str, str, str]] = []
    rels = {"I": [], "J": []}
    limits = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        words = body.split()
        kw = words[0]
        col_of = lambda k: body.index(words[k]) + 1 if k < len(words) else len(body) + 1
        if kw == "field":
            if words[1:] == ["Q"]:
                field = QQ
            elif len(words) == 3 and words[1] == "F" and words[2].isdigit():
                try:
                    field = GF(int(words[2]))
                except ValueError as exc:
                    raise SpecSyntaxError(str(exc), ln, col_of(2))
            else:
                raise SpecSyntaxError("expected 'field Q' or 'field F <prime>'", ln, indent + 1)
        elif kw == "vertex":
            if len(words) != 2:
                raise SpecSyntaxError("expected 'vertex <name>'", ln, indent + 1)
            if words[1] in vertices:
                raise SpecSyntaxError(f"vertex {words[1]} declared twice", ln, col_of(1))
            vertices.append(words[1])
        elif kw in ("arrow", "newarrow"):
            m = re.fullmatch(r"\s*\w+\s+([\w.]+)\s*:\s*([\w.]+)\s*->\s*([\w.]+)\s*", body)
            if not m:
                raise SpecSyntaxError(f"expected '{kw} <name> : <src> -> <tgt>'", ln, indent + 1)
            name, s, t = m.groups()
            for v, g in ((s, 2), (t, 3)):
                if v not in vertices:
                    raise SpecUnknownName(f"unknown vertex {v}", ln, m.start(g) + 1)
            if name in {a[0] for a in arrows + new_arrows}:
                raise SpecSyntaxError(f"arrow {name} declared twice", ln, m.start(1) + 1)
            (arrows if kw == "arrow" else new_arrows).append((name, s, t))
        elif kw == "rel":
            if len(words) < 3 or words[1] not in ("I", "J"):
                raise SpecSyntaxError("expected 'rel I <lincomb>' or 'rel J <lincomb>'", ln, indent + 1)
            start = body.index(words[1], body.index("rel") + 3) + 1
            terms = parse_lincomb(body[start:], ln, start + 1)
            rels[words[1]].append((terms, ln))
        elif kw == "limit":
            if len(words) != 3 or words[1] not in LIMITS or not words[2].isdigit():
                raise SpecSyntaxError(f"expected 'limit <{'|'.join(LIMITS)}> <n>'", ln, indent + 1)
            limits[words[1]] = int(words[2])
        else:
            raise SpecSyntaxError(f"unknown keyword {kw!r}", ln, indent + 1)
    spec = ExtensionSpec(tuple(vertices), tuple(arrows), tuple(new_arrows),
                         tuple(tuple(t[:3] for t in terms) for terms, _ in rels["I"]),
                         tuple(tuple(t[:3] for t in terms) for terms, _ in rels["J"]),
                         field, tuple(sorted(limits.items())))
    try:
        q, qf = spec.quiver(), spec.extended_quiver()
    except QuiverError as exc:
        raise SpecSyntaxError(str(exc))
    for key, quiver in (("I", q), ("J", qf)):
        for terms, ln in rels[key]:
            for c, word, vertex, col in terms:
                for a in word:
                    if a not in quiver.arrow:
                        raise SpecUnknownName(f"unknown arrow {a}" + (" in an I-relation" if a in qf.arrow else ""),
                                              ln, col)
                if vertex is not None and vertex not in quiver.vertex_index:
                    raise SpecUnknownName(f"unknown vertex {vertex}", ln, col)
                try:
                    quiver.path(word, vertex)
                except QuiverError as exc:
                    raise SpecSyntaxError(str(exc), ln, col)
            try:
                relation_to_lincomb(quiver, tuple(t[:3] for t in terms), QQ)
            except GeneratorInhomogeneous as exc:
                raise SpecInhomogeneous(str(exc), ln, terms[0][3])
    return spec


def _fmt_coef(c) -> str:
    return str(c)


def serialize_lincomb(rel) -> str:
    out = []
    for k, (c, word, vertex) in enumerate(rel):
        path = "*".join(word) if word else f"@{vertex}"
        c = Fraction(c)
        neg = c < 0
        mag = -c if neg else c
        txt = path if mag == 1 else f"{_fmt_coef(mag.numerator if mag.denominator == 1 else mag)} {path}"
        if k == 0:
            out.append(("-" if neg else "") + txt)
        else:
            out.append(("- " if neg else "+ ") + txt)
    return " ".join(out)


def serialize_spec(spec: ExtensionSpec) -> str:
    lines = ["field Q" if spec.field.p is None else f"field F {spec.field.p}"]
    lines += [f"vertex {v}" for v in spec.vertices]
    lines += [f"arrow {n} : {s} -> {t}" for n, s, t in spec.arrows]
    lines += [f"newarrow {n} : {s} -> {t}" for n, s, t in spec.new_arrows]
    lines += [f"rel I {serialize_lincomb(r)}" for r in spec.i_rels]
    lines += [f"rel J {serialize_lincomb(r)}" for r in spec.j_rels]
    lines += [f"limit {k} {v}" for k, v in spec.limits]
    return "\n".join(lines) + "\n"


def spec_digest(spec: ExtensionSpec) -> str:
    return hashlib.sha256(serialize_spec(spec).encode()).hexdigest()
