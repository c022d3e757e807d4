"""SWRL text for rule sets: a fixed-layout writer and a tolerant reader.

Emitted layout, one rule per line::

    Patient(?pt) ^ ap_hi(?pt, ?V1) ^ swrlb:greaterThan(?V1, '129.5'^^xsd:decimal) -> presence(?pt)

The reader also takes ``→`` for the arrow, a bare ``presence``/``absence``
consequent, any variable names, rules wrapped over several lines (including
identifiers hyphenated at a line break), and ``#`` comments. Two comment
headers are meaningful: ``# default: <class>`` and ``# source: <id>``.
"""
from __future__ import annotations

import re

from ..data import FEATURES
from ..rules import CLASS_LABELS, LABEL_CLASSES, Comparator, RuleAtom, RuleSet, SwrlRule, format_number

BUILTINS = {c.value: c for c in Comparator}
_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)\Z")


class SwrlSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def serialize_rule(rule: SwrlRule) -> str:
    v = rule.variable
    parts = [f"Patient(?{v})"]
    for i, atom in enumerate(rule.antecedent, start=1):
        parts.append(f"{atom.attribute}(?{v}, ?V{i})")
        parts.append(f"swrlb:{atom.comparator.value}(?V{i}, '{format_number(atom.value)}'^^xsd:decimal)")
    return " ^ ".join(parts) + f" -> {rule.label}(?{v})"


def serialize_swrl(rules: RuleSet, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"# default: {CLASS_LABELS[rules.default_class]}")
    if rules.source is not None:
        lines.append(f"# source: {rules.source}")
    lines.extend(serialize_rule(r) for r in rules.rules)
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->|→)
  | (?P<typed>\^\^)
  | (?P<caret>\^)
  | (?P<punct>[(),?:])
  | (?P<string>'[^'\n]*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:-[ \t]*\r?\n[ \t]*[A-Za-z0-9_]+)*)
    """,
    re.VERBOSE,
)


class _Tokens:
    def __init__(self, text: str):
        self.items = []  # (kind, value, line, col)
        self.default = None
        self.source = None
        pos, line, line_start = 0, 1, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            col = pos - line_start + 1
            if m is None:
                raise SwrlSyntaxError(f"unexpected character {text[pos]!r}", line, col)
            kind, value = m.lastgroup, m.group()
            if kind == "comment":
                self._header(value, line, col)
            elif kind == "ident":
                self.items.append((kind, re.sub(r"-[ \t]*\r?\n[ \t]*", "", value), line, col))
            elif kind != "ws":
                self.items.append((kind, value, line, col))
            newlines = value.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + value.rindex("\n") + 1
            pos = m.end()
        self.end = (line, pos - line_start + 1)
        self.i = 0

    def _header(self, comment, line, col):
        m = re.match(r"#\s*(default|source)\s*:\s*(\S+)\s*$", comment)
        if not m:
            return
        if m.group(1) == "default":
            if m.group(2) not in LABEL_CLASSES:
                raise SwrlSyntaxError(f"unknown default class {m.group(2)!r}", line, col)
            self.default = LABEL_CLASSES[m.group(2)]
        else:
            self.source = m.group(2)

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("eof", "", *self.end)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, value=None, what=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = what or repr(value or kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise SwrlSyntaxError(f"expected {want}, found {got}", tok[2], tok[3])
        return tok

    def variable(self):
        self.expect("punct", "?")
        return self.expect("ident", what="a variable name")[1]


def _parse_rule(toks: _Tokens, properties) -> SwrlRule:
    head = toks.expect("ident", "Patient", what="'Patient(?var)'")
    toks.expect("punct", "(")
    var = toks.variable()
    toks.expect("punct", ")")
    atoms = []
    while toks.peek()[0] == "caret":
        toks.next()
        kind, name, line, col = toks.expect("ident", what="a property atom")
        if toks.peek()[1] == ":":
            raise SwrlSyntaxError(f"builtin {name}:... must follow a property atom", line, col)
        if name not in properties:
            raise SwrlSyntaxError(f"unknown property {name!r}", line, col)
        toks.expect("punct", "(")
        subject_tok = toks.peek()
        subject = toks.variable()
        if subject != var:
            raise SwrlSyntaxError(f"expected ?{var}, found ?{subject}", subject_tok[2], subject_tok[3])
        toks.expect("punct", ",")
        bound = toks.variable()
        toks.expect("punct", ")")
        toks.expect("caret", what="'^' before a builtin")
        prefix = toks.expect("ident", "swrlb", what="'swrlb:<builtin>'")
        toks.expect("punct", ":")
        _, builtin, bl, bc = toks.expect("ident", what="a builtin name")
        if builtin not in BUILTINS:
            raise SwrlSyntaxError(f"unknown builtin swrlb:{builtin}", bl, bc)
        toks.expect("punct", "(")
        arg_tok = toks.peek()
        arg = toks.variable()
        if arg != bound:
            raise SwrlSyntaxError(f"builtin compares ?{arg}, but ?{bound} was bound", arg_tok[2], arg_tok[3])
        toks.expect("punct", ",")
        _, literal, ll, lc = toks.expect("string", what="a quoted literal")
        toks.expect("typed", what="'^^xsd:decimal'")
        toks.expect("ident", "xsd", what="'xsd:decimal'")
        toks.expect("punct", ":")
        dtype = toks.expect("ident", what="'decimal'")
        if dtype[1] != "decimal":
            raise SwrlSyntaxError(f"literal type xsd:{dtype[1]} is not xsd:decimal", dtype[2], dtype[3])
        text = literal[1:-1].strip()
        if not _DECIMAL.match(text):
            raise SwrlSyntaxError(f"non-decimal literal {literal}", ll, lc)
        toks.expect("punct", ")")
        atoms.append(RuleAtom(name, BUILTINS[builtin], float(text)))
    toks.expect("arrow", what="'->'")
    _, label, line, col = toks.expect("ident", what="'presence' or 'absence'")
    if label not in LABEL_CLASSES:
        raise SwrlSyntaxError(f"unknown consequent class {label!r}", line, col)
    if toks.peek()[1] == "(":
        toks.next()
        tok = toks.peek()
        if toks.variable() != var:
            raise SwrlSyntaxError(f"consequent must refer to ?{var}", tok[2], tok[3])
        toks.expect("punct", ")")
    return SwrlRule(tuple(atoms), LABEL_CLASSES[label], variable=var)


def parse_swrl(text: str, properties=FEATURES) -> RuleSet:
    toks = _Tokens(text)
    rules = []
    while toks.peek()[0] != "eof":
        rules.append(_parse_rule(toks, properties))
    return RuleSet(tuple(rules), default_class=toks.default or 0, source=toks.source)
