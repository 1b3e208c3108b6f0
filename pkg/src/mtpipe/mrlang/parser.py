"""Lexer and recursive-descent parser for the MR description language.

Grammar (whitespace-insensitive between tokens)::

    mr        := "mr" IDENT "{" clause+ "}"
    clause    := input | param | follow | expect | tol
    input     := "input:" ("scalar-int"|"scalar-float"|"list-int"|"list-float") ";"
    param     := "param" IDENT ":" ("int"|"float") "in" interval ";"
    interval  := ("("|"[") NUMBER "," NUMBER (")"|"]")
    follow    := "follow:" prim ("," prim)* ";"
    prim      := "add("IDENT")" | "scale("IDENT")" | "negate" | "permute"
               | "reverse" | "sort-ascending" | "include("IDENT")" | "exclude-last"
    expect    := "expect:" "out_f" CMP rexpr ";"
    CMP       := "=="|"<="|">="|"<"|">"
    rexpr     := arithmetic over "out_s", IDENT, NUMBER, "n" with + - * / and parens
    tol       := "tol:" "rel" NUMBER "abs" NUMBER ";"

Hyphenated words (input kinds, ``sort-ascending``, ``exclude-last`` and
hyphenated relation ids) are lexed as word/minus/word sequences and joined
by the parser, so ``-`` stays unambiguous inside relation arithmetic.

Any input either parses or raises MrSyntaxError with a position; parsing
that succeeds always yields a spec that passes validation (parse_mr runs
the validator and raises MrValidationError otherwise).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import MrSyntaxError, MrValidationError
from .ast import (
    ALL_PRIMS,
    COMPARATORS,
    DEFAULT_TOLERANCE,
    INPUT_KINDS,
    OUT_FOLLOWUP,
    PARAM_PRIMS,
    BinOp,
    Diagnostic,
    Expr,
    Interval,
    MrSpec,
    Num,
    ParamSpec,
    Prim,
    RelationExpr,
    Sym,
    TolerancePolicy,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(\.\d+)?([eE][+-]?\d+)?)
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<cmp><=|>=|==|<|>)
  | (?P<punct>[{}()\[\]:;,+\-*/])
    """,
    re.VERBOSE,
)

_MAX_EXPR_DEPTH = 64


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "ident" | "cmp" | punctuation literal | "eof"
    text: str
    line: int
    col: int


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise MrSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        group = m.lastgroup
        chunk = m.group(0)
        if group != "ws":
            kind = chunk if group == "punct" else group
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    eol = Token("eof", "", line, col)
    tokens.append(eol)
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, *expected: str):
        raise MrSyntaxError(message, self.cur.line, self.cur.col, expected)

    def eat(self, kind: str) -> Token:
        tok = self.cur
        if tok.kind != kind:
            self.error(f"got {tok.text or 'end of input'!r}", kind)
        self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.cur.kind == kind

    def eat_keyword(self, word: str) -> None:
        tok = self.cur
        if tok.kind != "ident" or tok.text != word:
            self.error(f"got {tok.text or 'end of input'!r}", repr(word))
        self.pos += 1

    def hyphen_word(self) -> str:
        """IDENT ("-" IDENT)* joined with hyphens (kinds, prim names, ids)."""
        parts = [self.eat("ident").text]
        while self.at("-"):
            self.pos += 1
            parts.append(self.eat("ident").text)
        return "-".join(parts)

    # clauses -------------------------------------------------------------

    def parse_mr(self) -> MrSpec:
        self.eat_keyword("mr")
        mr_id = self.hyphen_word()
        self.eat("{")
        input_kind: str | None = None
        params: list[ParamSpec] = []
        transform: tuple[Prim, ...] | None = None
        relation: RelationExpr | None = None
        tolerance: TolerancePolicy | None = None
        seen: set[str] = set()
        clause_diags: list[Diagnostic] = []
        at_least_one = False
        while not self.at("}"):
            tok = self.cur
            if tok.kind != "ident":
                self.error(f"got {tok.text or 'end of input'!r}",
                           "'input'", "'param'", "'follow'", "'expect'", "'tol'", "'}'")
            clause = tok.text
            if clause in seen and clause != "param":
                clause_diags.append(
                    Diagnostic("duplicate-clause", f"clause {clause!r} given more than once", clause))
            seen.add(clause)
            at_least_one = True
            if clause == "input":
                input_kind = self.parse_input()
            elif clause == "param":
                params.append(self.parse_param())
            elif clause == "follow":
                transform = self.parse_follow()
            elif clause == "expect":
                relation = self.parse_expect()
            elif clause == "tol":
                tolerance = self.parse_tol()
            else:
                self.error(f"unknown clause {clause!r}",
                           "'input'", "'param'", "'follow'", "'expect'", "'tol'")
        if not at_least_one:
            self.error("at least one clause required", "'input'", "'param'",
                       "'follow'", "'expect'", "'tol'")
        self.eat("}")
        self.eat("eof")
        for name, value in (("input", input_kind), ("follow", transform), ("expect", relation)):
            if value is None:
                clause_diags.append(
                    Diagnostic("missing-clause", f"required clause {name!r} absent", name))
        if clause_diags:
            raise MrValidationError(clause_diags)
        return MrSpec(
            id=mr_id,
            input_kind=input_kind,
            params=tuple(params),
            transform=transform,
            relation=relation,
            tolerance=tolerance if tolerance is not None else DEFAULT_TOLERANCE,
        )

    def parse_input(self) -> str:
        self.eat_keyword("input")
        self.eat(":")
        tok = self.cur
        kind = self.hyphen_word()
        if kind not in INPUT_KINDS:
            raise MrSyntaxError(f"unknown input kind {kind!r}", tok.line, tok.col,
                                tuple(repr(k) for k in INPUT_KINDS))
        self.eat(";")
        return kind

    def parse_param(self) -> ParamSpec:
        self.eat_keyword("param")
        name = self.eat("ident").text
        self.eat(":")
        tok = self.cur
        kind = self.eat("ident").text
        if kind not in ("int", "float"):
            raise MrSyntaxError(f"unknown param kind {kind!r}", tok.line, tok.col,
                                ("'int'", "'float'"))
        self.eat_keyword("in")
        domain = self.parse_interval()
        self.eat(";")
        return ParamSpec(name=name, kind=kind, domain=domain)

    def parse_interval(self) -> Interval:
        if self.at("("):
            lo_open = True
            self.pos += 1
        elif self.at("["):
            lo_open = False
            self.pos += 1
        else:
            self.error(f"got {self.cur.text!r}", "'('", "'['")
        lo = self.signed_number()
        self.eat(",")
        hi = self.signed_number()
        if self.at(")"):
            hi_open = True
            self.pos += 1
        elif self.at("]"):
            hi_open = False
            self.pos += 1
        else:
            self.error(f"got {self.cur.text!r}", "')'", "']'")
        return Interval(lo=lo, hi=hi, lo_open=lo_open, hi_open=hi_open)

    def signed_number(self) -> float:
        sign = 1.0
        if self.at("-"):
            sign = -1.0
            self.pos += 1
        return sign * float(self.eat("number").text)

    def parse_follow(self) -> tuple[Prim, ...]:
        self.eat_keyword("follow")
        self.eat(":")
        prims = [self.parse_prim()]
        while self.at(","):
            self.pos += 1
            prims.append(self.parse_prim())
        self.eat(";")
        return tuple(prims)

    def parse_prim(self) -> Prim:
        tok = self.cur
        op = self.hyphen_word()
        if op not in ALL_PRIMS:
            raise MrSyntaxError(f"unknown transform primitive {op!r}", tok.line, tok.col,
                                tuple(sorted(ALL_PRIMS)))
        if op in PARAM_PRIMS:
            self.eat("(")
            arg = self.eat("ident").text
            self.eat(")")
            return Prim(op=op, arg=arg)
        return Prim(op=op)

    def parse_expect(self) -> RelationExpr:
        self.eat_keyword("expect")
        self.eat(":")
        self.eat_keyword(OUT_FOLLOWUP)
        tok = self.cur
        if tok.kind != "cmp":
            self.error(f"got {tok.text or 'end of input'!r}", *COMPARATORS)
        self.pos += 1
        right = self.parse_expr(depth=0)
        self.eat(";")
        return RelationExpr(comparator=tok.text, right=right)

    def parse_tol(self) -> TolerancePolicy:
        self.eat_keyword("tol")
        self.eat(":")
        self.eat_keyword("rel")
        rel = float(self.eat("number").text)
        self.eat_keyword("abs")
        abs_ = float(self.eat("number").text)
        self.eat(";")
        return TolerancePolicy(rel=rel, abs=abs_)

    # relation arithmetic -------------------------------------------------

    def parse_expr(self, depth: int) -> Expr:
        if depth > _MAX_EXPR_DEPTH:
            self.error("expression nested too deeply")
        node = self.parse_term(depth)
        while self.at("+") or self.at("-"):
            op = self.cur.kind
            self.pos += 1
            node = BinOp(op=op, left=node, right=self.parse_term(depth))
        return node

    def parse_term(self, depth: int) -> Expr:
        node = self.parse_factor(depth)
        while self.at("*") or self.at("/"):
            op = self.cur.kind
            self.pos += 1
            node = BinOp(op=op, left=node, right=self.parse_factor(depth))
        return node

    def parse_factor(self, depth: int) -> Expr:
        tok = self.cur
        if tok.kind == "number":
            self.pos += 1
            return Num(float(tok.text))
        if tok.kind == "-":  # negative literal
            self.pos += 1
            return Num(-float(self.eat("number").text))
        if tok.kind == "ident":
            self.pos += 1
            return Sym(tok.text)
        if tok.kind == "(":
            self.pos += 1
            node = self.parse_expr(depth + 1)
            self.eat(")")
            return node
        self.error(f"got {tok.text or 'end of input'!r}", "number", "identifier", "'('")


def parse_mr(text: str) -> MrSpec:
    """Parse MR-DSL source into a validated MrSpec.

    Raises MrSyntaxError (with position) on malformed text and
    MrValidationError when the parsed spec breaks a semantic invariant, so
    a returned spec always validates cleanly.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MrSyntaxError(f"not valid UTF-8: {exc.reason}", 1, 1) from None
    spec = _Parser(_lex(text)).parse_mr()
    from .validate import validate_mr

    diagnostics = validate_mr(spec)
    if diagnostics:
        raise MrValidationError(diagnostics)
    return spec
