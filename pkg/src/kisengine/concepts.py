"""Weighted boolean concept/object queries: parse, print, evaluate, rank.

Surface syntax (keywords case-insensitive, precedence NOT > AND > OR):

    expr  := or
    or    := and ("OR" and)*
    and   := unary ("AND" unary)*
    unary := "NOT" unary | "(" expr ")" | leaf
    leaf  := label (":" weight)?

A label is a bare word (letters, digits, underscore, hyphen; dot and
slash are tolerated) or a double-quoted string; the prefix ``obj/``
routes the leaf to the object score bank, anything else to the concept
bank.  A weight is a positive decimal and defaults to 1.

Evaluation maps scores through a fuzzy algebra chosen for its laws:
AND is a weighted geometric mean, OR its dual, NOT the complement, and
negation passes its child's weight through to the enclosing aggregate.
That combination satisfies De Morgan's laws exactly for every weight
assignment, agrees with crisp boolean logic on 0/1 scores, and is
idempotent at equal arguments.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, ScoreBank
from .ranking import RankedList, ranked

KEYWORDS = {"AND", "OR", "NOT"}
OBJECT_PREFIX = "obj/"

_WORD_RE = re.compile(r"[A-Za-z0-9_./-]+")
_BARE_LABEL_RE = re.compile(r"[A-Za-z0-9_.-]+")


class ParseError(ValueError):
    """Concept query syntax error, carrying the character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class UnresolvedLabelError(KeyError):
    def __init__(self, label: str, bank: str, suggestions: list[str] | None = None):
        self.label = label
        self.bank = bank
        self.suggestions = suggestions or []
        hint = f"; did you mean: {', '.join(self.suggestions)}" if self.suggestions else ""
        super().__init__(f"label {label!r} not in {bank} bank{hint}")

    def __str__(self) -> str:
        return self.args[0]


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Leaf:
    label: str
    weight: float = 1.0
    bank: str = "concept"

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError(f"leaf weight must be positive, got {self.weight}")
        if self.bank not in ("concept", "object"):
            raise ValueError(f"unknown bank {self.bank!r}")


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And requires at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or requires at least two children")


@dataclass(frozen=True)
class Not:
    child: object


ConceptExpr = Leaf | And | Or | Not


# ---------------------------------------------------------------------------
# Lexer

@dataclass(frozen=True)
class _Token:
    kind: str   # LPAREN RPAREN COLON WORD QUOTED EOF
    value: str
    offset: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, n = 0, len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "(":
            tokens.append(_Token("LPAREN", ch, pos))
            pos += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, pos))
            pos += 1
        elif ch == ":":
            tokens.append(_Token("COLON", ch, pos))
            pos += 1
        elif ch == '"':
            end = text.find('"', pos + 1)
            if end < 0:
                raise ParseError("unterminated quoted label", pos)
            tokens.append(_Token("QUOTED", text[pos + 1 : end], pos))
            pos = end + 1
        else:
            m = _WORD_RE.match(text, pos)
            if not m:
                raise ParseError(f"unknown token {ch!r}", pos)
            tokens.append(_Token("WORD", m.group(), pos))
            pos = m.end()
    tokens.append(_Token("EOF", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def is_keyword(self, word: str) -> bool:
        return self.cur.kind == "WORD" and self.cur.value.upper() == word

    def parse(self) -> ConceptExpr:
        expr = self.parse_or()
        if self.cur.kind == "RPAREN":
            raise ParseError("unbalanced parenthesis", self.cur.offset)
        if self.cur.kind != "EOF":
            raise ParseError(f"unexpected token {self.cur.value!r}", self.cur.offset)
        return expr

    def parse_or(self) -> ConceptExpr:
        children = [self.parse_and()]
        while self.is_keyword("OR"):
            self.advance()
            children.append(self.parse_and())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self) -> ConceptExpr:
        children = [self.parse_unary()]
        while self.is_keyword("AND"):
            self.advance()
            children.append(self.parse_unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_unary(self) -> ConceptExpr:
        tok = self.cur
        if self.is_keyword("NOT"):
            self.advance()
            return Not(self.parse_unary())
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.parse_or()
            if self.cur.kind != "RPAREN":
                raise ParseError("unbalanced parenthesis", self.cur.offset)
            self.advance()
            return inner
        if tok.kind == "WORD":
            if tok.value.upper() in KEYWORDS:
                raise ParseError(f"dangling operator {tok.value!r}", tok.offset)
            self.advance()
            return self.finish_leaf(tok.value)
        if tok.kind == "QUOTED":
            self.advance()
            return self.finish_leaf(tok.value)
        if tok.kind == "EOF":
            raise ParseError("dangling operator: expected expression", tok.offset)
        raise ParseError(f"unexpected token {tok.value!r}", tok.offset)

    def finish_leaf(self, content: str) -> Leaf:
        weight = 1.0
        if self.cur.kind == "COLON":
            self.advance()
            wtok = self.cur
            if wtok.kind != "WORD":
                raise ParseError("expected weight", wtok.offset)
            try:
                weight = float(wtok.value)
            except ValueError:
                raise ParseError(f"bad weight {wtok.value!r}", wtok.offset) from None
            if weight <= 0:
                raise ParseError(f"nonpositive weight {wtok.value}", wtok.offset)
            self.advance()
        if content.lower().startswith(OBJECT_PREFIX):
            return Leaf(content[len(OBJECT_PREFIX):], weight, "object")
        return Leaf(content, weight, "concept")


def parse_concept_query(text: str) -> ConceptExpr:
    """Parse the query language; raises ParseError with character offset."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer

def _format_weight(w: float) -> str:
    # Positional form keeps the token lexable (no exponent sign) and
    # round-trips the float exactly.
    return np.format_float_positional(float(w), trim="-")


def _print_leaf(leaf: Leaf) -> str:
    content = leaf.label
    if leaf.bank == "object":
        content = OBJECT_PREFIX + content
    elif content.lower().startswith(OBJECT_PREFIX):
        raise ValueError(
            f"concept label {content!r} collides with the reserved obj/ prefix"
        )
    if '"' in content:
        raise ValueError(f"label {content!r} contains a double quote")
    bare = (
        _BARE_LABEL_RE.fullmatch(leaf.label) is not None
        and content.upper() not in KEYWORDS
    )
    rendered = content if bare else f'"{content}"'
    if leaf.weight != 1.0:
        rendered += ":" + _format_weight(leaf.weight)
    return rendered


def print_expr(expr: ConceptExpr) -> str:
    """Canonical fully parenthesized form; parse(print(e)) == e structurally."""
    if isinstance(expr, Leaf):
        return _print_leaf(expr)
    if isinstance(expr, Not):
        return f"(NOT {print_expr(expr.child)})"
    if isinstance(expr, And):
        return "(" + " AND ".join(print_expr(c) for c in expr.children) + ")"
    if isinstance(expr, Or):
        return "(" + " OR ".join(print_expr(c) for c in expr.children) + ")"
    raise TypeError(f"not a concept expression: {expr!r}")


# ---------------------------------------------------------------------------
# Evaluation

def _child_weight(expr: ConceptExpr) -> float:
    """Aggregation weight contributed by a child node.

    Leaves carry their own weight and negation is weight-transparent, so
    NOT(x:3) pulls as hard as x:3 inside an AND/OR; composite children
    count as 1.  Weight transparency is what makes De Morgan's laws hold
    for every weight assignment.
    """
    if isinstance(expr, Leaf):
        return expr.weight
    if isinstance(expr, Not):
        return _child_weight(expr.child)
    return 1.0


def eval_expr(expr: ConceptExpr, scores, object_scores=None) -> float:
    """Evaluate an expression against unit-interval label scores.

    ``scores`` maps concept labels to values in [0, 1]; ``object_scores``
    serves object-bank leaves and defaults to ``scores``.  The result is
    always within [0, 1].
    """
    obj = scores if object_scores is None else object_scores
    if isinstance(expr, Leaf):
        table = obj if expr.bank == "object" else scores
        try:
            return float(table[expr.label])
        except KeyError:
            raise UnresolvedLabelError(expr.label, expr.bank) from None
    if isinstance(expr, Not):
        return 1.0 - eval_expr(expr.child, scores, object_scores)
    if isinstance(expr, And):
        weights = [_child_weight(c) for c in expr.children]
        total = sum(weights)
        result = 1.0
        for child, w in zip(expr.children, weights):
            result *= eval_expr(child, scores, object_scores) ** (w / total)
        return result
    if isinstance(expr, Or):
        weights = [_child_weight(c) for c in expr.children]
        total = sum(weights)
        result = 1.0
        for child, w in zip(expr.children, weights):
            result *= (1.0 - eval_expr(child, scores, object_scores)) ** (w / total)
        return 1.0 - result
    raise TypeError(f"not a concept expression: {expr!r}")


# ---------------------------------------------------------------------------
# Ranking and autocomplete

def _collect_leaves(expr: ConceptExpr, out: list[Leaf]) -> None:
    if isinstance(expr, Leaf):
        out.append(expr)
    elif isinstance(expr, Not):
        _collect_leaves(expr.child, out)
    else:
        for child in expr.children:
            _collect_leaves(child, out)


def _resolve(leaf: Leaf, banks: dict[str, ScoreBank]) -> int:
    bank = banks.get(leaf.bank)
    if bank is None:
        raise UnresolvedLabelError(leaf.label, leaf.bank)
    try:
        return bank.column(leaf.label)
    except KeyError:
        pass
    # Tolerate case mismatches when unambiguous.
    lowered = [i for i, l in enumerate(bank.labels) if l.lower() == leaf.label.lower()]
    if len(lowered) == 1:
        return lowered[0]
    suggestions = difflib.get_close_matches(leaf.label, bank.labels, n=3)
    raise UnresolvedLabelError(leaf.label, leaf.bank, suggestions)


def rank_by_expr(
    expr: ConceptExpr, banks: dict[str, ScoreBank], corpus: Corpus
) -> RankedList:
    """Evaluate the expression for every shot and rank descending; shots
    scoring exactly zero are omitted."""
    leaves: list[Leaf] = []
    _collect_leaves(expr, leaves)
    columns = {(leaf.bank, leaf.label): _resolve(leaf, banks) for leaf in leaves}
    scored: dict[str, float] = {}
    for row, sid in enumerate(corpus.shot_order):
        concept_scores = {
            label: float(banks[bank].scores[row, col])
            for (bank, label), col in columns.items()
            if bank == "concept"
        }
        object_scores = {
            label: float(banks[bank].scores[row, col])
            for (bank, label), col in columns.items()
            if bank == "object"
        }
        value = eval_expr(expr, concept_scores, object_scores)
        if value > 0.0:
            scored[sid] = value
    return ranked(scored, "concept")


def list_concepts(prefix: str, bank: ScoreBank, limit: int = 20) -> list[str]:
    """Case-insensitive prefix autocomplete, lexicographic, truncated."""
    p = prefix.lower()
    matches = sorted(label for label in bank.labels if label.lower().startswith(p))
    return matches[: max(0, limit)]
