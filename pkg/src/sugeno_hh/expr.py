"""A small arithmetic expression language in one variable ``x``.

Grammar (EBNF)::

    expr   = term , { ("+" | "-") , term } ;
    term   = unary , { ("*" | "/") , unary } ;
    unary  = ("-" | "+") , unary | power ;
    power  = atom , [ "^" , unary ] ;          (* right associative *)
    atom   = number | "x" | "pi" | "e"
           | func , "(" , expr , ")"
           | "(" , expr , ")" ;
    func   = "exp" | "ln" | "sin" | "cos" | "sqrt" | "abs" ;
    number = digits , [ "." , [digits] ] , [ exponent ]
           | "." , digits , [ exponent ] ;
    exponent = ("e" | "E") , [ "+" | "-" ] , digits ;

``-x^2`` parses as ``-(x^2)`` and ``2^-1`` as ``2^(-1)``.

Evaluation works on floats and on numpy arrays alike. Anything that would
produce a NaN or an infinity raises :class:`EvaluationError` instead.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvaluationError, ParseError

FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a name from FUNCTIONS
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


Node = Union[Num, Var, Const, Unary, Binary]


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            arg = self.unary()
            return Unary("neg", arg) if op == "-" else arg
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text == "x":
                return Var()
            if t.text in CONSTANTS:
                return Const(t.text)
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            raise ParseError(f"unknown identifier {t.text!r}", t.pos)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise ParseError(f"expected an operand, found {found!r}", t.pos)


def parse(text: str) -> Node:
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


def to_string(node: Node) -> str:
    """Render a tree as fully parenthesised text that parses back to it."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{to_string(node.arg)})"
        return f"{node.op}({to_string(node.arg)})"
    return f"({to_string(node.left)} {node.op} {to_string(node.right)})"


def _bad_at(mask, x):
    """First x at which ``mask`` flags a problem (for error messages)."""
    if np.ndim(mask) == 0:
        return float(np.ravel(x)[0])
    return float(np.broadcast_to(x, np.shape(mask))[mask][0])


def _eval(node: Node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Unary):
        v = _eval(node.arg, x)
        op = node.op
        if op == "neg":
            return -v
        if op == "ln":
            bad = np.asarray(v) <= 0
            if np.any(bad):
                raise EvaluationError(f"ln of non-positive argument near x={_bad_at(bad, x)}")
            return np.log(v)
        if op == "sqrt":
            bad = np.asarray(v) < 0
            if np.any(bad):
                raise EvaluationError(f"sqrt of negative argument near x={_bad_at(bad, x)}")
            return np.sqrt(v)
        return getattr(np, op)(v)
    left = _eval(node.left, x)
    right = _eval(node.right, x)
    op = node.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        bad = np.asarray(right) == 0
        if np.any(bad):
            raise EvaluationError(f"division by zero near x={_bad_at(bad, x)}")
        return left / right
    bad = (np.asarray(left) == 0) & (np.asarray(right) < 0)
    if np.any(bad):
        raise EvaluationError(f"zero raised to a negative power near x={_bad_at(bad, x)}")
    return np.power(left, right)


def evaluate(node: Node, x):
    """Evaluate ``node`` at a scalar or array ``x``.

    Scalars in, float out; arrays in, float array of the same shape out.
    """
    scalar = np.ndim(x) == 0
    xv = float(x) if scalar else np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, xv)
    out = np.asarray(out, dtype=float)
    finite = np.isfinite(out)
    if not np.all(finite):
        where = _bad_at(~finite, xv) if out.ndim else xv
        raise EvaluationError(f"non-finite value near x={where}")
    if scalar:
        return float(out)
    return np.broadcast_to(out, np.shape(xv)).copy()


@dataclass(frozen=True)
class Expression:
    """Parsed expression that remembers its source text; callable in ``x``."""

    text: str
    tree: Node

    @classmethod
    def from_text(cls, text: str) -> "Expression":
        return cls(text, parse(text))

    def __call__(self, x):
        return evaluate(self.tree, x)

    def __str__(self):
        return self.text


def evaluate_constant(text: str) -> float:
    """Evaluate an expression that must not depend on ``x`` (e.g. ``"pi/4"``)."""
    tree = parse(text)
    if _mentions_x(tree):
        raise ParseError("constant expression may not use x", text.find("x"))
    return evaluate(tree, 0.0)


def _mentions_x(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Unary):
        return _mentions_x(node.arg)
    if isinstance(node, Binary):
        return _mentions_x(node.left) or _mentions_x(node.right)
    return False
