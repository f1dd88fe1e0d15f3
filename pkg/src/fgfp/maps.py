"""Arithmetic map parsing, printing and evaluation.

A map takes two vector arguments.  Variables ``a1..aM`` read coordinates
of the first argument and ``b1..bN`` coordinates of the second; the
grammar allows real literals, ``+ - * /``, unary minus, parentheses and
the functions ``abs(x)``, ``min(x, y, ...)``, ``max(x, y, ...)``.  A map
with several output coordinates is written as semicolon-separated
expressions, one per coordinate:

    "(a1 - b1)/3"            one output from two 1-d arguments
    "a1 + b2; a2 - b1"       two outputs from 2-d arguments

Each expression compiles to a postfix program executed by the batch
backends in :mod:`fgfp.backends`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import backends
from .backends import (OP_ABS, OP_ADD, OP_CONST, OP_DIV, OP_LOAD_A, OP_LOAD_B,
                       OP_MAX, OP_MIN, OP_MUL, OP_NEG, OP_SUB)
from .errors import DimensionMismatch, EvaluationError, ExpressionError
from .spaces import Point

_FUNCTIONS = {"abs": 1, "min": 2, "max": 2}  # name -> minimum arity
_VAR_RE = re.compile(r"^([ab])([1-9][0-9]*)$")

_TOKEN_RE = re.compile(
    r"""
      (?P<NUM>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)
    | (?P<NAME>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<OP>[+\-*/])
    | (?P<LPAREN>\()
    | (?P<RPAREN>\))
    | (?P<COMMA>,)
    | (?P<SEMI>;)
    | (?P<WS>\s+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "WS":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    group: str  # "a" or "b"
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = Num | Var | Neg | BinOp | Call


def _is_literal_zero(node: Expr) -> bool:
    while isinstance(node, Neg):
        node = node.arg
    return isinstance(node, Num) and node.value == 0.0


class _Parser:
    """Recursive-descent parser with the usual precedence (+- < */ < unary)."""

    def __init__(self, tokens: list[Token], first_arg_dim: int, second_arg_dim: int):
        self.tokens = tokens
        self.i = 0
        self.adim = first_arg_dim
        self.bdim = second_arg_dim

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExpressionError(f"expected {what}, found {tok.text!r}" if tok.text
                                  else f"expected {what}, found end of input", tok.pos)
        return self.advance()

    def parse_list(self) -> list[Expr]:
        exprs = [self.expr()]
        while self.peek().kind == "SEMI":
            self.advance()
            exprs.append(self.expr())
        tok = self.peek()
        if tok.kind != "END":
            raise ExpressionError(f"unexpected {tok.text!r} after expression", tok.pos)
        return exprs

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op_tok = self.advance()
            rhs = self.unary()
            if op_tok.text == "/" and _is_literal_zero(rhs):
                raise ExpressionError("division by literal zero", op_tok.pos)
            node = BinOp(op_tok.text, node, rhs)
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if tok.kind == "OP" and tok.text == "+":
            self.advance()
            return self.unary()
        return self.primary()

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "NUM":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "NAME":
            self.advance()
            if self.peek().kind == "LPAREN":
                return self.call(tok)
            return self.variable(tok)
        if tok.kind == "LPAREN":
            self.advance()
            node = self.expr()
            self.expect("RPAREN", "')'")
            return node
        raise ExpressionError(
            f"expected expression, found {tok.text!r}" if tok.text
            else "expected expression, found end of input", tok.pos)

    def call(self, name_tok: Token) -> Expr:
        name = name_tok.text
        if name not in _FUNCTIONS:
            raise ExpressionError(f"unknown function {name!r}", name_tok.pos)
        self.expect("LPAREN", "'('")
        args = [self.expr()]
        while self.peek().kind == "COMMA":
            self.advance()
            args.append(self.expr())
        self.expect("RPAREN", "')'")
        if name == "abs" and len(args) != 1:
            raise ExpressionError("abs takes exactly one argument", name_tok.pos)
        if name in ("min", "max") and len(args) < 2:
            raise ExpressionError(f"{name} takes at least two arguments", name_tok.pos)
        return Call(name, tuple(args))

    def variable(self, tok: Token) -> Expr:
        m = _VAR_RE.match(tok.text)
        if m is None:
            raise ExpressionError(
                f"unknown name {tok.text!r} (variables are a1..a{self.adim}, "
                f"b1..b{self.bdim})", tok.pos)
        group, idx = m.group(1), int(m.group(2))
        limit = self.adim if group == "a" else self.bdim
        if idx > limit:
            raise ExpressionError(
                f"variable {tok.text!r} exceeds the {group!r}-argument dimension {limit}",
                tok.pos)
        return Var(group, idx)


# ---------------------------------------------------------------------------
# Pretty printing (minimal parentheses; reparses to an equivalent tree)

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(node: Expr, _prec: int = 0) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return f"{node.group}{node.index}"
    if isinstance(node, Neg):
        inner = format_expr(node.arg, 3)
        text = f"-{inner}"
        return f"({text})" if _prec > 2 else text
    if isinstance(node, Call):
        return f"{node.func}({', '.join(format_expr(a) for a in node.args)})"
    prec = _PREC[node.op]
    left = format_expr(node.left, prec)
    right = format_expr(node.right, prec + 1)
    text = f"{left} {node.op} {right}"
    return f"({text})" if _prec > prec else text


# ---------------------------------------------------------------------------
# Compilation: postfix program (numpy path) plus generated loop source
# (numba path); both carry the exact expression-tree evaluation order.

@dataclass(frozen=True, eq=False)
class Program:
    codes: np.ndarray
    args: np.ndarray
    consts: np.ndarray
    stack_need: int
    source: str


def _codegen(node: Expr) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        array = "A" if node.group == "a" else "B"
        return f"{array}[i, {node.index - 1}]"
    if isinstance(node, Neg):
        return f"(-{_codegen(node.arg)})"
    if isinstance(node, BinOp):
        return f"({_codegen(node.left)} {node.op} {_codegen(node.right)})"
    if node.func == "abs":
        return f"abs({_codegen(node.args[0])})"
    fn = "_nmin" if node.func == "min" else "_nmax"
    text = _codegen(node.args[0])
    for arg in node.args[1:]:
        text = f"{fn}({text}, {_codegen(arg)})"
    return text


def _compile(expr: Expr) -> Program:
    codes: list[int] = []
    args: list[int] = []
    consts: list[float] = []
    const_index: dict[float, int] = {}

    def emit(op: int, arg: int = 0):
        codes.append(op)
        args.append(arg)

    def const_slot(v: float) -> int:
        if v not in const_index:
            const_index[v] = len(consts)
            consts.append(v)
        return const_index[v]

    def walk(node: Expr):
        if isinstance(node, Num):
            emit(OP_CONST, const_slot(node.value))
        elif isinstance(node, Var):
            emit(OP_LOAD_A if node.group == "a" else OP_LOAD_B, node.index - 1)
        elif isinstance(node, Neg):
            walk(node.arg)
            emit(OP_NEG)
        elif isinstance(node, BinOp):
            walk(node.left)
            walk(node.right)
            emit({"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV}[node.op])
        elif isinstance(node, Call):
            walk(node.args[0])
            if node.func == "abs":
                emit(OP_ABS)
            else:
                op = OP_MIN if node.func == "min" else OP_MAX
                for arg in node.args[1:]:
                    walk(arg)
                    emit(op)
        else:  # pragma: no cover
            raise TypeError(f"unexpected AST node {node!r}")

    walk(expr)

    depth = 0
    peak = 0
    for op in codes:
        if op in (OP_CONST, OP_LOAD_A, OP_LOAD_B):
            depth += 1
        elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_MIN, OP_MAX):
            depth -= 1
        peak = max(peak, depth)

    codes_arr = np.asarray(codes, dtype=np.int64)
    args_arr = np.asarray(args, dtype=np.int64)
    consts_arr = np.asarray(consts, dtype=np.float64)
    for arr in (codes_arr, args_arr, consts_arr):
        arr.flags.writeable = False
    source = ("def _kernel(A, B, out):\n"
              "    for i in range(A.shape[0]):\n"
              f"        out[i] = {_codegen(expr)}\n")
    return Program(codes_arr, args_arr, consts_arr, max(peak, 1), source)


# ---------------------------------------------------------------------------
# MapSpec and evaluation

@dataclass(frozen=True, eq=False)
class MapSpec:
    """A validated, compiled map from two vector arguments to one vector."""

    text: str
    first_arg_dim: int
    second_arg_dim: int
    out_dim: int
    exprs: tuple[Expr, ...]
    programs: tuple[Program, ...]

    def pretty(self) -> str:
        return "; ".join(format_expr(e) for e in self.exprs)


def parse_map(text: str, first_arg_dim: int, second_arg_dim: int, out_dim: int) -> MapSpec:
    """Parse semicolon-separated expressions into a MapSpec.

    Raises ExpressionError (with character position) on syntax errors,
    unknown variables, or an expression count differing from out_dim.
    """
    for name, value in (("first_arg_dim", first_arg_dim),
                        ("second_arg_dim", second_arg_dim),
                        ("out_dim", out_dim)):
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"{name} must be a positive integer")
    parser = _Parser(_tokenize(text), first_arg_dim, second_arg_dim)
    exprs = parser.parse_list()
    if len(exprs) != out_dim:
        raise ExpressionError(
            f"expected {out_dim} expression(s) separated by ';', got {len(exprs)}")
    programs = tuple(_compile(e) for e in exprs)
    return MapSpec(text, first_arg_dim, second_arg_dim, out_dim, tuple(exprs), programs)


_eval_rows = 0


def evaluation_count() -> int:
    """Total sample rows evaluated so far (a deterministic work measure)."""
    return _eval_rows


def eval_map_batch(m: MapSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Evaluate the map over batches: A is (n, first_arg_dim), B is (n, second_arg_dim).

    Returns (n, out_dim).  Raises EvaluationError if any output is non-finite
    (runtime division by zero shows up here as inf/nan).
    """
    global _eval_rows
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    if A.ndim != 2 or B.ndim != 2 or A.shape[0] != B.shape[0]:
        raise DimensionMismatch("argument batches must be 2-d with matching row counts")
    if A.shape[1] != m.first_arg_dim or B.shape[1] != m.second_arg_dim:
        raise DimensionMismatch(
            f"map expects argument dims ({m.first_arg_dim}, {m.second_arg_dim}), "
            f"got ({A.shape[1]}, {B.shape[1]})")
    n = A.shape[0]
    out = np.empty((n, m.out_dim), dtype=np.float64)
    for j, prog in enumerate(m.programs):
        out[:, j] = backends.run_program(prog, A, B)
    _eval_rows += n
    if not np.isfinite(out).all():
        bad = np.argwhere(~np.isfinite(out))[0]
        raise EvaluationError(
            f"non-finite value in output coordinate {bad[1] + 1} at sample {bad[0]} "
            f"(inputs a={A[bad[0]].tolist()}, b={B[bad[0]].tolist()})")
    return out


def eval_map(m: MapSpec, a: Point, b: Point) -> Point:
    """Evaluate the map at a single pair of points."""
    if a.dim != m.first_arg_dim or b.dim != m.second_arg_dim:
        raise DimensionMismatch(
            f"map expects argument dims ({m.first_arg_dim}, {m.second_arg_dim}), "
            f"got ({a.dim}, {b.dim})")
    out = eval_map_batch(m, np.asarray([a.coords]), np.asarray([b.coords]))
    return Point(tuple(out[0]))


def iterate_pair(F: MapSpec, G: MapSpec, x: Point, y: Point, n: int) -> tuple[Point, Point]:
    """n-fold coupled iteration of the pair of maps.

    Starting from (x, y), repeats  x <- F(x, y),  y <- G(y, x)  in lockstep
    n times; n = 0 returns (x, y) unchanged.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be a nonnegative integer")
    if (F.first_arg_dim != F.out_dim or G.first_arg_dim != G.out_dim
            or F.second_arg_dim != G.out_dim or G.second_arg_dim != F.out_dim):
        raise DimensionMismatch("maps do not close under coupled iteration")
    if x.dim != F.out_dim or y.dim != G.out_dim:
        raise DimensionMismatch("starting pair has wrong dimensions for these maps")
    for _ in range(n):
        x, y = eval_map(F, x, y), eval_map(G, y, x)
    return x, y
