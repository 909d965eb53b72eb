"""A small expression language for densities and weight functions of x.

Grammar (operator precedence low to high: + -, * /, unary -, ^; all left
associative except ^ which is right associative and binds tighter than
unary minus, so -x^2 parses as -(x^2)):

    expr      := term (('+' | '-') term)*
    term      := unary (('*' | '/') unary)*
    unary     := '-' unary | power
    power     := atom ('^' unary)?
    atom      := NUMBER | 'x' | NAME '(' expr (',' expr)* ')'
               | '(' expr ')' | piecewise
    piecewise := 'piecewise' '{' branch (';' branch)* '}'
    branch    := guard ':' expr | 'else' ':' expr
    guard     := signed CMP 'x' (CMP signed)? | 'x' CMP signed
    CMP       := '<' | '<=' | '>' | '>='

Functions: exp, log, abs, sqrt (one argument), min, max (two or more).
Piecewise guards must be disjoint intervals in increasing order; at most
one else branch, last. Syntax errors carry the byte offset and what was
expected; evaluation errors carry the offending subexpression and x.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, ExprEvalError, ExprSyntaxError
from .measures import Density, MeasurableSet, Space, WeightFunction

__all__ = [
    "Num", "Var", "BinOp", "Neg", "Call", "Guard", "Piecewise",
    "parse", "evaluate", "breakpoints", "format_expr",
    "density_from_expr", "weight_from_expr", "parse_set",
]

_UNARY_FUNCS = ("exp", "log", "abs", "sqrt")
_VARIADIC_FUNCS = ("min", "max")


# ---------------------------------------------------------------------------
# AST


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple


@dataclass(frozen=True)
class Guard:
    """Interval condition on x; infinite bounds mean one-sided guards."""

    lo: float
    lo_closed: bool
    hi: float
    hi_closed: bool

    def matches(self, x: float) -> bool:
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if x > self.hi or (x == self.hi and not self.hi_closed):
            return False
        return True


@dataclass(frozen=True)
class Piecewise(Expr):
    branches: tuple
    otherwise: Optional[Expr]


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(r"""
      (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op><=|>=|[-+*/^(){},:;<>])
    | (?P<ws>\s+)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


def _tokenize(src: str) -> list:
    tokens = []
    i = 0
    while i < len(src):
        m = _TOKEN_RE.match(src, i)
        if m is None:
            raise ExprSyntaxError(
                f"unexpected character {src[i]!r}",
                position=_byte_offset(src, i), found=src[i])
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), _byte_offset(src, i)))
        i = m.end()
    tokens.append(_Token("end", "", _byte_offset(src, len(src))))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple):
        tok = self.peek()
        found = tok.text if tok.kind != "end" else "end of input"
        raise ExprSyntaxError(
            f"expected {' or '.join(expected)}, found {found}",
            position=tok.pos, expected=expected, found=found)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.advance()
        self.fail((repr(text),))

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek().kind != "end":
            self.fail(("end of input",))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            value = float(tok.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(
                    f"number literal {tok.text} overflows",
                    position=tok.pos, found=tok.text)
            return Num(value)
        if tok.kind == "name":
            if tok.text == "x":
                self.advance()
                return Var()
            if tok.text == "piecewise":
                return self.piecewise()
            if tok.text in _UNARY_FUNCS or tok.text in _VARIADIC_FUNCS:
                return self.call()
            self.fail(("number", "'x'", "function name", "'('"))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.fail(("number", "'x'", "function name", "'('"))

    def call(self) -> Expr:
        name_tok = self.advance()
        self.expect("(")
        args = [self.expr()]
        while self.peek().kind == "op" and self.peek().text == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        name = name_tok.text
        if name in _UNARY_FUNCS and len(args) != 1:
            raise ExprSyntaxError(
                f"{name} takes exactly 1 argument, got {len(args)}",
                position=name_tok.pos, found=name)
        if name in _VARIADIC_FUNCS and len(args) < 2:
            raise ExprSyntaxError(
                f"{name} takes at least 2 arguments, got {len(args)}",
                position=name_tok.pos, found=name)
        return Call(name, tuple(args))

    def piecewise(self) -> Expr:
        self.advance()
        self.expect("{")
        branches = []
        otherwise = None
        while True:
            tok = self.peek()
            if tok.kind == "name" and tok.text == "else":
                self.advance()
                self.expect(":")
                otherwise = self.expr()
                break
            guard = self.guard()
            self.expect(":")
            body = self.expr()
            if branches and not _comes_after(branches[-1][0], guard):
                raise ExprSyntaxError(
                    "piecewise guards must be disjoint and increasing",
                    position=tok.pos, found=tok.text)
            branches.append((guard, body))
            if self.peek().kind == "op" and self.peek().text == ";":
                self.advance()
                continue
            break
        self.expect("}")
        if not branches and otherwise is None:
            raise ExprSyntaxError("piecewise needs at least one branch",
                                  position=self.peek().pos)
        return Piecewise(tuple(branches), otherwise)

    def signed_number(self) -> float:
        neg = False
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            neg = True
        tok = self.peek()
        if tok.kind != "num":
            self.fail(("number",))
        self.advance()
        value = float(tok.text)
        return -value if neg else value

    def cmp(self) -> str:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("<", "<=", ">", ">="):
            return self.advance().text
        self.fail(("'<'", "'<='", "'>'", "'>='"))

    def guard(self) -> Guard:
        # forms: x CMP c | c CMP x | c CMP x CMP c
        tok = self.peek()
        if tok.kind == "name" and tok.text == "x":
            self.advance()
            op = self.cmp()
            c = self.signed_number()
            if op == "<":
                return Guard(-math.inf, False, c, False)
            if op == "<=":
                return Guard(-math.inf, False, c, True)
            if op == ">":
                return Guard(c, False, math.inf, False)
            return Guard(c, True, math.inf, False)
        lo = self.signed_number()
        op1 = self.cmp()
        var_tok = self.peek()
        if not (var_tok.kind == "name" and var_tok.text == "x"):
            self.fail(("'x'",))
        self.advance()
        if op1 in (">", ">="):
            # c > x reads x < c
            hi, hi_closed = lo, op1 == ">="
            if self.peek().kind == "op" and self.peek().text in (">", ">="):
                op2 = self.advance().text
                lo2 = self.signed_number()
                if lo2 >= hi:
                    raise ExprSyntaxError(
                        f"empty guard interval ({lo2!r}, {hi!r})",
                        position=tok.pos, found=tok.text)
                return Guard(lo2, op2 == ">=", hi, hi_closed)
            return Guard(-math.inf, False, hi, hi_closed)
        lo_closed = op1 == "<="
        if self.peek().kind == "op" and self.peek().text in ("<", "<="):
            op2 = self.advance().text
            hi = self.signed_number()
            guard = Guard(lo, lo_closed, hi, op2 == "<=")
            if guard.lo >= guard.hi:
                raise ExprSyntaxError(
                    f"empty guard interval ({guard.lo!r}, {guard.hi!r})",
                    position=tok.pos, found=tok.text)
            return guard
        return Guard(lo, lo_closed, math.inf, False)


def _comes_after(prev: Guard, nxt: Guard) -> bool:
    if nxt.lo > prev.hi:
        return True
    if nxt.lo == prev.hi and not (nxt.lo_closed and prev.hi_closed):
        return True
    return False


def parse(src: str) -> Expr:
    """Parse source text to an expression tree, or raise ExprSyntaxError."""
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# Evaluation


def _eval_error(message: str, node: Expr, x: float) -> ExprEvalError:
    return ExprEvalError(message, subexpression=format_expr(node), x=x)


def evaluate(e: Expr, x: float) -> float:
    """Evaluate at x. Domain faults (log of a nonpositive value, division
    by zero, sqrt of a negative, 0 to a negative power, a fractional power
    of a negative base, no matching piecewise branch) raise ExprEvalError.
    Overflow saturates to inf."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -evaluate(e.operand, x)
    if isinstance(e, BinOp):
        a = evaluate(e.left, x)
        b = evaluate(e.right, x)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0:
                raise _eval_error("division by zero", e, x)
            return a / b
        # math.pow, not **: ** yields a complex for (-2.0) ** 0.5
        try:
            return math.pow(a, b)
        except OverflowError:
            return math.inf
        except ValueError:
            if a == 0.0:
                raise _eval_error("zero raised to a negative power", e, x) \
                    from None
            raise _eval_error(
                "fractional power of a negative base", e, x) from None
    if isinstance(e, Call):
        args = [evaluate(arg, x) for arg in e.args]
        if e.func == "exp":
            try:
                return math.exp(args[0])
            except OverflowError:
                return math.inf
        if e.func == "log":
            if args[0] <= 0:
                raise _eval_error("log of a nonpositive value", e, x)
            return math.log(args[0])
        if e.func == "abs":
            return abs(args[0])
        if e.func == "sqrt":
            if args[0] < 0:
                raise _eval_error("sqrt of a negative value", e, x)
            return math.sqrt(args[0])
        if e.func == "min":
            return min(args)
        return max(args)
    if isinstance(e, Piecewise):
        for guard, body in e.branches:
            if guard.matches(x):
                return evaluate(body, x)
        if e.otherwise is not None:
            return evaluate(e.otherwise, x)
        raise _eval_error("no piecewise branch matches", e, x)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Breakpoints: where an expression may kink, jump, or change formula


_SCAN_GRID = 512
_BISECT_ITERS = 80


def _kink_sources(e: Expr, out: list):
    """Collect (subexpression, kind) pairs whose zeros are breakpoints."""
    if isinstance(e, BinOp):
        _kink_sources(e.left, out)
        _kink_sources(e.right, out)
        if e.op == "/":
            out.append(e.right)
    elif isinstance(e, Neg):
        _kink_sources(e.operand, out)
    elif isinstance(e, Call):
        for arg in e.args:
            _kink_sources(arg, out)
        if e.func in ("log", "sqrt", "abs"):
            out.append(e.args[0])
        elif e.func in ("min", "max") and len(e.args) == 2:
            out.append(BinOp("-", e.args[0], e.args[1]))
    elif isinstance(e, Piecewise):
        for _, body in e.branches:
            _kink_sources(body, out)
        if e.otherwise is not None:
            _kink_sources(e.otherwise, out)


def _guard_bounds(e: Expr, out: list):
    if isinstance(e, Piecewise):
        for guard, body in e.branches:
            for bound in (guard.lo, guard.hi):
                if math.isfinite(bound):
                    out.append(bound)
            _guard_bounds(body, out)
        if e.otherwise is not None:
            _guard_bounds(e.otherwise, out)
    elif isinstance(e, BinOp):
        _guard_bounds(e.left, out)
        _guard_bounds(e.right, out)
    elif isinstance(e, Neg):
        _guard_bounds(e.operand, out)
    elif isinstance(e, Call):
        for arg in e.args:
            _guard_bounds(arg, out)


def _scan_zeros(sub: Expr, a: float, b: float, out: list):
    def value(x):
        try:
            v = evaluate(sub, x)
        except ExprEvalError:
            return None
        return v if math.isfinite(v) else None

    step = (b - a) / _SCAN_GRID
    prev_x, prev_v = a, value(a)
    for i in range(1, _SCAN_GRID + 1):
        cur_x = a + step * i if i < _SCAN_GRID else b
        cur_v = value(cur_x)
        if prev_v is not None and prev_v == 0.0:
            out.append(prev_x)
        if (prev_v is not None and cur_v is not None
                and (prev_v < 0) != (cur_v < 0) and prev_v != 0
                and cur_v != 0):
            lo, hi, flo = prev_x, cur_x, prev_v
            for _ in range(_BISECT_ITERS):
                mid = (lo + hi) / 2.0
                if mid == lo or mid == hi:
                    break
                fm = value(mid)
                if fm is None or fm == 0.0:
                    break
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            out.append((lo + hi) / 2.0)
        prev_x, prev_v = cur_x, cur_v
    if prev_v is not None and prev_v == 0.0:
        out.append(b)


def breakpoints(e: Expr, s: MeasurableSet) -> tuple:
    """Points inside s where e can kink or jump: piecewise guard bounds,
    and zeros (by sign scan plus bisection) of divisors and of log, sqrt,
    abs, and two-argument min/max arguments."""
    if s.is_finite:
        return ()
    candidates: list = []
    _guard_bounds(e, candidates)
    subs: list = []
    _kink_sources(e, subs)
    for a, b in s.intervals:
        for sub in subs:
            _scan_zeros(sub, a, b, candidates)
    inside = [x for x in candidates if s.contains_point(x)]
    inside.sort()
    deduped: list = []
    for x in inside:
        if not deduped or x - deduped[-1] > 1e-12 * max(1.0, abs(x)):
            deduped.append(x)
    return tuple(deduped)


# ---------------------------------------------------------------------------
# Printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return _PREC["atom"]


def _wrap(text: str, need: bool) -> str:
    return f"({text})" if need else text


def _guard_text(g: Guard) -> str:
    if math.isinf(g.lo) and math.isinf(g.hi):
        return "x < inf"
    if math.isinf(g.lo):
        return f"x {'<=' if g.hi_closed else '<'} {g.hi!r}"
    if math.isinf(g.hi):
        return f"x {'>=' if g.lo_closed else '>'} {g.lo!r}"
    return (f"{g.lo!r} {'<=' if g.lo_closed else '<'} x "
            f"{'<=' if g.hi_closed else '<'} {g.hi!r}")


def format_expr(e: Expr) -> str:
    """Render with minimal parentheses; parse(format_expr(e)) == e for any
    tree produced by parse."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        inner = format_expr(e.operand)
        return "-" + _wrap(inner, _prec(e.operand) < _PREC["neg"])
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = format_expr(e.left)
        right = format_expr(e.right)
        if e.op == "^":
            left = _wrap(left, _prec(e.left) <= p)
            right = _wrap(right, isinstance(e.right, BinOp)
                          and _PREC[e.right.op] < _PREC["neg"])
        else:
            left = _wrap(left, _prec(e.left) < p)
            wrap_right = _prec(e.right) < p or (
                isinstance(e.right, BinOp) and _PREC[e.right.op] == p)
            right = _wrap(right, wrap_right)
        return f"{left} {e.op} {right}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, Piecewise):
        parts = [f"{_guard_text(g)}: {format_expr(body)}"
                 for g, body in e.branches]
        if e.otherwise is not None:
            parts.append(f"else: {format_expr(e.otherwise)}")
        return "piecewise {" + "; ".join(parts) + "}"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Bridges to measures


def _as_expr(source) -> Expr:
    return source if isinstance(source, Expr) else parse(source)


def density_from_expr(source, space: Space) -> Density:
    """Compile expression text (or a parsed tree) to a Density whose
    breakpoints are the expression's kink points inside the space."""
    e = _as_expr(source)
    bps = breakpoints(e, MeasurableSet.full(space))
    return Density(lambda x: evaluate(e, x), breakpoints=bps)


def weight_from_expr(source, space: Space) -> WeightFunction:
    e = _as_expr(source)
    bps = breakpoints(e, MeasurableSet.full(space))
    return WeightFunction(lambda x: evaluate(e, x), breakpoints=bps)


# ---------------------------------------------------------------------------
# Set syntax: "[a,b]" unions and "{atom, atom}" lists

_INTERVAL_RE = re.compile(
    r"\s*\[\s*([^\s,\]]+)\s*,\s*([^\s,\]]+)\s*\]\s*")


def parse_set(text: str, space: Space) -> MeasurableSet:
    """Parse "[a,b]" or "[a,b] U [c,d]" (also the union sign) on interval
    spaces, "{a1, a2}" atom lists on finite ones, or "full"."""
    stripped = text.strip()
    if stripped == "full":
        return MeasurableSet.full(space)
    if stripped.startswith("{"):
        if not stripped.endswith("}"):
            raise ExprSyntaxError("unterminated atom list",
                                  position=len(text.encode("utf-8")) - 1)
        body = stripped[1:-1].strip()
        names = [part.strip() for part in body.split(",")] if body else []
        try:
            atoms = [space.resolve_atom(name) for name in names]
            return MeasurableSet.of_atoms(space, atoms)
        except DomainError as exc:
            raise ExprSyntaxError(str(exc), position=0) from None
    pieces = re.split(r"∪|U|u", stripped)
    intervals = []
    for piece in pieces:
        m = _INTERVAL_RE.fullmatch(piece)
        if m is None:
            raise ExprSyntaxError(
                f"expected an interval like [a,b], found {piece.strip()!r}",
                position=_byte_offset(text, text.find(piece)))
        try:
            a, b = float(m.group(1)), float(m.group(2))
        except ValueError:
            raise ExprSyntaxError(
                f"interval bounds must be numbers: {piece.strip()!r}",
                position=_byte_offset(text, text.find(piece))) from None
        intervals.append((a, b))
    try:
        return MeasurableSet.of_intervals(space, intervals)
    except DomainError as exc:
        raise ExprSyntaxError(str(exc), position=0) from None
