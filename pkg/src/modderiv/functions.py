"""Evaluable real functions of one real variable.

A :class:`RealFunction` wraps one of three sources (a named builtin, a parsed
expression, or sampled data) together with a closed domain ``[a, b]``.
Evaluation is vectorized: every function accepts a float or a numpy array and
returns the same shape.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, EvalError, FormatError, ParseError

ArrayLike = Union[float, np.ndarray]

# Relative slack for arguments that overshoot a finite domain endpoint by
# rounding (e.g. x + eps computed in floating point).
_DOMAIN_SLACK = 1e-12


# ---------------------------------------------------------------------------
# Expression syntax tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Unary:
    op: str  # neg, abs, sqrt, sin, cos, exp, log
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / ^
    left: "Node"
    right: "Node"


Node = Union[Const, Var, Unary, Binary]

FUNCTIONS = ("abs", "sqrt", "sin", "cos", "exp", "log")
CONSTANTS = {"pi": math.pi, "e": math.e}


def _check(cond: np.ndarray, message: str) -> None:
    if np.any(cond):
        raise EvalError(message)


def eval_node(node: Node, x: np.ndarray) -> np.ndarray:
    """Evaluate ``node`` elementwise on ``x``; raises EvalError on undefined ops."""
    with np.errstate(all="ignore"):
        return _eval(node, x)


def _eval(node: Node, x: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.full(x.shape, node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Unary):
        v = _eval(node.arg, x)
        if node.op == "neg":
            return -v
        if node.op == "abs":
            return np.abs(v)
        if node.op == "sqrt":
            _check(v < 0, "sqrt of a negative number")
            return np.sqrt(v)
        if node.op == "log":
            _check(v <= 0, "log of a non-positive number")
            return np.log(v)
        if node.op == "sin":
            return np.sin(v)
        if node.op == "cos":
            return np.cos(v)
        if node.op == "exp":
            out = np.exp(v)
            _check(~np.isfinite(out), "exp overflow")
            return out
        raise EvalError(f"unknown unary operator {node.op!r}")
    left = _eval(node.left, x)
    right = _eval(node.right, x)
    op = node.op
    if op == "+":
        out = left + right
    elif op == "-":
        out = left - right
    elif op == "*":
        out = left * right
    elif op == "/":
        _check(right == 0, "division by zero")
        out = left / right
    elif op == "^":
        integral = np.floor(right) == right
        _check((left < 0) & ~integral, "non-integer power of a negative base")
        _check((left == 0) & (right < 0), "negative power of zero")
        out = np.power(left, right)
    else:
        raise EvalError(f"unknown binary operator {op!r}")
    _check(~np.isfinite(out), f"non-finite result of {op!r}")
    return out


def to_text(node: Node) -> str:
    """Print ``node`` fully parenthesized; ``parse_expression`` reads it back."""
    if isinstance(node, Const):
        text = repr(float(node.value))
        return f"({text})" if node.value < 0 or text.startswith("-") else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{to_text(node.arg)})"
        return f"{node.op}({to_text(node.arg)})"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_ε][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_PRIMARY_START = frozenset({"number", "identifier", "'('", "'-'"})


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def _fail(self, expected: Iterable[str]) -> ParseError:
        found = self.tok.text or "end of input"
        return ParseError(f"unexpected {found!r}", self.tok.pos, frozenset(expected))

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise self._fail({"operator", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is_op("+", "-"):
            op = self.tok.text
            self.i += 1
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is_op("*", "/"):
            op = self.tok.text
            self.i += 1
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self._is_op("-"):
            self.i += 1
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self._is_op("^"):
            self.i += 1
            return Binary("^", base, self.exponent())
        return base

    def exponent(self) -> Node:
        if self._is_op("-"):
            self.i += 1
            return Unary("neg", self.exponent())
        return self.power()

    def primary(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            value = float(tok.text)
            if not math.isfinite(value):
                raise ParseError("number out of range", tok.pos)
            self.i += 1
            return Const(value)
        if tok.kind == "ident":
            self.i += 1
            if tok.text in FUNCTIONS:
                if not self._is_op("("):
                    raise self._fail({"'('"})
                self.i += 1
                arg = self.expr()
                if not self._is_op(")"):
                    raise self._fail({"')'", "operator"})
                self.i += 1
                return Unary(tok.text, arg)
            if tok.text in self.variables:
                return Var(self.variables[0])
            if tok.text in CONSTANTS:
                return Const(CONSTANTS[tok.text])
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos,
                             frozenset(self.variables) | frozenset(FUNCTIONS) | frozenset(CONSTANTS))
        if self._is_op("("):
            self.i += 1
            node = self.expr()
            if not self._is_op(")"):
                raise self._fail({"')'", "operator"})
            self.i += 1
            return node
        raise self._fail(_PRIMARY_START)


def parse_ast(text: str, variables: Sequence[str] = ("x",)) -> Node:
    if not text or not text.strip():
        raise ParseError("empty expression", 0, _PRIMARY_START)
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# RealFunction
# ---------------------------------------------------------------------------


class Interpolation(enum.Enum):
    PiecewiseLinear = "linear"
    NearestLeft = "nearest-left"


@dataclass(frozen=True)
class Builtin:
    name: str
    params: tuple[float, ...] = ()


@dataclass(frozen=True)
class Expression:
    ast: Node
    text: str


@dataclass(frozen=True, eq=False)
class Sampled:
    xs: np.ndarray
    ys: np.ndarray
    interpolation: Interpolation = Interpolation.PiecewiseLinear

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))


@dataclass(frozen=True, eq=False)
class Custom:
    func: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"


Source = Union[Builtin, Expression, Sampled, Custom]


@dataclass(frozen=True, eq=False)
class RealFunction:
    """Immutable real map with a closed domain.

    ``impl`` is a vectorized callable; it is only ever called on arguments
    already checked against ``domain``.
    """

    source: Source
    domain: tuple[float, float]
    impl: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    name: str = ""
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a, b = self.domain
        if not a <= b:
            raise DomainError(f"empty domain [{a}, {b}]")

    def __call__(self, x: ArrayLike) -> ArrayLike:
        arr = np.asarray(x, dtype=float)
        scalar = arr.ndim == 0
        arr = self._clip(np.atleast_1d(arr))
        with np.errstate(all="ignore"):
            out = np.asarray(self.impl(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        if not np.all(np.isfinite(out)):
            raise EvalError(f"{self.label}: non-finite value")
        return float(out[0]) if scalar else out

    def _clip(self, x: np.ndarray) -> np.ndarray:
        a, b = self.domain
        if np.any(np.isnan(x)):
            raise DomainError("NaN argument")
        lo = a - _DOMAIN_SLACK * max(1.0, abs(a)) if math.isfinite(a) else a
        hi = b + _DOMAIN_SLACK * max(1.0, abs(b)) if math.isfinite(b) else b
        bad = (x < lo) | (x > hi)
        if np.any(bad):
            raise DomainError(f"{self.label}: argument {x[bad][0]!r} outside domain [{a}, {b}]")
        return np.clip(x, a, b)

    def contains(self, x: float) -> bool:
        a, b = self.domain
        return a <= x <= b

    @property
    def label(self) -> str:
        return self.name or type(self.source).__name__.lower()

    def restrict(self, a: float, b: float) -> "RealFunction":
        lo, hi = self.domain
        if not (lo <= a <= b <= hi):
            raise DomainError(f"[{a}, {b}] is not inside the domain [{lo}, {hi}]")
        return RealFunction(self.source, (a, b), self.impl, self.name, dict(self.meta))

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray],
                      domain: tuple[float, float] = (-math.inf, math.inf),
                      name: str = "custom", **meta: Any) -> "RealFunction":
        return cls(Custom(func, name), domain, func, name, meta)


def evaluate(f: RealFunction, x: ArrayLike) -> ArrayLike:
    """Return ``f(x)``; raises DomainError outside the domain."""
    return f(x)


def parse_expression(text: str, domain: tuple[float, float] = (-math.inf, math.inf),
                     variables: Sequence[str] = ("x",)) -> RealFunction:
    """Parse ``text`` into an expression-backed RealFunction.

    Precedence from tightest: ``^`` (right associative), unary minus,
    ``* /``, ``+ -``. Calls use ``name(expr)`` for abs, sqrt, sin, cos, exp
    and log; ``pi`` and ``e`` are constants.
    """
    ast = parse_ast(text, variables)
    return RealFunction(Expression(ast, text), domain, lambda x: eval_node(ast, x), f"expr:{text}")


def from_samples(points: Iterable[Sequence[float]],
                 interpolation: Interpolation = Interpolation.PiecewiseLinear,
                 name: str = "samples") -> RealFunction:
    pts = [tuple(p) for p in points]
    if len(pts) < 2:
        raise FormatError(f"need at least 2 points, got {len(pts)}")
    if any(len(p) != 2 for p in pts):
        raise FormatError("every point must be an (x, y) pair")
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise FormatError("NaN or infinite sample value")
    if np.any(np.diff(xs) <= 0):
        i = int(np.argmax(np.diff(xs) <= 0))
        raise FormatError(f"x not strictly increasing at point {i + 1} (x={xs[i + 1]!r})")
    xs.setflags(write=False)
    ys.setflags(write=False)
    src = Sampled(xs, ys, interpolation)
    if interpolation is Interpolation.PiecewiseLinear:
        impl = lambda x: np.interp(x, xs, ys)  # noqa: E731
    else:
        def impl(x):
            idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 1)
            return ys[idx]
    return RealFunction(src, (float(xs[0]), float(xs[-1])), impl, name, {"n_points": len(xs)})


_CSV_NUMBER = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


def parse_csv(text: str) -> list[tuple[float, float]]:
    """Parse ``x,y`` lines with an optional ``x,y`` header line."""
    points = []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(",")]
        if lineno == 1 and [c.lower() for c in cells] == ["x", "y"]:
            continue
        if len(cells) != 2 or not all(_CSV_NUMBER.match(c) for c in cells):
            raise FormatError(f"line {lineno}: expected 'x,y' numbers, got {raw!r}")
        points.append((float(cells[0]), float(cells[1])))
    return points


def load_csv(path: str | Path,
             interpolation: Interpolation = Interpolation.PiecewiseLinear) -> RealFunction:
    path = Path(path)
    return from_samples(parse_csv(path.read_text()), interpolation, name=f"csv:{path.name}")


def write_csv(path: str | Path, xs: Sequence[float], ys: Sequence[float]) -> None:
    lines = ["x,y"] + [f"{x!r},{y!r}" for x, y in zip(map(float, xs), map(float, ys))]
    Path(path).write_text("\n".join(lines) + "\n")
