"""Arithmetic expressions over complex numbers.

Expressions are parsed once into an immutable tree and evaluated with
numpy, so bindings may be scalars or arrays of the same shape.

Grammar (highest precedence last)::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | "+" unary | power
    power := atom (("^" | "**") unary)?
    atom  := NUMBER | NAME "(" expr ")" | NAME | "(" expr ")"
"""

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

import numpy as np

from riemann.errors import EvaluationError, ExpressionSyntaxError

Value = Union[complex, np.ndarray]

FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "arctan": np.arctan,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": lambda z: np.abs(z).astype(complex),
    "re": lambda z: np.real(z).astype(complex),
    "im": lambda z: np.imag(z).astype(complex),
    "conj": np.conj,
}
CONSTANTS = {"pi": np.pi}

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),])"
    r")"
)


# ---------------------------------------------------------------------
# Tree
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class Number:
    """Complex literal."""

    value: complex

    def evaluate(self, bindings: dict) -> Value:
        """Value of the literal."""
        return np.complex128(self.value)

    def __str__(self) -> str:
        """Canonical text of the subtree."""
        re_part, im_part = self.value.real, self.value.imag
        if im_part == 0:
            text = repr(float(re_part))
            return f"({text})" if re_part < 0 else text
        sign = "+" if im_part >= 0 else "-"
        return f"({float(re_part)!r}{sign}{abs(float(im_part))!r}j)"


@dataclass(frozen=True)
class Name:
    """Named variable."""

    id: str

    def evaluate(self, bindings: dict) -> Value:
        """Value bound to the name."""
        try:
            return np.asarray(bindings[self.id], dtype=complex)
        except KeyError as e:
            raise EvaluationError(f"Unbound variable '{self.id}'") from e

    def __str__(self) -> str:
        """The name."""
        return self.id


@dataclass(frozen=True)
class Unary:
    """Unary minus."""

    operand: "Node"

    def evaluate(self, bindings: dict) -> Value:
        """Negated operand."""
        return -self.operand.evaluate(bindings)

    def __str__(self) -> str:
        """Parenthesized negation."""
        return f"(-{self.operand})"


@dataclass(frozen=True)
class Binary:
    """Binary operation; op is one of + - * / ^."""

    op: str
    left: "Node"
    right: "Node"

    def evaluate(self, bindings: dict) -> Value:
        """Operator applied to both operands."""
        a = self.left.evaluate(bindings)
        b = self.right.evaluate(bindings)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            if np.any(b == 0):
                raise EvaluationError(f"Division by zero in '{self}'")
            return a / b
        if np.any((a == 0) & (np.real(b) < 0)):
            raise EvaluationError(
                f"Zero raised to a negative power in '{self}'"
            )
        return _checked(np.power(a, b), self)

    def __str__(self) -> str:
        """Parenthesized binary operation."""
        op = "^" if self.op == "^" else f" {self.op} "
        return f"({self.left}{op}{self.right})"


@dataclass(frozen=True)
class Call:
    """Function application."""

    func: str
    arg: "Node"

    def evaluate(self, bindings: dict) -> Value:
        """Function applied to the argument."""
        x = self.arg.evaluate(bindings)
        if self.func == "ln" and np.any(x == 0):
            raise EvaluationError(f"Logarithm of zero in '{self}'")
        return _checked(FUNCTIONS[self.func](x), self)

    def __str__(self) -> str:
        """Function call text."""
        return f"{self.func}({self.arg})"


Node = Union[Number, Name, Unary, Binary, Call]


def _checked(value: np.ndarray, node: Node) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        raise EvaluationError(f"Non-finite value in '{node}'")
    return value


def _walk(node: Node) -> Iterable[Node]:
    yield node
    if isinstance(node, Unary):
        yield from _walk(node.operand)
    elif isinstance(node, Binary):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Call):
        yield from _walk(node.arg)


@dataclass(frozen=True)
class Expression:
    """Parsed expression with its source text.

    Parameters
    ----------
    text : str
        Source text as given to :func:`parse_expression`.
    root : Node
        Root of the expression tree.

    """

    text: str
    root: Node = field(repr=False)

    @property
    def variables(self) -> frozenset:
        """Names of the free variables."""
        return frozenset(n.id for n in _walk(self.root) if isinstance(n, Name))

    def evaluate(self, bindings: Optional[dict] = None, **kwargs) -> Value:
        """Evaluate with variables bound to scalars or arrays.

        Raises
        ------
        EvaluationError
            On division by zero, ln(0), non-finite results or unbound
            names.

        """
        bindings = {**(bindings or {}), **kwargs}
        with np.errstate(all="ignore"):
            value = self.root.evaluate(bindings)
        value = _checked(np.asarray(value, dtype=complex), self.root)
        return value[()] if value.ndim == 0 else value

    def __str__(self) -> str:
        """Canonical text of the whole expression."""
        return format_expression(self)


def format_expression(expr: Expression) -> str:
    """Print an expression in fully parenthesized form.

    The output parses back to an expression that evaluates identically.
    """
    return str(expr.root)


# ---------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------
def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            pos = len(text)
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            offset = len(text[:pos].encode())
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(
                f"Unexpected character {text[pos + stripped]!r}",
                offset + stripped,
            )
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), len(text[:start].encode())))
        pos = match.end()
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Optional[frozenset]) -> None:
        self.tokens = _tokenize(text)
        self.variables = variables
        self.index = 0

    @property
    def current(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def accept(self, *ops: str) -> Optional[str]:
        kind, value, _ = self.current
        if kind == "op" and value in ops:
            self.index += 1
            return value
        return None

    def expect(self, op: str) -> None:
        if self.accept(op) is None:
            kind, value, offset = self.current
            found = "end of input" if kind == "end" else repr(value)
            raise ExpressionSyntaxError(
                f"Expected '{op}', found {found}", offset
            )

    def parse(self) -> Node:
        node = self.expr()
        kind, value, offset = self.current
        if kind != "end":
            raise ExpressionSyntaxError(f"Unexpected {value!r}", offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while (op := self.accept("*", "/")) is not None:
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.accept("-") is not None:
            return Unary(self.unary())
        if self.accept("+") is not None:
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.accept("^", "**") is not None:
            node = Binary("^", node, self.unary())
        return node

    def atom(self) -> Node:
        kind, value, offset = self.current
        if kind == "number":
            self.index += 1
            return Number(complex(value))
        if kind == "name":
            self.index += 1
            if self.accept("(") is not None:
                if value not in FUNCTIONS:
                    raise ExpressionSyntaxError(
                        f"Unknown function '{value}'", offset
                    )
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            if value in CONSTANTS:
                return Number(complex(CONSTANTS[value]))
            if self.variables is not None and value not in self.variables:
                raise ExpressionSyntaxError(
                    f"Unknown identifier '{value}'", offset
                )
            return Name(value)
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ExpressionSyntaxError(f"Unexpected {found}", offset)


def parse_expression(
    text: str, variables: Optional[Iterable[str]] = None
) -> Expression:
    """Parse expression text.

    Parameters
    ----------
    text : str
        Expression source, e.g. ``"sqrt(2)*a*exp(u/2)*sin(phi/2)"``.
    variables : Iterable[str], optional
        Allowed variable names. If given, any other identifier is
        rejected; otherwise every identifier is a free variable.

    Returns
    -------
    Expression
        The parsed expression.

    Raises
    ------
    ExpressionSyntaxError
        On malformed text, unknown functions or unknown identifiers,
        with the byte offset of the problem.

    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionSyntaxError("Empty expression", 0)
    allowed = frozenset(variables) if variables is not None else None
    return Expression(text, _Parser(text, allowed).parse())
