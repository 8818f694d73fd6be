"""Closed-form expressions for user-defined families.

Grammar (whitespace ignored):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | atom
    atom    := number | 'ipi' | 'iπ' | 'i' | 'pi' | 'π' | var | const | func '(' expr ')' | '(' expr ')'
    number  := digits ['.' digits] | '.' digits
    var     := 'z' j | 'zeta' j | 'var_' j      (j = 1, 2, ...)
    const   := 'c_' name, bound by the caller
    func    := 'exp' | 'sinh' | 'cosh' | 'tanh'

Juxtaposition is not multiplication: write 2*ipi, not 2ipi.  The unicode
operators × ÷ − are accepted as * / -.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .report import ConfigError

FUNCS = {"exp": np.exp, "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh}

_TOKEN = re.compile(r"""
    (?P<num>\d+\.\d*|\d+|\.\d+)
  | (?P<name>[A-Za-z_π][A-Za-z_0-9π]*)
  | (?P<op>[-+*/()×÷−])
  | (?P<space>\s+)
""", re.VERBOSE)

_VAR = re.compile(r"^(?:z|zeta|var_)(\d+)$")


class ExprError(ConfigError):
    """Malformed expression."""


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprError(f"unexpected character {src[pos]!r} at {pos}")
        kind = m.lastgroup
        text = m.group(kind)
        if kind != "space":
            text = {"×": "*", "÷": "/", "−": "-"}.get(text, text)
            out.append(Token(kind, text, pos))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


# ------------------------------------------------------------ tree


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple = ()
    value: complex = 0j
    index: int = 0
    name: str = ""

    def vars(self) -> set:
        if self.op == "var":
            return {self.index}
        out: set = set()
        for a in self.args:
            out |= a.vars()
        return out

    def consts(self) -> set:
        if self.op == "const":
            return {self.name}
        out: set = set()
        for a in self.args:
            out |= a.consts()
        return out

    def __str__(self) -> str:
        if self.op == "num":
            v = self.value
            return f"{v.real:g}" if v.imag == 0 else f"({v.real:g}{v.imag:+g}i)"
        if self.op == "var":
            return f"z{self.index}"
        if self.op == "const":
            return self.name
        if self.op == "neg":
            return f"(-{self.args[0]})"
        if self.op in FUNCS:
            return f"{self.op}({self.args[0]})"
        return f"({self.args[0]} {self.op} {self.args[1]})"


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        t = self.take()
        if t.text != text:
            raise ExprError(f"expected {text!r} at {t.pos}, found {t.text or 'end of input'!r}")

    def parse(self) -> Node:
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ExprError(f"unexpected {t.text!r} at {t.pos}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            node = Node(op, (node, self.term()))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            node = Node(op, (node, self.unary()))
        return node

    def unary(self) -> Node:
        t = self.peek()
        if t.text == "-":
            self.take()
            return Node("neg", (self.unary(),))
        if t.text == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> Node:
        t = self.take()
        if t.kind == "num":
            return Node("num", value=complex(float(t.text)))
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            name = t.text
            if name in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Node(name, (arg,))
            if name in ("ipi", "iπ"):
                return Node("num", value=1j * np.pi)
            if name in ("pi", "π"):
                return Node("num", value=complex(np.pi))
            if name == "i":
                return Node("num", value=1j)
            m = _VAR.match(name)
            if m:
                j = int(m.group(1))
                if j < 1:
                    raise ExprError(f"variables are numbered from 1 ({name!r} at {t.pos})")
                return Node("var", index=j)
            if name.startswith("c_") and len(name) > 2:
                return Node("const", name=name)
            raise ExprError(f"unknown name {name!r} at {t.pos}")
        raise ExprError(f"unexpected {t.text or 'end of input'!r} at {t.pos}")


def parse(src: str) -> Node:
    if not src.strip():
        raise ExprError("empty expression")
    return _Parser(src).parse()


# ------------------------------------------------------------ evaluation


def evaluate(node: Node, z, consts: dict | None = None):
    """Evaluate on z of shape (..., k); variable j reads z[..., j-1]."""
    z = np.asarray(z, dtype=complex)
    consts = consts or {}
    op = node.op
    if op == "num":
        return node.value
    if op == "var":
        if node.index > z.shape[-1]:
            raise ExprError(f"z{node.index} used with only {z.shape[-1]} variables")
        return z[..., node.index - 1]
    if op == "const":
        if node.name not in consts:
            raise ExprError(f"constant {node.name} is not bound")
        return complex(consts[node.name])
    if op == "neg":
        return -evaluate(node.args[0], z, consts)
    if op in FUNCS:
        return FUNCS[op](evaluate(node.args[0], z, consts))
    a = evaluate(node.args[0], z, consts)
    b = evaluate(node.args[1], z, consts)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    return a / b


def compile_expr(src: str, arity: int, consts: dict | None = None) -> Callable:
    """Parse and check an expression in z1..z_arity; returns z -> values over z.shape[:-1]."""
    node = parse(src)
    bad = sorted(j for j in node.vars() if j > arity)
    if bad:
        raise ExprError(f"expression for arity {arity} uses z{bad[0]}")
    missing = sorted(node.consts() - set(consts or {}))
    if missing:
        raise ExprError(f"unbound constants: {', '.join(missing)}")
    bound = dict(consts or {})

    def fn(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            val = evaluate(node, z, bound)
        return np.broadcast_to(np.asarray(val, dtype=complex), z.shape[:-1])

    fn.node = node
    fn.source = src
    return fn


def linear_form(src: str, arity: int) -> tuple[np.ndarray, complex]:
    """Coefficients (a, b) of an affine expression a.z + b, checked for affinity."""
    fn = compile_expr(src, arity)
    zero = np.zeros((1, arity), dtype=complex)
    b = complex(fn(zero)[0])
    eye = np.eye(arity, dtype=complex)
    a = fn(eye) - b
    rng = np.random.default_rng(0)
    probe = rng.normal(size=(4, arity)) + 1j * rng.normal(size=(4, arity))
    if not np.allclose(fn(probe), probe @ a + b, atol=1e-10):
        raise ExprError(f"{src!r} is not affine in z1..z{arity}")
    if np.any(np.abs(a.imag) > 1e-12):
        raise ExprError(f"pole plane {src!r} must have real coefficients")
    return a.real, b
