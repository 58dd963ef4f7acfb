"""Metric expression language: parsing, exact Wirtinger differentiation,
evaluation.

Grammar (UTF-8 text)::

    metric   := "dim" INT ";" entry+
    entry    := "h[" INT "," INT "]" "=" expr ";"
    expr     := term (("+"|"-") term)*
    term     := factor (("*"|"/") factor)*
    factor   := base ("^" SIGNED_INT)?
    base     := NUMBER | "i" | "z" INT | "zb" INT | FUNC "(" expr ")" | "(" expr ")"
    FUNC     := "exp" | "log" | "sqrt"

Entry (a, b) defines h_{a b-bar}.  The variables z_k and zb_k are treated
as independent (Wirtinger calculus): d(z_k)/d(z_j) = delta_kj while
d(zb_k)/d(z_j) = 0, and symmetrically for d/d(zb_j).  Unspecified entries
default to the Kronecker delta; an omitted lower triangle is synthesized
as the formal conjugate transpose of the upper one (swap z <-> zb and
conjugate constants).

Simplification is restricted to constant folding and 0/1 identities, so
derivative trees stay semantically transparent.  Entry derivatives are
memoized per (entry, sorted derivative multi-index); the memo table is an
ordinary dict written with setdefault (first write wins under the GIL),
which keeps concurrent readers safe.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DslError, DslEvalError, DslSyntaxError

__all__ = [
    "Node",
    "MetricDefinition",
    "parse_metric",
    "parse_expression",
    "wirtinger_derivative",
    "evaluate",
    "unparse",
    "conjugate_node",
]

_FUNCS = ("exp", "log", "sqrt")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Node:
    """One expression node.

    kind is one of: const (value: complex), z / zb (value: 1-based variable
    index), add / sub / mul / div (two children), pow (value: nonzero int
    exponent, one child), call (value: function name, one child).
    """

    kind: str
    value: object = None
    children: tuple = ()


ZERO = Node("const", 0j)
ONE = Node("const", 1 + 0j)


def const(v) -> Node:
    return Node("const", complex(v))


def var_z(k: int) -> Node:
    return Node("z", int(k))


def var_zb(k: int) -> Node:
    return Node("zb", int(k))


def _is_const(node: Node, v=None) -> bool:
    if node.kind != "const":
        return False
    return True if v is None else node.value == complex(v)


def add(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Node("add", None, (a, b))


def sub(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return const(a.value - b.value)
    if _is_const(b, 0):
        return a
    return Node("sub", None, (a, b))


def mul(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Node("mul", None, (a, b))


def div(a: Node, b: Node) -> Node:
    if _is_const(b) and b.value != 0 and _is_const(a):
        return const(a.value / b.value)
    if _is_const(b, 1):
        return a
    if _is_const(a, 0):
        return ZERO
    return Node("div", None, (a, b))


def pow_(a: Node, m: int) -> Node:
    m = int(m)
    if m == 0:
        return ONE
    if m == 1:
        return a
    if _is_const(a):
        try:
            return const(a.value ** m)
        except (ZeroDivisionError, OverflowError):
            pass
    return Node("pow", m, (a,))


def call(fn: str, a: Node) -> Node:
    if _is_const(a):
        try:
            return const(getattr(cmath, fn)(a.value))
        except (ValueError, OverflowError):
            pass
    return Node("call", fn, (a,))


def conjugate_node(node: Node) -> Node:
    """Formal conjugate: swap z <-> zb and conjugate constants.

    For an expression built from the grammar this represents the pointwise
    complex conjugate of the original function.
    """
    k = node.kind
    if k == "const":
        return const(complex(node.value).conjugate())
    if k == "z":
        return var_zb(node.value)
    if k == "zb":
        return var_z(node.value)
    kids = tuple(conjugate_node(c) for c in node.children)
    if k == "add":
        return add(*kids)
    if k == "sub":
        return sub(*kids)
    if k == "mul":
        return mul(*kids)
    if k == "div":
        return div(*kids)
    if k == "pow":
        return pow_(kids[0], node.value)
    return call(node.value, kids[0])


# ---------------------------------------------------------------------------
# Tokenizer


@dataclass(frozen=True)
class _Token:
    kind: str  # INT | NUMBER | IDENT | PUNCT | EOF
    text: str
    line: int
    col: int


_PUNCT = set("[],;=+-*/^()")


def _tokenize(source: str) -> list:
    toks = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch in _PUNCT:
            toks.append(_Token("PUNCT", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            isnum = False
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":
                isnum = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    isnum = True
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            toks.append(_Token("NUMBER" if isnum else "INT", text, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            toks.append(_Token("IDENT", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, start_col)
    toks.append(_Token("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens, n_vars=None):
        self.toks = tokens
        self.i = 0
        self.n_vars = n_vars  # None: only positivity of indices is checked

    def peek(self) -> _Token:
        return self.toks[self.i]

    def advance(self) -> _Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, msg, tok=None):
        t = tok or self.peek()
        raise DslSyntaxError(msg, t.line, t.col)

    def expect_punct(self, ch) -> _Token:
        t = self.peek()
        if t.kind != "PUNCT" or t.text != ch:
            self.error(f"expected {ch!r}, found {t.text!r}" if t.kind != "EOF" else f"expected {ch!r}, found end of input")
        return self.advance()

    def accept_punct(self, ch) -> bool:
        t = self.peek()
        if t.kind == "PUNCT" and t.text == ch:
            self.advance()
            return True
        return False

    def expect_int(self) -> int:
        t = self.peek()
        if t.kind != "INT":
            self.error(f"expected an integer, found {t.text!r}")
        self.advance()
        return int(t.text)

    # expr := term (("+"|"-") term)*
    def expr(self) -> Node:
        node = self.term()
        while True:
            t = self.peek()
            if t.kind == "PUNCT" and t.text in "+-":
                self.advance()
                rhs = self.term()
                node = add(node, rhs) if t.text == "+" else sub(node, rhs)
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            t = self.peek()
            if t.kind == "PUNCT" and t.text in "*/":
                self.advance()
                rhs = self.factor()
                node = mul(node, rhs) if t.text == "*" else div(node, rhs)
            else:
                return node

    def factor(self) -> Node:
        node = self.base()
        if self.accept_punct("^"):
            sign = 1
            if self.accept_punct("-"):
                sign = -1
            elif self.accept_punct("+"):
                sign = 1
            t = self.peek()
            if t.kind == "NUMBER":
                self.error("non-integer exponent")
            if t.kind != "INT":
                self.error(f"expected an integer exponent, found {t.text!r}")
            self.advance()
            m = sign * int(t.text)
            if m == 0:
                self.error("exponent must be a nonzero integer", t)
            node = pow_(node, m)
        return node

    def base(self) -> Node:
        t = self.peek()
        if t.kind in ("NUMBER", "INT"):
            self.advance()
            return const(float(t.text))
        if t.kind == "PUNCT" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect_punct(")")
            return node
        if t.kind == "IDENT":
            self.advance()
            name = t.text
            if name == "i":
                return const(1j)
            if name in _FUNCS:
                self.expect_punct("(")
                arg = self.expr()
                self.expect_punct(")")
                return call(name, arg)
            for prefix, ctor in (("zb", var_zb), ("z", var_z)):
                if name.startswith(prefix) and name[len(prefix):].isdigit():
                    k = int(name[len(prefix):])
                    if k < 1:
                        self.error(f"variable index must be at least 1: {name!r}", t)
                    if self.n_vars is not None and k > self.n_vars:
                        self.error(f"variable {name!r} exceeds the declared dimension", t)
                    return ctor(k)
            self.error(f"unknown symbol {name!r}", t)
        self.error(f"unexpected token {t.text!r}" if t.kind != "EOF" else "unexpected end of input")


def parse_expression(source: str, n: int | None = None) -> Node:
    """Parse a single expression (mostly for tests and tooling)."""
    p = _Parser(_tokenize(source), n)
    node = p.expr()
    t = p.peek()
    if t.kind != "EOF":
        p.error(f"unexpected trailing input {t.text!r}")
    return node


def parse_metric(source: str) -> "MetricDefinition":
    """Parse a full metric definition."""
    p = _Parser(_tokenize(source))
    t = p.peek()
    if t.kind != "IDENT" or t.text != "dim":
        p.error("metric source must start with 'dim'")
    p.advance()
    n = p.expect_int()
    if n < 1:
        p.error("dimension must be at least 1", t)
    p.n_vars = n
    p.expect_punct(";")

    explicit: dict = {}
    saw_entry = False
    while p.peek().kind != "EOF":
        t = p.peek()
        if t.kind != "IDENT" or t.text != "h":
            p.error(f"expected an entry 'h[a,b] = ...;', found {t.text!r}")
        p.advance()
        p.expect_punct("[")
        a = p.expect_int()
        p.expect_punct(",")
        b = p.expect_int()
        p.expect_punct("]")
        if not (1 <= a <= n and 1 <= b <= n):
            p.error(f"entry index ({a},{b}) outside 1..{n}", t)
        if (a - 1, b - 1) in explicit:
            p.error(f"duplicate entry ({a},{b})", t)
        p.expect_punct("=")
        explicit[(a - 1, b - 1)] = p.expr()
        p.expect_punct(";")
        saw_entry = True
    if not saw_entry:
        p.error("metric needs at least one entry")
    return MetricDefinition(n, explicit, source=source)


# ---------------------------------------------------------------------------
# Differentiation


def wirtinger_derivative(node: Node, kind: str, index: int) -> Node:
    """Exact partial derivative d(node)/d(z_index) or d/d(zb_index).

    kind is "z" or "zb"; index is the 1-based variable index, matching the
    source spelling z1, zb1, ...  z and zb are independent variables.
    """
    if kind not in ("z", "zb"):
        raise DslError(f"derivative kind must be 'z' or 'zb', got {kind!r}")
    k = node.kind
    if k == "const":
        return ZERO
    if k in ("z", "zb"):
        return ONE if (k == kind and node.value == index) else ZERO
    if k in ("add", "sub"):
        da = wirtinger_derivative(node.children[0], kind, index)
        db = wirtinger_derivative(node.children[1], kind, index)
        return add(da, db) if k == "add" else sub(da, db)
    if k == "mul":
        a, b = node.children
        da = wirtinger_derivative(a, kind, index)
        db = wirtinger_derivative(b, kind, index)
        return add(mul(da, b), mul(a, db))
    if k == "div":
        a, b = node.children
        da = wirtinger_derivative(a, kind, index)
        db = wirtinger_derivative(b, kind, index)
        return sub(div(da, b), div(mul(a, db), mul(b, b)))
    if k == "pow":
        a = node.children[0]
        da = wirtinger_derivative(a, kind, index)
        return mul(const(node.value), mul(pow_(a, node.value - 1), da))
    # call
    a = node.children[0]
    da = wirtinger_derivative(a, kind, index)
    if node.value == "exp":
        return mul(node, da)
    if node.value == "log":
        return div(da, a)
    # sqrt
    return div(da, mul(const(2), node))


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(node: Node, point) -> complex:
    """Evaluate an expression at a chart point.

    point may be a ChartPoint or any sequence of complex coordinates;
    z_k evaluates to coords[k-1] and zb_k to its conjugate.  log and sqrt
    use the principal branch.  Division by zero, log/sqrt of 0, and
    non-finite intermediate results raise DslEvalError.
    """
    z = np.atleast_1d(np.asarray(getattr(point, "coords", point), dtype=complex))
    return _eval(node, z)


def _check_finite(v: complex) -> complex:
    if not (cmath.isfinite(v)):
        raise DslEvalError("expression evaluated to a non-finite value")
    return v


def _eval(node: Node, z: np.ndarray) -> complex:
    k = node.kind
    if k == "const":
        return node.value
    if k == "z" or k == "zb":
        idx = node.value - 1
        if idx >= z.size:
            raise DslEvalError(
                f"variable {k}{node.value} needs at least {node.value} coordinates, got {z.size}"
            )
        v = complex(z[idx])
        return v if k == "z" else v.conjugate()
    if k == "add":
        return _check_finite(_eval(node.children[0], z) + _eval(node.children[1], z))
    if k == "sub":
        return _check_finite(_eval(node.children[0], z) - _eval(node.children[1], z))
    if k == "mul":
        return _check_finite(_eval(node.children[0], z) * _eval(node.children[1], z))
    if k == "div":
        num = _eval(node.children[0], z)
        den = _eval(node.children[1], z)
        if den == 0:
            raise DslEvalError("division by zero")
        return _check_finite(num / den)
    if k == "pow":
        base = _eval(node.children[0], z)
        try:
            return _check_finite(base ** node.value)
        except ZeroDivisionError:
            raise DslEvalError("zero raised to a negative power") from None
        except OverflowError:
            raise DslEvalError("overflow in power") from None
    # call
    arg = _eval(node.children[0], z)
    fn = node.value
    if fn in ("log", "sqrt") and arg == 0:
        raise DslEvalError(f"{fn} of 0")
    try:
        return _check_finite(getattr(cmath, fn)(arg))
    except (ValueError, OverflowError) as exc:
        raise DslEvalError(f"{fn} failed: {exc}") from None


# ---------------------------------------------------------------------------
# Unparsing


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 3}
_ATOM = 4


def _prec(node: Node) -> int:
    return _PREC.get(node.kind, _ATOM)


def _fmt_nonneg(v: float) -> str:
    # repr gives the shortest digits that round-trip
    return repr(float(v))


def _fmt_real(v: float) -> str:
    if v >= 0:
        return _fmt_nonneg(v)
    return f"(0 - {_fmt_nonneg(-v)})"


def _fmt_const(c: complex) -> str:
    re, im = c.real, c.imag
    if im == 0:
        return _fmt_real(re)
    if re == 0:
        if im == 1:
            return "i"
        if im > 0:
            return f"{_fmt_nonneg(im)}*i"
        return f"(0 - {_fmt_nonneg(-im) + '*i' if im != -1 else 'i'})"
    op = "+" if im > 0 else "-"
    mag = abs(im)
    part = "i" if mag == 1 else f"{_fmt_nonneg(mag)}*i"
    return f"({_fmt_real(re)} {op} {part})"


def unparse(node: Node) -> str:
    """Render an AST back to grammar-conformant source.

    Reparsing the output yields a structurally identical tree (the parser
    applies the same folding constructors), so unparse/parse is a fixpoint.
    """
    k = node.kind
    if k == "const":
        return _fmt_const(node.value)
    if k == "z":
        return f"z{node.value}"
    if k == "zb":
        return f"zb{node.value}"
    if k == "call":
        return f"{node.value}({unparse(node.children[0])})"
    if k == "pow":
        basestr = unparse(node.children[0])
        if _prec(node.children[0]) < _ATOM:
            basestr = f"({basestr})"
        return f"{basestr}^{node.value}"
    a, b = node.children
    op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
    mine = _PREC[k]
    astr = unparse(a)
    if _prec(a) < mine:
        astr = f"({astr})"
    bstr = unparse(b)
    # The grammar is left-associative, so a right child at equal precedence
    # needs parens even for + and * or the reparse would re-bracket it.
    if _prec(b) <= mine:
        bstr = f"({bstr})"
    return f"{astr} {op} {bstr}"


# ---------------------------------------------------------------------------
# Metric definitions


class MetricDefinition:
    """A Hermitian metric given by expression entries h_{a b-bar}.

    entries is an n x n grid of ASTs; positions never written in the
    source default to the Kronecker delta, and an omitted lower triangle
    mirrors the upper one through the formal conjugate transpose.
    """

    def __init__(self, n: int, explicit: dict, source: str | None = None):
        self.n = int(n)
        self.source = source
        self.explicit = frozenset(explicit)
        grid = []
        for a in range(self.n):
            row = []
            for b in range(self.n):
                if (a, b) in explicit:
                    row.append(explicit[(a, b)])
                elif a > b and (b, a) in explicit:
                    row.append(conjugate_node(explicit[(b, a)]))
                else:
                    row.append(ONE if a == b else ZERO)
            grid.append(tuple(row))
        self.entries = tuple(grid)
        self._deriv_cache: dict = {}
        self._check_formal_hermitian()

    # -- structure ---------------------------------------------------------

    def entry(self, a: int, b: int) -> Node:
        """AST of h_{a b-bar}, 0-based indices."""
        return self.entries[a][b]

    def _check_formal_hermitian(self):
        """Spot-check h_{a b-bar} = conj(h_{b a-bar}) at a few sample points.

        Only pairs where both triangles were written explicitly (and
        explicit diagonal entries) can disagree; synthesized entries are
        Hermitian by construction.
        """
        suspects = []
        for a in range(self.n):
            for b in range(a, self.n):
                if a == b and (a, a) in self.explicit:
                    suspects.append((a, a))
                elif a != b and (a, b) in self.explicit and (b, a) in self.explicit:
                    suspects.append((a, b))
        if not suspects:
            return
        rng = np.random.default_rng(1234591)
        pts = 0.45 + 0.55 * rng.random((4, self.n)) + 1j * (0.3 + 0.5 * rng.random((4, self.n)))
        for a, b in suspects:
            lhs, rhs = self.entries[a][b], conjugate_node(self.entries[b][a])
            for z in pts:
                try:
                    va = _eval(lhs, z)
                    vb = _eval(rhs, z)
                except DslEvalError:
                    continue
                if abs(va - vb) > 1e-9 * max(1.0, abs(va), abs(vb)):
                    raise DslError(
                        f"entries ({a + 1},{b + 1}) and ({b + 1},{a + 1}) are not "
                        "formally Hermitian-conjugate"
                    )

    # -- calculus ----------------------------------------------------------

    def derivative(self, a: int, b: int, ops) -> Node:
        """Derivative of entry (a, b) under a sequence of Wirtinger operators.

        ops is an iterable of ("z", k) / ("zb", k) with 1-based k.  Mixed
        partials commute, so the key is sorted for cache hits; results are
        memoized per entry.
        """
        key = (a, b, tuple(sorted(ops)))
        cached = self._deriv_cache.get(key)
        if cached is not None:
            return cached
        node = self.entries[a][b]
        for kind, k in key[2]:
            node = wirtinger_derivative(node, kind, k)
        return self._deriv_cache.setdefault(key, node)

    def evaluate_matrix(self, point) -> np.ndarray:
        """Evaluate all entries at a point into an n x n complex matrix."""
        z = np.atleast_1d(np.asarray(getattr(point, "coords", point), dtype=complex))
        if z.size != self.n:
            raise DslEvalError(f"point has {z.size} coordinates, metric needs {self.n}")
        out = np.empty((self.n, self.n), dtype=complex)
        for a in range(self.n):
            for b in range(self.n):
                out[a, b] = _eval(self.entries[a][b], z)
        return out
