"""Sparse multivariate polynomials over Q.

A :class:`Polynomial` is a map from exponent tuples to nonzero
:class:`~fractions.Fraction` coefficients, tied to a :class:`Ring` that fixes
the variable names and their order. Polynomials are treated as immutable;
every operation returns a new object.

Storage and printing use graded reverse lexicographic order, so ``str`` is
canonical and ``parse_poly(str(f), f.ring) == f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .errors import ParseError, RingMismatchError, UnknownVariableError

Monomial = Tuple[int, ...]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def grevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def lex_key(m: Monomial):
    return m


MONOMIAL_ORDERS = {"grevlex": grevlex_key, "lex": lex_key}


def order_key(order: str):
    try:
        return MONOMIAL_ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


@dataclass(frozen=True)
class Ring:
    """Polynomial ring Q[names]; the order of ``names`` is the variable order."""

    names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not _IDENT.match(n):
                raise ValueError(f"invalid variable name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self):
        return tuple(self.var(n) for n in self.names)

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {self.one_monomial(): c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps} for ring {self}")
        return Polynomial(self, {exps: Fraction(coeff)})

    def extend(self, *names: str) -> "Ring":
        clash = set(names) & set(self.names)
        if clash:
            raise ValueError(f"variable name collision: {sorted(clash)}")
        return Ring(self.names + tuple(names))

    def __str__(self):
        return "Q[" + ", ".join(self.names) + "]"


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, Fraction] = ()):
        self.ring = ring
        clean: Dict[Monomial, Fraction] = {}
        for m, c in dict(terms).items():
            if c:
                clean[m] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    # -- construction helpers -------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return Polynomial(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Polynomial) and other.is_constant() and other:
            return self * (1 / other.constant_value())
        raise ParseError("division by a non-constant")

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {self.ring.one_monomial(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(self.ring.one_monomial(), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def support(self) -> set:
        """Names of variables that occur."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return {self.ring.names[i] for i in used}

    def items(self, order: str = "grevlex") -> Iterator[Tuple[Monomial, Fraction]]:
        key = order_key(order)
        for m in sorted(self.terms, key=key, reverse=True):
            yield m, self.terms[m]

    def leading(self, order: str = "grevlex") -> Tuple[Monomial, Fraction]:
        m = max(self.terms, key=order_key(order))
        return m, self.terms[m]

    def coefficient_in(self, var: str, k: int) -> "Polynomial":
        """Coefficient of ``var**k`` when viewed as a polynomial in ``var``."""
        i = self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1:]] = c
        return Polynomial(self.ring, out)

    def diff(self, var: str) -> "Polynomial":
        return partial_derivative(self, var)

    def embed(self, target: Ring, rename: Mapping[str, str] | None = None) -> "Polynomial":
        """Map into ``target`` by variable name (optionally renamed)."""
        rename = rename or {}
        idx = [target.index(rename.get(n, n)) for n in self.ring.names]
        out = {}
        for m, c in self.terms.items():
            e = [0] * target.nvars
            for j, a in zip(idx, m):
                e[j] += a
            out[tuple(e)] = c
        return Polynomial(target, out)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, ring={list(self.ring.names)})"


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    i = f.ring.index(var)
    out = {}
    for m, c in f.terms.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return Polynomial(f.ring, out)


def poly_arith(op: str, f: Polynomial, g) -> Polynomial:
    """``add``, ``sub``, ``mul`` of two polynomials or ``pow`` by an integer."""
    if op == "pow":
        return f ** g
    if not isinstance(g, Polynomial) or g.ring != f.ring:
        raise RingMismatchError("operands must share one ring")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def poly_divmod(f: Polynomial, g: Polynomial, order: str = "grevlex"):
    """Division of ``f`` by the single polynomial ``g``.

    Returns ``(q, r)`` with ``f = q*g + r`` and no term of ``r`` divisible by
    the leading monomial of ``g``. For one divisor ``r == 0`` exactly when
    ``g`` divides ``f``.
    """
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    key = order_key(order)
    lm, lc = g.leading(order)
    rest = dict(f.terms)
    q: Dict[Monomial, Fraction] = {}
    r: Dict[Monomial, Fraction] = {}
    while rest:
        m = max(rest, key=key)
        c = rest.pop(m)
        if all(a >= b for a, b in zip(m, lm)):
            qm = tuple(a - b for a, b in zip(m, lm))
            qc = c / lc
            q[qm] = q.get(qm, 0) + qc
            for gm, gc in g.terms.items():
                if gm == lm:
                    continue
                t = tuple(a + b for a, b in zip(qm, gm))
                s = rest.get(t, 0) - qc * gc
                if s:
                    rest[t] = s
                else:
                    rest.pop(t, None)
        else:
            r[m] = c
    return Polynomial(f.ring, q), Polynomial(f.ring, r)


def divide_exact(f: Polynomial, g: Polynomial):
    """``f / g`` if ``g`` divides ``f``, else ``None``."""
    q, r = poly_divmod(f, g)
    return None if r else q


# -- printing -------------------------------------------------------------------


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def format_terms(terms: Iterable[Tuple[str, Fraction]]) -> str:
    """Join ``(monomial_text, coeff)`` pairs; empty monomial text means 1."""
    out = []
    for mono, c in terms:
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_coeff(a)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


def format_poly(f: Polynomial) -> str:
    return format_terms((format_monomial(m, f.ring.names), c) for m, c in f.items())


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str):
    """Yield ``(kind, value, pos)`` with kind in {'int', 'name', 'op'}."""
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - regex matches any non-space
            raise ParseError(f"unexpected input at {pos}")
        if m.group(1) is not None:
            yield "int", int(m.group(1)), m.start(1)
        elif m.group(2) is not None:
            yield "name", m.group(2), m.start(2)
        else:
            yield "op", m.group(3), m.start(3)
        pos = m.end()


class PolyParser:
    """Recursive-descent parser for the polynomial grammar.

    ::

        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := atom ('^' uint)?
        atom   := int | ident | '(' expr ')'

    ``a/b`` is allowed only when ``b`` is a nonzero constant, which covers
    rational literals such as ``1/2*x``.
    """

    def __init__(self, tokens, ring: Ring):
        self.toks = list(tokens)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None, -1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} at position {pos}, got {val!r}")

    def at_op(self, *ops) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ParseError("empty expression")
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r} at position {pos}")
        return f

    def expr(self) -> Polynomial:
        sign = 1
        if self.at_op("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term() * sign
        while self.at_op("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> Polynomial:
        f = self.factor()
        while self.at_op("*", "/"):
            op = self.take()[1]
            g = self.factor()
            if op == "*":
                f = f * g
            else:
                if not g.is_constant():
                    raise ParseError("division by a non-constant")
                if not g:
                    raise ParseError("division by zero")
                f = f / g
        return f

    def factor(self) -> Polynomial:
        f = self.atom()
        if self.at_op("^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError(f"non-integer exponent at position {pos}: {val!r}")
            if self.at_op("/", "."):
                raise ParseError(f"non-integer exponent at position {pos}")
            f = f ** val
        return f

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            return self.ring.const(val)
        if kind == "name":
            return self.ring.var(val)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect(")")
            return f
        if kind == "op" and val == "-":
            # unary minus inside a term, e.g. x*-y
            return -self.factor()
        if kind == "eof":
            raise ParseError("unexpected end of expression")
        raise ParseError(f"unexpected {val!r} at position {pos}")


def parse_poly(text: str, ring: Ring) -> Polynomial:
    return PolyParser(tokenize(text), ring).parse()


def parse_poly_list(text: str, ring: Ring):
    """Comma-separated polynomials, e.g. ``"x^2, x*y"``."""
    parts = [p for p in split_top_level(text, ",")]
    if any(not p.strip() for p in parts):
        raise ParseError(f"empty entry in list {text!r}")
    return [parse_poly(p, ring) for p in parts]


def split_top_level(text: str, sep: str):
    depth = 0
    start = 0
    out = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return out
