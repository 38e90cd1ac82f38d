"""Text format for rings, derivations and delta-modules.

::

    # comments run to the end of the line
    ring B = Q[x, y]
    derivation D on B { x -> 0; y -> x }
    module M on D {
        basis e1, e2;
        d e1 -> 0;
        d e2 -> x*e1;
        relations: y*e2, x^2*e1;
    }

Inside braces, statements are separated by ``;`` or newlines. Variables
without a ``->`` line map to 0, and so do basis elements without a ``d``
line. Polynomials use the grammar of :func:`lndlab.ring.parse_poly`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .derivation import Derivation
from .dmodule import DeltaModule, make_module, parse_element
from .errors import LndError, ParseError
from .ring import Ring, parse_poly, split_top_level

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_RING = re.compile(rf"ring\s+({_NAME})\s*=\s*Q\s*\[([^\]]*)\]")
_BLOCK = re.compile(rf"(derivation|module)\s+({_NAME})\s+on\s+({_NAME})\s*\{{")
_IDENT = re.compile(rf"^{_NAME}$")


@dataclass
class Document:
    rings: Dict[str, Ring] = field(default_factory=dict)
    derivations: Dict[str, Derivation] = field(default_factory=dict)
    modules: Dict[str, DeltaModule] = field(default_factory=dict)

    def derivation(self, name: Optional[str] = None) -> Derivation:
        return _pick(self.derivations, name, "derivation")

    def module(self, name: Optional[str] = None) -> DeltaModule:
        return _pick(self.modules, name, "module")


def _pick(table, name, what):
    if name is not None:
        if name not in table:
            raise LndError(f"no {what} named {name!r} in the input")
        return table[name]
    if not table:
        raise LndError(f"the input defines no {what}")
    return list(table.values())[-1]  # most recent definition


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _statements(body: str) -> List[str]:
    out = []
    for chunk in body.replace("\n", ";").split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append(chunk)
    return out


def _parse_ring(names_text: str) -> Ring:
    names = [n.strip() for n in names_text.split(",") if n.strip()]
    for n in names:
        if not _IDENT.match(n):
            raise ParseError(f"bad variable name {n!r}")
    if not names:
        raise ParseError("ring needs at least one variable")
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names in ring")
    return Ring(tuple(names))


def _parse_derivation(body: str, ring: Ring) -> Derivation:
    images = {}
    for st in _statements(body):
        lhs, arrow, rhs = st.partition("->")
        if not arrow:
            raise ParseError(f"expected 'var -> image', got {st!r}")
        var = lhs.strip()
        ring.index(var)  # unknown names raise
        if var in images:
            raise ParseError(f"image of {var} given twice")
        images[var] = parse_poly(rhs, ring)
    return Derivation.from_map(ring, images)


def _parse_module(body: str, base: Derivation) -> DeltaModule:
    ring = base.ring
    basis: List[str] = []
    images: Dict[str, str] = {}
    relations: List[str] = []
    for st in _statements(body):
        if st.startswith("basis"):
            if basis:
                raise ParseError("basis declared twice")
            basis = [b.strip() for b in st[len("basis"):].split(",") if b.strip()]
            for b in basis:
                if not _IDENT.match(b):
                    raise ParseError(f"bad basis name {b!r}")
        elif st.startswith("relations"):
            rest = st[len("relations"):].lstrip()
            if rest.startswith(":"):
                rest = rest[1:]
            relations += [r.strip() for r in split_top_level(rest, ",") if r.strip()]
        elif st.startswith("d "):
            lhs, arrow, rhs = st[2:].partition("->")
            if not arrow:
                raise ParseError(f"expected 'd e -> image', got {st!r}")
            images[lhs.strip()] = rhs.strip()
        else:
            raise ParseError(f"unrecognised module statement {st!r}")
    if not basis:
        raise ParseError("module needs a 'basis' line")
    unknown = set(images) - set(basis)
    if unknown:
        raise ParseError(f"'d' given for unknown basis element(s) {sorted(unknown)}")

    # parse against a free module with zero connection, then build the real one
    free = DeltaModule(base, tuple(basis), tuple(tuple(ring.zero() for _ in basis) for _ in basis))
    p = len(basis)
    conn = [[ring.zero()] * p for _ in range(p)]
    for j, e in enumerate(basis):
        if e in images:
            z = parse_element(images[e], free)
            for i in range(p):
                conn[i][j] = z.coefficients[i]
    rels = [parse_element(r, free) for r in relations]
    return make_module(base, basis, conn, rels)


def parse_document(text: str) -> Document:
    """Parse a whole input file into a :class:`Document`."""
    text = _strip_comments(text)
    doc = Document()
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        line = _line_of(text, pos)
        m = _RING.match(text, pos)
        if m:
            name = m.group(1)
            try:
                doc.rings[name] = _parse_ring(m.group(2))
            except ParseError as exc:
                raise ParseError(f"line {line}: {exc}") from None
            pos = m.end()
            continue
        m = _BLOCK.match(text, pos)
        if not m:
            snippet = text[pos:].split("\n", 1)[0].strip()
            raise ParseError(f"line {line}: cannot parse {snippet!r}")
        kind, name, parent = m.groups()
        close = text.find("}", m.end())
        if close < 0:
            raise ParseError(f"line {line}: missing '}}' for {kind} {name}")
        body = text[m.end():close]
        pos = close + 1
        try:
            if kind == "derivation":
                if parent not in doc.rings:
                    raise ParseError(f"unknown ring {parent!r}")
                doc.derivations[name] = _parse_derivation(body, doc.rings[parent])
            else:
                if parent not in doc.derivations:
                    raise ParseError(f"unknown derivation {parent!r}")
                doc.modules[name] = _parse_module(body, doc.derivations[parent])
        except ParseError as exc:
            raise type(exc)(f"line {line}: {exc}") from None
    return doc
