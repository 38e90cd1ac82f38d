"""Delta-modules over (B, d) presented by a free basis and a connection matrix.

A :class:`DeltaModule` is ``B^p / R`` with ``d_M(e_j) = sum_i C[i][j] e_i``
extended by the mixed Leibniz rule ``d_M(b z) = d(b) z + b d_M(z)``.
Relations ``R`` are optional; elements of a quotient are kept in normal form
with respect to a Groebner basis of ``R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .derivation import DEFAULT_CAP, Derivation, apply
from .errors import ModuleError, ParseError, RingMismatchError, WeightError
from .groebner import GroebnerBasis, buchberger, vec_to_coeffs
from .kernel import (
    DEFAULT_PIECE_LIMIT,
    GradedKernelReport,
    PieceReport,
    WeightSystem,
    check_weights,
    graded_piece,
    infer_weights,
    kernel_generators,
    map_pieces,
    pieces_up_to,
)
from .linalg import EchelonSpan, nullspace_sparse
from .ring import (
    Polynomial,
    Ring,
    format_monomial,
    format_terms,
    grevlex_key,
    parse_poly,
    partial_derivative,
)


@dataclass(frozen=True)
class ModuleElement:
    coefficients: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @classmethod
    def from_coefficients(cls, coeffs) -> "ModuleElement":
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, ring: Ring, rank: int) -> "ModuleElement":
        return cls(tuple(ring.zero() for _ in range(rank)))

    @classmethod
    def unit(cls, ring: Ring, rank: int, j: int, coeff: Optional[Polynomial] = None) -> "ModuleElement":
        c = ring.one() if coeff is None else coeff
        return cls(tuple(c if i == j else ring.zero() for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    @property
    def ring(self) -> Ring:
        return self.coefficients[0].ring

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        if other.rank != self.rank:
            raise ModuleError("rank mismatch")
        return ModuleElement(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def __neg__(self):
        return ModuleElement(tuple(-a for a in self.coefficients))

    def __mul__(self, b) -> "ModuleElement":
        return ModuleElement(tuple(b * a for a in self.coefficients))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.coefficients)

    def terms(self) -> Dict[tuple, Fraction]:
        return {(pos, m): c for pos, p in enumerate(self.coefficients) for m, c in p.terms.items()}

    def format(self, basis: Sequence[str]) -> str:
        items = []
        for pos, p in enumerate(self.coefficients):
            for m, c in p.items():
                mono = format_monomial(m, p.ring.names)
                items.append((f"{mono}*{basis[pos]}" if mono else basis[pos], c))
        return format_terms(items)


def _from_terms(terms: Dict[tuple, Fraction], ring: Ring, rank: int) -> ModuleElement:
    return ModuleElement(vec_to_coeffs(terms, ring, rank))


@dataclass(frozen=True)
class DeltaModule:
    """Validated presentation; build with :func:`make_module`."""

    base: Derivation
    basis: Tuple[str, ...]
    connection: Tuple[Tuple[Polynomial, ...], ...]  # connection[i][j]: coefficient of e_i in d_M(e_j)
    relations: Tuple[ModuleElement, ...] = ()
    basis_weights: Optional[Tuple[Tuple[int, ...], ...]] = None
    differential_of: Optional[Tuple[int, ...]] = None  # basis j is d(x_k), k = differential_of[j]
    triangular_order: Optional[Tuple[str, ...]] = None
    gb: Optional[GroebnerBasis] = field(default=None, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ring(self) -> Ring:
        return self.base.ring

    @property
    def is_free(self) -> bool:
        return not self.relations

    def element(self, coeffs) -> ModuleElement:
        coeffs = [self.ring.const(c) if not isinstance(c, Polynomial) else c for c in coeffs]
        if len(coeffs) != self.rank:
            raise ModuleError(f"element has {len(coeffs)} coefficients; module rank is {self.rank}")
        return ModuleElement(tuple(coeffs))

    def unit(self, j: int) -> ModuleElement:
        return ModuleElement.unit(self.ring, self.rank, j)

    def normal_form(self, z: ModuleElement) -> ModuleElement:
        if self.gb is None or not self.gb.generators:
            return z
        return _from_terms(self.gb.reduce(z.terms()), self.ring, self.rank)

    def apply(self, z: ModuleElement) -> ModuleElement:
        return apply_module(self, z)

    def format(self, z: ModuleElement) -> str:
        return z.format(self.basis)

    def image(self, j: int) -> ModuleElement:
        return ModuleElement(tuple(self.connection[i][j] for i in range(self.rank)))

    def __str__(self):
        lines = [f"d {e} -> {self.format(self.image(j))}" for j, e in enumerate(self.basis)]
        if self.relations:
            lines.append("relations: " + ", ".join(self.format(r) for r in self.relations))
        return "\n".join(lines)


def _apply_raw(base: Derivation, connection, z: ModuleElement) -> ModuleElement:
    p = len(connection)
    out = []
    for i in range(p):
        acc = apply(base, z.coefficients[i])
        for j in range(p):
            c = connection[i][j]
            if c and z.coefficients[j]:
                acc = acc + c * z.coefficients[j]
        out.append(acc)
    return ModuleElement(tuple(out))


def apply_module(m: DeltaModule, z: ModuleElement) -> ModuleElement:
    if z.rank != m.rank:
        raise ModuleError(f"element rank {z.rank} != module rank {m.rank}")
    if z.ring != m.ring:
        raise RingMismatchError("element and module live over different rings")
    return m.normal_form(_apply_raw(m.base, m.connection, z))


def _triangular_order(basis: Sequence[str], connection) -> Optional[Tuple[str, ...]]:
    """Order with d_M(e) involving only strictly earlier basis elements."""
    p = len(basis)
    remaining = list(range(p))
    placed: set = set()
    order = []
    while remaining:
        for j in remaining:
            if all(not connection[i][j] or i in placed for i in range(p)):
                break
        else:
            return None
        remaining.remove(j)
        placed.add(j)
        order.append(basis[j])
    return tuple(order)


def make_module(base: Derivation, basis: Sequence[str], connection, relations: Sequence = (),
                basis_weights=None, differential_of=None, cap: int = DEFAULT_CAP) -> DeltaModule:
    """Validate and build a delta-module.

    ``connection`` is a p x p matrix with ``connection[i][j]`` the
    coefficient of ``e_i`` in ``d_M(e_j)``; entries may be polynomials,
    numbers or strings. ``relations`` are module elements or coefficient
    sequences. Raises :class:`ModuleError` when ``d_M`` does not preserve
    the relation submodule or is not locally nilpotent on the basis.
    """
    ring = base.ring
    basis = tuple(basis)
    p = len(basis)
    if len(set(basis)) != p:
        raise ModuleError("duplicate basis names")
    if len(connection) != p or any(len(row) != p for row in connection):
        raise ModuleError(f"connection must be {p}x{p}")

    def coerce(c):
        if isinstance(c, Polynomial):
            if c.ring != ring:
                raise RingMismatchError("connection entry from a different ring")
            return c
        if isinstance(c, str):
            return parse_poly(c, ring)
        return ring.const(c)

    conn = tuple(tuple(coerce(c) for c in row) for row in connection)
    rels = []
    for r in relations:
        coeffs = getattr(r, "coefficients", r)
        if len(coeffs) != p:
            raise ModuleError(f"relation has {len(coeffs)} entries; rank is {p}")
        rels.append(ModuleElement(tuple(coerce(c) for c in coeffs)))
    rels = tuple(r for r in rels if r)
    gb = buchberger(rels) if rels else None

    m = DeltaModule(base, basis, conn, rels,
                    tuple(tuple(w) for w in basis_weights) if basis_weights is not None else None,
                    tuple(differential_of) if differential_of is not None else None,
                    _triangular_order(basis, conn), gb)

    for r in rels:
        img = apply_module(m, r)
        if img:
            raise ModuleError(
                f"module derivation not well defined on the quotient: d_M({m.format(r)}) = "
                f"{m.format(img)} is not in the relation submodule"
            )
    if m.triangular_order is None:
        for j, e in enumerate(basis):
            z = m.normal_form(m.unit(j))
            n = 0
            while z:
                n += 1
                if n > cap:
                    raise ModuleError(
                        f"module derivation is not locally nilpotent: {e} survives {cap} iterations"
                    )
                z = apply_module(m, z)
    return m


# -- constructions ----------------------------------------------------------------


def omega(d: Derivation) -> DeltaModule:
    """Kaehler differentials: free on dx_i with ``d_M(db) = d(d(b))``."""
    names = d.ring.names
    basis = tuple("d" + n for n in names)
    if set(basis) & set(names):
        raise ModuleError("differential names collide with ring variables")
    conn = [[partial_derivative(d.images[j], names[i]) for j in range(len(names))] for i in range(len(names))]
    return make_module(d, basis, conn, differential_of=range(len(names)))


def differential(f: Polynomial, ring: Optional[Ring] = None) -> ModuleElement:
    """``df = sum_i (df/dx_i) dx_i`` as an element of the differential module."""
    ring = ring or f.ring
    if f.ring != ring:
        raise RingMismatchError("polynomial not in the given ring")
    return ModuleElement(tuple(partial_derivative(f, n) for n in ring.names))


def _require_free_pair(m: DeltaModule, n: DeltaModule):
    if not (m.is_free and n.is_free):
        raise ModuleError("tensor/hom need free modules")
    if m.base != n.base:
        raise ModuleError("modules over different base derivations")


def tensor(m: DeltaModule, n: DeltaModule) -> DeltaModule:
    """``d(e_j (x) f_l) = d_M(e_j) (x) f_l + e_j (x) d_N(f_l)``; basis index ``j*q + l``."""
    _require_free_pair(m, n)
    p, q = m.rank, n.rank
    ring = m.ring
    basis = [f"{a}_{b}" for a in m.basis for b in n.basis]
    conn = [[ring.zero() for _ in range(p * q)] for _ in range(p * q)]
    for j in range(p):
        for l in range(q):
            col = j * q + l
            for i in range(p):
                if m.connection[i][j]:
                    conn[i * q + l][col] = conn[i * q + l][col] + m.connection[i][j]
            for k in range(q):
                if n.connection[k][l]:
                    conn[j * q + k][col] = conn[j * q + k][col] + n.connection[k][l]
    return make_module(m.base, basis, conn)


def hom(m: DeltaModule, n: DeltaModule) -> DeltaModule:
    """``Hom(M, N)`` on matrix units ``E_kj: e_j -> f_k`` (index ``k*p + j``).

    On a matrix ``F`` the derivation is ``d(F) + D F - F C``.
    """
    _require_free_pair(m, n)
    p, q = m.rank, n.rank
    ring = m.ring
    C, D = m.connection, n.connection
    basis = [f"{fk}_{ej}" for fk in n.basis for ej in m.basis]
    conn = [[ring.zero() for _ in range(p * q)] for _ in range(p * q)]
    for k in range(q):
        for j in range(p):
            col = k * p + j
            for l in range(q):
                if D[l][k]:
                    conn[l * p + j][col] = conn[l * p + j][col] + D[l][k]
            for mm in range(p):
                if C[j][mm]:
                    conn[k * p + mm][col] = conn[k * p + mm][col] - C[j][mm]
    return make_module(m.base, basis, conn)


def hom_element(m: DeltaModule, n: DeltaModule, F) -> ModuleElement:
    """The element of ``hom(m, n)`` with matrix ``F`` (``F[k][j]``: f_k-coefficient of F(e_j))."""
    ring = m.ring
    out = []
    for k in range(n.rank):
        for j in range(m.rank):
            c = F[k][j]
            if isinstance(c, str):
                c = parse_poly(c, ring)
            out.append(c if isinstance(c, Polynomial) else ring.const(c))
    return ModuleElement(tuple(out))


def hom_matrix(m: DeltaModule, n: DeltaModule, z: ModuleElement):
    p = m.rank
    return [[z.coefficients[k * p + j] for j in range(p)] for k in range(n.rank)]


def sym_extend(m: DeltaModule) -> Derivation:
    """The derivation of ``S(M) = B[e_1..e_p]`` restricting to ``d`` and ``d_M``."""
    if not m.is_free:
        raise ModuleError("symmetric-algebra extension needs a free module")
    try:
        ext = m.ring.extend(*m.basis)
    except ValueError as exc:
        raise ModuleError(str(exc)) from None
    images = [img.embed(ext) for img in m.base.images]
    evars = [ext.var(e) for e in m.basis]
    for j in range(m.rank):
        acc = ext.zero()
        for i in range(m.rank):
            c = m.connection[i][j]
            if c:
                acc = acc + c.embed(ext) * evars[i]
        images.append(acc)
    return Derivation(ext, tuple(images))


# -- weights -------------------------------------------------------------------------


def module_weights(m: DeltaModule, ws: WeightSystem) -> Tuple[Tuple[int, ...], ...]:
    """Weights of the basis elements making ``d_M`` and the relations homogeneous.

    Differential modules use ``wt(dx_i) = wt(x_i)``. Otherwise differences
    are propagated along the connection and the relations, and each
    connected group is translated so every grading row has minimum 0.
    """
    check_weights(m.base, ws)
    if m.basis_weights is not None:
        bw = tuple(tuple(w) for w in m.basis_weights)
    elif m.differential_of is not None:
        vw = ws.variable_weights()
        bw = tuple(vw[k] for k in m.differential_of)
    else:
        bw = _infer_module_weights(m, ws)
    _check_module_weights(m, ws, bw)
    return bw


def _infer_module_weights(m: DeltaModule, ws: WeightSystem):
    g = ws.ngrades
    edges: Dict[int, List[Tuple[int, Tuple[int, ...]]]] = {j: [] for j in range(m.rank)}

    def link(a, b, off):  # wt(e_b) = wt(e_a) + off
        edges[a].append((b, off))
        edges[b].append((a, tuple(-x for x in off)))

    for i in range(m.rank):
        for j in range(m.rank):
            c = m.connection[i][j]
            for w in ws.poly_weights(c):
                # wt(c) + wt(e_i) = wt(e_j) + shift
                link(i, j, tuple(a - s for a, s in zip(w, ws.shift)))
    for r in m.relations:
        terms = [(pos, ws.weight(mono)) for pos, p in enumerate(r.coefficients) for mono in p.terms]
        (p0, w0) = terms[0]
        for pos, w in terms[1:]:
            link(p0, pos, tuple(a - b for a, b in zip(w0, w)))

    weights: List[Optional[Tuple[int, ...]]] = [None] * m.rank
    for root in range(m.rank):
        if weights[root] is not None:
            continue
        weights[root] = (0,) * g
        comp = [root]
        stack = [root]
        while stack:
            a = stack.pop()
            for b, off in edges[a]:
                want = tuple(x + y for x, y in zip(weights[a], off))
                if weights[b] is None:
                    weights[b] = want
                    comp.append(b)
                    stack.append(b)
                elif weights[b] != want:
                    raise WeightError(
                        f"no consistent weight for {m.basis[b]}: {weights[b]} vs {want}"
                    )
        lows = [min(weights[j][r] for j in comp) for r in range(g)]
        for j in comp:
            weights[j] = tuple(x - lo for x, lo in zip(weights[j], lows))
    return tuple(weights)


def _check_module_weights(m: DeltaModule, ws: WeightSystem, bw) -> None:
    if len(bw) != m.rank or any(len(w) != ws.ngrades for w in bw):
        raise WeightError("basis weights have the wrong shape")
    for i in range(m.rank):
        for j in range(m.rank):
            want = tuple(a + s - b for a, s, b in zip(bw[j], ws.shift, bw[i]))
            for w in ws.poly_weights(m.connection[i][j]):
                if w != want:
                    raise WeightError(f"connection entry ({m.basis[i]}, {m.basis[j]}) is not homogeneous")
    for r in m.relations:
        ws_r = {tuple(a + b for a, b in zip(ws.weight(mono), bw[pos]))
                for pos, p in enumerate(r.coefficients) for mono in p.terms}
        if len(ws_r) > 1:
            raise WeightError(f"relation {m.format(r)} is not homogeneous")


def sym_weights(m: DeltaModule, ws: WeightSystem) -> WeightSystem:
    """Grading of ``sym_extend(m)``: base rows extended by basis weights, plus e-degree."""
    bw = module_weights(m, ws)
    rows = [tuple(r) + tuple(w[k] for w in bw) for k, r in enumerate(ws.rows)]
    rows.append((0,) * ws.nvars + (1,) * m.rank)
    low = min((ws.degree(w) for w in bw), default=0)
    k = max(1, 1 - low)
    return WeightSystem(tuple(rows), ws.shift + (0,), ws.positive + (k,))


# -- graded module kernels -------------------------------------------------------------


def module_piece(m: DeltaModule, ws: WeightSystem, target, bw=None) -> List[Tuple[int, tuple]]:
    """Standard terms ``x^a e_j`` of weight ``target`` (position-major)."""
    bw = bw if bw is not None else module_weights(m, ws)
    target = tuple(target)
    out = []
    for j, w in enumerate(bw):
        rest = tuple(a - b for a, b in zip(target, w))
        for mono in graded_piece(m.ring, ws, rest):
            t = (j, mono)
            if m.gb is None or m.gb.is_standard(t):
                out.append(t)
    return out


def module_kernel_of_piece(m: DeltaModule, piece: Sequence[Tuple[int, tuple]]) -> List[ModuleElement]:
    ring, p = m.ring, m.rank
    row_index: Dict[tuple, int] = {}
    rows: List[Dict[int, Fraction]] = []
    for col, (j, mono) in enumerate(piece):
        z = ModuleElement.unit(ring, p, j, Polynomial(ring, {mono: Fraction(1)}))
        for t, c in apply_module(m, z).terms().items():
            i = row_index.get(t)
            if i is None:
                i = row_index[t] = len(rows)
                rows.append({})
            rows[i][col] = c
    out = []
    for v in nullspace_sparse(rows, len(piece)):
        out.append(_from_terms({piece[col]: c for col, c in v.items()}, ring, p))
    return out


def module_kernel_basis(m: DeltaModule, target, ws: Optional[WeightSystem] = None) -> List[ModuleElement]:
    ws = ws or infer_weights(m.base)
    return module_kernel_of_piece(m, module_piece(m, ws, target))


@dataclass
class ModuleKernelReport(GradedKernelReport):
    basis_weights: Tuple[Tuple[int, ...], ...] = ()
    ring_report: Optional[GradedKernelReport] = None


def _module_job(args):
    m, piece = args
    return module_kernel_of_piece(m, piece)


def module_kernel_generators(m: DeltaModule, bound: int, ws: Optional[WeightSystem] = None,
                             jobs: int = 1, piece_limit: int = DEFAULT_PIECE_LIMIT) -> ModuleKernelReport:
    """Truncated ``M_0`` with A-module generator detection.

    An element is new when it lies outside the span of ``a*g`` for earlier
    generators ``g`` and ring-kernel elements ``a`` of the complementary
    weight. Ring-kernel pieces come from the same bound, so coefficients of
    higher degree are never seen.
    """
    ws = ws or infer_weights(m.base)
    bw = module_weights(m, ws)
    ring_rep = kernel_generators(m.base, ws, bound, jobs=jobs, piece_limit=piece_limit)
    A = {p.weight: p.basis for p in ring_rep.pieces if not p.skipped}
    ring_skipped = {p.weight for p in ring_rep.pieces if p.skipped}

    low = min(ws.degree(w) for w in bw)
    ring_pieces = pieces_up_to(m.ring, ws, bound - low)
    pieces: Dict[tuple, List[Tuple[int, tuple]]] = {}
    for j, w in enumerate(bw):
        for rw, monos in ring_pieces.items():
            target = tuple(a + b for a, b in zip(rw, w))
            if ws.degree(target) > bound:
                continue
            bucket = pieces.setdefault(target, [])
            for mono in monos:
                if m.gb is None or m.gb.is_standard((j, mono)):
                    bucket.append((j, mono))
    for bucket in pieces.values():
        # same order as module_piece: position-major, grevlex-descending within
        bucket.sort(key=lambda jm: grevlex_key(jm[1]), reverse=True)
        bucket.sort(key=lambda jm: jm[0])

    order = sorted(pieces, key=lambda w: (ws.degree(w), w))
    by_degree: Dict[int, List[tuple]] = {}
    for w in order:
        by_degree.setdefault(ws.degree(w), []).append(w)

    kernels: Dict[tuple, List[ModuleElement]] = {}
    reports: List[PieceReport] = []
    generators: List[Tuple[tuple, ModuleElement]] = []
    for deg in sorted(by_degree):
        level = by_degree[deg]
        todo = [w for w in level if len(pieces[w]) <= piece_limit]
        results = map_pieces(_module_job, [(m, pieces[w]) for w in todo], jobs)
        kernels.update(zip(todo, results))
        for w in level:
            rep = PieceReport(weight=w, degree=deg, size=len(pieces[w]))
            reports.append(rep)
            if w not in kernels:
                rep.skipped = True
                continue
            basis = kernels[w]
            rep.kernel_dim = len(basis)
            rep.basis = basis
            span = EchelonSpan()
            for gw, g in generators:
                rest = tuple(a - b for a, b in zip(w, gw))
                if rest in ring_skipped:
                    rep.incomplete = True
                    continue
                for a in A.get(rest, ()):
                    span.add(m.normal_form(a * g).terms())
            rep.span_dim = len(span)
            for z in basis:
                if span.add(z.terms()):
                    rep.new_generators.append(z)
                    generators.append((w, z))
    return ModuleKernelReport(bound, ws, reports, generators, piece_limit,
                              basis_weights=bw, ring_report=ring_rep)


# -- parsing -------------------------------------------------------------------------


def parse_element(text: str, m: DeltaModule) -> ModuleElement:
    """Parse ``"x*e1 + y^2*e2"``: must be linear in the basis names."""
    try:
        ext = m.ring.extend(*m.basis)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    f = parse_poly(text, ext)
    n = m.ring.nvars
    parts: List[Dict] = [{} for _ in range(m.rank)]
    for mono, c in f.terms.items():
        tail = mono[n:]
        if sum(tail) != 1:
            raise ParseError(f"{text!r} is not linear in the basis {list(m.basis)}")
        parts[tail.index(1)][mono[:n]] = c
    return ModuleElement(tuple(Polynomial(m.ring, p) for p in parts))
