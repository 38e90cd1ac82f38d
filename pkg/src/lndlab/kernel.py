"""Graded, degree-truncated computation of the kernel of a derivation.

When every image ``d(x_i)`` is homogeneous for an integer multigrading, ``d``
maps each graded piece into a single piece, so the kernel is computed piece
by piece as a nullspace. A positive combination of the grading rows bounds
each piece and fixes the iteration order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .derivation import Derivation, apply
from .errors import WeightError
from .linalg import EchelonSpan, RationalMatrix, nullspace, nullspace_sparse
from .lp import LinearSystem, feasible
from .ring import Monomial, Polynomial, Ring, grevlex_key

DEFAULT_PIECE_LIMIT = 20000
MAX_POSITIVE_ENTRY = 10 ** 6

Weight = Tuple[int, ...]


@dataclass(frozen=True)
class WeightSystem:
    """Integer multigrading under which a derivation is homogeneous.

    ``rows`` is a g x n matrix (one row per Z-factor), ``shift`` the degree
    of the derivation in each row, and ``positive`` the coefficients of a
    combination of rows giving every variable weight >= 1.
    """

    rows: Tuple[Tuple[int, ...], ...]
    shift: Tuple[int, ...]
    positive: Tuple[int, ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "shift", tuple(int(x) for x in self.shift))
        object.__setattr__(self, "positive", tuple(int(x) for x in self.positive))
        if len(self.shift) != len(rows) or len(self.positive) != len(rows):
            raise WeightError("shift/positive length must match the number of rows")
        if len({len(r) for r in rows}) > 1:
            raise WeightError("ragged weight rows")
        if rows and min(self.positive_weights) < 1:
            raise WeightError(f"positive combination gives weights {self.positive_weights}")

    @property
    def ngrades(self) -> int:
        return len(self.rows)

    @property
    def nvars(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def positive_weights(self) -> Tuple[int, ...]:
        return tuple(sum(c * r[i] for c, r in zip(self.positive, self.rows)) for i in range(self.nvars))

    @property
    def positive_row(self) -> Optional[int]:
        """Index of the row used as positive grading, if a single row suffices."""
        nz = [j for j, c in enumerate(self.positive) if c]
        if len(nz) == 1 and self.positive[nz[0]] == 1:
            return nz[0]
        return None

    def weight(self, m: Monomial) -> Weight:
        return tuple(sum(a * b for a, b in zip(r, m)) for r in self.rows)

    def degree(self, w: Sequence[int]) -> int:
        return sum(c * x for c, x in zip(self.positive, w))

    def poly_weights(self, f: Polynomial) -> set:
        return {self.weight(m) for m in f.terms}

    def variable_weights(self) -> List[Weight]:
        return [tuple(r[i] for r in self.rows) for i in range(self.nvars)]


def check_weights(d: Derivation, ws: WeightSystem) -> None:
    if ws.nvars != d.ring.nvars:
        raise WeightError(f"weight system has {ws.nvars} columns, ring has {d.ring.nvars} variables")
    vw = ws.variable_weights()
    for name, img, w in zip(d.ring.names, d.images, vw):
        target = tuple(a + s for a, s in zip(w, ws.shift))
        for got in ws.poly_weights(img):
            if got != target:
                raise WeightError(f"d({name}) is not homogeneous of weight {target}: has {got}")


# -- weight inference -------------------------------------------------------------


def _primitive_int(v: Sequence[Fraction]) -> Tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _weight_equations(d: Derivation, with_shift: bool) -> List[List[Fraction]]:
    n = d.ring.nvars
    eqs = []
    for i, img in enumerate(d.images):
        for m in img.terms:
            row = [Fraction(a) for a in m]
            row[i] -= 1
            if with_shift:
                row.append(Fraction(-1))
            eqs.append(row)
    return eqs


def _lattice_rows(eqs: List[List[Fraction]], nunk: int) -> List[Tuple[int, ...]]:
    """Integer basis of the solution space, preferring early unknowns as free.

    Columns are reversed before elimination so pivots fall on late unknowns;
    each basis vector then has a 1 on an early unknown, e.g. ``deg x_i = e_i``.
    """
    if not eqs:
        return [tuple(int(i == j) for j in range(nunk)) for i in range(nunk)]
    rev = RationalMatrix.from_rows([list(reversed(r)) for r in eqs], nunk)
    basis = [tuple(reversed(v)) for v in nullspace(rev)]
    basis.sort(key=lambda v: next(i for i, x in enumerate(v) if x))
    return [_primitive_int(v) for v in basis]


def _find_positive(rows: List[Tuple[int, ...]], nvars: int, search_norm: int = 8) -> Optional[Tuple[int, ...]]:
    g = len(rows)
    if g == 0:
        return None

    def ok(c):
        return all(sum(cj * r[i] for cj, r in zip(c, rows)) >= 1 for i in range(nvars))

    if g <= 6:
        for norm in range(1, search_norm + 1):
            cands = [c for c in _compositions(norm, g)]
            cands.sort(key=lambda c: (sum(x < 0 for x in c), tuple(-x for x in c)))
            for c in cands:
                if ok(c):
                    return c
    # fall back to an exact LP: find c with sum_j c_j rows[j][i] >= 1
    system = LinearSystem(g, [], [([r[i] for r in rows], -1) for i in range(nvars)])
    res = feasible(system)
    if not res.feasible:
        return None
    den = 1
    for x in res.witness:
        den = den * x.denominator // gcd(den, x.denominator)
    c = tuple(int(x * den) for x in res.witness)
    return c if ok(c) else None


def _compositions(norm: int, g: int):
    """Integer vectors of length g with L1 norm exactly ``norm``."""
    for parts in itertools.product(range(-norm, norm + 1), repeat=g):
        if sum(abs(x) for x in parts) == norm:
            yield parts


def infer_weights(d: Derivation) -> WeightSystem:
    """Multigrading making ``d`` homogeneous, with a positive combination.

    Degree-zero gradings (shift 0) are tried first; only if none of them
    admits a positive combination is the shift allowed to vary.
    """
    n = d.ring.nvars
    for with_shift in (False, True):
        eqs = _weight_equations(d, with_shift)
        rows = _lattice_rows(eqs, n + with_shift)
        if with_shift:
            shifts = [r[n] for r in rows]
            rows = [r[:n] for r in rows]
        else:
            shifts = [0] * len(rows)
        if not rows:
            continue
        c = _find_positive(rows, n)
        if c is None:
            continue
        ws = WeightSystem(tuple(rows), tuple(shifts), c)
        if max(ws.positive_weights) > MAX_POSITIVE_ENTRY:
            continue
        check_weights(d, ws)
        return ws
    raise WeightError("no multigrading with a positive combination makes the derivation homogeneous")


# -- graded pieces ------------------------------------------------------------------


def _monomials_of_degree(pw: Sequence[int], deg: int):
    n = len(pw)
    out = []
    exps = [0] * n

    def rec(i, rem):
        if i == n - 1:
            if rem % pw[i] == 0:
                exps[i] = rem // pw[i]
                out.append(tuple(exps))
            return
        for e in range(rem // pw[i] + 1):
            exps[i] = e
            rec(i + 1, rem - e * pw[i])
        exps[i] = 0

    if deg < 0 or n == 0:
        return [()] if (n == 0 and deg == 0) else []
    rec(0, deg)
    return out


def graded_piece(ring: Ring, ws: WeightSystem, target: Sequence[int]) -> List[Monomial]:
    """Monomials of weight ``target``, largest first in grevlex."""
    target = tuple(target)
    if len(target) != ws.ngrades:
        raise WeightError(f"target {target} has wrong length; grading has {ws.ngrades} rows")
    deg = ws.degree(target)
    cands = _monomials_of_degree(ws.positive_weights, deg)
    piece = [m for m in cands if ws.weight(m) == target]
    piece.sort(key=grevlex_key, reverse=True)
    return piece


def pieces_up_to(ring: Ring, ws: WeightSystem, bound: int) -> Dict[Weight, List[Monomial]]:
    """All monomials of positive degree <= ``bound``, grouped by weight."""
    pieces: Dict[Weight, List[Monomial]] = {}
    for deg in range(bound + 1):
        for m in _monomials_of_degree(ws.positive_weights, deg):
            pieces.setdefault(ws.weight(m), []).append(m)
    for ms in pieces.values():
        ms.sort(key=grevlex_key, reverse=True)
    return pieces


def weight_order(ws: WeightSystem):
    return lambda w: (ws.degree(w), tuple(w))


def kernel_of_piece(d: Derivation, piece: Sequence[Monomial]) -> List[Polynomial]:
    """Canonical nullspace basis of ``d`` restricted to the span of ``piece``."""
    ring = d.ring
    row_index: Dict[Monomial, int] = {}
    rows: List[Dict[int, Fraction]] = []
    for j, m in enumerate(piece):
        img = apply(d, Polynomial(ring, {m: Fraction(1)}))
        for t, c in img.terms.items():
            i = row_index.get(t)
            if i is None:
                i = row_index[t] = len(rows)
                rows.append({})
            rows[i][j] = c
    return [Polynomial(ring, {piece[j]: c for j, c in v.items()}) for v in nullspace_sparse(rows, len(piece))]


def kernel_basis(d: Derivation, ws: WeightSystem, target: Sequence[int]) -> List[Polynomial]:
    return kernel_of_piece(d, graded_piece(d.ring, ws, target))


# -- generator tracking --------------------------------------------------------------


@dataclass
class PieceReport:
    weight: Weight
    degree: int
    size: int
    kernel_dim: Optional[int] = None
    basis: List = field(default_factory=list)
    span_dim: Optional[int] = None
    new_generators: List = field(default_factory=list)
    skipped: bool = False
    incomplete: bool = False  # a lower piece it depends on was skipped


@dataclass
class GradedKernelReport:
    bound: int
    weights: WeightSystem
    pieces: List[PieceReport]
    generators: List[Tuple[Weight, object]]
    piece_limit: int = DEFAULT_PIECE_LIMIT

    def piece(self, weight: Sequence[int]) -> PieceReport:
        w = tuple(weight)
        for p in self.pieces:
            if p.weight == w:
                return p
        raise KeyError(w)

    def generator_weights(self) -> List[Weight]:
        seen = []
        for w, _ in self.generators:
            if w not in seen:
                seen.append(w)
        return seen


def _kernel_job(args):
    d, piece = args
    return kernel_of_piece(d, piece)


def map_pieces(fn, jobs_args, jobs: int = 1):
    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, jobs_args))
    return [fn(a) for a in jobs_args]


def kernel_generators(d: Derivation, ws: WeightSystem, bound: int, jobs: int = 1,
                      piece_limit: int = DEFAULT_PIECE_LIMIT) -> GradedKernelReport:
    """Truncated kernel with generator detection.

    Walks weights by increasing positive degree (ties lexicographic). A
    kernel element is a new generator when it lies outside the span of
    products ``g*b`` of an earlier generator ``g`` with a kernel element
    ``b`` of the complementary weight. Lower pieces are complete by the time
    they are used, so these products span the subalgebra piece generated by
    the earlier generators.
    """
    check_weights(d, ws)
    pieces = pieces_up_to(d.ring, ws, bound)
    order = sorted(pieces, key=weight_order(ws))
    kernels: Dict[Weight, List[Polynomial]] = {}
    skipped: set = set()
    reports: List[PieceReport] = []
    generators: List[Tuple[Weight, Polynomial]] = []

    by_degree: Dict[int, List[Weight]] = {}
    for w in order:
        by_degree.setdefault(ws.degree(w), []).append(w)

    for deg in sorted(by_degree):
        level = by_degree[deg]
        todo = [w for w in level if len(pieces[w]) <= piece_limit]
        results = map_pieces(_kernel_job, [(d, pieces[w]) for w in todo], jobs)
        kernels.update(zip(todo, results))
        for w in level:
            rep = PieceReport(weight=w, degree=deg, size=len(pieces[w]))
            reports.append(rep)
            if w not in kernels:
                rep.skipped = True
                skipped.add(w)
                continue
            basis = kernels[w]
            rep.kernel_dim = len(basis)
            rep.basis = basis
            if deg == 0:
                rep.span_dim = len(basis)  # constants
                continue
            span = EchelonSpan()
            for gw, g in generators:
                rest = tuple(a - b for a, b in zip(w, gw))
                if rest in skipped:
                    rep.incomplete = True
                    continue
                for b in kernels.get(rest, ()):
                    span.add((g * b).terms)
            rep.span_dim = len(span)
            for f in basis:
                if span.add(f.terms):
                    rep.new_generators.append(f)
                    generators.append((w, f))
    return GradedKernelReport(bound, ws, reports, generators, piece_limit)
