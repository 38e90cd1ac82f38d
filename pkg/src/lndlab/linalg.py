"""Exact rational linear algebra.

Elimination runs fraction-free: every row is scaled to a primitive integer
vector, a row update is ``p*row - a*pivot_row`` followed by removal of the
integer content, and only the final normalisation to reduced row echelon
form divides by the pivots. Rows whose entry in the pivot column is zero are
left untouched, which matters for the very sparse matrices produced by a
derivation acting on a graded piece.

Public functions take and return :class:`RationalMatrix`; the ``*_sparse``
variants work on lists of ``{column: value}`` dicts and are what the graded
kernel code calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple

SparseRow = Dict[int, Fraction]


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entries length {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(Fraction(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def sparse_rows(self) -> List[SparseRow]:
        return [{j: x for j, x in enumerate(self.row(i)) if x} for i in range(self.rows)]

    def matvec(self, v: Sequence) -> List[Fraction]:
        return [sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows)]


# -- fraction-free engine ---------------------------------------------------------


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        row = {j: x // g for j, x in row.items()}
    # normalise sign on the leading entry so echelon rows are canonical up to content
    lead = min(row)
    if row[lead] < 0:
        row = {j: -x for j, x in row.items()}
    return row


def _to_integer_row(row: SparseRow) -> Dict[int, int]:
    items = {j: Fraction(x) for j, x in row.items() if x}
    if not items:
        return {}
    den = 1
    for x in items.values():
        den = den * x.denominator // gcd(den, x.denominator)
    return _primitive({j: int(x * den) for j, x in items.items()})


def _eliminate(target: Dict[int, int], pivot: Dict[int, int], col: int) -> Dict[int, int]:
    """``p*target - a*pivot`` made primitive; ``target[col]`` becomes 0."""
    p = pivot[col]
    a = target[col]
    g = gcd(p, a)
    p //= g
    a //= g
    out = {j: p * x for j, x in target.items()}
    for j, x in pivot.items():
        s = out.get(j, 0) - a * x
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return _primitive(out) if out else out


def echelon_sparse(rows: Sequence[SparseRow], ncols: int):
    """Fraction-free Gauss-Jordan on sparse rows.

    Returns ``(pivot_rows, pivots)``: integer rows, each zero in every other
    row's pivot column, with ``pivots`` strictly increasing.
    """
    work = [r for r in (_to_integer_row(r) for r in rows) if r]
    done: List[Dict[int, int]] = []
    pivots: List[int] = []
    for col in range(ncols):
        if not work:
            break
        cand = [i for i, r in enumerate(work) if col in r]
        if not cand:
            continue
        # sparsest candidate keeps fill-in low; ties by position for determinism
        k = min(cand, key=lambda i: (len(work[i]), i))
        piv = work.pop(k)
        work = [(_eliminate(r, piv, col) if col in r else r) for r in work]
        work = [r for r in work if r]
        done = [(_eliminate(r, piv, col) if col in r else r) for r in done]
        done.append(piv)
        pivots.append(col)
    return done, pivots


def rref_sparse(rows: Sequence[SparseRow], ncols: int) -> Tuple[List[SparseRow], List[int]]:
    int_rows, pivots = echelon_sparse(rows, ncols)
    out = []
    for r, p in zip(int_rows, pivots):
        lead = r[p]
        out.append({j: Fraction(x, lead) for j, x in r.items()})
    return out, pivots


def nullspace_sparse(rows: Sequence[SparseRow], ncols: int) -> List[SparseRow]:
    """Canonical kernel basis: one vector per free column ``f``, with a 1 at ``f``."""
    red, pivots = rref_sparse(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for r, p in zip(red, pivots):
            x = r.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def rank_sparse(rows: Sequence[SparseRow], ncols: int) -> int:
    return len(echelon_sparse(rows, ncols)[1])


# -- dense API ----------------------------------------------------------------------


def rref(m: RationalMatrix) -> Tuple[RationalMatrix, List[int]]:
    red, pivots = rref_sparse(m.sparse_rows(), m.cols)
    dense = [[r.get(j, Fraction(0)) for j in range(m.cols)] for r in red]
    dense += [[Fraction(0)] * m.cols for _ in range(m.rows - len(red))]
    return RationalMatrix.from_rows(dense, m.cols) if m.rows else m, pivots


def nullspace(m: RationalMatrix) -> List[Tuple[Fraction, ...]]:
    basis = nullspace_sparse(m.sparse_rows(), m.cols)
    return [tuple(v.get(j, Fraction(0)) for j in range(m.cols)) for v in basis]


def rank(m: RationalMatrix) -> int:
    return rank_sparse(m.sparse_rows(), m.cols)


class EchelonSpan:
    """Incrementally built span of sparse rational vectors.

    Keys may be any hashable objects; they are ordered by first appearance.
    ``add`` returns whether the vector enlarged the span.
    """

    def __init__(self):
        self._rows: Dict[object, Dict[object, Fraction]] = {}  # pivot key -> row with row[pivot] == 1

    def __len__(self):
        return len(self._rows)

    def reduce(self, vec) -> Dict[object, Fraction]:
        v = {k: Fraction(x) for k, x in dict(vec).items() if x}
        for p, row in self._rows.items():
            a = v.get(p)
            if a:
                for k, x in row.items():
                    s = v.get(k, 0) - a * x
                    if s:
                        v[k] = s
                    else:
                        v.pop(k, None)
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def add(self, vec) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        p = next(iter(v))
        lead = v[p]
        v = {k: x / lead for k, x in v.items()}
        for q, row in self._rows.items():
            a = row.get(p)
            if a:
                for k, x in v.items():
                    s = row.get(k, 0) - a * x
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        self._rows[p] = v
        return True
