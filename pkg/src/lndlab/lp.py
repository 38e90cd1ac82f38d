"""Exact feasibility of rational linear systems by Fourier-Motzkin elimination.

A system has equalities ``a.u + b == 0`` and inequalities ``a.u + b >= 0``
over ``Q^n``. Equalities are solved out first by substitution, then the
remaining variables are eliminated one at a time. A feasible verdict comes
with a witness obtained by back-substitution through the stored
intermediate systems, and the witness is checked against the original
system before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

Constraint = Tuple[Tuple[Fraction, ...], Fraction]


def _constraint(coeffs, const) -> Constraint:
    return tuple(Fraction(a) for a in coeffs), Fraction(const)


@dataclass
class LinearSystem:
    nvars: int
    equalities: List[Constraint] = field(default_factory=list)
    inequalities: List[Constraint] = field(default_factory=list)

    def __post_init__(self):
        self.equalities = [_constraint(a, b) for a, b in self.equalities]
        self.inequalities = [_constraint(a, b) for a, b in self.inequalities]
        for a, _ in self.equalities + self.inequalities:
            if len(a) != self.nvars:
                raise ValueError(f"constraint has {len(a)} coefficients, expected {self.nvars}")

    def satisfied_by(self, u: Sequence) -> bool:
        u = [Fraction(x) for x in u]
        for a, b in self.equalities:
            if sum(x * y for x, y in zip(a, u)) + b != 0:
                return False
        for a, b in self.inequalities:
            if sum(x * y for x, y in zip(a, u)) + b < 0:
                return False
        return True


@dataclass
class FeasibilityResult:
    status: str  # "feasible" | "infeasible"
    witness: Optional[Tuple[Fraction, ...]] = None
    trace: List[str] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def _normalize(c: Constraint) -> Constraint:
    a, b = c
    lead = next((abs(x) for x in a if x), None)
    if lead is None or lead == 1:
        return c
    return tuple(x / lead for x in a), b / lead


def _dedupe(cs: List[Constraint]) -> List[Constraint]:
    """Normalise, and of parallel constraints keep only the tightest."""
    best: Dict[Tuple[Fraction, ...], Fraction] = {}
    for c in cs:
        a, b = _normalize(c)
        if a not in best or b < best[a]:
            best[a] = b
    return list(best.items())


def feasible(system: LinearSystem) -> FeasibilityResult:
    n = system.nvars
    trace: List[str] = []
    ineqs = list(system.inequalities)
    eqs = list(system.equalities)
    substitutions: List[Tuple[int, Constraint]] = []  # (var, equality it was solved from)

    # solve out equalities
    while eqs:
        a, b = eqs.pop(0)
        k = next((j for j, x in enumerate(a) if x), None)
        if k is None:
            if b != 0:
                trace.append(f"equality reduces to {b} == 0")
                return FeasibilityResult("infeasible", None, trace)
            continue
        trace.append(f"solve equality for u{k + 1}")
        substitutions.append((k, (a, b)))

        def sub(c: Constraint) -> Constraint:
            ca, cb = c
            f = ca[k] / a[k]
            if not f:
                return c
            return tuple(x - f * y for x, y in zip(ca, a)), cb - f * b

        eqs = [sub(c) for c in eqs]
        ineqs = [sub(c) for c in ineqs]

    substituted = {k for k, _ in substitutions}
    order = [j for j in range(n) if j not in substituted]
    stages: List[Tuple[int, List[Constraint]]] = []
    constant = [c for c in ineqs if not any(c[0])]
    bad = next((b for _, b in constant if b < 0), None)
    if bad is not None:
        trace.append(f"after substitution: contradiction {bad} >= 0")
        return FeasibilityResult("infeasible", None, trace)
    ineqs = _dedupe([c for c in ineqs if any(c[0])])
    remaining = list(order)
    while remaining:
        # cheapest variable first: fewest new constraints
        j = min(remaining, key=lambda v: (sum(c[0][v] > 0 for c in ineqs) * sum(c[0][v] < 0 for c in ineqs), v))
        remaining.remove(j)
        stages.append((j, ineqs))
        pos = [c for c in ineqs if c[0][j] > 0]
        neg = [c for c in ineqs if c[0][j] < 0]
        rest = [c for c in ineqs if c[0][j] == 0]
        for pa, pb in pos:
            for na, nb in neg:
                lp, ln = pa[j], -na[j]
                rest.append((tuple(ln * x + lp * y for x, y in zip(pa, na)), ln * pb + lp * nb))
        new = []
        for c in _dedupe(rest):
            if any(c[0]):
                new.append(c)
            elif c[1] < 0:
                trace.append(f"eliminate u{j + 1}: contradiction {c[1]} >= 0")
                return FeasibilityResult("infeasible", None, trace)
        trace.append(f"eliminate u{j + 1}: {len(ineqs)} -> {len(new)} constraints")
        ineqs = new
    # every variable eliminated; any leftover has zero coefficients and was checked

    u: List[Optional[Fraction]] = [None] * n
    for j, cs in reversed(stages):
        lo = hi = None
        for a, b in cs:
            if not a[j]:
                continue
            rest = b + sum(a[k] * u[k] for k in range(n) if k != j and u[k] is not None and a[k])
            bound = -rest / a[j]
            if a[j] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            u[j] = lo
        elif hi is not None:
            u[j] = hi
        else:
            u[j] = Fraction(0)
    for k, (a, b) in reversed(substitutions):
        rest = b + sum(a[i] * u[i] for i in range(n) if i != k and a[i])
        u[k] = -rest / a[k]
    witness = tuple(Fraction(0) if x is None else x for x in u)
    if not system.satisfied_by(witness):  # pragma: no cover - would be an engine bug
        raise AssertionError(f"back-substituted witness {witness} violates the system")
    return FeasibilityResult("feasible", witness, trace)
