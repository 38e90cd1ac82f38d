"""Kuroda's linear-inequality criterion for monomial derivations.

For ``D(x_i) = 0`` and ``D(y_j) = x^{delta_j}`` on ``k[x_1..x_m, y_1..y_r]``
the systems ``L_{k,r-2}`` (k = 3..r-1) are built from the exponent
differences ``eps_{i,j} = delta_i - delta_j``. If every system has a real
solution, the kernel of ``D`` is not finitely generated. The converse is not
claimed, so an infeasible system only makes the verdict inconclusive.

Indices in docstrings and reports are 1-based as in the usual statement;
Python lists are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .derivation import Derivation
from .errors import AssumptionError
from .lp import FeasibilityResult, LinearSystem, feasible

SATISFIED = "criterion satisfied: kernel not finitely generated"
INCONCLUSIVE = "criterion inconclusive"


@dataclass(frozen=True)
class ExponentData:
    m: int
    r: int
    delta: Tuple[Tuple[int, ...], ...]
    x_names: Tuple[str, ...] = ()
    y_names: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(int(a) for a in d) for d in self.delta))
        if len(self.delta) != self.r:
            raise AssumptionError(f"expected {self.r} exponent vectors, got {len(self.delta)}")
        if any(len(d) != self.m for d in self.delta):
            raise AssumptionError(f"exponent vectors must have length m = {self.m}")

    def eps(self, k: int, i: int, j: int) -> int:
        """k-th component of delta_i - delta_j (1-based indices)."""
        return self.delta[i - 1][k - 1] - self.delta[j - 1][k - 1]

    def check(self) -> None:
        if self.r < 4:
            raise AssumptionError(f"assumption r >= 4 violated (r = {self.r})")
        if self.m < self.r - 1:
            raise AssumptionError(f"assumption m >= r-1 violated (m = {self.m}, r = {self.r})")
        for i in range(1, self.r):
            for j in range(1, self.r + 1):
                if i != j and self.eps(i, i, j) <= 0:
                    raise AssumptionError(
                        f"assumption eps^{i}_{{{i},{j}}} > 0 violated (value {self.eps(i, i, j)})"
                    )

    def eta(self) -> Fraction:
        return Fraction(self.eps(1, 1, self.r), min(self.eps(1, 1, j) for j in range(2, self.r)))

    def eta_ki(self, k: int, i: int) -> Fraction:
        return self.eta() * min(max(self.eps(i, 1, k), self.eps(i, 2, k)), 0)


@dataclass
class KurodaSystem:
    """``L_{k,r-2}`` in the variables u_1..u_{r-2}.

    ``rows[i-2]`` is ``(coeffs, constant)`` for the inequality indexed by
    ``i = 2..r-1``: ``sum_j coeffs[j] u_j + constant >= 0``.
    """

    k: int
    eta: Fraction
    nvars: int
    rows: List[Tuple[Tuple[Fraction, ...], Fraction]]

    def linear_system(self) -> LinearSystem:
        n = self.nvars
        ineqs = [(tuple(Fraction(int(j == 0)) for j in range(n)), -self.eta)]
        ineqs += [(tuple(Fraction(int(j == i)) for j in range(n)), Fraction(0)) for i in range(1, n)]
        ineqs += list(self.rows)
        return LinearSystem(n, [((Fraction(1),) * n, Fraction(-1))], ineqs)

    def satisfied_by(self, u: Sequence) -> bool:
        return self.linear_system().satisfied_by(u)

    def format(self) -> List[str]:
        n = self.nvars
        lines = [" + ".join(f"u{j + 1}" for j in range(n)) + " = 1",
                 f"u1 >= {self.eta}" + "".join(f", u{j + 1} >= 0" for j in range(1, n))]
        for coeffs, const in self.rows:
            lines.append(_format_row(coeffs, const) + " >= 0")
        return lines


def _format_row(coeffs, const) -> str:
    parts = []
    for j, c in enumerate(coeffs):
        if not c:
            continue
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{mag}u{j + 1}"))
    if const:
        parts.append(("-" if const < 0 else "+", str(abs(const))))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def build_systems(data: ExponentData) -> List[KurodaSystem]:
    data.check()
    r = data.r
    eta = data.eta()
    systems = []
    for k in range(3, r):
        rows = []
        for i in range(2, r):
            coeffs = tuple(Fraction(min(data.eps(i, r, 1), data.eps(i, r, j + 1))) for j in range(1, r - 1))
            rows.append((coeffs, data.eta_ki(k, i)))
        systems.append(KurodaSystem(k, eta, r - 2, rows))
    return systems


def solve_system(system: KurodaSystem) -> FeasibilityResult:
    return feasible(system.linear_system())


@dataclass
class KurodaVerdict:
    verdict: str
    eta: Fraction
    systems: List[KurodaSystem]
    results: List[FeasibilityResult]
    failing_k: Optional[int] = None

    @property
    def satisfied(self) -> bool:
        return self.verdict == SATISFIED

    def witnesses(self):
        return {s.k: r.witness for s, r in zip(self.systems, self.results) if r.feasible}


def kuroda_verdict(data: ExponentData) -> KurodaVerdict:
    systems = build_systems(data)
    results = [solve_system(s) for s in systems]
    failing = next((s.k for s, r in zip(systems, results) if not r.feasible), None)
    verdict = SATISFIED if failing is None else INCONCLUSIVE
    return KurodaVerdict(verdict, data.eta(), systems, results, failing)


def exponent_data_from_derivation(d: Derivation) -> ExponentData:
    """Read off ``(m, r, delta)`` from a derivation with monomial images.

    Variables with zero image are the x's; every other image must be a
    monomial with coefficient 1 in those variables.
    """
    names = d.ring.names
    xs = [i for i, img in enumerate(d.images) if not img]
    ys = [i for i, img in enumerate(d.images) if img]
    xset = set(xs)
    delta = []
    for j in ys:
        img = d.images[j]
        if len(img.terms) != 1:
            raise AssumptionError(f"d({names[j]}) is not a monomial")
        (mono, c), = img.terms.items()
        if c != 1:
            raise AssumptionError(f"d({names[j]}) has coefficient {c}, expected 1")
        if any(e and i not in xset for i, e in enumerate(mono)):
            raise AssumptionError(f"d({names[j]}) involves a variable outside the kernel generators")
        delta.append(tuple(mono[i] for i in xs))
    return ExponentData(len(xs), len(ys), tuple(delta),
                        tuple(names[i] for i in xs), tuple(names[j] for j in ys))
