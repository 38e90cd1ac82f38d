"""Buchberger's algorithm for ideals and for submodules of free modules.

Internally an element of the free module ``B^p`` is a dict mapping
``(position, exponents)`` to a coefficient; an ideal is the ``p = 1`` case.
Module terms are ordered position-over-term with ``e1 > e2 > ...``, and
monomials by ``grevlex`` (default) or ``lex``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .derivation import Derivation, apply
from .ring import Polynomial, Ring, order_key

Term = Tuple[int, tuple]
Vec = Dict[Term, Fraction]


def _as_vec(x) -> Tuple[Vec, int, Ring]:
    if isinstance(x, Polynomial):
        return {(0, m): c for m, c in x.terms.items()}, 1, x.ring
    coeffs = getattr(x, "coefficients", x)
    coeffs = tuple(coeffs)
    if not coeffs:
        raise ValueError("empty module element")
    ring = coeffs[0].ring
    vec = {}
    for pos, p in enumerate(coeffs):
        for m, c in p.terms.items():
            vec[(pos, m)] = c
    return vec, len(coeffs), ring


def _divides(a: Term, b: Term) -> bool:
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _sub_scaled(v: Vec, c: Fraction, shift: tuple, g: Vec) -> None:
    """In place: ``v -= c * x^shift * g``."""
    for (pos, m), gc in g.items():
        t = (pos, tuple(a + b for a, b in zip(m, shift)))
        s = v.get(t, 0) - c * gc
        if s:
            v[t] = s
        else:
            v.pop(t, None)


@dataclass
class GroebnerBasis:
    ring: Ring
    rank: int
    order: str
    generators: List[Vec]

    def __post_init__(self):
        mkey = order_key(self.order)
        self._key = lambda t: (-t[0], mkey(t[1]))
        self._leads = [self.lead(g) for g in self.generators]

    @property
    def is_ideal(self) -> bool:
        return self.rank == 1

    def lead(self, v: Vec) -> Term:
        return max(v, key=self._key)

    def leading_terms(self) -> List[Term]:
        return list(self._leads)

    def reduce(self, v: Vec) -> Vec:
        """Full reduction: no remaining term is divisible by a leading term."""
        v = dict(v)
        rem: Vec = {}
        while v:
            t = max(v, key=self._key)
            c = v[t]
            for g, lt in zip(self.generators, self._leads):
                if _divides(lt, t):
                    shift = tuple(a - b for a, b in zip(t[1], lt[1]))
                    _sub_scaled(v, c / g[lt], shift, g)
                    break
            else:
                rem[t] = v.pop(t)
        return rem

    def is_standard(self, t: Term) -> bool:
        return not any(_divides(lt, t) for lt in self._leads)

    def polynomials(self) -> List[Polynomial]:
        return [_vec_to_poly(g, self.ring) for g in self.generators]

    def elements(self) -> List[Tuple[Polynomial, ...]]:
        return [vec_to_coeffs(g, self.ring, self.rank) for g in self.generators]


def _vec_to_poly(v: Vec, ring: Ring) -> Polynomial:
    return Polynomial(ring, {m: c for (_, m), c in v.items()})


def vec_to_coeffs(v: Vec, ring: Ring, rank: int) -> Tuple[Polynomial, ...]:
    parts: List[Dict] = [{} for _ in range(rank)]
    for (pos, m), c in v.items():
        parts[pos][m] = c
    return tuple(Polynomial(ring, p) for p in parts)


def buchberger(gens: Sequence, order: str = "grevlex") -> GroebnerBasis:
    """Reduced Groebner basis of the ideal or submodule generated by ``gens``.

    ``gens`` are polynomials, or module elements (anything with a
    ``coefficients`` tuple, or a plain sequence of polynomials). Pairs are
    processed by the normal strategy: smallest lcm degree first, ties by index.
    """
    if not gens:
        raise ValueError("need at least one generator")
    vecs = []
    ring = rank = None
    for g in gens:
        v, p, r = _as_vec(g)
        if ring is None:
            ring, rank = r, p
        elif r != ring or p != rank:
            raise ValueError("generators live in different rings or free modules")
        if v:
            vecs.append(v)
    gb = GroebnerBasis(ring, rank, order, [])
    if not vecs:
        return gb

    G: List[Vec] = []
    leads: List[Term] = []
    pairs: List[Tuple[int, int]] = []

    def add(v: Vec):
        lt = gb.lead(v)
        lc = v[lt]
        v = {t: c / lc for t, c in v.items()}
        for i, lt_i in enumerate(leads):
            if lt_i[0] == lt[0]:
                pairs.append((i, len(G)))
        G.append(v)
        leads.append(lt)

    for v in vecs:
        add(v)

    def lcm_deg(pair):
        a, b = leads[pair[0]][1], leads[pair[1]][1]
        return (sum(max(x, y) for x, y in zip(a, b)), pair)

    while pairs:
        pairs.sort(key=lcm_deg)
        i, j = pairs.pop(0)
        a, b = leads[i], leads[j]
        if rank == 1 and all(x == 0 or y == 0 for x, y in zip(a[1], b[1])):
            continue  # coprime leading monomials
        lcm = tuple(max(x, y) for x, y in zip(a[1], b[1]))
        s: Vec = {}
        _sub_scaled(s, Fraction(-1), tuple(x - y for x, y in zip(lcm, a[1])), G[i])
        _sub_scaled(s, Fraction(1), tuple(x - y for x, y in zip(lcm, b[1])), G[j])
        tmp = GroebnerBasis(ring, rank, order, G)
        r = tmp.reduce(s)
        if r:
            add(r)

    return _reduced(GroebnerBasis(ring, rank, order, G))


def _reduced(gb: GroebnerBasis) -> GroebnerBasis:
    gens, leads = gb.generators, gb.leading_terms()
    keep = []
    for i, lt in enumerate(leads):
        dominated = any(
            j != i and _divides(leads[j], lt) and (leads[j] != lt or j < i)
            for j in range(len(leads))
        )
        if not dominated:
            keep.append(gens[i])
    out = []
    for i, g in enumerate(keep):
        others = GroebnerBasis(gb.ring, gb.rank, gb.order, keep[:i] + keep[i + 1:])
        lt = gb.lead(g)
        lc = g[lt]
        tail = {t: c for t, c in g.items() if t != lt}
        r = others.reduce(tail)
        r[lt] = lc
        out.append({t: c / lc for t, c in r.items()})
    out.sort(key=lambda v: gb._key(gb.lead(v)), reverse=True)
    return GroebnerBasis(gb.ring, gb.rank, gb.order, out)


def normal_form(f, gb: GroebnerBasis):
    """Remainder of ``f`` on division by ``gb``; same type as ``f``."""
    v, rank, ring = _as_vec(f)
    if ring != gb.ring or rank != gb.rank:
        raise ValueError("element and basis live in different modules")
    r = gb.reduce(v)
    if isinstance(f, Polynomial):
        return _vec_to_poly(r, ring)
    coeffs = vec_to_coeffs(r, ring, rank)
    if hasattr(f, "coefficients") and hasattr(type(f), "from_coefficients"):
        return type(f).from_coefficients(coeffs)
    return coeffs


def member(f, gb: GroebnerBasis) -> bool:
    v, _, _ = _as_vec(f)
    return not gb.reduce(v)


def is_delta_ideal(d: Derivation, gens: Sequence[Polynomial], order: str = "grevlex") -> Tuple[bool, Optional[Tuple[Polynomial, Polynomial]]]:
    """Check ``d(I) <= I``; on failure return ``(generator, d(generator))``.

    Testing generators suffices: ``d(h*g) = d(h)*g + h*d(g)``.
    """
    gb = buchberger(list(gens), order)
    for g in gens:
        img = apply(d, g)
        if not member(img, gb):
            return False, (g, img)
    return True, None


def is_delta_submodule(m, gens: Sequence, order: str = "grevlex") -> Tuple[bool, Optional[tuple]]:
    """Check ``d_M(L) <= L`` for the submodule ``L`` generated by ``gens``.

    ``m`` is a :class:`~lndlab.dmodule.DeltaModule` (anything with an
    ``apply`` method on module elements). Relations of a quotient module
    are added to ``L``, since they are zero in ``M``.
    """
    gb = buchberger(list(gens) + list(getattr(m, "relations", ())), order)
    for z in gens:
        img = m.apply(z)
        if not member(img, gb):
            return False, (z, img)
    return True, None
