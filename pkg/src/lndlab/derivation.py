"""Derivations of polynomial rings and the exponential map built from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import LndError, NotASliceError, NotNilpotentError, RingMismatchError
from .ring import Polynomial, Ring, divide_exact, format_poly, parse_poly

DEFAULT_CAP = 512
NEG_INF = float("-inf")


@dataclass(frozen=True)
class Derivation:
    """A k-derivation fixed by the images of the ring variables."""

    ring: Ring
    images: Tuple[Polynomial, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.ring.nvars:
            raise ValueError(f"need {self.ring.nvars} images, got {len(images)}")
        for img in images:
            if img.ring != self.ring:
                raise RingMismatchError("derivation image lives in a different ring")

    @classmethod
    def from_map(cls, ring: Ring, images: Mapping[str, Union[Polynomial, str, int]]) -> "Derivation":
        """Build from ``{name: image}``; unspecified variables map to 0."""
        unknown = set(images) - set(ring.names)
        if unknown:
            ring.index(sorted(unknown)[0])  # raises UnknownVariableError
        out = []
        for n in ring.names:
            img = images.get(n, 0)
            if isinstance(img, str):
                img = parse_poly(img, ring)
            elif not isinstance(img, Polynomial):
                img = ring.const(img)
            out.append(img)
        return cls(ring, tuple(out))

    def image(self, name: str) -> Polynomial:
        return self.images[self.ring.index(name)]

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply(self, f)

    def rename(self, mapping: Mapping[str, str]) -> "Derivation":
        ring = Ring(tuple(mapping.get(n, n) for n in self.ring.names))
        return Derivation(ring, tuple(img.embed(ring, mapping) for img in self.images))

    def __str__(self):
        return "\n".join(f"{n} -> {format_poly(img)}" for n, img in zip(self.ring.names, self.images))


def apply(d: Derivation, f: Polynomial) -> Polynomial:
    """The unique derivation extending the variable images, evaluated at ``f``."""
    if f.ring != d.ring:
        raise RingMismatchError(f"polynomial ring {f.ring} != derivation ring {d.ring}")
    out: Dict[tuple, Fraction] = {}
    active = [(i, img.terms) for i, img in enumerate(d.images) if img]
    for m, c in f.terms.items():
        for i, img in active:
            e = m[i]
            if not e:
                continue
            base = m[:i] + (e - 1,) + m[i + 1:]
            ce = c * e
            for gm, gc in img.items():
                t = tuple(a + b for a, b in zip(base, gm))
                out[t] = out.get(t, 0) + ce * gc
    return Polynomial(f.ring, out)


def iterate(d: Derivation, f: Polynomial, n: int) -> Polynomial:
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(n):
        if not f:
            break
        f = apply(d, f)
    return f


def orbit(d: Derivation, f: Polynomial, cap: int = DEFAULT_CAP) -> List[Polynomial]:
    """``[f, d(f), d^2(f), ...]`` up to the last nonzero iterate."""
    out = []
    while f:
        if len(out) > cap:
            raise NotNilpotentError(f"derivation not nilpotent on element within {cap} iterations")
        out.append(f)
        f = apply(d, f)
    return out


def is_locally_nilpotent_structural(d: Derivation) -> Tuple[bool, Optional[List[str]]]:
    """Look for a triangular variable order.

    Returns ``(True, order)`` when the variables can be ordered so that each
    image only involves earlier variables, ``(False, None)`` otherwise. At
    each step the earliest declared variable that qualifies is taken.
    """
    remaining = list(d.ring.names)
    placed: set = set()
    order: List[str] = []
    while remaining:
        for n in remaining:
            if d.image(n).support() <= placed:
                break
        else:
            return False, None
        remaining.remove(n)
        placed.add(n)
        order.append(n)
    return True, order


def nu(d: Derivation, f: Polynomial, cap: int = DEFAULT_CAP):
    """The delta-degree of ``f``.

    Returns an ``int``, ``NEG_INF`` for ``f == 0``, or ``None`` when ``f`` is
    still alive after ``cap`` applications.
    """
    if not f:
        return NEG_INF
    n = 0
    g = apply(d, f)
    while g:
        n += 1
        if n > cap:
            return None
        g = apply(d, g)
    return n


def phi_t(d: Derivation, f: Polynomial, var: str = "t", cap: int = DEFAULT_CAP) -> Polynomial:
    """``sum_i d^i(f) t^i / i!`` in the ring extended by ``var``."""
    try:
        ext = d.ring.extend(var)
    except ValueError as exc:
        raise LndError(str(exc)) from None
    t = ext.var(var)
    out = ext.zero()
    for i, g in enumerate(orbit(d, f, cap)):
        out = out + g.embed(ext) * t ** i * Fraction(1, factorial(i))
    return out


def exp_substitute(d: Derivation, f: Polynomial, s: Polynomial, cap: int = DEFAULT_CAP) -> Polynomial:
    """``sum_i d^i(f) s^i / i!`` with ``s`` an element of the same ring."""
    out = d.ring.zero()
    for i, g in enumerate(orbit(d, f, cap)):
        out = out + g * s ** i * Fraction(1, factorial(i))
    return out


def phi_minus_u(d: Derivation, u: Polynomial, f: Polynomial, cap: int = DEFAULT_CAP) -> Polynomial:
    """Project ``f`` into the kernel using the slice ``u``."""
    if apply(d, u) != 1:
        raise NotASliceError(f"{format_poly(u)} is not a slice: d(u) = {format_poly(apply(d, u))}")
    return exp_substitute(d, f, -u, cap)


def slice_kernel(d: Derivation, u: Polynomial, generators: Optional[Sequence[Polynomial]] = None,
                 cap: int = DEFAULT_CAP) -> List[Polynomial]:
    """Images of ``generators`` (default: the ring variables) under phi_{-u}."""
    gens = d.ring.gens() if generators is None else generators
    return [phi_minus_u(d, u, g, cap) for g in gens]


@dataclass(frozen=True)
class LocalizedElement:
    """``numerator / base**power`` in B[base^-1], with ``base`` in the kernel."""

    numerator: Polynomial
    base: Polynomial
    power: int

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("power must be non-negative")

    def normalized(self) -> "LocalizedElement":
        num, k = self.numerator, self.power
        if not num:
            return LocalizedElement(num, self.base, 0)
        while k > 0:
            q = divide_exact(num, self.base)
            if q is None:
                break
            num, k = q, k - 1
        return LocalizedElement(num, self.base, k)

    def equals(self, other: "LocalizedElement") -> bool:
        """Value equality in the localisation (bases must agree)."""
        if self.base != other.base:
            raise ValueError("comparison of elements with different denominators")
        k = max(self.power, other.power)
        return (self.numerator * self.base ** (k - self.power)
                == other.numerator * self.base ** (k - other.power))

    def __str__(self):
        if self.power == 0:
            return format_poly(self.numerator)
        den = format_poly(self.base)
        if len(self.base.terms) > 1:
            den = f"({den})"
        if self.power > 1:
            den = f"{den}^{self.power}"
        return f"({format_poly(self.numerator)})/{den}"


def apply_localized(d: Derivation, z: LocalizedElement) -> LocalizedElement:
    """The extension of ``d`` to B[a^-1]; ``d(a) = 0`` makes this ``d(n)/a^k``."""
    return LocalizedElement(apply(d, z.numerator), z.base, z.power).normalized()


def local_slice_kernel(d: Derivation, u_prime: Polynomial,
                       generators: Optional[Sequence[Polynomial]] = None,
                       cap: int = DEFAULT_CAP) -> List[LocalizedElement]:
    """Kernel elements of the extension of ``d`` to B[a^-1], ``a = d(u')``.

    ``u'/a`` is a slice there; each generator ``g`` is sent to
    ``phi_{-u'/a}(g)``, returned as a normalised numerator over a power of ``a``.
    """
    a = apply(d, u_prime)
    if not a:
        raise NotASliceError(f"d({format_poly(u_prime)}) = 0; not a local slice")
    if apply(d, a):
        raise NotASliceError(f"d({format_poly(u_prime)}) = {format_poly(a)} is not in the kernel")
    gens = d.ring.gens() if generators is None else generators
    out = []
    for g in gens:
        terms = orbit(d, g, cap)
        top = len(terms) - 1
        num = d.ring.zero()
        for i, h in enumerate(terms):
            num = num + h * (-u_prime) ** i * a ** (top - i) * Fraction(1, factorial(i))
        out.append(LocalizedElement(num, a, max(top, 0)).normalized())
    return out
