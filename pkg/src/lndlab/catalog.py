"""Named derivations, modules and exponent data, with integer parameters.

======================  ==================  =====================================
id                      params (default)    payload
======================  ==================  =====================================
``roberts``             n>=3 (3), t>=2 (2)  derivation on x1..xn, y1..y(n+1)
``thm52``               n>=4 (4)            rank-2 free module, d(e2) = x1..xn e1
``cor63``               n>=3 (3), t>=2 (2)  derivation on x, y, w, z variables
``freudenburg6``                            derivation on x, y, s, t, u, v
``df5``                                     derivation on x, s, t, u, v
``ex33``                                    d(x) = 0, d(y) = x
``lem42``                                   B/x^2 B over ex33
``lem43``               q>=1 (2)            rank-2 quotient module, f = x^q
``lem44``               n>=1 (1)            d = (0, x, y^n) on x, y, z
``thm52data``           n>=4 (4)            exponent data for the criterion
======================  ==================  =====================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Tuple, Union

from .derivation import Derivation
from .dmodule import DeltaModule, make_module
from .errors import CatalogError
from .kuroda import ExponentData
from .ring import Ring

Payload = Union[Derivation, DeltaModule, ExponentData]


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    params: Tuple[Tuple[str, int], ...]
    payload: Payload

    @property
    def derivation(self) -> Derivation:
        if isinstance(self.payload, DeltaModule):
            return self.payload.base
        if isinstance(self.payload, Derivation):
            return self.payload
        raise CatalogError(f"catalog entry {self.id!r} has no derivation")


def _roberts(n, t):
    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 2)]
    ring = Ring(tuple(names))
    images = {f"y{i}": f"x{i}^{t + 1}" for i in range(1, n + 1)}
    images[f"y{n + 1}"] = "(" + "*".join(f"x{i}" for i in range(1, n + 1)) + f")^{t}"
    return Derivation.from_map(ring, images)


def _thm52_base(n):
    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    return Derivation.from_map(Ring(tuple(names)), {f"y{i}": f"x{i}^2" for i in range(1, n + 1)})


def _thm52(n):
    base = _thm52_base(n)
    prod = "*".join(f"x{i}" for i in range(1, n + 1))
    return make_module(base, ("e1", "e2"), [[0, prod], [0, 0]])


def _cor63(n, t):
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 2)]
    ws = [f"w{i}" for i in range(1, n + 1)]
    zs = [f"z{i}" for i in range(1, n + 2)]
    ring = Ring(tuple(xs + ys + ws + zs))
    images = {}
    for i in range(1, n + 1):
        images[f"y{i}"] = f"x{i}^{t + 1}"
        images[f"z{i}"] = f"{t + 1}*x{i}^{t}*w{i}"
    images[f"y{n + 1}"] = "(" + "*".join(xs) + f")^{t}"
    terms = []
    for i in range(1, n + 1):
        mono = "*".join(f"x{k}^{t - 1 if k == i else t}" for k in range(1, n + 1))
        terms.append(f"{t}*{mono}*w{i}")
    images[f"z{n + 1}"] = " + ".join(terms)
    return Derivation.from_map(ring, images)


def _freudenburg6():
    ring = Ring(("x", "y", "s", "t", "u", "v"))
    return Derivation.from_map(ring, {"s": "x^3", "t": "y^3*s", "u": "y^3*t", "v": "x^2*y^2"})


def _df5():
    ring = Ring(("x", "s", "t", "u", "v"))
    return Derivation.from_map(ring, {"s": "x^3", "t": "s", "u": "t", "v": "x^2"})


def _ex33():
    return Derivation.from_map(Ring(("x", "y")), {"y": "x"})


def _lem42():
    return make_module(_ex33(), ("e",), [[0]], relations=[["x^2"]])


def _lem43(q):
    f = f"x^{q}"
    base = Derivation.from_map(Ring(("x", "y")), {"y": f})
    return make_module(base, ("e1", "e2"), [[0, 1], [0, 0]],
                       relations=[[0, "y"], ["y", f], [f, 0]])


def _lem44(n):
    return Derivation.from_map(Ring(("x", "y", "z")), {"y": "x", "z": f"y^{n}"})


def _thm52data(n):
    # x_{n+1} = e1, y_{n+1} = e2 in the symmetric-algebra ring
    m = r = n + 1
    delta = [tuple(2 if k == j else 0 for k in range(m)) for j in range(n)]
    delta.append((1,) * m)
    xs = tuple(f"x{i}" for i in range(1, n + 1)) + ("e1",)
    ys = tuple(f"y{i}" for i in range(1, n + 1)) + ("e2",)
    return ExponentData(m, r, tuple(delta), xs, ys)


# id -> (builder, {param: (default, minimum)})
_ENTRIES: Dict[str, Tuple[Callable, Dict[str, Tuple[int, int]]]] = {
    "roberts": (_roberts, {"n": (3, 3), "t": (2, 2)}),
    "thm52": (_thm52, {"n": (4, 4)}),
    "cor63": (_cor63, {"n": (3, 3), "t": (2, 2)}),
    "freudenburg6": (_freudenburg6, {}),
    "df5": (_df5, {}),
    "ex33": (_ex33, {}),
    "lem42": (_lem42, {}),
    "lem43": (_lem43, {"q": (2, 1)}),
    "lem44": (_lem44, {"n": (1, 1)}),
    "thm52data": (_thm52data, {"n": (4, 4)}),
}


def ids():
    return sorted(_ENTRIES)


def get(id: str, params: Mapping[str, int] | None = None, **kwargs) -> CatalogEntry:
    """Build catalog entry ``id``; parameters come from ``params`` and/or kwargs."""
    try:
        builder, spec = _ENTRIES[id]
    except KeyError:
        raise CatalogError(f"unknown catalog id {id!r}; known: {', '.join(ids())}") from None
    given = dict(params or {})
    given.update(kwargs)
    unknown = set(given) - set(spec)
    if unknown:
        raise CatalogError(f"{id}: unknown parameter(s) {sorted(unknown)}")
    values = {}
    for name, (default, lo) in spec.items():
        v = given.get(name, default)
        if not isinstance(v, int) or isinstance(v, bool):
            raise CatalogError(f"{id}: parameter {name} must be an integer")
        if v < lo:
            raise CatalogError(f"{id}: parameter {name} >= {lo} required (got {v})")
        values[name] = v
    payload = builder(**values)
    return CatalogEntry(id, tuple(sorted(values.items())), payload)
