from fractions import Fraction

import pytest

from lndlab import catalog
from lndlab.derivation import (NEG_INF, Derivation, LocalizedElement, apply, apply_localized,
                               is_locally_nilpotent_structural, iterate, local_slice_kernel, nu, phi_minus_u,
                               phi_t, slice_kernel)
from lndlab.errors import LndError, NotASliceError, NotNilpotentError, RingMismatchError
from lndlab.ring import Ring, parse_poly

XY = Ring(("x", "y"))
D = Derivation.from_map(XY, {"y": "x"})


def P(text, ring=XY):
    return parse_poly(text, ring)


def test_apply_examples():
    assert apply(D, P("y^2")) == P("2*x*y")
    assert apply(D, P("5")) == 0
    r = catalog.get("roberts", n=3, t=2).payload
    assert apply(r, r.ring.var("y4")) == parse_poly("(x1*x2*x3)^2", r.ring)


def test_apply_ring_mismatch():
    with pytest.raises(RingMismatchError):
        apply(D, Ring(("x",)).var("x"))


def test_iterate():
    assert iterate(D, P("y"), 2) == 0
    assert iterate(D, P("y^2"), 2) == P("2*x^2")
    assert iterate(D, P("x*y + 3"), 0) == P("x*y + 3")


def test_structural_check():
    ok, order = is_locally_nilpotent_structural(catalog.get("roberts").payload)
    assert ok and order == ["x1", "x2", "x3", "y1", "y2", "y3", "y4"]
    ok, order = is_locally_nilpotent_structural(catalog.get("df5").payload)
    assert ok and order == ["x", "s", "t", "u", "v"]
    ok, order = is_locally_nilpotent_structural(Derivation.from_map(XY, {"x": "y", "y": "x"}))
    assert not ok and order is None


def test_nu():
    assert nu(D, P("y")) == 1
    assert nu(D, P("y^2")) == 2
    assert nu(D, XY.zero()) == NEG_INF
    assert nu(D, P("x")) == 0
    swap = Derivation.from_map(XY, {"x": "y", "y": "x"})
    assert nu(swap, P("x"), cap=20) is None


def test_phi_t():
    T = XY.extend("t")
    assert phi_t(D, P("y")) == parse_poly("y + x*t", T)
    assert phi_t(D, P("x^3")) == parse_poly("x^3", T)
    assert phi_t(D, P("y^2")) == parse_poly("(y + x*t)^2", T)
    assert phi_t(D, P("y"), var="s") == parse_poly("y + x*s", XY.extend("s"))
    with pytest.raises(LndError, match="t"):
        phi_t(catalog.get("df5").payload, catalog.get("df5").payload.ring.var("x"))
    swap = Derivation.from_map(XY, {"x": "y", "y": "x"})
    with pytest.raises(NotNilpotentError):
        phi_t(swap, P("x"), cap=10)


def test_phi_minus_u():
    d = Derivation.from_map(XY, {"y": 1})
    u = P("y")
    assert phi_minus_u(d, u, P("y")) == 0
    assert phi_minus_u(d, u, P("x")) == P("x")
    assert phi_minus_u(d, u, P("x*y^2")) == 0
    assert slice_kernel(d, u) == [P("x"), P("0")]
    with pytest.raises(NotASliceError):
        phi_minus_u(D, P("y"), P("y"))


def test_local_slice_toy():
    R = Ring(("x", "y", "z"))
    d = catalog.get("lem44", n=1).payload
    out = local_slice_kernel(d, R.var("y"))
    x, y, z = out
    assert (x.numerator, x.power) == (R.var("x"), 0)
    assert z.power == 1 and z.base == R.var("x")
    assert z.numerator * 2 == parse_poly("2*x*z - y^2", R)
    for e in out:
        assert not apply_localized(d, e).numerator


def test_local_slice_errors():
    R = Ring(("x", "y", "z"))
    d = catalog.get("lem44").payload
    with pytest.raises(NotASliceError):
        local_slice_kernel(d, R.var("x"))  # d(x) = 0
    with pytest.raises(NotASliceError):
        local_slice_kernel(d, R.var("z"))  # d(z) = y, not in the kernel


def test_localized_normalization():
    R = Ring(("x", "y"))
    x = R.var("x")
    e = LocalizedElement(x ** 3 * R.var("y"), x, 2).normalized()
    assert (e.numerator, e.power) == (x * R.var("y"), 0)
    assert e.equals(LocalizedElement(x ** 2 * R.var("y"), x, 1))
    assert str(LocalizedElement(R.var("y"), x + 1, 2)) == "(y)/(x + 1)^2"


def test_from_map_unknown_variable():
    with pytest.raises(LndError):
        Derivation.from_map(XY, {"z": "x"})
