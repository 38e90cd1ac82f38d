import pytest

from lndlab import catalog
from lndlab.derivation import Derivation, apply
from lndlab.dmodule import (ModuleElement, apply_module, differential, hom, hom_element, make_module,
                            module_kernel_basis, module_kernel_generators, module_weights, omega,
                            parse_element, sym_extend, tensor)
from lndlab.errors import ModuleError, ParseError
from lndlab.kernel import infer_weights
from lndlab.ring import Ring, parse_poly

XY = Ring(("x", "y"))


def E(text, m):
    return parse_element(text, m)


def test_two_generator_quotient_module_valid():
    m = catalog.get("lem43", q=2).payload
    assert m.rank == 2 and len(m.relations) == 3
    assert str(m.image(1).coefficients[0]) == "1"


def test_nilpotent_connection_module():
    m = catalog.get("thm52", n=4).payload
    assert m.triangular_order == ("e1", "e2")
    assert apply_module(m, m.unit(1)) == E("x1*x2*x3*x4*e1", m)
    assert not apply_module(m, ModuleElement.zero(m.ring, 2))


def test_swap_connection_rejected():
    base = Derivation.from_map(XY, {"y": "x"})
    with pytest.raises(ModuleError):
        make_module(base, ("e1", "e2"), [[0, 1], [1, 0]], relations=[[1, 0]])
    with pytest.raises(ModuleError):
        make_module(base, ("e1", "e2"), [[0, 1], [1, 0]], cap=50)


def test_rank_one_quotient_apply_reduces():
    m = catalog.get("lem42").payload
    z = E("x*y^2*e", m)
    assert not apply_module(m, z)  # 2x^2y e is zero in B/x^2B


def test_omega_connection():
    m = omega(catalog.get("roberts", n=3, t=2).payload)
    assert apply_module(m, E("dy1", m)) == E("3*x1^2*dx1", m)
    assert apply_module(m, E("dy4", m)) == E(
        "2*x1*x2^2*x3^2*dx1 + 2*x1^2*x2*x3^2*dx2 + 2*x1^2*x2^2*x3*dx3", m)
    s = omega(Derivation.from_map(XY, {"y": 1}))
    assert not apply_module(s, E("dy", s))


def test_differential():
    m = omega(Derivation.from_map(XY, {"y": "x"}))
    assert differential(parse_poly("x^2*y", XY)) == E("2*x*y*dx + x^2*dy", m)
    assert not differential(XY.const(7))
    R = catalog.get("roberts").payload.ring
    mr = omega(catalog.get("roberts").payload)
    assert differential(parse_poly("x1*y4", R)) == E("y4*dx1 + x1*dy4", mr)


def test_tensor_of_nilpotent_connection_module():
    m = catalog.get("thm52", n=4).payload
    t = tensor(m, m)
    assert t.basis == ("e1_e1", "e1_e2", "e2_e1", "e2_e2")
    assert apply_module(t, E("e2_e2", t)) == E("x1*x2*x3*x4*e1_e2 + x1*x2*x3*x4*e2_e1", t)


def test_hom_identity_and_homomorphisms():
    base = Derivation.from_map(XY, {"y": "x"})
    triv = make_module(base, ("e",), [[0]])
    h = hom(triv, triv)
    assert not apply_module(h, hom_element(triv, triv, [[1]]))
    assert apply_module(h, hom_element(triv, triv, [["y"]])) == E("x*e_e", h)
    m = catalog.get("thm52", n=4).payload
    hm = hom(m, m)
    ident = hom_element(m, m, [[1, 0], [0, 1]])
    assert not apply_module(hm, ident)
    # d_Hom(F) = 0 iff F commutes with the connections
    F = hom_element(m, m, [[0, 1], [0, 0]])  # e2 -> e1
    assert not apply_module(hm, F)
    G = hom_element(m, m, [[0, 0], [1, 0]])  # e1 -> e2
    assert apply_module(hm, G)


def test_hom_detects_delta_maps_between_rank_one():
    base = Derivation.from_map(XY, {"y": "x"})
    M = make_module(base, ("e",), [[0]])
    h = hom(M, M)
    for text, is_map in [("1", True), ("x", True), ("y", False), ("x*y - y^2", False)]:
        F = hom_element(M, M, [[parse_poly(text, XY)]])
        assert (not apply_module(h, F)) == is_map


def test_tensor_hom_need_free():
    m = catalog.get("lem42").payload
    with pytest.raises(ModuleError):
        tensor(m, m)


def test_sym_extend():
    m = catalog.get("thm52", n=4).payload
    d = sym_extend(m)
    assert d.ring.names[-2:] == ("e1", "e2")
    assert str(d.image("e2")) == "x1*x2*x3*x4*e1"
    assert not d.image("e1")
    roberts = catalog.get("roberts").payload
    s = sym_extend(omega(roberts))
    assert s.ring.nvars == 14
    triv = make_module(roberts, ("e1",), [[0]])
    assert sym_extend(triv).image("e1") == 0


def test_sym_extend_name_collision():
    base = Derivation.from_map(XY, {"y": "x"})
    with pytest.raises(ModuleError):
        sym_extend(make_module(base, ("x",), [[0]]))


def test_module_weights():
    ws = infer_weights(catalog.get("thm52").payload.base)
    assert module_weights(catalog.get("thm52").payload, ws) == ((0, 0, 0, 0), (1, 1, 1, 1))
    m = catalog.get("lem42").payload
    assert module_weights(m, infer_weights(m.base)) == ((0,),)


def test_rank_one_quotient_kernel():
    m = catalog.get("lem42").payload
    rep = module_kernel_generators(m, 9)
    for p in rep.pieces:
        assert p.kernel_dim == 1
    assert [m.format(z) for _, z in rep.generators[:3]] == ["e", "x*y*e", "x*y^2*e"]


def test_two_generator_quotient_kernel():
    m = catalog.get("lem43", q=2).payload
    rep = module_kernel_generators(m, 8)
    assert [m.format(z) for _, z in rep.generators] == ["e1", "x^2*e2"]
    assert module_kernel_basis(m, (0,)) == [E("e1", m)]


def test_module_kernel_elements_annihilated():
    for cid in ["thm52", "lem43", "lem42"]:
        m = catalog.get(cid).payload
        rep = module_kernel_generators(m, 6)
        for p in rep.pieces:
            for z in p.basis:
                assert not apply_module(m, z)


def test_parse_element_errors():
    m = catalog.get("thm52").payload
    with pytest.raises(ParseError):
        E("e1*e2", m)
    with pytest.raises(ParseError):
        E("x1", m)
