"""Abelian groups, characters, idempotents, doubling."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qha.abgroup import AbelianGroup, Doubling, GroupAlgebraElement, reduce_with_defect
from qha.cyclotomic import CycloNumber, zeta
from qha.errors import GroupMismatch


def test_group_basics():
    G = AbelianGroup((3, 9))
    assert G.size == 27
    assert G.exponent == 9
    assert G.mul((2, 8), (2, 3)) == (1, 2)
    assert G.inv((1, 4)) == (2, 5)
    assert G.pow((1, 2), 5) == (2, 1)
    assert G.element_order((0, 3)) == 3
    assert G.element_order((1, 1)) == 9
    assert list(AbelianGroup((2, 2)).elements()) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_reduce_with_defect():
    assert reduce_with_defect(4, 3) == (1, -3)
    assert reduce_with_defect(-2, 3) == (1, 3)
    assert reduce_with_defect(2, 3) == (2, 0)
    assert reduce_with_defect(0, 5) == (0, 0)


def test_character_values():
    G = AbelianGroup((3,))
    assert G.chi((1,), (1,)) == zeta(3)
    assert G.chi((2,), (2,)) == zeta(3, 1)
    G2 = AbelianGroup((3, 9))
    # chi_(1,1)((1,1)) = zeta_3 * zeta_9 = zeta_9^4
    assert G2.chi((1, 1), (1, 1)) == zeta(9, 4)


def test_character_bilinearity():
    G = AbelianGroup((3, 4))
    for g in G.elements():
        for h in G.elements():
            for k in G.elements():
                assert G.chi(g, G.mul(h, k)) == G.chi(g, h) * G.chi(g, k)
                assert G.chi(G.mul(g, h), k) == G.chi(g, k) * G.chi(h, k)


def test_character_orthogonality():
    G = AbelianGroup((3, 3))
    one = CycloNumber.zero()
    for g in G.elements():
        s = sum((G.chi(g, h) for h in G.elements()), CycloNumber.zero())
        expected = G.size if g == G.identity else 0
        assert s == expected


def test_idempotent_frozen_z3():
    # 1_g for G = Z_3, g = (1): (1/3)(1 + z h + z^2 h^2)
    G = AbelianGroup((3,))
    e = GroupAlgebraElement.idempotent(G, (1,))
    assert e.coeffs[(0,)] == Q(1, 3)
    assert e.coeffs[(1,)] == Q(1, 3) * zeta(3)
    assert e.coeffs[(2,)] == Q(1, 3) * zeta(3, 2)


@pytest.mark.parametrize("orders", [(3,), (2, 2), (3, 3), (9,)])
def test_idempotent_system(orders):
    G = AbelianGroup(orders)
    idems = {g: GroupAlgebraElement.idempotent(G, g) for g in G.elements()}
    # orthogonality and resolution of identity
    total = GroupAlgebraElement(G)
    for g, eg in idems.items():
        total = total + eg
        assert eg * eg == eg
    assert total == GroupAlgebraElement.one(G)
    ga, gb = list(G.elements())[0], list(G.elements())[1]
    assert (idems[ga] * idems[gb]).is_zero()
    # absorption: 1_g * h = chi_g(h)^{-1} * 1_g
    for g in list(G.elements())[:4]:
        for h in list(G.elements())[:4]:
            lhs = idems[g] * GroupAlgebraElement.of_group_element(G, h)
            rhs = G.chi(g, h).inverse() * idems[g]
            assert lhs == rhs


def test_doubling_maps():
    G = AbelianGroup((3, 5))
    D = Doubling(G)
    assert D.big.orders == (9, 25)
    assert D.iota((1, 2)) == (3, 10)
    assert D.bar((4, 11)) == (1, 1)
    # bar(iota(g)) is the identity map's kernel condition: iota lands in ker(bar)
    for g in G.elements():
        assert D.bar(D.iota(g)) == G.identity
        assert D.in_iota_image(D.iota(g))
        assert D.iota_preimage(D.iota(g)) == g
    assert not D.in_iota_image((1, 0))
    with pytest.raises(ValueError):
        D.iota_preimage((1, 0))
    # kernel of bar is exactly the image of iota
    ker = [f for f in D.big.elements() if D.bar(f) == G.identity]
    assert sorted(ker) == sorted(D.iota(g) for g in G.elements())


def test_group_mismatch():
    a = GroupAlgebraElement.one(AbelianGroup((3,)))
    b = GroupAlgebraElement.one(AbelianGroup((5,)))
    with pytest.raises(GroupMismatch):
        a * b
    with pytest.raises(GroupMismatch):
        AbelianGroup((3,)).normalize((1, 2))


@settings(max_examples=50, deadline=None)
@given(
    st.sampled_from([(3,), (4,), (2, 3), (3, 3)]),
    st.data(),
)
def test_chi_exponent_matches_chi(orders, data):
    G = AbelianGroup(orders)
    els = list(G.elements())
    g = data.draw(st.sampled_from(els))
    h = data.draw(st.sampled_from(els))
    assert G.chi(g, h) == CycloNumber.zeta(G.exponent, G.chi_exponent(g, h))
    # chi_g(h) = chi_h(g) by symmetry of the pairing
    assert G.chi_exponent(g, h) == G.chi_exponent(h, g)
