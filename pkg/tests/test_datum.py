"""Cartan data: derived quantities, validation, the admissibility
congruence solver, parameter checks, and PBW dimension."""

from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qha.abgroup import AbelianGroup, GroupAlgebraElement
from qha.cartan import CartanMatrix
from qha.cohomology import CocycleParams, iter_all_params
from qha.cyclotomic import CycloNumber
from qha.datum import (
    CartanDatum,
    dimension,
    gamma_conditions,
    solve_congruence,
    solve_gamma,
    u_alpha,
    validate_datum,
    validate_linking,
    validate_rootparams,
)
from qha.errors import UnsupportedRecursion

A1xA1 = CartanMatrix.make([[2, 0], [0, 2]])


def sl2_like_datum(N=3, d=3):
    """Rank-2 A1 x A1 datum over Z_m, m = N d, with h_1 = h_2 = g^m and
    inverse characters of exponents +-2d."""
    m = N * d
    G = AbelianGroup((m,))
    return CartanDatum(G, ((m,), (m,)), ((2 * d,), (-2 * d,)), A1xA1)


def cyclic_rank1_datum(p=3):
    """Rank-1 datum over Z_p with h = the big generator and chi faithful."""
    G = AbelianGroup((p,))
    return CartanDatum(G, ((1,),), ((1,),), CartanMatrix.make([[2]]))


def test_derived_quantities_sl2():
    D = sl2_like_datum()
    assert D.big_group.orders == (81,)
    assert D.s(0, 0) == 9 and D.s(1, 0) == 9
    assert D.r(0, 0) == 6 and D.r(1, 0) == 75
    assert D.q(0, 0) == CycloNumber.zeta(3, 2)
    assert D.q(0, 1) * D.q(1, 0) == CycloNumber.one()
    assert D.q_order(0) == D.q_order(1) == 3
    assert D.component_orders == (3, 3)
    assert [c.label for c in D.component_types] == ["A1", "A1"]
    assert D.all_positive_roots == ((1, 0), (0, 1))


def test_validate_sl2_datum():
    rep = validate_datum(sl2_like_datum())
    assert rep.ok, rep.failing()
    names = [c.name for c in rep.checks]
    assert "braiding_compatibility" in names
    assert "symmetrized_root_exists" in names
    assert any("0..N_J-1" in note for note in rep.notes)


def test_validate_flags_even_order():
    # chi(G) = zeta_16^2 and h = iota(g) give q_11 = -1 of order 2
    G = AbelianGroup((4,))
    D = CartanDatum(G, ((4,),), ((2,),), CartanMatrix.make([[2]]))
    rep = validate_datum(D)
    assert not rep.ok
    assert any(c.name == "odd_order" and not c.passed for c in rep.checks)


def test_validate_flags_incompatible_braiding():
    # A2 matrix but trivial q_12, q_21 with q_11 != 1
    G = AbelianGroup((9,))
    D = CartanDatum(
        G, ((9,), (0,)), ((2,), (0,)), CartanMatrix.make([[2, -1], [-1, 2]])
    )
    rep = validate_datum(D)
    assert any(c.name == "braiding_compatibility" and not c.passed for c in rep.checks)


def test_validate_reports_non_finite_matrix():
    G = AbelianGroup((3,))
    bad = CartanMatrix((tuple([2, -2]), tuple([-2, 2])))  # bypasses make()
    D = CartanDatum(G, ((0,), (0,)), ((0,), (0,)), bad)
    rep = validate_datum(D)
    assert not rep.ok and rep.checks[0].name == "cartan_matrix"


# -- the congruence solver ----------------------------------------------------


def test_solve_congruence_matches_enumeration():
    for n in range(1, 13):
        for a in range(n):
            for b in range(n):
                sol = solve_congruence(a, b, n)
                expect = {x for x in range(n) if (a * x - b) % n == 0}
                if sol is None:
                    assert expect == set()
                else:
                    base, step = sol
                    assert {x for x in range(n) if x % step == base} == expect


def test_gamma_sl2_progression():
    D = sl2_like_datum(N=3, d=3)
    gam = solve_gamma(D)
    assert [list(p.values()) for p in gam.diag] == [[0, 3, 6]]
    assert gam.size() == 3
    assert gam.canonical_nonzero() == CocycleParams.make(D.base_group, diag=(3,))


def test_gamma_rank1():
    D = cyclic_rank1_datum(3)
    gam = solve_gamma(D)
    assert [list(p.values()) for p in gam.diag] == [[1]]
    assert gam.canonical_nonzero() == CocycleParams.make(D.base_group, diag=(1,))


def test_gamma_trivial_datum_equal_orders():
    # no vertices, equal orders: every parameter with zero triples passes
    G = AbelianGroup((3, 3))
    D = CartanDatum(G, (), (), CartanMatrix.make([]))
    gam = solve_gamma(D)
    assert gam.size() == 27
    assert all(p in gam for p in iter_all_params(G, abelian_only=True))


def test_gamma_conditions_are_reduced():
    for cond in gamma_conditions(sl2_like_datum()):
        assert cond.modulus >= 1
        if cond.solvable and cond.coeff:
            assert gcd(cond.coeff, cond.modulus) == 1


def gamma_bruteforce(D):
    """Direct substitution over the whole parameter space (zero triples)."""
    m = D.base_group.orders
    n = D.base_group.rank
    out = []
    for params in iter_all_params(D.base_group, abelian_only=True):
        pd = params.pair_dict
        ok = all(
            (D.s(i, j) - params.diag[j] * D.r(i, j)) % m[j] == 0
            for i in range(D.theta)
            for j in range(n)
        )
        for i in range(n):
            for j in range(i + 1, n):
                c = pd.get((i, j), 0)
                ok = ok and all(c * D.r(l, j) % m[j] == 0 for l in range(D.theta))
                ok = ok and c * m[i] % m[j] == 0
        if ok:
            out.append(params)
    return out


def test_gamma_matches_bruteforce_sl2():
    D = sl2_like_datum(N=3, d=2)
    gam = solve_gamma(D)
    brute = gamma_bruteforce(D)
    assert sorted(p.diag for p in gam.enumerate_params()) == sorted(
        p.diag for p in brute
    )
    assert all(p in gam for p in brute)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_gamma_matches_bruteforce_random(data):
    orders = data.draw(
        st.lists(st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9]), min_size=1, max_size=3)
    )
    if prod(orders) > 200:
        orders = orders[:1]
    G = AbelianGroup(tuple(orders))
    big = G.doubled()
    theta = data.draw(st.integers(0, 2))
    h = tuple(
        tuple(data.draw(st.integers(0, mm - 1)) for mm in big.orders)
        for _ in range(theta)
    )
    r = tuple(
        tuple(data.draw(st.integers(0, mm - 1)) for mm in big.orders)
        for _ in range(theta)
    )
    matrix = CartanMatrix.make(
        [[2 if i == j else 0 for j in range(theta)] for i in range(theta)]
    )
    D = CartanDatum(G, h, r, matrix)
    gam = solve_gamma(D)
    brute = gamma_bruteforce(D)
    enumerated = list(gam.enumerate_params())
    assert len(enumerated) == gam.size() == len(brute)
    assert sorted(map(repr, enumerated)) == sorted(map(repr, brute))
    for p in brute:
        assert p in gam


# -- linking and root parameters ----------------------------------------------


def test_linking_sl2_valid():
    D = sl2_like_datum()
    rep = validate_linking(D, {(0, 1): 1})
    assert rep.ok, rep.failing()


def test_linking_rejections():
    D = sl2_like_datum()
    assert not validate_linking(D, {(1, 0): 1}).ok  # wrong order
    # connected vertices: use a single A2 component over trivial characters
    G = AbelianGroup((3,))
    D2 = CartanDatum(
        G, ((3,), (3,)), ((0,), (0,)), CartanMatrix.make([[2, -1], [-1, 2]])
    )
    assert not validate_linking(D2, {(0, 1): 1}).ok
    # h_i h_j = 1
    D3 = CartanDatum(sl2_like_datum().base_group, ((9,), (72,)), ((6,), (75,)), A1xA1)
    assert not validate_linking(D3, {(0, 1): 1}).ok
    # chi_i chi_j nontrivial
    D4 = CartanDatum(sl2_like_datum().base_group, ((9,), (9,)), ((6,), (6,)), A1xA1)
    assert not validate_linking(D4, {(0, 1): 1}).ok
    # h_i h_j outside the embedded base group
    D5 = CartanDatum(sl2_like_datum().base_group, ((9,), (10,)), ((6,), (75,)), A1xA1)
    assert not validate_linking(D5, {(0, 1): 1}).ok
    # zero entries are always fine
    assert validate_linking(D5, {(0, 1): 0}).ok


def test_rootparams_and_u_alpha():
    # trivial character, h = iota(g) over Z_9: N = 1, chi^N = eps,
    # h^N = iota(g) != 1 and in the image, so mu at the simple root is fine
    G = AbelianGroup((9,))
    D = CartanDatum(G, ((9,),), ((0,),), CartanMatrix.make([[2]]))
    rep = validate_rootparams(D, {(1,): 5})
    assert rep.ok, rep.failing()
    u = u_alpha(D, {(1,): 5}, (1,))
    one = GroupAlgebraElement.one(G)
    g = GroupAlgebraElement.of_group_element(G, (1,))
    assert u == 5 * (one - g)
    assert u_alpha(D, {}, (1,)).is_zero()


def test_rootparams_rejections():
    # rank-1 over Z_3: h^N = 1 since N = 9 kills the big generator
    D = cyclic_rank1_datum(3)
    assert not validate_rootparams(D, {(1,): 1}).ok
    # sl2-like: chi_1^N is not trivial
    D2 = sl2_like_datum()
    rep = validate_rootparams(D2, {(1, 0): 1})
    assert not rep.ok
    assert any("chi" in c.detail for c in rep.failing())
    # not a positive root
    assert not validate_rootparams(D2, {(2, 0): 1}).ok
    assert validate_rootparams(D2, {(1, 0): 0}).ok


def test_u_alpha_nonsimple_raises():
    G = AbelianGroup((3,))
    D = CartanDatum(
        G, ((0,), (0,)), ((0,), (0,)), CartanMatrix.make([[2, -1], [-1, 2]])
    )
    with pytest.raises(UnsupportedRecursion):
        u_alpha(D, {(1, 1): 1}, (1, 1))
    assert u_alpha(D, {}, (1, 1)).is_zero()


# -- dimension ------------------------------------------------------------------


def test_dimension_examples():
    assert dimension(sl2_like_datum(3, 3)) == 81
    assert dimension(cyclic_rank1_datum(3)) == 27
    G = AbelianGroup((3, 3))
    trivial = CartanDatum(G, (), (), CartanMatrix.make([]))
    assert dimension(trivial) == 9
