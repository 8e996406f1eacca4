"""Standard 3-cocycle representatives, cochain calculus, coboundary
decisions, and the doubled-group gauge cochain."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qha.abgroup import AbelianGroup, Doubling
from qha.cohomology import (
    Cochain3,
    CocycleParams,
    coboundary3,
    coboundary_family,
    group_index,
    is_3cocycle,
    is_coboundary,
    iter_all_params,
    j_cochain,
    omega_cochain,
    phi_cochain,
    pullback3,
    sigma,
)
from qha.cyclotomic import zeta
from qha.errors import GroupMismatch, NonAbelianParams

Z3 = AbelianGroup((3,))
Z9 = AbelianGroup((9,))
Z33 = AbelianGroup((3, 3))
Z39 = AbelianGroup((3, 9))
Z333 = AbelianGroup((3, 3, 3))


def untagged(c: Cochain3) -> Cochain3:
    return Cochain3(c.group, c.conductor, c.table)


# -- frozen representative values ---------------------------------------------


def test_phi_diagonal_frozen_values():
    phi = phi_cochain(CocycleParams.make(Z3, (1,)))
    # carry of (2,2) is 1, last argument supplies the multiplier
    assert phi.value((2,), (2,), (2,)) == zeta(3, 2)
    assert phi.value((2,), (2,), (1,)) == zeta(3, 1)
    assert phi.value((1,), (1,), (2,)) == zeta(3, 0)  # carry of (1,1) is 0
    assert phi.value((0,), (2,), (2,)) == zeta(3, 0)
    phi2 = phi_cochain(CocycleParams.make(Z3, (2,)))
    assert phi2.value((2,), (2,), (2,)) == zeta(3, 4)


def test_phi_pair_frozen_values():
    phi = phi_cochain(CocycleParams.make(Z33, (0, 0), pair={(0, 1): 1}))
    assert phi.value((2, 0), (2, 0), (0, 1)) == zeta(3, 1)
    assert phi.value((2, 0), (2, 0), (0, 2)) == zeta(3, 2)
    assert phi.value((2, 0), (2, 0), (1, 0)) == zeta(3, 0)
    assert phi.value((1, 0), (1, 0), (0, 2)) == zeta(3, 0)


def test_phi_triple_frozen_values():
    phi = phi_cochain(
        CocycleParams.make(Z333, (0, 0, 0), triple={(0, 1, 2): 1})
    )
    assert phi.value((1, 0, 0), (0, 1, 0), (0, 0, 1)) == zeta(3, 1)
    assert phi.value((2, 0, 0), (0, 2, 0), (0, 0, 2)) == zeta(3, 8)
    om = omega_cochain(
        CocycleParams.make(Z333, (0, 0, 0), triple={(0, 1, 2): 1})
    )
    # omega reads the triple multipliers in reversed argument order
    assert om.value((1, 0, 0), (0, 1, 0), (0, 0, 1)) == zeta(3, 0)
    assert om.value((0, 0, 1), (0, 1, 0), (1, 0, 0)) == zeta(3, 1)


def test_phi_is_normalized():
    for group, params in [
        (Z3, CocycleParams.make(Z3, (2,))),
        (Z39, CocycleParams.make(Z39, (1, 5), pair={(0, 1): 2})),
        (Z333, CocycleParams.make(Z333, (1, 2, 1), triple={(0, 1, 2): 2})),
    ]:
        phi = phi_cochain(params)
        n = group.size
        t = phi.table.reshape(n, n, n)
        e = group_index(group).index(group.identity)
        assert not (t[e, :, :] % phi.conductor).any()
        assert not (t[:, e, :] % phi.conductor).any()
        assert not (t[:, :, e] % phi.conductor).any()


# -- sigma ---------------------------------------------------------------------


def test_sigma_of_omega_is_phi():
    cases = [
        CocycleParams.make(Z3, (1,)),
        CocycleParams.make(Z9, (7,)),
        CocycleParams.make(Z39, (2, 8), pair={(0, 1): 1}),
        CocycleParams.make(Z333, (1, 0, 2), pair={(0, 2): 2}, triple={(0, 1, 2): 1}),
        CocycleParams.make(AbelianGroup((2, 4)), (1, 3), pair={(0, 1): 1}),
    ]
    for params in cases:
        assert sigma(omega_cochain(params)) == phi_cochain(params)


def test_sigma_is_an_involution():
    rng = np.random.default_rng(7)
    t = rng.integers(0, 9, size=Z33.size**3)
    c = Cochain3(Z33, 9, t)
    assert sigma(sigma(c)) == c
    assert sigma(c).value((1, 0), (2, 1), (0, 2)) == c.value((0, 2), (2, 1), (1, 0))


# -- cocycle identity -----------------------------------------------------------


def test_every_standard_representative_is_a_cocycle_small():
    for group in [AbelianGroup((2, 2)), AbelianGroup((4,)), Z3]:
        for params in iter_all_params(group):
            assert is_3cocycle(phi_cochain(params))
            assert is_3cocycle(omega_cochain(params))


def test_perturbed_table_is_not_a_cocycle():
    phi = phi_cochain(CocycleParams.make(Z3, (1,)))
    t = phi.table.copy()
    gi = group_index(Z3)
    i = (gi.index((1,)) * 3 + gi.index((1,))) * 3 + gi.index((1,))
    t[i] += 1
    assert not is_3cocycle(Cochain3(Z3, 3, t))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_random_params_give_cocycles(data):
    orders = tuple(data.draw(st.lists(st.sampled_from([1, 2, 3, 4, 6]), min_size=1, max_size=2)))
    group = AbelianGroup(orders)
    diag = [data.draw(st.integers(0, 23)) for _ in orders]
    pair = {}
    if group.rank == 2:
        pair[(0, 1)] = data.draw(st.integers(0, 23))
    params = CocycleParams.make(group, diag, pair)
    assert is_3cocycle(phi_cochain(params))


# -- coboundary decisions --------------------------------------------------------


def test_fast_path_uses_parameter_tag():
    assert is_coboundary(phi_cochain(CocycleParams.make(Z3, (0,))))
    assert not is_coboundary(phi_cochain(CocycleParams.make(Z3, (1,))))
    assert not is_coboundary(phi_cochain(CocycleParams.make(Z3, (2,))))


def test_solver_classifies_z3_representatives():
    for c in range(3):
        phi = untagged(phi_cochain(CocycleParams.make(Z3, (c,))))
        ok, w = is_coboundary(phi, return_witness=True)
        assert ok == (c == 0)
        if ok:
            assert coboundary3(w) == phi


def test_solver_accepts_actual_coboundaries_with_witness():
    from qha.cohomology import Cochain2

    rng = np.random.default_rng(3)
    for group in [Z3, AbelianGroup((2, 2))]:
        n = group.size
        M = 2 * group.exponent
        j = Cochain2(group, M, rng.integers(0, M, size=n * n))
        dj = coboundary3(j)
        ok, w = is_coboundary(dj, return_witness=True)
        assert ok
        assert coboundary3(w) == dj


def test_family_solver_agrees_with_classification():
    for group in [Z3, Z9, AbelianGroup((2, 2)), AbelianGroup((2, 4))]:
        fam = coboundary_family(group)
        for params in iter_all_params(group):
            expect = params.is_zero()
            assert fam.is_coboundary(params) == expect
            assert fam.is_coboundary_by_conditions(params) == expect


def test_family_matches_single_shot_solver():
    group = AbelianGroup((2, 2))
    fam = coboundary_family(group)
    for params in iter_all_params(group):
        assert fam.is_coboundary(params) == is_coboundary(
            untagged(phi_cochain(params))
        )


# -- doubled-group gauge cochain ---------------------------------------------------


def test_gauge_cochain_frozen_values():
    dbl = Doubling(Z3)
    j = j_cochain(dbl, CocycleParams.make(Z3, (1,)))
    assert j.conductor == 9
    assert j.value((4,), (1,)) == zeta(9, -3)
    assert j.value((3,), (1,)) == zeta(9, -3)
    assert j.value((1,), (1,)) == zeta(9, 0)
    assert j.value((4,), (2,)) == zeta(9, -6)
    assert j.is_normalized()


def test_gauge_cochain_coboundary_is_pulled_back_phi():
    Z22 = AbelianGroup((2, 2))
    cases = [
        (Z3, CocycleParams.make(Z3, (1,))),
        (Z3, CocycleParams.make(Z3, (2,))),
        (AbelianGroup((5,)), CocycleParams.make(AbelianGroup((5,)), (3,))),
        (AbelianGroup((6,)), CocycleParams.make(AbelianGroup((6,)), (5,))),
        (Z33, CocycleParams.make(Z33, (1, 2), pair={(0, 1): 2})),
        (Z22, CocycleParams.make(Z22, (1, 1), pair={(0, 1): 1})),
        (AbelianGroup((2, 4)), CocycleParams.make(AbelianGroup((2, 4)), (1, 3))),
    ]
    for group, params in cases:
        dbl = Doubling(group)
        assert coboundary3(j_cochain(dbl, params)) == pullback3(dbl, phi_cochain(params))


def test_gauge_cochain_needs_pair_divisibility():
    from qha.errors import GammaViolation

    z24 = AbelianGroup((2, 4))
    with pytest.raises(GammaViolation):
        j_cochain(Doubling(z24), CocycleParams.make(z24, (0, 0), pair={(0, 1): 1}))
    with pytest.raises(GammaViolation):
        j_cochain(Doubling(Z39), CocycleParams.make(Z39, (0, 0), pair={(0, 1): 1}))


def test_gauge_cochain_rejects_triple_parameters():
    dbl = Doubling(Z333)
    params = CocycleParams.make(Z333, (0, 0, 0), triple={(0, 1, 2): 1})
    with pytest.raises(NonAbelianParams):
        j_cochain(dbl, params)


def test_gauge_cochain_rejects_wrong_group():
    with pytest.raises(GroupMismatch):
        j_cochain(Doubling(Z3), CocycleParams.make(Z9, (1,)))


# -- misc ------------------------------------------------------------------------


def test_cochain_equality_across_conductors():
    phi = phi_cochain(CocycleParams.make(Z3, (1,)))
    doubled = Cochain3(Z3, 6, (phi.table * 2) % 6)
    assert phi == doubled
    assert not (phi == Cochain3(Z3, 3, (phi.table + 1) % 3))


def test_params_normalization_and_validation():
    p = CocycleParams.make(Z39, (4, 11), pair={(0, 1): 5})
    assert p.diag == (1, 2)
    assert p.pair_dict == {(0, 1): 2}
    assert p.is_abelian() and not p.is_zero()
    with pytest.raises(ValueError):
        CocycleParams.make(Z39, (1,))
    with pytest.raises(ValueError):
        CocycleParams.make(Z39, (0, 0), pair={(1, 0): 1})
    assert len(list(iter_all_params(Z33))) == 27
    assert len(list(iter_all_params(Z39))) == 81
    assert len(list(iter_all_params(Z333))) == 3**7
    assert len(list(iter_all_params(Z333, abelian_only=True))) == 3**6
