from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from psigroups import constructions as cons
from psigroups.errors import GroupError
from psigroups.group import centralizer, direct_product
from psigroups.lattice import find_complement
from psigroups.psi import (
    NINETEEN_43,
    THIRTYONE_77,
    BoundWitness,
    cyclic_lower_bound,
    f_bound,
    find_normal_cyclic_sylow,
    index_bound,
    l_max,
    large_element_witness,
    psi,
    psi_cyclic,
    psi_prime,
    psi_prime_closed_form,
    psi_prime_pstar,
    psi_report,
    semidirect_psi,
    star_bound,
)
from oracles import naive_psi, naive_psi_cyclic

GOLDEN = [
    (lambda: cons.dihedral(8), 19),
    (lambda: cons.cyclic(8), 43),
    (lambda: cons.generalized_quaternion(8), 27),
    (lambda: cons.sym(3), 13),
    (lambda: cons.cyclic(6), 21),
    (lambda: cons.elementary_abelian(2, 2), 7),
    (lambda: cons.cyclic(4), 11),
    (lambda: cons.alt(4), 31),
    (lambda: cons.cyclic(12), 77),
    (lambda: cons.alt(5), 211),
    (lambda: cons.cyclic(60), 1617),
]


@pytest.mark.parametrize("build, value", GOLDEN)
def test_golden_psi(build, value):
    G = build()
    assert psi(G) == value == naive_psi(G.table.tolist())


@given(st.integers(1, 400))
def test_psi_cyclic_closed_form(n):
    assert psi_cyclic(n) == naive_psi_cyclic(n)


def test_psi_cyclic_rejects_zero():
    with pytest.raises(ValueError):
        psi_cyclic(0)


def test_psi_prime_values():
    assert psi_prime(cons.dihedral(8)) == NINETEEN_43
    assert psi_prime(cons.alt(4)) == THIRTYONE_77
    assert psi_prime(cons.alt(5)) == Fraction(211, 1617)
    assert psi_prime(cons.generalized_quaternion(8)) == Fraction(27, 43)
    assert psi_prime(cons.elementary_abelian(2, 2)) == Fraction(7, 11)
    assert psi_prime(cons.sym(3)) == Fraction(13, 21)
    assert psi_prime(cons.generalized_quaternion(16)) == Fraction(25, 57)
    assert psi_prime(cons.cyclic(30)) == 1


def test_five_groups():
    assert [psi(cons.quintet(v)) for v in cons.QUINTET_VARIANTS] == [243, 553, 87, 99, 265]


def test_psi_report():
    r = psi_report(cons.dihedral(8))
    assert (r.order, r.psi, r.psi_cyclic_same_order, r.psi_prime) == (8, 19, 43, NINETEEN_43)


BUILDERS = {
    "KLEIN_CYCLIC": lambda k: direct_product(cons.cyclic(2 ** (k - 1)), cons.cyclic(2)),
    "MODULAR_M2": lambda k: cons.modular_group(2, k),
    "DIHEDRAL2": lambda k: cons.dihedral(2**k),
    "QUATERNION2": lambda k: cons.generalized_quaternion(2**k),
    "SEMIDIHEDRAL2": lambda k: cons.semidihedral(2**k),
}


@pytest.mark.parametrize("family", sorted(BUILDERS))
def test_closed_forms_small(family):
    kmin = {"KLEIN_CYCLIC": 2, "MODULAR_M2": 4, "DIHEDRAL2": 3, "QUATERNION2": 3, "SEMIDIHEDRAL2": 4}[family]
    for k in range(kmin, 7):
        assert psi_prime_closed_form(family, k) == psi_prime(BUILDERS[family](k))


def test_closed_form_known_values():
    assert psi_prime_closed_form("KLEIN_CYCLIC", 2) == Fraction(7, 11)
    assert psi_prime_closed_form("KLEIN_CYCLIC", 3) == Fraction(23, 43)
    assert psi_prime_closed_form("DIHEDRAL2", 3) == NINETEEN_43
    assert psi_prime_closed_form("QUATERNION2", 3) == Fraction(27, 43)
    assert psi_prime_closed_form("QUATERNION2", 4) == Fraction(25, 57)
    with pytest.raises(ValueError):
        psi_prime_closed_form("MODULAR_M2", 3)
    with pytest.raises(ValueError):
        psi_prime_closed_form("OTHER", 5)


def test_closed_forms_decrease_to_one_half():
    # the Klein and modular families approach 1/2 from above
    vals = [psi_prime_closed_form("MODULAR_M2", k) for k in range(4, 40)]
    assert all(a > b > Fraction(1, 2) for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("p, n, k", [(3, 1, 1), (3, 1, 2), (5, 1, 1), (5, 1, 3), (7, 1, 1), (3, 2, 1), (7, 2, 2)])
def test_pstar_closed_form_small(p, n, k):
    assert psi_prime_pstar(p, n, k) == psi_prime(cons.p_star(p, n, 2, k))


def test_pstar_values_and_errors():
    assert psi_prime_pstar(7, 1, 1) == NINETEEN_43
    assert psi_prime_pstar(5, 1, 3) == Fraction(391, 903)
    assert psi_prime_pstar(5, 1, 1) == Fraction(31, 63)
    with pytest.raises(ValueError):
        psi_prime_pstar(2, 1, 1)
    with pytest.raises(ValueError):
        psi_prime_pstar(9, 1, 1)
    with pytest.raises(ValueError):
        psi_prime_pstar(3, 0, 1)


def test_f_bound():
    assert f_bound(2) == Fraction(7, 11)
    assert f_bound(3) == psi_prime(cons.elementary_abelian(3, 2))
    assert f_bound(5) == psi_prime(cons.elementary_abelian(5, 2))
    with pytest.raises(ValueError):
        f_bound(4)


def test_semidirect_psi_formula():
    D10 = cons.dihedral(10)
    assert semidirect_psi(5, psi_cyclic(5), 3, 1) == psi(D10)
    G = cons.rtimes_iota(cons.cyclic(3), 4)
    # C_H(P) is the subgroup of order 2 of C4
    assert semidirect_psi(3, psi_cyclic(3), psi_cyclic(4), psi_cyclic(2)) == psi(G)


def test_index_bound_and_witness():
    assert index_bound(12, NINETEEN_43) == Fraction(3, 2) * Fraction(4, 3) * Fraction(43, 19)
    assert index_bound(12, NINETEEN_43, t=1) == Fraction(4, 2) * Fraction(43, 19)
    assert index_bound(1, Fraction(1, 2)) == 2
    with pytest.raises(ValueError):
        index_bound(12, NINETEEN_43, t=3)
    w = large_element_witness(cons.generalized_quaternion(8), NINETEEN_43)
    assert w.index == 2 and w.index < w.bound
    with pytest.raises(GroupError):
        # psi'(Q16) = 25/57 is below 19/43, so the precondition fails
        large_element_witness(cons.generalized_quaternion(16), NINETEEN_43)
    with pytest.raises(GroupError):
        BoundWitness(0, 5, Fraction(3))


@given(st.integers(2, 3000))
def test_cyclic_lower_bounds(n):
    from psigroups.numeric import prime_divisors

    for variant in ("product", "extremal"):
        assert cyclic_lower_bound(n, variant) < psi_cyclic(n)
    for t in range(1, len(prime_divisors(n)) + 1):
        assert cyclic_lower_bound(n, "truncated", t) < psi_cyclic(n)


def test_cyclic_lower_bound_errors():
    with pytest.raises(ValueError):
        cyclic_lower_bound(1)
    with pytest.raises(ValueError):
        cyclic_lower_bound(12, "truncated")
    with pytest.raises(ValueError):
        cyclic_lower_bound(12, "other")


def test_l_max():
    assert l_max(cons.generalized_quaternion(8)) == 11
    assert l_max(cons.rtimes_iota(cons.cyclic(3), 4)) == 21
    assert l_max(cons.cyclic(12)) == 21
    with pytest.raises(GroupError):
        l_max(cons.cyclic(1))


def test_star_bound():
    D10 = cons.dihedral(10)
    P = find_normal_cyclic_sylow(D10, 5)
    H = find_complement(D10, P)
    assert star_bound(D10, P, H) == Fraction(31, 63) == psi_prime(D10)
    G = cons.rtimes_iota(cons.cyclic(3), 4)
    P = find_normal_cyclic_sylow(G, 3)
    H = find_complement(G, P)
    assert star_bound(G, P, H) == Fraction(45, 77)
    C6 = cons.cyclic(6)
    P = find_normal_cyclic_sylow(C6, 3)
    with pytest.raises(GroupError, match="centralizes"):
        star_bound(C6, P, find_complement(C6, P))
    with pytest.raises(GroupError):
        star_bound(G, P, P)


def test_find_normal_cyclic_sylow():
    assert find_normal_cyclic_sylow(cons.alt(4), 2) is None  # normal but not cyclic
    assert find_normal_cyclic_sylow(cons.alt(4), 3) is None  # cyclic but not normal
    assert find_normal_cyclic_sylow(cons.alt(4), 5) is None
    P = find_normal_cyclic_sylow(cons.dihedral(14), 7)
    assert len(P) == 7
    assert len(centralizer(cons.dihedral(14), P)) == 7
