import numpy as np
import pytest
from hypothesis import given, strategies as st

from psigroups import config
from psigroups import constructions as cons
from psigroups.errors import GroupError, ResourceLimitError
from psigroups.group import (
    ActionSpec,
    FiniteGroup,
    SubgroupSet,
    automorphism_group,
    center,
    centralizer,
    closure,
    conjugate,
    core,
    cyclic_subgroup,
    derived_subgroup,
    direct_product,
    find_isomorphism,
    fingerprint,
    generated_subgroup,
    has_normal_sylow,
    homomorphisms,
    is_isomorphic,
    is_maximal_subgroup,
    is_nilpotent,
    is_normal,
    is_soluble,
    is_supersoluble,
    join,
    mask_of,
    meet,
    normal_hall_subgroup,
    quotient,
    semidirect_product,
    subgroup_generators,
    sylow_subgroup,
    trivial_action,
)
from oracles import is_group_table, naive_isomorphic, naive_order, naive_span

SMALL = [
    cons.cyclic(1), cons.cyclic(6), cons.elementary_abelian(2, 2), cons.sym(3), cons.dihedral(8),
    cons.generalized_quaternion(8), cons.alt(4), cons.rtimes_iota(cons.cyclic(3), 4),
    cons.dihedral(10), cons.elementary_abelian(3, 2),
]


def relabel(G: FiniteGroup, perm) -> FiniteGroup:
    """The same group with element ``x`` renamed ``perm[x]`` (``perm[0] == 0``)."""
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    t = perm[G.table[np.ix_(inv, inv)]]
    return FiniteGroup(t)


@st.composite
def relabelled(draw, groups=SMALL):
    G = draw(st.sampled_from(groups))
    rest = draw(st.permutations(list(range(1, G.order))))
    return G, relabel(G, [0] + list(rest))


def test_table_validation():
    with pytest.raises(GroupError, match="identity"):
        FiniteGroup([[1, 0], [0, 1]])
    with pytest.raises(GroupError, match="Latin"):
        FiniteGroup([[0, 1, 2], [1, 1, 0], [2, 0, 1]])
    with pytest.raises(GroupError, match="range"):
        FiniteGroup([[0, 5], [1, 0]])
    with pytest.raises(GroupError):
        FiniteGroup(np.zeros((2, 3), dtype=int))
    # a Latin square with identity that is not associative (a loop of order 5)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError, match="associative"):
        FiniteGroup(loop)


def test_sampled_associativity_above_threshold():
    G = cons.dihedral(12)
    with config.override(full_assoc_check=4, assoc_samples=500):
        FiniteGroup(G.table)


def test_table_is_read_only():
    G = cons.cyclic(4)
    with pytest.raises(ValueError):
        G.table[0, 0] = 1


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_orders_and_inverses_match_naive(G):
    assert list(G.orders) == [naive_order(G.table, x) for x in range(G.order)]
    for x in range(G.order):
        assert G.mul(x, int(G.inverse[x])) == 0
    assert is_group_table(G.table.tolist())


def test_power_and_conj():
    G = cons.dihedral(8)
    for x in range(8):
        assert G.power(x, G.orders[x]) == 0
        assert G.power(x, -1) == G.inverse[x]
        assert G.power(x, 0) == 0
    assert all(G.conj(x, 0) == x for x in range(8))


def test_basic_predicates():
    assert cons.cyclic(12).is_cyclic
    assert not cons.elementary_abelian(2, 2).is_cyclic
    assert cons.elementary_abelian(2, 3).is_abelian
    assert not cons.sym(3).is_abelian
    assert cons.generalized_quaternion(8).exponent == 4
    assert cons.cyclic(1).is_cyclic


def test_subgroup_set_operations():
    G = cons.dihedral(8)
    H = cyclic_subgroup(G, 1)
    assert len(H) == H.order == max(G.orders)
    H.check()
    assert G.identity_subgroup() <= H <= G.whole()
    assert G.identity_subgroup() < H < G.whole()
    K = generated_subgroup(G, [x for x in range(8) if G.orders[x] == 2][:1])
    J = join(G, H, K)
    assert J.mask == mask_of(naive_span(G.table.tolist(), set(H) | set(K)))
    assert meet(H, K).mask == H.mask & K.mask
    assert len(SubgroupSet(G, 1)) == 1
    with pytest.raises(IndexError):
        generated_subgroup(G, [9])
    bad = SubgroupSet(G, mask_of([0, 1]))
    if G.orders[1] > 2:
        with pytest.raises(GroupError):
            bad.check()


@given(relabelled())
def test_closure_matches_naive_span(pair):
    _, G = pair
    for gens in ([1], [1, G.order - 1], list(range(G.order))):
        gens = [g for g in gens if g < G.order]
        assert set(closure(G, gens)) == set(naive_span(G.table.tolist(), gens))


def test_normality_core_center_centralizer():
    S3 = cons.sym(3)
    t = S3.table
    invs = [x for x in range(6) if S3.orders[x] == 2]
    T = cyclic_subgroup(S3, invs[0])
    assert not is_normal(S3, T)
    assert len(core(S3, T)) == 1
    A3 = cyclic_subgroup(S3, next(x for x in range(6) if S3.orders[x] == 3))
    assert is_normal(S3, A3) and core(S3, A3) == A3
    assert len(center(S3)) == 1
    assert len(center(cons.generalized_quaternion(8))) == 2
    assert len(center(cons.dihedral(8))) == 2
    assert centralizer(S3, A3) == A3
    conjugates = {conjugate(S3, T, g).mask for g in range(6)}
    assert len(conjugates) == 3
    assert all(t[g, t[h, S3.inverse[g]]] in conjugate(S3, T, g) for g in range(6) for h in T)


def test_derived_and_solubility():
    assert len(derived_subgroup(cons.alt(4))) == 4
    assert len(derived_subgroup(cons.sym(3))) == 3
    assert len(derived_subgroup(cons.cyclic(10))) == 1
    assert is_soluble(cons.alt(4)) and not is_supersoluble(cons.alt(4))
    assert not is_soluble(cons.alt(5))
    assert is_supersoluble(cons.sym(3)) and not is_nilpotent(cons.sym(3))
    assert is_nilpotent(cons.dihedral(8))
    assert is_supersoluble(cons.sym(4)) is False
    assert is_supersoluble(cons.dihedral(18))


def test_sylow_and_hall():
    A4 = cons.alt(4)
    P = sylow_subgroup(A4, 2)
    assert len(P) == 4 and is_normal(A4, P)
    assert has_normal_sylow(A4, 2) and not has_normal_sylow(A4, 3)
    assert len(sylow_subgroup(A4, 3)) == 3
    S4 = cons.sym(4)
    assert len(sylow_subgroup(S4, 2)) == 8
    H = normal_hall_subgroup(cons.dihedral(10), [5])
    assert H is not None and len(H) == 5
    assert normal_hall_subgroup(cons.sym(3), [2]) is None


def test_maximal_subgroups():
    G = cons.dihedral(8)
    H = cyclic_subgroup(G, 1)
    assert is_maximal_subgroup(G, H)
    assert not is_maximal_subgroup(G, G.whole())
    assert not is_maximal_subgroup(G, G.identity_subgroup())


def test_subgroup_generators():
    G = cons.elementary_abelian(2, 3)
    gens = subgroup_generators(G, G.whole())
    assert len(gens) == 3
    assert len(closure(G, gens)) == 8


def test_quotient():
    Q8 = cons.generalized_quaternion(8)
    Z = center(Q8)
    Qz = quotient(Q8, Z)
    assert Qz.order == 4 and is_isomorphic(Qz, cons.elementary_abelian(2, 2))
    with pytest.raises(GroupError):
        quotient(cons.sym(3), cyclic_subgroup(cons.sym(3), next(x for x in range(6) if cons.sym(3).orders[x] == 2)))
    assert is_group_table(Qz.table.tolist())


def test_direct_product():
    G = direct_product(cons.cyclic(2), cons.cyclic(3))
    assert G.order == 6 and G.is_cyclic
    assert is_group_table(G.table.tolist())
    with config.override(table_cap=10):
        with pytest.raises(ResourceLimitError):
            direct_product(cons.cyclic(4), cons.cyclic(3))


def test_semidirect_product():
    C3, C2 = cons.cyclic(3), cons.cyclic(2)
    inv = np.array([[0, 1, 2], [0, 2, 1]])
    G = semidirect_product(ActionSpec(C2, C3, inv))
    assert is_isomorphic(G, cons.sym(3))
    assert is_group_table(G.table.tolist())
    T = semidirect_product(trivial_action(C2, C3))
    assert T.is_cyclic
    with pytest.raises(GroupError, match="automorphism"):
        semidirect_product(ActionSpec(C2, C3, np.array([[0, 1, 2], [1, 0, 2]])))
    with pytest.raises(GroupError, match="homomorphism"):
        # C3 acting by inversion is not an action
        semidirect_product(ActionSpec(C3, C3, np.array([[0, 1, 2], [0, 2, 1], [0, 2, 1]])))
    with pytest.raises(GroupError, match="shape"):
        semidirect_product(ActionSpec(C2, C3, np.zeros((3, 3), dtype=int)))


@given(relabelled())
def test_isomorphism_under_relabelling(pair):
    G, H = pair
    assert fingerprint(G) == fingerprint(H)
    f = find_isomorphism(G, H)
    assert f is not None
    assert all(f[G.mul(a, b)] == H.mul(f[a], f[b]) for a in range(G.order) for b in range(G.order))


def test_non_isomorphic_pairs():
    assert not is_isomorphic(cons.dihedral(8), cons.generalized_quaternion(8))
    assert not is_isomorphic(cons.cyclic(4), cons.elementary_abelian(2, 2))
    assert not is_isomorphic(cons.cyclic(6), cons.sym(3))
    assert find_isomorphism(cons.cyclic(4), cons.cyclic(5)) is None


def test_isomorphism_agrees_with_naive_order8():
    groups = [cons.cyclic(8), direct_product(cons.cyclic(4), cons.cyclic(2)), cons.elementary_abelian(2, 3),
              cons.dihedral(8), cons.generalized_quaternion(8)]
    for A in groups:
        for B in groups:
            assert is_isomorphic(A, B) == naive_isomorphic(A.table.tolist(), B.table.tolist())


def test_homomorphism_counts():
    # Hom(C4, C2 x C2) has 4 elements; Hom(C2, S3) has 4 (identity plus three involutions)
    assert len(list(homomorphisms(cons.cyclic(4), cons.elementary_abelian(2, 2)))) == 4
    assert len(list(homomorphisms(cons.cyclic(2), cons.sym(3)))) == 4
    assert len(list(homomorphisms(cons.cyclic(3), cons.cyclic(2)))) == 1


@pytest.mark.parametrize("G, n", [
    (cons.cyclic(8), 4), (cons.elementary_abelian(2, 2), 6), (cons.generalized_quaternion(8), 24),
    (cons.dihedral(8), 8), (cons.cyclic(7), 6), (cons.sym(3), 6),
])
def test_automorphism_group_orders(G, n):
    A, perms = automorphism_group(G)
    assert A.order == n == len(perms)
    assert (perms[0] == np.arange(G.order)).all()
    assert is_group_table(A.table.tolist())
