"""Subgroup lattices, Dedekind's modular law and M-group structure recognition."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from psigroups import config
from psigroups.errors import GroupError, ResourceLimitError
from psigroups.group import (
    FiniteGroup,
    SubgroupSet,
    closure,
    direct_product,
    find_isomorphism,
    is_normal,
    mask_of,
    normal_hall_subgroup,
    pi_elements,
)
from psigroups.numeric import factorize, is_prime, multiplicative_order


@dataclass(eq=False)
class SubgroupLattice:
    group: FiniteGroup
    nodes: list[SubgroupSet]
    generators: list[list[int]]

    def __len__(self) -> int:
        return len(self.nodes)

    @cached_property
    def index(self) -> dict[int, int]:
        return {H.mask: i for i, H in enumerate(self.nodes)}

    @cached_property
    def membership(self) -> np.ndarray:
        B = np.zeros((len(self.nodes), self.group.order), dtype=bool)
        for i, H in enumerate(self.nodes):
            B[i, H.elements] = True
        return B

    @cached_property
    def contains(self) -> np.ndarray:
        """``contains[i, j]`` iff node ``i`` is a subgroup of node ``j``."""
        B = self.membership.astype(np.float32)
        outside = (~self.membership).astype(np.float32)
        return (B @ outside.T) == 0

    @cached_property
    def meet_table(self) -> np.ndarray:
        N = len(self.nodes)
        masks = [H.mask for H in self.nodes]
        t = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            for j in range(i, N):
                t[i, j] = t[j, i] = self.index[masks[i] & masks[j]]
        return t

    @cached_property
    def join_table(self) -> np.ndarray:
        # nodes are sorted by size, so the first common upper bound is the join
        C = self.contains
        N = len(self.nodes)
        t = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            t[i] = np.argmax(C[i][None, :] & C, axis=1)
        return t

    def node(self, H: SubgroupSet) -> int:
        return self.index[H.mask]

    def meet(self, i: int, j: int) -> int:
        return int(self.meet_table[i, j])

    def join(self, i: int, j: int) -> int:
        return int(self.join_table[i, j])

    @cached_property
    def maximal(self) -> list[SubgroupSet]:
        top = len(self.nodes) - 1
        C = self.contains.copy()
        np.fill_diagonal(C, False)
        proper = [i for i in range(top)]
        out = []
        for i in proper:
            above = np.flatnonzero(C[i])
            if len(above) == 1 and above[0] == top:
                out.append(self.nodes[i])
        return out

    @cached_property
    def normal(self) -> list[SubgroupSet]:
        return [H for H in self.nodes if is_normal(self.group, H)]


def all_subgroups(G: FiniteGroup) -> SubgroupLattice:
    """Every subgroup, from the cyclic ones closed under joins with cyclics."""
    cap = config.LIMITS.lattice_cap
    if G.order > cap:
        raise ResourceLimitError(f"lattice of a group of order {G.order} exceeds the cap {cap}")
    cyclic: dict[int, int] = {}
    for x in range(G.order):
        m = mask_of(closure(G, [x]))
        cyclic.setdefault(m, x)
    found: dict[int, tuple[list[int], list[int]]] = {}
    queue = []
    for m, x in cyclic.items():
        els = closure(G, [x])
        found[m] = ([x] if x else [], els)
        queue.append(m)
    cyc = list(cyclic.items())
    i = 0
    while i < len(queue):
        m = queue[i]
        gens, els = found[m]
        for cm, x in cyc:
            if cm & m == cm:
                continue
            new = closure(G, gens + [x], start=els)
            nm = mask_of(new)
            if nm not in found:
                found[nm] = (gens + [x], new)
                queue.append(nm)
        i += 1
    order = sorted(found, key=lambda m: (m.bit_count(), m))
    return SubgroupLattice(G, [SubgroupSet(G, m) for m in order], [found[m][0] for m in order])


def maximal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    return all_subgroups(G).maximal


def normal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    return all_subgroups(G).normal


@dataclass(frozen=True)
class ModularityVerdict:
    is_modular: bool
    witness: tuple[SubgroupSet, SubgroupSet, SubgroupSet] | None = None

    def __bool__(self) -> bool:
        return self.is_modular


def _dedekind_witness(L: SubgroupLattice):
    J, M, C = L.join_table, L.meet_table, L.contains
    for h in range(len(L)):
        ls = np.flatnonzero(C[h])
        # <H, K meet L> versus <H, K> meet L for every K and every L above H
        lhs = J[h][M[:, ls]]
        rhs = M[J[h]][:, ls]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            k, li = bad[0]
            return h, int(k), int(ls[li])
    return None


def _n5_witness(L: SubgroupLattice):
    """A pentagon ``a < b`` with ``a v c = b v c`` and ``a ^ c = b ^ c``."""
    J, M, C = L.join_table, L.meet_table, L.contains
    for a in range(len(L)):
        for b in np.flatnonzero(C[a]):
            if b == a:
                continue
            same = np.flatnonzero((J[a] == J[b]) & (M[a] == M[b]))
            if len(same):
                # translated to Dedekind form: H = a, K = c, L = b
                return a, int(same[0]), int(b)
    return None


def is_modular_lattice(G: FiniteGroup, method: str = "dedekind") -> ModularityVerdict:
    """Dedekind's law over all triples with ``H <= L``; ``method="n5"`` searches
    for a pentagon sublattice instead."""
    L = all_subgroups(G)
    if method == "dedekind":
        w = _dedekind_witness(L)
    elif method == "n5":
        w = _n5_witness(L)
    else:
        raise ValueError(f"unknown method {method!r}")
    if w is None:
        return ModularityVerdict(True)
    return ModularityVerdict(False, tuple(L.nodes[i] for i in w))


def violates_dedekind(G: FiniteGroup, H: SubgroupSet, K: SubgroupSet, L: SubgroupSet) -> bool:
    """Independent recomputation of a witness from generated subgroups."""
    if not H <= L:
        return False
    lhs = mask_of(closure(G, H.elements + [x for x in K if x in L]))
    rhs = mask_of(closure(G, H.elements + K.elements)) & L.mask
    return lhs != rhs


# ----------------------------------------------------------------------------
# Iwasawa triples and P*-groups


@dataclass(frozen=True)
class IwasawaTriple:
    A: SubgroupSet
    b: int
    s: int


def _prime_of_p_group(G: FiniteGroup) -> int:
    f = factorize(G.order)
    if len(f) != 1:
        raise GroupError(f"order {G.order} is not a prime power")
    return f[0][0]


def _power_array(G: FiniteGroup, e: int) -> np.ndarray:
    idx = np.arange(G.order)
    out = np.zeros(G.order, dtype=np.int64)
    base, result = idx.copy(), out
    while e:
        if e & 1:
            result = G.table[result, base]
        base = G.table[base, base]
        e >>= 1
    return result


def is_iwasawa_triple(G: FiniteGroup, A: SubgroupSet, b: int, s: int) -> bool:
    p = _prime_of_p_group(G)
    if s < 1 or (p == 2 and s < 2):
        return False
    e = np.array(A.elements)
    t = G.table
    if not (t[e[:, None], e[None, :]] == t[e[None, :], e[:, None]]).all() or not is_normal(G, A):
        return False
    if len(closure(G, [b], start=A.elements)) != G.order:  # A normal, so A<b> is a subgroup
        return False
    conj = t[t[G.inverse[b], e], b]
    target = t[e, _power_array(G, p**s)[e]]
    return bool((conj == target).all())


def find_iwasawa_triple(G: FiniteGroup) -> IwasawaTriple | None:
    """Exhaustive search; abelian normal ``A`` by decreasing size, then ``b`` by
    index, then ``s`` upward.  None means no triple exists."""
    p = _prime_of_p_group(G)
    e_exp = round(math.log(G.exponent, p))
    smin = 2 if p == 2 else 1
    L = all_subgroups(G)
    t = G.table
    cands = []
    for H in L.nodes:
        e = np.array(H.elements)
        if (t[e[:, None], e[None, :]] == t[e[None, :], e[:, None]]).all() and is_normal(G, H):
            cands.append(H)
    cands.sort(key=lambda H: (-len(H), H.mask))
    powers = {s: _power_array(G, p**s) for s in range(smin, max(e_exp, smin) + 1)}
    for A in cands:
        e = np.array(A.elements)
        for b in range(G.order):
            if len(closure(G, [b], start=A.elements)) != G.order:  # A is normal
                continue
            conj = t[t[G.inverse[b], e], b]
            for s in range(smin, max(e_exp, smin) + 1):
                if (conj == t[e, powers[s][e]]).all():
                    return IwasawaTriple(A, b, s)
    return None


def is_p_star(G: FiniteGroup) -> tuple[int, int, int, int] | None:
    """Parameters ``(p, n, q, k)`` if ``G`` is ``P*(p^n, q^k)``, else None."""
    f = factorize(G.order)
    if len(f) != 2:
        return None
    for (p, n), (q, k) in (tuple(f), tuple(reversed(f))):
        if (p - 1) % q:
            continue
        A = normal_hall_subgroup(G, [p])
        if A is None:
            continue
        e = np.array(A.elements)
        t = G.table
        if not (t[e[:, None], e[None, :]] == t[e[None, :], e[:, None]]).all():
            continue
        if any(G.orders[a] > p for a in A):
            continue
        xs = [x for x, o in enumerate(G.orders) if o == q**k]
        if not xs:
            continue
        x = xs[0]
        conj = t[t[G.inverse[x], e], x]
        for r in range(2, p):
            # the action is a power map of order exactly q
            if multiplicative_order(r, p) == q and (conj == _power_array(G, r)[e]).all():
                return (p, n, q, k)
    return None


# ----------------------------------------------------------------------------
# coprime decomposition of M-groups


@dataclass(frozen=True)
class MFactor:
    group: FiniteGroup
    kind: str  # "hamiltonian", "iwasawa" or "pstar"
    certificate: object


def _certify(G: FiniteGroup) -> MFactor | None:
    f = factorize(G.order)
    if len(f) == 1:
        p, a = f[0]
        T = find_iwasawa_triple(G)
        if T is not None:
            return MFactor(G, "iwasawa", T)
        if p == 2 and a >= 3 and not G.is_abelian and G.exponent == 4:
            from psigroups.constructions import elementary_abelian, generalized_quaternion

            model = generalized_quaternion(8)
            if a > 3:
                model = direct_product(model, elementary_abelian(2, a - 3))
            if find_isomorphism(model, G) is not None:
                return MFactor(G, "hamiltonian", a - 3)
        return None
    params = is_p_star(G)
    if params is not None:
        return MFactor(G, "pstar", params)
    return None


def coprime_split(G: FiniteGroup):
    """The first (by size, then primes) split into normal Hall pi and pi' parts."""
    primes = [p for p, _ in factorize(G.order)]
    for r in range(1, len(primes)):
        for pi in itertools.combinations(primes, r):
            rest = [p for p in primes if p not in pi]
            H = normal_hall_subgroup(G, pi)
            K = normal_hall_subgroup(G, rest) if H is not None else None
            if H is not None and K is not None and is_normal(G, H) and is_normal(G, K):
                return H, K
    return None


def m_structure_decompose(G: FiniteGroup) -> list[MFactor]:
    """Pairwise coprime direct factors, each certified as ``Q8 x E(2, r)``, a
    p-group with an Iwasawa triple, or a P*-group."""
    if not is_modular_lattice(G):
        raise GroupError("group does not have a modular subgroup lattice")
    if G.order == 1:
        return []
    out: list[MFactor] = []
    stack = [G]
    while stack:
        X = stack.pop()
        split = coprime_split(X)
        if split is not None:
            H, K = split
            stack.extend([K.as_group(), H.as_group()])
            continue
        cert = _certify(X)
        if cert is None:
            raise GroupError(f"coprime factor of order {X.order} is none of the M-group building blocks")
        out.append(cert)
    out.sort(key=lambda m: factorize(m.group.order)[0][0])
    return out


def find_complement(G: FiniteGroup, N: SubgroupSet) -> SubgroupSet | None:
    """A subgroup ``H`` with ``H ^ N = 1`` and ``|H||N| = |G|`` for a normal Hall ``N``.

    Grows a subgroup from elements of coprime order; falls back to the lattice.
    """
    target = G.order // len(N)
    if math.gcd(target, len(N)) != 1:
        raise GroupError("find_complement needs a Hall subgroup")
    primes = [p for p, _ in factorize(target)]
    cands = pi_elements(G, primes)
    current = [0]
    gens: list[int] = []
    progress = True
    while len(current) < target and progress:
        progress = False
        cur = mask_of(current)
        for x in cands:
            if cur >> x & 1:
                continue
            grown = closure(G, gens + [x], start=current)
            if target % len(grown) == 0:
                current = grown
                gens.append(x)
                progress = True
                break
    if len(current) == target:
        return SubgroupSet(G, mask_of(current))
    for H in all_subgroups(G).nodes:
        if len(H) == target and H.mask & N.mask == 1:
            return H
    return None


def is_elementary_abelian(G: FiniteGroup) -> bool:
    f = factorize(G.order)
    return G.order == 1 or (len(f) == 1 and G.is_abelian and G.exponent == f[0][0] and is_prime(f[0][0]))
