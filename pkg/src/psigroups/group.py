"""Dense finite groups: Cayley tables, subgroups, products and isomorphism.

Element ``0`` is always the identity and ``table[a, b]`` is the product
``a * b``.  Subgroups are bitmasks over element indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from psigroups import config
from psigroups.errors import GroupError, ResourceLimitError
from psigroups.numeric import factorize, p_part


def _element_orders(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    idx = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    power = idx.copy()
    k = 1
    while True:
        hit = (power == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            return orders
        if k > n:
            raise GroupError("element of infinite order in a finite table")
        power = t[power, idx]
        k += 1


class FiniteGroup:
    """A group given by its full multiplication table.

    The constructor checks the identity row and column, the Latin property and
    associativity (exhaustively up to ``Limits.full_assoc_check`` elements,
    by random sampling above that).
    """

    def __init__(self, table, name: str | None = None, check: bool = True):
        t = np.ascontiguousarray(table, dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if check:
            _validate_table(t)
        t.flags.writeable = False
        self.table = t
        self.order = n
        self.name = name
        self.inverse = np.argmax(t == 0, axis=1).astype(np.int32)
        self.element_orders = _element_orders(t)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<FiniteGroup {label} of order {self.order}>"

    @cached_property
    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    @cached_property
    def orders(self) -> list[int]:
        return self.element_orders.tolist()

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders[a])
        r, rows = 0, self.rows
        for _ in range(k):
            r = rows[r][a]
        return r

    def conj(self, a: int, g: int) -> int:
        """``g^-1 a g``."""
        rows = self.rows
        return rows[rows[int(self.inverse[g])][a]][g]

    @cached_property
    def commuting(self) -> np.ndarray:
        return self.table == self.table.T

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        return self.commuting.sum(axis=1)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(self.commuting.all())

    @cached_property
    def is_cyclic(self) -> bool:
        return bool((self.element_orders == self.order).any())

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*set(self.orders))

    def identity_subgroup(self) -> SubgroupSet:
        return SubgroupSet(self, 1)

    def whole(self) -> SubgroupSet:
        return SubgroupSet(self, (1 << self.order) - 1)


def _validate_table(t: np.ndarray) -> None:
    n = t.shape[0]
    idx = np.arange(n)
    if (t < 0).any() or (t >= n).any():
        raise GroupError("table entries out of range")
    if not (t[0] == idx).all() or not (t[:, 0] == idx).all():
        raise GroupError("index 0 is not the identity")
    if not (np.sort(t, axis=1) == idx).all() or not (np.sort(t, axis=0) == idx[:, None]).all():
        raise GroupError("table is not a Latin square")
    limits = config.LIMITS
    if n <= limits.full_assoc_check:
        for a in range(n):
            # (a*b)*c versus a*(b*c) over all b, c
            if not (t[t[a]] == t[a][t]).all():
                raise GroupError("table is not associative")
    else:
        rng = np.random.default_rng(12345)
        a, b, c = rng.integers(0, n, size=(3, limits.assoc_samples))
        if not (t[t[a, b], c] == t[a, t[b, c]]).all():
            raise GroupError("table is not associative (sampled)")


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    """A subset of a parent group's elements stored as an integer bitmask.

    Built by :func:`generated_subgroup` and friends, which guarantee closure;
    :meth:`check` re-verifies the subgroup axioms on demand.
    """

    group: FiniteGroup
    mask: int

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupSet) and self.group is other.group and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((id(self.group), self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __iter__(self):
        return iter(self.elements)

    def __le__(self, other: SubgroupSet) -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: SubgroupSet) -> bool:
        return self <= other and self.mask != other.mask

    def __repr__(self) -> str:
        return f"<SubgroupSet order {len(self)} of {self.group!r}>"

    @cached_property
    def elements(self) -> list[int]:
        m, out, i = self.mask, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return out

    @property
    def order(self) -> int:
        return len(self)

    def check(self) -> None:
        g = self.group
        els = self.elements
        if not els or els[0] != 0:
            raise GroupError("subgroup does not contain the identity")
        rows = g.rows
        for a in els:
            if not self.mask >> int(g.inverse[a]) & 1:
                raise GroupError("subgroup not closed under inverses")
            row = rows[a]
            for b in els:
                if not self.mask >> row[b] & 1:
                    raise GroupError("subgroup not closed under products")
        if g.order % len(self):
            raise GroupError("subgroup order does not divide the group order")

    def as_group(self, name: str | None = None) -> FiniteGroup:
        """The subgroup as a standalone group; element ``i`` is ``elements[i]``."""
        els = np.array(self.elements)
        pos = np.full(self.group.order, -1, dtype=np.int64)
        pos[els] = np.arange(len(els))
        return FiniteGroup(pos[self.group.table[np.ix_(els, els)]], name=name, check=False)


def mask_of(elements) -> int:
    m = 0
    for x in elements:
        m |= 1 << int(x)
    return m


def _bool_to_mask(b: np.ndarray) -> int:
    return mask_of(np.flatnonzero(b))


# ----------------------------------------------------------------------------
# elements and subgroups


def element_order(G: FiniteGroup, x: int) -> int:
    if not 0 <= x < G.order:
        raise IndexError(f"element {x} out of range for order {G.order}")
    return G.orders[x]


def closure(G: FiniteGroup, gens, start: list[int] | None = None) -> list[int]:
    """Elements of the subgroup generated by ``gens``.

    ``start`` only seeds the search; it must already lie inside the result
    (a subgroup of ``<gens>``, or a normal subgroup with ``gens`` spanning the
    rest), since only right multiplication by ``gens`` is applied.
    """
    rows = G.rows
    gens = [int(g) for g in gens if g != 0]
    seen = set(start) if start else {0}
    seen.add(0)
    out = sorted(seen)
    i = 0
    while i < len(out):
        row = rows[out[i]]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                out.append(y)
        i += 1
    return out


def generated_subgroup(G: FiniteGroup, gens) -> SubgroupSet:
    gens = list(gens)
    for g in gens:
        if not 0 <= g < G.order:
            raise IndexError(f"generator {g} out of range")
    return SubgroupSet(G, mask_of(closure(G, gens)))


def cyclic_subgroup(G: FiniteGroup, x: int) -> SubgroupSet:
    return generated_subgroup(G, [x])


def join(G: FiniteGroup, H: SubgroupSet, K: SubgroupSet) -> SubgroupSet:
    if H <= K:
        return K
    if K <= H:
        return H
    return SubgroupSet(G, mask_of(closure(G, subgroup_generators(G, H) + subgroup_generators(G, K), start=H.elements)))


def subgroup_generators(G: FiniteGroup, H: SubgroupSet) -> list[int]:
    """A small generating set of ``H``, picked greedily by decreasing order."""
    gens: list[int] = []
    cur = 1
    for x in sorted(H, key=lambda i: (-G.orders[i], i)):
        if cur >> x & 1:
            continue
        gens.append(x)
        cur = mask_of(closure(G, gens))
        if cur == H.mask:
            break
    return gens


def meet(H: SubgroupSet, K: SubgroupSet) -> SubgroupSet:
    return SubgroupSet(H.group, H.mask & K.mask)


def is_normal(G: FiniteGroup, H: SubgroupSet) -> bool:
    e = np.array(H.elements)
    inside = np.zeros(G.order, dtype=bool)
    inside[e] = True
    t = G.table
    conj = t[t[:, e], G.inverse[:, None]]  # g h g^-1 for all g, h
    return bool(inside[conj].all())


def conjugate(G: FiniteGroup, H: SubgroupSet, g: int) -> SubgroupSet:
    e = np.array(H.elements)
    t = G.table
    return SubgroupSet(G, mask_of(t[t[g, e], G.inverse[g]]))


def core(G: FiniteGroup, H: SubgroupSet) -> SubgroupSet:
    """Largest normal subgroup of ``G`` inside ``H``."""
    e = np.array(H.elements)
    t = G.table
    conj = t[t[:, e], G.inverse[:, None]]
    keep = np.zeros(G.order, dtype=bool)
    keep[e] = True
    for row in conj:
        member = np.zeros(G.order, dtype=bool)
        member[row] = True
        keep &= member
    return SubgroupSet(G, _bool_to_mask(keep))


def center(G: FiniteGroup) -> SubgroupSet:
    return SubgroupSet(G, _bool_to_mask(G.commuting.all(axis=1)))


def centralizer(G: FiniteGroup, S) -> SubgroupSet:
    s = np.array(list(S.elements if isinstance(S, SubgroupSet) else S), dtype=np.int64)
    if s.size == 0:
        return G.whole()
    return SubgroupSet(G, _bool_to_mask(G.commuting[:, s].all(axis=1)))


def commutator(G: FiniteGroup, a: int, b: int) -> int:
    rows, inv = G.rows, G.inverse
    return rows[rows[rows[int(inv[a])][int(inv[b])]][a]][b]


def derived_subgroup(G: FiniteGroup) -> SubgroupSet:
    t, inv = G.table, G.inverse
    comms = t[t[t[inv[:, None], inv[None, :]], np.arange(G.order)[:, None]], np.arange(G.order)[None, :]]
    return generated_subgroup(G, sorted(set(comms.ravel().tolist())))


def is_maximal_subgroup(G: FiniteGroup, H: SubgroupSet) -> bool:
    if len(H) == G.order:
        return False
    hg = subgroup_generators(G, H)
    for g in range(G.order):
        if g not in H and len(closure(G, hg + [g], start=H.elements)) != G.order:
            return False
    return True


def p_elements(G: FiniteGroup, p: int) -> list[int]:
    return [x for x, o in enumerate(G.orders) if p_part(o, p) == o]


def pi_elements(G: FiniteGroup, primes) -> list[int]:
    primes = set(primes)
    out = []
    for x, o in enumerate(G.orders):
        for q, _ in factorize(o):
            if q not in primes:
                break
        else:
            out.append(x)
    return out


def sylow_subgroup(G: FiniteGroup, p: int) -> SubgroupSet:
    """A Sylow ``p``-subgroup grown greedily from ``p``-elements.

    If the current ``p``-subgroup ``S`` is not yet Sylow, some ``p``-element of
    ``N(S) \\ S`` extends it, so trying every ``p``-element never gets stuck.
    """
    target = p_part(G.order, p)
    current = [0]
    gens: list[int] = []
    cands = p_elements(G, p)
    while len(current) < target:
        cur_mask = mask_of(current)
        for x in cands:
            if cur_mask >> x & 1:
                continue
            grown = closure(G, gens + [x], start=current)
            if p_part(len(grown), p) == len(grown):
                current = grown
                gens.append(x)
                break
        else:
            raise GroupError(f"could not extend a {p}-subgroup of order {len(current)}")
    return SubgroupSet(G, mask_of(current))


def has_normal_sylow(G: FiniteGroup, p: int) -> bool:
    """The Sylow ``p``-subgroup is normal iff it contains every ``p``-element."""
    return len(p_elements(G, p)) == p_part(G.order, p)


def normal_hall_subgroup(G: FiniteGroup, primes) -> SubgroupSet | None:
    """The normal Hall ``primes``-subgroup, or None if there is none."""
    els = pi_elements(G, primes)
    target = math.prod(p_part(G.order, p) for p in set(primes))
    if len(els) != target:
        return None
    H = SubgroupSet(G, mask_of(els))
    if len(closure(G, els)) != target:
        return None
    return H


def prime_order_normal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    seen, out = set(), []
    for x, o in enumerate(G.orders):
        if o > 1 and len(factorize(o)) == 1 and factorize(o)[0][1] == 1:
            H = cyclic_subgroup(G, x)
            if H.mask not in seen:
                seen.add(H.mask)
                if is_normal(G, H):
                    out.append(H)
    return out


# ----------------------------------------------------------------------------
# structural predicates


def is_abelian(G: FiniteGroup) -> bool:
    return G.is_abelian


def is_cyclic(G: FiniteGroup) -> bool:
    return G.is_cyclic


def is_nilpotent(G: FiniteGroup) -> bool:
    return all(has_normal_sylow(G, p) for p, _ in factorize(G.order))


def derived_series(G: FiniteGroup) -> list[FiniteGroup]:
    series = [G]
    while True:
        D = derived_subgroup(series[-1])
        if len(D) == series[-1].order:
            return series
        series.append(D.as_group())


def is_soluble(G: FiniteGroup) -> bool:
    return derived_series(G)[-1].order == 1


def is_supersoluble(G: FiniteGroup) -> bool:
    """Trivial, or some prime-order normal ``N`` has a supersoluble quotient.

    Quotients of supersoluble groups are supersoluble, so testing the first
    prime-order normal subgroup found is enough.
    """
    while G.order > 1:
        normals = prime_order_normal_subgroups(G)
        if not normals:
            return False
        G = quotient(G, normals[0])
    return True


# ----------------------------------------------------------------------------
# quotients and products


def quotient(G: FiniteGroup, N: SubgroupSet) -> FiniteGroup:
    if not is_normal(G, N):
        raise GroupError("quotient by a non-normal subgroup")
    n = G.order
    e = np.array(N.elements)
    coset = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if coset[x] < 0:
            coset[G.table[x, e]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    return FiniteGroup(coset[G.table[np.ix_(reps, reps)]], check=False)


def _check_cap(n: int) -> None:
    cap = config.LIMITS.table_cap
    if n > cap:
        raise ResourceLimitError(f"group of order {n} exceeds the table cap {cap}")


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Pairs ``(a, b)`` stored at index ``a * |B| + b``."""
    na, nb = A.order, B.order
    _check_cap(na * nb)
    idx = np.arange(na * nb)
    ai, bi = idx // nb, idx % nb
    t = A.table[ai[:, None], ai[None, :]].astype(np.int64) * nb + B.table[bi[:, None], bi[None, :]]
    if name is None and A.name and B.name:
        name = f"{A.name} x {B.name}"
    return FiniteGroup(t, name=name, check=False)  # valid whenever the factors are


@dataclass(frozen=True, eq=False)
class ActionSpec:
    """An action of ``actor`` on ``target`` by automorphisms.

    ``images[b]`` is the permutation of the target's indices induced by ``b``;
    the map must satisfy ``images[b1 * b2] = images[b1] o images[b2]``.
    """

    actor: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def validate(self) -> None:
        A, B, phi = self.target, self.actor, np.asarray(self.images)
        if phi.shape != (B.order, A.order):
            raise GroupError(f"action images must have shape {(B.order, A.order)}, got {phi.shape}")
        idx = np.arange(A.order)
        for b in range(B.order):
            f = phi[b]
            if not (np.sort(f) == idx).all():
                raise GroupError(f"image of actor element {b} is not a permutation")
            if not (A.table[f[:, None], f[None, :]] == f[A.table]).all():
                raise GroupError(f"image of actor element {b} is not an automorphism")
        for b1 in range(B.order):
            # images[b1 b2] == images[b1][images[b2]] for every b2
            if not (phi[B.table[b1]] == phi[b1][phi]).all():
                raise GroupError("action images do not define a homomorphism")


def trivial_action(B: FiniteGroup, A: FiniteGroup) -> ActionSpec:
    return ActionSpec(B, A, np.tile(np.arange(A.order), (B.order, 1)))


def semidirect_product(spec: ActionSpec, name: str | None = None, check: bool = True) -> FiniteGroup:
    """``A x| B`` on pairs ``(a, b)`` at index ``a * |B| + b``.

    ``(a1, b1)(a2, b2) = (a1 * phi_b1(a2), b1 * b2)``.
    """
    if check:
        spec.validate()
    A, B, phi = spec.target, spec.actor, np.asarray(spec.images, dtype=np.int64)
    na, nb = A.order, B.order
    _check_cap(na * nb)
    idx = np.arange(na * nb)
    ai, bi = idx // nb, idx % nb
    acted = phi[bi[:, None], ai[None, :]]
    t = A.table[ai[:, None], acted].astype(np.int64) * nb + B.table[bi[:, None], bi[None, :]]
    return FiniteGroup(t, name=name, check=na * nb <= config.LIMITS.full_assoc_check)


# ----------------------------------------------------------------------------
# homomorphisms and isomorphism


def generating_set(G: FiniteGroup) -> list[int]:
    """Greedy generators: repeatedly add an element of largest order outside
    the current subgroup."""
    by_order = sorted(range(1, G.order), key=lambda x: (-G.orders[x], x))
    gens: list[int] = []
    current = [0]
    mask = 1
    while len(current) < G.order:
        for x in by_order:
            if not mask >> x & 1:
                gens.append(x)
                current = closure(G, gens)
                mask = mask_of(current)
                break
    return gens


def _extend(G: FiniteGroup, H: FiniteGroup, gens, images):
    """Extend ``gens[i] -> images[i]`` to a map on ``<gens>``.

    Returns the partial map (list, -1 where undefined) or None when the
    assignment is inconsistent with any homomorphism.
    """
    grows, hrows = G.rows, H.rows
    f = [-1] * G.order
    f[0] = 0
    queue = [0]
    i = 0
    while i < len(queue):
        x = queue[i]
        fx = f[x]
        gx, hx = grows[x], hrows[fx]
        for g, h in zip(gens, images):
            y, fy = gx[g], hx[h]
            if f[y] < 0:
                f[y] = fy
                queue.append(y)
            elif f[y] != fy:
                return None
        i += 1
    return f


def _signatures(G: FiniteGroup) -> list[tuple[int, int]]:
    return list(zip(G.orders, G.centralizer_sizes.tolist()))


def fingerprint(G: FiniteGroup) -> tuple:
    """Isomorphism invariant: order, element-order multiset, abelianness,
    centre size and the multiset of (order, centralizer size) pairs."""
    sig = sorted(_signatures(G))
    return (G.order, tuple(sorted(G.orders)), G.is_abelian, len(center(G)), tuple(sig))


def homomorphisms(G: FiniteGroup, H: FiniteGroup, gens=None, bijective: bool = False):
    """Yield every homomorphism ``G -> H`` as a list of images."""
    gens = generating_set(G) if gens is None else list(gens)
    if bijective:
        if G.order != H.order:
            return
        gsig, hsig = _signatures(G), _signatures(H)
        cands = [[h for h in range(H.order) if hsig[h] == gsig[g]] for g in gens]
    else:
        cands = [[h for h in range(H.order) if G.orders[g] % H.orders[h] == 0] for g in gens]

    def rec(level, chosen):
        if level == len(gens):
            f = _extend(G, H, gens, chosen)
            if f is not None and (not bijective or len(set(f)) == G.order):
                yield f
            return
        for h in cands[level]:
            trial = chosen + [h]
            f = _extend(G, H, gens[: level + 1], trial)
            if f is None:
                continue
            if bijective and len({v for v in f if v >= 0}) != sum(1 for v in f if v >= 0):
                continue
            yield from rec(level + 1, trial)

    yield from rec(0, [])


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> list[int] | None:
    """Backtracking over images of a greedy generating set of ``G``, pruned by
    (order, centralizer size) signatures.  The returned map is verified on all
    pairs."""
    if G.order != H.order:
        return None
    if G is H or G.order == 1:
        return list(range(G.order))
    if fingerprint(G) != fingerprint(H):
        return None
    gens = generating_set(G)
    gsig, hsig = _signatures(G), _signatures(H)
    cands = [[h for h in range(H.order) if hsig[h] == gsig[g]] for g in gens]
    budget = config.LIMITS.iso_node_budget
    nodes = 0

    def rec(level, chosen):
        nonlocal nodes
        for h in cands[level]:
            nodes += 1
            if nodes > budget:
                raise ResourceLimitError("isomorphism search exceeded its node budget", {"nodes": nodes})
            trial = chosen + [h]
            f = _extend(G, H, gens[: level + 1], trial)
            if f is None:
                continue
            defined = [v for v in f if v >= 0]
            if len(set(defined)) != len(defined):
                continue
            if level + 1 == len(gens):
                return f
            found = rec(level + 1, trial)
            if found is not None:
                return found
        return None

    f = rec(0, [])
    if f is None:
        return None
    fa = np.array(f)
    if not (H.table[fa[:, None], fa[None, :]] == fa[G.table]).all():
        raise GroupError("isomorphism witness failed verification")
    return f


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


def automorphisms(A: FiniteGroup) -> list[list[int]]:
    return list(homomorphisms(A, A, bijective=True))


def automorphism_group(A: FiniteGroup) -> tuple[FiniteGroup, np.ndarray]:
    """``Aut(A)`` as a table group together with its permutations.

    The product of permutations ``s`` and ``t`` is ``s o t`` (apply ``t``
    first); the identity automorphism is element 0.
    """
    perms = sorted(tuple(f) for f in automorphisms(A))
    perms = np.array(perms, dtype=np.int64)
    index = {tuple(p): i for i, p in enumerate(perms.tolist())}
    m = len(perms)
    t = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            t[i, j] = index[tuple(perms[i][perms[j]].tolist())]
    return FiniteGroup(t, name=f"Aut({A.name})" if A.name else None), perms
