"""Builders for the named groups and families used throughout the package.

Presentation-style groups are materialized as normal-form words ``x^a y^b``
(stored at index ``b * N + a``) and multiplied by rewriting; every table is
checked by the :class:`FiniteGroup` constructor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from psigroups.errors import GroupError
from psigroups.group import (
    ActionSpec,
    FiniteGroup,
    automorphisms,
    direct_product,
    generated_subgroup,
    quotient,
    semidirect_product,
)
from psigroups.numeric import is_prime, multiplicative_order


def _metacyclic(N: int, M: int, r: int, s: int, name: str | None = None) -> FiniteGroup:
    """``<x, y | x^N = 1, y^M = x^s, y x y^-1 = x^r>`` on words ``x^a y^b``.

    Requires ``r^M = 1`` and ``r s = s`` modulo ``N`` (checked by the table
    validation rather than here).
    """
    rpow = [pow(r, b, N) for b in range(M)]
    n = N * M
    idx = np.arange(n)
    a, b = idx % N, idx // N
    ab = a[:, None]
    bb = b[:, None]
    c, d = a[None, :], b[None, :]
    rb = np.array(rpow)[bb]
    wrap = (bb + d) >= M
    xa = (ab + rb * c + s * wrap) % N
    yb = (bb + d) % M
    return FiniteGroup(yb * N + xa, name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError(f"cyclic group needs n >= 1, got {n}")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"C{n}", check=False)


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given order (D8 has order 8)."""
    if order % 2 or order < 6:
        raise GroupError(f"dihedral order must be even and >= 6, got {order}")
    return _metacyclic(order // 2, 2, -1, 0, name=f"D{order}")


def _two_power_exponent(order: int) -> int:
    k = order.bit_length() - 1
    if order < 1 or 1 << k != order:
        raise GroupError(f"{order} is not a power of 2")
    return k


def generalized_quaternion(order: int) -> FiniteGroup:
    k = _two_power_exponent(order)
    if k < 3:
        raise GroupError(f"generalized quaternion needs order 2^k with k >= 3, got {order}")
    N = order // 2
    return _metacyclic(N, 2, -1, N // 2, name=f"Q{order}")


def semidihedral(order: int) -> FiniteGroup:
    k = _two_power_exponent(order)
    if k < 4:
        raise GroupError(f"semidihedral needs order 2^k with k >= 4, got {order}")
    return _metacyclic(order // 2, 2, (1 << (k - 2)) - 1, 0, name=f"SD{order}")


def modular_group(p: int, n: int) -> FiniteGroup:
    """``M(p^n) = <x, y | x^(p^(n-1)) = y^p = 1, y x y^-1 = x^(1 + p^(n-2))>``."""
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if (p == 2 and n < 4) or (p != 2 and n < 3):
        raise GroupError(f"M({p}^{n}) is outside the family (p=2 needs n>=4, odd p needs n>=3)")
    N = p ** (n - 1)
    return _metacyclic(N, p, 1 + p ** (n - 2), 0, name=f"M({p**n})")


def dicyclic(order: int) -> FiniteGroup:
    """``<x, y | x^(2m) = 1, y^2 = x^m, y x y^-1 = x^-1>`` of order ``4m``."""
    if order % 4 or order < 8:
        raise GroupError(f"dicyclic order must be a multiple of 4 and >= 8, got {order}")
    N = order // 2
    return _metacyclic(N, 2, -1, N // 2, name=f"Dic{order}")


def metacyclic(N: int, M: int, r: int, s: int = 0, name: str | None = None) -> FiniteGroup:
    if N < 1 or M < 1:
        raise GroupError("metacyclic needs N, M >= 1")
    if pow(r, M, N) != 1 % N or (r * s - s) % N:
        raise GroupError(f"parameters N={N}, M={M}, r={r}, s={s} do not define a group")
    return _metacyclic(N, M, r, s, name=name)


def elementary_abelian(p: int, n: int) -> FiniteGroup:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if n < 1:
        raise GroupError(f"rank must be >= 1, got {n}")
    G = cyclic(p)
    for _ in range(n - 1):
        G = direct_product(G, cyclic(p))
    G.name = f"E({p},{n})" if n > 1 else f"C{p}"
    return G


def power_map(A: FiniteGroup, e: int) -> np.ndarray:
    """The map ``a -> a^e`` as an index array."""
    idx = np.arange(A.order)
    e %= A.exponent
    out = np.zeros(A.order, dtype=np.int64)
    for _ in range(e):
        out = A.table[out, idx]
    return out


def cyclic_action(B: FiniteGroup, A: FiniteGroup, phi: np.ndarray) -> ActionSpec:
    """Action of a cyclic ``B`` (as built by :func:`cyclic`) whose generator
    acts on ``A`` by the automorphism ``phi``."""
    images = [np.arange(A.order)]
    for _ in range(B.order - 1):
        images.append(phi[images[-1]])
    return ActionSpec(B, A, np.array(images))


def rtimes_iota(A: FiniteGroup, m: int, name: str | None = None) -> FiniteGroup:
    """``A x|_iota C_m``: the generator of ``C_m`` inverts the abelian ``A``."""
    if not A.is_abelian:
        raise GroupError("inversion semidirect product needs an abelian left factor")
    if m < 2 or m % 2:
        raise GroupError(f"inversion semidirect product needs an even cyclic order, got {m}")
    if name is None and A.name:
        name = f"{A.name} rx C{m}"
    return semidirect_product(cyclic_action(cyclic(m), A, A.inverse.astype(np.int64)), name=name)


def smallest_root_of_order(q: int, p: int) -> int:
    """Least residue ``r`` with multiplicative order exactly ``q`` mod ``p``."""
    for r in range(2, p):
        if multiplicative_order(r, p) == q:
            return r
    raise GroupError(f"no element of order {q} modulo {p}")


def p_star(p: int, n: int, q: int, k: int) -> FiniteGroup:
    """``P*(p^n, q^k)``: ``E(p, n)`` extended by ``C_{q^k}`` acting as ``a -> a^r``."""
    if not (is_prime(p) and is_prime(q)):
        raise GroupError("P* parameters p and q must be prime")
    if (p - 1) % q:
        raise GroupError(f"{q} does not divide {p} - 1")
    if n < 1 or k < 1:
        raise GroupError("P* needs n, k >= 1")
    A = elementary_abelian(p, n)
    r = smallest_root_of_order(q, p)
    G = semidirect_product(cyclic_action(cyclic(q**k), A, power_map(A, r)))
    G.name = f"P*({p}^{n},{q}^{k})"
    return G


def _permutation_group(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    perms = sorted(perms)  # identity sorts first
    index = {p: i for i, p in enumerate(perms)}
    t = [[index[tuple(p[i] for i in q)] for q in perms] for p in perms]
    return FiniteGroup(t, name=name)


def _parity(p: tuple[int, ...]) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def sym(n: int) -> FiniteGroup:
    if not 1 <= n <= 4:
        raise GroupError(f"sym supports 1 <= n <= 4, got {n}")
    return _permutation_group(list(itertools.permutations(range(n))), f"S{n}")


def alt(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupError(f"alt supports 1 <= n <= 5, got {n}")
    return _permutation_group([p for p in itertools.permutations(range(n)) if not _parity(p)], f"A{n}")


def automorphism_of_order(A: FiniteGroup, k: int, avoid_kernel=None) -> np.ndarray:
    """The first automorphism of ``A`` (in sorted image order) of exact order ``k``."""
    for f in sorted(automorphisms(A)):
        f = np.array(f)
        g, j = f.copy(), 1
        while not (g == np.arange(A.order)).all():
            g = f[g]
            j += 1
        if j == k:
            return f
    raise GroupError(f"{A.name or 'group'} has no automorphism of order {k}")


def sl23() -> FiniteGroup:
    """``Q8 x| C3`` with a non-trivial action, i.e. ``SL(2,3)``."""
    Q = generalized_quaternion(8)
    G = semidirect_product(cyclic_action(cyclic(3), Q, automorphism_of_order(Q, 3)))
    G.name = "SL(2,3)"
    return G


def c3_rtimes_q8() -> FiniteGroup:
    """``C3 x| Q8`` where ``Q8`` acts through ``Q8/<x> = C2`` by inversion."""
    Q, C3 = generalized_quaternion(8), cyclic(3)
    kernel = generated_subgroup(Q, [1])
    inv = C3.inverse.astype(np.int64)
    images = np.array([np.arange(3) if b in kernel else inv for b in range(Q.order)])
    G = semidirect_product(ActionSpec(Q, C3, images))
    G.name = "C3 x| Q8"
    return G


def central_product_d8_c4() -> FiniteGroup:
    """``D8 x C4`` modulo the diagonal central subgroup ``<(a^2, c^2)>``."""
    D, C = dihedral(8), cyclic(4)
    P = direct_product(D, C)
    # a^2 is index 2 in D8 and c^2 is index 2 in C4
    N = generated_subgroup(P, [2 * C.order + 2])
    G = quotient(P, N)
    G.name = "D8 o C4"
    return G


def central_product_q8_c4() -> FiniteGroup:
    Q, C = generalized_quaternion(8), cyclic(4)
    P = direct_product(Q, C)
    G = quotient(P, generated_subgroup(P, [2 * C.order + 2]))
    G.name = "Q8 o C4"
    return G


def quintet(variant: str) -> FiniteGroup:
    """Five small groups of orders 36, 54, 24, 24, 36.

    ``i``: C3 x (C3 x|_iota C4); ``ii``: C9 x S3; ``iii_a``: C2 x A4;
    ``iii_b``: Q8 x| C3; ``iv``: (C2 x C2) x| C9 with C9 cycling the three
    involutions through its quotient C3.
    """
    if variant == "i":
        G = direct_product(cyclic(3), rtimes_iota(cyclic(3), 4))
        G.name = "C3 x (C3 rx C4)"
    elif variant == "ii":
        G = direct_product(cyclic(9), sym(3))
        G.name = "C9 x S3"
    elif variant == "iii_a":
        G = direct_product(cyclic(2), alt(4))
        G.name = "C2 x A4"
    elif variant == "iii_b":
        G = sl23()
    elif variant == "iv":
        V = elementary_abelian(2, 2)
        G = semidirect_product(cyclic_action(cyclic(9), V, automorphism_of_order(V, 3)))
        G.name = "(C2 x C2) x| C9"
    else:
        raise GroupError(f"unknown quintet variant {variant!r}")
    return G


QUINTET_VARIANTS = ("i", "ii", "iii_a", "iii_b", "iv")


@dataclass(frozen=True)
class FamilySpec:
    """A family tag with its parameters and an optional cyclic cofactor ``m``.

    ``n`` is a group order for DIHEDRAL/QUATERNION/SEMIDIHEDRAL/CYCLIC/DICYCLIC,
    the exponent for MODULAR_M and ELEM_ABELIAN.  RTIMES_IOTA is
    ``C_n x|_iota C_{2^k}``.
    """

    tag: str
    n: int = 0
    k: int = 0
    p: int = 0
    q: int = 0
    m: int = 1
    extra: dict = field(default_factory=dict, compare=False)


def _base(spec: FamilySpec) -> FiniteGroup:
    t = spec.tag
    simple = {
        "ALT4": lambda: alt(4),
        "ALT5": lambda: alt(5),
        "SYM3": lambda: sym(3),
        "SYM4": lambda: sym(4),
        "SL23": sl23,
        "CENTRAL_PROD_D8_C4": central_product_d8_c4,
        "C3_RTIMES_Q8": c3_rtimes_q8,
    }
    if t in simple:
        return simple[t]()
    if t.startswith("QUINTET_"):
        return quintet(t[len("QUINTET_"):].lower())
    if t == "CYCLIC":
        return cyclic(spec.n)
    if t == "DIHEDRAL":
        return dihedral(spec.n)
    if t == "QUATERNION":
        return generalized_quaternion(spec.n)
    if t == "SEMIDIHEDRAL":
        return semidihedral(spec.n)
    if t == "DICYCLIC":
        return dicyclic(spec.n)
    if t == "MODULAR_M":
        return modular_group(spec.p, spec.n)
    if t == "ELEM_ABELIAN":
        return elementary_abelian(spec.p, spec.n)
    if t == "P_STAR":
        return p_star(spec.p, spec.n, spec.q, spec.k)
    if t == "RTIMES_IOTA":
        return rtimes_iota(cyclic(spec.n), 2**spec.k)
    raise GroupError(f"unknown family tag {t!r}")


def build(spec: FamilySpec) -> FiniteGroup:
    """Build the family member and attach ``C_m`` (``m`` coprime to the base order)."""
    if spec.m < 1:
        raise GroupError(f"cofactor m must be >= 1, got {spec.m}")
    G = _base(spec)
    if spec.m == 1:
        return G
    if math.gcd(spec.m, G.order) != 1:
        raise GroupError(f"cofactor m={spec.m} is not coprime to |{G.name}| = {G.order}")
    return direct_product(G, cyclic(spec.m), name=f"{G.name} x C{spec.m}")
