"""The sum-of-element-orders function and the bounds built around it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from psigroups.errors import GroupError
from psigroups.group import (
    FiniteGroup,
    SubgroupSet,
    centralizer,
    has_normal_sylow,
    is_normal,
    sylow_subgroup,
)
from psigroups.numeric import factorize, is_prime, p_part, prime_divisors

NINETEEN_43 = Fraction(19, 43)
THIRTYONE_77 = Fraction(31, 77)


def psi(G: FiniteGroup) -> int:
    return int(G.element_orders.sum())


def psi_cyclic(n: int) -> int:
    """Closed form over the factorization of ``n``."""
    if n < 1:
        raise ValueError(f"psi_cyclic needs n >= 1, got {n}")
    out = 1
    for p, a in factorize(n):
        out *= (p ** (2 * a + 1) + 1) // (p + 1)
    return out


def psi_prime(G: FiniteGroup) -> Fraction:
    return Fraction(psi(G), psi_cyclic(G.order))


@dataclass(frozen=True)
class PsiReport:
    name: str | None
    order: int
    psi: int
    psi_cyclic_same_order: int

    @property
    def psi_prime(self) -> Fraction:
        return Fraction(self.psi, self.psi_cyclic_same_order)


def psi_report(G: FiniteGroup) -> PsiReport:
    return PsiReport(G.name, G.order, psi(G), psi_cyclic(G.order))


def f_bound(q: int) -> Fraction:
    """Largest value of psi' over non-cyclic groups whose smallest prime is ``q``."""
    if not is_prime(q):
        raise ValueError(f"f_bound needs a prime, got {q}")
    return Fraction(((q * q - 1) * q + 1) * (q + 1), q**5 + 1)


_CLOSED_FORM_DOMAIN = {
    "KLEIN_CYCLIC": 2,
    "MODULAR_M2": 4,
    "DIHEDRAL2": 3,
    "QUATERNION2": 3,
    "SEMIDIHEDRAL2": 4,
}


def psi_prime_closed_form(family: str, k: int) -> Fraction:
    """psi' of the order-``2^k`` members of five 2-group families.

    KLEIN_CYCLIC is ``C2 x C_{2^(k-1)}``; the others are ``M(2^k)``, ``D_{2^k}``,
    ``Q_{2^k}`` and ``SD_{2^k}``.
    """
    if family not in _CLOSED_FORM_DOMAIN:
        raise ValueError(f"unknown family {family!r}")
    if k < _CLOSED_FORM_DOMAIN[family]:
        raise ValueError(f"{family} needs k >= {_CLOSED_FORM_DOMAIN[family]}, got {k}")
    den = 2 ** (2 * k + 1) + 1
    if family in ("KLEIN_CYCLIC", "MODULAR_M2"):
        num = 2 ** (2 * k) + 5
    elif family == "DIHEDRAL2":
        num = 2 ** (2 * k - 1) + 3 * 2**k + 1
    elif family == "QUATERNION2":
        num = 2 ** (2 * k - 1) + 3 * 2 ** (k + 1) + 1
    else:
        num = 2 ** (2 * k - 1) + 9 * 2 ** (k - 1) + 1
    return Fraction(num, den)


def psi_prime_pstar(p: int, n: int, k: int) -> Fraction:
    """psi' of ``P*(p^n, 2^k)`` in closed form."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"psi_prime_pstar needs an odd prime, got {p}")
    if n < 1 or k < 1:
        raise ValueError("psi_prime_pstar needs n, k >= 1")
    d = p ** (2 * n + 1) + 1
    return Fraction(p + 1, d) + Fraction((p + 1) * (p**n - 1), d) * Fraction(
        (p + 3) * 2 ** (2 * k - 1) + p, 2 ** (2 * k + 1) + 1
    )


def semidirect_psi(p_order: int, psi_p: int, psi_h: int, psi_chp: int) -> int:
    """psi of ``P x| H`` with ``P`` a normal cyclic Sylow subgroup."""
    return p_order * psi_h + (psi_p - p_order) * psi_chp


@dataclass(frozen=True)
class BoundWitness:
    element: int
    index: int
    bound: Fraction

    def __post_init__(self):
        if not self.index < self.bound:
            raise GroupError(f"witness index {self.index} is not below {self.bound}")


def index_bound(n: int, threshold: Fraction, t: int | None = None) -> Fraction:
    """Upper bound on the least index of a cyclic subgroup when psi' > threshold.

    Without ``t`` the bound is ``(1/threshold) prod (p_i+1)/p_i``; with ``t``
    (1-based) the product stops before ``p_t`` and ends with ``(p_k+1)/p_t``.
    """
    primes = prime_divisors(n)
    if not primes:
        return 1 / Fraction(threshold)
    if t is None:
        prod = math.prod(Fraction(p + 1, p) for p in primes)
    else:
        if not 1 <= t <= len(primes):
            raise ValueError(f"t must lie in 1..{len(primes)}, got {t}")
        prod = math.prod(Fraction(p + 1, p) for p in primes[: t - 1]) * Fraction(primes[-1] + 1, primes[t - 1])
    return prod / Fraction(threshold)


def large_element_witness(G: FiniteGroup, threshold: Fraction, t: int | None = None) -> BoundWitness:
    """An element whose cyclic subgroup has index below :func:`index_bound`.

    Elements are scanned by decreasing order, so the witness has the least
    possible index.
    """
    threshold = Fraction(threshold)
    if not psi_prime(G) > threshold:
        raise GroupError(f"psi'({G.name or 'G'}) = {psi_prime(G)} does not exceed {threshold}")
    bound = index_bound(G.order, threshold, t)
    orders = G.orders
    x = max(range(G.order), key=lambda i: (orders[i], -i))
    return BoundWitness(x, G.order // orders[x], bound)


def cyclic_lower_bound(n: int, variant: str = "product", t: int | None = None) -> Fraction:
    """Lower bounds on ``psi(C_n)``; each is asserted strictly below the true value.

    ``product``: ``prod p_i/(p_i+1) n^2``; ``truncated``: the product up to
    ``p_{t-1}`` times ``p_t/(p_k+1) n^2``; ``extremal``: ``p_1/(p_k+1) n^2``.
    """
    if n < 2:
        raise ValueError(f"cyclic_lower_bound needs n >= 2, got {n}")
    primes = prime_divisors(n)
    if variant == "product":
        value = math.prod(Fraction(p, p + 1) for p in primes) * n * n
    elif variant == "truncated":
        if t is None or not 1 <= t <= len(primes):
            raise ValueError(f"truncated bound needs t in 1..{len(primes)}")
        value = math.prod(Fraction(p, p + 1) for p in primes[: t - 1]) * Fraction(primes[t - 1], primes[-1] + 1) * n * n
    elif variant == "extremal":
        value = Fraction(primes[0], primes[-1] + 1) * n * n
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if not value < psi_cyclic(n):
        raise AssertionError(f"lower bound {value} is not below psi(C_{n}) = {psi_cyclic(n)}")
    return Fraction(value)


def l_max(G: FiniteGroup) -> int:
    """Largest psi among the maximal subgroups."""
    from psigroups.lattice import maximal_subgroups

    if G.order == 1:
        raise GroupError("the trivial group has no maximal subgroups")
    return max(psi(M.as_group()) for M in maximal_subgroups(G))


def find_normal_cyclic_sylow(G: FiniteGroup, p: int) -> SubgroupSet | None:
    if G.order % p or not has_normal_sylow(G, p):
        return None
    P = sylow_subgroup(G, p)
    if max(G.orders[x] for x in P) != len(P):
        return None
    return P


def star_bound(G: FiniteGroup, P: SubgroupSet, H: SubgroupSet) -> Fraction:
    """Upper bound on psi'(G) for ``G = P x| H`` with ``P`` normal cyclic Sylow.

    ``|P|/psi(C_|P|) psi'(H) + (1 - |P|/psi(C_|P|)) l(H)/psi(C_|H|)``,
    valid when ``C_H(P) < H``.
    """
    n = G.order
    p_ord, h_ord = len(P), len(H)
    if p_ord * h_ord != n or P.mask & H.mask != 1:
        raise GroupError("H is not a complement of P")
    if p_ord == 1 or len(factorize(p_ord)) != 1:
        raise GroupError("P is not a non-trivial p-subgroup")
    p = factorize(p_ord)[0][0]
    if p_part(n, p) != p_ord:
        raise GroupError("P is not a Sylow subgroup")
    if not is_normal(G, P):
        raise GroupError("P is not normal")
    if max(G.orders[x] for x in P) != p_ord:
        raise GroupError("P is not cyclic")
    if (centralizer(G, P).mask & H.mask) == H.mask:
        raise GroupError("H centralizes P, so the bound does not apply")
    Hg = H.as_group()
    ratio = Fraction(p_ord, psi_cyclic(p_ord))
    bound = ratio * psi_prime(Hg) + (1 - ratio) * Fraction(l_max(Hg), psi_cyclic(h_ord))
    if psi_prime(G) > bound:
        raise AssertionError(f"psi'(G) = {psi_prime(G)} exceeds the bound {bound}")
    return bound
