"""All groups of small order, by exhaustive Cayley-table search or by construction.

The enumerator fills a Cayley table cell by cell with Latin and associativity
propagation.  New labels are introduced in increasing order (labels never
mentioned so far are interchangeable), and completed tables are merged up to
isomorphism and reduced to a canonical table.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from psigroups import config
from psigroups import constructions as cons
from psigroups.errors import GroupError, ResourceLimitError
from psigroups.group import (
    ActionSpec,
    FiniteGroup,
    automorphism_group,
    closure,
    direct_product,
    find_isomorphism,
    fingerprint,
    homomorphisms,
    semidirect_product,
)

CATALOG_SCOPE = 24


# ----------------------------------------------------------------------------
# exhaustive search


class _Stop(Exception):
    pass


class _TableSearch:
    """Backtracking over the interior cells of an order-``n`` Cayley table."""

    def __init__(self, n: int, time_budget=None, node_budget=None, deadline=None):
        self.n = n
        size = n * n
        self.T = [-1] * size
        self.rpos = [-1] * size  # rpos[a*n + c] = b  when a*b = c
        self.cpos = [-1] * size  # cpos[b*n + c] = a  when a*b = c
        for i in range(n):
            self._put(0, i, i)
            if i:
                self._put(i, 0, i)
        self.cells = sorted(((a, b) for a in range(1, n) for b in range(1, n)), key=lambda ab: (max(ab), ab))
        self.trail: list[int] = []
        self.nodes = 0
        self.node_budget = node_budget
        self.deadline = deadline
        self.found: list[tuple[int, ...]] = []

    def _put(self, a, b, c):
        n = self.n
        self.T[a * n + b] = c
        self.rpos[a * n + c] = b
        self.cpos[b * n + c] = a

    def assign(self, a: int, b: int, c: int) -> bool:
        """Set ``a*b = c`` and everything it forces; False on a contradiction."""
        n, T, rpos, cpos, trail = self.n, self.T, self.rpos, self.cpos, self.trail
        rng = range(1, n)
        queue = [(a, b, c)]
        while queue:
            a, b, c = queue.pop()
            ab = a * n + b
            v = T[ab]
            if v >= 0:
                if v != c:
                    return False
                continue
            if rpos[a * n + c] >= 0 or cpos[b * n + c] >= 0:
                return False
            T[ab] = c
            rpos[a * n + c] = b
            cpos[b * n + c] = a
            trail.append(ab)
            an, bn, cn = a * n, b * n, c * n
            for x in rng:
                xn = x * n
                # (x a) b = x c
                y = T[xn + a]
                if y >= 0:
                    lhs, rhs = T[y * n + b], T[xn + c]
                    if lhs >= 0:
                        if rhs >= 0:
                            if lhs != rhs:
                                return False
                        else:
                            queue.append((x, c, lhs))
                    elif rhs >= 0:
                        queue.append((y, b, rhs))
                # a (b x) = c x
                z = T[bn + x]
                if z >= 0:
                    lhs, rhs = T[an + z], T[cn + x]
                    if lhs >= 0:
                        if rhs >= 0:
                            if lhs != rhs:
                                return False
                        else:
                            queue.append((c, x, lhs))
                    elif rhs >= 0:
                        queue.append((a, z, rhs))
                # x y = a  gives  x (y b) = c
                y = rpos[xn + a]
                if y > 0:
                    w = T[y * n + b]
                    if w >= 0:
                        r = T[xn + w]
                        if r >= 0:
                            if r != c:
                                return False
                        else:
                            queue.append((x, w, c))
                    else:
                        w = rpos[xn + c]
                        if w >= 0:
                            queue.append((y, b, w))
                # y x = b  gives  (a y) x = c
                y = cpos[xn + b]
                if y > 0:
                    w = T[an + y]
                    if w >= 0:
                        r = T[w * n + x]
                        if r >= 0:
                            if r != c:
                                return False
                        else:
                            queue.append((w, x, c))
                    else:
                        w = cpos[xn + c]
                        if w >= 0:
                            queue.append((a, y, w))
        return True

    def undo(self, mark: int) -> None:
        n, T, rpos, cpos, trail = self.n, self.T, self.rpos, self.cpos, self.trail
        while len(trail) > mark:
            ab = trail.pop()
            c = T[ab]
            a, b = divmod(ab, n)
            T[ab] = -1
            rpos[a * n + c] = -1
            cpos[b * n + c] = -1

    def _tick(self):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _Stop("node budget")
        if self.deadline is not None and self.nodes % 512 == 0 and time.monotonic() > self.deadline:
            raise _Stop("time budget")

    def run(self, prefix=(), split_depth: int | None = None):
        """Search below the decision path ``prefix``.

        With ``split_depth`` the search stops at that many decisions and returns
        the decision paths reached there instead of completing tables.
        """
        n, cells, T = self.n, self.cells, self.T
        nc = len(cells)
        paths: list[tuple[int, ...]] = []

        def rec(pos, mx, path):
            while pos < nc and T[cells[pos][0] * n + cells[pos][1]] >= 0:
                pos += 1
            if pos == nc:
                if split_depth is not None:
                    paths.append(tuple(path))
                else:
                    self.found.append(tuple(T))
                return
            depth = len(path)
            if split_depth is not None and depth == split_depth:
                paths.append(tuple(path))
                return
            a, b = cells[pos]
            m = max(mx, a, b)
            top = min(m + 1, n - 1)
            choices = range(top + 1) if depth >= len(prefix) else (prefix[depth],)
            an, bn = a * n, b * n
            for c in choices:
                if self.rpos[an + c] >= 0 or self.cpos[bn + c] >= 0:
                    continue
                self._tick()
                mark = len(self.trail)
                if self.assign(a, b, c):
                    path.append(c)
                    rec(pos + 1, max(m, c), path)
                    path.pop()
                self.undo(mark)

        if n > 1:
            rec(0, 0, [])
        elif split_depth is None:
            self.found.append((0,))
        else:
            paths.append(())
        return paths


def _run_task(args):
    n, prefix, node_budget, deadline = args
    s = _TableSearch(n, node_budget=node_budget, deadline=deadline)
    try:
        s.run(prefix)
    except _Stop as e:
        return ("stopped", str(e), s.nodes, s.found)
    return ("done", None, s.nodes, s.found)


# ----------------------------------------------------------------------------
# canonical tables


def minimal_generating_size(G: FiniteGroup) -> int:
    if G.order == 1:
        return 0
    d = 1
    while True:
        for tup in itertools.combinations(range(1, G.order), d):
            if len(closure(G, tup)) == G.order:
                return d
        d += 1


def _bfs_labeling(G: FiniteGroup, gens) -> list[int] | None:
    rows = G.rows
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        row = rows[order[i]]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                order.append(y)
        i += 1
    return order if len(order) == G.order else None


def _table_bytes(t: np.ndarray) -> bytes:
    dtype = np.uint8 if t.shape[0] <= 256 else np.dtype(">u2")
    return t.astype(dtype).tobytes()


def canonical_table(G: FiniteGroup) -> np.ndarray:
    """Least relabeled table (row-major) over the breadth-first labelings
    induced by generating tuples of minimal length.

    Isomorphic groups have the same generating tuples up to the isomorphism,
    so the result is a complete invariant.
    """
    d = minimal_generating_size(G)
    if d == 0:
        return np.zeros((1, 1), dtype=np.int64)
    best, best_bytes = None, None
    for tup in itertools.product(range(1, G.order), repeat=d):
        order = _bfs_labeling(G, tup)
        if order is None:
            continue
        sigma = np.array(order)
        pi = np.empty(G.order, dtype=np.int64)
        pi[sigma] = np.arange(G.order)
        t = pi[G.table[np.ix_(sigma, sigma)]]
        b = _table_bytes(t)
        if best_bytes is None or b < best_bytes:
            best, best_bytes = t, b
    return best


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _to36(v: int, width: int) -> str:
    out = []
    for _ in range(width):
        v, r = divmod(v, 36)
        out.append(_DIGITS[r])
    return "".join(reversed(out))


def _key_width(n: int) -> int:
    w, top = 1, 36
    while n > top:
        w += 1
        top *= 36
    return w


def table_key(t: np.ndarray) -> str:
    n = t.shape[0]
    w = _key_width(n)
    return f"{n}:" + "".join(_to36(int(v), w) for v in t.ravel())


def canonical_key(G: FiniteGroup) -> str:
    return table_key(canonical_table(G))


def key_to_table(key: str) -> np.ndarray:
    head, _, digits = key.partition(":")
    n = int(head)
    w = _key_width(n)
    if len(digits) != n * n * w:
        raise GroupError(f"canonical key for order {n} must carry {n * n * w} digits")
    vals = [int(digits[i : i + w], 36) for i in range(0, len(digits), w)]
    return np.array(vals, dtype=np.int64).reshape(n, n)


@dataclass(frozen=True)
class CanonicalTable:
    order: int
    key: str
    canonical: bool = True

    @property
    def table(self) -> np.ndarray:
        return key_to_table(self.key)

    def group(self, name: str | None = None) -> FiniteGroup:
        return FiniteGroup(self.table, name=name)


def canonize(G: FiniteGroup) -> CanonicalTable:
    return CanonicalTable(G.order, canonical_key(G))


# ----------------------------------------------------------------------------
# deduplication


def unique_groups(groups, recipes=None):
    """Drop isomorphic repeats, keeping first occurrences (fingerprint buckets,
    then explicit isomorphism tests)."""
    buckets: dict[tuple, list[int]] = {}
    kept: list[FiniteGroup] = []
    kept_recipes: list = []
    recipes = list(recipes) if recipes is not None else [None] * len(groups)
    for G, r in zip(groups, recipes):
        fp = fingerprint(G)
        bucket = buckets.setdefault(fp, [])
        if any(find_isomorphism(kept[i], G) is not None for i in bucket):
            continue
        bucket.append(len(kept))
        kept.append(G)
        kept_recipes.append(r)
    return kept, kept_recipes


def enumerate_order(n: int, workers: int | None = None, seed: int | None = None,
                    time_budget: float | None = None, cap: int | None = None,
                    split_depth: int = 3) -> list[CanonicalTable]:
    """One canonical table per isomorphism class of groups of order ``n``.

    The search is split into subtrees at ``split_depth`` decisions; ``seed``
    only shuffles the order in which subtrees are processed and ``workers``
    runs them in separate processes.  Output is sorted by canonical key.
    """
    limits = config.LIMITS
    cap = limits.exhaustive_cap if cap is None else cap
    if n < 1:
        raise GroupError(f"order must be >= 1, got {n}")
    if n > cap:
        raise ResourceLimitError(f"order {n} exceeds the exhaustive cap {cap}", {"order": n, "cap": cap})
    workers = limits.workers if workers is None else workers
    seed = limits.seed if seed is None else seed
    time_budget = limits.time_budget if time_budget is None else time_budget
    deadline = None if time_budget is None else time.monotonic() + time_budget

    tasks = _TableSearch(n).run(split_depth=split_depth)
    random.Random(seed).shuffle(tasks)
    jobs = [(n, p, limits.node_budget, deadline) for p in tasks]

    tables: set[tuple[int, ...]] = set()
    nodes = 0
    done = 0

    def absorb(result):
        nonlocal nodes, done
        status, why, k, found = result
        nodes += k
        tables.update(found)
        if status != "done":
            raise ResourceLimitError(
                f"enumeration of order {n} stopped by the {why}",
                {"order": n, "subtrees_done": done, "subtrees_total": len(jobs),
                 "nodes": nodes, "tables_found": len(tables)},
            )
        done += 1

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(_run_task, jobs):
                absorb(result)
    else:
        for job in jobs:
            absorb(_run_task(job))

    groups = [FiniteGroup(np.array(t).reshape(n, n), check=False) for t in sorted(tables)]
    reps, _ = unique_groups(groups)
    out = []
    for G in reps:
        key = canonical_key(G)
        FiniteGroup(key_to_table(key))  # full invariant check of the representative
        out.append(CanonicalTable(n, key))
    return sorted(out, key=lambda c: c.key)


# ----------------------------------------------------------------------------
# constructive catalog


def _named_models(n: int) -> list[tuple[str, callable]]:
    c = cons
    E = c.elementary_abelian
    C = c.cyclic
    dp = direct_product

    def klein_c4() -> FiniteGroup:
        V = E(2, 2)
        return semidirect_product(c.cyclic_action(C(4), V, c.automorphism_of_order(V, 2)))

    def c3_rtimes_d8() -> FiniteGroup:
        D, C3 = c.dihedral(8), C(3)
        inv = C3.inverse.astype(np.int64)
        kernel = {0, 2, 4, 6}  # <x^2, y>
        images = np.array([np.arange(3) if b in kernel else inv for b in range(8)])
        return semidirect_product(ActionSpec(D, C3, images))

    table = {
        1: [("C1", lambda: C(1))],
        2: [("C2", lambda: C(2))],
        3: [("C3", lambda: C(3))],
        4: [("C4", lambda: C(4)), ("C2xC2", lambda: E(2, 2))],
        5: [("C5", lambda: C(5))],
        6: [("C6", lambda: C(6)), ("S3", lambda: c.sym(3))],
        7: [("C7", lambda: C(7))],
        8: [("C8", lambda: C(8)), ("C2xC4", lambda: dp(C(2), C(4))), ("C2xC2xC2", lambda: E(2, 3)),
            ("D8", lambda: c.dihedral(8)), ("Q8", lambda: c.generalized_quaternion(8))],
        9: [("C9", lambda: C(9)), ("C3xC3", lambda: E(3, 2))],
        10: [("C10", lambda: C(10)), ("D10", lambda: c.dihedral(10))],
        11: [("C11", lambda: C(11))],
        12: [("C12", lambda: C(12)), ("C2xC6", lambda: dp(C(2), C(6))), ("A4", lambda: c.alt(4)),
             ("D12", lambda: c.dihedral(12)), ("C3 rx C4", lambda: c.rtimes_iota(C(3), 4))],
        13: [("C13", lambda: C(13))],
        14: [("C14", lambda: C(14)), ("D14", lambda: c.dihedral(14))],
        15: [("C15", lambda: C(15))],
        16: [("C16", lambda: C(16)), ("C2xC8", lambda: dp(C(2), C(8))), ("C4xC4", lambda: dp(C(4), C(4))),
             ("C2xC2xC4", lambda: dp(E(2, 2), C(4))), ("C2xC2xC2xC2", lambda: E(2, 4)),
             ("D16", lambda: c.dihedral(16)), ("Q16", lambda: c.generalized_quaternion(16)),
             ("SD16", lambda: c.semidihedral(16)), ("M16", lambda: c.modular_group(2, 4)),
             ("D8xC2", lambda: dp(c.dihedral(8), C(2))), ("Q8xC2", lambda: dp(c.generalized_quaternion(8), C(2))),
             ("C4 x| C4", lambda: c.metacyclic(4, 4, -1)), ("(C2xC2) x| C4", klein_c4),
             ("D8oC4", c.central_product_d8_c4)],
        17: [("C17", lambda: C(17))],
        18: [("C18", lambda: C(18)), ("C3xC6", lambda: dp(C(3), C(6))), ("D18", lambda: c.dihedral(18)),
             ("S3xC3", lambda: dp(c.sym(3), C(3))), ("(C3xC3) rx C2", lambda: c.rtimes_iota(E(3, 2), 2))],
        19: [("C19", lambda: C(19))],
        20: [("C20", lambda: C(20)), ("C2xC10", lambda: dp(C(2), C(10))), ("D20", lambda: c.dihedral(20)),
             ("C5 rx C4", lambda: c.rtimes_iota(C(5), 4)), ("C5 x| C4", lambda: c.metacyclic(5, 4, 2))],
        21: [("C21", lambda: C(21)), ("C7 x| C3", lambda: c.p_star(7, 1, 3, 1))],
        22: [("C22", lambda: C(22)), ("D22", lambda: c.dihedral(22))],
        23: [("C23", lambda: C(23))],
        24: [("C24", lambda: C(24)), ("C2xC12", lambda: dp(C(2), C(12))), ("C2xC2xC6", lambda: dp(E(2, 2), C(6))),
             ("S4", lambda: c.sym(4)), ("SL(2,3)", c.sl23), ("C2xA4", lambda: dp(C(2), c.alt(4))),
             ("D24", lambda: c.dihedral(24)), ("Dic24", c.c3_rtimes_q8), ("C3 rx C8", lambda: c.rtimes_iota(C(3), 8)),
             ("D8xC3", lambda: dp(c.dihedral(8), C(3))), ("Q8xC3", lambda: dp(c.generalized_quaternion(8), C(3))),
             ("S3xC4", lambda: dp(c.sym(3), C(4))), ("(C3 rx C4)xC2", lambda: dp(c.rtimes_iota(C(3), 4), C(2))),
             ("D12xC2", lambda: dp(c.dihedral(12), C(2))), ("C3 x| D8", c3_rtimes_d8)],
    }
    return table.get(n, [])


@lru_cache(maxsize=None)
def named_models(n: int) -> tuple[tuple[str, FiniteGroup], ...]:
    out = []
    for name, builder in _named_models(n):
        G = builder()
        G.name = name
        out.append((name, G))
    return tuple(out)


def identify(G: FiniteGroup) -> str | None:
    """Display name from the registry of named groups of order <= 24."""
    fp = fingerprint(G)
    for name, M in named_models(G.order):
        if fingerprint(M) == fp and find_isomorphism(M, G) is not None:
            return name
    return None


def _extras(n: int) -> list[tuple[FiniteGroup, str]]:
    out = [(cons.cyclic(n), f"cyclic({n})")]
    builders = [
        ("generalized_quaternion(8)", lambda: cons.generalized_quaternion(8)),
        ("generalized_quaternion(16)", lambda: cons.generalized_quaternion(16)),
        ("semidihedral(16)", lambda: cons.semidihedral(16)),
        ("modular_group(2,4)", lambda: cons.modular_group(2, 4)),
        ("central_product_d8_c4()", cons.central_product_d8_c4),
        ("sym(4)", lambda: cons.sym(4)),
        ("sl23()", cons.sl23),
        ("quintet('iii_a')", lambda: cons.quintet("iii_a")),
        ("quintet('iii_b')", lambda: cons.quintet("iii_b")),
    ]
    sizes = {"generalized_quaternion(8)": 8, "generalized_quaternion(16)": 16, "semidihedral(16)": 16,
             "modular_group(2,4)": 16, "central_product_d8_c4()": 16, "sym(4)": 24, "sl23()": 24,
             "quintet('iii_a')": 24, "quintet('iii_b')": 24}
    for recipe, b in builders:
        if sizes[recipe] == n:
            out.append((b(), recipe))
    return out


@lru_cache(maxsize=None)
def _aut(i_order: int, i_index: int):
    G = constructive_catalog(i_order)[0][i_index]
    return automorphism_group(G)


def constructive_catalog(n: int) -> tuple[list[FiniteGroup], list[str]]:
    """Groups of order ``n`` from direct and semidirect products of smaller
    catalog entries plus explicit extras, deduplicated by isomorphism."""
    return _constructive(n)


@lru_cache(maxsize=None)
def _constructive(n: int):
    if not 1 <= n <= CATALOG_SCOPE:
        raise GroupError(f"constructive catalog covers orders 1..{CATALOG_SCOPE}, got {n}")
    cands: list[tuple[FiniteGroup, str]] = list(_extras(n))
    for a in range(2, n):
        if n % a:
            continue
        b = n // a
        if b < 2:
            continue
        As, _ = _constructive(a)
        Bs, _ = _constructive(b)
        for i, A in enumerate(As):
            for j, B in enumerate(Bs):
                if a <= b:
                    cands.append((direct_product(A, B), f"catalog({a})[{i}] x catalog({b})[{j}]"))
                autA, perms = _aut(a, i)
                for h_idx, h in enumerate(homomorphisms(B, autA)):
                    if all(v == 0 for v in h):
                        continue
                    images = perms[np.array(h)]
                    G = semidirect_product(ActionSpec(B, A, images), check=False)
                    cands.append((G, f"catalog({a})[{i}] x| catalog({b})[{j}] via hom {h_idx}"))
    groups, recipes = unique_groups([g for g, _ in cands], [r for _, r in cands])
    keys = [canonical_key(G) for G in groups]
    order = sorted(range(len(groups)), key=lambda i: keys[i])
    return [groups[i] for i in order], [recipes[i] for i in order]


@dataclass
class Catalog:
    order: int
    groups: list[FiniteGroup]
    keys: list[str]
    recipes: list[str]
    method: str
    names: list[str | None] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)


@lru_cache(maxsize=None)
def _catalog(n: int, method: str, cap: int) -> Catalog:
    if method == "exhaustive":
        tabs = enumerate_order(n, cap=cap)
        groups = [t.group() for t in tabs]
        keys = [t.key for t in tabs]
        recipes = ["exhaustive search"] * len(groups)
    else:
        groups, recipes = constructive_catalog(n)
        keys = [canonical_key(G) for G in groups]
    names = []
    for G in groups:
        name = identify(G)
        G.name = name
        names.append(name)
    return Catalog(n, groups, keys, recipes, method, names)


def catalog(n: int, method: str | None = None) -> Catalog:
    """Exhaustive search up to the configured cap, construction above it."""
    if not 1 <= n <= CATALOG_SCOPE and method != "exhaustive":
        raise GroupError(f"catalog covers orders 1..{CATALOG_SCOPE}, got {n}")
    cap = config.LIMITS.exhaustive_cap
    if method is None:
        method = "exhaustive" if n <= cap else "constructive"
    if method not in ("exhaustive", "constructive"):
        raise ValueError(f"unknown method {method!r}")
    return _catalog(n, method, cap if method == "exhaustive" else 0)


def all_groups_up_to(N: int, method: str | None = None) -> dict[int, Catalog]:
    return {n: catalog(n, method) for n in range(1, N + 1)}
