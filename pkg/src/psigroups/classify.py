"""Family labels for groups with large psi' and whole-catalog verification campaigns."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from functools import lru_cache

from psigroups import config
from psigroups import constructions as cons
from psigroups.errors import GroupError
from psigroups.group import (
    FiniteGroup,
    SubgroupSet,
    core,
    direct_product,
    find_isomorphism,
    fingerprint,
    is_supersoluble,
    mask_of,
    p_elements,
    quotient,
    closure,
)
from psigroups.lattice import (
    all_subgroups,
    find_complement,
    is_modular_lattice,
    m_structure_decompose,
)
from psigroups.numeric import decimal6, factorize, format_fraction, is_prime, p_part
from psigroups.psi import (
    NINETEEN_43,
    THIRTYONE_77,
    cyclic_lower_bound,
    f_bound,
    find_normal_cyclic_sylow,
    large_element_witness,
    psi,
    psi_cyclic,
    psi_prime,
    psi_prime_pstar,
    star_bound,
)
from psigroups.smallgroups import catalog, identify, key_to_table

THEOREM_A_TAGS = (
    "CYCLIC",
    "KLEIN_CYCLIC_x_Cm",
    "M2K_x_Cm",
    "Q8_x_Cm",
    "C3_RTIMES_2K_x_Cm",
    "C5_RTIMES_C2_x_Cm",
    "C5_RTIMES_C4_x_Cm",
)
THEOREM_B_TAGS = ("D8_x_Cm", "D14_x_Cm")
INTERVAL_TAGS = (
    "Q16_x_Cm",
    "C3xC3_x_Cm",
    "C3_RTIMES_Q8_x_Cm",
    "D12_x_Cm",
    "D18_x_Cm",
    "C5_RTIMES_2K_x_Cm",
)
BOUNDARY_TAGS = ("A4_x_Cm",)


@dataclass(frozen=True)
class ClassLabel:
    tag: str
    k: int | None = None
    m: int | None = None
    m_group: bool | None = None  # modularity, recorded for the equality families

    @property
    def params(self) -> dict:
        out = {}
        if self.k is not None:
            out["k"] = self.k
        if self.m is not None:
            out["m"] = self.m
        if self.m_group is not None:
            out["mGroup"] = self.m_group
        return out

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({inner})"


NONE = ClassLabel("NONE")


@dataclass(frozen=True)
class FamilyCore:
    """The non-cyclic part of a family: ``core(k)`` has order ``order(k)``."""

    kmin: int | None  # None for families without a k parameter
    order: object
    core: object


def _fixed(n, build):
    return FamilyCore(None, lambda k: n, lambda k: build())


FAMILY_CORES: dict[str, FamilyCore] = {
    "KLEIN_CYCLIC_x_Cm": FamilyCore(2, lambda k: 2**k,
                                    lambda k: direct_product(cons.cyclic(2 ** (k - 1)), cons.cyclic(2))),
    "M2K_x_Cm": FamilyCore(4, lambda k: 2**k, lambda k: cons.modular_group(2, k)),
    "Q8_x_Cm": _fixed(8, lambda: cons.generalized_quaternion(8)),
    "C3_RTIMES_2K_x_Cm": FamilyCore(1, lambda k: 3 * 2**k, lambda k: cons.rtimes_iota(cons.cyclic(3), 2**k)),
    "C5_RTIMES_C2_x_Cm": _fixed(10, lambda: cons.dihedral(10)),
    "C5_RTIMES_C4_x_Cm": _fixed(20, lambda: cons.rtimes_iota(cons.cyclic(5), 4)),
    "D8_x_Cm": _fixed(8, lambda: cons.dihedral(8)),
    "D14_x_Cm": _fixed(14, lambda: cons.dihedral(14)),
    "Q16_x_Cm": _fixed(16, lambda: cons.generalized_quaternion(16)),
    "C3xC3_x_Cm": _fixed(9, lambda: cons.elementary_abelian(3, 2)),
    "C3_RTIMES_Q8_x_Cm": _fixed(24, cons.c3_rtimes_q8),
    "D12_x_Cm": _fixed(12, lambda: cons.dihedral(12)),
    "D18_x_Cm": _fixed(18, lambda: cons.dihedral(18)),
    "C5_RTIMES_2K_x_Cm": FamilyCore(3, lambda k: 5 * 2**k, lambda k: cons.rtimes_iota(cons.cyclic(5), 2**k)),
    "A4_x_Cm": _fixed(12, lambda: cons.alt(4)),
}


def family_instance(tag: str, k: int | None = None, m: int = 1) -> FiniteGroup:
    """``core(k) x C_m``; ``m`` must be coprime to the core order."""
    if tag == "CYCLIC":
        return cons.cyclic(m)
    fam = FAMILY_CORES[tag]
    if (fam.kmin is None) != (k is None) or (k is not None and k < fam.kmin):
        raise GroupError(f"{tag} needs {'no k' if fam.kmin is None else f'k >= {fam.kmin}'}, got k={k}")
    n = fam.order(k)
    if m < 1 or math.gcd(m, n) != 1:
        raise GroupError(f"{tag}: m={m} must be a positive integer coprime to {n}")
    G = fam.core(k)
    return G if m == 1 else direct_product(G, cons.cyclic(m))


@lru_cache(maxsize=None)
def _family_models(order: int) -> tuple[tuple[str, int | None, FiniteGroup], ...]:
    """Every family core of the given order as ``(tag, k, model)``."""
    out = []
    for tag, fam in FAMILY_CORES.items():
        if fam.kmin is None:
            if fam.order(None) == order:
                out.append((tag, None, fam.core(None)))
            continue
        k = fam.kmin
        while fam.order(k) < order:
            k += 1
        if fam.order(k) == order:
            out.append((tag, k, fam.core(k)))
    return tuple(out)


def split_cyclic_cofactor(G: FiniteGroup) -> tuple[SubgroupSet, int]:
    """The subgroup generated by central cyclic Sylow subgroups, and its order.

    A central Sylow subgroup is a direct factor (it has a normal complement),
    so ``G`` is the direct product of this cyclic cofactor and a complement of
    coprime order.
    """
    central = []
    for p, _ in factorize(G.order):
        els = p_elements(G, p)
        if len(els) != p_part(G.order, p):
            continue
        if not G.commuting[els][:, :].all():
            continue
        if max(G.orders[x] for x in els) != len(els):
            continue
        central.extend(els)
    C = SubgroupSet(G, mask_of(closure(G, central)))
    return C, len(C)


def family_matches(G: FiniteGroup) -> list[ClassLabel]:
    """All family labels whose model matches the core of ``G`` (expected: at most one)."""
    if G.is_cyclic:
        return [ClassLabel("CYCLIC")]
    C, m = split_cyclic_cofactor(G)
    if m == 1:
        core_group = G
    else:
        H = find_complement(G, C)
        if H is None:
            return []
        core_group = H.as_group()
    fp = fingerprint(core_group)
    out = []
    for tag, k, model in _family_models(core_group.order):
        if fingerprint(model) == fp and find_isomorphism(model, core_group) is not None:
            out.append(ClassLabel(tag, k, m))
    return out


def structural_label(G: FiniteGroup) -> ClassLabel:
    found = family_matches(G)
    return found[0] if found else NONE


def theorem_a_label(G: FiniteGroup) -> ClassLabel:
    if not psi_prime(G) > NINETEEN_43:
        return NONE
    lab = structural_label(G)
    return lab if lab.tag in THEOREM_A_TAGS else NONE


def theorem_b_label(G: FiniteGroup) -> ClassLabel:
    if psi_prime(G) != NINETEEN_43:
        return NONE
    lab = structural_label(G)
    if lab.tag not in THEOREM_B_TAGS:
        return NONE
    return ClassLabel(lab.tag, lab.k, lab.m, m_group=lab.tag == "D14_x_Cm")


def interval_label(G: FiniteGroup) -> ClassLabel:
    if not THIRTYONE_77 < psi_prime(G) < NINETEEN_43:
        return NONE
    lab = structural_label(G)
    return lab if lab.tag in INTERVAL_TAGS else NONE


def label(G: FiniteGroup) -> ClassLabel:
    """Whichever of the three labels applies (NONE if none)."""
    for f in (theorem_a_label, theorem_b_label, interval_label):
        lab = f(G)
        if lab.tag != "NONE":
            return lab
    return NONE


# ----------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    campaign: str
    max_order: int
    records: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    notes: list[dict] = field(default_factory=list)
    wall_time: float = 0.0
    generated_at: str = ""

    @property
    def success(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "campaign": self.campaign,
            "maxOrder": self.max_order,
            "generatedAt": self.generated_at,
            "records": self.records,
            "violations": self.violations,
            "notes": self.notes,
            "success": self.success,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["order", "canonicalKey", "name", "psi", "psiPrime", "modular", "label", "params"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            w.writerow([
                r["order"], r["canonicalKey"], r["name"], r["psi"],
                f"{r['psiPrime']['num']}/{r['psiPrime']['den']}", r["modular"], r["label"],
                json.dumps(r["params"], sort_keys=True),
            ])
        return buf.getvalue()

    def selected(self, predicate) -> list[dict]:
        return [r for r in self.records if predicate(r)]


def _record(G: FiniteGroup, key: str, lab: ClassLabel | None = None, modular: bool | None = None) -> dict:
    q = psi_prime(G)
    return {
        "order": G.order,
        "canonicalKey": key,
        "name": G.name or identify(G),
        "psi": str(psi(G)),
        "psiPrime": {"num": q.numerator, "den": q.denominator},
        "modular": modular,
        "label": (lab or NONE).tag,
        "params": (lab or NONE).params,
    }


def record_fraction(r: dict) -> Fraction:
    return Fraction(r["psiPrime"]["num"], r["psiPrime"]["den"])


def _catalog_items(max_order: int):
    for n in range(1, max_order + 1):
        cat = catalog(n)
        for G, key in zip(cat.groups, cat.keys):
            yield G, key


def _work(args):
    """Per-group campaign step, run in a worker or inline."""
    campaign, key, name = args
    G = FiniteGroup(key_to_table(key), name=name)
    q = psi_prime(G)
    lab = label(G)
    matches = family_matches(G) if q > THIRTYONE_77 or q == THIRTYONE_77 else []
    modular = None
    if q >= THIRTYONE_77 or campaign == "properties":
        modular = is_modular_lattice(G).is_modular
    return _record(G, key, lab, modular), [str(x) for x in matches]


def _gather(campaign: str, max_order: int, stream=None):
    items = [(campaign, key, G.name) for G, key in _catalog_items(max_order)]
    workers = config.LIMITS.workers
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_work, items))
    else:
        results = [_work(it) for it in items]
    results.sort(key=lambda rm: (rm[0]["order"], rm[0]["canonicalKey"]))
    if stream is not None:
        for rec, _ in results:
            stream.write(json.dumps(rec, sort_keys=True) + "\n")
            stream.flush()
    return results


def _begin(campaign: str, max_order: int) -> VerificationReport:
    return VerificationReport(campaign, max_order,
                              generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"))


def _group_of(rec: dict) -> FiniteGroup:
    return FiniteGroup(key_to_table(rec["canonicalKey"]), name=rec["name"])


def _check_disjoint(report, rec, matches):
    if len(matches) > 1:
        report.violations.append({"check": "label disjointness", "group": rec["name"], "matches": matches})


def theorem_a_instances(max_order: int):
    """Members of the families above 19/43 with order <= max_order."""
    out = []
    for n in range(1, max_order + 1):
        for tag, k, model in _family_models_all(n):
            if tag not in THEOREM_A_TAGS:
                continue
            out.append((tag, k, model))
    return out


def _family_models_all(n: int):
    """Family members of order exactly ``n``: cores of order c times C_m."""
    out = []
    for c in range(2, n + 1):
        if n % c:
            continue
        m = n // c
        for tag, k, model in _family_models(c):
            if math.gcd(m, c) != 1:
                continue
            G = model if m == 1 else direct_product(model, cons.cyclic(m))
            out.append((tag, k, G))
    if n >= 1:
        out.append(("CYCLIC", None, cons.cyclic(n)))
    return out


def verify_theorem_a(max_order: int, stream=None) -> VerificationReport:
    """Every catalog group with psi' > 19/43 is modular and carries a
    label from the families above 19/43; every family member in range exceeds 19/43."""
    t0 = time.perf_counter()
    rep = _begin("theorem-a", max_order)
    for rec, matches in _gather("theorem-a", max_order, stream):
        q = record_fraction(rec)
        if q > NINETEEN_43:
            rep.records.append(rec)
            _check_disjoint(rep, rec, matches)
            if not rec["modular"]:
                rep.violations.append({"check": "modular lattice", "group": rec["name"]})
            if rec["label"] not in THEOREM_A_TAGS:
                rep.violations.append({"check": "family label", "group": rec["name"], "label": rec["label"]})
    for tag, k, G in theorem_a_instances(max_order):
        if not psi_prime(G) > NINETEEN_43:
            rep.violations.append({"check": "family psi' > 19/43", "family": tag, "k": k, "order": G.order,
                                   "psiPrime": format_fraction(psi_prime(G))})
    rep.wall_time = time.perf_counter() - t0
    return rep


def verify_theorem_b(max_order: int, stream=None) -> VerificationReport:
    """The catalog groups with psi' = 19/43 are exactly the members of the D8 x C_m and D14 x C_m families."""
    t0 = time.perf_counter()
    rep = _begin("theorem-b", max_order)
    for rec, matches in _gather("theorem-b", max_order, stream):
        if record_fraction(rec) == NINETEEN_43:
            G = _group_of(rec)
            lab = theorem_b_label(G)
            rec = dict(rec, label=lab.tag, params=lab.params)
            rep.records.append(rec)
            _check_disjoint(rep, rec, matches)
            if lab.tag == "NONE":
                rep.violations.append({"check": "family label", "group": rec["name"]})
            elif lab.m_group != rec["modular"]:
                rep.violations.append({"check": "modularity flag", "group": rec["name"],
                                       "expected": lab.m_group, "found": rec["modular"]})
    for n in range(1, max_order + 1):
        for tag, k, G in _family_models_all(n):
            if tag in THEOREM_B_TAGS and psi_prime(G) != NINETEEN_43:
                rep.violations.append({"check": "family psi' = 19/43", "family": tag, "order": n})
    rep.wall_time = time.perf_counter() - t0
    return rep


def _is_p_group_of(n: int, p: int) -> bool:
    f = factorize(n)
    return len(f) == 1 and f[0][0] == p


def verify_interval(max_order: int, stream=None) -> VerificationReport:
    """The (31/77, 19/43) list, the normal cyclic Sylow property above 31/77,
    primary groups above 19/43, and the non-supersoluble groups at 31/77."""
    t0 = time.perf_counter()
    rep = _begin("interval", max_order)
    for rec, matches in _gather("interval", max_order, stream):
        q = record_fraction(rec)
        G = None
        if THIRTYONE_77 < q < NINETEEN_43:
            rep.records.append(rec)
            _check_disjoint(rep, rec, matches)
            if rec["label"] not in INTERVAL_TAGS:
                rep.violations.append({"check": "interval family", "group": rec["name"]})
        if q > THIRTYONE_77 and rec["order"] > 1:
            G = _group_of(rec)
            n = G.order
            if not (_is_p_group_of(n, 2) or _is_p_group_of(n, 3)):
                primes = [p for p, _ in factorize(n)]
                cands = sorted({2, primes[-1]} & set(primes))
                if not any(find_normal_cyclic_sylow(G, p) is not None for p in cands):
                    rep.violations.append({"check": "normal cyclic Sylow", "group": rec["name"]})
            f = factorize(n)
            if q > NINETEEN_43 and len(f) == 1 and not G.is_cyclic and f[0][0] != 2:
                rep.violations.append({"check": "primary groups above 19/43 are 2-groups", "group": rec["name"]})
            if len(f) == 1 and f[0][0] == 3 and not G.is_cyclic:
                if find_isomorphism(cons.elementary_abelian(3, 2), G) is None:
                    rep.violations.append({"check": "3-groups above 31/77", "group": rec["name"]})
        if q == THIRTYONE_77:
            G = G or _group_of(rec)
            if not is_supersoluble(G):
                lab = structural_label(G)
                rep.notes.append({"note": "non-supersoluble at 31/77", "group": rec["name"], "label": lab.tag})
                if lab.tag != "A4_x_Cm":
                    rep.violations.append({"check": "non-supersoluble at 31/77", "group": rec["name"]})
            else:
                rep.notes.append({"note": "supersoluble at 31/77", "group": rec["name"]})
    for n in range(1, max_order + 1):
        for tag, k, G in _family_models_all(n):
            q = psi_prime(G)
            if tag in INTERVAL_TAGS and not THIRTYONE_77 < q < NINETEEN_43:
                rep.violations.append({"check": "interval family value", "family": tag, "order": n,
                                       "psiPrime": format_fraction(q)})
            if tag in BOUNDARY_TAGS and q != THIRTYONE_77:
                rep.violations.append({"check": "A4 family at 31/77", "order": n})
    rep.wall_time = time.perf_counter() - t0
    return rep


# ----------------------------------------------------------------------------
# property campaign


def _groups_up_to(max_order: int) -> list[FiniteGroup]:
    return [G for G, _ in _catalog_items(max_order)]


def _normal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    return all_subgroups(G).normal


def property_checks(max_order: int) -> dict[str, list[dict]]:
    """Each named check mapped to its counterexamples (empty lists mean success)."""
    groups = _groups_up_to(max_order)
    out: dict[str, list[dict]] = {}

    def name(G):
        return G.name or f"order {G.order}"

    # coprime multiplicativity, and a non-coprime failure
    bad = []
    for A in groups:
        for B in groups:
            if 1 < A.order <= B.order and math.gcd(A.order, B.order) == 1 and A.order * B.order <= 600:
                if psi(direct_product(A, B)) != psi(A) * psi(B):
                    bad.append({"A": name(A), "B": name(B)})
    D8 = cons.dihedral(8)
    if psi(direct_product(D8, cons.cyclic(2))) == psi(D8) * psi(cons.cyclic(2)):
        bad.append({"note": "D8 x C2 unexpectedly multiplicative"})
    out["coprime multiplicativity"] = bad

    bad = []
    bad_sylow = []
    bad_star = []
    bad_witness = []
    bad_luc = []
    bad_f = []
    bad_m = []
    bad_psi1 = []
    for G in groups:
        n = G.order
        q = psi_prime(G)
        if (q == 1) != G.is_cyclic or q > 1:
            bad_psi1.append({"group": name(G)})
        normals = _normal_subgroups(G)
        for N in normals:
            if psi(G) > psi(quotient(G, N)) * len(N) ** 2:
                bad.append({"group": name(G), "N": len(N)})
        for p, _ in factorize(n) if n > 1 else []:
            P = find_normal_cyclic_sylow(G, p)
            if P is None:
                continue
            lhs, rhs = psi(G), psi(P.as_group()) * psi(quotient(G, P))
            central = all(G.commuting[x].all() for x in P)
            if lhs > rhs or (lhs == rhs) != central:
                bad_sylow.append({"group": name(G), "p": p})
            H = find_complement(G, P)
            if H is not None and len(H) > 1 and not central:
                try:
                    star_bound(G, P, H)
                except AssertionError as e:
                    bad_star.append({"group": name(G), "p": p, "error": str(e)})
        primes = [p for p, _ in factorize(n)] if n > 1 else []
        for thr in (THIRTYONE_77, NINETEEN_43, Fraction(1, 2), Fraction(13, 21)):
            if q > thr:
                for t in [None] + list(range(1, len(primes) + 1)):
                    try:
                        large_element_witness(G, thr, t)
                    except Exception as e:  # a missing witness is a counterexample
                        bad_witness.append({"group": name(G), "threshold": str(thr), "t": t, "error": str(e)})
        seen = set()
        for x in range(n):
            A = SubgroupSet(G, mask_of(closure(G, [x])))
            if A.mask in seen or len(A) == n:
                continue
            seen.add(A.mask)
            K = core(G, A)
            if not len(A) // len(K) < n // len(A):
                bad_luc.append({"group": name(G), "A": len(A)})
        if not G.is_cyclic:
            qmin = primes[0]
            fq = f_bound(qmin)
            m = n // (qmin * qmin)
            shape = (n % (qmin * qmin) == 0 and math.gcd(m, math.factorial(qmin)) == 1
                     and find_isomorphism(direct_product(cons.elementary_abelian(qmin, 2), cons.cyclic(m)), G) is not None)
            if q > fq or (q == fq) != shape:
                bad_f.append({"group": name(G), "psiPrime": format_fraction(q)})
        if is_modular_lattice(G):
            try:
                m_structure_decompose(G)
            except Exception as e:
                bad_m.append({"group": name(G), "error": str(e)})
            if not is_supersoluble(G):
                bad_m.append({"group": name(G), "error": "M-group that is not supersoluble"})
    out["psi' <= 1 with equality exactly for cyclic groups"] = bad_psi1
    out["quotient bound"] = bad
    out["normal cyclic Sylow bound"] = bad_sylow
    out["star bound"] = bad_star
    out["large element witness"] = bad_witness
    out["Lucchini inequality"] = bad_luc
    out["f(q) bound and equality"] = bad_f
    out["M-group decomposition"] = bad_m

    bad = []
    for n in range(2, max(max_order, 200) + 1):
        primes = [p for p, _ in factorize(n)]
        try:
            cyclic_lower_bound(n, "product")
            cyclic_lower_bound(n, "extremal")
            for t in range(1, len(primes) + 1):
                cyclic_lower_bound(n, "truncated", t)
        except AssertionError as e:
            bad.append({"n": n, "error": str(e)})
    out["cyclic lower bounds"] = bad

    bad = []
    for m in range(2, 10**4 + 1):
        primes = [p for p, _ in factorize(m)]
        for i, q in enumerate(primes):
            for p in primes[i + 1:]:
                if not psi_cyclic(m // q) > psi_cyclic(m // p):
                    bad.append({"m": m, "q": q, "p": p})
    out["cyclic maximal monotonicity"] = bad

    out["|P|/psi(C_|P|) bounds"] = prime_power_ratio_violations()

    bad = []
    for p, n in ((2, 4), (2, 5), (3, 3), (3, 4), (5, 3)):
        if psi(cons.modular_group(p, n)) != psi(direct_product(cons.cyclic(p ** (n - 1)), cons.cyclic(p))):
            bad.append({"p": p, "n": n})
    out["M(p^n) remark"] = bad
    return out


def prime_power_ratio_violations(max_p: int = 97, max_n: int = 4) -> list[dict]:
    bounds = [
        (lambda p, n: p >= 3, Fraction(3, 7)),
        (lambda p, n: p >= 5, Fraction(5, 21)),
        (lambda p, n: p >= 7, Fraction(7, 43)),
        (lambda p, n: p >= 11, Fraction(11, 111)),
        (lambda p, n: p >= 3 and n >= 2, Fraction(9, 61)),
    ]
    bad = []
    for p in range(2, max_p + 1):
        if not is_prime(p):
            continue
        for n in range(1, max_n + 1):
            r = Fraction(p**n, psi_cyclic(p**n))
            for cond, b in bounds:
                if cond(p, n) and r > b:
                    bad.append({"p": p, "n": n, "bound": str(b)})
    return bad


def verify_properties(max_order: int, stream=None) -> VerificationReport:
    t0 = time.perf_counter()
    rep = _begin("properties", max_order)
    for name, bad in property_checks(max_order).items():
        rep.records.append({"check": name, "counterexamples": len(bad)})
        for b in bad:
            rep.violations.append(dict(b, check=name))
        if stream is not None:
            stream.write(json.dumps({"check": name, "counterexamples": len(bad)}) + "\n")
            stream.flush()
    for p in (3, 5, 7, 11, 13):
        for k in range(1, 6):
            q = psi_prime_pstar(p, 1, k)
            expect = p == 3 or (p == 5 and k <= 2)
            if (q > NINETEEN_43) != expect:
                rep.violations.append({"check": "P* sweep", "p": p, "k": k})
        for k in range(1, 6):
            if psi_prime_pstar(p, 2, k) > NINETEEN_43:
                rep.violations.append({"check": "P* sweep", "p": p, "n": 2, "k": k})
    rep.wall_time = time.perf_counter() - t0
    return rep


CAMPAIGNS = {
    "theorem-a": verify_theorem_a,
    "theorem-b": verify_theorem_b,
    "interval": verify_interval,
    "properties": verify_properties,
}


# ----------------------------------------------------------------------------
# threshold diagram


@dataclass(frozen=True)
class DiagramEntry:
    value: Fraction
    label: str
    kind: str  # "value" or "limit"
    closed: bool
    families: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "value": format_fraction(self.value),
            "num": self.value.numerator,
            "den": self.value.denominator,
            "decimal": decimal6(self.value),
            "label": self.label,
            "kind": self.kind,
            "endpoint": "closed" if self.closed else "open",
            "families": list(self.families),
        }


def _diagram_spec():
    C, E = cons.cyclic, cons.elementary_abelian
    return [
        ("psi'(A5)", "value", lambda: cons.alt(5), ("smallest non-soluble group",)),
        ("psi'(A4)", "value", lambda: cons.alt(4), ("A4 x C_m", "supersolubility threshold")),
        ("psi'(C3 x C3)", "value", lambda: E(3, 2), ("C3 x C3 x C_m",)),
        ("psi'(C3 x| Q8)", "value", cons.c3_rtimes_q8, ("C3 x| Q8 x C_m",)),
        ("psi'(D12)", "value", lambda: cons.dihedral(12),
         ("D12 x C_m", "limit of psi'(C5 rx C_{2^k}) as k grows")),
        ("psi'(D18)", "value", lambda: cons.dihedral(18), ("D18 x C_m",)),
        ("psi'(C5 rx C8)", "value", lambda: cons.rtimes_iota(C(5), 8), ("C5 rx C_{2^k}, k >= 3",)),
        ("psi'(Q16)", "value", lambda: cons.generalized_quaternion(16), ("Q16 x C_m",)),
        ("psi'(D8) = psi'(D14)", "value", lambda: cons.dihedral(8), ("D8 x C_m", "D14 x C_m")),
        ("psi'(C5 rx C4)", "value", lambda: cons.rtimes_iota(C(5), 4), ("C5 rx C4 x C_m",)),
        ("psi'(C5 rx C2)", "value", lambda: cons.dihedral(10), ("D10 x C_m",)),
        ("limit of psi'(C_{2^(k-1)} x C2) and psi'(M(2^k))", "limit", Fraction(1, 2),
         ("C_{2^(k-1)} x C2 x C_m", "M(2^k) x C_m")),
        ("psi'(C4 x C2)", "value", lambda: direct_product(C(4), C(2)), ("C_{2^(k-1)} x C2 x C_m",)),
        ("limit of psi'(C3 rx C_{2^k})", "limit", Fraction(4, 7), ("C3 rx C_{2^k} x C_m",)),
        ("psi'(S3)", "value", lambda: cons.sym(3), ("C3 rx C_{2^k} x C_m",)),
        ("psi'(Q8)", "value", lambda: cons.generalized_quaternion(8), ("Q8 x C_m",)),
        ("psi'(C2 x C2)", "value", lambda: E(2, 2), ("C2 x C2 x C_m", "largest non-cyclic value")),
        ("psi'(cyclic)", "value", lambda: C(1), ("all cyclic groups",)),
    ]


@lru_cache(maxsize=1)
def diagram_data() -> tuple[DiagramEntry, ...]:
    """Threshold values on the psi' line with their families, computed from
    constructed groups (limits are exact rationals)."""
    out = []
    for lab, kind, src, fams in _diagram_spec():
        value = src if isinstance(src, Fraction) else psi_prime(src())
        out.append(DiagramEntry(value, lab, kind, kind == "value", fams))
    out.sort(key=lambda e: e.value)
    return tuple(out)


def diagram_json() -> str:
    return json.dumps([e.to_dict() for e in diagram_data()], indent=2)


def diagram_csv() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "decimal", "label", "kind", "endpoint", "families"])
    for e in diagram_data():
        d = e.to_dict()
        w.writerow([d["value"], d["decimal"], d["label"], d["kind"], d["endpoint"], "; ".join(d["families"])])
    return buf.getvalue()


# ----------------------------------------------------------------------------
# family-parameter sampling beyond the catalog

def expected_band(tag: str) -> str:
    if tag == "CYCLIC" or tag in THEOREM_A_TAGS:
        return "above"
    if tag in THEOREM_B_TAGS:
        return "equal"
    if tag in INTERVAL_TAGS:
        return "interval"
    return "boundary"


def sample_family_members(count: int, seed: int = 0, max_order: int = 2000) -> list[tuple[str, int | None, int]]:
    """Random ``(tag, k, m)`` with ``|core(k)| m <= max_order`` and ``m`` coprime to the core."""
    import random

    rng = random.Random(seed)
    tags = sorted(FAMILY_CORES)
    out = []
    while len(out) < count:
        tag = rng.choice(tags)
        fam = FAMILY_CORES[tag]
        k = None
        if fam.kmin is not None:
            ks = [j for j in range(fam.kmin, fam.kmin + 12) if fam.order(j) <= max_order]
            if not ks:
                continue
            k = rng.choice(ks)
        n = fam.order(k)
        ms = [m for m in range(1, max_order // n + 1) if math.gcd(m, n) == 1]
        out.append((tag, k, rng.choice(ms)))
    return out


def check_family_member(tag: str, k: int | None, m: int) -> list[str]:
    """Problems found with one family member (empty when everything agrees)."""
    G = family_instance(tag, k, m)
    q = psi_prime(G)
    problems = []
    band = expected_band(tag)
    ok = {
        "above": q > NINETEEN_43,
        "equal": q == NINETEEN_43,
        "interval": THIRTYONE_77 < q < NINETEEN_43,
        "boundary": q == THIRTYONE_77,
    }[band]
    if not ok:
        problems.append(f"psi' = {format_fraction(q)} outside the {band} band")
    if m > 1 and q != psi_prime(family_instance(tag, k, 1)):
        problems.append("psi' changed under a coprime cyclic factor")
    found = family_matches(G)
    if [(x.tag, x.k, x.m) for x in found] != [(tag, k, m)]:
        problems.append(f"structural labels {[str(x) for x in found]}")
    if G.order <= config.LIMITS.lattice_cap:
        modular = is_modular_lattice(G).is_modular
        if band == "above" and not modular:
            problems.append("member above 19/43 with a non-modular lattice")
        if (tag == "D14_x_Cm" and not modular) or (tag == "D8_x_Cm" and modular):
            problems.append(f"unexpected modularity verdict {modular}")
    return problems
