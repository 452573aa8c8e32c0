import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from psigroups import constructions as cons
from psigroups.classify import (
    FAMILY_CORES,
    INTERVAL_TAGS,
    NONE,
    THEOREM_A_TAGS,
    check_family_member,
    diagram_csv,
    diagram_data,
    diagram_json,
    family_instance,
    family_matches,
    interval_label,
    label,
    prime_power_ratio_violations,
    property_checks,
    record_fraction,
    sample_family_members,
    split_cyclic_cofactor,
    theorem_a_label,
    theorem_b_label,
    verify_interval,
    verify_properties,
    verify_theorem_a,
    verify_theorem_b,
)
from psigroups.errors import GroupError
from psigroups.group import direct_product
from psigroups.psi import psi, psi_cyclic, psi_prime, psi_prime_pstar, NINETEEN_43
from psigroups.smallgroups import catalog


def names(report):
    return {r["name"] for r in report.records}


def noncyclic(report):
    return {r["name"] for r in report.records if r["label"] != "CYCLIC"}


def test_theorem_a_labels():
    G = direct_product(cons.generalized_quaternion(8), cons.cyclic(15))
    lab = theorem_a_label(G)
    assert (lab.tag, lab.m) == ("Q8_x_Cm", 15)
    lab = theorem_a_label(cons.rtimes_iota(cons.cyclic(3), 8))
    assert (lab.tag, lab.k, lab.m) == ("C3_RTIMES_2K_x_Cm", 3, 1)
    assert theorem_a_label(cons.dihedral(8)) == NONE
    assert theorem_a_label(cons.cyclic(9)).tag == "CYCLIC"
    assert theorem_a_label(cons.modular_group(2, 5)).params == {"k": 5, "m": 1}
    assert theorem_a_label(direct_product(cons.elementary_abelian(2, 2), cons.cyclic(5))).params == {"k": 2, "m": 5}


def test_theorem_b_labels():
    G = direct_product(cons.dihedral(8), cons.cyclic(3))
    # psi(D8 x C3) = 19 * 7 = 133 and psi(C24) = 43 * 7 = 301
    assert psi(G) == 133 and psi_cyclic(24) == 301
    lab = theorem_b_label(G)
    assert (lab.tag, lab.m, lab.m_group) == ("D8_x_Cm", 3, False)
    lab = theorem_b_label(cons.dihedral(14))
    assert (lab.tag, lab.m, lab.m_group) == ("D14_x_Cm", 1, True)
    assert theorem_b_label(cons.cyclic(8)) == NONE


def test_interval_labels():
    lab = interval_label(cons.generalized_quaternion(16))
    assert (lab.tag, lab.m) == ("Q16_x_Cm", 1)
    assert interval_label(cons.c3_rtimes_q8()).tag == "C3_RTIMES_Q8_x_Cm"
    assert psi_prime(cons.c3_rtimes_q8()) == Fraction(125, 301)
    assert interval_label(cons.dihedral(18)).tag == "D18_x_Cm"
    assert psi_prime(cons.dihedral(18)) == Fraction(79, 183)
    assert interval_label(cons.rtimes_iota(cons.cyclic(5), 8)).params == {"k": 3, "m": 1}
    assert interval_label(cons.alt(4)) == NONE
    assert interval_label(cons.dihedral(8)) == NONE


def test_label_str_and_none():
    assert str(NONE) == "NONE"
    assert str(theorem_a_label(cons.generalized_quaternion(8))) == "Q8_x_Cm(m=1)"
    assert label(cons.alt(5)) == NONE


def test_cofactor_split():
    G = direct_product(cons.generalized_quaternion(8), cons.cyclic(15))
    C, m = split_cyclic_cofactor(G)
    assert m == 15
    assert split_cyclic_cofactor(cons.dihedral(8))[1] == 1
    assert split_cyclic_cofactor(direct_product(cons.sym(3), cons.cyclic(5)))[1] == 5


def test_family_instance_errors():
    with pytest.raises(GroupError):
        family_instance("D8_x_Cm", None, 2)
    with pytest.raises(GroupError):
        family_instance("M2K_x_Cm", 3, 1)
    with pytest.raises(GroupError):
        family_instance("Q8_x_Cm", 2, 1)
    assert family_instance("CYCLIC", None, 7).is_cyclic


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_sampled_family_members(seed):
    for tag, k, m in sample_family_members(2, seed=seed, max_order=600):
        assert check_family_member(tag, k, m) == []


def test_every_family_core_recognised():
    for tag, fam in FAMILY_CORES.items():
        k = fam.kmin
        G = family_instance(tag, k, 1)
        assert [(x.tag, x.k) for x in family_matches(G)] == [(tag, k)]


def test_label_disjointness_over_catalog():
    for n in range(1, 25):
        for G in catalog(n).groups:
            assert len(family_matches(G)) <= 1
            hits = [f(G) for f in (theorem_a_label, theorem_b_label, interval_label)]
            assert sum(h != NONE for h in hits) <= 1


def test_theorem_a_campaign_16():
    rep = verify_theorem_a(16)
    assert rep.success, rep.violations
    assert noncyclic(rep) == {"C2xC2", "C2xC4", "C2xC8", "M16", "Q8", "S3", "D10", "C3 rx C4", "C2xC6"}
    assert all(r["modular"] for r in rep.records)


def test_theorem_a_campaign_24():
    rep = verify_theorem_a(24)
    assert rep.success, rep.violations
    extra = noncyclic(rep) - noncyclic(verify_theorem_a(16))
    assert extra == {"C2xC12", "Q8xC3", "C3 rx C8", "C2xC10", "C5 rx C4"}
    assert all(record_fraction(r) > NINETEEN_43 for r in rep.records)


def test_theorem_a_campaign_1():
    rep = verify_theorem_a(1)
    assert [(r["name"], r["label"]) for r in rep.records] == [("C1", "CYCLIC")]


def test_theorem_b_campaign():
    rep = verify_theorem_b(24)
    assert rep.success
    assert [(r["name"], r["modular"]) for r in rep.records] == [("D8", False), ("D14", True), ("D8xC3", False)]
    assert names(verify_theorem_b(8)) == {"D8"}
    assert verify_theorem_b(4).records == []


def test_interval_campaign():
    rep = verify_interval(24)
    assert rep.success, rep.violations
    assert names(rep) == {"C3xC3", "D12", "Q16", "D18", "C3xC6", "Dic24"}
    assert all(r["label"] in INTERVAL_TAGS for r in rep.records)
    non_ss = [n for n in rep.notes if n["note"] == "non-supersoluble at 31/77"]
    assert [n["group"] for n in non_ss] == ["A4"]
    assert {r["name"] for r in verify_interval(16).records if r["order"] == 16} == {"Q16"}


def test_two_and_three_group_bands():
    for n in (2, 4, 8, 16, 3, 9):
        for G in catalog(n).groups:
            q = psi_prime(G)
            if n in (3, 9) and q > Fraction(31, 77):
                assert G.is_cyclic or G.name == "C3xC3"
            if n in (2, 4, 8, 16) and q == NINETEEN_43:
                assert G.name == "D8"
            if n in (2, 4, 8, 16) and Fraction(31, 77) < q < NINETEEN_43:
                assert G.name == "Q16"
            if n in (2, 4, 8, 16) and q > NINETEEN_43:
                assert theorem_a_label(G).tag in THEOREM_A_TAGS


def test_property_checks_small():
    bad = property_checks(12)
    assert all(v == [] for v in bad.values()), {k: v for k, v in bad.items() if v}


def test_properties_campaign():
    rep = verify_properties(24)
    assert rep.success, rep.violations[:5]
    assert len(rep.records) >= 13


def test_prime_power_ratio_bounds():
    assert prime_power_ratio_violations() == []


def test_pstar_sweep_around_19_43():
    for p in (3, 5, 7, 11, 13):
        for n in (1, 2):
            for k in range(1, 6):
                above = psi_prime_pstar(p, n, k) > NINETEEN_43
                assert above == (n == 1 and (p == 3 or (p == 5 and k <= 2)))


def test_report_serialisation():
    buf = io.StringIO()
    rep = verify_theorem_b(24, stream=buf)
    lines = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert len(lines) == sum(len(catalog(n)) for n in range(1, 25))
    d = json.loads(rep.to_json())
    assert d["campaign"] == "theorem-b" and d["maxOrder"] == 24 and d["success"]
    assert set(d["records"][0]) == {"order", "canonicalKey", "name", "psi", "psiPrime", "modular", "label", "params"}
    csv = rep.to_csv().splitlines()
    assert csv[0].startswith("order,canonicalKey") and len(csv) == 4
    assert ",19/43," in csv[1]


def test_reports_deterministic():
    a = json.loads(verify_interval(18).to_json())
    b = json.loads(verify_interval(18).to_json())
    a.pop("generatedAt"), b.pop("generatedAt")
    assert a == b


def test_diagram_values():
    values = [e.value for e in diagram_data()]
    expected = [Fraction(x) for x in ("211/1617", "31/77", "25/61", "125/301", "3/7", "79/183", "391/903",
                                      "25/57", "19/43", "103/231", "31/63", "1/2", "23/43", "4/7", "13/21",
                                      "27/43", "7/11", "1")]
    assert values == expected
    by_value = {e.value: e for e in diagram_data()}
    assert by_value[Fraction(27, 43)].to_dict()["decimal"] == "0.627907"
    assert by_value[Fraction(31, 63)].closed
    assert not by_value[Fraction(4, 7)].closed and by_value[Fraction(4, 7)].kind == "limit"
    assert not by_value[Fraction(1, 2)].closed
    assert json.loads(diagram_json())[0]["value"] == "211/1617"
    assert diagram_csv().splitlines()[0] == "value,decimal,label,kind,endpoint,families"


def test_diagram_limits_are_approached():
    # psi'(C3 rx C_{2^k}) decreases toward 4/7, psi'(C5 rx C_{2^k}) toward 3/7
    c3 = [psi_prime(cons.rtimes_iota(cons.cyclic(3), 2**k)) for k in range(1, 7)]
    assert all(a > b > Fraction(4, 7) for a, b in zip(c3, c3[1:]))
    c5 = [psi_prime_pstar(5, 1, k) for k in range(1, 30)]
    assert all(a > b > Fraction(3, 7) for a, b in zip(c5, c5[1:]))
    assert c5[-1] - Fraction(3, 7) < Fraction(1, 10**6)
