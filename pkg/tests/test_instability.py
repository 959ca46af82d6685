"""Tests for the destabilizing-cocharacter search and orbit enumeration."""

from fractions import Fraction

import pytest

from nilorb.chevalley import build_lie_algebra
from nilorb.errors import ConfigError, FalsifiedError
from nilorb.fields import QQ, CoeffField
from nilorb.instability import (
    component_type,
    enumerate_orbits,
    instability_parabolic,
    is_distinguished,
    mu,
    optimal_search,
    orbit_label,
    richardson_representative,
    theorem_assoc_check,
    verify_associated,
)
from nilorb.rootdata import get_datum


def sl2():
    d = get_datum("A1")
    L = build_lie_algebra(d, QQ)
    return L, L.root_vector(0), L.root_vector(1), L.coroot_element(0)


# -- instability weight and ball search ---------------------------------


def test_mu_oracle_sl2():
    L, e, f, h = sl2()
    assert mu(L, e, (1,)) == 2
    assert mu(L, f, (1,)) == -2
    assert mu(L, e + h, (1,)) == 0


def test_mu_rejects_zero():
    L, e, f, h = sl2()
    with pytest.raises(ConfigError):
        mu(L, L.zero(), (1,))


def test_optimal_search_sl2_regular():
    L, e, f, h = sl2()
    rep = optimal_search(L, e, 8)
    assert rep.best_ratio_sq == Fraction(1, 2)
    assert rep.argmax == [(1,)]
    assert rep.mu_at_best == 2


def test_optimal_search_semisimple_has_no_destabilizer():
    L, e, f, h = sl2()
    assert optimal_search(L, e + f, 8).argmax == []
    assert optimal_search(L, e + f, 8).best_ratio_sq is None
    assert optimal_search(L, h, 8).argmax == []


def test_optimal_search_rejects_bad_input():
    L, e, f, h = sl2()
    with pytest.raises(ConfigError):
        optimal_search(L, L.zero(), 8)
    with pytest.raises(ConfigError):
        optimal_search(L, e, 0)


def test_optimal_search_c2_regular_ratio():
    d = get_datum("C2")
    L = build_lie_algebra(d, QQ)
    reg = next(o for o in enumerate_orbits(d) if o.label == "C2")
    rep = optimal_search(L, reg.representative, 9 * 120)
    assert rep.best_ratio_sq == Fraction(1, 30)
    assert (3, 4) in rep.argmax


def test_instability_parabolic():
    L, e, f, h = sl2()
    p = instability_parabolic(L, (1,))
    assert p["levi_root_indices"] == []
    assert p["unipotent_root_indices"] == [0]

    d = get_datum("C2")
    L2 = build_lie_algebra(d, QQ)
    p2 = instability_parabolic(L2, (1, 1))
    assert p2["levi_root_indices"] == [0, 4]
    assert p2["unipotent_root_indices"] == [1, 2, 3]


# -- distinguished gradings and labels ----------------------------------


def test_distinguished_filter_c2_g2():
    c2 = get_datum("C2")
    g2 = get_datum("G2")
    # regular gradings are distinguished
    assert is_distinguished(c2, (0, 1), (3, 4))
    assert is_distinguished(g2, (0, 1), (6, 10))
    # C2 admits no nontrivial marking
    assert not is_distinguished(c2, (0, 1), (1, 2))
    assert not is_distinguished(c2, (0, 1), (2, 1))
    # G2 admits the short-root marking only
    assert is_distinguished(g2, (0, 1), (2, 4))
    assert not is_distinguished(g2, (0, 1), (4, 6))


def test_component_type_labels():
    b3 = get_datum("B3")
    assert component_type(b3, [0, 1]) == "A2"
    assert component_type(b3, [1, 2]) == "B2"
    c3 = get_datum("C3")
    assert component_type(c3, [1, 2]) == "C2"
    assert component_type(c3, [2]) == "A1"
    c4 = get_datum("C4")
    assert component_type(c4, [1, 2, 3]) == "C3"
    b4 = get_datum("B4")
    assert component_type(b4, [1, 2, 3]) == "B3"
    assert component_type(get_datum("G2"), [0, 1]) == "G2"
    assert component_type(get_datum("A3"), [0, 1, 2]) == "A3"
    assert component_type(get_datum("D4"), [0, 1, 2, 3]) == "D4"
    d5 = get_datum("D5")
    assert component_type(d5, [1, 2, 3, 4]) == "D4"
    assert component_type(get_datum("F4"), [0, 1, 2, 3]) == "F4"
    assert component_type(get_datum("E6"), [0, 1, 2, 3, 4, 5]) == "E6"


def test_orbit_label_composition():
    c3 = get_datum("C3")
    assert orbit_label(c3, (), ()) == "0"
    assert orbit_label(c3, (0, 1), ()) == "~A2"
    assert orbit_label(c3, (0, 2), ()) == "~A1+A1"
    g2 = get_datum("G2")
    assert orbit_label(g2, (0, 1), (0,)) == "G2(a1)"


# -- orbit enumeration ---------------------------------------------------

ORBIT_COUNTS = {
    "A1": 2,
    "A2": 3,
    "A3": 5,
    "C2": 4,
    "B3": 7,
    "C3": 8,
    "G2": 5,
    "D4": 12,
}


def test_orbit_counts():
    for label, count in ORBIT_COUNTS.items():
        assert len(enumerate_orbits(get_datum(label))) == count, label


def test_a_type_counts_follow_partitions():
    # nilpotent orbits of sl_n biject with partitions of n
    partitions = {2: 2, 3: 3, 4: 5}
    for n, p in partitions.items():
        assert len(enumerate_orbits(get_datum(f"A{n - 1}"))) == p


def test_c2_orbit_table():
    orbs = enumerate_orbits(get_datum("C2"))
    table = [(o.label, o.dim, o.cochar, o.weighted_dynkin_diagram) for o in orbs]
    assert table == [
        ("0", 0, (0, 0), (0, 0)),
        ("A1", 4, (1, 1), (1, 0)),
        ("~A1", 6, (1, 2), (0, 2)),
        ("C2", 8, (3, 4), (2, 2)),
    ]


def test_g2_orbit_table():
    orbs = enumerate_orbits(get_datum("G2"))
    table = [(o.label, o.dim, o.cochar, o.weighted_dynkin_diagram) for o in orbs]
    assert table == [
        ("0", 0, (0, 0), (0, 0)),
        ("A1", 6, (1, 2), (0, 1)),
        ("~A1", 8, (2, 3), (1, 0)),
        ("G2(a1)", 10, (2, 4), (0, 2)),
        ("G2", 12, (6, 10), (2, 2)),
    ]
    sub = next(o for o in orbs if o.label == "G2(a1)")
    assert sub.marked_subset == (0,)


def test_b3_orbit_table():
    orbs = enumerate_orbits(get_datum("B3"))
    assert [o.label for o in orbs] == [
        "0", "A1", "~A1", "A1+~A1", "A2", "B2", "B3",
    ]
    assert [o.dim for o in orbs] == [0, 8, 10, 12, 14, 16, 18]


def test_c3_orbit_table():
    orbs = enumerate_orbits(get_datum("C3"))
    assert [o.label for o in orbs] == [
        "0", "A1", "~A1", "~A1+A1", "C2", "~A2", "C3(a1)", "C3",
    ]
    assert [o.dim for o in orbs] == [0, 6, 10, 12, 14, 14, 16, 18]
    sub = next(o for o in orbs if o.label == "C3(a1)")
    assert sub.marked_subset == (1,)


def test_d4_orbit_table():
    orbs = enumerate_orbits(get_datum("D4"))
    dims = {}
    for o in orbs:
        dims[o.dim] = dims.get(o.dim, 0) + 1
    assert dims == {0: 1, 10: 1, 12: 3, 16: 1, 18: 1, 20: 3, 22: 1, 24: 1}
    labels = [o.label for o in orbs]
    assert labels.count("A1+A1") == 3
    assert labels.count("A3") == 3
    assert "D4(a1)" in labels and "D4" in labels


def test_stored_cochar_is_dominant():
    for label in ORBIT_COUNTS:
        d = get_datum(label)
        for o in enumerate_orbits(d):
            assert d.dominant_cochar(o.cochar) == o.cochar
            assert d.dominant_cochar(o.rep_cochar) == o.cochar


def test_weighted_diagrams_distinct():
    for label in ORBIT_COUNTS:
        orbs = enumerate_orbits(get_datum(label))
        wdds = {o.weighted_dynkin_diagram for o in orbs}
        assert len(wdds) == len(orbs), label


def test_orbit_dims_even():
    for label in ORBIT_COUNTS:
        for o in enumerate_orbits(get_datum(label)):
            assert o.dim % 2 == 0


def test_representative_is_weight_two():
    for label in ORBIT_COUNTS:
        d = get_datum(label)
        L = build_lie_algebra(d, QQ)
        for o in enumerate_orbits(d):
            if o.label == "0":
                assert o.representative.is_zero()
                continue
            assert L.graded_support(o.representative, o.rep_cochar) == [2]
            assert all(c.denominator == 1 for c in o.representative.coords)


def test_no_adjoint_fallback_in_tested_types():
    for label in ORBIT_COUNTS:
        for o in enumerate_orbits(get_datum(label)):
            assert not o.used_adjoint_lattice


def test_enumeration_deterministic():
    a = [o.serialize() for o in enumerate_orbits(get_datum("C3"))]
    b = [o.serialize() for o in enumerate_orbits(get_datum("C3"))]
    assert a == b


def test_record_serialization_keys():
    o = enumerate_orbits(get_datum("C2"))[1]
    s = o.serialize()
    assert set(s) == {
        "label",
        "levi_subset",
        "marked_subset",
        "cochar",
        "rep_cochar",
        "weighted_dynkin_diagram",
        "dim",
        "representative",
        "used_adjoint_lattice",
    }


def test_richardson_representative_surjective_choice():
    d = get_datum("C2")
    x = richardson_representative(d, (0, 1), (3, 4))
    y = richardson_representative(d, (0, 1), (3, 4))
    assert not x.is_zero()
    assert x.coords == y.coords


# -- associated-cocharacter verification --------------------------------


def test_verify_associated_sl2():
    L, e, f, h = sl2()
    ok, reason = verify_associated(L, e, (1,))
    assert ok, reason
    ok, reason = verify_associated(L, e, (2,))
    assert not ok and "homogeneous" in reason
    ok, reason = verify_associated(L, e + f, (1,))
    assert not ok


def test_verify_associated_levi_span_failure():
    d = get_datum("A2")
    L = build_lie_algebra(d, QQ)
    x = L.root_vector(d.simple_root_indices[0])
    ok, reason = verify_associated(L, x, (2, 2))
    assert not ok and "coroot span" in reason
    ok, reason = verify_associated(L, x, (1, 0))
    assert ok, reason


def test_theorem_check_c2_report():
    d = get_datum("C2")
    L = build_lie_algebra(d, QQ)
    ratios = {}
    for o in enumerate_orbits(d):
        if o.label == "0":
            continue
        res = theorem_assoc_check(L, o.representative, o.rep_cochar)
        assert res["verified"]
        assert res["argmax_count"] == 1
        assert res["homogeneous_weight"] == 2
        ratios[o.label] = tuple(res["best_ratio_sq"])
    assert ratios == {"A1": (1, 3), "~A1": (1, 6), "C2": (1, 30)}


def test_theorem_check_small_types_good_prime():
    for label, p in (("A1", 5), ("A2", 5), ("G2", 5)):
        d = get_datum(label)
        F = CoeffField(p)
        L = build_lie_algebra(d, F)
        for o in enumerate_orbits(d):
            if o.label == "0":
                continue
            rep = L.element([F.of(c) for c in o.representative.coords])
            res = theorem_assoc_check(L, rep, o.rep_cochar)
            assert res["verified"], (label, o.label)


def test_theorem_check_rejects_small_bound():
    L, e, f, h = sl2()
    with pytest.raises(ConfigError):
        theorem_assoc_check(L, e, (1,), bound=8)


def test_theorem_check_misaligned_cochar_falsified():
    d = get_datum("C2")
    L = build_lie_algebra(d, QQ)
    rec = next(o for o in enumerate_orbits(d) if o.label == "A1")
    # the dominant cochar is a Weyl conjugate, not aligned with this
    # representative, so the optimality certificate must fail
    assert rec.cochar != rec.rep_cochar
    with pytest.raises(FalsifiedError):
        theorem_assoc_check(L, rec.representative, rec.cochar)


def test_theorem_check_semisimple_falsified():
    L, e, f, h = sl2()
    with pytest.raises(FalsifiedError):
        theorem_assoc_check(L, e + f, (1,))
