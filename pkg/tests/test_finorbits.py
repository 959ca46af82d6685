"""Tests for finite-field root groups, orbit slices, and rational orbit counts."""

import pytest

from nilorb.chevalley import build_lie_algebra
from nilorb.errors import ConfigError, FalsifiedError, GuardError
from nilorb.fields import QQ, CoeffField
from nilorb.finorbits import (
    OrbitPartition,
    RationalOrbit,
    adjoint_action_matrix,
    centralizer_levi_check,
    count_rational_nilpotent_orbits,
    enumerate_group,
    root_group_element,
    torus_element,
    u_orbit_check,
    u_orbit_closure,
    _stabilizer_order,
)
from nilorb.instability import enumerate_orbits
from nilorb.rootdata import get_datum


def finite_algebra(label, q):
    return build_lie_algebra(get_datum(label), CoeffField(q))


def orbit_records(label):
    return [r for r in enumerate_orbits(get_datum(label)) if r.label != "0"]


def record_rep(L, rec):
    return L.element([L.coeff.of(c) for c in rec.representative.coords])


# -- root group elements ------------------------------------------------


def test_sl2_ad_oracle():
    # basis order h, e, f; Ad(x(1)) sends f to f + h - e
    L = finite_algebra("A1", 5)
    g = root_group_element(L, 0, 1)
    Ad = adjoint_action_matrix(L, g)
    assert [Ad[r][2] for r in range(3)] == [1, 4, 1]
    assert Ad == [[1, 0, 1], [3, 1, 4], [0, 0, 1]]


def test_zero_parameter_is_identity():
    L = finite_algebra("A1", 5)
    Ad = adjoint_action_matrix(L, root_group_element(L, 0, 0))
    ident = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert Ad == ident


def test_torus_action_by_pairing_power():
    L = finite_algebra("A1", 5)
    Ad = adjoint_action_matrix(L, torus_element(L, (1,), 2))
    assert Ad == [[1, 0, 0], [0, 4, 0], [0, 0, 4]]


def test_torus_rejects_zero_scalar():
    L = finite_algebra("A1", 5)
    with pytest.raises(ConfigError):
        torus_element(L, (1,), 0)


def test_adjoint_route_guard_small_characteristic():
    # G2 has no defining route; short root exponentials need p > 3
    L = finite_algebra("G2", 3)
    with pytest.raises(GuardError):
        root_group_element(L, 1, 1)
    assert root_group_element(L, 0, 1).route == "adjoint"


def test_adjoint_route_works_at_five():
    L = finite_algebra("G2", 5)
    for i in range(len(L.datum.roots)):
        g = root_group_element(L, i, 1)
        assert g.route == "adjoint"


def test_defining_route_matches_rational_exponential():
    # C2 over F5: divided-power route versus exp(ad e) reduced mod 5
    d = get_datum("C2")
    Lq = build_lie_algebra(d, QQ)
    L5 = build_lie_algebra(d, CoeffField(5))
    for i in range(len(d.roots)):
        A = Lq.ad_matrix(Lq.root_vector(i))
        n = Lq.dim
        exp = [[QQ.one() if r == c else QQ.zero() for c in range(n)] for r in range(n)]
        term = [row[:] for row in exp]
        k = 1
        while any(v != 0 for row in term for v in row):
            nxt = [
                [
                    sum(term[r][m] * A[m][c] for m in range(n)) / k
                    for c in range(n)
                ]
                for r in range(n)
            ]
            if all(v == 0 for row in nxt for v in row):
                break
            exp = [
                [exp[r][c] + nxt[r][c] for c in range(n)] for r in range(n)
            ]
            term = nxt
            k += 1
        want = [[L5.coeff.of(v) for v in row] for row in exp]
        got = adjoint_action_matrix(L5, root_group_element(L5, i, 1))
        assert got == want


def test_compose_multiplies_matrices():
    L = finite_algebra("A1", 3)
    a = root_group_element(L, 0, 1)
    b = root_group_element(L, 1, 1)
    ab = a.compose(b)
    Ad_a = adjoint_action_matrix(L, a)
    Ad_b = adjoint_action_matrix(L, b)
    Ad_ab = adjoint_action_matrix(L, ab)
    n = len(Ad_a)
    F = L.coeff
    prod = [
        [
            sum(Ad_a[r][m] * Ad_b[m][c] for m in range(n)) % 3
            for c in range(n)
        ]
        for r in range(n)
    ]
    assert Ad_ab == prod
    assert "*" in ab.provenance


def test_rational_field_rejected():
    L = build_lie_algebra(get_datum("A1"), QQ)
    with pytest.raises(ConfigError):
        enumerate_group(L)


# -- unipotent orbit slices ---------------------------------------------


def test_u_orbit_trivial_slices_c2():
    L = finite_algebra("C2", 3)
    for rec in orbit_records("C2"):
        if rec.label == "C2":
            continue
        X = record_rep(L, rec)
        assert u_orbit_closure(L, X, rec.rep_cochar, 3) == {X.coords}
        assert u_orbit_check(L, X, rec.rep_cochar, 3)


@pytest.mark.parametrize("q,expect", [(3, 9), (5, 25)])
def test_u_orbit_regular_c2(q, expect):
    L = finite_algebra("C2", q)
    rec = [r for r in orbit_records("C2") if r.label == "C2"][0]
    X = record_rep(L, rec)
    S = u_orbit_closure(L, X, rec.rep_cochar, q)
    assert len(S) == expect
    assert u_orbit_check(L, X, rec.rep_cochar, q)


def test_u_orbit_regular_a2():
    L = finite_algebra("A2", 5)
    rec = [r for r in orbit_records("A2") if r.label == "A2"][0]
    X = record_rep(L, rec)
    assert len(u_orbit_closure(L, X, rec.rep_cochar, 5)) == 5
    assert u_orbit_check(L, X, rec.rep_cochar, 5)


def test_u_orbit_rejects_zero_and_misgraded():
    L = finite_algebra("C2", 3)
    with pytest.raises(ConfigError):
        u_orbit_closure(L, L.element([L.coeff.zero()] * L.dim), (3, 4), 3)
    with pytest.raises(ConfigError):
        u_orbit_closure(L, L.root_vector(0), (1, 0), 3)


def test_u_orbit_rejects_wrong_field():
    L = finite_algebra("C2", 3)
    rec = orbit_records("C2")[0]
    X = record_rep(L, rec)
    with pytest.raises(ConfigError):
        u_orbit_closure(L, X, rec.rep_cochar, 5)


# -- generated group ----------------------------------------------------


def test_group_orders():
    assert enumerate_group(finite_algebra("A1", 3)).shape[0] == 24
    assert enumerate_group(finite_algebra("A1", 5)).shape[0] == 120


def test_group_cache_returns_same_array():
    L = finite_algebra("A1", 3)
    a = enumerate_group(L)
    b = enumerate_group(L)
    assert a is b


def test_sp4_group_order():
    assert enumerate_group(finite_algebra("C2", 3)).shape[0] == 51840


# -- centralizer factorization ------------------------------------------


def test_centralizer_sl2_regular():
    L = finite_algebra("A1", 3)
    rec = orbit_records("A1")[0]
    X = record_rep(L, rec)
    assert centralizer_levi_check(L, X, rec.rep_cochar, 3)
    # Ad-stabilizer of e in SL2(F3) is {+-1} times the unipotent radical
    group = enumerate_group(L)
    assert _stabilizer_order(L, group, X.coords) == 6


def test_centralizer_sp4_all_orbits():
    L = finite_algebra("C2", 3)
    for rec in orbit_records("C2"):
        X = record_rep(L, rec)
        assert centralizer_levi_check(L, X, rec.rep_cochar, 3)


def test_centralizer_zero_element():
    L = finite_algebra("A1", 3)
    X = L.element([L.coeff.zero()] * L.dim)
    assert centralizer_levi_check(L, X, (1,), 3)


# -- rational orbit partitions ------------------------------------------


@pytest.mark.parametrize(
    "q,sizes,stabs",
    [
        (3, [1, 4, 4], [24, 6, 6]),
        (5, [1, 12, 12], [120, 10, 10]),
        (7, [1, 24, 24], [336, 14, 14]),
    ],
)
def test_rational_orbits_sl2(q, sizes, stabs):
    L = finite_algebra("A1", q)
    part = count_rational_nilpotent_orbits(L, q)
    assert part.total == q * q
    assert sorted(o.size for o in part.orbits) == sizes
    assert sorted(o.stabilizer_order for o in part.orbits) == sorted(stabs)
    labels = sorted(o.label for o in part.orbits)
    assert labels == ["0", "A1", "A1"]
    for o in part.orbits:
        want = (0,) if o.label == "0" else (2,)
        assert o.weighted_dynkin == want


def test_rational_orbits_sp4():
    L = finite_algebra("C2", 3)
    part = count_rational_nilpotent_orbits(L, 3)
    assert part.total == 3**8
    assert part.group_order == 51840
    assert len(part.orbits) == 7
    by_label = {}
    for o in part.orbits:
        by_label.setdefault(o.label, []).append(o)
    assert {k: len(v) for k, v in by_label.items()} == {
        "0": 1,
        "A1": 2,
        "~A1": 2,
        "C2": 2,
    }
    assert sorted(o.size for o in by_label["A1"]) == [40, 40]
    assert sorted(o.size for o in by_label["~A1"]) == [240, 480]
    assert sorted(o.size for o in by_label["C2"]) == [2880, 2880]
    for o in part.orbits:
        assert o.size * o.stabilizer_order == 51840
    wdds = {o.label: o.weighted_dynkin for o in part.orbits}
    assert wdds["A1"] == (1, 0)
    assert wdds["~A1"] == (0, 2)
    assert wdds["C2"] == (2, 2)


def test_partition_serialize_shape():
    L = finite_algebra("A1", 3)
    part = count_rational_nilpotent_orbits(L, 3)
    blob = part.serialize()
    assert set(blob) == {"type", "q", "group_order", "nilpotent_count", "orbits"}
    assert blob["type"] == "A1"
    assert blob["q"] == 3
    assert blob["nilpotent_count"] == 9
    for row in blob["orbits"]:
        assert {"size", "stabilizer_order", "weighted_dynkin"} <= set(row)


def test_partition_invariants_enforced():
    L = finite_algebra("A1", 3)
    part = count_rational_nilpotent_orbits(L, 3)
    good = part.orbits
    with pytest.raises(FalsifiedError):
        OrbitPartition("A1", 3, 24, good, part.total + 1)
    bad = [RationalOrbit(good[0].representative, 5, 5, "A1", (2,))]
    with pytest.raises(FalsifiedError):
        OrbitPartition("A1", 3, 24, bad, 5)


def test_rational_orbits_deterministic():
    L = finite_algebra("A1", 3)
    a = count_rational_nilpotent_orbits(L, 3).serialize()
    b = count_rational_nilpotent_orbits(L, 3).serialize()
    assert a == b
