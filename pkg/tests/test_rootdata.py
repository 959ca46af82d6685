from fractions import Fraction

import pytest

from nilorb.errors import GuardError, InvalidTypeError
from nilorb.rootdata import (
    Cocharacter,
    build_root_datum,
    cartan_matrix_irreducible,
    default_norm,
    get_datum,
    is_good_prime,
    is_very_good_prime,
    parse_type,
    weyl_group_elements,
)


def test_parse_type_accepts_and_rejects():
    assert parse_type("C2") == [("C", 2)]
    assert parse_type("A1+A1") == [("A", 1), ("A", 1)]
    assert parse_type("GL3") == [("GL", 3)]
    for bad in ["H3", "A0", "A9", "GL1", "GL2+A1", "B1", "E5"]:
        with pytest.raises(InvalidTypeError):
            parse_type(bad)


def test_cartan_matrices_frozen():
    assert cartan_matrix_irreducible("C", 2) == [[2, -1], [-2, 2]]
    assert cartan_matrix_irreducible("G", 2) == [[2, -1], [-3, 2]]
    assert cartan_matrix_irreducible("B", 3) == [
        [2, -1, 0],
        [-1, 2, -2],
        [0, -1, 2],
    ]
    assert cartan_matrix_irreducible("C", 3) == [
        [2, -1, 0],
        [-1, 2, -1],
        [0, -2, 2],
    ]
    assert cartan_matrix_irreducible("F", 4) == [
        [2, -1, 0, 0],
        [-1, 2, -2, 0],
        [0, -1, 2, -1],
        [0, 0, -1, 2],
    ]


def test_root_counts():
    for lab, n in [
        ("A1", 2),
        ("A2", 6),
        ("C2", 8),
        ("G2", 12),
        ("B3", 18),
        ("C3", 18),
        ("D4", 24),
        ("F4", 48),
        ("A1+A1", 4),
    ]:
        assert len(get_datum(lab).roots) == n, lab


def test_pairing_root_against_own_coroot_is_two():
    for lab in ["A2", "C2", "G2", "B3", "GL3"]:
        d = get_datum(lab)
        for r, c in zip(d.roots, d.coroots):
            assert d.pairing(r, c) == 2


def test_cartan_from_pairings():
    for lab in ["C2", "G2", "B3", "D4"]:
        d = get_datum(lab)
        for i in range(d.ss_rank):
            for j in range(d.ss_rank):
                ri = d.roots[d.simple_root_indices[i]]
                cj = d.coroots[d.simple_root_indices[j]]
                assert d.pairing(ri, cj) == d.cartan[i][j]


def test_norm_grams_frozen():
    # computed by summing alpha alpha^T over all roots in stored coords
    assert get_datum("A1").norm.gram == [[8]]
    assert get_datum("A2").norm.gram == [[12, -6], [-6, 12]]
    assert get_datum("C2").norm.gram == [[24, -12], [-12, 12]]
    assert get_datum("G2").norm.gram == [[48, -24], [-24, 16]]


def test_norm_positive_definite():
    for lab in ["A1", "A2", "C2", "G2", "B3", "C3", "D4", "GL3", "A1+A1"]:
        assert get_datum(lab).norm.is_positive_definite(), lab
    d = get_datum("C2", central_rank=2)
    assert d.norm.is_positive_definite()


def test_norm_weyl_invariant():
    for lab in ["C2", "G2", "A2"]:
        d = get_datum(lab)
        phis = [(1, 0), (0, 1), (2, -3), (1, 1)]
        for w in d.weyl_group_on_cochars():
            for phi in phis:
                wphi = tuple(
                    sum(w[i][j] * phi[j] for j in range(d.rank))
                    for i in range(d.rank)
                )
                assert d.norm.norm_sq(wphi) == d.norm.norm_sq(phi)


def test_weyl_group_orders():
    for lab, n in [("A1", 2), ("A2", 6), ("C2", 8), ("G2", 12), ("B3", 48), ("A1+A1", 4)]:
        assert len(weyl_group_elements(get_datum(lab))) == n, lab


def test_weyl_guard():
    with pytest.raises(GuardError):
        get_datum("A8").weyl_group_on_cochars()


def test_weyl_root_permutations_count():
    d = get_datum("C2")
    perms = d.weyl_root_permutations()
    assert len(perms) == 8
    # each permutation commutes with negation
    for perm in perms:
        for i in range(len(d.roots)):
            assert perm[d.negate_index(i)] == d.negate_index(perm[i])


def test_dominant_cochar():
    d = get_datum("C2")
    assert d.dominant_cochar((-1, -1)) == (1, 1)
    dom = d.dominant_cochar((3, -5))
    for j in range(d.ss_rank):
        root = d.roots[d.simple_root_indices[j]]
        assert d.pairing(root, dom) >= 0
    assert d.dominant_cochar(dom) == dom
    # rational coordinates work too
    dom = d.dominant_cochar((Fraction(-1, 2), Fraction(1, 3)))
    for j in range(d.ss_rank):
        root = d.roots[d.simple_root_indices[j]]
        assert d.pairing(root, dom) >= 0


def test_good_and_very_good_primes():
    g2 = get_datum("G2")
    assert is_good_prime(g2, 5) and is_good_prime(g2, 7)
    assert not is_good_prime(g2, 2) and not is_good_prime(g2, 3)
    assert is_good_prime(g2, 0)
    a4 = get_datum("A4")
    assert is_good_prime(a4, 5)
    assert not is_very_good_prime(a4, 5)
    assert is_very_good_prime(a4, 7)
    c3 = get_datum("C3")
    assert not is_good_prime(c3, 2)
    assert is_good_prime(c3, 3)
    gl4 = get_datum("GL4")
    assert is_good_prime(gl4, 2)
    assert not is_very_good_prime(gl4, 2)
    assert is_very_good_prime(gl4, 3)
    both = get_datum("G2+A1")
    assert not is_good_prime(both, 3)
    assert is_good_prime(both, 5)


def test_flavor_embeddings():
    sc = get_datum("A1")
    assert sc.roots == [(2,), (-2,)]
    assert sc.coroots == [(1,), (-1,)]
    ad = get_datum("A1", flavor="ad")
    assert ad.roots == [(1,), (-1,)]
    assert ad.coroots == [(2,), (-2,)]
    assert ad.pairing(ad.roots[0], ad.coroots[0]) == 2


def test_gl_datum():
    d = get_datum("GL3")
    assert d.rank == 3 and d.ss_rank == 2 and d.central_rank == 1
    assert set(d.roots) == {
        (1, -1, 0), (0, 1, -1), (1, 0, -1),
        (-1, 1, 0), (0, -1, 1), (-1, 0, 1),
    }
    assert d.roots == d.coroots
    assert d.central_functionals == [(1, 1, 1)]
    # the determinant direction has norm n^2
    assert d.norm.norm_sq((1, 1, 1)) == 9


def test_central_rank_padding():
    d = get_datum("C2", central_rank=1)
    assert d.rank == 3
    for r in d.roots:
        assert r[2] == 0
    for c in d.coroots:
        assert c[2] == 0
    assert d.norm.gram[2] == [0, 0, 1]


def test_root_subsystem_and_components():
    d = get_datum("B3")
    assert len(d.root_subsystem({0, 1})) == 6
    assert len(d.root_subsystem({1, 2})) == 8
    assert len(d.root_subsystem(set())) == 0
    assert d.simple_components({0, 2}) == [[0], [2]]
    assert d.simple_components({0, 1, 2}) == [[0, 1, 2]]
    d2 = get_datum("A1+A1")
    assert d2.simple_components({0, 1}) == [[0], [1]]


def test_reflections():
    d = get_datum("C2")
    phi = (1, 2)
    r0 = d.reflect_cochar(0, phi)
    assert d.reflect_cochar(0, r0) == phi
    chi = (1, -1)
    assert d.reflect_char(1, d.reflect_char(1, chi)) == chi


def test_cocharacter_primitive():
    d = get_datum("C2")
    assert Cocharacter(d, (1, 2)).is_primitive()
    assert not Cocharacter(d, (2, 4)).is_primitive()


def test_build_root_datum_wrapper():
    d = build_root_datum("C", 2, "simply-connected")
    assert d.label == "C2" and d.flavor == "sc"
    d = build_root_datum("A", 1, "adjoint")
    assert d.flavor == "ad"
    d = build_root_datum("GL3")
    assert d.is_gl
    assert get_datum("C2") is get_datum("C2")


def test_serialize_shape():
    s = get_datum("C2").serialize()
    assert s["type"] == "C2"
    assert s["cartan"] == [[2, -1], [-2, 2]]
    assert len(s["roots"]) == 8
    assert default_norm(get_datum("C2")).gram == s["norm_gram"]
