import random
from fractions import Fraction

import pytest

from nilorb.chevalley import (
    build_lie_algebra,
    charpoly,
    extraspecial_pairs,
    is_nondegenerate,
    matrix_is_nilpotent,
    squarefree_part,
    structure_constants,
)
from nilorb.errors import GuardError
from nilorb.fields import QQ, CoeffField
from nilorb.realization import get_realization, has_realization
from nilorb.rootdata import get_datum

F3 = CoeffField(3)
F5 = CoeffField(5)
F7 = CoeffField(7)


def test_sl2_bracket_table():
    L = build_lie_algebra(get_datum("A1"), QQ)
    h, e, f = (L.basis_element(k) for k in range(3))
    assert L.bracket(h, e).coords == (0, 2, 0)
    assert L.bracket(h, f).coords == (0, 0, -2)
    assert L.bracket(e, f).coords == (1, 0, 0)
    assert L.bracket(e, e).is_zero()


def test_structure_constant_magnitudes():
    # |N| is one more than the length of the descending root string
    for lab, maxabs in [("A2", 1), ("C2", 2), ("G2", 3), ("B3", 2), ("F4", 2)]:
        N = structure_constants(get_datum(lab))
        assert max(abs(v) for v in N.values()) == maxabs, lab


def test_structure_constant_symmetries():
    d = get_datum("G2")
    N = structure_constants(d)
    for (i, j), v in N.items():
        assert N[(j, i)] == -v
        ni, nj = d.negate_index(i), d.negate_index(j)
        assert N[(ni, nj)] == -v


def test_jacobi_verified_at_build():
    for lab in ["A2", "C2", "G2", "B3", "C3", "D4", "F4"]:
        d = get_datum(lab)
        build_lie_algebra(d, QQ)
        assert d._jacobi_verified


def test_bracket_bilinear_and_alternating():
    L = build_lie_algebra(get_datum("A2"), F7)
    rng = random.Random(11)
    for _ in range(20):
        x = L.element([rng.randrange(7) for _ in range(L.dim)])
        y = L.element([rng.randrange(7) for _ in range(L.dim)])
        assert L.bracket(x, x).is_zero()
        assert (L.bracket(x, y) + L.bracket(y, x)).is_zero()


def test_ad_matrix_matches_bracket():
    for F in [QQ, F5]:
        L = build_lie_algebra(get_datum("C2"), F)
        rng = random.Random(5)
        x = L.element([rng.randrange(5) for _ in range(L.dim)])
        M = L.ad_matrix(x)
        for k in range(L.dim):
            col = [M[i][k] for i in range(L.dim)]
            want = L.bracket(x, L.basis_element(k)).coords
            assert tuple(col) == want


def test_nilpotency():
    L = build_lie_algebra(get_datum("A1"), QQ)
    assert L.is_nilpotent(L.basis_element(1))
    assert L.is_nilpotent(L.basis_element(2))
    assert not L.is_nilpotent(L.basis_element(0))
    assert not L.is_nilpotent(L.element([0, 1, 1]))
    # mod 2 the coroot becomes central, hence ad-nilpotent
    L2 = build_lie_algebra(get_datum("A1"), CoeffField(2))
    assert L2.is_nilpotent(L2.basis_element(0))
    L3 = build_lie_algebra(get_datum("A1"), F3)
    assert not L3.is_nilpotent(L3.basis_element(0))


def test_centralizer_dimensions():
    L = build_lie_algebra(get_datum("A1"), QQ)
    assert len(L.centralizer(L.basis_element(1))) == 1
    L = build_lie_algebra(get_datum("A2"), QQ)
    d = get_datum("A2")
    reg = L.root_vector(d.simple_root_indices[0]) + L.root_vector(
        d.simple_root_indices[1]
    )
    assert len(L.centralizer(reg)) == 2
    assert len(L.centralizer(L.zero())) == L.dim


def test_grading_slices():
    d = get_datum("A1")
    L = build_lie_algebra(d, QQ)
    g = L.grading((1,))
    assert g.dim_slice(0) == 1
    assert g.dim_slice(2) == 1
    assert g.dim_slice(-2) == 1
    assert g.total_dim() == 3
    # bracket adds weights
    for i in g.slice_indices(2):
        for j in g.slice_indices(-2):
            out = L.bracket(L.basis_element(i), L.basis_element(j))
            assert L.graded_support(out, (1,)) in ([], [0])


def test_graded_support_and_component():
    d = get_datum("C2")
    L = build_lie_algebra(d, QQ)
    x = L.element([0, 0] + [1] * 8)
    supp = L.graded_support(x, (1, 1))
    assert supp == sorted(supp)
    lo = L.component_in_slice(x, (1, 1), supp[0])
    assert not lo.is_zero()


def test_extraspecial_pairs_cover_non_simple_roots():
    d = get_datum("G2")
    pairs = extraspecial_pairs(d)
    tall = [c for c in d.positive_simple_coords if sum(c) >= 2]
    assert set(pairs) == set(tall)
    for gamma, (xi, eta) in pairs.items():
        assert tuple(a + b for a, b in zip(xi, eta)) == gamma


def test_realization_exists_only_for_classical():
    assert has_realization(get_datum("A1"))
    assert has_realization(get_datum("GL4"))
    assert not has_realization(get_datum("G2"))
    assert not has_realization(get_datum("A1", flavor="ad"))
    with pytest.raises(GuardError):
        get_realization(get_datum("F4"))


def test_realization_roundtrip_all_fields():
    for lab in ["A2", "C2", "B2", "D4", "GL3"]:
        d = get_datum(lab)
        r = get_realization(d)
        L = build_lie_algebra(d, QQ)
        for F in [QQ, F7]:
            for k in range(L.dim):
                coords = [0] * L.dim
                coords[k] = 1
                M = r.matrix_of(F, coords)
                assert r.extract(F, M) == [F.of(c) for c in coords]


def test_realization_extraction_characteristic_guard():
    r = get_realization(get_datum("B2"))
    assert r.extract_denominator == 2
    with pytest.raises(GuardError):
        r.extract(CoeffField(2), [[0] * 5 for _ in range(5)])


def test_realization_weights_sl2():
    r = get_realization(get_datum("A1"))
    assert r.weights == [(1,), (-1,)]


def test_trace_form_sl2():
    L = build_lie_algebra(get_datum("A1"), QQ)
    assert L.invariant_form() == [
        [2, 0, 0],
        [0, 0, 1],
        [0, 1, 0],
    ]


def test_invariant_form_associativity():
    # tr([x,y] z) = tr(x [y,z]) in gram terms: B([x,y],z) = B(x,[y,z])
    for lab, F in [("C2", QQ), ("A2", F5), ("G2", QQ)]:
        L = build_lie_algebra(get_datum(lab), F)
        gram = L.invariant_form()
        rng = random.Random(3)

        def form(u, v):
            acc = F.zero()
            for i, ui in enumerate(u.coords):
                if F.is_zero(ui):
                    continue
                for j, vj in enumerate(v.coords):
                    if not F.is_zero(vj):
                        acc = F.add(acc, F.mul(F.mul(ui, vj), gram[i][j]))
            return acc

        for _ in range(5):
            x = L.element([rng.randrange(5) for _ in range(L.dim)])
            y = L.element([rng.randrange(5) for _ in range(L.dim)])
            z = L.element([rng.randrange(5) for _ in range(L.dim)])
            assert form(L.bracket(x, y), z) == form(x, L.bracket(y, z))


def test_nondegeneracy_by_characteristic():
    assert is_nondegenerate(QQ, build_lie_algebra(get_datum("C2"), QQ).invariant_form())
    for p in [3, 7]:
        F = CoeffField(p)
        assert is_nondegenerate(F, build_lie_algebra(get_datum("C2"), F).invariant_form())
    # sl_p in characteristic p is degenerate, gl_p stays nondegenerate
    assert not is_nondegenerate(F5, build_lie_algebra(get_datum("A4"), F5).invariant_form())
    assert is_nondegenerate(F5, build_lie_algebra(get_datum("GL5"), F5).invariant_form())
    assert is_nondegenerate(F3, build_lie_algebra(get_datum("GL3"), F3).invariant_form())


def test_charpoly_oracles():
    assert charpoly(QQ, [[0, 1], [0, 0]]) == [0, 0, 1]
    assert charpoly(QQ, [[1, 1], [0, 2]]) == [2, -3, 1]
    # companion matrix of x^3 - 2x + 5
    C = [[0, 0, -5], [1, 0, 2], [0, 1, 0]]
    assert charpoly(QQ, C) == [5, -2, 0, 1]


def test_charpoly_cayley_hamilton_random():
    rng = random.Random(17)
    for _ in range(15):
        n = rng.randint(1, 5)
        A = [[rng.randrange(5) for _ in range(n)] for _ in range(n)]
        p = charpoly(F5, A)
        acc = [[0] * n for _ in range(n)]
        for c in reversed(p):
            acc = [
                [
                    sum(acc[i][k] * A[k][j] for k in range(n)) % 5
                    for j in range(n)
                ]
                for i in range(n)
            ]
            for i in range(n):
                acc[i][i] = (acc[i][i] + c) % 5
        assert all(v == 0 for row in acc for v in row)


def test_squarefree_part():
    # (x^2)^5 = x^10 over F_5 reduces to x
    f = [0, 0] + [0] * 8 + [1]
    assert squarefree_part(F5, f) == [0, 1]
    # (x-1)^2 (x-2) over QQ
    f = [-2, 5, -4, 1]
    sf = squarefree_part(QQ, f)
    assert sf == [2, -3, 1]


def test_matrix_is_nilpotent():
    assert matrix_is_nilpotent(QQ, [[0, 1], [0, 0]])
    assert not matrix_is_nilpotent(QQ, [[1, 0], [0, 0]])


def _jordan_properties(L, x):
    s, n = L.jordan_decompose(x)
    assert (s + n).coords == x.coords
    assert L.bracket(s, n).is_zero()
    from nilorb.realization import get_realization

    r = get_realization(L.datum)
    F = L.coeff
    assert matrix_is_nilpotent(F, r.matrix_of(F, n.coords))
    # the semisimple part satisfies a squarefree polynomial
    M = r.matrix_of(F, s.coords)
    sf = squarefree_part(F, charpoly(F, M))
    from nilorb.chevalley import _poly_eval_matrix

    val = _poly_eval_matrix(F, sf, M)
    assert all(F.is_zero(v) for row in val for v in row)
    return s, n


def test_jordan_gl2_example():
    L = build_lie_algebra(get_datum("GL2"), F5)
    r = get_realization(get_datum("GL2"))
    x = L.element(r.extract(F5, [[1, 1], [0, 2]]))
    s, n = _jordan_properties(L, x)
    assert n.is_zero()
    x = L.element(r.extract(F5, [[1, 1], [0, 1]]))
    s, n = _jordan_properties(L, x)
    assert r.matrix_of(F5, s.coords) == [[1, 0], [0, 1]]
    assert r.matrix_of(F5, n.coords) == [[0, 1], [0, 0]]


def test_jordan_random_elements():
    rng = random.Random(23)
    for lab, F in [("GL3", F3), ("GL2", F7), ("C2", F7), ("A2", QQ), ("B2", F3)]:
        L = build_lie_algebra(get_datum(lab), F)
        for _ in range(6):
            x = L.element([rng.randrange(3) for _ in range(L.dim)])
            _jordan_properties(L, x)


def test_jordan_guard_without_realization():
    L = build_lie_algebra(get_datum("G2"), QQ)
    with pytest.raises(GuardError):
        L.jordan_decompose(L.basis_element(0))


def test_lambda_map_sl2():
    L = build_lie_algebra(get_datum("A1"), F5)
    assert L.lambda_map([[1, 0], [0, 1]]).is_zero()
    lam = L.lambda_map([[1, 1], [0, 1]])
    assert lam.coords == (0, 1, 0)
    lam = L.lambda_map([[1, 0], [1, 1]])
    assert lam.coords == (0, 0, 1)


def test_lambda_map_conjugation_equivariance():
    F = F7
    L = build_lie_algebra(get_datum("A1"), F)
    r = get_realization(get_datum("A1"))
    u = [[1, 3], [0, 1]]
    g = [[1, 0], [2, 1]]
    ginv = [[1, 0], [-2, 1]]

    def mm(A, B):
        return [
            [
                F.of(sum(A[i][k] * B[k][j] for k in range(2)))
                for j in range(2)
            ]
            for i in range(2)
        ]

    conj = mm(mm(g, u), ginv)
    lhs = L.lambda_map(conj)
    lam = L.lambda_map(u)
    rhs_mat = mm(mm(g, r.matrix_of(F, lam.coords)), ginv)
    assert r.extract(F, rhs_mat) == list(lhs.coords)


def test_lambda_map_rejects_singular():
    from nilorb.errors import ConfigError

    L = build_lie_algebra(get_datum("A1"), F5)
    with pytest.raises(ConfigError):
        L.lambda_map([[0, 0], [0, 0]])
