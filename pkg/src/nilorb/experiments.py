"""Reproducible experiment runners with JSON-ready output.

Each runner validates its configuration, drives the corresponding
module operations, and returns a plain dict: scalars, strings, lists,
and nested dicts only.  The dict carries a fixed schema version, the
command name, the echoed configuration, and the result payload, so the
command line and the HTTP service can share one implementation and one
serialization."""

import random
import re

import numpy as np

from .chevalley import build_lie_algebra
from .errors import BadPrimeError, ConfigError, FalsifiedError
from .fields import QQ, CoeffField
from .finorbits import (
    adjoint_action_matrix,
    centralizer_factors,
    count_rational_nilpotent_orbits,
    root_group_element,
    torus_element,
    u_orbit_check,
)
from .instability import enumerate_orbits, theorem_assoc_check
from .linalg import inverse, mat_mul, mat_vec
from .localquat import LaurentField, artin_schreier_solvable, c2_orbit_census
from .realization import get_realization, has_realization
from .rootdata import get_datum, is_good_prime

SCHEMA_VERSION = 1


def _document(command, config, result):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": result,
    }


def _datum_for(type_label, char):
    datum = get_datum(type_label)
    if char:
        if char < 2:
            raise ConfigError(f"characteristic must be 0 or a prime, got {char}")
        if not is_good_prime(datum, char):
            raise BadPrimeError(f"{char} is a bad prime for type {datum.label}")
    return datum


def _algebra_for(type_label, char):
    datum = _datum_for(type_label, char)
    coeff = QQ if char == 0 else CoeffField(char)
    return build_lie_algebra(datum, coeff)


def _finite_records(type_label, q):
    """Orbit records plus the finite-coefficient algebra, checking q."""
    datum = _datum_for(type_label, q)
    L = build_lie_algebra(datum, CoeffField(q))
    return L, enumerate_orbits(datum)


def _rep_over(L, record):
    return L.element([L.coeff.of(c) for c in record.representative.coords])


# -- orbit table ---------------------------------------------------------


def run_orbits(type_label, char=0):
    """Geometric nilpotent orbit table for the given type."""
    datum = _datum_for(type_label, char)
    records = enumerate_orbits(datum)
    result = {
        "type": datum.label,
        "orbit_count": len(records),
        "orbits": [r.serialize() for r in records],
    }
    return _document(
        "orbits", {"type": type_label, "char": char}, result
    )


# -- associated-cocharacter optimality ----------------------------------


def run_optimal(type_label, orbit_index, bound=None, char=0):
    """Optimality certificate for one orbit's associated cocharacter."""
    L = _algebra_for(type_label, char)
    records = enumerate_orbits(L.datum)
    if not 0 <= orbit_index < len(records):
        raise ConfigError(
            f"orbit index {orbit_index} out of range 0..{len(records) - 1}"
        )
    record = records[orbit_index]
    if record.label == "0":
        raise ConfigError("the zero orbit has no destabilizing cocharacter")
    x = _rep_over(L, record)
    report = theorem_assoc_check(L, x, record.rep_cochar, bound)
    report["orbit_label"] = record.label
    report["dim"] = record.dim
    return _document(
        "optimal",
        {
            "type": type_label,
            "char": char,
            "orbit_index": orbit_index,
            "bound": bound,
        },
        report,
    )


# -- dense unipotent orbit slices ---------------------------------------


def run_uorbit(type_label, q):
    """U-orbit slice identity for every nonzero orbit over F_q."""
    L, records = _finite_records(type_label, q)
    d = L.datum
    rows = []
    for record in records:
        if record.label == "0":
            continue
        x = _rep_over(L, record)
        phi = record.rep_cochar
        slice_dim = sum(1 for a in d.roots if d.pairing(a, phi) >= 3)
        passed = u_orbit_check(L, x, phi, q)
        if not passed:
            raise FalsifiedError(
                f"U-orbit of {record.label} is not the affine slice"
            )
        rows.append(
            {
                "label": record.label,
                "slice_dim": slice_dim,
                "orbit_size": q**slice_dim,
                "passed": True,
            }
        )
    return _document(
        "uorbit",
        {"type": type_label, "q": q},
        {"type": L.datum.label, "q": q, "orbits": rows},
    )


# -- group centralizer decomposition ------------------------------------


def run_centralizer(type_label, q):
    """Levi-times-unipotent factorization of orbit centralizers."""
    L, records = _finite_records(type_label, q)
    rows = []
    for record in records:
        if record.label == "0":
            continue
        x = _rep_over(L, record)
        factors = centralizer_factors(L, x, record.rep_cochar, q)
        if not factors["exact"]:
            raise FalsifiedError(
                f"centralizer of {record.label} fails the Levi factorization"
            )
        rows.append(
            {
                "label": record.label,
                "order": factors["order"],
                "levi_order": factors["levi_order"],
                "unipotent_order": factors["unipotent_order"],
                "passed": True,
            }
        )
    return _document(
        "centralizer",
        {"type": type_label, "q": q},
        {"type": L.datum.label, "q": q, "orbits": rows},
    )


# -- rational orbit partition -------------------------------------------


def run_rational(type_label, q):
    """Rational nilpotent orbit partition over F_q."""
    L, _ = _finite_records(type_label, q)
    partition = count_rational_nilpotent_orbits(L, q)
    return _document(
        "rational", {"type": type_label, "q": q}, partition.serialize()
    )


# -- local-field census --------------------------------------------------


def run_c2local(q, precision=16):
    """Arithmetic orbit census for the rank-one local form."""
    report = c2_orbit_census(q, precision)
    return _document("c2local", {"q": q, "prec": precision}, report)


# -- algebraic-logarithm sampling ---------------------------------------


def _lambda_linear_matrix(L):
    """Integer matrix of the algebraic logarithm as a linear map from
    vectorized defining matrices to basis coordinates, mod p."""
    F = L.coeff
    real = get_realization(L.datum)
    n = real.size
    gram = L.invariant_form()
    ginv = inverse(F, gram)
    if ginv is None:
        raise FalsifiedError(
            "trace form is degenerate; the logarithm is unavailable"
        )
    proj = [
        [F.of(real.mats[k][b][a]) for a in range(n) for b in range(n)]
        for k in range(L.dim)
    ]
    T = mat_mul(F, ginv, proj)
    return np.array([[int(v) for v in row] for row in T], dtype=np.int64)


def _ad_tensor(L):
    """Stacked adjoint matrices of the basis, for batched nilpotency."""
    mats = []
    for k in range(L.dim):
        coords = [L.coeff.one() if j == k else L.coeff.zero() for j in range(L.dim)]
        A = L.ad_matrix(L.element(coords))
        mats.append([[int(v) for v in row] for row in A])
    return np.array(mats, dtype=np.int64)


def _batched_nilpotent(L, coord_rows, p):
    """True when ad of every coordinate row is nilpotent mod p."""
    ad = _ad_tensor(L)
    M = np.einsum("nk,kij->nij", coord_rows % p, ad) % p
    steps = 0
    while steps < 6:
        if not M.any():
            return True
        M = np.einsum("nij,njk->nik", M, M) % p
        steps += 1
    return not M.any()


def _unipotent_word(L, rng, gens, max_len=4):
    g = None
    for _ in range(rng.randint(1, max_len)):
        factor = rng.choice(gens)
        g = factor if g is None else g.compose(factor)
    return g


def run_lambda(type_label, char, samples=200, seed=0):
    """Statistical checks of the algebraic logarithm on the unipotent
    variety: vanishing at the identity, nilpotent values on sampled
    unipotent words, exact conjugation equivariance on sampled pairs,
    and injectivity on the full upper unipotent group when small."""
    if char < 2:
        raise ConfigError("the logarithm sampling needs a finite prime field")
    if samples < 1:
        raise ConfigError("sample count must be positive")
    L = _algebra_for(type_label, char)
    d = L.datum
    q = char
    if not has_realization(d):
        raise ConfigError(
            f"type {d.label} has no defining matrix realization"
        )
    real = get_realization(d)
    n = real.size
    F = L.coeff
    rng = random.Random(seed)

    ident = [[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)]
    lam_one = L.lambda_map(ident)
    if not lam_one.is_zero():
        raise FalsifiedError("the logarithm of the identity is nonzero")

    pos = [i for i in range(len(d.roots)) if d.is_positive_index(i)]
    pos_gens = [root_group_element(L, i, t) for i in pos for t in range(1, q)]
    all_gens = [
        root_group_element(L, i, t)
        for i in range(len(d.roots))
        for t in range(1, q)
    ]
    for k in range(d.rank):
        unit = tuple(1 if j == k else 0 for j in range(d.rank))
        all_gens.extend(torus_element(L, unit, s) for s in range(2, q))

    T = _lambda_linear_matrix(L)
    words = [_unipotent_word(L, rng, pos_gens) for _ in range(samples)]
    vecs = np.array(
        [
            [int(g.mat[a][b]) - (1 if a == b else 0) for a in range(n) for b in range(n)]
            for g in words
        ],
        dtype=np.int64,
    )
    coords = (vecs @ T.T) % q
    spot = rng.randrange(samples)
    direct = L.lambda_map(words[spot].mat)
    if [int(c) for c in direct.coords] != [int(c) for c in coords[spot]]:
        raise FalsifiedError("linearized logarithm disagrees with the direct one")
    if not _batched_nilpotent(L, coords, q):
        raise FalsifiedError("a sampled unipotent word has non-nilpotent logarithm")

    pairs = max(1, samples // 10)
    for _ in range(pairs):
        u = _unipotent_word(L, rng, pos_gens)
        g = _unipotent_word(L, rng, all_gens, max_len=3)
        ginv = inverse(F, g.mat)
        conj = mat_mul(F, mat_mul(F, g.mat, u.mat), ginv)
        lhs = L.lambda_map(conj)
        Ad = adjoint_action_matrix(L, g)
        rhs = mat_vec(F, Ad, list(L.lambda_map(u.mat).coords))
        if list(lhs.coords) != rhs:
            raise FalsifiedError("the logarithm is not conjugation equivariant")

    borel_size = None
    borel_injective = None
    if q ** len(pos) <= 1000:
        mats = []
        stack = [(ident, 0)]
        while stack:
            mat, depth = stack.pop()
            if depth == len(pos):
                mats.append(mat)
                continue
            for t in range(q):
                g = root_group_element(L, pos[depth], t)
                stack.append((mat_mul(F, mat, g.mat), depth + 1))
        vecs = np.array(
            [
                [int(m[a][b]) - (1 if a == b else 0) for a in range(n) for b in range(n)]
                for m in mats
            ],
            dtype=np.int64,
        )
        images = (vecs @ T.T) % q
        borel_size = len(mats)
        if len({tuple(int(v) for v in row) for row in images}) != borel_size:
            raise FalsifiedError(
                "the logarithm is not injective on the upper unipotent group"
            )
        borel_injective = True

    result = {
        "type": d.label,
        "char": q,
        "identity_zero": True,
        "nilpotent_checked": samples,
        "equivariance_checked": pairs,
        "borel_size": borel_size,
        "borel_injective": borel_injective,
    }
    return _document(
        "lambda",
        {"type": type_label, "char": char, "samples": samples, "seed": seed},
        result,
    )


# -- Artin-Schreier solvability ------------------------------------------

_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(?:t(?:\^(-?\d+))?)?$")


def parse_laurent(K, text):
    """Parse a Laurent polynomial in t with integer coefficients.

    Grammar: terms joined by + or -, each term an integer, t^k with an
    integer exponent, or coeff*t^k.  Whitespace is ignored."""
    src = text.replace(" ", "")
    if not src:
        raise ConfigError("empty Laurent expression")
    if src == "0":
        return K.zero()
    pieces = re.findall(r"[+-]?(?:[^+-]|(?<=\^)[+-])+", src)
    if "".join(pieces) != src:
        raise ConfigError(f"cannot parse Laurent expression {text!r}")
    out = K.zero()
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM_RE.match(body)
        if not m or not body:
            raise ConfigError(f"bad Laurent term {piece!r} in {text!r}")
        coeff_s, exp_s = m.groups()
        if coeff_s is None and "t" not in body:
            raise ConfigError(f"bad Laurent term {piece!r} in {text!r}")
        coeff = sign * (int(coeff_s) if coeff_s is not None else 1)
        if "t" not in body:
            exp = 0
        elif exp_s is None:
            exp = 1
        else:
            exp = int(exp_s)
        out = K.add(out, K.term(coeff % K.R.q, exp) if coeff % K.R.q else K.zero())
    return out


def run_artin_schreier(p, g_text, precision=24):
    """Solvability of y^p - y = g over the Laurent field."""
    K = LaurentField(p, precision)
    g = parse_laurent(K, g_text)
    solvable = artin_schreier_solvable(g, K)
    return _document(
        "artin-schreier",
        {"p": p, "g": g_text, "prec": precision},
        {"p": p, "g": g_text, "solvable": solvable},
    )


# -- root datum echo -----------------------------------------------------


def run_rootdatum(type_label):
    """Serialized root datum for inspection."""
    datum = get_datum(type_label)
    return _document("rootdatum", {"type": type_label}, datum.serialize())
