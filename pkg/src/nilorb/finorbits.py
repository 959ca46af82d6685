"""Finite Chevalley group actions over prime fields.

Group elements are concrete matrices, taken in the defining realization
for the classical types that have one and in the adjoint realization
otherwise.  Orbit and centralizer computations enumerate exactly over
the prime field of the algebra, behind hard guards on the search sizes.
Everything here is single threaded; the breadth-first closures visit
states in a fixed order, so results are deterministic.
"""

from fractions import Fraction
from itertools import product as iter_product

import numpy as np

from .chevalley import LieAlgebra, LieElement, build_lie_algebra
from .errors import ConfigError, FalsifiedError, GuardError
from .fields import QQ
from .instability import (
    _cochar_to_cartan,
    enumerate_orbits,
    mu,
    optimal_search,
)
from .linalg import inverse, mat_mul, mat_vec
from .realization import get_realization, has_realization
from .rootdata import vec_gcd

# enumeration guards
U_ORBIT_GUARD = 10**7
CONE_SCAN_GUARD = 10**6
GROUP_ORDER_GUARD = 10**5

_GROUP_CACHE = {}
_AD_POWER_CACHE = {}


def _require_prime_field(L, q):
    if L.coeff.p == 0 or q != L.coeff.p:
        raise ConfigError("finite enumeration needs the algebra's own prime field")


def _route(datum):
    return "defining" if has_realization(datum) else "adjoint"


def _field_power(F, s, w):
    base = s if w >= 0 else F.inv(s)
    out = F.one()
    for _ in range(abs(w)):
        out = F.mul(out, base)
    return out


def _slot_vector(L, cochar):
    """Integer coordinates of a cocharacter on the Cartan slot basis."""
    out = []
    for v in _cochar_to_cartan(L, cochar):
        f = Fraction(v)
        if f.denominator != 1:
            raise ConfigError("cocharacter is fractional on the Cartan slots")
        out.append(int(f))
    return out


class GroupElement:
    """Invertible matrix together with the word that produced it."""

    __slots__ = ("algebra", "mat", "route", "provenance")

    def __init__(self, algebra, mat, route, provenance):
        self.algebra = algebra
        self.mat = mat
        self.route = route
        self.provenance = provenance

    def compose(self, other):
        if self.algebra is not other.algebra or self.route != other.route:
            raise ConfigError("group elements live in different realizations")
        F = self.algebra.coeff
        return GroupElement(
            self.algebra,
            mat_mul(F, self.mat, other.mat),
            self.route,
            f"{self.provenance}*{other.provenance}",
        )

    def __repr__(self):
        return f"GroupElement({self.provenance})"


def _integer_ad_powers(datum, root_index):
    """Powers of ad(e_alpha) over the rationals, computed once per root."""
    key = (id(datum), root_index)
    if key not in _AD_POWER_CACHE:
        Lz = build_lie_algebra(datum, QQ)
        A = Lz.ad_matrix(Lz.root_vector(root_index))
        powers = [A]
        cur = A
        while True:
            cur = [
                [sum(cur[i][k] * A[k][j] for k in range(Lz.dim)) for j in range(Lz.dim)]
                for i in range(Lz.dim)
            ]
            if all(v == 0 for row in cur for v in row):
                break
            powers.append(cur)
        _AD_POWER_CACHE[key] = powers
    return _AD_POWER_CACHE[key]


def root_group_element(L: LieAlgebra, root_index, t) -> GroupElement:
    """One-parameter root subgroup value x_alpha(t)."""
    F = L.coeff
    t = F.of(t)
    d = L.datum
    if has_realization(d):
        R = get_realization(d)
        n = R.size
        mat = [[F.zero()] * n for _ in range(n)]
        coef = F.one()
        for k, P in enumerate(R.root_divided_powers(root_index)):
            if k:
                coef = F.mul(coef, t)
            for i in range(n):
                for j in range(n):
                    if P[i][j]:
                        mat[i][j] = F.add(mat[i][j], F.mul(coef, F.of(P[i][j])))
        g = GroupElement(L, mat, "defining", f"x[{root_index}]({t})")
    else:
        powers = _integer_ad_powers(d, root_index)
        deg = len(powers)
        if F.p and deg >= F.p:
            raise GuardError(
                f"ad-nilpotency degree {deg} needs characteristic above {F.p}"
            )
        n = L.dim
        mat = [[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)]
        coef = F.one()
        fact = 1
        for k, P in enumerate(powers, start=1):
            coef = F.mul(coef, t)
            fact *= k
            scale = F.div(coef, F.of(fact))
            for i in range(n):
                for j in range(n):
                    if P[i][j]:
                        mat[i][j] = F.add(mat[i][j], F.mul(scale, F.of(P[i][j])))
        g = GroupElement(L, mat, "adjoint", f"x[{root_index}]({t})")
    _assert_automorphism(L, g)
    return g


def torus_element(L: LieAlgebra, cochar, scalar) -> GroupElement:
    """Image of the cocharacter at an invertible scalar."""
    F = L.coeff
    s = F.of(scalar)
    if F.is_zero(s):
        raise ConfigError("torus elements need a nonzero scalar")
    cochar = tuple(cochar)
    d = L.datum
    if has_realization(d):
        R = get_realization(d)
        slots = _slot_vector(L, cochar)
        n = R.size
        mat = [[F.zero()] * n for _ in range(n)]
        for p in range(n):
            w = sum(a * b for a, b in zip(R.weights[p], slots))
            mat[p][p] = _field_power(F, s, w)
        g = GroupElement(L, mat, "defining", f"torus{cochar}({s})")
    else:
        n = L.dim
        mat = [[F.zero()] * n for _ in range(n)]
        for k in range(L.rank):
            mat[k][k] = F.one()
        for i, alpha in enumerate(d.roots):
            k = L.rank + i
            mat[k][k] = _field_power(F, s, d.pairing(alpha, cochar))
        g = GroupElement(L, mat, "adjoint", f"torus{cochar}({s})")
    _assert_automorphism(L, g)
    return g


def adjoint_action_matrix(L: LieAlgebra, g: GroupElement):
    """Matrix of Ad(g) on the Chevalley basis, columns = basis images."""
    F = L.coeff
    if g.route == "adjoint":
        return [row[:] for row in g.mat]
    R = get_realization(L.datum)
    ginv = inverse(F, g.mat)
    if ginv is None:
        raise AssertionError("group element is not invertible")
    basis_mats = getattr(L, "_defining_basis_mats", None)
    if basis_mats is None:
        basis_mats = []
        for k in range(L.dim):
            unit = [F.one() if j == k else F.zero() for j in range(L.dim)]
            basis_mats.append(R.matrix_of(F, unit))
        L._defining_basis_mats = basis_mats
    cols = [
        R.extract(F, mat_mul(F, mat_mul(F, g.mat, Mk), ginv)) for Mk in basis_mats
    ]
    return [[cols[k][r] for k in range(L.dim)] for r in range(L.dim)]


def _assert_automorphism(L, g):
    """Structure-constant transport check for a generator."""
    F = L.coeff
    Ad = adjoint_action_matrix(L, g)
    cols = [[Ad[r][k] for r in range(L.dim)] for k in range(L.dim)]
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = [F.zero()] * L.dim
            for c, coeff in L.table.get((i, j), ()):
                for r in range(L.dim):
                    lhs[r] = F.add(lhs[r], F.mul(F.of(coeff), Ad[r][c]))
            rhs = L.bracket_coords(cols[i], cols[j])
            if lhs != rhs:
                raise AssertionError("generator fails the automorphism check")


# -- dense U-orbit verification -----------------------------------------


def u_orbit_closure(L: LieAlgebra, X: LieElement, phi, q):
    """Orbit of X under the unipotent radical of the cocharacter's
    parabolic, as a set of coordinate tuples.  Every element of U is a
    product of one root-group factor per positive-weight root in a
    fixed order, so folding the root groups right to left enumerates
    the orbit exactly."""
    _require_prime_field(L, q)
    if X.is_zero():
        raise ConfigError("the zero element has no dense orbit slice")
    F = L.coeff
    d = L.datum
    phi = tuple(phi)
    if L.graded_support(X, phi) != [2]:
        raise ConfigError("representative must be homogeneous of weight two")
    u_roots = [i for i, a in enumerate(d.roots) if d.pairing(a, phi) >= 1]
    if q ** len(u_roots) > U_ORBIT_GUARD:
        raise GuardError("unipotent group too large to enumerate")
    S = {X.coords}
    for i in reversed(u_roots):
        mats = [
            adjoint_action_matrix(L, root_group_element(L, i, t))
            for t in range(1, q)
        ]
        nxt = set(S)
        for M in mats:
            for y in S:
                nxt.add(tuple(mat_vec(F, M, list(y))))
        S = nxt
    return S


def u_orbit_check(L: LieAlgebra, X: LieElement, phi, q) -> bool:
    """Exact set equality of the U-orbit of X with the affine slice
    X + (sum of the weight >= 3 spaces)."""
    S = u_orbit_closure(L, X, phi, q)
    F = L.coeff
    d = L.datum
    phi = tuple(phi)
    v_idx = [i for i, a in enumerate(d.roots) if d.pairing(a, phi) >= 3]
    base = list(X.coords)
    expected = set()
    for vals in iter_product(range(q), repeat=len(v_idx)):
        y = base[:]
        for i, v in zip(v_idx, vals):
            y[L.rank + i] = F.of(v)
        expected.add(tuple(y))
    return S == expected


# -- group enumeration ---------------------------------------------------


def enumerate_group(L: LieAlgebra):
    """All elements of the group generated by the root subgroups, as a
    numpy array of matrices.  Cached per algebra."""
    p = L.coeff.p
    if p == 0:
        raise ConfigError("group enumeration needs a finite field")
    key = (id(L.datum), p)
    if key in _GROUP_CACHE:
        return _GROUP_CACHE[key]
    gens = []
    for i in range(len(L.datum.roots)):
        for t in range(1, p):
            gens.append(
                np.array(root_group_element(L, i, t).mat, dtype=np.int64)
            )
    mats = np.stack(gens)
    m = mats.shape[1]
    ident = np.eye(m, dtype=np.int64)
    visited = {ident.tobytes()}
    acc = [ident.reshape(1, m * m)]
    frontier = ident.reshape(1, m, m)
    while frontier.shape[0]:
        prods = np.einsum("fij,gjk->fgik", frontier, mats) % p
        prods = np.unique(prods.reshape(-1, m * m), axis=0)
        fresh = [row for row in prods if row.tobytes() not in visited]
        for row in fresh:
            visited.add(row.tobytes())
        if len(visited) > GROUP_ORDER_GUARD:
            raise GuardError("generated group exceeds the enumeration guard")
        if fresh:
            block = np.stack(fresh)
            acc.append(block)
            frontier = block.reshape(-1, m, m)
        else:
            frontier = np.empty((0, m, m), dtype=np.int64)
    group = np.concatenate(acc).reshape(-1, m, m)
    _GROUP_CACHE[key] = group
    return group


def _defining_position_weights(L, phi):
    R = get_realization(L.datum)
    slots = _slot_vector(L, phi)
    return [sum(a * b for a, b in zip(R.weights[p], slots)) for p in range(R.size)]


def _basis_weights(L, phi):
    return [L.weight_of_basis(k, phi) for k in range(L.dim)]


def _defining_matrix_np(L, coords):
    R = get_realization(L.datum)
    return np.array(R.matrix_of(L.coeff, list(coords)), dtype=np.int64)


def _stabilizer_order(L, group, coords):
    p = L.coeff.p
    if _route(L.datum) == "defining":
        RX = _defining_matrix_np(L, coords)
        left = np.einsum("nij,jk->nik", group, RX) % p
        right = np.einsum("ij,njk->nik", RX, group) % p
        return int(np.all(left == right, axis=(1, 2)).sum())
    x = np.array([int(c) for c in coords], dtype=np.int64)
    imgs = (group @ x) % p
    return int(np.all(imgs == x, axis=1).sum())


def centralizer_factors(L: LieAlgebra, X: LieElement, phi, q) -> dict:
    """Order data for the centralizer of X in the finite group: the
    full order, the order of the block part preserving the weight
    spaces of phi, the order of the intersection with the unipotent
    radical, and whether the two factors multiply out to C exactly."""
    _require_prime_field(L, q)
    phi = tuple(phi)
    group = enumerate_group(L)
    p = q
    if _route(L.datum) == "defining":
        RX = _defining_matrix_np(L, X.coords)
        left = np.einsum("nij,jk->nik", group, RX) % p
        right = np.einsum("ij,njk->nik", RX, group) % p
        C = group[np.all(left == right, axis=(1, 2))]
        w = _defining_position_weights(L, phi)
    else:
        x = np.array([int(c) for c in X.coords], dtype=np.int64)
        C = group[np.all((group @ x) % p == x, axis=1)]
        w = _basis_weights(L, phi)
    m = C.shape[1]
    warr = np.array(w, dtype=np.int64)
    same = np.equal.outer(warr, warr)
    below = np.less.outer(warr, warr)
    ident = np.eye(m, dtype=np.int64)

    levi_mask = np.all((C == 0) | same[None, :, :], axis=(1, 2))
    Cphi = C[levi_mask]
    unip_mask = np.all((C == ident[None, :, :]) | ~same[None, :, :], axis=(1, 2))
    unip_mask &= np.all((C == 0) | ~below[None, :, :], axis=(1, 2))
    R = C[unip_mask]

    prods = np.einsum("aij,bjk->abik", Cphi, R) % p
    prod_keys = {row.tobytes() for row in prods.reshape(-1, m * m)}
    c_keys = {row.tobytes() for row in C.reshape(-1, m * m)}
    exact = prod_keys == c_keys and Cphi.shape[0] * R.shape[0] == C.shape[0]
    return {
        "order": int(C.shape[0]),
        "levi_order": int(Cphi.shape[0]),
        "unipotent_order": int(R.shape[0]),
        "exact": exact,
    }


def centralizer_levi_check(L: LieAlgebra, X: LieElement, phi, q) -> bool:
    """Exact Levi decomposition of the centralizer of X in the finite
    group: C factors as (block part preserving the weight spaces of
    phi) times (C intersected with the unipotent radical), uniquely."""
    if X.is_zero():
        _require_prime_field(L, q)
        return True
    return centralizer_factors(L, X, phi, q)["exact"]


# -- rational orbit partition -------------------------------------------


class RationalOrbit:
    __slots__ = (
        "representative",
        "size",
        "stabilizer_order",
        "label",
        "weighted_dynkin",
    )

    def __init__(self, representative, size, stabilizer_order, label, wdd):
        self.representative = representative
        self.size = size
        self.stabilizer_order = stabilizer_order
        self.label = label
        self.weighted_dynkin = tuple(wdd)

    def serialize(self):
        return {
            "size": self.size,
            "stabilizer_order": self.stabilizer_order,
            "label": self.label,
            "weighted_dynkin": list(self.weighted_dynkin),
            "representative": [str(c) for c in self.representative.coords],
        }


class OrbitPartition:
    """Rational nilpotent orbits with exact sizes and stabilizers."""

    def __init__(self, datum_label, q, group_order, orbits, total):
        self.datum_label = datum_label
        self.q = q
        self.group_order = group_order
        self.orbits = orbits
        self.total = total
        if sum(o.size for o in orbits) != total:
            raise FalsifiedError("orbit sizes do not sum to the nilpotent count")
        for o in orbits:
            if o.size * o.stabilizer_order != group_order:
                raise FalsifiedError("orbit-stabilizer identity failed")

    def serialize(self):
        return {
            "type": self.datum_label,
            "q": self.q,
            "group_order": self.group_order,
            "nilpotent_count": self.total,
            "orbits": [o.serialize() for o in self.orbits],
        }

    def __repr__(self):
        sizes = [o.size for o in self.orbits]
        return f"OrbitPartition({self.datum_label}, q={self.q}, sizes={sizes})"


def _nilpotent_cone_coords(L, q):
    """All coordinate vectors whose matrix (defining realization when
    available, otherwise the adjoint one) is nilpotent."""
    dim = L.dim
    if q**dim > CONE_SCAN_GUARD:
        raise GuardError("full-cone scan exceeds the enumeration guard")
    coords = np.indices((q,) * dim).reshape(dim, -1).T.astype(np.int64)
    F = L.coeff
    if _route(L.datum) == "defining":
        R = get_realization(L.datum)
        basis = np.stack(
            [
                np.array(
                    R.matrix_of(F, [F.one() if j == k else F.zero() for j in range(dim)]),
                    dtype=np.int64,
                )
                for k in range(dim)
            ]
        )
    else:
        basis = np.stack(
            [
                np.array(
                    L.ad_matrix(L.basis_element(k)), dtype=np.int64
                )
                for k in range(dim)
            ]
        )
    m = basis.shape[1]
    keep = []
    for start in range(0, coords.shape[0], 50000):
        chunk = coords[start : start + 50000]
        M = np.tensordot(chunk, basis, axes=([1], [0])) % q
        e = 1
        while e < m:
            M = np.einsum("nij,njk->nik", M, M) % q
            e *= 2
        keep.append(~np.any(M, axis=(1, 2)))
    mask = np.concatenate(keep)
    nilp = coords[mask]
    return np.unique(nilp, axis=0)


def _derived_weighted_dynkin(L, x, bound):
    """Weighted Dynkin diagram of the geometric orbit through x,
    recovered from the instability optimum.

    The primitive optimal destabilizers of x that land in the standard
    torus are pairwise Weyl-conjugate and restrict to a constant
    minimal weight m on x; the associated cocharacter of the orbit is
    the dominant class representative scaled by 2/m.  This needs no
    standard-position assumption on x."""
    d = L.datum
    report = optimal_search(L, x, bound)
    doms = {d.dominant_cochar(psi) for psi in report.argmax}
    if len(doms) != 1:
        raise FalsifiedError(
            "optimal destabilizers do not form a single Weyl class"
        )
    weights = {mu(L, x, psi) for psi in report.argmax}
    if len(weights) != 1:
        raise FalsifiedError("optimal destabilizers disagree on minimal weight")
    m = weights.pop()
    if m not in (1, 2):
        raise FalsifiedError(f"minimal weight {m} admits no associated scaling")
    dom = doms.pop()
    lam = tuple(2 * v // m for v in dom)
    return tuple(
        d.pairing(d.roots[d.simple_root_indices[j]], lam) for j in range(d.ss_rank)
    )


def count_rational_nilpotent_orbits(L: LieAlgebra, q) -> OrbitPartition:
    """Partition of the nilpotent cone of g(F_q) into orbits of the
    group generated by the root subgroups, with exact sizes, direct
    stabilizer scans, and a match of every rational orbit to exactly
    one geometric orbit descriptor."""
    _require_prime_field(L, q)
    d = L.datum
    F = L.coeff
    nilp = _nilpotent_cone_coords(L, q)
    total = nilp.shape[0]
    dim = L.dim
    qpow = q ** np.arange(dim, dtype=np.int64)
    codes = nilp @ qpow
    in_cone = np.zeros(q**dim, dtype=bool)
    in_cone[codes] = True
    visited = np.zeros(q**dim, dtype=bool)

    gens = []
    for i in range(len(d.roots)):
        for t in range(1, q):
            gens.append(
                np.array(
                    adjoint_action_matrix(L, root_group_element(L, i, t)),
                    dtype=np.int64,
                )
            )
    group = enumerate_group(L)
    group_order = group.shape[0]

    geo = enumerate_orbits(d)
    nonzero_geo = [r for r in geo if not r.representative.is_zero()]
    bound = 9 * max(
        (d.norm.norm_sq(_primitive_vec(r.rep_cochar)) for r in nonzero_geo),
        default=1,
    )

    orbits = []
    order = np.argsort(codes, kind="stable")
    for idx in order:
        seed_code = int(codes[idx])
        if visited[seed_code]:
            continue
        visited[seed_code] = True
        frontier = nilp[idx][None, :]
        size = 1
        while frontier.shape[0]:
            imgs = np.concatenate([(frontier @ g.T) % q for g in gens])
            new_codes = np.unique(imgs @ qpow)
            fresh = new_codes[~visited[new_codes]]
            visited[fresh] = True
            size += fresh.shape[0]
            frontier = (fresh[:, None] // qpow) % q
        rep_coords = tuple(F.of(int(v)) for v in nilp[idx])
        stab = _stabilizer_order(L, group, rep_coords)
        rep = L.element(list(rep_coords))
        if rep.is_zero():
            label, wdd = "0", (0,) * d.ss_rank
        else:
            wdd = _derived_weighted_dynkin(L, rep, bound)
            c_dim = len(L.centralizer(rep))
            matches = [
                r
                for r in geo
                if r.weighted_dynkin_diagram == wdd and L.dim - r.dim == c_dim
            ]
            if len(matches) != 1:
                raise FalsifiedError(
                    "rational orbit does not match exactly one geometric orbit"
                )
            label = matches[0].label
        orbits.append(RationalOrbit(rep, size, stab, label, wdd))
    return OrbitPartition(d.label, q, group_order, orbits, total)


def _primitive_vec(phi):
    ints = [int(v) for v in phi]
    g = vec_gcd(ints)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)
