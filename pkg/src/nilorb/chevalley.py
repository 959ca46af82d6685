"""Chevalley-basis Lie algebras over exact coefficient fields.

The basis is the Cartan part (one h per simple coroot, then one slot
per central direction; for gl, the n diagonal matrix units) followed
by one root vector e_alpha per root, in the datum's root order.

Structure constants are integers fixed by the extraspecial-pair sign
convention: for each non-simple positive root, the lexicographically
least positive-root pair summing to it gets a positive constant, and
every other constant is forced from those by the Jacobi identity.
The whole table is validated by an exhaustive Jacobi check over the
integers at build time (up to a dimension guard).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConfigError, GuardError
from .fields import CoeffField, QQ
from .linalg import kernel_basis, rank as mat_rank, rref, solve
from .rootdata import RootDatum

JACOBI_BUILD_DIM_LIMIT = 100


def _lex_less(a, b):
    return a < b


def structure_constants(datum: RootDatum):
    """Integer constants N[(i,j)] with [e_i, e_j] = N e_{i+j}, for all
    ordered root-index pairs whose root sum is again a root."""
    cached = getattr(datum, "_structure_constants", None)
    if cached is not None:
        return cached

    idx = datum.root_index_by_simple
    norms = {c: n for c, n in zip(datum.roots_simple, datum.root_norms_sq)}

    def is_root(c):
        return c in idx

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(a):
        return tuple(-x for x in a)

    def chain_down(b, a):
        """Largest k >= 0 with b - k*a a root."""
        k = 0
        cur = b
        while True:
            cur = tuple(x - y for x, y in zip(cur, a))
            if cur in idx:
                k += 1
            else:
                return k

    N = {}

    def put(a, b, value):
        v = Fraction(value)
        if v.denominator != 1:
            raise AssertionError("non-integral structure constant")
        key = (idx[a], idx[b])
        if key in N and N[key] != int(v):
            raise AssertionError("inconsistent structure constant")
        N[key] = int(v)

    def write_family(xi, eta, gamma, v):
        """Given N_{xi,eta} = v with xi+eta = gamma (all positive),
        fill the 12 ordered constants of the triangle {xi,eta,-gamma}
        and its negative."""
        r1 = Fraction(norms[xi], norms[gamma])
        r2 = Fraction(norms[eta], norms[gamma])
        mxi, meta, mg = neg(xi), neg(eta), neg(gamma)
        put(xi, eta, v)
        put(eta, xi, -v)
        put(eta, mg, v * r1)
        put(mg, eta, -v * r1)
        put(mg, xi, v * r2)
        put(xi, mg, -v * r2)
        put(mxi, meta, -v)
        put(meta, mxi, v)
        put(meta, gamma, -v * r1)
        put(gamma, meta, v * r1)
        put(gamma, mxi, -v * r2)
        put(mxi, gamma, v * r2)

    extraspecial = {}
    positives = datum.positive_simple_coords
    posset = set(positives)
    for gamma in sorted(positives, key=lambda c: (sum(c), c)):
        if sum(gamma) < 2:
            continue
        pairs = []
        for xi in positives:
            eta = tuple(g - x for g, x in zip(gamma, xi))
            if eta in posset and _lex_less(xi, eta):
                pairs.append((xi, eta))
        pairs.sort()
        if not pairs:
            raise AssertionError("positive root with no special pair")
        alpha, beta = pairs[0]
        extraspecial[gamma] = (alpha, beta)
        seed = chain_down(beta, alpha) + 1
        write_family(alpha, beta, gamma, seed)
        for xi, eta in pairs[1:]:
            acc = Fraction(0)
            d1 = tuple(b - x for b, x in zip(beta, xi))
            if d1 in idx:
                acc += N[(idx[beta], idx[neg(xi)])] * N[(idx[d1], idx[alpha])]
            d2 = tuple(a - x for a, x in zip(alpha, xi))
            if d2 in idx:
                acc += N[(idx[neg(xi)], idx[alpha])] * N[(idx[d2], idx[beta])]
            v = Fraction(norms[gamma]) * acc / (Fraction(norms[eta]) * seed)
            write_family(xi, eta, gamma, v)

    # Magnitude law: |N_{a,b}| = (length of the a-string down from b) + 1
    for (i, j), v in N.items():
        p = chain_down(datum.roots_simple[j], datum.roots_simple[i])
        if abs(v) != p + 1:
            raise AssertionError("structure constant magnitude violation")

    datum._structure_constants = N
    datum._extraspecial_pairs = extraspecial
    return N


def extraspecial_pairs(datum: RootDatum):
    """For each positive root of height at least 2, the chosen pair of
    positive roots summing to it that seeds the sign convention."""
    structure_constants(datum)
    return datum._extraspecial_pairs


class LieElement:
    """Vector in a Chevalley-basis Lie algebra."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = tuple(coords)

    def is_zero(self):
        F = self.algebra.coeff
        return all(F.is_zero(c) for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, LieElement)
            and self.algebra is other.algebra
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        self.algebra._same(other)
        F = self.algebra.coeff
        return LieElement(
            self.algebra,
            [F.add(a, b) for a, b in zip(self.coords, other.coords)],
        )

    def __sub__(self, other):
        self.algebra._same(other)
        F = self.algebra.coeff
        return LieElement(
            self.algebra,
            [F.sub(a, b) for a, b in zip(self.coords, other.coords)],
        )

    def scale(self, c):
        F = self.algebra.coeff
        c = F.of(c)
        return LieElement(self.algebra, [F.mul(c, x) for x in self.coords])

    def serialize(self):
        return {
            "algebra": self.algebra.key(),
            "coords": [str(c) for c in self.coords],
        }

    def __repr__(self):
        return f"LieElement{self.coords}"


class Grading:
    """Decomposition of the algebra by the weights of a cocharacter."""

    def __init__(self, algebra, cochar, weights):
        self.algebra = algebra
        self.cochar = tuple(cochar)
        self.weights = list(weights)
        self.slices = {}
        for k, w in enumerate(self.weights):
            self.slices.setdefault(w, []).append(k)

    def slice_indices(self, i):
        return self.slices.get(i, [])

    def dim_slice(self, i):
        return len(self.slices.get(i, []))

    def total_dim(self):
        return sum(len(v) for v in self.slices.values())


class LieAlgebra:
    """Chevalley-basis Lie algebra of a root datum over a CoeffField."""

    def __init__(self, datum: RootDatum, coeff: CoeffField):
        self.datum = datum
        self.coeff = coeff
        self.rank = datum.rank
        self.n_roots = len(datum.roots)
        self.dim = self.rank + self.n_roots
        self.N = structure_constants(datum)

        # Cartan slots as cocharacter vectors: simple coroots, then
        # central units; for gl, the n diagonal coordinate units.
        if datum.is_gl:
            self.cartan_slot_cochars = [
                tuple(1 if k == i else 0 for k in range(self.rank))
                for i in range(self.rank)
            ]
        else:
            self.cartan_slot_cochars = [
                datum.coroots[datum.simple_root_indices[j]]
                for j in range(datum.ss_rank)
            ] + [
                tuple(
                    1 if k == datum.ss_rank + c else 0 for k in range(self.rank)
                )
                for c in range(datum.central_rank)
            ]

        self.table = self._build_table()
        self._verify_jacobi_once()

    # -- construction --------------------------------------------------

    def _coroot_slot_coords(self, root_index):
        """[e_alpha, e_{-alpha}] expanded over the Cartan slots."""
        d = self.datum
        if d.is_gl:
            return list(d.coroots[root_index])
        return list(d.coroots_simple[root_index]) + [0] * d.central_rank

    def _build_table(self):
        d = self.datum
        table = {}
        for a in range(self.rank):
            for i in range(self.n_roots):
                coeff = d.pairing(d.roots[i], self.cartan_slot_cochars[a])
                if coeff:
                    table[(a, self.rank + i)] = ((self.rank + i, coeff),)
                    table[(self.rank + i, a)] = ((self.rank + i, -coeff),)
        for i in range(self.n_roots):
            for j in range(self.n_roots):
                si = d.roots_simple[i]
                sj = d.roots_simple[j]
                s = tuple(x + y for x, y in zip(si, sj))
                if all(x == 0 for x in s):
                    ent = tuple(
                        (a, c)
                        for a, c in enumerate(self._coroot_slot_coords(i))
                        if c
                    )
                    if ent:
                        table[(self.rank + i, self.rank + j)] = ent
                elif s in d.root_index_by_simple:
                    k = d.root_index_by_simple[s]
                    table[(self.rank + i, self.rank + j)] = (
                        (self.rank + k, self.N[(i, j)]),
                    )
        return table

    def _verify_jacobi_once(self):
        if getattr(self.datum, "_jacobi_verified", False):
            return
        if self.dim > JACOBI_BUILD_DIM_LIMIT:
            return
        n = self.dim

        def zbr(a, b):
            return self.table.get((a, b), ())

        def zbr_vec(a, vec):
            out = {}
            for b, cb in vec.items():
                for c, coeff in zbr(a, b):
                    out[c] = out.get(c, 0) + cb * coeff
            return {k: v for k, v in out.items() if v}

        for a in range(n):
            for b in range(a + 1, n):
                ab = {c: v for c, v in zbr(a, b)}
                for c in range(b + 1, n):
                    lhs = zbr_vec(a, {k: v for k, v in zbr(b, c)})
                    rhs = zbr_vec(b, {k: v for k, v in zbr(a, c)})
                    for k, v in zbr_vec(c, ab).items():
                        rhs[k] = rhs.get(k, 0) - v
                    for k in set(lhs) | set(rhs):
                        if lhs.get(k, 0) != rhs.get(k, 0):
                            raise AssertionError(
                                f"Jacobi identity fails on basis triple "
                                f"({a},{b},{c})"
                            )
        self.datum._jacobi_verified = True

    # -- elements ------------------------------------------------------

    def key(self):
        return f"{self.datum.label}/{self.datum.flavor}/p{self.coeff.p}"

    def _same(self, other):
        if not isinstance(other, LieElement) or other.algebra is not self:
            raise ConfigError("elements belong to different algebras")

    def element(self, coords):
        F = self.coeff
        coords = list(coords)
        if len(coords) != self.dim:
            raise ConfigError("coordinate length mismatch")
        return LieElement(self, [F.of(c) for c in coords])

    def zero(self):
        return LieElement(self, [self.coeff.zero()] * self.dim)

    def basis_element(self, k):
        F = self.coeff
        v = [F.zero()] * self.dim
        v[k] = F.one()
        return LieElement(self, v)

    def root_vector(self, i):
        return self.basis_element(self.rank + i)

    def cartan_element(self, slot_coords):
        F = self.coeff
        v = [F.of(c) for c in slot_coords] + [F.zero()] * self.n_roots
        return LieElement(self, v)

    def coroot_element(self, root_index):
        return self.cartan_element(self._coroot_slot_coords(root_index))

    # -- operations ----------------------------------------------------

    def bracket_coords(self, x, y):
        F = self.coeff
        out = [F.zero()] * self.dim
        for a, xa in enumerate(x):
            if F.is_zero(xa):
                continue
            for b, yb in enumerate(y):
                if F.is_zero(yb):
                    continue
                ent = self.table.get((a, b))
                if ent:
                    xy = F.mul(xa, yb)
                    for c, coeff in ent:
                        out[c] = F.add(out[c], F.mul(xy, F.of(coeff)))
        return out

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        self._same(x)
        self._same(y)
        return LieElement(self, self.bracket_coords(x.coords, y.coords))

    def ad_matrix(self, x):
        """Matrix M with M @ coords(y) = coords([x, y])."""
        coords = x.coords if isinstance(x, LieElement) else x
        F = self.coeff
        cols = []
        for b in range(self.dim):
            col = [F.zero()] * self.dim
            for a, xa in enumerate(coords):
                if F.is_zero(xa):
                    continue
                ent = self.table.get((a, b))
                if ent:
                    for c, coeff in ent:
                        col[c] = F.add(col[c], F.mul(xa, F.of(coeff)))
            cols.append(col)
        return [[cols[b][c] for b in range(self.dim)] for c in range(self.dim)]

    def is_nilpotent(self, x) -> bool:
        """Ad-nilpotency: ad(x)^{dim} = 0.  Central elements count as
        nilpotent under this test."""
        M = self.ad_matrix(x)
        return matrix_is_nilpotent(self.coeff, M)

    def centralizer(self, x):
        """Basis of ker ad(x) as LieElements."""
        return [
            LieElement(self, v) for v in kernel_basis(self.coeff, self.ad_matrix(x))
        ]

    def weight_of_basis(self, k, phi):
        if k < self.rank:
            return 0
        return self.datum.pairing(self.datum.roots[k - self.rank], phi)

    def grading(self, phi) -> Grading:
        phi = tuple(phi)
        return Grading(
            self, phi, [self.weight_of_basis(k, phi) for k in range(self.dim)]
        )

    def graded_support(self, x, phi):
        """Sorted weights carried by the nonzero components of x."""
        coords = x.coords if isinstance(x, LieElement) else x
        F = self.coeff
        return sorted(
            {
                self.weight_of_basis(k, phi)
                for k, c in enumerate(coords)
                if not F.is_zero(c)
            }
        )

    def component_in_slice(self, x, phi, i):
        coords = x.coords if isinstance(x, LieElement) else x
        F = self.coeff
        out = [F.zero()] * self.dim
        for k, c in enumerate(coords):
            if self.weight_of_basis(k, phi) == i:
                out[k] = c
        return LieElement(self, out)

    # -- forms and decompositions --------------------------------------

    def invariant_form(self):
        """Gram matrix of the invariant bilinear form on the basis:
        the trace form of the defining matrix realization when one
        exists (classical types and gl), else the adjoint trace form."""
        cached = getattr(self, "_invariant_form", None)
        if cached is not None:
            return cached
        zgram = self._integral_invariant_gram()
        F = self.coeff
        gram = [[F.of(v) for v in row] for row in zgram]
        self._invariant_form = gram
        return gram

    def _integral_invariant_gram(self):
        cached = getattr(self.datum, "_invariant_gram_z", None)
        if cached is not None:
            return cached
        from .realization import get_realization, has_realization

        if has_realization(self.datum):
            real = get_realization(self.datum)
            mats = real.mats
            n = real.size
            gram = [
                [
                    sum(
                        mats[i][a][b] * mats[j][b][a]
                        for a in range(n)
                        for b in range(n)
                    )
                    for j in range(self.dim)
                ]
                for i in range(self.dim)
            ]
        else:
            qalg = build_lie_algebra(self.datum, QQ)
            ads = [qalg.ad_matrix(qalg.basis_element(k)) for k in range(self.dim)]
            ads = [[[int(v) for v in row] for row in M] for M in ads]
            n = self.dim
            gram = [
                [
                    sum(
                        ads[i][a][b] * ads[j][b][a]
                        for a in range(n)
                        for b in range(n)
                    )
                    for j in range(self.dim)
                ]
                for i in range(self.dim)
            ]
        self.datum._invariant_gram_z = gram
        return gram

    def jordan_decompose(self, x):
        """Jordan decomposition x = s + n through the defining matrix
        realization; the coefficient field must be perfect (prime field
        or the rationals, which is all CoeffField offers)."""
        from .realization import get_realization, has_realization

        if not has_realization(self.datum):
            raise GuardError(
                "jordan decomposition needs a faithful matrix realization "
                "(classical types A-D simply connected, or gl)"
            )
        self._same(x)
        real = get_realization(self.datum)
        F = self.coeff
        M = real.matrix_of(F, x.coords)
        S = _semisimple_part(F, M)
        s_coords = real.extract(F, S)
        # the semisimple part of an algebra element stays in the algebra
        if real.matrix_of(F, s_coords) != S:
            raise AssertionError("semisimple part left the algebra")
        n_mat = [
            [F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(M, S)
        ]
        n_coords = real.extract(F, n_mat)
        s_el = LieElement(self, s_coords)
        n_el = LieElement(self, n_coords)
        return s_el, n_el

    def lambda_map(self, g_matrix):
        """Trace-form projection of g - 1 onto the algebra's defining
        matrix image: the algebraic substitute for a logarithm.  The
        input must be an invertible matrix of the defining realization;
        requires the trace form to be nondegenerate."""
        from .realization import get_realization, has_realization

        if not has_realization(self.datum):
            raise GuardError("lambda map needs a defining matrix realization")
        real = get_realization(self.datum)
        F = self.coeff
        n = real.size
        g = [[F.of(v) for v in row] for row in g_matrix]
        from .linalg import det

        if F.is_zero(det(F, g)):
            raise ConfigError("lambda map input must be invertible")
        gram = self.invariant_form()
        gm1 = [
            [
                F.sub(g[a][b], F.one() if a == b else F.zero())
                for b in range(n)
            ]
            for a in range(n)
        ]
        rhs = []
        for k in range(self.dim):
            Bk = real.mats[k]
            val = F.zero()
            for a in range(n):
                for b in range(n):
                    if Bk[b][a]:
                        val = F.add(val, F.mul(gm1[a][b], F.of(Bk[b][a])))
            rhs.append(val)
        coords = solve(F, gram, rhs)
        if coords is None:
            raise GuardError(
                "trace form is degenerate in this characteristic; "
                "lambda map unavailable"
            )
        return LieElement(self, coords)

    def __repr__(self):
        return f"LieAlgebra({self.datum.label}, {self.coeff!r})"


def is_nondegenerate(field: CoeffField, gram) -> bool:
    return mat_rank(field, gram) == len(gram)


def matrix_is_nilpotent(F: CoeffField, M) -> bool:
    n = len(M)
    if n == 0:
        return True
    P = [row[:] for row in M]
    steps = 0
    while steps < 10:
        if all(F.is_zero(v) for row in P for v in row):
            return True
        # square; 2^10 exceeds any dimension used here
        P = _mat_mul_field(F, P, P)
        steps += 1
    return all(F.is_zero(v) for row in P for v in row)


def _mat_mul_field(F, A, B):
    n = len(A)
    m = len(B[0])
    kk = len(B)
    out = [[F.zero()] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k in range(kk):
            a = Ai[k]
            if F.is_zero(a):
                continue
            Bk = B[k]
            row = out[i]
            for j in range(m):
                if not F.is_zero(Bk[j]):
                    row[j] = F.add(row[j], F.mul(a, Bk[j]))
    return out


# -- characteristic polynomial and semisimple part ---------------------


def charpoly(F: CoeffField, A):
    """Coefficients (low to high) of det(xI - A), by Hessenberg
    reduction; exact over any CoeffField."""
    n = len(A)
    H = [[F.of(v) for v in row] for row in A]
    for c in range(n - 2):
        piv = next(
            (r for r in range(c + 1, n) if not F.is_zero(H[r][c])), None
        )
        if piv is None:
            continue
        if piv != c + 1:
            H[c + 1], H[piv] = H[piv], H[c + 1]
            for r in range(n):
                H[r][c + 1], H[r][piv] = H[r][piv], H[r][c + 1]
        inv = F.inv(H[c + 1][c])
        for r in range(c + 2, n):
            if not F.is_zero(H[r][c]):
                f = F.mul(H[r][c], inv)
                H[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(H[r], H[c + 1])]
                for rr in range(n):
                    H[rr][c + 1] = F.add(H[rr][c + 1], F.mul(f, H[rr][r]))
    # charpoly recurrence over the Hessenberg form
    polys = [[F.one()]]
    for k in range(1, n + 1):
        # p_k(x) = (x - H[k-1][k-1]) p_{k-1}(x) - sum over trailing products
        term = _poly_sub(
            F,
            _poly_shift(F, polys[k - 1]),
            _poly_scale(F, H[k - 1][k - 1], polys[k - 1]),
        )
        prod = F.one()
        for i in range(k - 1, 0, -1):
            prod = F.mul(prod, H[i][i - 1])
            coeff = F.mul(prod, H[i - 1][k - 1])
            term = _poly_sub(F, term, _poly_scale(F, coeff, polys[i - 1]))
        polys.append(term)
    return polys[n]


def _poly_shift(F, p):
    return [F.zero()] + list(p)


def _poly_scale(F, c, p):
    return [F.mul(c, a) for a in p]


def _poly_sub(F, p, q):
    m = max(len(p), len(q))
    p = list(p) + [F.zero()] * (m - len(p))
    q = list(q) + [F.zero()] * (m - len(q))
    return [F.sub(a, b) for a, b in zip(p, q)]


def _poly_trim(F, p):
    while p and F.is_zero(p[-1]):
        p = p[:-1]
    return p


def _poly_divmod(F, a, b):
    a = list(a)
    b = _poly_trim(F, list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [F.zero()] * max(0, len(a) - len(b) + 1)
    inv = F.inv(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = F.mul(a[i + len(b) - 1], inv)
        if F.is_zero(c):
            continue
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] = F.sub(a[i + j], F.mul(c, bj))
    return q, _poly_trim(F, a)


def _poly_gcd(F, a, b):
    a = _poly_trim(F, list(a))
    b = _poly_trim(F, list(b))
    while b:
        _, r = _poly_divmod(F, a, b)
        a, b = b, r
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(inv, c) for c in a]
    return a


def _poly_mul(F, a, b):
    out = [F.zero()] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if F.is_zero(ai):
            continue
        for j, bj in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return out


def _poly_deriv(F, p):
    return [F.mul(F.of(i), p[i]) for i in range(1, len(p))]


def _poly_pth_root(F, p):
    """p-th root of a polynomial in x^p over the prime field F_p,
    where every coefficient is its own p-th root."""
    q = []
    for i in range(0, len(p), F.p):
        q.append(p[i])
    return q


def squarefree_part(F: CoeffField, f):
    """Product of the distinct irreducible factors of f (monic)."""
    f = _poly_trim(F, list(f))
    if len(f) <= 1:
        return [F.one()]
    inv = F.inv(f[-1])
    f = [F.mul(inv, c) for c in f]
    df = _poly_trim(F, _poly_deriv(F, f))
    if not df:
        return squarefree_part(F, _poly_pth_root(F, f))
    g = _poly_gcd(F, f, df)
    s1, rem = _poly_divmod(F, f, g)
    if rem:
        raise AssertionError("gcd division left a remainder")
    s1 = _poly_trim(F, s1)
    if len(g) == 1:
        return s1
    s2 = squarefree_part(F, g)
    d = _poly_gcd(F, s1, s2)
    lcm_part, rem = _poly_divmod(F, _poly_mul(F, s1, s2), d)
    if rem:
        raise AssertionError("lcm division left a remainder")
    return _poly_trim(F, lcm_part)


def _poly_eval_matrix(F, p, M):
    n = len(M)
    out = [[F.zero()] * n for _ in range(n)]
    for c in reversed(p):
        out = _mat_mul_field(F, out, M)
        for i in range(n):
            out[i][i] = F.add(out[i][i], c)
    return out


def _semisimple_part(F: CoeffField, M):
    """Semisimple part of a square matrix over a perfect CoeffField,
    as a polynomial in M (Newton iteration against the squarefree part
    of the characteristic polynomial)."""
    n = len(M)
    f = charpoly(F, M)
    r = squarefree_part(F, f)
    dr = _poly_deriv(F, r)
    g = _poly_gcd(F, r, dr)
    if len(g) != 1:
        raise AssertionError("squarefree part is not separable")
    # Bezout: a*r + b*dr = 1
    b = _poly_bezout_second(F, r, dr)
    S = [row[:] for row in [[F.of(v) for v in rw] for rw in M]]
    steps = 0
    while steps < 12:
        val = _poly_eval_matrix(F, r, S)
        if all(F.is_zero(v) for row in val for v in row):
            break
        corr = _mat_mul_field(F, val, _poly_eval_matrix(F, b, S))
        S = [[F.sub(a, c) for a, c in zip(ra, rc)] for ra, rc in zip(S, corr)]
        steps += 1
    val = _poly_eval_matrix(F, r, S)
    if not all(F.is_zero(v) for row in val for v in row):
        raise AssertionError("Newton iteration failed to converge")
    return S


def _poly_bezout_second(F, a, b):
    """u with v*a + u*b = gcd(a,b) (monic); returns u."""
    r0, r1 = _poly_trim(F, list(a)), _poly_trim(F, list(b))
    s0, s1 = [], [F.one()]
    while r1:
        q, r = _poly_divmod(F, r0, r1)
        r0, r1 = r1, _poly_trim(F, r)
        s0, s1 = s1, _poly_sub(F, s0, _poly_mul(F, q, s1))
    if not r0:
        raise ZeroDivisionError("bezout of zero polynomials")
    inv = F.inv(r0[-1])
    return _poly_scale(F, inv, s0)


_algebra_cache = {}


def build_lie_algebra(datum: RootDatum, coeff: CoeffField) -> LieAlgebra:
    key = (id(datum), coeff.p)
    if key not in _algebra_cache:
        _algebra_cache[key] = LieAlgebra(datum, coeff)
    return _algebra_cache[key]
