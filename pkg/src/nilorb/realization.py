"""Defining matrix realizations of the classical Chevalley algebras.

Covers sl_{n+1} (type A, simply connected), so_{2n+1} (B), sp_{2n} (C),
so_{2n} (D, split form preserving an antidiagonal symmetric form) and
gl_n.  Simple root vectors are seeded explicitly; every other root
vector is produced by bracketing along the extraspecial pairs, so the
matrices satisfy exactly the structure constants of the abstract
algebra.  A full homomorphism check runs once per datum at build time.

The realization also fixes an integer coordinate-extraction scheme: a
set of matrix positions whose minor is unimodular, so algebra
coordinates can be read off a matrix over any coefficient field.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .chevalley import extraspecial_pairs, structure_constants
from .errors import GuardError
from .fields import CoeffField
from .rootdata import RootDatum


def _zeros(n):
    return [[0] * n for _ in range(n)]


def _E(n, i, j, v=1):
    M = _zeros(n)
    M[i][j] = v
    return M


def _madd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _mscale(c, A):
    return [[c * v for v in row] for row in A]


def _mmul(A, B):
    n = len(A)
    m = len(B[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for k, a in enumerate(A[i]):
            if a:
                Bk = B[k]
                row = out[i]
                for j in range(m):
                    if Bk[j]:
                        row[j] += a * Bk[j]
    return out


def _mbracket(A, B):
    return [
        [x - y for x, y in zip(rx, ry)]
        for rx, ry in zip(_mmul(A, B), _mmul(B, A))
    ]


def has_realization(datum: RootDatum) -> bool:
    if datum.is_gl:
        return True
    if datum.flavor != "sc" or datum.central_rank != 0:
        return False
    if len(datum.factors) != 1:
        return False
    return datum.factors[0][0] in ("A", "B", "C", "D")


def _simple_triples(family, n):
    """(e, f, h) integer matrices for each simple root, plus size."""
    if family == "A":
        size = n + 1
        trip = []
        for k in range(n):
            e = _E(size, k, k + 1)
            f = _E(size, k + 1, k)
            h = _madd(_E(size, k, k), _E(size, k + 1, k + 1, -1))
            trip.append((e, f, h))
        return size, trip
    if family == "C":
        size = 2 * n
        trip = []
        for k in range(n - 1):
            e = _madd(_E(size, k, k + 1), _E(size, n + k + 1, n + k, -1))
            f = _madd(_E(size, k + 1, k), _E(size, n + k, n + k + 1, -1))
            h = _madd(
                _madd(_E(size, k, k), _E(size, k + 1, k + 1, -1)),
                _madd(_E(size, n + k, n + k, -1), _E(size, n + k + 1, n + k + 1)),
            )
            trip.append((e, f, h))
        e = _E(size, n - 1, 2 * n - 1)
        f = _E(size, 2 * n - 1, n - 1)
        h = _madd(_E(size, n - 1, n - 1), _E(size, 2 * n - 1, 2 * n - 1, -1))
        trip.append((e, f, h))
        return size, trip
    if family == "B":
        size = 2 * n + 1
        trip = []
        for k in range(n - 1):
            e = _madd(
                _E(size, k, k + 1), _E(size, 2 * n - k - 1, 2 * n - k, -1)
            )
            f = _madd(
                _E(size, k + 1, k), _E(size, 2 * n - k, 2 * n - k - 1, -1)
            )
            h = _madd(
                _madd(_E(size, k, k), _E(size, k + 1, k + 1, -1)),
                _madd(
                    _E(size, 2 * n - k - 1, 2 * n - k - 1),
                    _E(size, 2 * n - k, 2 * n - k, -1),
                ),
            )
            trip.append((e, f, h))
        e = _madd(_E(size, n - 1, n, 2), _E(size, n, n + 1, -1))
        f = _madd(_E(size, n, n - 1), _E(size, n + 1, n, -2))
        h = _madd(_E(size, n - 1, n - 1, 2), _E(size, n + 1, n + 1, -2))
        trip.append((e, f, h))
        return size, trip
    if family == "D":
        size = 2 * n
        trip = []
        for k in range(n - 1):
            e = _madd(
                _E(size, k, k + 1), _E(size, 2 * n - 2 - k, 2 * n - 1 - k, -1)
            )
            f = _madd(
                _E(size, k + 1, k), _E(size, 2 * n - 1 - k, 2 * n - 2 - k, -1)
            )
            h = _madd(
                _madd(_E(size, k, k), _E(size, k + 1, k + 1, -1)),
                _madd(
                    _E(size, 2 * n - 2 - k, 2 * n - 2 - k),
                    _E(size, 2 * n - 1 - k, 2 * n - 1 - k, -1),
                ),
            )
            trip.append((e, f, h))
        e = _madd(_E(size, n - 2, n), _E(size, n - 1, n + 1, -1))
        f = _madd(_E(size, n, n - 2), _E(size, n + 1, n - 1, -1))
        h = _madd(
            _madd(_E(size, n - 2, n - 2), _E(size, n - 1, n - 1)),
            _madd(_E(size, n, n, -1), _E(size, n + 1, n + 1, -1)),
        )
        trip.append((e, f, h))
        return size, trip
    raise GuardError(f"no defining realization for family {family}")


class Realization:
    def __init__(self, datum: RootDatum):
        if not has_realization(datum):
            raise GuardError(
                "no defining matrix realization for this datum "
                "(need a single classical factor, simply connected, or gl)"
            )
        self.datum = datum
        N = structure_constants(datum)
        esp = extraspecial_pairs(datum)
        idx = datum.root_index_by_simple

        if datum.is_gl:
            n = datum.rank
            self.size = n
            cartan_mats = [_E(n, k, k) for k in range(n)]
            ss = datum.ss_rank
        else:
            family, n = datum.factors[0]
            self.size, triples = _simple_triples(family, n)
            cartan_mats = [t[2] for t in triples]
            ss = datum.ss_rank

        root_mats = [None] * len(datum.roots)
        if datum.is_gl:
            nn = self.size
            # simple root j is the j-th consecutive coordinate difference
            for j in range(ss):
                i = datum.simple_root_indices[j]
                root_mats[i] = _E(nn, j, j + 1)
                root_mats[datum.negate_index(i)] = _E(nn, j + 1, j)
        else:
            for j, (e, f, _h) in enumerate(triples):
                i = datum.simple_root_indices[j]
                root_mats[i] = e
                root_mats[datum.negate_index(i)] = f

        order = sorted(
            range(datum.n_pos), key=lambda i: sum(datum.roots_simple[i])
        )
        for i in order:
            if root_mats[i] is not None:
                continue
            gamma = datum.roots_simple[i]
            xi, eta = esp[gamma]
            ix, ie = idx[xi], idx[eta]
            num = _mbracket(root_mats[ix], root_mats[ie])
            root_mats[i] = _mdiv(num, N[(ix, ie)])
            nix, nie = datum.negate_index(ix), datum.negate_index(ie)
            num = _mbracket(root_mats[nix], root_mats[nie])
            root_mats[datum.negate_index(i)] = _mdiv(num, N[(nix, nie)])

        self.mats = list(cartan_mats) + root_mats
        self._check_homomorphism()
        self.weights = self._weight_table()
        self._build_extraction()
        datum._realization = self

    def _check_homomorphism(self):
        from .chevalley import build_lie_algebra
        from .fields import QQ

        alg = build_lie_algebra(self.datum, QQ)
        dim = alg.dim
        for a in range(dim):
            for b in range(dim):
                lhs = _mbracket(self.mats[a], self.mats[b])
                ent = alg.table.get((a, b), ())
                rhs = _zeros(self.size)
                for c, coeff in ent:
                    rhs = _madd(rhs, _mscale(coeff, self.mats[c]))
                if lhs != rhs:
                    raise AssertionError(
                        f"realization violates the bracket at pair ({a},{b})"
                    )

    def _weight_table(self):
        """weights[d][k]: diagonal entry of the k-th Cartan slot matrix
        at position d; the defining weight of basis vector d under a
        cocharacter phi is the dot product weights[d] . phi."""
        rank = self.datum.rank
        for k in range(rank):
            M = self.mats[k]
            for i in range(self.size):
                for j in range(self.size):
                    if i != j and M[i][j]:
                        raise AssertionError("Cartan slot matrix not diagonal")
        return [
            tuple(self.mats[k][d][d] for k in range(rank))
            for d in range(self.size)
        ]

    def _build_extraction(self):
        dim = len(self.mats)
        ncols = self.size * self.size
        rows = [
            [self.mats[k][p // self.size][p % self.size] for p in range(ncols)]
            for k in range(dim)
        ]
        # integer row echelon keeping pivot columns; all pivots must be
        # units so coordinates extract over every field
        work = [row[:] for row in rows]
        pivots = []
        r = 0
        for j in range(ncols):
            if r == dim:
                break
            nz = [i for i in range(r, dim) if work[i][j]]
            if not nz:
                continue
            while len(nz) > 1:
                nz.sort(key=lambda i: abs(work[i][j]))
                base = nz[0]
                for i in nz[1:]:
                    q = work[i][j] // work[base][j]
                    work[i] = [x - q * y for x, y in zip(work[i], work[base])]
                nz = [i for i in range(r, dim) if work[i][j]]
            i0 = nz[0]
            work[r], work[i0] = work[i0], work[r]
            if work[r][j] < 0:
                work[r] = [-x for x in work[r]]
            pivots.append(j)
            for i in range(r + 1, dim):
                if work[i][j]:
                    q = work[i][j] // work[r][j]
                    work[i] = [x - q * y for x, y in zip(work[i], work[r])]
            r += 1
        if r != dim:
            raise AssertionError("realization matrices are dependent")
        self.positions = [(p // self.size, p % self.size) for p in pivots]
        minor = [[rows[k][p] for p in pivots] for k in range(dim)]
        # the minor can have determinant d > 1 (the odd orthogonal vector
        # representation has a non-saturated Chevalley lattice); extraction
        # then needs d invertible in the coefficient field
        self.extract_matrix = _frac_inverse(minor)
        self.extract_denominator = abs(
            lcm(*[v.denominator for row in self.extract_matrix for v in row])
        )

    def matrix_of(self, F: CoeffField, coords):
        n = self.size
        out = [[F.zero()] * n for _ in range(n)]
        for k, c in enumerate(coords):
            c = F.of(c)
            if F.is_zero(c):
                continue
            Mk = self.mats[k]
            for i in range(n):
                row = Mk[i]
                for j in range(n):
                    if row[j]:
                        out[i][j] = F.add(out[i][j], F.mul(c, F.of(row[j])))
        return out

    def extract(self, F: CoeffField, M):
        """Coordinates of a matrix known to lie in the algebra's image."""
        if F.p and self.extract_denominator % F.p == 0:
            raise GuardError(
                f"coordinate extraction needs characteristic prime to "
                f"{self.extract_denominator}"
            )
        entries = [M[r][c] for r, c in self.positions]
        dim = len(self.mats)
        out = []
        for k in range(dim):
            val = F.zero()
            for j, e in enumerate(entries):
                coeff = self.extract_matrix[j][k]
                if coeff:
                    val = F.add(val, F.mul(F.of(e), F.of(coeff)))
            out.append(val)
        return out

    def root_divided_powers(self, root_index):
        """Integer matrices rho(e_alpha)^k / k! until they vanish."""
        cached = getattr(self, "_divided_powers", None)
        if cached is None:
            cached = {}
            self._divided_powers = cached
        if root_index not in cached:
            M = self.mats[self.datum.rank + root_index]
            powers = [
                [[1 if i == j else 0 for j in range(self.size)] for i in range(self.size)]
            ]
            cur = [row[:] for row in M]
            k = 1
            fact = 1
            while any(v for row in cur for v in row):
                powers.append(_mdiv(cur, fact))
                cur = _mmul(cur, M)
                k += 1
                fact *= k
                if k > self.size + 1:
                    raise AssertionError("root matrix is not nilpotent")
            cached[root_index] = powers
        return cached[root_index]


def _mdiv(A, d):
    out = []
    for row in A:
        orow = []
        for v in row:
            f = Fraction(v, d)
            if f.denominator != 1:
                raise AssertionError("non-integral matrix division")
            orow.append(int(f))
        out.append(orow)
    return out


def _frac_inverse(A):
    """Inverse of an integer matrix, over the rationals."""
    n = len(A)
    aug = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(A)
    ]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [[aug[i][n + j] for j in range(n)] for i in range(n)]


def get_realization(datum: RootDatum) -> Realization:
    cached = getattr(datum, "_realization", None)
    if cached is not None:
        return cached
    return Realization(datum)
