"""Exact linear algebra over a CoeffField.

Matrices are lists of row lists; vectors are lists.  Everything is done
by fraction-free or field-exact elimination; no floats anywhere.
"""

from __future__ import annotations

from .fields import CoeffField


def identity(F: CoeffField, n: int):
    return [[F.one() if i == j else F.zero() for j in range(n)] for i in range(n)]


def zeros(F: CoeffField, m: int, n: int):
    return [[F.zero() for _ in range(n)] for _ in range(m)]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []

def _dot(F: CoeffField, xs, ys):
    acc = F.zero()
    for x, y in zip(xs, ys):
        acc = F.add(acc, F.mul(x, y))
    return acc


def mat_vec(F: CoeffField, A, v):
    return [_dot(F, row, v) for row in A]


def mat_mul(F: CoeffField, A, B):
    Bt = transpose(B)
    return [[_dot(F, row, col) for col in Bt] for row in A]


def mat_add(F: CoeffField, A, B):
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(F: CoeffField, A, B):
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(F: CoeffField, c, A):
    return [[F.mul(c, a) for a in row] for row in A]


def vec_add(F: CoeffField, u, v):
    return [F.add(a, b) for a, b in zip(u, v)]


def vec_sub(F: CoeffField, u, v):
    return [F.sub(a, b) for a, b in zip(u, v)]


def vec_scale(F: CoeffField, c, v):
    return [F.mul(c, x) for x in v]


def rref(F: CoeffField, A):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = [[F.of(x) for x in row] for row in A]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if not F.is_zero(R[i][c])), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.mul(inv, x) for x in R[r]]
        for i in range(m):
            if i != r and not F.is_zero(R[i][c]):
                f = R[i][c]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(F: CoeffField, A):
    if not A:
        return 0
    return len(rref(F, A)[1])


def kernel_basis(F: CoeffField, A):
    """Basis of the right null space of A, as a list of vectors."""
    if not A:
        return []
    n = len(A[0])
    R, pivots = rref(F, A)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    basis = []
    for fc in free:
        v = [F.zero()] * n
        v[fc] = F.one()
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(R[r][fc])
        basis.append(v)
    return basis


def solve(F: CoeffField, A, b):
    """One solution x of A x = b, or None if inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    R, pivots = rref(F, aug)
    if n in pivots:
        return None
    x = [F.zero()] * n
    for r, pc in enumerate(pivots):
        x[pc] = R[r][n]
    return x


def inverse(F: CoeffField, A):
    """Matrix inverse; raises ValueError when singular."""
    n = len(A)
    aug = [list(A[i]) + identity(F, n)[i] for i in range(n)]
    R, pivots = rref(F, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in R]


def det(F: CoeffField, A):
    """Determinant by field-exact elimination."""
    n = len(A)
    M = [[F.of(x) for x in row] for row in A]
    d = F.one()
    for c in range(n):
        pr = next((i for i in range(c, n) if not F.is_zero(M[i][c])), None)
        if pr is None:
            return F.zero()
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(M[i][c]):
                f = F.mul(inv, M[i][c])
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def int_det(A):
    """Fraction-free determinant of an integer matrix (Bareiss)."""
    M = [list(map(int, row)) for row in A]
    n = len(M)
    sign = 1
    prev = 1
    for c in range(n - 1):
        if M[c][c] == 0:
            pr = next((i for i in range(c + 1, n) if M[i][c] != 0), None)
            if pr is None:
                return 0
            M[c], M[pr] = M[pr], M[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                M[i][j] = (M[i][j] * M[c][c] - M[i][c] * M[c][j]) // prev
        prev = M[c][c]
    return sign * M[n - 1][n - 1] if n else 1


def in_span(F: CoeffField, vectors, v):
    """Whether v lies in the span of the given vectors."""
    if not vectors:
        return all(F.is_zero(F.of(x)) for x in v)
    A = transpose([[F.of(x) for x in w] for w in vectors])
    return solve(F, A, [F.of(x) for x in v]) is not None


def intersect_rowspaces(F: CoeffField, A, B):
    """Basis of the intersection of the row spaces of A and B."""
    if not A or not B:
        return []
    # x in both spans:  x = a^T A = b^T B;  solve [A^T | -B^T] (a,b)^T = 0
    At = transpose(A)
    Bt = transpose(B)
    stacked = [At[i] + [F.neg(x) for x in Bt[i]] for i in range(len(At))]
    out = []
    for k in kernel_basis(F, stacked):
        a = k[: len(A)]
        vec = [
            _dot(F, a, [A[i][j] for i in range(len(A))])
            for j in range(len(A[0]))
        ]
        if any(not F.is_zero(x) for x in vec):
            out.append(vec)
    # reduce to an independent set
    if not out:
        return []
    R, pivots = rref(F, out)
    return [R[i] for i in range(len(pivots))]
