"""Root data with a choice of lattice flavor, and Weyl-invariant norms.

A ``RootDatum`` packages the character lattice, cocharacter lattice,
roots, coroots and the canonical pairing for a connected reductive
group: a semisimple part given by a (possibly reducible) Cartan type,
plus a central torus of rank ``central_rank``.  Flavors:

  ``sc``  simply connected: characters live in the weight lattice
          (fundamental-weight coordinates), cocharacters in the coroot
          lattice (simple-coroot coordinates);
  ``ad``  adjoint: characters in the root lattice (simple-root
          coordinates), cocharacters in the coweight lattice
          (fundamental-coweight coordinates);
  ``gl``  the general linear group GL_n: both lattices are Z^n in the
          standard diagonal coordinates (type label ``GLn``).

In every flavor the pairing between stored coordinate vectors is the
plain dot product.  The canonical norm on the cocharacter lattice is
the sum of squares of all root pairings, extended on the central
directions by unit functionals (the determinant functional for gl);
it is Weyl-invariant and positive definite.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm

from .errors import GuardError, InvalidTypeError
from .linalg import int_det

RANK_LIMITS = {
    "A": (1, 8),
    "B": (2, 8),
    "C": (2, 8),
    "D": (3, 8),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}

# Primes dividing a coefficient of the highest root.
BAD_PRIMES = {
    "A": frozenset(),
    "B": frozenset({2}),
    "C": frozenset({2}),
    "D": frozenset({2}),
    "G": frozenset({2, 3}),
    "F": frozenset({2, 3}),
    "E6": frozenset({2, 3}),
    "E7": frozenset({2, 3}),
    "E8": frozenset({2, 3, 5}),
}

WEYL_RANK_GUARD = 6


def parse_type(label: str):
    """Parse a type label into a list of (family, rank) factors.

    Accepts ``C2``, ``GL3``, and reducible sums like ``A1+A1`` or
    ``B3+A2``.  ``GL`` labels cannot be combined with other factors.
    """
    label = label.strip()
    parts = label.split("+")
    factors = []
    for part in parts:
        m = re.fullmatch(r"(GL|[A-G])(\d+)", part.strip())
        if not m:
            raise InvalidTypeError(f"unrecognized type label {part!r}")
        family, n = m.group(1), int(m.group(2))
        if family == "GL":
            if len(parts) > 1:
                raise InvalidTypeError("GL factors cannot be combined")
            if n < 2:
                raise InvalidTypeError("GL requires n >= 2")
        else:
            lo, hi = RANK_LIMITS[family]
            if not lo <= n <= hi:
                raise InvalidTypeError(
                    f"rank {n} out of range for family {family}"
                )
        factors.append((family, n))
    return factors


def cartan_matrix_irreducible(family: str, n: int):
    """Cartan matrix of one irreducible factor, rows indexed by roots:
    entry [i][j] is the pairing of simple root i against simple coroot j."""
    if family == "GL":
        return cartan_matrix_irreducible("A", n - 1)
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if family == "A":
        for i in range(n - 1):
            edge(i, i + 1)
    elif family == "B":
        for i in range(n - 2):
            edge(i, i + 1)
        # last simple root is short
        edge(n - 2, n - 1, -2, -1)
    elif family == "C":
        for i in range(n - 2):
            edge(i, i + 1)
        # last simple root is long
        edge(n - 2, n - 1, -1, -2)
    elif family == "D":
        for i in range(n - 2):
            edge(i, i + 1)
        C[n - 2][n - 1] = C[n - 1][n - 2] = 0
        edge(n - 3, n - 1)
    elif family == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]:
            if j < n:
                edge(i, j)
        edge(1, 3)
    elif family == "F":
        edge(0, 1)
        edge(1, 2, -2, -1)
        edge(2, 3)
    elif family == "G":
        edge(0, 1, -1, -3)
    else:
        raise InvalidTypeError(f"unknown family {family}")
    return C


def symmetrizer(C):
    """Positive integers d with d[j]*C[i][j] == d[i]*C[j][i], computed
    per connected component; d is proportional to squared root lengths
    within each component."""
    n = len(C)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        comp = {start}
        d[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if C[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(C[j][i], C[i][j])
                    comp.add(j)
                    queue.append(j)
        scale = lcm(*[d[i].denominator for i in comp]) if comp else 1
        g = 0
        vals = {}
        for i in comp:
            vals[i] = int(d[i] * scale)
            g = _gcd(g, vals[i])
        for i in comp:
            d[i] = vals[i] // g
    return d


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def vec_gcd(v):
    g = 0
    for x in v:
        g = _gcd(g, x)
    return g


def _generate_roots(C):
    """All positive roots in simple-root coordinates, by reflection
    closure, sorted by (height, coordinates)."""
    n = len(C)
    simples = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    seen = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for c in frontier:
            for j in range(n):
                pairing = sum(c[i] * C[i][j] for i in range(n))
                r = list(c)
                r[j] -= pairing
                r = tuple(r)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return sorted((c for c in seen if sum(c) > 0), key=lambda c: (sum(c), c))


class Cocharacter:
    """Integer (or, when flagged, rational) vector in the stored
    cocharacter coordinates of a datum."""

    def __init__(self, datum, coords):
        self.datum = datum
        self.coords = tuple(coords)

    def is_primitive(self):
        return vec_gcd([int(x) for x in self.coords]) == 1

    def __eq__(self, other):
        return (
            isinstance(other, Cocharacter)
            and self.datum is other.datum
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"Cocharacter{self.coords}"


class NormForm:
    """Positive definite integral quadratic form on the cocharacter
    lattice, given by its Gram matrix in stored coordinates."""

    def __init__(self, gram):
        self.gram = [list(map(int, row)) for row in gram]
        self.dim = len(gram)

    def inner(self, phi, psi):
        g = self.gram
        return sum(
            phi[i] * g[i][j] * psi[j]
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def norm_sq(self, phi):
        return self.inner(phi, phi)

    def is_positive_definite(self):
        for k in range(1, self.dim + 1):
            minor = [row[:k] for row in self.gram[:k]]
            if int_det(minor) <= 0:
                return False
        return True


class RootDatum:
    """Root datum of a connected reductive group in a fixed flavor."""

    def __init__(self, label: str, flavor: str = "sc", central_rank: int = 0):
        factors = parse_type(label)
        is_gl = factors[0][0] == "GL"
        if is_gl:
            flavor = "gl"
        if flavor not in ("sc", "ad", "gl"):
            raise InvalidTypeError(f"unknown flavor {flavor!r}")
        if flavor == "gl" and not is_gl:
            raise InvalidTypeError("flavor gl is only for GL type labels")
        if central_rank < 0:
            raise InvalidTypeError("central_rank must be nonnegative")
        if is_gl and central_rank:
            raise InvalidTypeError("GL carries its own central direction")
        self.label = label
        self.factors = factors
        self.flavor = flavor
        self.is_gl = is_gl
        if is_gl:
            n = factors[0][1]
            self.ss_rank = n - 1
            self.central_rank = 1
            self.rank = n
        else:
            self.ss_rank = sum(n for _, n in factors)
            self.central_rank = central_rank
            self.rank = self.ss_rank + central_rank

        # block-diagonal Cartan matrix over all factors
        r = self.ss_rank
        C = [[0] * r for _ in range(r)]
        off = 0
        self.factor_slices = []
        for family, n in factors:
            nn = n - 1 if family == "GL" else n
            block = cartan_matrix_irreducible(family, n)
            for i in range(nn):
                for j in range(nn):
                    C[off + i][off + j] = block[i][j]
            self.factor_slices.append((family, n, off, off + nn))
            off += nn
        self.cartan = C
        self.sym = symmetrizer(C)
        # symmetrized form on the root lattice: B[i][j] = C[i][j]*d[j]
        self.bform = [[C[i][j] * self.sym[j] for j in range(r)] for i in range(r)]

        pos = _generate_roots(C)
        self.positive_simple_coords = pos
        self.n_pos = len(pos)
        self.roots_simple = pos + [tuple(-x for x in c) for c in pos]
        self.root_index_by_simple = {c: i for i, c in enumerate(self.roots_simple)}
        self.root_norms_sq = [self._norm_sq_simple(c) for c in self.roots_simple]

        # coroot of each root, in simple-coroot coordinates
        self.coroots_simple = []
        for c, nsq in zip(self.roots_simple, self.root_norms_sq):
            e = []
            for j in range(r):
                num = c[j] * self._norm_sq_simple(self._unit(j))
                if num % nsq != 0:
                    raise AssertionError("non-integral coroot coordinate")
                e.append(num // nsq)
            self.coroots_simple.append(tuple(e))

        self.roots = [self._embed_root(c) for c in self.roots_simple]
        self.coroots = [self._embed_coroot(e) for e in self.coroots_simple]
        self.simple_root_indices = [
            self.root_index_by_simple[self._unit(i)] for i in range(r)
        ]

        if is_gl:
            self.central_functionals = [tuple([1] * self.rank)]
        else:
            self.central_functionals = [
                tuple(
                    1 if k == self.ss_rank + c else 0 for k in range(self.rank)
                )
                for c in range(central_rank)
            ]

        gram = [[0] * self.rank for _ in range(self.rank)]
        for vec in list(self.roots) + self.central_functionals:
            for i in range(self.rank):
                if vec[i]:
                    for j in range(self.rank):
                        gram[i][j] += vec[i] * vec[j]
        self.norm = NormForm(gram)

    # -- coordinate plumbing -------------------------------------------

    def _unit(self, i):
        return tuple(1 if k == i else 0 for k in range(self.ss_rank))

    def _norm_sq_simple(self, c):
        B = self.bform
        r = self.ss_rank
        return sum(c[i] * B[i][j] * c[j] for i in range(r) for j in range(r))

    def _embed_root(self, c):
        """Stored character coordinates of a root given in simple-root
        coordinates; central coordinates are zero (roots kill the
        center), except in the gl flavor's diagonal coordinates."""
        C = self.cartan
        r = self.ss_rank
        if self.flavor == "sc":
            ss = [sum(c[i] * C[i][j] for i in range(r)) for j in range(r)]
            return tuple(ss + [0] * self.central_rank)
        if self.flavor == "ad":
            return tuple(list(c) + [0] * self.central_rank)
        v = [0] * self.rank
        for i, ci in enumerate(c):
            v[i] += ci
            v[i + 1] -= ci
        return tuple(v)

    def _embed_coroot(self, e):
        C = self.cartan
        r = self.ss_rank
        if self.flavor == "sc":
            return tuple(list(e) + [0] * self.central_rank)
        if self.flavor == "ad":
            ss = [sum(C[j][i] * e[i] for i in range(r)) for j in range(r)]
            return tuple(ss + [0] * self.central_rank)
        v = [0] * self.rank
        for i, ei in enumerate(e):
            v[i] += ei
            v[i + 1] -= ei
        return tuple(v)

    # -- basic queries -------------------------------------------------

    def pairing(self, chi, phi):
        """Canonical pairing of a character with a cocharacter."""
        return sum(a * b for a, b in zip(chi, phi))

    def negate_index(self, i):
        return i + self.n_pos if i < self.n_pos else i - self.n_pos

    def is_positive_index(self, i):
        return i < self.n_pos

    def height(self, i):
        return sum(self.roots_simple[i])

    def root_subsystem(self, simple_subset):
        """Indices of all roots supported on the given simple indices."""
        s = set(simple_subset)
        return [
            i
            for i, c in enumerate(self.roots_simple)
            if all(cj == 0 for j, cj in enumerate(c) if j not in s)
        ]

    def simple_components(self, simple_subset):
        """Partition a set of simple indices into Dynkin-connected
        components (each sorted)."""
        remaining = set(simple_subset)
        comps = []
        while remaining:
            seed = min(remaining)
            comp = {seed}
            queue = [seed]
            while queue:
                i = queue.pop()
                for j in list(remaining - comp):
                    if self.cartan[i][j] != 0:
                        comp.add(j)
                        queue.append(j)
            comps.append(sorted(comp))
            remaining -= comp
        return comps

    # -- prime conditions ----------------------------------------------

    def good_prime(self, p: int) -> bool:
        if p == 0:
            return True
        for family, n in self.factors:
            key = f"E{n}" if family == "E" else ("A" if family == "GL" else family)
            if p in BAD_PRIMES[key]:
                return False
        return True

    def very_good_prime(self, p: int) -> bool:
        if p == 0:
            return True
        if not self.good_prime(p):
            return False
        for family, n in self.factors:
            if family == "A" and (n + 1) % p == 0:
                return False
            if family == "GL" and n % p == 0:
                return False
        return True

    # -- Weyl group ----------------------------------------------------

    def reflect_cochar(self, j, phi):
        """Simple reflection j applied to a cocharacter."""
        root = self.roots[self.simple_root_indices[j]]
        coroot = self.coroots[self.simple_root_indices[j]]
        t = self.pairing(root, phi)
        return tuple(x - t * y for x, y in zip(phi, coroot))

    def reflect_char(self, j, chi):
        """Simple reflection j applied to a character."""
        root = self.roots[self.simple_root_indices[j]]
        coroot = self.coroots[self.simple_root_indices[j]]
        t = self.pairing(chi, coroot)
        return tuple(x - t * y for x, y in zip(chi, root))

    def weyl_group_on_cochars(self):
        """All Weyl group elements as matrices acting on stored
        cocharacter coordinates (tuples of row tuples)."""
        self._weyl_guard()
        n = self.rank
        gens = []
        for j in range(self.ss_rank):
            cols = [
                self.reflect_cochar(j, tuple(1 if k == i else 0 for k in range(n)))
                for i in range(n)
            ]
            gens.append(tuple(zip(*cols)))
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    prod = tuple(
                        tuple(
                            sum(g[i][k] * w[k][j] for k in range(n))
                            for j in range(n)
                        )
                        for i in range(n)
                    )
                    if prod not in seen:
                        seen.add(prod)
                        nxt.append(prod)
            frontier = nxt
        return sorted(seen)

    def weyl_root_permutations(self):
        """Weyl group as permutations of the root index list."""
        self._weyl_guard()
        idperm = tuple(range(len(self.roots)))

        def apply_reflection(j, perm):
            out = []
            for i in perm:
                c = self.roots_simple[i]
                pairing = sum(c[k] * self.cartan[k][j] for k in range(self.ss_rank))
                r = list(c)
                r[j] -= pairing
                out.append(self.root_index_by_simple[tuple(r)])
            return tuple(out)

        seen = {idperm}
        frontier = [idperm]
        while frontier:
            nxt = []
            for perm in frontier:
                for j in range(self.ss_rank):
                    q = apply_reflection(j, perm)
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return sorted(seen)

    def _weyl_guard(self):
        if self.ss_rank > WEYL_RANK_GUARD:
            raise GuardError(
                f"Weyl group enumeration limited to semisimple rank "
                f"{WEYL_RANK_GUARD}; {self.label} has rank {self.ss_rank}"
            )

    def dominant_cochar(self, phi):
        """The dominant Weyl conjugate of a cocharacter (all simple-root
        pairings nonnegative).  Works on integer or rational coords."""
        phi = tuple(phi)
        changed = True
        while changed:
            changed = False
            for j in range(self.ss_rank):
                root = self.roots[self.simple_root_indices[j]]
                if self.pairing(root, phi) < 0:
                    phi = self.reflect_cochar(j, phi)
                    changed = True
        return phi

    def serialize(self):
        return {
            "type": self.label,
            "flavor": self.flavor,
            "rank": self.rank,
            "central_rank": self.central_rank,
            "cartan": [list(row) for row in self.cartan],
            "roots": [list(r) for r in self.roots],
            "coroots": [list(c) for c in self.coroots],
            "norm_gram": [list(row) for row in self.norm.gram],
        }

    def __repr__(self):
        return f"RootDatum({self.label}, {self.flavor})"


_datum_cache = {}


def get_datum(label: str, flavor: str = "sc", central_rank: int = 0) -> RootDatum:
    factors = parse_type(label)
    if factors[0][0] == "GL":
        flavor = "gl"
        central_rank = 0
    key = (label, flavor, central_rank)
    if key not in _datum_cache:
        _datum_cache[key] = RootDatum(label, flavor, central_rank)
    return _datum_cache[key]


def build_root_datum(cartan_type, rank=None, isogeny_flavor="sc", central_rank=0):
    """Build a root datum from a type letter plus rank, or from a full
    label like ``C2`` / ``GL3`` / ``A1+A1``."""
    flavor = {"simply-connected": "sc", "adjoint": "ad"}.get(
        isogeny_flavor, isogeny_flavor
    )
    label = cartan_type if rank is None else f"{cartan_type}{rank}"
    return get_datum(label, flavor, central_rank)


def is_good_prime(datum: RootDatum, p: int) -> bool:
    return datum.good_prime(p)


def is_very_good_prime(datum: RootDatum, p: int) -> bool:
    return datum.very_good_prime(p)


def default_norm(datum: RootDatum) -> NormForm:
    return datum.norm


def weyl_group_elements(datum: RootDatum):
    return datum.weyl_group_on_cochars()
