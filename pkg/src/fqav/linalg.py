"""Exact integer/rational linear algebra: Smith normal form, lattices,
saturation, and affine congruence solving on the torus R^N / Z^N.

Everything here is exact: matrices are lists/tuples of Python ints,
rational data uses fractions.Fraction.  No floating point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


# ---------------------------------------------------------------------------
# basic matrix helpers (row-major lists of lists)

def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Exact matrix product; entries may be int or Fraction."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if inner else 0
    bt = [[b[k][j] for k in range(inner)] for j in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def mat_eq(a, b):
    return [list(r) for r in a] == [list(r) for r in b]


def determinant(m):
    """Exact determinant via fraction-free-ish Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det) if det.denominator == 1 else det


def invert_unimodular(m):
    """Inverse of a unimodular integer matrix, returned with int entries."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = [[x for x in row[n:]] for row in a]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


# ---------------------------------------------------------------------------
# Smith normal form

def snf(matrix):
    """Smith normal form with transforms: returns (S, U, V) with U*M*V = S,
    U and V unimodular, S diagonal with nonnegative entries s1 | s2 | ...

    Pivoting is deterministic: smallest absolute value, ties broken by lowest
    row index then lowest column index.
    """
    a = [[int(x) for x in row] for row in matrix]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity_matrix(nr)
    v = identity_matrix(nc)

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        if k:
            for row in a:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def diagonalize():
        t = 0
        while t < min(nr, nc):
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    val = abs(a[i][j])
                    if val and (best is None or val < best[0]):
                        best = (val, i, j)
            if best is None:
                break
            swap_rows(t, best[1])
            swap_cols(t, best[2])
            if a[t][t] < 0:
                negate_row(t)
            while True:
                for i in range(t + 1, nr):
                    if a[i][t]:
                        add_row(t, i, -(a[i][t] // a[t][t]))
                rem = [i for i in range(t + 1, nr) if a[i][t]]
                if rem:
                    i = min(rem, key=lambda k: (abs(a[k][t]), k))
                    swap_rows(t, i)
                    if a[t][t] < 0:
                        negate_row(t)
                    continue
                for j in range(t + 1, nc):
                    if a[t][j]:
                        add_col(t, j, -(a[t][j] // a[t][t]))
                rem = [j for j in range(t + 1, nc) if a[t][j]]
                if rem:
                    j = min(rem, key=lambda k: (abs(a[t][k]), k))
                    swap_cols(t, j)
                    if a[t][t] < 0:
                        negate_row(t)
                    continue
                break
            t += 1
        return t

    rank = diagonalize()
    # enforce the divisibility chain s_i | s_{i+1}
    while True:
        bad = None
        for i in range(rank - 1):
            if a[i][i] and a[i + 1][i + 1] % a[i][i] != 0:
                bad = i
                break
        if bad is None:
            break
        add_col(bad + 1, bad, 1)
        rank = diagonalize()
    return a, u, v


def elementary_divisors(matrix):
    s, _, _ = snf(matrix)
    n = min(len(s), len(s[0]) if s else 0)
    return [s[i][i] for i in range(n) if s[i][i] != 0]


# ---------------------------------------------------------------------------
# Hermite-style canonical basis for row lattices

def hermite_basis(vectors, width):
    """Canonical basis (row HNF, positive pivots, reduced above) of the
    lattice generated by the given integer vectors."""
    rows = [list(map(int, vec)) for vec in vectors if any(vec)]
    pivots = []
    r = 0
    for c in range(width):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if len(nz) <= 1:
                break
            i0 = min(nz, key=lambda i: (abs(rows[i][c]), i))
            for i in nz:
                if i != i0:
                    q = rows[i][c] // rows[i0][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[i0])]
        nz = [i for i in range(r, len(rows)) if rows[i][c]]
        if not nz:
            continue
        rows[r], rows[nz[0]] = rows[nz[0]], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        pivots.append(c)
        r += 1
    rows = [row for row in rows[:r]]
    # reduce above the pivots: for each row, clear against the lower pivot
    # rows left to right so later subtractions cannot un-reduce a column
    for i in range(r - 2, -1, -1):
        for k in range(i + 1, r):
            c = pivots[k]
            q = rows[i][c] // rows[k][c]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[k])]
    return rows


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^ambient_rank, stored via its canonical HNF basis."""

    ambient_rank: int
    basis: tuple

    @classmethod
    def from_vectors(cls, ambient_rank, vectors):
        rows = hermite_basis(vectors, ambient_rank)
        return cls(ambient_rank, tuple(tuple(r) for r in rows))

    @classmethod
    def full(cls, ambient_rank):
        return cls.from_vectors(ambient_rank, identity_matrix(ambient_rank))

    @classmethod
    def zero(cls, ambient_rank):
        return cls(ambient_rank, ())

    @property
    def rank(self):
        return len(self.basis)

    def basis_rows(self):
        return [list(r) for r in self.basis]

    def contains(self, vector):
        """Membership of an integer (or rational) vector in this lattice."""
        coeffs = solve_rational(mat_transpose(self.basis_rows()), list(vector))
        if coeffs is None:
            return False
        return all(Fraction(c).denominator == 1 for c in coeffs)

    def spans_rationally(self, vector):
        return solve_rational(mat_transpose(self.basis_rows()), list(vector)) is not None


def saturate(lat: Lattice) -> Lattice:
    """Saturation (L tensor Q) intersect Z^N: same rank, torsion-free quotient."""
    if lat.rank == 0:
        return lat
    _, _, v = snf(lat.basis_rows())
    vinv = invert_unimodular(v)
    return Lattice.from_vectors(lat.ambient_rank, vinv[: lat.rank])


def rational_kernel_basis(matrix, cols=None):
    """Basis of the rational kernel of an exact matrix, as Fraction vectors."""
    if cols is None:
        cols = len(matrix[0]) if matrix else 0
    a = [[Fraction(x) for x in row] for row in matrix]
    nr = len(a)
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for k, c in enumerate(pivots):
            vec[c] = -a[k][f]
        basis.append(vec)
    return basis


def integer_kernel(matrix, cols) -> Lattice:
    """Saturated lattice {x in Z^cols : M x = 0}."""
    if not matrix:
        return Lattice.full(cols)
    s, _, v = snf(matrix)
    n = min(len(s), len(s[0]) if s else 0)
    rank = sum(1 for i in range(n) if s[i][i] != 0)
    vt = mat_transpose(v)
    return Lattice.from_vectors(cols, vt[rank:])


def solve_rational(matrix, rhs):
    """One rational solution of M x = rhs, or None if inconsistent."""
    nr = len(matrix)
    nc = len(matrix[0]) if nr else 0
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    for i in range(r, nr):
        if a[i][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for k, c in enumerate(pivots):
        x[c] = a[k][nc]
    return x


def intersect_lattices(l1: Lattice, l2: Lattice) -> Lattice:
    """Saturated intersection of the rational spans, inside Z^N."""
    if l1.ambient_rank != l2.ambient_rank:
        raise ValueError("ambient ranks differ")
    n = l1.ambient_rank
    if l1.rank == 0 or l2.rank == 0:
        return Lattice.zero(n)
    b1 = l1.basis_rows()
    b2 = l2.basis_rows()
    # x in span(b1) cap span(b2):  x = alpha*b1 = beta*b2
    stacked = [[b1[i][r] for i in range(len(b1))] + [-b2[j][r] for j in range(len(b2))]
               for r in range(n)]
    kernel = rational_kernel_basis(stacked)
    vectors = []
    for coeff in kernel:
        alpha = coeff[: len(b1)]
        vec = [sum(alpha[i] * Fraction(b1[i][r]) for i in range(len(b1))) for r in range(n)]
        den = lcm(*[f.denominator for f in vec]) if vec else 1
        vectors.append([int(f * den) for f in vec])
    return saturate(Lattice.from_vectors(n, vectors))


# ---------------------------------------------------------------------------
# torsion points and affine congruences on the torus

def _reduce_mod1(frac):
    f = Fraction(frac)
    return f - (f.numerator // f.denominator)


@dataclass(frozen=True)
class TorsionPoint:
    """A rational point of the torus, coordinates reduced to [0, 1)."""

    coords: tuple

    @classmethod
    def of(cls, coords):
        return cls(tuple(_reduce_mod1(c) for c in coords))

    @classmethod
    def zero(cls, n):
        return cls(tuple(Fraction(0) for _ in range(n)))

    @property
    def order(self):
        return lcm(*[c.denominator for c in self.coords]) if self.coords else 1

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        return TorsionPoint.of(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return TorsionPoint.of(tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, k):
        return TorsionPoint.of(tuple(k * c for c in self.coords))

    def apply_matrix(self, m):
        return TorsionPoint.of(tuple(mat_vec(m, list(self.coords))))

    def sort_key(self):
        return tuple((c.numerator, c.denominator) for c in self.coords)


@dataclass(frozen=True)
class AffineSolutionSet:
    """Solution set of M x == a (mod Z^N) on the torus: a finite union of
    translates of the kernel subtorus."""

    nonempty: bool
    kernel: Lattice
    component_count: int
    representatives: tuple

    @property
    def dim(self):
        return Fraction(self.kernel.rank, 2)


def solve_affine_mod_lattice(matrix, point: TorsionPoint) -> AffineSolutionSet:
    """Describe {x in R^N/Z^N : M x == a (mod Z^N)} via Smith normal form.

    Accepts any integer matrix with N columns; rows need not equal N.
    """
    nr = len(matrix)
    nc = len(matrix[0]) if nr else len(point.coords)
    s, u, v = snf(matrix) if nr else ([], [], identity_matrix(nc))
    divisors = [s[i][i] for i in range(min(nr, nc)) if s[i][i] != 0] if nr else []
    rank = len(divisors)
    kernel = Lattice.from_vectors(nc, mat_transpose(v)[rank:])
    b = mat_vec(u, [Fraction(c) for c in point.coords]) if nr else []
    for i in range(rank, nr):
        if _reduce_mod1(b[i]) != 0:
            return AffineSolutionSet(False, kernel, 0, ())
    count = 1
    for d in divisors:
        count *= d
    reps = []
    for combo in itertools.product(*[range(d) for d in divisors]):
        y = [Fraction(b[i] + combo[i], divisors[i]) for i in range(rank)]
        y += [Fraction(0)] * (nc - rank)
        x = mat_vec(v, y)
        reps.append(TorsionPoint.of(x))
    reps.sort(key=TorsionPoint.sort_key)
    return AffineSolutionSet(True, kernel, count, tuple(reps))


def orthogonal_complement_rows(lat: Lattice) -> list:
    """Basis of the saturated integer lattice {v : v . w = 0 for all w in L}.

    With these rows K, the subtorus (span(L)+Z^N)/Z^N is exactly
    {x : K x in Z^rows}.
    """
    if lat.rank == 0:
        return identity_matrix(lat.ambient_rank)
    ker = integer_kernel(lat.basis_rows(), lat.ambient_rank)
    return ker.basis_rows()


def lattice_index(sublattice_rows, n):
    """Index [Z^n : rowspan] for a full-rank square system of rows."""
    det = determinant(sublattice_rows)
    return abs(det)
