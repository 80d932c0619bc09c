"""Model of A = E_1 x ... x E_n with CM data: endomorphisms in block form,
their rational/analytic representations, abelian subvarieties as lattices,
and divisor-level computations (linear equivalence, Kodaira dimension of
torsion-translate divisors, invariant complements).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycloField, cyclo_mat_from_rational
from .errors import CertificateError, InputError
from .linalg import (
    Lattice,
    TorsionPoint,
    determinant,
    identity_matrix,
    intersect_lattices,
    integer_kernel,
    mat_mul,
    mat_transpose,
    mat_vec,
    orthogonal_complement_rows,
    saturate,
    solve_affine_mod_lattice,
    solve_rational,
)

ZETA4 = "zeta4"
ZETA6 = "zeta6"
GENERIC = "generic"

_TAU_BLOCKS = {
    ZETA4: ((0, -1), (1, 0)),
    ZETA6: ((0, -1), (1, 1)),
}


@dataclass(frozen=True)
class EllipticFactor:
    """One elliptic curve factor: CM by zeta4 or zeta6, or a label-identified
    curve without CM (equal labels mean the same curve)."""

    cm: str
    label: str = ""

    def __post_init__(self):
        if self.cm not in (ZETA4, ZETA6, GENERIC):
            raise InputError(f"unknown cm type {self.cm!r}", code="bad-factor")

    @property
    def has_cm(self):
        return self.cm in _TAU_BLOCKS

    @property
    def tau_block(self):
        return _TAU_BLOCKS[self.cm]

    def hom_key(self, other):
        """Factors admit nonzero homomorphisms iff their keys agree."""
        if self.cm != other.cm:
            return None
        if self.cm == GENERIC and self.label != other.label:
            return None
        return (self.cm, self.label if self.cm == GENERIC else "")


@dataclass(frozen=True)
class AbelianVarietyModel:
    factors: tuple

    @classmethod
    def of(cls, *factors):
        return cls(tuple(factors))

    @property
    def n(self):
        return len(self.factors)

    @property
    def ambient_rank(self):
        return 2 * self.n


@dataclass(frozen=True)
class EndoBlockMatrix:
    """Endomorphism of A in n x n block form; block (j, k) is a pair (c, d)
    meaning c + d*tau acting from factor k to factor j."""

    variety: AbelianVarietyModel
    blocks: tuple  # n x n of (c, d) int pairs

    def __post_init__(self):
        fs = self.variety.factors
        n = self.variety.n
        if len(self.blocks) != n or any(len(r) != n for r in self.blocks):
            raise InputError("holonomy block shape mismatch", code="not-endomorphism")
        for j in range(n):
            for k in range(n):
                c, d = self.blocks[j][k]
                if fs[j].hom_key(fs[k]) is None:
                    if (c, d) != (0, 0):
                        raise InputError("not an endomorphism", code="not-endomorphism")
                elif d != 0 and not fs[j].has_cm:
                    raise InputError("not an endomorphism", code="not-endomorphism")

    @classmethod
    def from_rows(cls, variety, rows):
        return cls(variety, tuple(tuple((int(c), int(d)) for c, d in row) for row in rows))

    @classmethod
    def identity(cls, variety):
        n = variety.n
        return cls.from_rows(variety, [[(1, 0) if i == j else (0, 0) for j in range(n)]
                                       for i in range(n)])

    def is_identity(self):
        return self == EndoBlockMatrix.identity(self.variety)

    def compose(self, other):
        """Block matrix product; tau-multiplication follows the CM type of
        the middle factor."""
        fs = self.variety.factors
        n = self.variety.n
        out = [[(0, 0)] * n for _ in range(n)]
        for j in range(n):
            for k in range(n):
                c_acc, d_acc = 0, 0
                for t in range(n):
                    c1, d1 = self.blocks[j][t]
                    c2, d2 = other.blocks[t][k]
                    if (c1, d1) == (0, 0) or (c2, d2) == (0, 0):
                        continue
                    if fs[t].cm == ZETA4:  # tau^2 = -1
                        c_acc += c1 * c2 - d1 * d2
                        d_acc += c1 * d2 + d1 * c2
                    elif fs[t].cm == ZETA6:  # tau^2 = tau - 1
                        c_acc += c1 * c2 - d1 * d2
                        d_acc += c1 * d2 + d1 * c2 + d1 * d2
                    else:
                        c_acc += c1 * c2
                out[j][k] = (c_acc, d_acc)
        return EndoBlockMatrix.from_rows(self.variety, out)

    def sort_key(self):
        return self.blocks


def rational_rep(phi: EndoBlockMatrix):
    """The 2n x 2n action on the lattice Z^(2n), coordinates (1, tau) per
    factor."""
    fs = phi.variety.factors
    n = phi.variety.n
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        for k in range(n):
            c, d = phi.blocks[j][k]
            if (c, d) == (0, 0):
                continue
            if d == 0:
                block = [[c, 0], [0, c]]
            else:
                t = fs[k].tau_block
                block = [[c + d * t[0][0], d * t[0][1]],
                         [d * t[1][0], c + d * t[1][1]]]
            for a in range(2):
                for b in range(2):
                    out[2 * j + a][2 * k + b] = block[a][b]
    return out


def analytic_rep(phi: EndoBlockMatrix, field: CycloField):
    """The n x n action on the tangent space, with entries in Q(zeta_m)."""
    fs = phi.variety.factors
    n = phi.variety.n
    out = []
    for j in range(n):
        row = []
        for k in range(n):
            c, d = phi.blocks[j][k]
            entry = field.rational(c)
            if d:
                tau = field.root_of_unity(4 if fs[k].cm == ZETA4 else 6)
                entry = entry + field.rational(d) * tau
            row.append(entry)
        out.append(row)
    return out


def _stability_test_matrices(variety: AbelianVarietyModel):
    """Rational matrices whose simultaneous stabilization of a subspace is
    equivalent to stability under the (generally irrational) complex
    structure of the product.

    Per factor the scaled complex structure is [[-x, -(x^2+y^2)], [1, x]]
    with period tau = x + iy; the terms are grouped by the Q-linear
    independence class of their irrational scalars: all zeta4 factors
    together, all zeta6 factors together, and three coefficient matrices per
    generic label.
    """
    n = variety.n
    groups = {}

    def block_into(key, j, block):
        mat = groups.setdefault(key, [[0] * (2 * n) for _ in range(2 * n)])
        for a in range(2):
            for b in range(2):
                mat[2 * j + a][2 * j + b] = block[a][b]

    for j, f in enumerate(variety.factors):
        if f.cm == ZETA4:  # x = 0, x^2+y^2 = 1
            block_into(("cm", ZETA4), j, [[0, -1], [1, 0]])
        elif f.cm == ZETA6:  # x = 1/2, x^2+y^2 = 1 (scaled by 2)
            block_into(("cm", ZETA6), j, [[-1, -2], [2, 1]])
        else:
            block_into(("gen", f.label, "const"), j, [[0, 0], [1, 0]])
            block_into(("gen", f.label, "x"), j, [[-1, 0], [0, 1]])
            block_into(("gen", f.label, "norm"), j, [[0, -1], [0, 0]])
    return list(groups.values())


def _span_stable_under(lat: Lattice, matrix):
    rows = lat.basis_rows()
    cols = mat_transpose(rows)
    for vec in rows:
        image = mat_vec(matrix, vec)
        if solve_rational(cols, image) is None:
            return False
    return True


def is_abelian_subvariety(lat: Lattice, variety: AbelianVarietyModel) -> bool:
    """True iff the saturated lattice has even rank and rational span stable
    under the complex structure of the product."""
    if lat.rank % 2 != 0:
        return False
    if lat.rank == 0:
        return True
    return all(_span_stable_under(lat, m) for m in _stability_test_matrices(variety))


@dataclass(frozen=True)
class SubtorusTranslate:
    """A translate of a subtorus: saturated complex-linear lattice plus a
    torsion translate."""

    lattice: Lattice
    translate: TorsionPoint

    @property
    def dim(self):
        return self.lattice.rank // 2

    def canonical_key(self):
        """Hashable identity: the lattice plus the translate reduced modulo
        the subtorus (via the dual integer forms)."""
        k = orthogonal_complement_rows(self.lattice)
        reduced = TorsionPoint.of(mat_vec(k, list(self.translate.coords)))
        return (self.lattice, reduced)

    def same_translate(self, other):
        return self.canonical_key() == other.canonical_key()

    def sort_key(self):
        return (self.lattice.basis, self.translate.sort_key())


def subtorus_membership_rows(lat: Lattice):
    return orthogonal_complement_rows(lat)


def connected_intersection(s1: SubtorusTranslate, s2: SubtorusTranslate):
    """Intersection of two subtorus translates: the common sublattice D and
    the finite set of components (translates of D)."""
    d = intersect_lattices(s1.lattice, s2.lattice)
    k1 = subtorus_membership_rows(s1.lattice)
    k2 = subtorus_membership_rows(s2.lattice)
    stacked = k1 + k2
    if not stacked:
        zero = TorsionPoint.zero(s1.lattice.ambient_rank)
        return d, (SubtorusTranslate(d, zero),)
    rhs = TorsionPoint.of(
        list(TorsionPoint.of(mat_vec(k1, list(s1.translate.coords))).coords)
        + list(TorsionPoint.of(mat_vec(k2, list(s2.translate.coords))).coords)
    )
    sol = solve_affine_mod_lattice(stacked, rhs)
    if not sol.nonempty:
        return d, ()
    comps = tuple(SubtorusTranslate(d, rep) for rep in sol.representatives)
    return d, comps


def q_linear_equivalent(t1: SubtorusTranslate, t2: SubtorusTranslate) -> bool:
    """Q-linear equivalence of codimension-1 torsion translates: same
    subtorus (translates are torsion by construction)."""
    n2 = t1.lattice.ambient_rank
    if t1.lattice.rank != n2 - 2 or t2.lattice.rank != n2 - 2:
        raise InputError("divisor components must have codimension 1",
                         code="not-codim-1")
    return t1.lattice == t2.lattice


def kappa_divisor(components, variety: AbelianVarietyModel):
    """Kodaira dimension of an effective divisor whose components are torsion
    translates of codimension-1 subtori: kappa = n - dim of the common
    subtorus; ample iff kappa = n."""
    n = variety.n
    common = Lattice.full(variety.ambient_rank)
    for _mult, t in components:
        if t.lattice.rank != variety.ambient_rank - 2:
            raise InputError("divisor components must have codimension 1",
                             code="not-codim-1")
        common = intersect_lattices(common, t.lattice)
    kappa = n - common.rank // 2
    return kappa, kappa == n


def standard_symplectic_form(variety: AbelianVarietyModel):
    """The product principal polarization seed: block-diagonal [[0,1],[-1,0]]."""
    n = variety.n
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        out[2 * j][2 * j + 1] = 1
        out[2 * j + 1][2 * j] = -1
    return out


def averaged_polarization(n0_reps, seed):
    """Sum of rho^T * E0 * rho over a closed set of rational representations."""
    size = len(seed)
    total = [[0] * size for _ in range(size)]
    for rho in n0_reps:
        term = mat_mul(mat_transpose(rho), mat_mul(seed, rho))
        total = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(total, term)]
    return total


def orthogonal_complement_lattice(b: Lattice, form):
    """Saturation of {v in Z^N : u^T E v = 0 for all u in B}."""
    rows = [mat_vec(mat_transpose(form), u) for u in b.basis_rows()]
    # u^T E v = (E^T u) . v
    return integer_kernel(rows, b.ambient_rank)


def poincare_complement(b: Lattice, n0, variety: AbelianVarietyModel):
    """An N0-invariant complement C of B: average the standard polarization
    over N0, take the E-orthogonal complement, saturate.  Returns (C, index
    of B + C in Z^(2n))."""
    reps = [rational_rep(phi) for phi in n0]
    for rho in reps:
        if not all(b.spans_rationally(mat_vec(rho, v)) for v in b.basis_rows()):
            raise InputError("subvariety not invariant", code="not-invariant")
    form = averaged_polarization(reps, standard_symplectic_form(variety))
    c = orthogonal_complement_lattice(b, form)
    if b.rank + c.rank != variety.ambient_rank:
        raise CertificateError("complement has wrong rank")
    stacked = b.basis_rows() + c.basis_rows()
    index = abs(determinant(stacked))
    if index == 0:
        raise CertificateError("B + C is not of finite index")
    return c, index
