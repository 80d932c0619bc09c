"""Constructive splitting of a finite quotient of an abelian variety into an
abelian factor and a Q-Fano remainder, with per-stage certificates.

The recursion runs at the rational-representation level: a stage is a
saturated sublattice with a closed group of affine maps on it, plus an
embedding back into the original ambient lattice.  Analytic data is never
needed below the top level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificateError
from .linalg import (
    Lattice,
    TorsionPoint,
    determinant,
    identity_matrix,
    integer_kernel,
    mat_mul,
    mat_sub,
    mat_transpose,
    mat_vec,
    orthogonal_complement_rows,
    solve_affine_mod_lattice,
    solve_rational,
)
from .variety import averaged_polarization, rational_rep, standard_symplectic_form


@dataclass(frozen=True)
class LatticeElement:
    """An affine map x -> W x + a on the torus R^N/Z^N, W unimodular."""

    matrix: tuple  # N x N integer, tuple of tuples
    translation: TorsionPoint

    @classmethod
    def of(cls, matrix, translation=None):
        rows = tuple(tuple(int(x) for x in r) for r in matrix)
        if translation is None:
            translation = TorsionPoint.zero(len(rows))
        return cls(rows, translation)

    @property
    def rank(self):
        return len(self.matrix)

    def is_identity(self):
        return self.translation.is_zero() and mat_eq_identity(self.matrix)

    def compose(self, other):
        m = mat_mul(self.matrix, other.matrix)
        trans = self.translation + other.translation.apply_matrix(self.matrix)
        return LatticeElement(tuple(tuple(r) for r in m), trans)

    def sort_key(self):
        return (self.matrix, self.translation.sort_key())


def mat_eq_identity(m):
    return all(m[i][j] == (1 if i == j else 0) for i in range(len(m)) for j in range(len(m)))


def close_elements(gens, cap=100000):
    """Breadth-first closure of lattice elements under composition."""
    if not gens:
        return []
    n = gens[0].rank
    ident = LatticeElement.of(identity_matrix(n))
    gens_sorted = sorted(set(gens), key=LatticeElement.sort_key)
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = set()
        for e in frontier:
            for h in gens_sorted:
                c = e.compose(h)
                if c not in seen and c not in new:
                    new.add(c)
        frontier = sorted(new, key=LatticeElement.sort_key)
        seen.update(frontier)
        elements.extend(frontier)
        if len(elements) > cap:
            raise CertificateError("lattice-level closure exceeded cap")
    return elements


def element_fixed_solution(e: LatticeElement):
    n = e.rank
    m = mat_sub(identity_matrix(n), [list(r) for r in e.matrix])
    return solve_affine_mod_lattice(m, e.translation)


def element_fixed_dim(e: LatticeElement):
    """Complex dimension of the fixed locus, or None if empty."""
    sol = element_fixed_solution(e)
    if not sol.nonempty:
        return None
    return sol.kernel.rank // 2


@dataclass(frozen=True)
class SublatticeAction:
    """A stage variety: rank-2m lattice with a closed affine group on it and
    the embedding of its coordinates into the original ambient lattice."""

    elements: tuple          # closed LatticeElement group in local coordinates
    embedding: tuple         # local basis vectors expressed in original coords
    ambient_rank: int        # rank of the original lattice

    @property
    def rank(self):
        return len(self.embedding)

    @property
    def dim(self):
        return self.rank // 2

    @property
    def order(self):
        return len(self.elements)

    def embedded_lattice(self):
        if self.rank == 0:
            return Lattice.zero(self.ambient_rank)
        return Lattice.from_vectors(self.ambient_rank, [list(v) for v in self.embedding])


@dataclass(frozen=True)
class StageCertificate:
    n_order: int
    ker_mu_order: int
    quasietale_outside_check: bool
    fano_kappa_check: bool | None
    n_tilde_order: int | None


@dataclass(frozen=True)
class DecompositionResult:
    abelian_factors: tuple   # Lattice per stage, in original ambient coordinates
    total_abelian_dim: int
    fano_part: SublatticeAction
    stages: tuple            # StageCertificate per stage

    @property
    def is_q_abelian(self):
        return self.fano_part.rank == 0


# ---------------------------------------------------------------------------
# stage operations at the lattice level

def lattice_ramification_subgroup(elements):
    """Closure of the elements whose fixed locus has codimension 1."""
    if not elements:
        return []
    n = elements[0].rank // 2
    gens = [e for e in elements if not e.is_identity() and element_fixed_dim(e) == n - 1]
    if not gens:
        return [e for e in elements if e.is_identity()]
    closed = close_elements(gens)
    in_group = set(elements)
    for e in closed:
        if e not in in_group:
            raise CertificateError("ramification subgroup escapes the group")
    return closed


def check_normal(elements, subgroup):
    sub = set(subgroup)
    by_key = {e: e for e in elements}
    for g in elements:
        g_inv = _element_inverse(g, elements)
        for h in subgroup:
            if g.compose(h).compose(g_inv) not in sub:
                raise CertificateError("ramification subgroup is not normal")


def _element_inverse(g, elements):
    for h in elements:
        if g.compose(h).is_identity():
            return h
    raise CertificateError("group not closed under inversion")


def lattice_quasietale_outside(elements, subgroup):
    """True iff every g outside the subgroup has fixed loci (of all its
    N-translates hg) of codimension >= 2."""
    sub = set(subgroup)
    if not elements:
        return True
    n = elements[0].rank // 2
    for g in elements:
        if g in sub:
            continue
        for h in subgroup:
            d = element_fixed_dim(h.compose(g))
            if d is not None and d > n - 2:
                return False
    return True


def lattice_invariant_fixed_torus(subgroup):
    """Saturated common kernel of I - W over the holonomies of the subgroup."""
    n2 = subgroup[0].rank
    stacked = []
    seen = set()
    for e in subgroup:
        if e.matrix in seen:
            continue
        seen.add(e.matrix)
        stacked.extend(mat_sub(identity_matrix(n2), [list(r) for r in e.matrix]))
    if not stacked:
        return Lattice.full(n2)
    return integer_kernel(stacked, n2)


def lattice_poincare_complement(b: Lattice, holonomies, seed_form):
    """Averaged-form orthogonal complement of B, as in the variety module but
    with an explicit seed form (needed below the top level)."""
    form = averaged_polarization([[list(r) for r in w] for w in holonomies], seed_form)
    rows = [mat_vec(mat_transpose(form), u) for u in b.basis_rows()]
    c = integer_kernel(rows, b.ambient_rank)
    if b.rank + c.rank != b.ambient_rank:
        raise CertificateError("complement has wrong rank")
    index = abs(determinant(b.basis_rows() + c.basis_rows()))
    if index == 0:
        raise CertificateError("B + C is not of finite index")
    return c, index


def lattice_kappa(elements):
    """n - dim of the intersection of the codimension-1 fixed-locus lattices;
    the anticanonical Kodaira dimension of the quotient by this group."""
    if not elements:
        return 0
    n2 = elements[0].rank
    n = n2 // 2
    common = Lattice.full(n2)
    found = False
    for e in elements:
        if e.is_identity():
            continue
        sol = element_fixed_solution(e)
        if sol.nonempty and sol.kernel.rank == n2 - 2:
            found = True
            common = _intersect(common, sol.kernel)
    if not found:
        return 0
    return n - common.rank // 2


def _intersect(l1, l2):
    from .linalg import intersect_lattices
    return intersect_lattices(l1, l2)


def split_action(n_elements, b: Lattice, c: Lattice, ker_mu_order):
    """Split N along B x C: the certificate set N-tilde on B x C and the
    restricted group N_C in C-coordinates.

    Coordinates on B x C are (beta, gamma) with a = B^T beta + C^T gamma;
    all torus-level splittings of each translation are enumerated through
    the kernel of the addition isogeny.
    """
    n2 = b.ambient_rank
    bt = mat_transpose(b.basis_rows())
    ct = mat_transpose(c.basis_rows())
    m = [bt[i] + ct[i] for i in range(n2)]  # columns: B basis then C basis

    ker_sol = solve_affine_mod_lattice(m, TorsionPoint.zero(n2))
    if not ker_sol.nonempty or ker_sol.component_count != ker_mu_order:
        raise CertificateError("kernel of the addition isogeny has wrong order")

    k_c = orthogonal_complement_rows(c)
    rank_b = b.rank

    def restrict_matrix(w):
        """Matrix of W on the C basis (C must be W-invariant)."""
        out = []
        for v in c.basis_rows():
            img = mat_vec([list(r) for r in w], v)
            coeffs = solve_rational(ct, img)
            if coeffs is None or any(x.denominator != 1 for x in coeffs):
                raise CertificateError("complement is not invariant")
            out.append([int(x) for x in coeffs])
        return mat_transpose(out)

    n_tilde = []
    n_c_gens = []
    for g in n_elements:
        a = list(g.translation.coords)
        splits = solve_affine_mod_lattice(m, g.translation)
        if not splits.nonempty:
            raise CertificateError("translation does not split along B x C")
        for rep in splits.representatives:
            beta = TorsionPoint.of(rep.coords[:rank_b])
            gamma = TorsionPoint.of(rep.coords[rank_b:])
            n_tilde.append((beta, gamma, g.matrix))
        # restriction to C: defined when the translation lies in the C-subtorus
        image = TorsionPoint.of(mat_vec(k_c, a)) if k_c else TorsionPoint.of([])
        if image.is_zero():
            w_c = restrict_matrix(g.matrix)
            gamma_sol = solve_affine_mod_lattice(ct, g.translation)
            if not gamma_sol.nonempty:
                raise CertificateError("translation claims C-membership but does not solve")
            gammas = [TorsionPoint.of(r.coords) for r in gamma_sol.representatives]
            # C saturated: the C-torus embeds, so the restriction is unique
            n_c_gens.append(LatticeElement.of(w_c, gammas[0]))

    if len(n_tilde) != len(n_elements) * ker_mu_order:
        raise CertificateError("N-tilde has wrong cardinality")
    _check_n_tilde_group(n_tilde, restrict_matrix)
    n_c = close_elements(n_c_gens) if n_c_gens else []
    if set(n_c) != set(n_c_gens):
        raise CertificateError("restrictions to C do not form a closed set")
    return n_tilde, n_c, ker_sol.representatives


def _check_n_tilde_group(n_tilde, restrict_matrix):
    """The set of pairs t_beta x (t_gamma . W|_C) must be closed under
    composition; this is a strong self-test of the splitting."""
    entries = set()
    table = []
    for beta, gamma, w in n_tilde:
        w_c = tuple(tuple(r) for r in restrict_matrix(w))
        entries.add((beta, gamma, w_c))
        table.append((beta, gamma, w, w_c))
    for b1, g1, w1, wc1 in table:
        for b2, g2, w2, wc2 in table:
            beta = b1 + b2
            gamma = g1 + g2.apply_matrix([list(r) for r in wc1])
            wc = tuple(tuple(r) for r in mat_mul([list(r) for r in wc1],
                                                 [list(r) for r in wc2]))
            if (beta, gamma, wc) not in entries:
                raise CertificateError("N-tilde is not closed under composition")


# ---------------------------------------------------------------------------
# the decomposition algorithm

def _compose_embedding(outer, local_basis):
    """Express local basis vectors (rows) through an outer embedding."""
    return tuple(tuple(mat_vec(mat_transpose([list(v) for v in outer]), row))
                 for row in local_basis)


def _decompose_level(elements, embedding, ambient_rank, seed_form, factors, stages):
    n2 = len(embedding)
    n = n2 // 2
    current_lattice = Lattice.from_vectors(ambient_rank, [list(v) for v in embedding]) \
        if n2 else Lattice.zero(ambient_rank)

    n_sub = lattice_ramification_subgroup(elements)
    n_nontrivial = [e for e in n_sub if not e.is_identity()]
    check_normal(elements, n_sub)
    qout = lattice_quasietale_outside(elements, n_sub)
    if not qout:
        raise CertificateError("quotient by the ramification subgroup is not quasietale")

    if not n_nontrivial:
        # quasietale case: the whole stage variety is abelian
        if n2:
            factors.append(current_lattice)
        fano = SublatticeAction((), (), ambient_rank)
        return fano

    b = lattice_invariant_fixed_torus(n_sub)
    if b.rank == 0:
        # Q-Fano remainder: quotient of the current lattice by N
        kappa = lattice_kappa(n_sub)
        if kappa != n:
            raise CertificateError("final part fails the Q-Fano kappa certificate")
        stages.append(StageCertificate(len(n_sub), 1, qout, True, None))
        return SublatticeAction(tuple(n_sub), embedding, ambient_rank)

    holonomies = []
    seen = set()
    for e in n_sub:
        if e.matrix not in seen:
            seen.add(e.matrix)
            holonomies.append(e.matrix)
    c, ker_mu = lattice_poincare_complement(b, holonomies, seed_form)
    n_tilde, n_c, _ = split_action(n_sub, b, c, ker_mu)

    factors.append(Lattice.from_vectors(
        ambient_rank, [list(v) for v in _compose_embedding(embedding, b.basis_rows())]))
    stages.append(StageCertificate(len(n_sub), ker_mu, qout, None, len(n_tilde)))

    # next stage: C in its own coordinates, with the form restricted to C
    ct = c.basis_rows()
    next_embedding = _compose_embedding(embedding, ct)
    next_form = mat_mul(ct, mat_mul(seed_form, mat_transpose(ct)))
    next_elements = close_elements(n_c) if n_c else \
        [LatticeElement.of(identity_matrix(c.rank))]
    return _decompose_level(tuple(next_elements), next_embedding, ambient_rank,
                            next_form, factors, stages)


def decompose_lattice_action(elements, ambient_rank, seed_form) -> DecompositionResult:
    factors = []
    stages = []
    embedding = tuple(tuple(r) for r in identity_matrix(ambient_rank))
    fano = _decompose_level(tuple(elements), embedding, ambient_rank, seed_form,
                            factors, stages)
    total = sum(lat.rank for lat in factors) // 2
    return DecompositionResult(tuple(factors), total, fano, tuple(stages))


def group_to_lattice_elements(group):
    return [LatticeElement.of(rational_rep(g.holonomy), g.translation)
            for g in group.elements]


def decompose(group) -> DecompositionResult:
    """Build the quasietale cover (abelian factor) x (Q-Fano part) for the
    quotient of the modeled variety by the given closed group."""
    elements = group_to_lattice_elements(group)
    seed = standard_symplectic_form(group.variety)
    return decompose_lattice_action(elements, group.variety.ambient_rank, seed)


def decompose_fano_part(fano: SublatticeAction) -> DecompositionResult:
    """Re-run the decomposition on a Q-Fano stage (idempotence check)."""
    if fano.rank == 0:
        return DecompositionResult((), 0, fano, ())
    seed = _restricted_seed(fano)
    return decompose_lattice_action(list(fano.elements), fano.rank, seed)


def _restricted_seed(fano: SublatticeAction):
    base = [[0] * fano.ambient_rank for _ in range(fano.ambient_rank)]
    for j in range(fano.ambient_rank // 2):
        base[2 * j][2 * j + 1] = 1
        base[2 * j + 1][2 * j] = -1
    emb = [list(v) for v in fano.embedding]
    return mat_mul(emb, mat_mul(base, mat_transpose(emb)))
