"""Affine automorphisms g = t_a . phi, finite group closure, fixed loci,
translation normalization, ages, and the descending multiplication map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .cyclotomic import CycloField, eigen_multiplicity
from .errors import CertificateError, InputError
from .linalg import (
    Lattice,
    TorsionPoint,
    determinant,
    identity_matrix,
    mat_eq,
    mat_sub,
    mat_vec,
    rational_kernel_basis,
    solve_affine_mod_lattice,
)
from .variety import (
    AbelianVarietyModel,
    EndoBlockMatrix,
    SubtorusTranslate,
    analytic_rep,
    rational_rep,
)

DEFAULT_GROUP_CAP = 10000


@dataclass(frozen=True)
class AffineAutomorphism:
    """g = t_a . phi with finite-order holonomy phi and torsion translation a."""

    holonomy: EndoBlockMatrix
    translation: TorsionPoint

    @classmethod
    def of(cls, holonomy, translation=None):
        n2 = holonomy.variety.ambient_rank
        if translation is None:
            translation = TorsionPoint.zero(n2)
        if len(translation.coords) != n2:
            raise InputError("translation has wrong length", code="bad-translation")
        return cls(holonomy, translation)

    @property
    def variety(self):
        return self.holonomy.variety

    def is_identity(self):
        return self.holonomy.is_identity() and self.translation.is_zero()

    def compose(self, other):
        """(t_a . phi)(t_b . psi) = t_(a + phi b) . (phi psi)."""
        rho = rational_rep(self.holonomy)
        trans = self.translation + other.translation.apply_matrix(rho)
        return AffineAutomorphism(self.holonomy.compose(other.holonomy), trans)

    def apply(self, point: TorsionPoint) -> TorsionPoint:
        return point.apply_matrix(rational_rep(self.holonomy)) + self.translation

    def sort_key(self):
        return (self.holonomy.sort_key(), self.translation.sort_key())


@dataclass(frozen=True)
class FiniteGroupAction:
    variety: AbelianVarietyModel
    generators: tuple
    elements: tuple
    holonomy_group: tuple

    @property
    def order(self):
        return len(self.elements)

    def identity(self):
        return AffineAutomorphism.of(EndoBlockMatrix.identity(self.variety))

    def nontrivial_elements(self):
        return [g for g in self.elements if not g.is_identity()]


def close_group(gens, cap=DEFAULT_GROUP_CAP) -> FiniteGroupAction:
    """Breadth-first closure under composition (lexicographic tie-break per
    level); a finite closed set under composition containing the generators
    is automatically a group."""
    if not gens:
        raise InputError("no generators", code="no-generators")
    variety = gens[0].variety
    for g in gens:
        if g.variety != variety:
            raise InputError("generators on different varieties", code="mixed-varieties")
        if abs(determinant(rational_rep(g.holonomy))) != 1:
            raise InputError("holonomy is not an automorphism", code="not-automorphism")
    ident = AffineAutomorphism.of(EndoBlockMatrix.identity(variety))
    gens_sorted = sorted(set(gens), key=AffineAutomorphism.sort_key)
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
        frontier = sorted(new, key=AffineAutomorphism.sort_key)
        for c in frontier:
            seen.add(c)
            elements.append(c)
        if len(elements) > cap:
            raise InputError("group order exceeds cap", code="cap-exceeded")
    holonomies = []
    hol_seen = set()
    for g in elements:
        if g.holonomy not in hol_seen:
            hol_seen.add(g.holonomy)
            holonomies.append(g.holonomy)
    return FiniteGroupAction(variety, tuple(gens_sorted), tuple(elements), tuple(holonomies))


@dataclass(frozen=True)
class FixedLocus:
    empty: bool
    components: tuple  # SubtorusTranslate, sharing one lattice

    @property
    def dim(self):
        if self.empty:
            return None
        return self.components[0].dim


def fixed_locus(g: AffineAutomorphism) -> FixedLocus:
    """Fix(t_a . phi) = solutions of (I - rho(phi)) x == a on the torus."""
    rho = rational_rep(g.holonomy)
    m = mat_sub(identity_matrix(len(rho)), rho)
    sol = solve_affine_mod_lattice(m, g.translation)
    if not sol.nonempty:
        return FixedLocus(True, ())
    comps = tuple(SubtorusTranslate(sol.kernel, rep) for rep in sol.representatives)
    return FixedLocus(False, comps)


def fixed_dim(g: AffineAutomorphism):
    """Complex dimension of Fix(g), or None if empty."""
    return fixed_locus(g).dim


def pointwise_stabilizer(t: SubtorusTranslate, group: FiniteGroupAction):
    """Elements fixing the translate pointwise, and the ramification index e
    (= order of that subgroup)."""
    members = []
    for g in group.elements:
        rho = rational_rep(g.holonomy)
        m = mat_sub(identity_matrix(len(rho)), rho)
        if any(any(x != 0 for x in mat_vec(m, v)) for v in t.lattice.basis_rows()):
            continue
        image = TorsionPoint.of(mat_vec(m, list(t.translate.coords)))
        if image == g.translation:
            members.append(g)
    return members, len(members)


def normalize_translations(group: FiniteGroupAction):
    """The conjugating point p of the translation-normalization construction
    (p = sum of the canonical |G|-th divisions of the translations), and the
    conjugate group t_p^-1 G t_p."""
    n = group.order
    coords = [Fraction(0)] * group.variety.ambient_rank
    for g in group.elements:
        for i, c in enumerate(g.translation.coords):
            coords[i] += Fraction(c, n)
    p = TorsionPoint.of(coords)
    conj = []
    for g in group.elements:
        rho = rational_rep(g.holonomy)
        trans = g.translation + p.apply_matrix(rho) - p
        conj.append(AffineAutomorphism(g.holonomy, trans))
    new_gens = tuple(
        AffineAutomorphism(g.holonomy,
                           g.translation + p.apply_matrix(rational_rep(g.holonomy)) - p)
        for g in group.generators
    )
    conj_group = FiniteGroupAction(group.variety, new_gens, tuple(conj),
                                   group.holonomy_group)
    return p, conj_group


def holonomy_order(phi: EndoBlockMatrix, cap=DEFAULT_GROUP_CAP):
    ident = EndoBlockMatrix.identity(phi.variety)
    power = phi
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = power.compose(phi)
    raise InputError("holonomy order exceeds cap", code="cap-exceeded")


def group_exponent(group: FiniteGroupAction):
    e = 1
    for phi in group.holonomy_group:
        e = lcm(e, holonomy_order(phi))
    return e


def cyclo_field_for(group: FiniteGroupAction) -> CycloField:
    """Conductor m = lcm(12, exponent of the holonomy group)."""
    return CycloField(lcm(12, group_exponent(group)))


def age(g: AffineAutomorphism, field: CycloField) -> Fraction:
    """Sum of the r_j over the analytic eigenvalues e^(2 pi i r_j) of the
    holonomy, r_j in [0,1); 0 for identity holonomy."""
    phi = g.holonomy
    if phi.is_identity():
        return Fraction(0)
    order = holonomy_order(phi)
    if field.m % order != 0:
        raise InputError("field too small", code="field-too-small")
    mat = analytic_rep(phi, field)
    total = Fraction(0)
    for d in range(2, order + 1):
        if order % d != 0:
            continue
        for k in range(1, d):
            if gcd(k, d) != 1:
                continue
            zeta = field.root_of_unity(d, k)
            mult = eigen_multiplicity(mat, zeta)
            if mult:
                total += Fraction(k, d) * mult
    return total


def descend_multiplication(group: FiniteGroupAction):
    """Smallest m = 1 + lcm of translation orders; [m] then commutes exactly
    with every group element and so descends to the quotient."""
    l = 1
    for g in group.elements:
        l = lcm(l, g.translation.order)
    m = 1 + l
    for g in group.elements:
        # [m](rho x + a) = rho (m x) + a on the torus iff (m-1) a == 0
        if not g.translation.scaled(m - 1).is_zero():
            raise CertificateError("multiplication map does not commute")
    return m


def holonomy_fixed_space_dim(group: FiniteGroupAction):
    """dim_Q of the common kernel of {I - rho(phi)} over the holonomy group."""
    n2 = group.variety.ambient_rank
    stacked = []
    for phi in group.holonomy_group:
        rho = rational_rep(phi)
        stacked.extend(mat_sub(identity_matrix(n2), rho))
    if not stacked:
        return n2
    return len(rational_kernel_basis(stacked, n2))
