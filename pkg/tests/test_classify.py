from fractions import Fraction

import pytest

from fqav.classify import (
    classification_report,
    irregularity,
    is_quasietale,
    kappa_anticanonical,
    ramification_data,
    reid_tai,
)


class TestQuasietale:
    def test_isolated_fixed_points_pass(self, rot4_square_group, kummer_group):
        assert is_quasietale(rot4_square_group)
        assert is_quasietale(kummer_group)

    def test_free_action_passes(self, bielliptic_group):
        assert is_quasietale(bielliptic_group)

    def test_divisorial_fixing_fails(self, sign_rot4_group, p1_group):
        assert not is_quasietale(sign_rot4_group)
        assert not is_quasietale(p1_group)


class TestRamification:
    def test_quasietale_has_no_components(self, kummer_group, bielliptic_group):
        for group in (kummer_group, bielliptic_group):
            data = ramification_data(group)
            assert data.components == ()
            assert data.orbits == ()

    def test_curve_times_torsion_components(self, sign_rot4_group):
        data = ramification_data(sign_rot4_group)
        assert len(data.components) == 4
        assert data.indices == (2, 2, 2, 2)
        assert data.orbits == ((0,), (1, 2), (3,))
        assert data.boundary_coeffs == (Fraction(1, 2),) * 3
        assert data.intersection_dim == 1

    def test_single_factor_branch_points(self, p1_group):
        data = ramification_data(p1_group)
        # branch points of E_i -> E_i/<i> = P^1
        assert all(c.dim == 0 for c in data.components)
        assert data.intersection_dim == 0
        assert set(data.indices) <= {2, 4}

    def test_orbit_sum_covers_components(self, sign_rot4_group, p1_group):
        for group in (sign_rot4_group, p1_group):
            data = ramification_data(group)
            flat = sorted(i for orbit in data.orbits for i in orbit)
            assert flat == list(range(len(data.components)))

    def test_indices_constant_on_orbits(self, sign_rot4_group, p1_group):
        for group in (sign_rot4_group, p1_group):
            data = ramification_data(group)
            for orbit in data.orbits:
                assert len({data.indices[i] for i in orbit}) == 1


class TestKappa:
    def test_values(self, rot4_square_group, sign_rot4_group, kummer_group, p1_group,
                    bielliptic_group):
        assert kappa_anticanonical(rot4_square_group) == (0, False)
        assert kappa_anticanonical(sign_rot4_group) == (1, False)
        assert kappa_anticanonical(kummer_group) == (0, False)
        assert kappa_anticanonical(p1_group) == (1, True)
        assert kappa_anticanonical(bielliptic_group) == (0, False)


class TestReidTai:
    def test_small_age_witness(self, rot4_square_group):
        holds, witness = reid_tai(rot4_square_group)
        assert not holds
        assert witness is not None
        from fqav.action import age, cyclo_field_for
        assert age(witness, cyclo_field_for(rot4_square_group)) < 1

    def test_kummer_holds(self, kummer_group):
        holds, witness = reid_tai(kummer_group)
        assert holds and witness is None

    def test_free_action_holds_vacuously(self, bielliptic_group):
        holds, witness = reid_tai(bielliptic_group)
        assert holds and witness is None


class TestIrregularity:
    def test_values(self, rot4_square_group, sign_rot4_group, kummer_group, bielliptic_group):
        assert irregularity(rot4_square_group) == 0
        assert irregularity(sign_rot4_group) == 0
        assert irregularity(kummer_group) == 0
        assert irregularity(bielliptic_group) == 1


class TestReports:
    def test_rot4_square(self, rot4_square_group):
        r = classification_report(rot4_square_group)
        assert r.n == 2 and r.group_order == 4
        assert r.quasietale and r.q_abelian
        assert r.kappa_anticanonical == 0 and not r.q_fano
        assert r.q_x == 0 and r.q_circle == 2
        assert not r.reid_tai_holds
        assert r.uniruled is True
        assert r.canonical is False and r.kappa_zero is False
        assert r.polarized_endo_m == 2

    def test_sign_rot4(self, sign_rot4_group):
        r = classification_report(sign_rot4_group)
        assert not r.quasietale and not r.q_abelian
        assert r.kappa_anticanonical == 1 and not r.q_fano
        assert r.q_x == 0 and r.q_circle == 1
        assert r.uniruled is True and r.canonical is None
        assert r.kappa_zero is False
        assert r.polarized_endo_m == 2

    def test_kummer(self, kummer_group):
        r = classification_report(kummer_group)
        assert r.quasietale and r.q_abelian
        assert r.reid_tai_holds
        assert r.uniruled is False
        assert r.canonical is True and r.kappa_zero is True
        assert r.q_x == 0 and r.q_circle == 2

    def test_p1(self, p1_group):
        r = classification_report(p1_group)
        assert not r.quasietale
        assert r.q_fano and r.fano_type
        assert r.kappa_anticanonical == 1
        assert r.q_circle == 0
        assert r.uniruled is True

    def test_bielliptic(self, bielliptic_group):
        r = classification_report(bielliptic_group)
        assert r.quasietale and r.q_abelian
        assert r.reid_tai_holds and r.kappa_zero is True
        assert r.q_x == 1 and r.q_circle == 2
        assert r.polarized_endo_m == 3
        assert r.notes == ()

    def test_cross_checks_always_pass_on_gallery(self, rot4_square_group, sign_rot4_group,
                                                 kummer_group, p1_group,
                                                 bielliptic_group):
        for group in (rot4_square_group, sign_rot4_group, kummer_group, p1_group,
                      bielliptic_group):
            r = classification_report(group)
            assert r.quasietale == (r.q_circle == r.n)
            assert r.q_fano == (r.q_circle == 0)
            assert r.kappa_anticanonical + r.q_circle >= r.n
