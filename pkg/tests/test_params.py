import dataclasses
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from socbloch import (
    PhysicalParams,
    SingularCoupling,
    UnphysicalPopulation,
    chemical_potential,
    critical_depth,
    derive_conditions,
    effective_soc_and_mu,
    max_soc_strength,
    required_drive_ratio,
    validate_regime,
)
from socbloch.validation import random_valid_params

from conftest import matched


class TestConstruction:
    def test_rejects_negative_lattice_depth(self):
        with pytest.raises(ValueError):
            PhysicalParams(gamma=0, Gamma=0, g=0.5, g12=0.2, V0=-1, Nt=5, omega=50, xi=0)

    @pytest.mark.parametrize("field,value", [("Nt", 0.0), ("Nt", -2.0), ("omega", 0.0),
                                             ("gamma", -0.1), ("Gamma", -0.1)])
    def test_rejects_bad_scalars(self, field, value):
        kw = dict(gamma=0.1, Gamma=0.1, g=0.5, g12=0.2, V0=1, Nt=5, omega=50, xi=1)
        kw[field] = value
        with pytest.raises(ValueError):
            PhysicalParams(**kw)

    def test_equal_interactions_with_soc_are_singular(self):
        with pytest.raises(SingularCoupling):
            PhysicalParams(gamma=0.3, Gamma=0.1, g=0.5, g12=0.5, V0=1, Nt=5, omega=50, xi=1)

    def test_equal_interactions_without_soc_are_fine(self):
        p = PhysicalParams(gamma=0.0, Gamma=0.1, g=0.5, g12=0.5, V0=1, Nt=5, omega=50, xi=1)
        assert p.g == p.g12


class TestDriveRatio:
    def test_reference_value(self, base_params):
        assert required_drive_ratio(base_params) == pytest.approx(
            0.31622776601683794, abs=1e-15
        )

    def test_zero_couplings_need_no_drive(self):
        p = PhysicalParams(gamma=0, Gamma=0, g=0.5, g12=0.2, V0=1, Nt=5, omega=50, xi=0)
        assert required_drive_ratio(p) == 0.0

    def test_pythagorean_degenerate_case(self):
        p = PhysicalParams(gamma=0, Gamma=1.0, g=0.5, g12=0.2, V0=1, Nt=5, omega=50, xi=0)
        assert required_drive_ratio(p) == 1.0

    def test_zero_iff_both_couplings_vanish(self, rng):
        for _ in range(200):
            gamma, Gamma = rng.uniform(0, 2, size=2)
            p = PhysicalParams(gamma=gamma, Gamma=Gamma, g=0.5, g12=0.2, V0=0,
                               Nt=5, omega=50, xi=0)
            ratio = required_drive_ratio(p)
            assert (ratio == 0.0) == (gamma == 0.0 and Gamma == 0.0)
            assert ratio >= 0.0


class TestChemicalPotential:
    def test_reference_value(self, base_params):
        assert chemical_potential(base_params) == pytest.approx(3.075, abs=1e-14)

    def test_only_kinetic_term_survives(self):
        p = PhysicalParams(gamma=0, Gamma=0, g=0, g12=0, V0=0, Nt=1e-12, omega=50, xi=0)
        assert chemical_potential(p) == pytest.approx(0.5, abs=1e-11)

    def test_interaction_dominated_value(self):
        p = matched(gamma=0.0, Gamma=0.1, g=0.6, g12=0.4, V0=0.0, Nt=10.0, omega=50.0)
        assert chemical_potential(p) == pytest.approx(5.5075, abs=1e-14)


class TestCriticalDepth:
    def test_reference_value(self, base_params):
        depth = critical_depth(base_params)
        assert depth.Vc == pytest.approx(3.620526680779795, abs=1e-14)
        assert abs(depth.Vc - 3.62053) < 1e-5
        assert depth.branch == 2

    def test_zero_soc_gives_interaction_bound(self):
        p = matched(gamma=0.0, Gamma=0.1, g=0.6, g12=0.2, V0=0.0, Nt=5.0, omega=50.0)
        assert critical_depth(p).Vc == pytest.approx((0.6 + 0.2) * 5.0, abs=1e-14)

    def test_reversed_interactions_use_other_branch(self):
        p = matched(gamma=0.3, Gamma=0.1, g=0.4, g12=0.6, V0=1.0, Nt=8.0, omega=50.0)
        depth = critical_depth(p)
        assert depth.branch == 1
        assert depth.Vc == pytest.approx(7.051316701949486, abs=1e-12)

    def test_unphysical_population_rejected(self):
        p = matched(gamma=1.5, Gamma=0.1, g=0.6, g12=0.2, V0=0.0, Nt=5.0, omega=50.0)
        with pytest.raises(UnphysicalPopulation):
            critical_depth(p)

    def test_branch_sum_is_twice_the_interaction_bound(self, rng):
        for _ in range(300):
            p = random_valid_params(rng)
            depth = critical_depth(p)
            total = 2.0 * abs(p.g + p.g12) * p.Nt
            assert depth.V1c + depth.V2c == pytest.approx(total, rel=1e-12)
            assert min(depth.V1c, depth.V2c) >= 0.0

    def test_strictly_decreasing_in_soc(self):
        p0 = matched(gamma=0.0, Gamma=0.1, g=0.6, g12=0.2, V0=0.0, Nt=5.0, omega=50.0)
        gmax = max_soc_strength(p0)
        gammas = np.linspace(0.0, 0.999 * gmax, 60)
        vcs = [
            critical_depth(matched(gamma=float(g), Gamma=0.1, g=0.6, g12=0.2,
                                   V0=0.0, Nt=5.0, omega=50.0)).Vc
            for g in gammas
        ]
        assert all(b < a for a, b in zip(vcs, vcs[1:]))


class TestMaxSoc:
    def test_full_transfer_value(self, base_params):
        gm = max_soc_strength(base_params)
        assert gm == pytest.approx(0.99750313, abs=1e-7)

    def test_against_root_finding(self, rng):
        for _ in range(50):
            p = random_valid_params(rng)
            c = 0.5 * p.Nt * abs(p.g - p.g12)
            f = lambda g: g * math.hypot(p.Gamma, g) - c
            expected = brentq(f, 0.0, c + p.Gamma + 1.0, xtol=1e-14)
            assert max_soc_strength(p) == pytest.approx(expected, abs=1e-12)


class TestEffectiveQuantities:
    def test_recombined_soc(self, base_params):
        (g1, g2), _ = effective_soc_and_mu(base_params)
        assert g1 == pytest.approx(0.016227766016837952, abs=1e-15)
        assert g2 == pytest.approx(0.6162277660168379, abs=1e-15)

    def test_recombined_mu(self, base_params):
        _, (m1, m2) = effective_soc_and_mu(base_params)
        assert m1 == pytest.approx(3.094868329805051, abs=1e-14)
        assert m2 == pytest.approx(2.905131670194949, abs=1e-14)

    def test_undriven_uncoupled_is_trivial(self):
        p = PhysicalParams(gamma=0, Gamma=0, g=0.5, g12=0.2, V0=1, Nt=5, omega=50, xi=0)
        (g1, g2), (m1, m2) = effective_soc_and_mu(p, mu=1.25)
        assert g1 == g2 == 0.0
        assert m1 == m2 == 1.25


class TestRegimeValidation:
    def test_reference_set_passes(self, base_params):
        report = validate_regime(base_params)
        assert report.ok
        assert not report.failures

    def test_too_deep_lattice_fails(self, base_params):
        p = dataclasses.replace(base_params, V0=4.0)
        report = validate_regime(p)
        assert not report.ok
        assert any(c.name == "lattice_depth" for c in report.failures)

    def test_missing_drive_fails_ratio(self, base_params):
        p = dataclasses.replace(base_params, xi=0.0)
        report = validate_regime(p)
        assert any(c.name == "drive_ratio" for c in report.failures)

    def test_excess_soc_fails_population(self):
        p = matched(gamma=1.2, Gamma=0.1, g=0.6, g12=0.2, V0=0.5, Nt=5.0, omega=50.0)
        report = validate_regime(p)
        assert any(c.name == "population" for c in report.failures)

    def test_low_frequency_is_warning_not_failure(self, base_params):
        p = dataclasses.replace(base_params, omega=5.0,
                                xi=5.0 * required_drive_ratio(base_params))
        report = validate_regime(p)
        assert report.ok
        assert any(c.name == "high_frequency" for c in report.warnings)

    def test_boundary_depth_still_valid(self, boundary_params):
        assert validate_regime(boundary_params).ok


def test_derive_conditions_bundle(base_params):
    d = derive_conditions(base_params)
    assert d.mu == pytest.approx(3.075)
    assert d.Vc_branch == 2
    assert d.regime_ok
    assert d.gamma_max == pytest.approx(0.9975031327880007, abs=1e-12)
