import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

from knotqubit.errors import GridTooCoarseError, ValidationError
from knotqubit.potential import (
    DoubleWellModel,
    PotentialProfile,
    double_well_potential,
    field_device_potential,
    single_well_potential,
)
from knotqubit.spectrum import (
    BoundState,
    Grid,
    default_grid,
    hard_wall_residual,
    numeric_spectrum,
    single_well_residual,
    solve_hard_wall,
    solve_single_well,
)

import oracles

# lowest even root of the C = 5/8 well (brentq on tan form), frozen
X_STAR = 0.5370223659813864


def c_model(C, D=2.0):
    # C = kappa D / 4
    return DoubleWellModel.from_curvature(4.0 * C / D, D, 0.0)


class TestGrid:
    def test_basic(self):
        g = Grid(-1.0, 1.0, 21)
        assert g.spacing == pytest.approx(0.1)
        assert g.is_symmetric

    @pytest.mark.parametrize("args", [(-1.0, 1.0, 15), (1.0, 1.0, 20), (2.0, 1.0, 20)])
    def test_invalid(self, args):
        with pytest.raises(ValidationError):
            Grid(*args)


class TestSingleWell:
    def test_frozen_oracle(self):
        assert oracles.square_well_ground_x(0.625) == pytest.approx(X_STAR, rel=1e-13)

    def test_knot_defaults_one_even_state(self):
        states = solve_single_well(DoubleWellModel.knot(1.0))
        assert [s.parity for s in states] == ["even"]

    def test_knot_root(self):
        m = DoubleWellModel.knot(1.0)
        st0 = solve_single_well(m)[0]
        assert st0.k * m.D / 2 == pytest.approx(X_STAR, abs=1e-12)
        assert st0.k * m.rho0 == pytest.approx(0.2148, abs=1e-4)
        # the rounded value k1 ~ 1/(5 rho0) is within 8%
        assert st0.k * m.rho0 == pytest.approx(0.2, rel=0.08)

    def test_energy_over_u0(self):
        m = DoubleWellModel.knot(0.5)
        e = solve_single_well(m)[0].energy / m.U0
        assert e == pytest.approx(-(1 - (X_STAR / 0.625) ** 2), rel=1e-12)
        assert e == pytest.approx(-0.26, abs=0.01)

    def test_c4_count(self):
        # true count of the residual roots: two even and one odd state
        states = solve_single_well(c_model(4.0))
        assert [s.parity for s in states] == ["even", "odd", "even"]

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.05, 12.0))
    def test_invariants(self, C):
        m = c_model(C)
        states = solve_single_well(m, n_scan=2000)
        assert states and states[0].parity == "even"
        assert len(states) == math.ceil(2 * C / math.pi)
        for s in states:
            assert abs(single_well_residual(s, m)) < 1e-9
            assert s.k**2 + s.q**2 == pytest.approx(m.k0**2, rel=1e-10, abs=1e-10)
            assert s.energy == pytest.approx(-m.U0 * s.q**2 / m.k0**2, rel=1e-10, abs=1e-12)
            assert s.energy == pytest.approx(-(m.k0**2 - s.k**2), rel=1e-10, abs=1e-12)

    def test_numeric_agreement(self):
        m = DoubleWellModel.knot(0.5)
        exact = solve_single_well(m)[0].energy
        num = numeric_spectrum(single_well_potential(m), Grid(-40, 40, 4000), 1)[0]
        assert num.energy == pytest.approx(exact, abs=1e-3)
        assert num.parity == "even"


class TestHardWall:
    def test_needs_l(self):
        with pytest.raises(ValidationError):
            solve_hard_wall(DoubleWellModel.knot(1.0))

    def test_large_l_limit(self):
        m = DoubleWellModel.knot(1.0)
        k_free = solve_single_well(m)[0].k
        walled = solve_hard_wall(m.replace(l=50 * m.D))
        assert walled[0].parity == "even"
        assert walled[0].k == pytest.approx(k_free, abs=1e-6)

    def test_l5d_against_numeric(self):
        m = DoubleWellModel.knot(1.0, l=25.0)
        analytic = solve_hard_wall(m)
        pot = single_well_potential(m)
        grid = Grid.spanning(pot, 0.02)
        num = numeric_spectrum(pot, grid, len(analytic) + 1)
        assert len(analytic) >= 1
        for a, n in zip(analytic, num):
            assert n.energy == pytest.approx(a.energy, abs=1e-3)
        # nothing else lies below zero
        assert num[len(analytic)].energy > 0

    def test_residual_vanishes(self):
        m = DoubleWellModel.knot(1.0, l=25.0)
        for s in solve_hard_wall(m):
            assert abs(hard_wall_residual(s.k, m, s.branch)) < 1e-9

    def test_threshold_flag(self):
        # tune l so that the ground root sits at k = k0 (q -> 0)
        m = DoubleWellModel.knot(1.0)
        st0 = solve_hard_wall(m.replace(l=1e6))[0]
        assert not st0.threshold
        bs = BoundState(0.0, "even", k=m.k0, q=0.0, threshold=True)
        assert bs.to_dict()["threshold"] is True


class TestNumeric:
    def test_infinite_well(self):
        L = 3.0
        pot = PotentialProfile([0.0, L], [0.0], boundary="hard-wall")
        states = numeric_spectrum(pot, Grid(0.0, L, 2000), 3)
        for n, s in enumerate(states, start=1):
            assert s.energy == pytest.approx((n * math.pi / L) ** 2, rel=1e-3)

    def test_normalised(self):
        m = DoubleWellModel.knot(1.0, d=5.0)
        g = default_grid(m)
        for s in numeric_spectrum(double_well_potential(m), g, 3):
            assert trapezoid(s.psi**2, s.s) == pytest.approx(1.0, abs=1e-8)

    def test_parity_alternates(self):
        m = c_model(4.0)
        states = numeric_spectrum(single_well_potential(m), Grid.symmetric(8.0, 0.004), 4)
        assert [s.parity for s in states] == ["even", "odd", "even", "odd"]
        analytic = solve_single_well(m)
        for a, n in zip(analytic, states):
            assert n.energy == pytest.approx(a.energy, abs=1e-3)

    def test_no_parity_on_asymmetric_grid(self):
        m = DoubleWellModel.knot(1.0)
        states = numeric_spectrum(single_well_potential(m), Grid(-40, 41, 4000), 1)
        assert states[0].parity == "none"

    def test_refinement_decreases(self):
        # well edges on grid nodes: energies fall monotonically toward the root
        m = DoubleWellModel.knot(1.0)
        pot = single_well_potential(m)
        energies = [numeric_spectrum(pot, Grid.symmetric(60.0, h), 1)[0].energy for h in (0.1, 0.05, 0.025, 0.0125)]
        diffs = np.diff(energies)
        assert np.all(diffs < 0)
        # second order: each halving cuts the change about fourfold
        assert np.all(np.abs(diffs[1:]) / np.abs(diffs[:-1]) == pytest.approx(0.25, abs=0.03))
        assert energies[-1] == pytest.approx(solve_single_well(m)[0].energy, abs=1e-7)

    def test_refinement_misaligned_still_converges(self):
        m = DoubleWellModel.knot(1.0)
        pot = single_well_potential(m)
        exact = solve_single_well(m)[0].energy
        errs = [abs(numeric_spectrum(pot, Grid.symmetric(60.0, h), 1)[0].energy - exact) for h in (0.08, 0.02)]
        # cell averaging keeps the error small but not monotone in h
        assert errs[1] < errs[0] < 1e-6

    def test_too_coarse(self):
        m = DoubleWellModel.knot(1.0, d=0.5)
        with pytest.raises(GridTooCoarseError):
            numeric_spectrum(double_well_potential(m), Grid.symmetric(60.0, 0.1), 2)

    def test_hard_wall_grid_must_match(self):
        pot = PotentialProfile([0.0, 3.0], [0.0], boundary="hard-wall")
        with pytest.raises(ValidationError):
            numeric_spectrum(pot, Grid(0.0, 3.1, 200), 1)

    def test_grid_must_cover(self):
        m = DoubleWellModel.knot(1.0)
        with pytest.raises(ValidationError):
            numeric_spectrum(single_well_potential(m), Grid(-2.0, 40.0, 2000), 1)

    def test_margin_warning(self):
        m = DoubleWellModel.knot(1.0)
        with pytest.warns(RuntimeWarning):
            numeric_spectrum(single_well_potential(m), Grid(-10.0, 10.0, 1000), 1)

    def test_n_states_bounds(self):
        m = DoubleWellModel.knot(1.0)
        with pytest.raises(ValidationError):
            numeric_spectrum(single_well_potential(m), Grid(-40, 40, 4000), 0)

    def test_device_splitting_grows_with_field(self):
        m = DoubleWellModel.knot(1.0)
        splits = []
        for field in (0.0, 0.005, 0.01, 0.02, 0.04):
            pot = field_device_potential(m, field)
            a, b = numeric_spectrum(pot, Grid.spanning(pot, 0.01), 2)
            assert a.parity == "even" and b.parity == "odd"
            splits.append(b.energy - a.energy)
        assert np.all(np.diff(splits) > 0)

    def test_reflection_invariance(self):
        m = DoubleWellModel.knot(1.0, d=5.0)
        pot = double_well_potential(m)
        g = default_grid(m)
        e1 = [s.energy for s in numeric_spectrum(pot, g, 2)]
        e2 = [s.energy for s in numeric_spectrum(pot.mirrored(), g, 2)]
        np.testing.assert_allclose(e1, e2, rtol=0, atol=1e-10)


class TestDefaultGrid:
    def test_extent(self):
        m = DoubleWellModel.knot(1.0, d=5.0)
        g = default_grid(m)
        q1 = solve_single_well(m)[0].q
        assert g.s_max >= m.d / 2 + m.D + 30 / q1 - 1e-12
        assert g.is_symmetric

    def test_walled(self):
        m = DoubleWellModel.knot(1.0, d=5.0, l=20.0)
        pot = double_well_potential(m)
        g = default_grid(m)
        assert (g.s_min, g.s_max) == pot.domain
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            numeric_spectrum(pot, g, 2)
