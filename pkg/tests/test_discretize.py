import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quncert.discretize import (
    ConvergenceTable,
    Partition,
    convergence_ladder,
    discretize_position,
    gaussian_wavefunction,
    momentum_transform,
    second_moment_finite,
)
from quncert.qstate import GridWaveFunction

from oracles import gaussian_h_bits, gaussian_hmax_bits, gaussian_hmin_bits


class TestPartition:
    def test_cell_index_half_open(self):
        part = Partition.centered(1.0, -4.0, 4.0)
        # cells are (offset + k, offset + k + 1]; the center cell holds 0
        assert part.cell_index(0.0) == part.cell_index(0.4)
        assert part.cell_index(0.5) == part.cell_index(0.0)
        assert part.cell_index(0.5001) == part.cell_index(0.0) + 1
        assert part.cell_index(-0.5) == part.cell_index(0.0) - 1

    def test_centered_offset(self):
        part = Partition.centered(0.25, -2.0, 2.0)
        assert math.isclose(part.offset, -0.125)

    def test_refinement_merges_exactly(self):
        # halving alpha at the same offset nests cells pairwise
        coarse = Partition(1.0, 0.0, -4, 4)
        fine = Partition(0.5, 0.0, -8, 8)
        for q in np.linspace(-3.9, 3.9, 200):
            assert fine.cell_index(q) // 2 == coarse.cell_index(q)

    @given(st.floats(-50.0, 50.0), st.floats(0.01, 5.0))
    @settings(max_examples=100, deadline=None)
    def test_index_consistent_with_bounds(self, q, alpha):
        part = Partition(alpha, -alpha / 2.0, -1000, 1000)
        k = part.cell_index(q)
        lo = part.offset + k * alpha
        assert lo < q <= lo + alpha + 1e-9


class TestMomentumTransform:
    def test_unitary(self):
        psi = gaussian_wavefunction(sigma=1.0, n_points=1024)
        phi = momentum_transform(psi)
        assert math.isclose(phi.norm_sq(), 1.0, abs_tol=1e-10)

    def test_gaussian_width(self):
        # position variance s^2 maps to momentum variance 1/(4 s^2)
        psi = gaussian_wavefunction(sigma=1.5, n_points=4096)
        phi = momentum_transform(psi)
        var = float(np.sum(phi.grid ** 2 * phi.density()) * phi.dq)
        assert math.isclose(var, 1.0 / 9.0, rel_tol=1e-8)

    def test_translation_gets_phase_only(self):
        # shifting the state in position leaves |phi(p)|^2 unchanged
        psi0 = gaussian_wavefunction(sigma=1.0, center=0.0)
        psi1 = gaussian_wavefunction(sigma=1.0, center=0.75)
        d0 = momentum_transform(psi0).density()
        d1 = momentum_transform(psi1).density()
        assert np.allclose(d0, d1, atol=1e-10)

    def test_requires_power_of_two(self):
        psi = GridWaveFunction(0.0, 0.1, np.ones(100, dtype=complex))
        with pytest.raises(ValueError):
            momentum_transform(psi)

    def test_parseval_per_memory_column(self):
        from quncert.gaussian import epr_grid_wavefunction

        psi = epr_grid_wavefunction(2.0, n_points=2048)
        phi = momentum_transform(psi)
        pos = np.sum(np.abs(psi.samples) ** 2, axis=0) * psi.dq
        mom = np.sum(np.abs(phi.samples) ** 2, axis=0) * phi.dq
        assert np.allclose(pos, mom, atol=1e-10)


class TestDiscretizePosition:
    def test_probabilities_sum_to_one(self):
        psi = gaussian_wavefunction(sigma=1.0)
        part = Partition.centered(0.5, psi.grid[0], psi.grid[-1])
        cq = discretize_position(psi, part)
        assert math.isclose(cq.probs.sum(), 1.0, abs_tol=1e-10)

    def test_gaussian_cell_probabilities(self):
        # cell masses of N(0,1) against the error function
        from scipy.stats import norm

        psi = gaussian_wavefunction(sigma=1.0, n_points=16384)
        part = Partition.centered(1.0, psi.grid[0], psi.grid[-1])
        cq = discretize_position(psi, part)
        probs = {lab: p for (lab, _), p in zip(cq.outcomes, cq.probs)}
        center = part.cell_index(0.0)
        expected = norm.cdf(0.5) - norm.cdf(-0.5)
        assert math.isclose(probs[str(center)], expected, abs_tol=1e-6)

    def test_rejects_cells_below_grid_resolution(self):
        psi = gaussian_wavefunction(sigma=1.0, n_points=256)
        part = Partition.centered(psi.dq, psi.grid[0], psi.grid[-1])
        with pytest.raises(ValueError):
            discretize_position(psi, part)

    def test_memory_blocks_psd_and_normalized(self):
        from quncert.gaussian import epr_grid_wavefunction
        from quncert.qstate import validate

        psi = epr_grid_wavefunction(1.5, n_points=2048)
        part = Partition.centered(1.0, psi.grid[0], psi.grid[-1])
        cq = discretize_position(psi, part)
        assert validate(cq)["pass"]


class TestConvergenceLadder:
    PSI = gaussian_wavefunction(sigma=1.0)

    @pytest.mark.parametrize("kind,limit", [
        ("vn", gaussian_h_bits(1.0)),
        ("min", gaussian_hmin_bits(1.0)),
        ("max", gaussian_hmax_bits(1.0)),
    ])
    def test_extrapolates_to_differential_value(self, kind, limit):
        tab = convergence_ladder(self.PSI, which="position", kind=kind, n_max=6)
        assert abs(tab.extrapolated - limit) < 1e-4

    def test_momentum_ladder(self):
        # momentum marginal of the sigma=1 Gaussian is N(0, 1/4)
        psi = gaussian_wavefunction(sigma=1.0, n_points=4096, width_sigmas=32)
        tab = convergence_ladder(psi, which="momentum", kind="vn", n_max=2,
                                 alpha0=1.0)
        assert abs(tab.values[-1] - gaussian_h_bits(0.5)) < 2e-2

    def test_regularized_values_decrease(self):
        tab = convergence_ladder(self.PSI, which="position", kind="max", n_max=6)
        assert tab.monotone
        assert all(np.diff(tab.values) <= 1e-9)

    def test_rungs_are_dyadic(self):
        tab = convergence_ladder(self.PSI, kind="vn", n_max=4, alpha0=2.0)
        assert np.allclose(tab.alphas, 2.0 * 0.5 ** np.arange(5))

    def test_rejects_too_fine(self):
        with pytest.raises(ValueError):
            convergence_ladder(self.PSI, kind="vn", n_max=12)

    def test_memory_ladder_matches_classical_on_product(self):
        # a product wavefunction with 2-dim memory must give the same
        # conditional ladder as the classical fast path (memory independent)
        psi = gaussian_wavefunction(sigma=1.0, n_points=2048)
        mem = np.array([0.8, 0.6], dtype=complex)
        samples = psi.samples[:, 0][:, None] * mem[None, :]
        psi2 = GridWaveFunction(psi.q0, psi.dq, samples)
        t1 = convergence_ladder(psi, kind="vn", n_max=3)
        t2 = convergence_ladder(psi2, kind="vn", n_max=3)
        assert np.allclose(t1.values, t2.values, atol=1e-8)


class TestSecondMoment:
    def test_gaussian_moment(self):
        psi = gaussian_wavefunction(sigma=1.0)
        finite, moment = second_moment_finite(psi.density(), psi.dq,
                                              grid=psi.grid)
        assert finite
        assert math.isclose(moment, 1.0, rel_tol=1e-8)
