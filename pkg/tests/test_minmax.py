import math

import numpy as np
import pytest

from quncert.minmax import (
    cond_min_entropy_value,
    decoupling_fidelity,
    fdec_direct,
    guessing_probability,
    h_max_cq,
    h_min_cq,
    helstrom_value,
)
from quncert.qstate import CQState
from quncert.verify import _trial_rng, random_density

from oracles import (
    fdec_bloch_grid,
    helstrom_textbook,
    pguess_qubit_projective_grid,
    random_cq,
)

BB84 = CQState((("0", 0.5 * np.diag([1.0, 0.0])),
                ("1", 0.5 * np.ones((2, 2)) / 2.0)))


class TestHelstrom:
    def test_bb84_closed_form(self):
        # 1/2 + sqrt(2)/4 for the |0> vs |+> pair
        val = helstrom_value(BB84.outcomes[0][1], BB84.outcomes[1][1])
        assert math.isclose(val, 0.5 + math.sqrt(2.0) / 4.0, abs_tol=1e-12)

    def test_orthogonal_states_perfect(self):
        val = helstrom_value(0.5 * np.diag([1.0, 0.0]), 0.5 * np.diag([0.0, 1.0]))
        assert math.isclose(val, 1.0, abs_tol=1e-12)

    def test_identical_states_random_guess(self):
        rho = np.eye(2) / 2.0
        assert math.isclose(helstrom_value(0.5 * rho, 0.5 * rho), 0.5,
                            abs_tol=1e-12)

    def test_matches_textbook_trace_norm(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = rng.dirichlet([1.0, 1.0])
            om0 = p[0] * random_density(4, rng)
            om1 = p[1] * random_density(4, rng)
            assert math.isclose(helstrom_value(om0, om1),
                                helstrom_textbook(om0, om1), abs_tol=1e-10)

    def test_matches_projective_angle_grid(self):
        # independent brute force over qubit projective measurements
        rng = np.random.default_rng(12)
        cq = random_cq(rng, 2, 2)
        grid = pguess_qubit_projective_grid(cq, n_theta=600, n_phi=600)
        exact = helstrom_value(cq.outcomes[0][1], cq.outcomes[1][1])
        assert abs(exact - grid) < 5e-5
        assert grid <= exact + 1e-12  # grid is a feasible-point lower bound


class TestGuessingProbability:
    def test_binary_auto_equals_helstrom(self):
        res = guessing_probability(BB84)
        assert math.isclose(res.value, 0.5 + math.sqrt(2.0) / 4.0, abs_tol=1e-9)
        assert res.converged
        assert res.gap < 1e-7

    def test_admm_agrees_with_helstrom(self):
        for trial in range(10):
            rng = _trial_rng(21, trial)
            cq = random_cq(rng, 2, int(rng.integers(2, 7)))
            hel = helstrom_value(cq.outcomes[0][1], cq.outcomes[1][1])
            res = guessing_probability(cq, method="admm")
            assert res.converged
            assert abs(res.value - hel) < 1e-6
            assert res.gap < 1e-7

    def test_multi_outcome_certificates(self):
        for trial in range(8):
            rng = _trial_rng(22, trial)
            cq = random_cq(rng, int(rng.integers(3, 5)), 3)
            res = guessing_probability(cq)
            assert res.converged
            assert res.gap < 1e-7
            # dual certificate sigma >= omega_x, value = tr sigma
            sig = res.dual_certificate
            assert math.isclose(np.real(np.trace(sig)), res.value, rel_tol=1e-6)
            for _, om in cq.outcomes:
                assert np.linalg.eigvalsh(sig - om).min() >= -1e-7

    def test_primal_povm_feasible_and_tight(self):
        rng = _trial_rng(23, 0)
        cq = random_cq(rng, 3, 3)
        res = guessing_probability(cq)
        els = res.primal_povm.elements
        total = sum(els)
        assert np.allclose(total, np.eye(3), atol=1e-7)
        primal = sum(np.real(np.trace(e @ om))
                     for e, (_, om) in zip(els, cq.outcomes))
        assert abs(primal - res.value) < 1e-6

    def test_bounds(self):
        # max_x p_x <= P_guess <= 1
        for trial in range(10):
            rng = _trial_rng(24, trial)
            cq = random_cq(rng, 3, 2)
            res = guessing_probability(cq)
            assert cq.probs.max() - 1e-8 <= res.value <= 1.0 + 1e-8

    def test_trivial_memory_classical(self):
        p = np.array([0.6, 0.1, 0.3])
        cq = CQState(tuple((str(i), p[i] * np.eye(1)) for i in range(3)))
        assert math.isclose(guessing_probability(cq).value, 0.6, abs_tol=1e-9)

    def test_single_outcome(self):
        cq = CQState((("0", np.eye(2) / 2.0),))
        assert math.isclose(guessing_probability(cq).value, 1.0, abs_tol=1e-12)


class TestHmin:
    def test_bb84_value(self):
        assert math.isclose(h_min_cq(BB84).value,
                            -math.log2(0.5 + math.sqrt(2.0) / 4.0), abs_tol=1e-8)

    def test_classical_fast_path(self):
        p = np.array([0.7, 0.3])
        cq = CQState(tuple((str(i), p[i] * np.eye(1)) for i in range(2)))
        assert math.isclose(h_min_cq(cq).value, -math.log2(0.7), abs_tol=1e-10)


class TestCondMinEntropyGeneral:
    def test_product_state(self):
        # rho_AC = rho_A (x) sigma_C: min tr Y with Y >= ||rho_A|| sigma... the
        # optimal value is ||rho_A||_inf... for rho_A = I/2 it is 1/2
        rho = np.kron(np.eye(2) / 2.0, np.diag([0.6, 0.4]))
        val, gap, _ = cond_min_entropy_value(rho, 2, 2)
        assert math.isclose(val, 0.5, abs_tol=1e-7)
        assert gap < 1e-7

    def test_maximally_entangled(self):
        # for the 2-qubit Bell state min tr Y = 2^{-H_min(A|C)} = 2
        v = np.zeros(4)
        v[0] = v[3] = 1.0 / math.sqrt(2.0)
        rho = np.outer(v, v)
        val, gap, _ = cond_min_entropy_value(rho, 2, 2)
        assert math.isclose(val, 2.0, abs_tol=1e-6)
        assert gap < 1e-7

    def test_cq_route_consistency(self):
        # the dedicated cq solver and the general conditional solver agree
        for trial in range(5):
            rng = _trial_rng(31, trial)
            cq = random_cq(rng, 3, 2)
            pg = guessing_probability(cq).value
            val, gap, _ = cond_min_entropy_value(cq.block_diagonal(), 3, 2)
            assert abs(val - pg) < 3e-6
            assert gap < 1e-7


class TestHmax:
    def test_classical_closed_form(self):
        # H_max = 2 log2 sum_x sqrt(p_x) for trivial memory
        p = np.array([0.7, 0.3])
        cq = CQState(tuple((str(i), p[i] * np.eye(1)) for i in range(2)))
        assert math.isclose(h_max_cq(cq).value,
                            2.0 * math.log2(np.sqrt(p).sum()), abs_tol=1e-6)

    def test_orthogonal_memory_decoupled(self):
        # perfectly distinguishable memory states: F_dec = 1, H_max = 0
        cq = CQState((("0", 0.5 * np.diag([1.0, 0.0])),
                      ("1", 0.5 * np.diag([0.0, 1.0]))))
        assert abs(h_max_cq(cq).value) < 1e-6

    def test_duality_matches_bloch_grid(self):
        for trial in range(8):
            rng = _trial_rng(32, trial)
            cq = random_cq(rng, int(rng.integers(2, 4)), 2)
            dual = decoupling_fidelity(cq)
            grid = fdec_bloch_grid(cq)
            assert abs(dual - grid) < 1e-4

    def test_fdec_direct_lower_bounds_supremum(self):
        rng = _trial_rng(33, 0)
        cq = random_cq(rng, 3, 2)
        sup = decoupling_fidelity(cq)
        for _ in range(10):
            sig = random_density(2, rng)
            assert fdec_direct(cq, sig) <= sup + 1e-6

    def test_hmin_le_hmax(self):
        for trial in range(5):
            rng = _trial_rng(34, trial)
            cq = random_cq(rng, 2, 3)
            assert h_min_cq(cq).value <= h_max_cq(cq).value + 1e-6
