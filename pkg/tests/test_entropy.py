import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quncert.entropy import (
    EntropyValue,
    classical_hmin_hmax,
    cond_vn_cq,
    differential_entropy,
    max_relative_entropy,
    relative_entropy,
    shannon,
    von_neumann,
)
from quncert.qstate import CQState

from oracles import eig_entropy_bits, gaussian_h_bits, random_cq


def random_density(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.real(np.trace(m))


class TestEntropyValue:
    def test_base_conversion_round_trip(self):
        e = EntropyValue(1.0, "bits")
        assert math.isclose(e.nats, math.log(2.0))
        assert math.isclose(e.in_base("nats").in_base("bits").value, 1.0)

    def test_infinite_serialization(self):
        assert EntropyValue(math.inf, "bits").to_json()["value"] == "inf"

    def test_rejects_unknown_base(self):
        with pytest.raises(ValueError):
            EntropyValue(1.0, "bits").in_base("trits")


class TestVonNeumann:
    def test_pure_state_zero(self):
        assert math.isclose(von_neumann(np.diag([1.0, 0.0])).value, 0.0,
                            abs_tol=1e-12)

    def test_maximally_mixed(self):
        # H(I/d) = log2 d
        assert math.isclose(von_neumann(np.eye(4) / 4.0).value, 2.0, abs_tol=1e-12)

    def test_matches_spectral_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            rho = random_density(5, rng)
            assert math.isclose(von_neumann(rho).value, eig_entropy_bits(rho),
                                abs_tol=1e-10)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            von_neumann(np.eye(2))

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_bounds(self, seed):
        rho = random_density(4, np.random.default_rng(seed))
        h = von_neumann(rho).value
        assert -1e-10 <= h <= 2.0 + 1e-10


class TestRelativeEntropy:
    def test_identical_states_zero(self):
        rng = np.random.default_rng(1)
        rho = random_density(3, rng)
        assert math.isclose(relative_entropy(rho, rho).value, 0.0, abs_tol=1e-9)

    def test_two_qubit_value(self):
        # D(|0><0| || diag(3/4, 1/4)) = -log2(3/4)
        rho = np.diag([1.0, 0.0])
        sig = np.diag([0.75, 0.25])
        assert math.isclose(relative_entropy(rho, sig).value, -math.log2(0.75),
                            abs_tol=1e-12)

    def test_support_violation_infinite(self):
        rho = np.eye(2) / 2.0
        sig = np.diag([1.0, 0.0])
        assert math.isinf(relative_entropy(rho, sig).value)

    def test_nonnegative_on_states(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            rho, sig = random_density(3, rng), random_density(3, rng)
            assert relative_entropy(rho, sig).value >= -1e-9


class TestMaxRelativeEntropy:
    def test_commuting_case(self):
        # D_max(diag(p) || diag(q)) = log2 max p_i/q_i
        rho = np.diag([0.8, 0.2])
        sig = np.diag([0.5, 0.5])
        assert math.isclose(max_relative_entropy(rho, sig).value,
                            math.log2(1.6), abs_tol=1e-10)

    def test_upper_bounds_relative_entropy(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            rho, sig = random_density(4, rng), random_density(4, rng)
            assert (max_relative_entropy(rho, sig).value
                    >= relative_entropy(rho, sig).value - 1e-8)

    def test_operator_inequality_holds(self):
        # 2^Dmax sigma - rho must be PSD (definition as smallest such power)
        rng = np.random.default_rng(4)
        rho, sig = random_density(3, rng), random_density(3, rng)
        lam = 2.0 ** max_relative_entropy(rho, sig).value
        vals = np.linalg.eigvalsh(lam * sig - rho)
        assert vals.min() >= -1e-8


class TestCondVNcq:
    def test_orthogonal_memory_gives_zero(self):
        cq = CQState((("0", 0.5 * np.diag([1.0, 0.0])),
                      ("1", 0.5 * np.diag([0.0, 1.0]))))
        assert math.isclose(cond_vn_cq(cq).value, 0.0, abs_tol=1e-10)

    def test_trivial_memory_gives_shannon(self):
        p = np.array([0.2, 0.5, 0.3])
        cq = CQState(tuple((str(i), p[i] * np.eye(1)) for i in range(3)))
        assert math.isclose(cond_vn_cq(cq).value, shannon(p).value, abs_tol=1e-10)

    def test_matches_block_diagonal_difference(self):
        # H(X|B) = H(XB) - H(B) on the classical-quantum embedding
        rng = np.random.default_rng(5)
        cq = random_cq(rng, 3, 3)
        hxb = eig_entropy_bits(cq.block_diagonal())
        hb = eig_entropy_bits(cq.marginal())
        assert math.isclose(cond_vn_cq(cq).value, hxb - hb, abs_tol=1e-8)

    def test_nonnegative_for_cq(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            cq = random_cq(rng, 2, 3)
            assert cond_vn_cq(cq).value >= -1e-9


class TestClassicalAndDifferential:
    def test_shannon_uniform(self):
        assert math.isclose(shannon(np.ones(8) / 8.0).value, 3.0, abs_tol=1e-12)

    def test_differential_entropy_gaussian(self):
        from quncert.discretize import gaussian_wavefunction

        psi = gaussian_wavefunction(sigma=1.3)
        h = differential_entropy(psi.density(), psi.dq)
        assert math.isclose(h.value, gaussian_h_bits(1.3), abs_tol=1e-9)

    def test_hmin_hmax_gaussian(self):
        from quncert.discretize import gaussian_wavefunction
        from oracles import gaussian_hmax_bits, gaussian_hmin_bits

        psi = gaussian_wavefunction(sigma=0.7)
        hmin, hmax = classical_hmin_hmax(psi.density(), psi.dq)
        assert math.isclose(hmin.value, gaussian_hmin_bits(0.7), abs_tol=1e-6)
        assert math.isclose(hmax.value, gaussian_hmax_bits(0.7), abs_tol=1e-6)

    def test_hmin_le_h_le_hmax(self):
        from quncert.discretize import gaussian_wavefunction

        psi = gaussian_wavefunction(sigma=2.0)
        hmin, hmax = classical_hmin_hmax(psi.density(), psi.dq)
        h = differential_entropy(psi.density(), psi.dq)
        assert hmin.value <= h.value + 1e-9 <= hmax.value + 2e-9

    def test_rejects_unnormalized_density(self):
        with pytest.raises(ValueError):
            differential_entropy(np.ones(10), 1.0)
