"""Entropy functionals: von Neumann, Umegaki relative, max-relative,
conditional von Neumann for cq states, and classical discrete/differential
entropies.

All computation is done in nats; results carry an explicit base tag and are
reported in bits by default. Support conditions (whether supp rho lies inside
supp sigma) are decided at a relative eigenvalue threshold of 1e-10, giving
deterministic +inf behavior under round-off. 0*log(0) = 0 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import CQState, clipped_eigh, herm

SUPPORT_RTOL = 1e-10

__all__ = [
    "EntropyValue",
    "von_neumann",
    "relative_entropy",
    "max_relative_entropy",
    "cond_vn_cq",
    "shannon",
    "differential_entropy",
    "classical_hmin_hmax",
]


@dataclass(frozen=True)
class EntropyValue:
    value: float  # may be +/- inf
    base: str = "bits"  # "bits" or "nats"

    def in_base(self, base: str) -> "EntropyValue":
        if base == self.base:
            return self
        if base == "bits" and self.base == "nats":
            return EntropyValue(self.value / math.log(2), "bits")
        if base == "nats" and self.base == "bits":
            return EntropyValue(self.value * math.log(2), "nats")
        raise ValueError(f"unknown base {base!r}")

    @property
    def bits(self) -> float:
        return self.in_base("bits").value

    @property
    def nats(self) -> float:
        return self.in_base("nats").value

    def to_json(self) -> dict:
        v = self.value
        if math.isinf(v):
            v = "inf" if v > 0 else "-inf"
        return {"value": v, "base": self.base}


def _as_base(nats: float, base: str) -> EntropyValue:
    return EntropyValue(nats, "nats").in_base(base)


def _xlogx(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=float)
    mask = p > 0
    out[mask] = p[mask] * np.log(p[mask])
    return out


def von_neumann(rho: np.ndarray, base: str = "bits") -> EntropyValue:
    """H(rho) = -tr[rho log rho] for a normalized density matrix."""
    rho = np.asarray(rho, dtype=complex)
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-8:
        raise ValueError(f"state not normalized: trace = {tr}")
    vals, _ = clipped_eigh(rho)
    vals = np.clip(vals, 0.0, None)
    return _as_base(-float(_xlogx(vals).sum()), base)


def relative_entropy(rho: np.ndarray, sigma: np.ndarray, base: str = "bits") -> EntropyValue:
    """Umegaki relative entropy D(rho||sigma) = tr[rho log rho - rho log sigma].

    rho may be subnormalized. Returns +inf when supp(rho) is not contained in
    supp(sigma).
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError("dimension mismatch")
    svals, svecs = clipped_eigh(sigma)
    svals = np.clip(svals, 0.0, None)
    smax = svals.max()
    if smax <= 0.0:
        return _as_base(math.inf, base)
    on_support = svals > SUPPORT_RTOL * smax
    # weight of rho in the kernel of sigma
    kern = svecs[:, ~on_support]
    if kern.shape[1]:
        leak = float(np.real(np.trace(kern.conj().T @ rho @ kern)))
        if leak > SUPPORT_RTOL * max(1.0, float(np.real(np.trace(rho)))):
            return _as_base(math.inf, base)
    rvals, _ = clipped_eigh(rho)
    rvals = np.clip(rvals, 0.0, None)
    tr_rho_log_rho = float(_xlogx(rvals).sum())
    diag = np.real(np.einsum("ij,ji->i", svecs.conj().T @ rho, svecs))
    diag = np.clip(diag, 0.0, None)
    tr_rho_log_sigma = float(np.sum(diag[on_support] * np.log(svals[on_support])))
    return _as_base(tr_rho_log_rho - tr_rho_log_sigma, base)


def max_relative_entropy(rho: np.ndarray, sigma: np.ndarray, base: str = "bits") -> EntropyValue:
    """D_max(rho||sigma): smallest iota with rho <= 2^iota sigma.

    Evaluated as log of the largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2}
    restricted to supp(sigma); +inf on support violation.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError("dimension mismatch")
    svals, svecs = clipped_eigh(sigma)
    svals = np.clip(svals, 0.0, None)
    smax = svals.max()
    if smax <= 0.0:
        return _as_base(math.inf, base)
    on_support = svals > SUPPORT_RTOL * smax
    kern = svecs[:, ~on_support]
    if kern.shape[1]:
        leak = float(np.real(np.trace(kern.conj().T @ rho @ kern)))
        if leak > SUPPORT_RTOL * max(1.0, float(np.real(np.trace(rho)))):
            return _as_base(math.inf, base)
    sup = svecs[:, on_support]
    inv_sqrt = sup * (1.0 / np.sqrt(svals[on_support]))
    core = inv_sqrt.conj().T @ rho @ inv_sqrt
    lam = float(np.linalg.eigvalsh(herm(core)).max())
    if lam <= 0.0:
        return _as_base(-math.inf, base)
    return _as_base(math.log(lam), base)


def cond_vn_cq(omega: CQState, base: str = "bits") -> EntropyValue:
    """Conditional von Neumann entropy H(X|B) = -sum_x D(omega_B^x || omega_B).

    Agrees with H(XB) - H(B) on the block-diagonal embedding.
    """
    omega_b = omega.marginal()
    total = 0.0
    for op in omega.ops:
        d = relative_entropy(op, omega_b, base="nats").value
        if math.isinf(d):
            return _as_base(-math.inf, base)
        total -= d
    return _as_base(total, base)


def shannon(p: np.ndarray, base: str = "bits") -> EntropyValue:
    """Discrete Shannon entropy of a probability vector."""
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()}")
    p = np.clip(p, 0.0, None)
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    return _as_base(-float(_xlogx(p).sum()), base)


def differential_entropy(density: np.ndarray, dq: float, base: str = "bits") -> EntropyValue:
    """h = -int P log P, midpoint rule on a uniform grid with spacing dq."""
    p = np.asarray(density, dtype=float)
    if p.min() < -1e-12:
        raise ValueError(f"negative density {p.min()}")
    p = np.clip(p, 0.0, None)
    if abs(p.sum() * dq - 1.0) > 1e-6:
        raise ValueError(f"density integrates to {p.sum() * dq}, not 1")
    return _as_base(-float(_xlogx(p).sum()) * dq, base)


def classical_hmin_hmax(density: np.ndarray, dq: float, base: str = "bits"):
    """Differential Renyi entropies of order infinity and 1/2.

    h_min = -log ||P||_inf, h_max = 2 log int sqrt(P); h_min <= h <= h_max.
    """
    p = np.asarray(density, dtype=float)
    p = np.clip(p, 0.0, None)
    if abs(p.sum() * dq - 1.0) > 1e-6:
        raise ValueError(f"density integrates to {p.sum() * dq}, not 1")
    h_min = -math.log(float(p.max()))
    h_max = 2.0 * math.log(float(np.sum(np.sqrt(p)) * dq))
    return _as_base(h_min, base), _as_base(h_max, base)
