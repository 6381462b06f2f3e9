"""Conditional min-entropy via the guessing-probability SDP and conditional
max-entropy via purification duality.

The guessing probability P_guess(X|B) = sup { sum_x tr[omega_B^x E_x] } over
POVMs equals, by strong duality, min { tr sigma : sigma >= omega_B^x for all
x }. Two outcomes use the Helstrom closed form directly (with the exact
optimal projective measurement and dual certificate); more outcomes are
solved by consensus ADMM on the dual with PSD-cone projections, followed by
pretty-good-measurement extraction and a fixed-point refinement of the primal
until the duality gap certifies the value.

The max-entropy H_max(X|B) = log F_dec(X|B) is computed through the duality
H_max(X|B) = -H_min(X|C), where C is the purifying system of the cq state;
H_min(X|C) for the (generally non-cq) marginal is the SDP
min { tr Y : 1_X (x) Y >= rho_XC }.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import EntropyValue, _as_base
from .qstate import CQState, POVM, clipped_eigh, herm, partial_trace, psd_funcm, purify_cq, trace_norm

DEFAULT_TOL = 1e-7
ADMM_MAX_ITER = 50_000
REFINE_MAX_ITER = 20_000

__all__ = [
    "SDPResult",
    "guessing_probability",
    "h_min_cq",
    "decoupling_fidelity",
    "h_max_cq",
    "cond_min_entropy_value",
]


@dataclass(frozen=True)
class SDPResult:
    value: float
    primal_povm: POVM
    dual_certificate: np.ndarray
    gap: float
    iterations: int
    converged: bool = True


def _psd_part(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(herm(mat))
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ vecs.conj().T


def _inv_sqrt_on_support(mat: np.ndarray, rtol: float = 1e-12):
    """Returns (M^{-1/2} on supp M, projector onto the kernel)."""
    vals, vecs = clipped_eigh(mat)
    vals = np.clip(vals, 0.0, None)
    top = vals.max() if vals.size else 0.0
    on = vals > rtol * max(top, 1.0)
    inv = np.zeros_like(vals)
    inv[on] = 1.0 / np.sqrt(vals[on])
    inv_sqrt = (vecs * inv) @ vecs.conj().T
    kern = (vecs * (~on).astype(float)) @ vecs.conj().T
    return inv_sqrt, kern


def _feasible_shift(ops, sigma: np.ndarray) -> float:
    """Smallest mu >= 0 with sigma + mu*I >= op for every op."""
    mu = 0.0
    for op in ops:
        top = float(np.linalg.eigvalsh(herm(op - sigma)).max())
        mu = max(mu, top)
    return mu


def _primal_value(ops, elements) -> float:
    return float(sum(np.real(np.trace(op @ e)) for op, e in zip(ops, elements)))


def _pgm(ops):
    """Pretty-good measurement of a family of subnormalized states."""
    m = len(ops)
    total = herm(sum(ops))
    inv_sqrt, kern = _inv_sqrt_on_support(total)
    return [herm(inv_sqrt @ op @ inv_sqrt) + kern / m for op in ops]


def _refine_step(ops, elements):
    """One fixed-point iteration on the PGM family; never decreases the value."""
    m = len(ops)
    g = herm(sum(op @ e @ op for op, e in zip(ops, elements)))
    inv_sqrt, kern = _inv_sqrt_on_support(g)
    out = [herm(inv_sqrt @ op @ e @ op @ inv_sqrt) for op, e in zip(ops, elements)]
    return [e + kern / m for e in out]


def helstrom_value(op0: np.ndarray, op1: np.ndarray) -> float:
    """Closed form P_guess = (tr op0 + tr op1 + ||op0 - op1||_1) / 2."""
    t0 = float(np.real(np.trace(op0)))
    t1 = float(np.real(np.trace(op1)))
    return 0.5 * (t0 + t1 + trace_norm(herm(op0 - op1)))


def _helstrom_solve(op0: np.ndarray, op1: np.ndarray) -> SDPResult:
    delta = herm(op0 - op1)
    vals, vecs = np.linalg.eigh(delta)
    pos = (vecs * (vals > 0).astype(float)) @ vecs.conj().T
    e0 = herm(pos)
    e1 = np.eye(op0.shape[0]) - e0
    povm = POVM((e0, e1))
    # dual optimum: sigma = op1 + (op0 - op1)_+
    sigma = herm(op1 + (vecs * np.clip(vals, 0.0, None)) @ vecs.conj().T)
    mu = _feasible_shift([op0, op1], sigma)
    sigma = sigma + mu * np.eye(op0.shape[0])
    primal = _primal_value([op0, op1], povm.elements)
    gap = float(np.real(np.trace(sigma))) - primal
    return SDPResult(primal, povm, sigma, gap, iterations=0)


def _admm_cq_dual(ops, tol: float, max_iter: int = ADMM_MAX_ITER):
    """Consensus ADMM for min { tr sigma : sigma >= op_x } with slack
    variables S_x = sigma - op_x projected onto the PSD cone.

    Returns (sigma, scaled multipliers, iterations).
    """
    m = len(ops)
    d = ops[0].shape[0]
    eye = np.eye(d)
    t = 1.0  # penalty, residual-balanced below
    sigma = herm(sum(ops))
    slack = [np.zeros((d, d), dtype=complex) for _ in range(m)]
    u = [np.zeros((d, d), dtype=complex) for _ in range(m)]
    it = 0
    for it in range(1, max_iter + 1):
        slack = [_psd_part(sigma - op - uu) for op, uu in zip(ops, u)]
        sigma_new = sum(s + op + uu for s, op, uu in zip(slack, ops, u)) / m - eye / (t * m)
        sigma_new = herm(sigma_new)
        r = math.sqrt(sum(float(np.linalg.norm(s - sigma_new + op) ** 2)
                          for s, op in zip(slack, ops)))
        s_res = t * math.sqrt(m) * float(np.linalg.norm(sigma_new - sigma))
        sigma = sigma_new
        u = [uu + s - sigma + op for uu, s, op in zip(u, slack, ops)]
        if r < tol * 0.1 and s_res < tol * 0.1:
            break
        if it % 50 == 0:
            if r > 10.0 * s_res:
                t *= 2.0
                u = [uu / 2.0 for uu in u]
            elif s_res > 10.0 * r:
                t /= 2.0
                u = [uu * 2.0 for uu in u]
    return sigma, [t * uu for uu in u], it


def _povm_from_multipliers(mults):
    m = len(mults)
    cand = [_psd_part(x) for x in mults]
    total = herm(sum(cand))
    inv_sqrt, kern = _inv_sqrt_on_support(total)
    return [herm(inv_sqrt @ e @ inv_sqrt) + kern / m for e in cand]


def guessing_probability(omega: CQState, tol: float = DEFAULT_TOL,
                         method: str = "auto") -> SDPResult:
    """Optimal probability of guessing the label from the quantum memory.

    method: "auto" uses the Helstrom closed form for two outcomes and ADMM
    otherwise; "admm" forces the iterative solver (used to cross-check the
    closed form); "helstrom" forces the closed form (two outcomes only).
    """
    if not 0.0 < tol <= 1e-3:
        raise ValueError("tol must be in (0, 1e-3]")
    ops = [herm(op) for op in omega.ops]
    m = len(ops)
    d = ops[0].shape[0]
    if m == 1:
        sigma = ops[0]
        povm = POVM((np.eye(d),))
        return SDPResult(float(np.real(np.trace(sigma))), povm, sigma, 0.0, 0)
    if method == "helstrom" or (method == "auto" and m == 2):
        if m != 2:
            raise ValueError("Helstrom closed form needs exactly two outcomes")
        return _helstrom_solve(ops[0], ops[1])

    sigma, mults, iters = _admm_cq_dual(ops, tol)
    mu = _feasible_shift(ops, sigma)
    cert = sigma + mu * np.eye(d)
    dual_val = float(np.real(np.trace(cert)))

    candidates = [_povm_from_multipliers(mults), _pgm(ops)]
    best = max(candidates, key=lambda els: _primal_value(ops, els))
    best_val = _primal_value(ops, best)
    gap = dual_val - best_val
    refine_it = 0
    while gap > tol and refine_it < REFINE_MAX_ITER:
        best = _refine_step(ops, best)
        refine_it += 1
        if refine_it % 10 == 0 or gap <= tol:
            best_val = _primal_value(ops, best)
            lam = herm(sum(op @ e for op, e in zip(ops, best)))
            cand_cert = lam + _feasible_shift(ops, lam) * np.eye(d)
            cand_val = float(np.real(np.trace(cand_cert)))
            if cand_val < dual_val:
                dual_val, cert = cand_val, cand_cert
            gap = dual_val - best_val
    best_val = _primal_value(ops, best)
    gap = dual_val - best_val
    return SDPResult(best_val, POVM(tuple(best)), cert, gap,
                     iters + refine_it, converged=gap <= tol)


def h_min_cq(omega: CQState, tol: float = DEFAULT_TOL, base: str = "bits") -> EntropyValue:
    """H_min(X|B) = -log P_guess(X|B)."""
    res = guessing_probability(omega, tol)
    return _as_base(-math.log(res.value), base)


def cond_min_entropy_value(rho: np.ndarray, dim_a: int, dim_c: int,
                           tol: float = DEFAULT_TOL, max_iter: int = ADMM_MAX_ITER):
    """2^{-H_min(A|C)} = min { tr Y : 1_A (x) Y >= rho_AC } for arbitrary rho.

    ADMM with slack S = 1(x)Y - rho on the PSD cone. Returns (value, gap,
    iterations); the value is the certified dual (upper) bound, the gap is
    measured against a feasibility-repaired primal candidate built from the
    running multiplier.
    """
    rho = herm(np.asarray(rho, dtype=complex))
    n = dim_a * dim_c
    if rho.shape[0] != n:
        raise ValueError("dims do not match rho")
    eye_a = np.eye(dim_a)
    eye_c = np.eye(dim_c)
    t = 1.0
    y = partial_trace(rho, [dim_a, dim_c], [1]) / 1.0
    y = herm(y)
    slack = np.zeros((n, n), dtype=complex)
    u = np.zeros((n, n), dtype=complex)
    it = 0
    for it in range(1, max_iter + 1):
        big_y = np.kron(eye_a, y)
        slack = _psd_part(big_y - rho - u)
        avg = partial_trace(slack + rho + u, [dim_a, dim_c], [1]) / dim_a
        y_new = herm(avg - eye_c / (t * dim_a))
        r = float(np.linalg.norm(slack - np.kron(eye_a, y_new) + rho))
        s_res = t * math.sqrt(dim_a) * float(np.linalg.norm(y_new - y))
        y = y_new
        u = u + slack - np.kron(eye_a, y) + rho
        if r < tol * 0.1 and s_res < tol * 0.1:
            break
        if it % 50 == 0:
            if r > 10.0 * s_res:
                t *= 2.0
                u = u / 2.0
            elif s_res > 10.0 * r:
                t /= 2.0
                u = u * 2.0
    # dual-feasible repair: shift Y until 1(x)Y - rho >= 0
    mu = float(np.linalg.eigvalsh(herm(rho - np.kron(eye_a, y))).max())
    y_cert = y + max(mu, 0.0) * eye_c
    dual_val = float(np.real(np.trace(y_cert)))
    # primal candidate from the scaled multiplier: X >= 0, tr_A X = 1_C
    x = _psd_part(t * u)
    w = partial_trace(x, [dim_a, dim_c], [1])
    w_inv_sqrt, kern = _inv_sqrt_on_support(w)
    x = np.kron(eye_a, w_inv_sqrt) @ x @ np.kron(eye_a, w_inv_sqrt)
    x = herm(x + np.kron(eye_a, kern) / dim_a)
    primal_val = float(np.real(np.trace(rho @ x)))
    gap = dual_val - primal_val
    return dual_val, gap, it


def decoupling_fidelity(omega: CQState, tol: float = DEFAULT_TOL) -> float:
    """F_dec(X|B) = sup_sigma (sum_x sqrt(F(omega_B^x, sigma)))^2.

    Computed through purification duality: F_dec = 2^{H_max(X|B)} =
    2^{-H_min(X|C)} = min { tr Y : 1_X (x) Y >= rho_XC } with C = X'B' the
    purifying factors.
    """
    m, d = len(omega.outcomes), omega.dim
    vec, dims = purify_cq(omega)
    rho = np.outer(vec, vec.conj())
    # factor order (X, X', B, B'); trace out B, keep X and C = X' (x) B'
    rho_xc = partial_trace(rho, list(dims), keep=[0, 1, 3])
    val, gap, _ = cond_min_entropy_value(rho_xc, dim_a=m, dim_c=m * d, tol=tol)
    return float(val)


def h_max_cq(omega: CQState, tol: float = DEFAULT_TOL, base: str = "bits") -> EntropyValue:
    """H_max(X|B) = log F_dec(X|B)."""
    return _as_base(math.log(decoupling_fidelity(omega, tol)), base)


def fdec_direct(omega: CQState, sigma: np.ndarray) -> float:
    """(sum_x sqrt(F(omega_x, sigma)))^2 for a fixed memory state sigma.

    Evaluation half of the decoupling-fidelity supremum; grid oracles in the
    test suite maximize this over sigma.
    """
    from .qstate import fidelity

    total = sum(math.sqrt(max(fidelity(op, sigma), 0.0)) for op in omega.ops)
    return float(total ** 2)
