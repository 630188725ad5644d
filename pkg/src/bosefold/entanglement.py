"""Logarithmic negativity (base-2) and collection fractions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ValidationError


@dataclass(frozen=True)
class EntanglementResult:
    value: float  # bits
    method: str


def logneg_pure(lams) -> EntanglementResult:
    """E_N = 2 log2(sum lambda) for a normalized Schmidt vector."""
    lams = np.asarray(lams, dtype=float)
    total = float(np.sum(lams**2))
    if abs(total - 1.0) > 1e-8:
        raise ValidationError(f"Schmidt vector not normalized (sum sq = {total})")
    return EntanglementResult(value=2.0 * math.log2(float(np.sum(lams))),
                              method="pure_schmidt")


def partial_transpose(rho: np.ndarray, transpose_first: bool = True) -> np.ndarray:
    """Partial transpose of a d^2 x d^2 two-site density matrix."""
    dim = rho.shape[0]
    d = math.isqrt(dim)
    if d * d != dim:
        raise ValidationError(f"density matrix dimension {dim} is not a square")
    r4 = rho.reshape(d, d, d, d)
    if transpose_first:
        r4 = np.transpose(r4, (2, 1, 0, 3))
    else:
        r4 = np.transpose(r4, (0, 3, 2, 1))
    return r4.reshape(dim, dim)


def logneg_partial_transpose(rho: np.ndarray,
                             transpose_first: bool = True) -> EntanglementResult:
    """E_N = log2 of the trace norm of the partially transposed matrix."""
    if np.max(np.abs(rho - rho.conj().T)) > 1e-8:
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValidationError("density matrix trace differs from 1")
    s = np.linalg.svd(partial_transpose(rho, transpose_first), compute_uv=False)
    return EntanglementResult(value=math.log2(float(np.sum(s))),
                              method="partial_transpose")


def binomial_end_entanglement_exact(m: int) -> EntanglementResult:
    """E_N of the binomial Schmidt spectrum lambda_k = sqrt(C(M,k)/2^M)."""
    if m < 1:
        raise ValidationError("boson number must be >= 1")
    k = np.arange(m + 1, dtype=float)
    logc = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
    log_lam = 0.5 * (logc - m * math.log(2.0))
    peak = log_lam.max()
    total = peak + math.log(np.sum(np.exp(log_lam - peak)))
    return EntanglementResult(value=2.0 * total / math.log(2.0),
                              method="binomial_exact")


def binomial_end_entanglement_asymptotic(m: int) -> EntanglementResult:
    """Gaussian limit E_N = 0.5 log2(2 pi) + 0.5 log2(M)."""
    if m < 1:
        raise ValidationError("boson number must be >= 1")
    return EntanglementResult(
        value=0.5 * math.log2(2.0 * math.pi) + 0.5 * math.log2(m),
        method="binomial_asymptotic",
    )


def collection_fraction(occ, m: float) -> float:
    """(n_1 + n_N) / M for a per-site occupation vector."""
    occ = np.asarray(occ, dtype=float)
    if occ.shape[0] < 2:
        raise ValidationError("need at least two sites")
    if m <= 0:
        raise ValidationError("boson number must be positive")
    return float((occ[0] + occ[-1]) / m)
