"""Oracles for transfer through a center-localized barrier.

The couplings are R = J_x + eps * exp(-beta * J_z^2) in the site basis of the
|j, m> -> a_{j-m+1}^dag mapping, j = (N-1)/2.  Transfer time is t = pi (a
rotation by pi about x maps m to -m, i.e. site 1 to site N).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError
from .model import build_jx, jz_values

QUADRATURE_TOL = 1e-10
_GL_ORDER = 16
_MAX_PANELS = 1024


@dataclass(frozen=True)
class TransferReport:
    n_sites: int
    eps: float
    beta: float
    j: float
    exact_row: np.ndarray
    first_order_numeric: np.ndarray
    closed_form: np.ndarray


def coupling_with_center_gaussian(n: int, eps: float, beta: float) -> np.ndarray:
    """Site-basis matrix J_x + eps exp(-beta J_z^2)."""
    m = jz_values(n)
    return build_jx(n).entries + np.diag(eps * np.exp(-beta * m**2))


def exact_transfer(n: int, eps: float, beta: float) -> np.ndarray:
    """Row 1 of exp(-i pi R), spectral method."""
    r = coupling_with_center_gaussian(n, eps, beta)
    w, v = np.linalg.eigh(r)
    a = (v * np.exp(-1j * math.pi * w)) @ v.conj().T
    return a[0].copy()


def first_order_numeric(n: int, beta: float, tol: float = QUADRATURE_TOL) -> np.ndarray:
    """First-order barrier correction per unit eps.

    Computes -i * integral_0^pi exp(-i(pi-t)Jx) D exp(-i t Jx) e_1 dt with
    D = diag(exp(-beta m^2)) by composite Gauss-Legendre quadrature, doubling
    the panel count until successive results agree within `tol`.
    """
    jx = build_jx(n).entries.real
    w, v = np.linalg.eigh(jx)
    diag = np.exp(-beta * jz_values(n) ** 2)
    e1 = np.zeros(n)
    e1[0] = 1.0
    vt_e1 = v.T @ e1

    def integrand(t):
        inner = v @ (np.exp(-1j * w * t) * vt_e1)
        outer = v @ (np.exp(-1j * w * (math.pi - t)) * (v.T @ (diag * inner)))
        return outer

    nodes, weights = np.polynomial.legendre.leggauss(_GL_ORDER)
    prev = None
    panels = 1
    while panels <= _MAX_PANELS:
        total = np.zeros(n, dtype=complex)
        width = math.pi / panels
        for p in range(panels):
            mid = (p + 0.5) * width
            for x, wt in zip(nodes, weights):
                total += wt * integrand(mid + 0.5 * width * x)
        total *= 0.5 * width
        if prev is not None and np.linalg.norm(total - prev) < tol:
            return -1j * total
        prev = total
        panels *= 2
    raise ConvergenceError(
        f"quadrature did not stabilize within {tol} after {_MAX_PANELS} panels"
    )


def closed_form_series(n: int, beta: float) -> np.ndarray:
    """Asymptotic series for the correction per unit eps.

    Coefficient on a_{k+1}^dag is
    -i sqrt(C(2j,k)) Gamma((2j-k)/2 + 1/2)^2 / Gamma((2j-k)/2 + 1) *
    beta^{(2j-k)/2}; the k = 2j term is -i*pi exactly.  Valid qualitatively
    for beta << j/2.
    """
    j2 = n - 1  # 2j
    out = np.zeros(n, dtype=complex)
    for k in range(j2 + 1):
        half = (j2 - k) / 2.0
        logc = 0.5 * (gammaln(j2 + 1) - gammaln(k + 1) - gammaln(j2 - k + 1))
        logg = 2.0 * gammaln(half + 0.5) - gammaln(half + 1.0)
        if beta == 0.0:
            mag = math.exp(logc + logg) if half == 0.0 else 0.0
        else:
            mag = math.exp(logc + logg + half * math.log(beta))
        out[k] = -1j * mag
    return out


def transfer_report(n: int, eps: float, beta: float) -> TransferReport:
    return TransferReport(
        n_sites=n,
        eps=eps,
        beta=beta,
        j=(n - 1) / 2.0,
        exact_row=exact_transfer(n, eps, beta),
        first_order_numeric=first_order_numeric(n, beta),
        closed_form=closed_form_series(n, beta),
    )
