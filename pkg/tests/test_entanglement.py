import math

import numpy as np
import pytest

from bosefold.entanglement import (binomial_end_entanglement_asymptotic,
                                   binomial_end_entanglement_exact,
                                   collection_fraction, logneg_partial_transpose,
                                   logneg_pure, partial_transpose)
from bosefold.errors import ValidationError


def test_logneg_pure_product_state():
    assert logneg_pure([1.0]).value == 0.0


def test_logneg_pure_maximally_entangled():
    lams = np.full(4, 0.5)
    assert logneg_pure(lams).value == pytest.approx(2.0)


def test_logneg_pure_rejects_unnormalized():
    with pytest.raises(ValidationError):
        logneg_pure([1.0, 1.0])


def test_partial_transpose_involution():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    pt = partial_transpose(rho)
    assert np.max(np.abs(partial_transpose(pt) - rho)) < 1e-14
    with pytest.raises(ValidationError):
        partial_transpose(np.eye(5))


def test_logneg_pt_zero_for_product():
    d = 3
    p = np.diag([0.5, 0.3, 0.2])
    q = np.diag([0.6, 0.4, 0.0])
    rho = np.kron(p, q).astype(complex)
    assert logneg_partial_transpose(rho).value == pytest.approx(0.0, abs=1e-12)


def test_logneg_pt_bell_pair():
    # (|01> + |10>)/sqrt(2) on qubit pair embedded in d=2
    psi = np.zeros(4)
    psi[1] = psi[2] = 1 / math.sqrt(2)
    rho = np.outer(psi, psi).astype(complex)
    assert logneg_partial_transpose(rho).value == pytest.approx(1.0)
    # matches the pure-state formula for its Schmidt vector
    assert logneg_pure([1 / math.sqrt(2)] * 2).value == pytest.approx(1.0)


def test_logneg_pt_input_validation():
    bad = np.eye(4, dtype=complex)
    bad[0, 1] = 1.0  # not Hermitian
    with pytest.raises(ValidationError):
        logneg_partial_transpose(bad)
    with pytest.raises(ValidationError):
        logneg_partial_transpose(np.eye(4, dtype=complex))  # trace 4


def test_binomial_exact_hand_value():
    # M=2: lambdas^2 = (1/4, 1/2, 1/4); E_N = 2 log2(1/2 + 1/sqrt(2) + ...)
    lams = np.sqrt(np.array([1, 2, 1]) / 4.0)
    expected = 2 * math.log2(lams.sum())
    assert binomial_end_entanglement_exact(2).value == pytest.approx(expected)
    with pytest.raises(ValidationError):
        binomial_end_entanglement_exact(0)


def test_binomial_asymptotic_convergence():
    devs = [abs(binomial_end_entanglement_exact(m).value
                - binomial_end_entanglement_asymptotic(m).value)
            for m in (4, 16, 64, 256)]
    assert all(d2 < d1 for d1, d2 in zip(devs, devs[1:]))
    assert devs[-1] < 0.05


def test_collection_fraction():
    assert collection_fraction([2.0, 0.0, 3.0], 5) == pytest.approx(1.0)
    assert collection_fraction([1.0, 2.0, 1.0], 4) == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        collection_fraction([1.0], 1)
    with pytest.raises(ValidationError):
        collection_fraction([1.0, 1.0], 0)
