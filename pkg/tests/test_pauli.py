"""Pauli-string algebra against dense Kronecker-product oracles."""

import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fermidope.pauli import PauliString, hermitize, majorana, majorana_monomial, pauli_mul

from conftest import kron_chain


def test_majorana_jordan_wigner_fixtures():
    assert_allclose(majorana(1, 2).to_matrix(), kron_chain("XI"))
    assert_allclose(majorana(4, 2).to_matrix(), kron_chain("ZY"))
    assert_allclose(majorana(3, 3).to_matrix(), kron_chain("ZXI"))


def test_majorana_squares_to_identity():
    for n in (1, 2, 3):
        for mu in range(1, 2 * n + 1):
            sq = pauli_mul(majorana(mu, n), majorana(mu, n))
            assert sq == PauliString.identity(n)


def test_majorana_index_out_of_range():
    with pytest.raises(ValueError):
        majorana(0, 2)
    with pytest.raises(ValueError):
        majorana(5, 2)


def test_distinct_majoranas_anticommute():
    n = 3
    for mu in range(1, 2 * n + 1):
        for nu in range(1, 2 * n + 1):
            if mu == nu:
                continue
            ab = pauli_mul(majorana(mu, n), majorana(nu, n))
            ba = pauli_mul(majorana(nu, n), majorana(mu, n))
            assert ab.x_mask == ba.x_mask and ab.z_mask == ba.z_mask
            assert (ab.phase_exp - ba.phase_exp) % 4 == 2


def test_pauli_z_from_majorana_pair():
    # Z_j = -i gamma_{2j-1} gamma_{2j}; so gamma_1 gamma_2 itself is +i Z
    prod = pauli_mul(majorana(1, 1), majorana(2, 1))
    assert_allclose(prod.to_matrix(), 1j * kron_chain("Z"))
    z = PauliString(1, prod.x_mask, prod.z_mask, prod.phase_exp + 3)
    assert_allclose(z.to_matrix(), kron_chain("Z"))


def test_mismatched_sizes_rejected():
    with pytest.raises(ValueError):
        pauli_mul(PauliString.identity(2), PauliString.identity(3))


def test_product_matches_dense_multiplication():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        for _ in range(30):
            a = PauliString(n, int(rng.integers(2**n)), int(rng.integers(2**n)), int(rng.integers(4)))
            b = PauliString(n, int(rng.integers(2**n)), int(rng.integers(2**n)), int(rng.integers(4)))
            assert_allclose(pauli_mul(a, b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-14)


def test_product_associative():
    rng = np.random.default_rng(4)
    n = 4
    draws = [
        PauliString(n, int(rng.integers(2**n)), int(rng.integers(2**n)), int(rng.integers(4)))
        for _ in range(30)
    ]
    for a, b, c in zip(draws, draws[1:], draws[2:]):
        assert pauli_mul(pauli_mul(a, b), c) == pauli_mul(a, pauli_mul(b, c))


def test_hermitian_product_squares_to_identity():
    rng = np.random.default_rng(5)
    n = 3
    for _ in range(40):
        p = hermitize(PauliString(n, int(rng.integers(2**n)), int(rng.integers(2**n)), int(rng.integers(4))))
        assert pauli_mul(p, p) == PauliString.identity(n)


def test_hermitian_predicate_matches_dense():
    for n in (1, 2):
        for x in range(2**n):
            for z in range(2**n):
                for p in range(4):
                    ps = PauliString(n, x, z, p)
                    m = ps.to_matrix()
                    assert ps.is_hermitian == np.allclose(m, m.conj().T)


def test_unitarity_dense():
    rng = np.random.default_rng(6)
    for _ in range(20):
        ps = PauliString(3, int(rng.integers(8)), int(rng.integers(8)), int(rng.integers(4)))
        m = ps.to_matrix()
        assert_allclose(m @ m.conj().T, np.eye(8), atol=1e-14)


def test_monomial_empty_is_identity():
    assert majorana_monomial((), 2) == PauliString.identity(2)


def test_monomial_pair_is_iz():
    assert_allclose(majorana_monomial((1, 2), 1).to_matrix(), 1j * kron_chain("Z"))


def test_monomial_matches_dense_product_oracle():
    n = 2
    dense = np.eye(4, dtype=complex)
    for mu in (1, 2, 3, 4):
        dense = dense @ majorana(mu, n).to_matrix()
    assert_allclose(majorana_monomial((1, 2, 3, 4), n).to_matrix(), dense, atol=1e-14)


def test_monomial_rejects_unsorted_or_duplicates():
    with pytest.raises(ValueError):
        majorana_monomial((2, 1), 2)
    with pytest.raises(ValueError):
        majorana_monomial((1, 1), 2)


def test_monomials_orthogonal_under_hilbert_schmidt():
    # all 4^n ordered monomials for n <= 2, pairwise HS-orthogonal
    for n in (1, 2):
        mats = []
        for r in range(2 * n + 1):
            for s in itertools.combinations(range(1, 2 * n + 1), r):
                mats.append(majorana_monomial(s, n).to_matrix())
        assert len(mats) == 4**n
        for i, a in enumerate(mats):
            for b in mats[i + 1 :]:
                assert abs(np.trace(a.conj().T @ b)) < 1e-12


def test_monomials_orthogonal_n3_sampled():
    # n = 3 has 4096 pairs; spot-check a random 300 of them densely
    rng = np.random.default_rng(7)
    subsets = []
    for r in range(7):
        subsets.extend(itertools.combinations(range(1, 7), r))
    for _ in range(300):
        i, j = rng.integers(len(subsets), size=2)
        if i == j:
            continue
        a = majorana_monomial(subsets[i], 3).to_matrix()
        b = majorana_monomial(subsets[j], 3).to_matrix()
        assert abs(np.trace(a.conj().T @ b)) < 1e-12


def test_dense_matches_letter_kron_everywhere():
    # the dense matrix of any string equals the Kronecker product built
    # independently from its rendered letter sequence
    rng = np.random.default_rng(8)
    for n in (1, 2, 3, 4, 5):
        for _ in range(10):
            ps = PauliString(n, int(rng.integers(2**n)), int(rng.integers(2**n)), int(rng.integers(4)))
            sign, letters = str(ps).split()
            scalar = {"+": 1, "+i": 1j, "-": -1, "-i": -1j}[sign]
            assert_allclose(ps.to_matrix(), scalar * kron_chain(letters), atol=1e-14)


def test_label_round_trip():
    for label in ("+ XZYI", "-i YYYY", "+i IZXY", "- IIII"):
        assert str(PauliString.from_label(label)) == label


def test_dagger_matches_dense():
    rng = np.random.default_rng(9)
    for _ in range(20):
        ps = PauliString(2, int(rng.integers(4)), int(rng.integers(4)), int(rng.integers(4)))
        assert_allclose(ps.dagger().to_matrix(), ps.to_matrix().conj().T, atol=1e-14)
