"""Correlation estimators, distance sandwich, and the dimension tester."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fermidope import metrology, ortho
from fermidope.doped import prepare, random_doped_circuit
from fermidope.gaussian import GaussianUnitary
from fermidope.metrology import (
    commuting_groups,
    correlation_exact,
    correlation_sampled,
    distance_bounds,
    gaussian_dimension,
    hoeffding_shots,
    nearest_compressible,
)
from fermidope.states import StateVector, basis_state, product, zero_state

from conftest import compressible_fixture, tplus_state


def test_correlation_of_vacuum_is_omega():
    for n in (1, 2, 3):
        assert_allclose(correlation_exact(zero_state(n)), ortho.omega(n), atol=1e-12)


def test_correlation_of_basis_state_flips_blocks():
    # |x> with x_1 = 1 flips the first block sign, second unchanged
    c = correlation_exact(basis_state(2, 0b10))
    expected = np.kron(np.diag([-1.0, 1.0]), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert_allclose(c, expected, atol=1e-12)


def test_correlation_transport_of_gaussian(rng):
    o = ortho.random_orthogonal(8, rng)
    psi = GaussianUnitary(o).apply(zero_state(4))
    assert ortho.opnorm(correlation_exact(psi) - o @ ortho.omega(4) @ o.T) <= 1e-9


def test_exact_scheme_identical_to_exact(rng):
    psi = prepare(random_doped_circuit(3, 1, 3, rng))
    est = correlation_sampled(psi, 10, "exact", rng)
    assert_allclose(est.C_hat, correlation_exact(psi))
    assert est.scheme == "exact"


def test_unknown_scheme_rejected(rng):
    with pytest.raises(ValueError):
        correlation_sampled(zero_state(2), 10, "shadow", rng)


def test_commuting_groups_partition():
    for n in (2, 3, 4, 5):
        groups = commuting_groups(n)
        assert len(groups) == 2 * n - 1
        all_pairs = set()
        for pairs in groups:
            assert len(pairs) == n
            flat = [i for pair in pairs for i in pair]
            assert sorted(flat) == list(range(1, 2 * n + 1))  # disjoint cover
            all_pairs.update(pairs)
        assert len(all_pairs) == n * (2 * n - 1)  # every observable exactly once


def test_grouped_observables_commute():
    from fermidope.gaussian import rotation_generator

    n = 3
    for pairs in commuting_groups(n):
        gens = [rotation_generator(a, b, n) for a, b in pairs]
        for i, p in enumerate(gens):
            for q in gens[i + 1 :]:
                assert p.commutes_with(q)


def test_sampled_estimates_concentrate(rng):
    # 1e5 shots on |0^2>: operator-norm error well inside 0.05, every trial
    for scheme in ("pauli_per_entry", "grouped"):
        for _ in range(25):
            est = correlation_sampled(zero_state(2), 100_000, scheme, rng)
            err = ortho.opnorm(est.C_hat - ortho.omega(2))
            assert err <= 0.05, (scheme, err)


def test_estimator_unbiased(rng):
    # means over repeated estimates match exact entries within 4 sigma
    psi = prepare(random_doped_circuit(2, 1, 3, rng))
    exact = correlation_exact(psi)
    shots, reps = 400, 300
    for scheme in ("pauli_per_entry", "grouped"):
        acc = np.zeros_like(exact)
        for _ in range(reps):
            acc += correlation_sampled(psi, shots, scheme, rng).C_hat
        mean = acc / reps
        sigma = 1.0 / np.sqrt(shots * reps)  # bound on the sd of each averaged entry
        assert np.max(np.abs(mean - exact)) <= 4 * sigma + 1e-9


def test_hoeffding_budget_reaches_entry_accuracy(rng):
    # N' = ceil((2/eps^2) log(2M/delta)) per entry gives max-entry error < eps
    # in at least a 1 - delta fraction of trials
    n, eps, delta = 2, 0.1, 0.1
    m = n * (2 * n - 1)
    shots = hoeffding_shots(eps, delta, m)
    psi = prepare(random_doped_circuit(n, 1, 3, rng))
    exact = correlation_exact(psi)
    trials, hits = 200, 0
    for _ in range(trials):
        est = correlation_sampled(psi, shots, "pauli_per_entry", rng)
        hits += np.max(np.abs(est.C_hat - exact)) < eps
    assert hits >= (1 - delta) * trials


def test_entries_stay_in_range(rng):
    est = correlation_sampled(zero_state(3), 3, "grouped", rng)
    assert np.max(np.abs(est.C_hat)) <= 1.0 + 1e-12
    assert_allclose(est.C_hat, -est.C_hat.T)


def test_gaussian_dimension_fixtures(rng):
    o = ortho.random_orthogonal(8, rng)
    psi = GaussianUnitary(o).apply(zero_state(4))
    assert gaussian_dimension(correlation_exact(psi), 1e-8) == 4
    assert gaussian_dimension(correlation_exact(tplus_state(1))) == 0
    c = random_doped_circuit(6, 1, 4, rng)
    assert gaussian_dimension(correlation_exact(prepare(c)), 1e-8) >= 6 - 4


def test_distance_bounds_fixtures():
    bounds = distance_bounds(np.ones(4), 0)
    assert bounds.lower == pytest.approx(0.0) and bounds.upper == pytest.approx(0.0)
    # T|+>: lambda = 0, so lower = 1/2 and upper = sqrt(1/2) at t = 0
    lam = ortho.normal_eigenvalues(correlation_exact(tplus_state(1)))
    bounds = distance_bounds(lam, 0)
    assert bounds.lower == pytest.approx(0.5, abs=1e-12)
    assert bounds.upper == pytest.approx(np.sqrt(0.5), abs=1e-12)
    with pytest.raises(ValueError):
        distance_bounds(np.ones(4), 4)


def test_distance_bounds_vanish_at_doping_level(rng):
    # evaluating a doped state at t' = kappa*t gives lower = 0
    c = random_doped_circuit(6, 1, 3, rng)
    lam = ortho.normal_eigenvalues(correlation_exact(prepare(c)))
    bounds = distance_bounds(lam, 3)
    assert bounds.lower == pytest.approx(0.0, abs=1e-8)


def test_nearest_compressible_gaussian_is_exact(rng):
    psi = GaussianUnitary(ortho.random_orthogonal(8, rng)).apply(zero_state(4))
    _, d = nearest_compressible(psi, 0)
    assert d <= 1e-7


def test_nearest_compressible_on_compressed_fixture():
    psi, _, _ = compressible_fixture(5, 2, seed=21)
    _, d = nearest_compressible(psi, 2)
    assert d <= 1e-7


def test_nearest_compressible_tplus_within_upper_bound():
    # T|+> (x) |0>: the t = 1 witness distance obeys sqrt((1 - lambda_2)/2)
    psi = product(tplus_state(1), zero_state(1))
    lam = ortho.normal_eigenvalues(correlation_exact(psi))
    witness, d = nearest_compressible(psi, 1)
    assert d <= np.sqrt(max(0.0, 1.0 - lam[1]) / 2.0) + 1e-9
    assert witness.n == 2


def test_nearest_compressible_sandwich(rng):
    for _ in range(12):
        n = int(rng.choice([4, 5]))
        c = random_doped_circuit(n, 1, 4, rng)
        psi = prepare(c)
        lam = ortho.normal_eigenvalues(correlation_exact(psi))
        for t in range(n):
            bounds = distance_bounds(lam, t)
            _, d = nearest_compressible(psi, t)
            assert bounds.lower - 1e-9 <= d <= bounds.upper + 1e-9


def test_nearest_compressible_t_equals_n_is_trivial(rng):
    psi = prepare(random_doped_circuit(3, 1, 3, rng))
    witness, d = nearest_compressible(psi, 3)
    assert d == 0.0 and witness is psi
    with pytest.raises(ValueError):
        nearest_compressible(psi, 4)


def test_tester_close_on_gaussian_exact(rng):
    psi = GaussianUnitary(ortho.random_orthogonal(8, rng)).apply(zero_state(4))
    res = metrology.test_gaussian_dimension(psi, 0, 0.0, 0.4, 1 / 3, scheme="exact")
    assert res.verdict == "close"


def test_tester_far_on_magic_product_exact():
    psi = tplus_state(4)
    lam = ortho.normal_eigenvalues(correlation_exact(psi))
    assert lam[0] == pytest.approx(0.0, abs=1e-10)  # lower bound 1/2 > eps_b
    res = metrology.test_gaussian_dimension(psi, 0, 0.0, 0.4, 1 / 3, scheme="exact")
    assert res.verdict == "far"


def test_tester_boundary_is_close():
    # an estimate sitting exactly at 1 - eps_test counts as close
    assert metrology.dimension_verdict(1.0 - 0.04, 0.04) == "close"
    assert metrology.dimension_verdict(np.nextafter(1.0 - 0.04, 0.0), 0.04) == "far"
    # and a state estimated epsilon above the threshold is also close
    plus = StateVector(1, np.array([1.0, 1.0]) / np.sqrt(2.0))
    res = metrology.test_gaussian_dimension(plus, 0, 0.0, 1.0, 0.5, scheme="exact")
    assert res.eps_test == 1.0 and res.verdict == "close"


def test_tester_copy_oracle_and_callable(rng):
    psi = GaussianUnitary(ortho.random_orthogonal(6, rng)).apply(zero_state(3))
    res = metrology.test_gaussian_dimension(lambda: psi, 0, 0.0, 0.5, 0.5, rng=rng,
                                            shot_override=20_000)
    assert res.verdict == "close"
    assert res.copies == 20_000


def test_tester_precondition(rng):
    with pytest.raises(ValueError):
        metrology.test_gaussian_dimension(zero_state(3), 0, 0.1, 0.2, 0.5, rng=rng)


def test_tester_default_copy_formula(rng):
    import math

    psi = GaussianUnitary(ortho.random_orthogonal(8, rng)).apply(zero_state(4))
    res = metrology.test_gaussian_dimension(psi, 0, 0.0, 0.4, 1 / 3, rng=rng)
    eps_corr = 0.4**2 / 4
    expected = math.ceil(16 * 4**3 / eps_corr**2 * math.log(4 * 16 / (1 / 3)))
    assert res.copies == expected
    assert res.verdict == "close"


def test_tester_error_rate_sampled(rng):
    # promise-respecting fixtures at n = 4: empirical error rate <= delta
    delta = 1 / 3
    errs = 0
    trials = 40
    for i in range(trials):
        if i % 2 == 0:
            psi = GaussianUnitary(ortho.random_orthogonal(8, rng)).apply(zero_state(4))
            expected = "close"
        else:
            psi = tplus_state(4)
            expected = "far"
        res = metrology.test_gaussian_dimension(psi, 0, 0.0, 0.4, delta, rng=rng,
                                                shot_override=100_000)
        errs += res.verdict != expected
    assert errs / trials <= delta
