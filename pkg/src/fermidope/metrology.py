"""Correlation-matrix estimation, Gaussian dimension, and dimension testing.

The correlation matrix of a state has entries C[j, k] = <-i gamma_j gamma_k>
for j < k; its nonnegative normal eigenvalues measure how Gaussian the
state is.  This module provides exact and shot-based estimators, the
trace-distance sandwich derived from the normal eigenvalues, the nearest
exactly-compressible witness state, and the close/far property tester for
the Gaussian dimension.

Shot-based estimators draw from the exact outcome distributions (binomial
for a single +-1 observable, multinomial over joint bitstrings for a
commuting group), which is statistically identical to simulating the shots
one at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ortho
from .gaussian import GaussianUnitary
from .pauli import majorana
from .states import (
    StateVector,
    apply_pauli,
    embed_with_zero_tail,
    postselect_zero_tail,
    trace_distance,
)

SCHEMES = ("exact", "pauli_per_entry", "grouped")


@dataclass(frozen=True)
class CorrelationEstimate:
    C_hat: np.ndarray
    shots_per_entry: int
    scheme: str


def correlation_exact(psi: StateVector) -> np.ndarray:
    """Exact antisymmetric correlation matrix of a pure state."""
    n = psi.n
    rotated = [apply_pauli(psi, majorana(mu, n)).amps for mu in range(1, 2 * n + 1)]
    c = np.zeros((2 * n, 2 * n))
    for j in range(2 * n):
        for k in range(j + 1, 2 * n):
            value = -1j * np.vdot(rotated[j], rotated[k])
            if abs(value.imag) > 1e-10:
                raise AssertionError(f"correlation entry not real: {value}")
            c[j, k] = value.real
            c[k, j] = -value.real
    return c


def hoeffding_shots(eps: float, delta: float, n_observables: int) -> int:
    """Per-observable shots so all n_observables means land within eps w.p. 1-delta."""
    if eps <= 0 or not 0 < delta <= 1:
        raise ValueError("need eps > 0 and delta in (0, 1]")
    return math.ceil((2.0 / eps**2) * math.log(2.0 * n_observables / delta))


def commuting_groups(n: int):
    """Partition the n(2n-1) pair observables into 2n-1 groups of n disjoint pairs.

    Round-robin schedule on 2n Majorana indices: every group covers each
    index exactly once, so its observables -i gamma_a gamma_b pairwise
    commute, and every pair appears in exactly one group.
    """
    m = 2 * n
    others = list(range(2, m + 1))
    groups = []
    for _ in range(m - 1):
        pairs = [tuple(sorted((1, others[0])))]
        for k in range(1, n):
            pairs.append(tuple(sorted((others[k], others[m - 1 - k]))))
        groups.append(sorted(pairs))
        others = others[1:] + others[:1]
    return groups


def _group_basis_change(pairs, n: int) -> GaussianUnitary:
    # permutation sending plane (2i-1, 2i) onto pair (a_i, b_i), so measuring
    # Z_i after the rotation samples -i gamma_{a_i} gamma_{b_i}
    p = np.zeros((2 * n, 2 * n))
    for i, (a, b) in enumerate(pairs):
        p[2 * i, a - 1] = 1.0
        p[2 * i + 1, b - 1] = 1.0
    return GaussianUnitary(p, check=False)


def correlation_sampled(psi: StateVector, shots_per_entry: int, scheme: str, rng) -> CorrelationEstimate:
    """Estimate the correlation matrix from measurement shots.

    pauli_per_entry: each upper-triangle entry is the mean of
    ``shots_per_entry`` +-1 draws with success probability (1 + <O>)/2.
    grouped: one joint computational-basis sample per shot per commuting
    group, after the compiled Gaussian basis change; ``shots_per_entry``
    shots are spent on each of the 2n-1 groups.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    n = psi.n
    if scheme == "exact":
        return CorrelationEstimate(correlation_exact(psi), 0, "exact")
    if shots_per_entry < 1:
        raise ValueError("shots_per_entry must be >= 1")

    c_hat = np.zeros((2 * n, 2 * n))
    if scheme == "pauli_per_entry":
        exact = correlation_exact(psi)
        for j in range(2 * n):
            for k in range(j + 1, 2 * n):
                p = np.clip((1.0 + exact[j, k]) / 2.0, 0.0, 1.0)
                wins = rng.binomial(shots_per_entry, p)
                c_hat[j, k] = 2.0 * wins / shots_per_entry - 1.0
    else:
        for pairs in commuting_groups(n):
            rotated = _group_basis_change(pairs, n).apply(psi)
            probs = np.abs(rotated.amps) ** 2
            probs = probs / probs.sum()
            counts = rng.multinomial(shots_per_entry, probs)
            outcomes = np.arange(2**n)
            for i, (a, b) in enumerate(pairs):
                bit = (outcomes >> (n - 1 - i)) & 1
                mean = np.sum(counts * (1.0 - 2.0 * bit)) / shots_per_entry
                c_hat[a - 1, b - 1] = mean
    c_hat = c_hat - c_hat.T
    return CorrelationEstimate(c_hat, shots_per_entry, scheme)


def gaussian_dimension(c: np.ndarray, tol: float = 1e-6) -> int:
    """Number of normal eigenvalues within tol of one."""
    lambdas = ortho.normal_eigenvalues(c)
    return int(np.sum(lambdas >= 1.0 - tol))


@dataclass(frozen=True)
class DistanceBounds:
    """Sandwich on the trace distance to the set of t-compressible states."""

    lower: float
    upper: float
    lambdas: np.ndarray
    t: int


def distance_bounds(lambdas, t: int) -> DistanceBounds:
    """lower = (1 - lambda_{t+1})/2,  upper = sqrt(sum_{k>t} (1 - lambda_k)/2)."""
    lambdas = np.asarray(lambdas, dtype=float)
    n = len(lambdas)
    if not 0 <= t < n:
        raise ValueError(f"t must be in [0, {n - 1}], got {t}")
    if np.any(np.diff(lambdas) < -1e-9):
        raise ValueError("lambdas must be ascending")
    lower = (1.0 - lambdas[t]) / 2.0
    upper = float(np.sqrt(np.sum(np.maximum(1.0 - lambdas[t:], 0.0) / 2.0)))
    return DistanceBounds(lower=float(lower), upper=upper, lambdas=lambdas, t=t)


def nearest_compressible(psi: StateVector, t: int):
    """Witness t-compressible state built from the state's own normal form.

    Returns (state, exact trace distance).  The distance always sits inside
    the bounds of `distance_bounds` evaluated on the exact normal
    eigenvalues.  Raises ZeroProbabilityError when projecting the rotated
    state onto the zero tail annihilates it.
    """
    n = psi.n
    if not 0 <= t <= n:
        raise ValueError(f"t must be in [0, {n}], got {t}")
    if t == n:
        return psi, 0.0
    nf = ortho.normal_form(correlation_exact(psi))
    g = GaussianUnitary(nf.O, check=False)
    rotated = g.adjoint().apply(psi)
    _, core = postselect_zero_tail(rotated, t)
    witness_rotated = embed_with_zero_tail(core, n)
    distance = trace_distance(witness_rotated, rotated)
    return g.apply(witness_rotated), distance


@dataclass(frozen=True)
class DimensionTestResult:
    verdict: str  # "close" or "far"
    lambda_t1: float
    eps_corr: float
    eps_test: float
    copies: int


def dimension_verdict(lambda_t1: float, eps_test: float) -> str:
    """close iff the estimated lambda_{t+1} reaches 1 - eps_test (inclusive)."""
    return "close" if lambda_t1 >= 1.0 - eps_test else "far"


def _fresh_copy(state_source) -> StateVector:
    return state_source() if callable(state_source) else state_source


def test_gaussian_dimension(
    state_source,
    t: int,
    eps_a: float,
    eps_b: float,
    delta: float,
    rng=None,
    shot_override: int | None = None,
    scheme: str = "grouped",
) -> DimensionTestResult:
    """Decide whether a state is eps_a-close or eps_b-far from t-compressible.

    Promise tester: assuming the state is within eps_a of the set of
    t-compressible states or at least eps_b away, the verdict is correct
    with probability at least 1 - delta.  Requires
    eps_b > sqrt((n - t) * eps_a).  The default copy count is
    ceil(16 n^3 / eps_corr^2 * log(4 n^2 / delta)); shot_override replaces
    it for desk-scale runs.
    """
    psi = _fresh_copy(state_source)
    n = psi.n
    if not 0 <= t < n:
        raise ValueError(f"t must be in [0, {n - 1}], got {t}")
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if eps_b <= math.sqrt((n - t) * eps_a):
        raise ValueError(
            f"need eps_b > sqrt((n - t) * eps_a) = {math.sqrt((n - t) * eps_a):.4g}, got {eps_b}"
        )
    eps_corr = eps_b**2 / (n - t) - eps_a
    eps_test = eps_b**2 / (n - t) + eps_a

    if scheme == "exact":
        copies = 0
        estimate = correlation_sampled(psi, 0, "exact", rng)
    else:
        copies = shot_override if shot_override is not None else math.ceil(
            16.0 * n**3 / eps_corr**2 * math.log(4.0 * n**2 / delta)
        )
        per_group = max(1, math.ceil(copies / (2 * n - 1)))
        estimate = correlation_sampled(psi, per_group, scheme, rng)

    lambdas = ortho.normal_eigenvalues(estimate.C_hat)
    lam = float(lambdas[t])
    verdict = dimension_verdict(lam, eps_test)
    return DimensionTestResult(
        verdict=verdict, lambda_t1=lam, eps_corr=eps_corr, eps_test=eps_test, copies=copies
    )
