"""End-to-end learning of compressible states from single-copy measurements.

Pipeline: estimate the correlation matrix, rotate by the Gaussian unitary
of its normal form, post-select the trailing qubits on zero, run plain
Pauli tomography on the surviving core, and reassemble.  The returned
representation is the orthogonal matrix plus the core state, which is
enough to rebuild the full statevector.

Copy budgets follow the explicit formulas (`plan_budget`); the Hoeffding
variant (`hoeffding_budget`) sizes the correlation stage by the union bound
over matrix entries instead and is the practical choice at desk scale.
Sample draws use exact-distribution counts, so even astronomically large
budgets execute quickly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from . import ortho
from .gaussian import GaussianUnitary, identity_gaussian
from .metrology import correlation_exact, correlation_sampled
from .pauli import PauliString
from .states import (
    StateVector,
    embed_with_zero_tail,
    expectation,
    fidelity,
    postselect_zero_tail,
    trace_distance,
)

TOMOGRAPHY_LIMIT = 6


class BoostingFailureError(RuntimeError):
    """Fewer post-selection successes than the tomography stage needs."""


@dataclass(frozen=True)
class LearnBudget:
    """Copy counts for the three stages of the learning algorithm."""

    n: int
    t: int
    eps: float
    delta: float
    c_tom: float
    N_corr: int
    N_tom: int
    N_loop: int
    eps_c: float
    source: str = "default"

    @property
    def pure_tomography(self) -> bool:
        """t = n leaves no qubits to post-select; learning is tomography alone."""
        return self.t == self.n

    @property
    def total(self) -> int:
        return self.N_corr + self.N_loop

    def with_overrides(self, n_corr=None, n_tom=None, n_loop=None) -> "LearnBudget":
        new_tom = self.N_tom if n_tom is None else int(n_tom)
        if n_loop is not None:
            new_loop = int(n_loop)
        elif n_tom is not None:  # keep the boosting relation when N_tom moves
            new_loop = boosting_iterations(new_tom, self.delta / 3.0)
        else:
            new_loop = self.N_loop
        return replace(
            self,
            N_corr=self.N_corr if n_corr is None else int(n_corr),
            N_tom=new_tom,
            N_loop=new_loop,
            source="custom",
        )


def boosting_iterations(n_needed: int, delta: float) -> int:
    """Repetitions so that >= n_needed successes occur w.p. 1 - delta, given p >= 3/4."""
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    return math.ceil(2 * n_needed + 24.0 * math.log(1.0 / delta))


def _tomography_copies(t: int, eps: float, delta: float, c_tom: float) -> int:
    # copies for t-qubit tomography at accuracy eps/2, failure delta/3
    return math.ceil(c_tom * 2**t * max(t, 1) * math.log(3.0 / delta) * (eps / 2.0) ** -4)


def plan_budget(n: int, t: int, eps: float, delta: float, c_tom: float = 1.0) -> LearnBudget:
    """Default copy counts: N_corr = ceil(256 n^5 / eps^4 * log(12 n^2 / delta))."""
    if not (0 < eps <= 1 and 0 < delta <= 1):
        raise ValueError("need eps, delta in (0, 1]")
    if not 0 <= t <= n:
        raise ValueError(f"t must be in [0, {n}], got {t}")
    n_corr = math.ceil(256.0 * n**5 / eps**4 * math.log(12.0 * n**2 / delta))
    n_tom = _tomography_copies(t, eps, delta, c_tom)
    n_loop = boosting_iterations(n_tom, delta / 3.0)
    eps_c = math.inf if t == n else eps**2 / (4.0 * (n - t))
    return LearnBudget(
        n=n, t=t, eps=eps, delta=delta, c_tom=c_tom,
        N_corr=n_corr, N_tom=n_tom, N_loop=n_loop, eps_c=eps_c, source="default",
    )


def hoeffding_budget(n: int, t: int, eps: float, delta: float, c_tom: float = 1.0) -> LearnBudget:
    """Correlation stage sized by Hoeffding + union bound at target eps_c.

    N_corr = ceil(8 n^2 (2n-1) / eps_c^2 * log(2 n (2n-1) * 3 / delta)) total
    copies across the 2n-1 commuting groups.
    """
    base = plan_budget(n, t, eps, delta, c_tom)
    if base.pure_tomography:
        return replace(base, N_corr=0, source="hoeffding")
    m = n * (2 * n - 1)
    n_corr = math.ceil(8.0 * n**2 * (2 * n - 1) / base.eps_c**2 * math.log(2.0 * m * 3.0 / delta))
    return replace(base, N_corr=n_corr, source="hoeffding")


def pauli_strings(t: int):
    """All 4^t Pauli strings on t qubits, identity first."""
    if t == 0:
        return
    for letters in itertools.product("IXYZ", repeat=t):
        p = PauliString.identity(t)
        for k, letter in enumerate(letters, start=1):
            p = p * PauliString.single(t, k, letter)
        yield letters, p


def tomography_t_qubits(cores, mode: str = "sampled", shots: int | None = None, rng=None) -> StateVector:
    """Estimate a t-qubit pure state from copies.

    ``cores`` is a StateVector (with ``shots`` copies available) or a list
    of identical StateVectors (one copy each).  Sampled mode estimates all
    4^t Pauli expectations, splitting the copies evenly, assembles
    rho_hat = 2^-t * sum <P> P, and returns its top eigenvector.
    """
    if isinstance(cores, StateVector):
        core = cores
        copies = shots
    else:
        cores = list(cores)
        if not cores:
            raise ValueError("no cores supplied")
        core = cores[0]
        copies = len(cores) if shots is None else shots
    t = core.n
    if mode == "exact" or t == 0:
        return core
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if t > TOMOGRAPHY_LIMIT:
        raise ValueError(f"tomography limited to {TOMOGRAPHY_LIMIT} qubits, got {t}")
    if copies is None or copies < 4**t - 1:
        raise ValueError(f"need at least {4**t - 1} copies for {t}-qubit tomography, got {copies}")

    shots_per_pauli = copies // (4**t - 1)
    dim = 2**t
    rho = np.eye(dim, dtype=complex) / dim
    for letters, p in pauli_strings(t):
        if all(letter == "I" for letter in letters):
            continue
        prob = np.clip((1.0 + expectation(core, p)) / 2.0, 0.0, 1.0)
        wins = rng.binomial(shots_per_pauli, prob)
        est = 2.0 * wins / shots_per_pauli - 1.0
        rho += est * p.to_matrix() / dim
    _, vecs = np.linalg.eigh(rho)
    return StateVector(t, vecs[:, -1])


@dataclass(frozen=True)
class LearnedState:
    """Output representation: rotation O_hat plus the t-qubit core phi_hat."""

    O_hat: np.ndarray
    phi_hat: StateVector
    t: int

    @property
    def n(self) -> int:
        return self.O_hat.shape[0] // 2

    def gaussian(self) -> GaussianUnitary:
        return GaussianUnitary(self.O_hat, check=False)

    def reassemble(self) -> StateVector:
        return self.gaussian().apply(embed_with_zero_tail(self.phi_hat, self.n))

    def dumps(self) -> str:
        lines = ["learned-state v1", f"n {self.n}", f"t {self.t}", "O"]
        lines.append(ortho.matrix_to_text(self.O_hat).rstrip("\n"))
        lines.append("phi")
        lines.extend(f"{float(a.real)!r} {float(a.imag)!r}" for a in self.phi_hat.amps)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "LearnedState":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "learned-state v1":
            raise ValueError("not a learned-state v1 document")
        n = int(lines[1].split()[1])
        t = int(lines[2].split()[1])
        if lines[3] != "O":
            raise ValueError("malformed learned-state document")
        rows = [[float(x) for x in lines[4 + r].split()] for r in range(2 * n)]
        pos = 4 + 2 * n
        if lines[pos] != "phi":
            raise ValueError("malformed learned-state document")
        amps = []
        for r in range(2**t):
            re, im = lines[pos + 1 + r].split()
            amps.append(float(re) + 1j * float(im))
        return cls(O_hat=np.array(rows), phi_hat=StateVector(t, np.array(amps)), t=t)


def _fresh_copy(state_source) -> StateVector:
    return state_source() if callable(state_source) else state_source


def learn(state_source, n: int, t: int, budget: LearnBudget, mode: str = "sampled", rng=None) -> LearnedState:
    """Learn a t-compressible state from a copy oracle.

    Exact mode replaces every statistical estimate with the exact quantity
    (for debugging and promise checks); sampled mode consumes the budget.
    Raises BoostingFailureError when fewer than N_tom post-selections
    succeed and ZeroProbabilityError when the promise is violated outright.
    """
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    psi = _fresh_copy(state_source)
    if psi.n != n:
        raise ValueError(f"copy has {psi.n} qubits, expected {n}")
    if not 0 <= t <= n:
        raise ValueError(f"t must be in [0, {n}], got {t}")

    if budget.pure_tomography or t == n:
        g_hat = identity_gaussian(n)
        o_hat = g_hat.O
        rotated = psi
        successes = budget.N_loop
    else:
        if mode == "exact":
            c_hat = correlation_exact(psi)
        else:
            per_group = max(1, math.ceil(budget.N_corr / (2 * n - 1)))
            c_hat = correlation_sampled(_fresh_copy(state_source), per_group, "grouped", rng).C_hat
        o_hat = ortho.normal_form(c_hat).O
        g_hat = GaussianUnitary(o_hat, check=False)
        rotated = g_hat.adjoint().apply(_fresh_copy(state_source))

    if t < n and mode == "sampled":
        # every iteration is i.i.d., so the success count is one binomial draw
        block = rotated.amps.reshape(2**t, -1)
        p_zero = float(np.linalg.norm(block[:, 0]) ** 2)
        successes = int(rng.binomial(budget.N_loop, p_zero)) if p_zero < 1.0 else budget.N_loop
        if successes < budget.N_tom:
            raise BoostingFailureError(
                f"{successes} post-selection successes < N_tom = {budget.N_tom} "
                f"(success probability {p_zero:.4f})"
            )
    elif t < n:
        successes = budget.N_tom
    _, core = postselect_zero_tail(rotated, t)

    phi_hat = tomography_t_qubits(core, mode=mode, shots=successes, rng=rng)
    return LearnedState(O_hat=o_hat, phi_hat=phi_hat, t=t)


@dataclass(frozen=True)
class LearnReport:
    trace_distance: float
    fidelity: float
    postselect_rate: float
    term_tomography: float
    term_projection: float


def verify(learned, psi_true: StateVector) -> LearnReport:
    """Exact diagnostics of a learned state against the true state.

    Reports the total trace distance plus the two triangle-inequality
    terms: the tomography error on the core and the projection error of
    the rotated state onto its zero tail.  Accepts a LearnedState or its
    serialized text.
    """
    if isinstance(learned, str):
        learned = LearnedState.loads(learned)
    psi_hat = learned.reassemble()
    d_total = trace_distance(psi_hat, psi_true)
    g_hat = learned.gaussian()
    rotated = g_hat.adjoint().apply(psi_true)
    rate, core = postselect_zero_tail(rotated, learned.t)
    term_tom = trace_distance(learned.phi_hat, core)
    term_proj = trace_distance(embed_with_zero_tail(core, psi_true.n), rotated)
    return LearnReport(
        trace_distance=d_total,
        fidelity=fidelity(psi_hat, psi_true),
        postselect_rate=rate,
        term_tomography=term_tom,
        term_projection=term_proj,
    )
