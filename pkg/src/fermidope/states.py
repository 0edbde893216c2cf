"""Dense statevector engine: gates, expectations, measurement, distances.

Index convention: a basis index b encodes qubit values as
b = sum_k x_k 2^(n-k), i.e. qubit 1 is the most significant bit.  All
modules share this convention.  States are pure and kept normalized to
within 1e-10 by every public operation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString

MAX_SIM_QUBITS = 24
_NORM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state on n qubits (n = 0 is the trivial register)."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n <= MAX_SIM_QUBITS:
            raise ValueError(f"qubit count must be in [0, {MAX_SIM_QUBITS}], got {self.n}")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: |amps| = {norm}")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class MeasurementRecord:
    qubits: tuple
    outcomes: tuple
    probability: float


def zero_state(n: int) -> StateVector:
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def basis_state(n: int, index: int) -> StateVector:
    amps = np.zeros(2**n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


def random_state(n: int, rng) -> StateVector:
    """Haar-random pure state."""
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, amps / np.linalg.norm(amps))


def product(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; the qubits of ``a`` become the leading qubits."""
    return StateVector(a.n + b.n, np.kron(a.amps, b.amps))


def _index_mask(qubit_mask: int, n: int) -> int:
    # mask bit k-1 refers to qubit k, which is basis-index bit n-k
    out = 0
    for k in range(n):
        if (qubit_mask >> k) & 1:
            out |= 1 << (n - 1 - k)
    return out


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    shift = 1
    while shift < 64:
        v ^= v >> shift
        shift *= 2
    return v & 1


def apply_pauli(psi: StateVector, p: PauliString) -> StateVector:
    """P|psi> for an arbitrary Pauli string (not necessarily Hermitian)."""
    if p.n != psi.n:
        raise ValueError(f"qubit counts differ: {p.n} != {psi.n}")
    n = psi.n
    x_idx = _index_mask(p.x_mask, n)
    z_idx = _index_mask(p.z_mask, n)
    idx = np.arange(2**n, dtype=np.uint64)
    src = idx ^ np.uint64(x_idx)
    signs = 1.0 - 2.0 * _parity(src & np.uint64(z_idx)).astype(float)
    amps = p.phase * signs * psi.amps[src]
    return StateVector(n, amps)


def apply_pauli_rotation(psi: StateVector, p: PauliString, theta: float) -> StateVector:
    """exp(i * theta * P) |psi> for Hermitian P."""
    if not p.is_hermitian:
        raise ValueError("rotation generator must be Hermitian")
    rotated = apply_pauli(psi, p)
    amps = np.cos(theta) * psi.amps + 1j * np.sin(theta) * rotated.amps
    return StateVector(psi.n, amps)


def apply_dense_unitary(psi: StateVector, qubits, u: np.ndarray) -> StateVector:
    """Apply a 2^k x 2^k unitary on the listed qubits, identity elsewhere."""
    qubits = list(qubits)
    k = len(qubits)
    if len(set(qubits)) != k:
        raise ValueError(f"duplicate qubit indices: {qubits}")
    if any(not 1 <= q <= psi.n for q in qubits):
        raise ValueError(f"qubit indices out of range: {qubits}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2**k, 2**k):
        raise ValueError(f"expected a {2**k} x {2**k} matrix, got {u.shape}")
    if np.linalg.norm(u.conj().T @ u - np.eye(2**k), 2) > 1e-10:
        raise ValueError("matrix is not unitary")
    if k == 0:
        return psi
    t = psi.amps.reshape([2] * psi.n)
    axes = [q - 1 for q in qubits]
    t = np.moveaxis(t, axes, range(k))
    t = u @ t.reshape(2**k, -1)
    t = np.moveaxis(t.reshape([2] * psi.n), range(k), axes)
    return StateVector(psi.n, t.reshape(-1))


def expectation(psi: StateVector, p: PauliString) -> float:
    """<psi| P |psi> for Hermitian P."""
    if not p.is_hermitian:
        raise ValueError("expectation requires a Hermitian Pauli string")
    value = np.vdot(psi.amps, apply_pauli(psi, p).amps)
    return float(value.real)


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.n != b.n:
        raise ValueError("qubit counts differ")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    return float(abs(overlap(a, b)) ** 2)


def trace_distance(a: StateVector, b: StateVector) -> float:
    """Pure-state trace distance sqrt(1 - |<a|b>|^2)."""
    return float(np.sqrt(max(0.0, 1.0 - fidelity(a, b))))


def marginal_probabilities(psi: StateVector, qubits) -> np.ndarray:
    """Joint outcome distribution of the listed qubits, in listed order."""
    qubits = list(qubits)
    if not qubits:
        raise ValueError("qubit list is empty")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices: {qubits}")
    probs = np.abs(psi.amps.reshape([2] * psi.n)) ** 2
    probs = np.moveaxis(probs, [q - 1 for q in qubits], range(len(qubits)))
    return probs.reshape(2 ** len(qubits), -1).sum(axis=1)


def born_probability(psi: StateVector, qubits, outcomes) -> float:
    """Probability of observing the given outcome bits on the listed qubits."""
    qubits, outcomes = list(qubits), list(outcomes)
    probs = marginal_probabilities(psi, qubits)
    pos = 0
    for bit in outcomes:
        pos = (pos << 1) | int(bit)
    return float(probs[pos])


def project_outcome(psi: StateVector, qubits, outcomes):
    """Post-select the listed qubits on the given outcome bits.

    Returns (probability, normalized post-measurement state).  Raises
    ZeroProbabilityError when the projection annihilates the state.
    """
    qubits, outcomes = list(qubits), list(outcomes)
    t = psi.amps.reshape([2] * psi.n).copy()
    sel = [slice(None)] * psi.n
    for q, bit in zip(qubits, outcomes):
        keep = [slice(None)] * psi.n
        keep[q - 1] = 1 - int(bit)
        t[tuple(keep)] = 0.0
    amps = t.reshape(-1)
    prob = float(np.linalg.norm(amps) ** 2)
    if prob < 1e-28:
        raise ZeroProbabilityError(f"outcome {outcomes} on qubits {qubits} has probability {prob}")
    return prob, StateVector(psi.n, amps / np.sqrt(prob))


class ZeroProbabilityError(ValueError):
    """A requested post-selection outcome has (numerically) zero probability."""


def measure_computational(psi: StateVector, qubits, rng):
    """Sample a joint computational-basis outcome for the listed qubits.

    The k-bit outcome is drawn in one shot from the exact marginal; the
    returned state is the normalized post-measurement state.
    """
    qubits = list(qubits)
    probs = marginal_probabilities(psi, qubits)
    drawn = int(rng.choice(len(probs), p=probs / probs.sum()))
    outcomes = tuple((drawn >> (len(qubits) - 1 - i)) & 1 for i in range(len(qubits)))
    prob, post = project_outcome(psi, qubits, outcomes)
    record = MeasurementRecord(tuple(qubits), outcomes, prob)
    return record, post


def postselect_zero_tail(psi: StateVector, core_qubits: int):
    """Project the last n - core_qubits qubits onto |0...0>.

    Returns (probability, core state on the first core_qubits qubits).
    """
    m = core_qubits
    tail = psi.n - m
    if tail == 0:
        return 1.0, psi
    block = psi.amps.reshape(2**m, 2**tail)
    core = block[:, 0]
    prob = float(np.linalg.norm(core) ** 2)
    if prob < 1e-28:
        raise ZeroProbabilityError(f"all-zero tail outcome has probability {prob}")
    return prob, StateVector(m, core / np.sqrt(prob))


def embed_with_zero_tail(core: StateVector, n: int) -> StateVector:
    """core (x) |0^(n-m)> as an n-qubit state."""
    if core.n > n:
        raise ValueError(f"core has {core.n} qubits, register has {n}")
    return product(core, zero_state(n - core.n))


def operator_matrix(apply_fn, n: int) -> np.ndarray:
    """Dense matrix of a linear map given by its action on statevectors."""
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        out[:, b] = apply_fn(basis_state(n, b)).amps
    return out
