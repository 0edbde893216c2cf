"""Fermionic Gaussian unitaries as executable gate programs.

A Gaussian unitary G_O is pinned down (up to a global phase) by its
Heisenberg action on Majorana operators,

    G^dag gamma_mu G = sum_nu O[mu, nu] gamma_nu,      O in O(2n),

and composes as G_{O1} G_{O2} = G_{O1 @ O2}.  Compilation factors O into
plane rotations; the rotation in plane (mu, nu) by angle theta is realized
as exp(i * theta/2 * P) with P the Hermitian form of -i gamma_mu gamma_nu,
and a det = -1 factor is realized by applying gamma_1 as a gate.  The
angle/sign convention is verified once at first use against the Heisenberg
identity on a dense two-qubit check.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import ortho
from .pauli import PauliString, majorana, pauli_mul
from .states import StateVector, apply_pauli, apply_pauli_rotation, operator_matrix, zero_state

_convention_verified = False


def rotation_generator(mu: int, nu: int, n: int) -> PauliString:
    """Hermitian Pauli string -i gamma_mu gamma_nu."""
    if mu == nu:
        raise ValueError("rotation plane needs two distinct Majorana indices")
    g = pauli_mul(majorana(mu, n), majorana(nu, n))
    p = PauliString(g.n, g.x_mask, g.z_mask, g.phase_exp + 3)  # multiply by -i
    if not p.is_hermitian:
        raise AssertionError("rotation generator failed to be Hermitian")
    return p


class GaussianUnitary:
    """A Gaussian unitary, built from its orthogonal matrix.

    The gate program is compiled lazily and cached; instances are immutable.
    """

    def __init__(self, o: np.ndarray, check: bool = True):
        o = np.array(o, dtype=float)
        if o.ndim != 2 or o.shape[0] != o.shape[1] or o.shape[0] % 2 != 0:
            raise ValueError(f"expected a square even-dimensional matrix, got {o.shape}")
        if check and not ortho.is_orthogonal(o):
            raise ValueError("matrix is not orthogonal within tolerance")
        o.setflags(write=False)
        self.O = o

    @property
    def n(self) -> int:
        return self.O.shape[0] // 2

    @cached_property
    def program(self) -> ortho.GivensProgram:
        return ortho.givens_decompose(self.O)

    def adjoint(self) -> "GaussianUnitary":
        return GaussianUnitary(self.O.T, check=False)

    def __matmul__(self, other: "GaussianUnitary") -> "GaussianUnitary":
        """Composition: (self @ other) applies ``other`` first."""
        return GaussianUnitary(self.O @ other.O, check=False)

    def apply(self, psi: StateVector) -> StateVector:
        if psi.n != self.n:
            raise ValueError(f"state has {psi.n} qubits, unitary expects {self.n}")
        _verify_convention_once()
        prog = self.program
        if prog.reflect_first:
            psi = apply_pauli(psi, majorana(1, self.n))
        for mu, nu, theta in prog.rotations:
            psi = apply_pauli_rotation(psi, rotation_generator(mu, nu, self.n), theta / 2.0)
        return psi

    def matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n unitary; for oracle checks at small n."""
        return operator_matrix(self.apply, self.n)

    def program_text(self) -> str:
        """Readable dump of the compiled gate sequence."""
        lines = [f"gaussian n={self.n} rotations={len(self.program.rotations)}"]
        if self.program.reflect_first:
            lines.append("reflect gamma_1")
        lines.extend(
            f"rotate plane=({mu},{nu}) angle={theta!r}" for mu, nu, theta in self.program.rotations
        )
        return "\n".join(lines)


def identity_gaussian(n: int) -> GaussianUnitary:
    return GaussianUnitary(np.eye(2 * n), check=False)


def preserves_vacuum(g: GaussianUnitary, tol: float = 1e-9) -> bool:
    """True iff |<0^n| G |0^n>| = 1 within tolerance."""
    amp = g.apply(zero_state(g.n)).amps[0]
    return bool(abs(abs(amp) - 1.0) <= tol)


def heisenberg_matrix(g: GaussianUnitary) -> np.ndarray:
    """Recover O from the dense conjugation action G^dag gamma_mu G."""
    n = g.n
    u = g.matrix()
    out = np.zeros((2 * n, 2 * n))
    gammas = [majorana(mu, n).to_matrix() for mu in range(1, 2 * n + 1)]
    dim = 2**n
    for mu in range(2 * n):
        conj = u.conj().T @ gammas[mu] @ u
        for nu in range(2 * n):
            out[mu, nu] = (np.trace(gammas[nu] @ conj) / dim).real
    return out


def _verify_convention_once():
    """One-time dense check that compiled rotations match the Heisenberg identity."""
    global _convention_verified
    if _convention_verified:
        return
    _convention_verified = True  # set first; the check itself applies gates
    n = 2
    o = ortho.plane_rotation(2 * n, 1, 3, 0.537) @ ortho.plane_rotation(2 * n, 2, 4, -1.13)
    residual = ortho.opnorm(heisenberg_matrix(GaussianUnitary(o)) - o)
    if residual > 1e-9:
        _convention_verified = False
        raise AssertionError(
            f"Gaussian gate sign convention violates the Heisenberg identity (residual {residual:.2e})"
        )
