"""Exact n-qubit Pauli-string algebra and Majorana operators.

Majorana operators follow the Jordan-Wigner convention

    gamma_{2k-1} = Z_1 ... Z_{k-1} X_k,     gamma_{2k} = Z_1 ... Z_{k-1} Y_k,

with qubits numbered 1..n and Majorana indices 1..2n.  A Pauli string is
stored as a pair of bit masks plus an integer power of i, so every product
and phase is computed in exact integer arithmetic:

    P = i^phase_exp * prod_k X_k^{x_k} Z_k^{z_k}

with the X factor to the left of the Z factor on each qubit.  Bit k-1 of a
mask refers to qubit k.  Qubit 1 is the most significant bit of a
computational basis index (see `fermidope.states`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_QUBITS = 32

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
_XZ2 = _X2 @ _Z2  # equals -iY

# (x bit, z bit) -> single-qubit factor, X-then-Z order
_FACTOR = {(0, 0): _I2, (1, 0): _X2, (0, 1): _Z2, (1, 1): _XZ2}

_PHASES = (1.0, 1.0j, -1.0, -1.0j)
_SIGN_LABEL = ("+", "+i", "-", "-i")


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator with an exact i^k global phase."""

    n: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")
        full = (1 << self.n) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits outside the n-qubit register")
        if self.x_mask < 0 or self.z_mask < 0:
            raise ValueError("masks must be non-negative")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """The one-letter string ``letter`` in {I,X,Y,Z} acting on ``qubit``."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        bit = 1 << (qubit - 1)
        try:
            x, z, p = {"I": (0, 0, 0), "X": (bit, 0, 0), "Y": (bit, bit, 1), "Z": (0, bit, 0)}[letter]
        except KeyError:
            raise ValueError(f"unknown Pauli letter {letter!r}") from None
        return cls(n, x, z, p)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse the rendering produced by ``str()``, e.g. ``"+i XZYI"``."""
        sign, _, letters = label.strip().partition(" ")
        if sign not in _SIGN_LABEL or not letters:
            raise ValueError(f"malformed Pauli label {label!r}")
        n = len(letters)
        out = cls.identity(n)
        for k, letter in enumerate(letters, start=1):
            out = pauli_mul(out, cls.single(n, k, letter))
        return cls(n, out.x_mask, out.z_mask, out.phase_exp + _SIGN_LABEL.index(sign))

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_exp]

    @property
    def is_hermitian(self) -> bool:
        # conjugating X^x Z^z on one qubit flips the sign iff both bits are set
        return (self.phase_exp - _popcount(self.x_mask & self.z_mask)) % 2 == 0

    @property
    def weight(self) -> int:
        """Number of qubits acted on non-trivially."""
        return _popcount(self.x_mask | self.z_mask)

    def dagger(self) -> "PauliString":
        flips = _popcount(self.x_mask & self.z_mask)
        return PauliString(self.n, self.x_mask, self.z_mask, -self.phase_exp + 2 * flips)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        anti = _popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)
        return anti % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; intended for oracle checks at small n."""
        if self.n > 12:
            raise ValueError("dense matrix limited to n <= 12")
        factors = [
            _FACTOR[(self.x_mask >> k) & 1, (self.z_mask >> k) & 1]
            for k in range(self.n)
        ]
        # qubit 1 is the most significant index bit, so it is the leftmost factor
        return self.phase * reduce(np.kron, factors)

    def __str__(self):
        residual = (self.phase_exp - _popcount(self.x_mask & self.z_mask)) % 4
        letters = []
        for k in range(self.n):
            x, z = (self.x_mask >> k) & 1, (self.z_mask >> k) & 1
            letters.append("IXZY"[x + 2 * z] if (x, z) != (1, 1) else "Y")
        return f"{_SIGN_LABEL[residual]} {''.join(letters)}"


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact product a * b, including the accumulated power of i."""
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} != {b.n}")
    # commuting each X of b through each Z of a picks up a factor of -1
    phase = a.phase_exp + b.phase_exp + 2 * _popcount(a.z_mask & b.x_mask)
    return PauliString(a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, phase)


def hermitize(p: PauliString) -> PauliString:
    """Multiply by i if needed so the string is Hermitian."""
    return p if p.is_hermitian else PauliString(p.n, p.x_mask, p.z_mask, p.phase_exp + 1)


def majorana(mu: int, n: int) -> PauliString:
    """The Majorana operator gamma_mu on n qubits, mu in [1, 2n]."""
    if not 1 <= mu <= 2 * n:
        raise ValueError(f"Majorana index {mu} out of range for n={n}")
    k = (mu + 1) // 2
    x = 1 << (k - 1)
    z_chain = (1 << (k - 1)) - 1
    if mu % 2 == 1:
        return PauliString(n, x, z_chain, 0)
    return PauliString(n, x, z_chain | x, 1)


def majorana_monomial(indices, n: int) -> PauliString:
    """Ordered product gamma_{mu_1} ... gamma_{mu_k} for strictly increasing indices."""
    indices = tuple(indices)
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"indices must be strictly increasing, got {indices}")
    out = PauliString.identity(n)
    for mu in indices:
        out = pauli_mul(out, majorana(mu, n))
    return out
