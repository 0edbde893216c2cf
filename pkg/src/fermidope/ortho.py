"""Real-matrix toolkit for the Majorana picture.

Covers the antisymmetric normal form C = O (sum_j lambda_j iY) O^T, the
orthogonal/symplectic predicates, the unitary <-> symplectic-orthogonal
isomorphism, plane-rotation (Givens) decompositions of O(2n), and the
rotation that maps a given set of vectors into the span of the leading
canonical basis vectors.

The symplectic form is fixed as Omega = blkdiag([[0, 1], [-1, 0]], ...),
i.e. Majorana indices 2k-1, 2k sit in adjacent rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_IY2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def opnorm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(a, 2))


def omega(n: int) -> np.ndarray:
    """The 2n x 2n symplectic form, blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n), _IY2)


def is_antisymmetric(c: np.ndarray, tol: float = 1e-12) -> bool:
    c = np.asarray(c, dtype=float)
    return c.shape[0] == c.shape[1] and opnorm(c + c.T) <= tol * max(1.0, opnorm(c))


def is_orthogonal(o: np.ndarray, tol: float = 1e-10) -> bool:
    o = np.asarray(o, dtype=float)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        return False
    return opnorm(o.T @ o - np.eye(o.shape[0])) <= tol


def is_symplectic(o: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff O preserves the symplectic form: O Omega O^T = Omega."""
    o = np.asarray(o, dtype=float)
    d = o.shape[0]
    if d % 2 != 0:
        return False
    w = omega(d // 2)
    return opnorm(o @ w @ o.T - w) <= tol


def normal_eigenvalues(c: np.ndarray) -> np.ndarray:
    """Nonnegative normal eigenvalues of an antisymmetric matrix, ascending."""
    c = _checked_antisymmetric(c)
    n = c.shape[0] // 2
    s = np.linalg.eigvalsh(1j * c)
    return np.maximum(s[n:], 0.0)


def _checked_antisymmetric(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] % 2 != 0:
        raise ValueError(f"expected a square even-dimensional matrix, got {c.shape}")
    if not is_antisymmetric(c):
        raise ValueError("matrix is not antisymmetric within tolerance")
    return (c - c.T) / 2.0


@dataclass(frozen=True)
class NormalForm:
    """C = O Lambda O^T with Lambda = blkdiag(lambda_j * [[0,1],[-1,0]])."""

    O: np.ndarray
    lambdas: np.ndarray

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def lambda_matrix(self) -> np.ndarray:
        return np.kron(np.diag(self.lambdas), _IY2)

    def reconstruct(self) -> np.ndarray:
        return self.O @ self.lambda_matrix() @ self.O.T


def _orthonormalize_against(v: np.ndarray, basis: list, accept: float) -> np.ndarray | None:
    """Two-pass modified Gram-Schmidt; None when v lies in span(basis)."""
    v = np.array(v)
    for _ in range(2):
        for b in basis:
            v = v - b * (np.conj(b) @ v)
    norm = np.linalg.norm(v)
    if norm < accept:
        return None
    return v / norm


def normal_form(c: np.ndarray, zero_tol: float = 1e-10) -> NormalForm:
    """Decompose an antisymmetric matrix via the Hermitian eigenproblem of iC.

    Eigenvectors of iC for eigenvalue +lambda come in conjugate pairs with
    -lambda; the real and imaginary parts of each +lambda eigenvector span
    one 2-plane of O.  Planes whose lambda is below ``zero_tol`` cannot be
    paired reliably (the +/-lambda eigenspaces merge numerically), so they
    are filled with an orthonormal completion; any completion is valid
    there because Lambda vanishes on those planes.
    """
    c = _checked_antisymmetric(c)
    d = c.shape[0]
    n = d // 2
    s, w = np.linalg.eigh(1j * c)
    lambdas = np.maximum(s[n:], 0.0)

    columns: list = []
    deferred: list = []
    for j in range(n):
        if lambdas[j] > zero_tol:
            vec = w[:, n + j]
            columns.append(np.sqrt(2.0) * vec.imag)  # o_{2j-1}
            columns.append(np.sqrt(2.0) * vec.real)  # o_{2j}
            deferred.append(None)
        else:
            columns.append(None)
            columns.append(None)
            deferred.append(j)

    missing = [i for i, col in enumerate(columns) if col is None]
    if missing:
        present = [col for col in columns if col is not None]
        # candidates spanning the kernel: real/imag parts of small-eigenvalue
        # eigenvectors, with canonical vectors as a fallback
        candidates = []
        for j in range(d):
            if abs(s[j]) <= zero_tol:
                candidates.append(w[:, j].real)
                candidates.append(w[:, j].imag)
        candidates.extend(np.eye(d))
        fills: list = []
        for cand in candidates:
            if len(fills) == len(missing):
                break
            v = _orthonormalize_against(cand, present + fills, accept=0.3)
            if v is not None:
                fills.append(v)
        if len(fills) < len(missing):
            raise np.linalg.LinAlgError("could not complete the zero-eigenvalue planes")
        for i, v in zip(missing, fills):
            columns[i] = v

    o = np.column_stack(columns)
    nf = NormalForm(O=o, lambdas=lambdas)
    if opnorm(o.T @ o - np.eye(d)) > 1e-9:
        raise np.linalg.LinAlgError("normal form produced a non-orthogonal basis")
    if opnorm(nf.reconstruct() - c) > 1e-8 * max(1.0, opnorm(c)):
        raise np.linalg.LinAlgError("normal form reconstruction residual too large")
    return nf


def symplectic_from_unitary(u: np.ndarray) -> np.ndarray:
    """Embed u in U(n) as the orthogonal symplectic Re(u) (x) I + Im(u) (x) iY."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if u.shape != (n, n) or opnorm(u.conj().T @ u - np.eye(n)) > 1e-10:
        raise ValueError("input is not unitary within tolerance")
    return np.kron(u.real, np.eye(2)) + np.kron(u.imag, _IY2)


def unitary_from_symplectic(o: np.ndarray) -> np.ndarray:
    """Inverse of symplectic_from_unitary."""
    o = np.asarray(o, dtype=float)
    if not is_orthogonal(o) or not is_symplectic(o):
        raise ValueError("input is not symplectic orthogonal within tolerance")
    u = o[0::2, 0::2] + 1j * o[0::2, 1::2]
    return u


def real_to_complex(w: np.ndarray) -> np.ndarray:
    """Pair the coordinates of w in R^2n as (w1 - i*w2, w3 - i*w4, ...).

    Under this pairing, symplectic_from_unitary(u) acts on R^2n exactly as
    u acts on C^n.
    """
    w = np.asarray(w, dtype=float)
    return w[0::2] - 1j * w[1::2]


def compression_rotation(vectors, n: int | None = None, symplectic: bool = True) -> np.ndarray:
    """Orthogonal O mapping the given unit vectors into a leading-coordinate span.

    With M input vectors in R^(2n), the output satisfies e_i^T O v_j = 0 for
    every j and every i > 2M (symplectic=True, requires M <= n) or i > M
    (symplectic=False, requires M <= 2n).  The symplectic variant preserves
    the form Omega; it is built through the unitary side of the isomorphism.
    """
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if n is None:
        if not vectors:
            raise ValueError("dimension is required when no vectors are given")
        n = len(vectors[0]) // 2
    d = 2 * n
    m = len(vectors)
    limit = n if symplectic else d
    if m > limit:
        raise ValueError(f"too many vectors: {m} > {limit}")
    for v in vectors:
        if v.shape != (d,):
            raise ValueError(f"expected vectors of length {d}")
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("vectors must have unit norm")

    if symplectic:
        dim, cand_pool = n, [real_to_complex(v) for v in vectors]
    else:
        dim, cand_pool = d, list(vectors)

    basis: list = []
    for v in cand_pool:
        u = _orthonormalize_against(v, basis, accept=1e-9)
        if u is not None:  # dependent vectors shrink the span, which is allowed
            basis.append(u)
    for cand in np.eye(dim):
        if len(basis) == dim:
            break
        u = _orthonormalize_against(cand, basis, accept=0.3)
        if u is not None:
            basis.append(u)
    if len(basis) != dim:
        raise np.linalg.LinAlgError("basis completion failed")
    g = np.column_stack(basis)

    if symplectic:
        o = symplectic_from_unitary(g.conj().T)
    else:
        o = g.T
    span = 2 * m if symplectic else m
    for v in vectors:
        mapped = o @ v
        if np.max(np.abs(mapped[span:]), initial=0.0) > 1e-9:
            raise np.linalg.LinAlgError("compression rotation left residual outside the span")
    return o


@dataclass(frozen=True)
class GivensProgram:
    """Plane rotations realizing an orthogonal matrix.

    The reconstruction applies the reflection first (when ``reflect_first``),
    then the rotations in list order:  O = R_m ... R_1 D, with D = I or
    diag(1, -1, ..., -1).  Planes are 1-based (Majorana indices).
    """

    dim: int
    rotations: tuple
    reflect_first: bool = False

    def matrix(self) -> np.ndarray:
        out = reflection_matrix(self.dim) if self.reflect_first else np.eye(self.dim)
        for mu, nu, theta in self.rotations:
            out = plane_rotation(self.dim, mu, nu, theta) @ out
        return out


def plane_rotation(dim: int, mu: int, nu: int, theta: float) -> np.ndarray:
    """Rotation by theta in the (mu, nu) coordinate plane, 1-based indices."""
    out = np.eye(dim)
    c, s = np.cos(theta), np.sin(theta)
    i, j = mu - 1, nu - 1
    out[i, i] = c
    out[i, j] = s
    out[j, i] = -s
    out[j, j] = c
    return out


def reflection_matrix(dim: int) -> np.ndarray:
    """diag(1, -1, ..., -1): the Heisenberg action of the gamma_1 gate."""
    out = -np.eye(dim)
    out[0, 0] = 1.0
    return out


def givens_decompose(o: np.ndarray, tol: float = 1e-10) -> GivensProgram:
    """Factor an orthogonal matrix into at most d(d-1)/2 plane rotations."""
    o = np.asarray(o, dtype=float)
    d = o.shape[0]
    if not is_orthogonal(o, tol):
        raise ValueError("input is not orthogonal within tolerance")
    reflect = np.linalg.det(o) < 0
    a = (o @ reflection_matrix(d)) if reflect else o.copy()

    eliminations = []  # E_k ... E_1 A = I, each E = plane_rotation(j, i, theta)
    for j in range(d - 1):
        for i in range(j + 1, d):
            if abs(a[i, j]) < 1e-15 and a[j, j] > 0:
                continue
            theta = np.arctan2(a[i, j], a[j, j])
            c, s = np.cos(theta), np.sin(theta)
            rj, ri = a[j].copy(), a[i].copy()
            a[j] = c * rj + s * ri
            a[i] = -s * rj + c * ri
            eliminations.append((j + 1, i + 1, theta))
    if opnorm(a - np.eye(d)) > 1e-8:
        raise np.linalg.LinAlgError("Givens elimination did not reach the identity")
    rotations = tuple((mu, nu, -theta) for mu, nu, theta in reversed(eliminations))
    return GivensProgram(dim=d, rotations=rotations, reflect_first=bool(reflect))


def random_orthogonal(dim: int, rng, haar: bool = True) -> np.ndarray:
    """Haar-random element of O(dim), or of SO(dim) when haar=False."""
    if dim % 2 != 0:
        raise ValueError(f"dimension must be even, got {dim}")
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if not haar and np.linalg.det(q) < 0:
        q[:, [0, 1]] = q[:, [1, 0]]
    return q


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar-random element of U(dim)."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_antisymmetric(dim: int, rng, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(dim, dim))
    a = (a - a.T) / 2.0
    return scale * a


def matrix_to_text(a: np.ndarray) -> str:
    """Row-major decimal text; repr floats reload bit-exactly."""
    return "\n".join(" ".join(repr(float(x)) for x in row) for row in np.asarray(a)) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    rows = [[float(x) for x in line.split()] for line in text.splitlines() if line.strip()]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("malformed matrix text")
    return np.array(rows)
