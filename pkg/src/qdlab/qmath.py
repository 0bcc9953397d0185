"""Dense complex linear-algebra kernels for small Hilbert spaces.

Eigendecompositions, matrix exponentials of Hermitian generators, tensor
products, partial traces, the trace norm, and Bloch-vector conversions.
Everything works on plain complex ndarrays; the role of a matrix (Hermitian,
unitary, density) is enforced by the check_* validators rather than a wrapper
class. hbar = 1 throughout and all entries are dimensionless.

Conventions:
  - time evolution is U(t) = exp(-i t H)
  - Pauli matrices are the standard ones, sigma_z = diag(1, -1)
  - unitary eigenvalue arguments live on (-pi, pi], with values within
    BRANCH_FOLD of -pi folded to +pi
"""

from __future__ import annotations

import numpy as np

from . import tolerances

# Standard qubit operators and states.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
I2 = np.eye(2, dtype=complex)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)

# Bell basis: phi+/phi- have even parity, psi+/psi- odd parity.
BELL_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
BELL_PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
BELL_PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
BELL_PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def _as_square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {M.shape}")
    return M


def is_hermitian(M, atol: float = tolerances.SPECTRAL) -> bool:
    M = _as_square(M)
    return bool(np.max(np.abs(M - M.conj().T)) <= atol)


def is_unitary(U, atol: float = tolerances.ALGEBRAIC) -> bool:
    U = _as_square(U)
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= atol)


def is_density(rho, atol: float = tolerances.ALGEBRAIC) -> bool:
    rho = _as_square(rho)
    if not is_hermitian(rho, atol):
        return False
    if abs(np.trace(rho) - 1.0) > atol:
        return False
    return bool(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -atol)


def check_state(psi, atol: float = tolerances.NORM) -> np.ndarray:
    """Validate a pure-state vector (unit norm) and return it as complex."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise ValueError("state must be a nonempty vector")
    if abs(np.vdot(psi, psi).real - 1.0) > atol:
        raise ValueError("state is not normalized")
    return psi


def check_bloch(P, atol: float = tolerances.ALGEBRAIC) -> np.ndarray:
    """Validate a Bloch vector (|P| <= 1) and return it as float."""
    P = np.asarray(P, dtype=float)
    if P.shape != (3,):
        raise ValueError("Bloch vector must have exactly three components")
    if np.linalg.norm(P) > 1.0 + atol:
        raise ValueError(f"Bloch vector length {np.linalg.norm(P)} exceeds 1")
    return P


def herm_eig(M):
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized via (M + M^dag)/2 before the decomposition.
    Returns (eigenvalues ascending, eigenvectors as orthonormal columns)
    with M = V diag(w) V^dag.
    """
    M = _as_square(M)
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    return w, V


def expm_i(H, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H, exact on the eigenbasis."""
    w, V = herm_eig(H)
    return (V * np.exp(-1j * t * w)) @ V.conj().T


def unitary_args(U, atol: float = tolerances.SPECTRAL) -> np.ndarray:
    """Eigenvalue arguments of a unitary, ascending, on (-pi, pi].

    Eigenvalue moduli must be within `atol` of 1; arguments within
    BRANCH_FOLD of -pi are folded to +pi.
    """
    U = _as_square(U)
    lam = np.linalg.eigvals(U)
    moduli = np.abs(lam)
    if np.max(np.abs(moduli - 1.0)) > atol:
        raise ValueError("matrix is not unitary: eigenvalue moduli deviate from 1")
    args = np.angle(lam / moduli)
    args[args <= -np.pi + tolerances.BRANCH_FOLD] = np.pi
    return np.sort(args)


def tensor(*ops) -> np.ndarray:
    """Kronecker product of matrices (or of state vectors)."""
    if not ops:
        raise ValueError("tensor needs at least one factor")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in `keep`.

    dims lists the subsystem dimensions in tensor order; keep is an iterable
    of subsystem indices to retain (original order preserved).
    """
    rho = _as_square(rho)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"subsystem dims {dims} do not multiply to {rho.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError("keep indices out of range")
    n = len(dims)
    reshaped = rho.reshape(dims + dims)
    # Contract row/column indices of every traced-out subsystem.
    for k in reversed([i for i in range(n) if i not in keep]):
        reshaped = np.trace(reshaped, axis1=k, axis2=k + reshaped.ndim // 2)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reshaped.reshape(d_keep, d_keep)


def trace_norm(M) -> float:
    """Sum of |eigenvalues| of a Hermitian matrix."""
    w, _ = herm_eig(M)
    return float(np.sum(np.abs(w)))


def bloch_to_density(P) -> np.ndarray:
    """rho = (I + P.sigma)/2; requires |P| <= 1."""
    P = check_bloch(P)
    return 0.5 * (I2 + P[0] * SIGMA_X + P[1] * SIGMA_Y + P[2] * SIGMA_Z)


def density_to_bloch(rho) -> np.ndarray:
    """Polarization vector (tr rho sigma_x, tr rho sigma_y, tr rho sigma_z)."""
    rho = _as_square(rho)
    if rho.shape != (2, 2):
        raise ValueError("Bloch conversion is defined for 2x2 densities only")
    return np.array([np.trace(rho @ s).real for s in PAULIS])


def axis_operator(axis) -> np.ndarray:
    """a . sigma for a unit 3-vector a."""
    a = np.asarray(axis, dtype=float)
    if a.shape != (3,):
        raise ValueError("axis must have three components")
    if abs(np.linalg.norm(a) - 1.0) > tolerances.NORM:
        raise ValueError("axis must be a unit vector")
    return a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z


def basis_state(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e


def sup_norm(H) -> float:
    """Operator sup norm of a Hermitian matrix: max |eigenvalue|."""
    w, _ = herm_eig(H)
    return float(np.max(np.abs(w)))
