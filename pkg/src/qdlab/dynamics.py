"""Evolution engines: closed-form unitary and noisy channels.

Implements pure-state evolution, the single-qubit depolarizing channel in the
Bloch picture, the basis-free symmetric-decoherence channel in any dimension,
and independent per-qubit depolarizing via Pauli-weight damping. Each closed
form is validated in the tests against a generic fixed-step RK4 integrator of
its master equation and a Kraus-map oracle.

Rate convention: gamma is defined so the Bloch vector (or, in d dimensions,
the traceless part of rho) contracts as exp(-gamma t); the Kraus and Lindblad
parameters are derived from that, not vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import qmath, tolerances
from .errors import ResourceLimitError, UnsupportedModelError

MAX_QUBITS = 10


class NoiseKind(Enum):
    NONE = "none"
    QUBIT_DEPOLARIZING = "qubit_depolarizing"
    INDEPENDENT_DEPOLARIZING = "independent_depolarizing"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class NoiseModel:
    """Decoherence specification: a kind plus a nonnegative rate.

    independent_depolarizing additionally declares the qubit count the rate
    applies to (one local channel per qubit).
    """

    kind: NoiseKind = NoiseKind.NONE
    gamma: float = 0.0
    n_qubits: int | None = None

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.kind is NoiseKind.INDEPENDENT_DEPOLARIZING:
            if self.n_qubits is None or self.n_qubits < 1:
                raise ValueError("independent depolarizing requires a qubit count")
            if self.n_qubits > MAX_QUBITS:
                raise ResourceLimitError(f"qubit count {self.n_qubits} exceeds {MAX_QUBITS}")


@dataclass(frozen=True)
class FieldHamiltonian:
    """Qubit Hamiltonian (omega/2) a.sigma for a unit axis a."""

    omega: float
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=float)
        if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > tolerances.NORM:
            raise ValueError("axis must be a unit 3-vector")
        object.__setattr__(self, "axis", tuple(float(x) for x in a))

    def matrix(self) -> np.ndarray:
        return 0.5 * self.omega * qmath.axis_operator(np.asarray(self.axis))


@dataclass(frozen=True)
class EvolutionSpec:
    """A generator, a noise model, and a nonnegative duration."""

    hamiltonian: object  # Hermitian ndarray or FieldHamiltonian
    noise: NoiseModel = field(default_factory=NoiseModel)
    duration: float = 0.0

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be nonnegative")

    def generator_matrix(self) -> np.ndarray:
        if isinstance(self.hamiltonian, FieldHamiltonian):
            return self.hamiltonian.matrix()
        return np.asarray(self.hamiltonian, dtype=complex)


def evolve_pure(psi0, H, t: float) -> np.ndarray:
    """|psi(t)> = exp(-i t H) |psi0>."""
    psi0 = qmath.check_state(psi0)
    H = np.asarray(H, dtype=complex)
    if H.shape != (psi0.size, psi0.size):
        raise ValueError("state and Hamiltonian dimensions do not match")
    return qmath.expm_i(H, t) @ psi0


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """3x3 right-handed rotation by `angle` about the unit vector `axis`."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


def evolve_depolarizing_qubit(P0, field: FieldHamiltonian, gamma: float, t: float) -> np.ndarray:
    """Closed form of dP/dt = omega (a x P) - gamma P.

    The polarization precesses about the field axis at omega while the length
    contracts as exp(-gamma t).
    """
    P0 = qmath.check_bloch(P0)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    R = rotation_about_axis(np.asarray(field.axis), field.omega * t)
    return np.exp(-gamma * t) * (R @ P0)


def evolve_symmetric(rho0, H, gamma: float, t: float) -> np.ndarray:
    """Closed form of drho/dt = -i[H, rho] - gamma (rho - I/d).

    rho(t) = exp(-gamma t) U rho0 U^dag + (1 - exp(-gamma t)) I/d. The
    contraction has no preferred basis, so it commutes with the rotation.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    H = np.asarray(H, dtype=complex)
    d = rho0.shape[0]
    if rho0.shape != (d, d) or H.shape != (d, d):
        raise ValueError("state and Hamiltonian dimensions do not match")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    U = qmath.expm_i(H, t)
    decay = np.exp(-gamma * t)
    return decay * (U @ rho0 @ U.conj().T) + (1.0 - decay) * np.eye(d) / d


def _damp_qubit(rho: np.ndarray, n: int, q: int, decay: float) -> np.ndarray:
    """Damp every Pauli component acting nontrivially on qubit q by `decay`.

    Identity-on-q component of rho is (I_q/2) (x) tr_q rho; the rest is the
    traceless-on-q part, which the local depolarizing channel scales.
    """
    dims = [2] * n
    reduced = qmath.partial_trace(rho, dims, [i for i in range(n) if i != q])
    d_left = 2**q
    d_right = 2 ** (n - q - 1)
    # Reinsert I/2 at position q.
    left = reduced.reshape(d_left, d_right, d_left, d_right)
    id_part = np.einsum("abcd,ef->aebcfd", left, np.eye(2) / 2).reshape(rho.shape)
    return decay * rho + (1.0 - decay) * id_part


def evolve_independent_depolarizing(
    rho0, n_qubits: int, local_field: FieldHamiltonian, gamma: float, t: float
) -> np.ndarray:
    """Identical local precession plus independent depolarizing on each qubit.

    In the Pauli-string expansion of rho0, a coefficient of weight w (number
    of non-identity factors) is multiplied by exp(-w gamma t); the weight
    damping is applied one qubit at a time, and the global product unitary is
    applied on top (the two commute).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if n_qubits > MAX_QUBITS:
        raise ResourceLimitError(f"qubit count {n_qubits} exceeds {MAX_QUBITS}")
    dim = 2**n_qubits
    if rho0.shape != (dim, dim):
        raise ValueError(f"state dimension {rho0.shape[0]} is not 2^{n_qubits}")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")

    u = qmath.expm_i(local_field.matrix(), t)
    U = qmath.tensor(*([u] * n_qubits)) if n_qubits > 1 else u
    rho = U @ rho0 @ U.conj().T
    decay = np.exp(-gamma * t)
    for q in range(n_qubits):
        rho = _damp_qubit(rho, n_qubits, q, decay)
    return rho


def apply_channel(rho0, H, noise: NoiseModel, t: float) -> np.ndarray:
    """Evolve a density matrix under the channel selected by `noise`."""
    rho0 = np.asarray(rho0, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if noise.kind is NoiseKind.NONE:
        U = qmath.expm_i(H, t)
        return U @ rho0 @ U.conj().T
    if noise.kind is NoiseKind.SYMMETRIC:
        return evolve_symmetric(rho0, H, noise.gamma, t)
    if noise.kind is NoiseKind.QUBIT_DEPOLARIZING:
        if rho0.shape != (2, 2):
            raise ValueError("qubit depolarizing requires a single qubit")
        # On a qubit the uniform contraction and the Bloch closed form agree.
        return evolve_symmetric(rho0, H, noise.gamma, t)
    if noise.kind is NoiseKind.INDEPENDENT_DEPOLARIZING:
        n = noise.n_qubits
        # The generator must be a sum of identical local fields; recover the
        # local field from H restricted to one qubit is error prone, so the
        # caller passes a FieldHamiltonian through EvolutionSpec instead.
        raise UnsupportedModelError(
            "independent depolarizing needs evolve_independent_depolarizing "
            "with an explicit local field"
        )
    raise UnsupportedModelError(f"unknown noise kind {noise.kind}")


def evolve(spec: EvolutionSpec, rho0) -> np.ndarray:
    """Dispatch an EvolutionSpec on a density matrix."""
    if spec.noise.kind is NoiseKind.INDEPENDENT_DEPOLARIZING:
        if not isinstance(spec.hamiltonian, FieldHamiltonian):
            raise UnsupportedModelError(
                "independent depolarizing requires a FieldHamiltonian local field"
            )
        return evolve_independent_depolarizing(
            rho0, spec.noise.n_qubits, spec.hamiltonian, spec.noise.gamma, spec.duration
        )
    return apply_channel(rho0, spec.generator_matrix(), spec.noise, spec.duration)


# ---------------------------------------------------------------------------
# Oracles (used by the test suite; kept here so the CLI --check can run them)
# ---------------------------------------------------------------------------


def rk4_integrate(deriv, y0: np.ndarray, t: float, step: float) -> np.ndarray:
    """Classical fixed-step RK4, independent of every closed form above."""
    if t < 0 or step <= 0:
        raise ValueError("need t >= 0 and step > 0")
    y = np.array(y0, dtype=complex if np.iscomplexobj(y0) else float)
    n_steps = int(np.ceil(t / step))
    h = t / n_steps if n_steps else 0.0
    for _ in range(n_steps):
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * h * k1)
        k3 = deriv(y + 0.5 * h * k2)
        k4 = deriv(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def bloch_master_rhs(field: FieldHamiltonian, gamma: float):
    a = np.asarray(field.axis)
    omega = field.omega

    def rhs(P):
        return omega * np.cross(a, P) - gamma * P

    return rhs


def symmetric_master_rhs(H: np.ndarray, gamma: float):
    d = H.shape[0]
    eye = np.eye(d) / d

    def rhs(rho):
        return -1j * (H @ rho - rho @ H) - gamma * (rho - eye)

    return rhs


def independent_master_rhs(local_field: FieldHamiltonian, n: int, gamma: float):
    h = local_field.matrix()
    dims = [2] * n
    terms = []
    for q in range(n):
        ops = [np.eye(2, dtype=complex)] * n
        ops[q] = h
        terms.append(qmath.tensor(*ops) if n > 1 else h)
    H = sum(terms)

    def rhs(rho):
        out = -1j * (H @ rho - rho @ H)
        for q in range(n):
            reduced = qmath.partial_trace(rho, dims, [i for i in range(n) if i != q])
            d_left = 2**q
            d_right = 2 ** (n - q - 1)
            left = reduced.reshape(d_left, d_right, d_left, d_right)
            id_part = np.einsum("abcd,ef->aebcfd", left, np.eye(2) / 2).reshape(rho.shape)
            out = out + gamma * (id_part - rho)
        return out

    return rhs


def depolarizing_kraus(gamma: float, t: float) -> list[np.ndarray]:
    """Single-qubit Kraus set whose Bloch contraction is exp(-gamma t)."""
    p = 1.0 - np.exp(-gamma * t)
    ops = [np.sqrt(1.0 - 3.0 * p / 4.0) * np.eye(2, dtype=complex)]
    ops += [np.sqrt(p / 4.0) * s for s in qmath.PAULIS]
    return ops


def kraus_apply_per_qubit(rho: np.ndarray, n: int, kraus: list[np.ndarray]) -> np.ndarray:
    """Apply a single-qubit Kraus map to every qubit of an n-qubit state."""
    out = rho
    for q in range(n):
        acc = np.zeros_like(out)
        for K in kraus:
            ops = [np.eye(2, dtype=complex)] * n
            ops[q] = K
            Kq = qmath.tensor(*ops) if n > 1 else K
            acc = acc + Kq @ out @ Kq.conj().T
        out = acc
    return out
