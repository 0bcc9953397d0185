"""Adaptive bitwise frequency estimation.

A single probe qubit is exposed to the field for exponentially staged times;
after each exposure a classically controlled phase correction removes the
already-measured bits and a +/- basis measurement reads the next bit, from the
least significant upward. This measures the frequency to n bits using n
single-qubit measurements, and its outcome statistics coincide exactly with a
discrete-Fourier-transform measurement on the corresponding n-qubit product
state.

Phase bookkeeping follows the package-wide convention U(t) = exp(-i t H) with
H = (omega/2) sigma_z, under which (|0> + |1>)/sqrt(2) acquires the relative
phase e^{+i omega t} on |1>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

MAX_PREPARE_QUBITS = 12


@dataclass(frozen=True)
class PhaseConfig:
    """Number of bits to estimate and the true frequency in [0, 1)."""

    n: int
    omega: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one bit")
        if not 0.0 <= self.omega < 1.0:
            raise ValueError("omega must lie in [0, 1)")

    def exposure_time(self, k: int) -> float:
        """Exposure for the k-th bit (k = n down to 1): pi 2^k."""
        return math.pi * (2.0**k)


@dataclass(frozen=True)
class MeasurementRecord:
    """Bits in measurement order (least significant first) and the estimate."""

    bits: tuple[int, ...]

    @property
    def estimate(self) -> float:
        # bits[0] is omega_n (LSB), bits[-1] is omega_1 (MSB).
        n = len(self.bits)
        return sum(b * 2.0 ** -(n - i) for i, b in enumerate(self.bits))


def sqft_estimate(cfg: PhaseConfig, rng_seed: int) -> MeasurementRecord:
    """Run the adaptive protocol once and return the measured record.

    At stage k the probe phase is pi * (2^k omega mod 2); the known tail
    0.b_{k+1}...b_n is subtracted by a controlled phase before the +/-
    measurement, leaving a deterministic outcome whenever omega terminates
    within n bits.
    """
    rng = np.random.default_rng(rng_seed)
    n, omega = cfg.n, cfg.omega
    bits_rev: list[int] = []  # b_n, b_{n-1}, ..., collected in this order
    tail = 0.0  # 0.b_{k+1}...b_n as a binary fraction
    for k in range(n, 0, -1):
        phase = math.pi * math.fmod((2.0**k) * omega, 2.0)
        corrected = phase - math.pi * tail
        p_plus = math.cos(corrected / 2.0) ** 2
        bit = int(rng.random() >= p_plus)
        bits_rev.append(bit)
        tail = 0.5 * (bit + tail)
    return MeasurementRecord(bits=tuple(bits_rev))


def outcome_prob(omega: float, omega_tilde: float, n: int) -> float:
    """Probability that the n-bit protocol returns the estimate omega_tilde.

    Closed form of |2^-n sum_y exp(-2 pi i y (omega - omega_tilde))|^2:
    sin^2(2^n pi d) / (2^{2n} sin^2(pi d)) with d = omega - omega_tilde and
    the d -> 0 limit equal to 1.
    """
    if n < 1:
        raise ValueError("need at least one bit")
    N = 2**n
    delta = omega - omega_tilde
    s = math.sin(math.pi * delta)
    if abs(s) < 1e-15:
        return 1.0
    return (math.sin(N * math.pi * delta) / (N * s)) ** 2


def exact_distribution(cfg: PhaseConfig) -> np.ndarray:
    """outcome_prob evaluated on every n-bit estimate j / 2^n."""
    N = 2**cfg.n
    return np.array([outcome_prob(cfg.omega, j / N, cfg.n) for j in range(N)])


def phase_state(N: int, j: int) -> np.ndarray:
    """|phi_j> = N^{-1/2} sum_k e^{i k phi} |k> with phi = 2 pi j / N."""
    if not 0 <= j < N:
        raise ValueError("phase index out of range")
    k = np.arange(N)
    return np.exp(2j * math.pi * j * k / N) / math.sqrt(N)


def dft_matrix(N: int) -> np.ndarray:
    """Unitary DFT, F[k, j] = e^{2 pi i k j / N} / sqrt(N); columns are the
    phase states."""
    k = np.arange(N)
    return np.exp(2j * math.pi * np.outer(k, k) / N) / math.sqrt(N)


def multi_qubit_prepare(cfg: PhaseConfig) -> np.ndarray:
    """Product state whose DFT measurement reproduces the adaptive protocol.

    Qubit k (k = 0..n-1) is exposed for time 2 pi 2^k, giving the state
    2^{-n/2} sum_y e^{2 pi i omega y} |y>.
    """
    if cfg.n > MAX_PREPARE_QUBITS:
        raise ResourceLimitError(f"{cfg.n} qubits exceeds {MAX_PREPARE_QUBITS}")
    y = np.arange(2**cfg.n)
    return np.exp(2j * math.pi * cfg.omega * y) / math.sqrt(2**cfg.n)


def dft_measurement_distribution(cfg: PhaseConfig) -> np.ndarray:
    """|amplitudes|^2 after projecting the product state onto the phase
    basis; equals exact_distribution."""
    psi = multi_qubit_prepare(cfg)
    amps = dft_matrix(2**cfg.n).conj().T @ psi
    return np.abs(amps) ** 2


def total_exposure_time(cfg: PhaseConfig) -> float:
    """Sum of the staged exposures, < 2 pi 2^n."""
    return sum(cfg.exposure_time(k) for k in range(1, cfg.n + 1))
