"""Decision theory for distinguishing Hamiltonians and channels.

Helstrom-optimal binary measurements, entanglement-assisted discrimination of
field directions, perfect two-alternative discrimination by cancellation
driving, optimal probe states at fixed time, adaptive pairwise elimination,
and information-gain accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import qmath, tolerances
from .dynamics import FieldHamiltonian, NoiseKind, NoiseModel, apply_channel
from .errors import NoDiscriminationError, UnsupportedModelError


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hypothesis:
    """One candidate generator with its noise model and prior probability."""

    generator: object  # Hermitian ndarray or FieldHamiltonian
    noise: NoiseModel = field(default_factory=NoiseModel)
    prior: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.prior <= 1.0:
            raise ValueError("prior must lie in [0, 1]")

    def generator_matrix(self) -> np.ndarray:
        if isinstance(self.generator, FieldHamiltonian):
            return self.generator.matrix()
        return np.asarray(self.generator, dtype=complex)


@dataclass(frozen=True)
class HypothesisEnsemble:
    hypotheses: tuple[Hypothesis, ...]

    def __post_init__(self):
        hyps = tuple(self.hypotheses)
        object.__setattr__(self, "hypotheses", hyps)
        if len(hyps) < 2:
            raise ValueError("an ensemble needs at least two hypotheses")
        if abs(sum(h.prior for h in hyps) - 1.0) > tolerances.NORM:
            raise ValueError("priors must sum to 1")
        dims = {h.generator_matrix().shape[0] for h in hyps}
        if len(dims) != 1:
            raise ValueError("all generators must share one dimension")

    def __len__(self) -> int:
        return len(self.hypotheses)

    @property
    def dim(self) -> int:
        return self.hypotheses[0].generator_matrix().shape[0]


@dataclass(frozen=True)
class BinaryPOVM:
    """Two-outcome POVM {E, I - E} with 0 <= E <= I."""

    projector: np.ndarray

    def __post_init__(self):
        E = np.asarray(self.projector, dtype=complex)
        w = np.linalg.eigvalsh((E + E.conj().T) / 2)
        if w.min() < -tolerances.ALGEBRAIC or w.max() > 1.0 + tolerances.ALGEBRAIC:
            raise ValueError("POVM element eigenvalues must lie in [0, 1]")
        object.__setattr__(self, "projector", E)

    @property
    def complement(self) -> np.ndarray:
        return np.eye(self.projector.shape[0]) - self.projector


@dataclass(frozen=True)
class DiscriminationResult:
    p_error: float
    info_bits: float
    t_star: float
    measurement: object  # BinaryPOVM or an orthonormal-basis ndarray


# ---------------------------------------------------------------------------
# Scalar optimization shared with the metrology module
# ---------------------------------------------------------------------------


def grid_golden_minimize(
    fn, t_max: float, grid_points: int = 2048, rel_tol: float = 1e-9, vectorized: bool = False
):
    """Minimize a smooth scalar function on (0, t_max].

    A dense grid pre-scan brackets the global minimum (guarding against
    landing in the wrong lobe of an oscillatory objective); golden-section
    then refines to `rel_tol` relative accuracy in t. Returns (t, fn(t)).
    Pass vectorized=True when fn accepts ndarray input for the pre-scan.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    ts = np.linspace(t_max / grid_points, t_max, grid_points)
    vals = np.asarray(fn(ts)) if vectorized else np.array([fn(t) for t in ts])
    i = int(np.argmin(vals))
    lo = ts[i - 1] if i > 0 else ts[0] / 2
    hi = ts[i + 1] if i + 1 < len(ts) else t_max

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > rel_tol * max(1.0, abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    t = (a + b) / 2
    return t, fn(t)


# ---------------------------------------------------------------------------
# Binary decisions
# ---------------------------------------------------------------------------


def helstrom(rho1, rho2, p1: float = 0.5, p2: float = 0.5):
    """Minimum-error two-outcome measurement for a pair of density matrices.

    The optimal element projects onto the positive-eigenvalue subspace of
    p1 rho1 - p2 rho2; the achieved error is 1/2 - 1/2 tr|p1 rho1 - p2 rho2|.
    Returns (BinaryPOVM, p_error).
    """
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise ValueError("state dimensions do not match")
    if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1.0) > tolerances.NORM:
        raise ValueError("priors must be nonnegative and sum to 1")
    delta = p1 * rho1 - p2 * rho2
    w, V = qmath.herm_eig(delta)
    pos = V[:, w > 0]
    E = pos @ pos.conj().T
    p_error = 0.5 - 0.5 * float(np.sum(np.abs(w)))
    return BinaryPOVM(E), float(min(max(p_error, 0.0), 1.0))


def binary_entropy(p: float) -> float:
    p = min(max(float(p), 0.0), 1.0)
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def binary_info_gain(p_error: float) -> float:
    """1 - H2(p_error), the gain of a symmetric binary channel in bits.

    Values in (1/2, 1] are reflected onto [0, 1/2); inputs outside [0, 1]
    are rejected.
    """
    if not 0.0 <= p_error <= 1.0:
        raise ValueError("p_error must lie in [0, 1]")
    if p_error > 0.5:
        p_error = 1.0 - p_error
    return 1.0 - binary_entropy(p_error)


def mutual_information(joint: np.ndarray) -> float:
    """I(X;Y) in bits from a joint probability table p[x, y]."""
    joint = np.asarray(joint, dtype=float)
    joint = np.clip(joint, 0.0, None)
    total = joint.sum()
    if total <= 0:
        return 0.0
    joint = joint / total
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    denom = px @ py
    return float(np.sum(joint[mask] * np.log2(joint[mask] / denom[mask])))


def measurement_mutual_information(povm_elements, states, priors) -> float:
    """Mutual information between a hypothesis and a POVM outcome."""
    joint = np.array(
        [
            [p * float(np.trace(E @ rho).real) for E in povm_elements]
            for rho, p in zip(states, priors)
        ]
    )
    return mutual_information(joint)


def _hypothesis_state(hyp: Hypothesis, rho0: np.ndarray, t: float) -> np.ndarray:
    from . import dynamics

    if hyp.noise.kind is NoiseKind.INDEPENDENT_DEPOLARIZING:
        if not isinstance(hyp.generator, FieldHamiltonian):
            raise UnsupportedModelError(
                "independent depolarizing hypotheses need a FieldHamiltonian"
            )
        return dynamics.evolve_independent_depolarizing(
            rho0, hyp.noise.n_qubits, hyp.generator, hyp.noise.gamma, t
        )
    return apply_channel(rho0, hyp.generator_matrix(), hyp.noise, t)


def discriminate_superops(ensemble: HypothesisEnsemble, psi0, t: float) -> DiscriminationResult:
    """Evolve one probe state under each of two candidate channels, then
    perform the minimum-error measurement on the outputs."""
    if len(ensemble) != 2:
        raise ValueError("exactly two hypotheses are required")
    psi0 = qmath.check_state(psi0)
    rho0 = np.outer(psi0, psi0.conj())
    h1, h2 = ensemble.hypotheses
    out1 = _hypothesis_state(h1, rho0, t)
    out2 = _hypothesis_state(h2, rho0, t)
    povm, p_error = helstrom(out1, out2, h1.prior, h2.prior)
    info = measurement_mutual_information(
        [povm.projector, povm.complement], [out1, out2], [h1.prior, h2.prior]
    )
    return DiscriminationResult(p_error=p_error, info_bits=info, t_star=t, measurement=povm)


def optimal_time_qubit(omega: float, gamma: float) -> float:
    """Measurement time maximizing the gain for a precessing, damped qubit.

    Smallest t > 0 with tan(omega t / 2) = omega / (2 gamma); the undamped
    limit is the half-turn pi/omega.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0:
        return math.pi / omega
    return (2.0 / omega) * math.atan(omega / (2.0 * gamma))


# ---------------------------------------------------------------------------
# Entangled probes for field directions
# ---------------------------------------------------------------------------


def superdense_probe_state(a_hat, t: float) -> np.ndarray:
    """Expose one member of a Bell pair to the field a.sigma for time t.

    exp(-i t (a.sigma (x) I)) |phi+> expanded in the Bell basis:
    cos t |phi+> - i sin t (a_x |psi+> - i a_y |psi-> + a_z |phi->).
    """
    a = np.asarray(a_hat, dtype=float)
    if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > tolerances.ALGEBRAIC:
        raise ValueError("field axis must be a unit vector")
    return (
        math.cos(t) * qmath.BELL_PHI_PLUS
        - 1j
        * math.sin(t)
        * (
            a[0] * qmath.BELL_PSI_PLUS
            - 1j * a[1] * qmath.BELL_PSI_MINUS
            + a[2] * qmath.BELL_PHI_MINUS
        )
    )


def superdense_overlap(a_hat, b_hat, t: float) -> complex:
    """Inner product of the probe states for two field axes:
    cos^2 t + (a.b) sin^2 t. Vanishes iff a.b = -cot^2 t."""
    a = np.asarray(a_hat, dtype=float)
    b = np.asarray(b_hat, dtype=float)
    for v in (a, b):
        if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > tolerances.ALGEBRAIC:
            raise ValueError("field axes must be unit vectors")
    return complex(math.cos(t) ** 2 + float(a @ b) * math.sin(t) ** 2)


def symmetric_directions(n: int, cos_theta: float) -> list[np.ndarray]:
    """n unit vectors with all pairwise inner products equal to cos_theta.

    n = 2: two vectors in the x-z plane. n = 3: a cone about z with
    threefold symmetry (planar for cos_theta = -1/2). n = 4: z plus a cone,
    which requires the tetrahedral value cos_theta = -1/3.
    """
    if n == 2:
        theta = math.acos(cos_theta)
        return [
            np.array([math.sin(theta / 2), 0.0, math.cos(theta / 2)]),
            np.array([-math.sin(theta / 2), 0.0, math.cos(theta / 2)]),
        ]
    if n == 3:
        cos2_alpha = (2.0 * cos_theta + 1.0) / 3.0
        if cos2_alpha < 0:
            raise ValueError(f"no threefold-symmetric cone with cos_theta={cos_theta}")
        ca = math.sqrt(cos2_alpha)
        sa = math.sqrt(1.0 - cos2_alpha)
        return [
            np.array([sa * math.cos(2 * math.pi * k / 3), sa * math.sin(2 * math.pi * k / 3), ca])
            for k in range(3)
        ]
    if n == 4:
        if abs(cos_theta + 1.0 / 3.0) > 1e-9:
            raise ValueError("four equiangular directions require cos_theta = -1/3")
        dirs = [np.array([0.0, 0.0, 1.0])]
        sa = math.sqrt(1.0 - 1.0 / 9.0)
        for k in range(3):
            phi = 2 * math.pi * k / 3
            dirs.append(np.array([sa * math.cos(phi), sa * math.sin(phi), -1.0 / 3.0]))
        return dirs
    raise ValueError("supported direction counts are 2, 3, 4")


def trine_discriminate(directions, priors=None) -> DiscriminationResult:
    """Distinguish equiangular field directions with an entangled probe.

    For 3 or 4 directions with pairwise inner product cos_theta in [-1/2, 0]
    (or exactly -1/3 for 4), evolving one half of a Bell pair for the time
    with cot^2 t = -cos_theta makes the probe states mutually orthogonal; an
    orthogonal measurement in that state basis then identifies the direction
    with certainty. The degenerate 2-direction case picks the time minimizing
    the overlap and falls back to the minimum-error binary measurement.
    """
    dirs = [np.asarray(d, dtype=float) for d in directions]
    n = len(dirs)
    if n not in (2, 3, 4):
        raise ValueError("supported direction counts are 2, 3, 4")
    for d in dirs:
        if d.shape != (3,) or abs(np.linalg.norm(d) - 1.0) > 1e-9:
            raise ValueError("directions must be unit vectors")
    if priors is None:
        priors = [1.0 / n] * n
    priors = [float(p) for p in priors]
    if abs(sum(priors) - 1.0) > tolerances.NORM:
        raise ValueError("priors must sum to 1")

    dots = [float(dirs[i] @ dirs[j]) for i in range(n) for j in range(i + 1, n)]
    cos_theta = dots[0]
    if max(dots) - min(dots) > 1e-9:
        raise ValueError("pairwise inner products must be equal")

    if n == 2:
        # Minimize |cos^2 t + cos_theta sin^2 t| over a quarter period.
        t_star, _ = grid_golden_minimize(
            lambda t: abs(superdense_overlap(dirs[0], dirs[1], t)), math.pi / 2
        )
        psi = [superdense_probe_state(d, t_star) for d in dirs]
        povm, p_error = helstrom(
            np.outer(psi[0], psi[0].conj()), np.outer(psi[1], psi[1].conj()), priors[0], priors[1]
        )
        info = measurement_mutual_information(
            [povm.projector, povm.complement],
            [np.outer(p, p.conj()) for p in psi],
            priors,
        )
        return DiscriminationResult(p_error, info, t_star, povm)

    if n == 3 and not -0.5 - 1e-9 <= cos_theta <= 1e-9:
        raise ValueError("three directions need cos_theta in [-1/2, 0]")
    if n == 4 and abs(cos_theta + 1.0 / 3.0) > 1e-9:
        raise ValueError("four directions need cos_theta = -1/3")

    t_star = math.atan(1.0 / math.sqrt(-cos_theta)) if cos_theta < 0 else math.pi / 2
    states = [superdense_probe_state(d, t_star) for d in dirs]

    # The evolved states are orthonormal by construction; complete them to a
    # basis of the two-qubit space so the measurement is a full von Neumann one.
    basis = np.zeros((4, 4), dtype=complex)
    basis[:, :n] = np.column_stack(states)
    if n < 4:
        # Deterministic completion: eigenvectors of the complement projector.
        comp = np.eye(4, dtype=complex)
        for k in range(n):
            comp -= np.outer(states[k], states[k].conj())
        w, V = np.linalg.eigh(comp)
        basis[:, n:] = V[:, w > 0.5][:, : 4 - n]

    probs = np.abs(basis.conj().T @ np.column_stack(states)) ** 2  # p[outcome, hyp]
    joint = probs.T * np.asarray(priors)[:, None]
    success = sum(priors[a] * probs[a, a] for a in range(n))
    p_error = float(min(max(1.0 - success, 0.0), 1.0))
    info = mutual_information(joint)
    return DiscriminationResult(p_error, info, t_star, basis)


# ---------------------------------------------------------------------------
# Two alternatives: cancellation driving and fixed-time optima
# ---------------------------------------------------------------------------


def cancellation_strategy(H1, H2):
    """Drive with -H2 and split the extremal eigenstates of H1 - H2.

    Returns (drive, psi0, t_star): the probe (|E_min> + |E_max>)/sqrt(2) of
    the difference evolves to its orthogonal partner after
    t_star = pi / (E_max - E_min), so the two alternatives separate exactly.
    """
    H1 = np.asarray(H1, dtype=complex)
    H2 = np.asarray(H2, dtype=complex)
    if H1.shape != H2.shape:
        raise ValueError("Hamiltonian dimensions do not match")
    w, V = qmath.herm_eig(H1 - H2)
    gap = float(w[-1] - w[0])
    if gap <= 1e-12:
        raise NoDiscriminationError("the two Hamiltonians coincide")
    psi0 = (V[:, 0] + V[:, -1]) / math.sqrt(2.0)
    return -H2, psi0, math.pi / gap


def fixed_time_overlap(H, K, t: float):
    """Best-case overlap for distinguishing H + K from K in a fixed time t.

    Diagonalizes W = exp(i t K) exp(-i t (H + K)); the optimal probe is the
    equal superposition of the eigenvectors whose eigenvalue arguments are
    extremal, and the achieved overlap is cos(arc/2) for arc < pi. An arc of
    pi or more means the alternatives can be separated exactly within the
    allotted time, reported as overlap 0.

    Returns (psi0, overlap).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    H = np.asarray(H, dtype=complex)
    K = np.asarray(K, dtype=complex)
    W = qmath.expm_i(K, -t) @ qmath.expm_i(H + K, t)
    # W is unitary hence normal; Schur gives robust orthonormal eigenvectors.
    T, Z = scipy.linalg.schur(W, output="complex")
    lam = np.diag(T)
    args = np.angle(lam)
    args[args <= -np.pi + tolerances.BRANCH_FOLD] = np.pi
    i_min = int(np.argmin(args))
    i_max = int(np.argmax(args))
    arc = float(args[i_max] - args[i_min])
    psi0 = (Z[:, i_min] + Z[:, i_max]) / math.sqrt(2.0)
    if arc >= math.pi:
        return psi0, 0.0
    return psi0, float(math.cos(arc / 2.0))


# ---------------------------------------------------------------------------
# Adaptive elimination
# ---------------------------------------------------------------------------


def adaptive_eliminate(ensemble: HypothesisEnsemble, true_index: int, rng_seed: int):
    """Identify one of N noiseless Hamiltonians by pairwise elimination.

    Each round drives to cancel the first of the two leading candidates,
    prepares the cancellation probe for the pair, evolves for the pair's
    flip time, and measures the binary flipped/not-flipped projector. One
    candidate is eliminated per round, and the true Hamiltonian survives
    every round, so N - 1 measurements always suffice.

    Returns (identified_index, measurement_count, transcript).
    """
    n = len(ensemble)
    if not 0 <= true_index < n:
        raise ValueError("true_index out of range")
    for h in ensemble.hypotheses:
        if h.noise.kind is not NoiseKind.NONE:
            raise UnsupportedModelError("adaptive elimination assumes noiseless hypotheses")
    gens = [h.generator_matrix() for h in ensemble.hypotheses]
    rng = np.random.default_rng(rng_seed)

    alive = list(range(n))
    transcript = []
    measurements = 0
    while len(alive) > 1:
        i, j = alive[0], alive[1]
        # Drive with -H_i: the pair becomes (0, H_j - H_i).
        drive, psi0, t_star = cancellation_strategy(gens[j], gens[i])
        flipped_state = qmath.expm_i(gens[j] + drive, t_star) @ psi0

        evolved = qmath.expm_i(gens[true_index] + drive, t_star) @ psi0
        p_flip = float(np.abs(np.vdot(flipped_state, evolved)) ** 2)
        outcome_flip = bool(rng.random() < p_flip)

        eliminated = i if outcome_flip else j
        alive.remove(eliminated)
        measurements += 1
        transcript.append(
            {
                "pair": (i, j),
                "t_star": t_star,
                "p_flip": p_flip,
                "outcome_flip": outcome_flip,
                "eliminated": eliminated,
            }
        )
    return alive[0], measurements, transcript


# ---------------------------------------------------------------------------
# Sampled adaptive single-qubit strategies (separation demonstration)
# ---------------------------------------------------------------------------


def sampled_adaptive_two_qubit_info(directions, rng_seed: int, samples: int = 1000) -> float:
    """Best information gain over random two-step single-qubit strategies.

    Two probe qubits are measured one at a time; the second step's state,
    exposure time, and basis may depend on the first outcome. Returns the
    maximum mutual information (bits) found over `samples` random strategies
    with equal priors; exposure uses the unit-field generator a.sigma.
    """
    dirs = [np.asarray(d, dtype=float) for d in directions]
    n = len(dirs)
    priors = np.full(n, 1.0 / n)
    rng = np.random.default_rng(rng_seed)
    ops = [qmath.axis_operator(d) for d in dirs]

    def evolved(axis_idx: int, psi: np.ndarray, t: float) -> np.ndarray:
        # exp(-i t a.sigma) = cos t I - i sin t a.sigma for unit axes.
        return (math.cos(t) * qmath.I2 - 1j * math.sin(t) * ops[axis_idx]) @ psi

    def random_state() -> np.ndarray:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return v / np.linalg.norm(v)

    def random_basis() -> np.ndarray:
        v0 = random_state()
        v1 = np.array([-v0[1].conjugate(), v0[0].conjugate()])
        return np.column_stack([v0, v1])

    best = 0.0
    for _ in range(samples):
        psi1 = random_state()
        t1 = rng.uniform(0.0, math.pi)
        basis1 = random_basis()
        step2 = [(random_state(), rng.uniform(0.0, math.pi), random_basis()) for _ in range(2)]

        joint = np.zeros((n, 4))
        for a in range(n):
            out1 = evolved(a, psi1, t1)
            p1 = np.abs(basis1.conj().T @ out1) ** 2
            for r1 in range(2):
                psi2, t2, basis2 = step2[r1]
                out2 = evolved(a, psi2, t2)
                p2 = np.abs(basis2.conj().T @ out2) ** 2
                for r2 in range(2):
                    joint[a, 2 * r1 + r2] = priors[a] * p1[r1] * p2[r2]
        best = max(best, mutual_information(joint))
    return best
