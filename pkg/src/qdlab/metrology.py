"""Frequency metrology: product versus entangled probes under decoherence.

Single-shot outcome probabilities for the two probe families, the
error-propagation chain turning repeated shots into a frequency uncertainty,
time-budget optimization of that uncertainty, and the information-gain
improvement curve for the two-hypothesis problem (static field versus no
field) under basis-free symmetric decoherence.

Information-gain semantics for the improvement curve: the gain of a strategy
at decoherence ratio r is the mutual information between the hypothesis and
the outcome of the complete orthogonal measurement in the eigenbasis of the
minimum-error decision operator, maximized over the interrogation time. The
curve reports the difference of the two separately optimized gains. The
binary-channel reading 1 - H2(p_error) and the raw error probabilities are
reported alongside for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .discrimination import grid_golden_minimize
from .dynamics import NoiseKind, NoiseModel
from .errors import UnsupportedModelError


class StrategyKind:
    PRODUCT = "product"
    CAT = "cat"


@dataclass(frozen=True)
class Strategy:
    """Probe family, qubit count, per-shot duration, and time budget."""

    kind: str
    n: int
    t: float
    T_total: float
    omega: float
    noise: NoiseModel = field(default_factory=NoiseModel)

    def __post_init__(self):
        if self.kind not in (StrategyKind.PRODUCT, StrategyKind.CAT):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("need at least one qubit")
        if not 0 < self.t <= self.T_total:
            raise ValueError("need 0 < t <= T_total")


@dataclass(frozen=True)
class PrecisionReport:
    delta_omega: float
    p_plus: float
    shots: int


@dataclass(frozen=True)
class OptimizedPrecision:
    t_star: float
    delta_omega: float
    at_boundary: bool


def _decay_and_rate(s: Strategy) -> tuple[float, float]:
    """Effective amplitude decay exponent gamma_eff (per unit time) and the
    phase accumulation rate (multiples of omega) for the +/- probability."""
    g = s.noise.gamma
    if s.kind == StrategyKind.PRODUCT:
        if s.noise.kind is NoiseKind.NONE:
            return 0.0, 1.0
        if s.noise.kind in (
            NoiseKind.QUBIT_DEPOLARIZING,
            NoiseKind.INDEPENDENT_DEPOLARIZING,
            NoiseKind.SYMMETRIC,
        ):
            return g, 1.0
    else:  # cat
        if s.noise.kind is NoiseKind.NONE:
            return 0.0, float(s.n)
        if s.noise.kind is NoiseKind.INDEPENDENT_DEPOLARIZING:
            return s.n * g, float(s.n)
        if s.noise.kind is NoiseKind.SYMMETRIC:
            return g, float(s.n)
        if s.noise.kind is NoiseKind.QUBIT_DEPOLARIZING and s.n == 1:
            return g, 1.0
    raise UnsupportedModelError(f"no closed form for ({s.kind}, {s.noise.kind.value}, n={s.n})")


def shot_probability(s: Strategy) -> float:
    """Probability of the + outcome of the transverse parity measurement.

    Product probes precess at omega and keep their single-qubit decay; the
    cat state precesses n times faster, pays n-fold decay under independent
    depolarizing, but only single-qubit decay under symmetric decoherence.
    """
    gamma_eff, rate = _decay_and_rate(s)
    return 0.5 * (1.0 + math.exp(-gamma_eff * s.t) * math.cos(rate * s.omega * s.t))


def _repetitions(s: Strategy) -> float:
    if s.kind == StrategyKind.PRODUCT:
        return s.n * s.T_total / s.t
    return s.T_total / s.t


def precision(s: Strategy) -> PrecisionReport:
    """Frequency uncertainty from the error-propagation chain.

    delta_P = sqrt(P (1 - P) / m) with m the repetition count
    (n T/t for product probes, T/t for the cat), and
    delta_omega = delta_P / |dP/domega|. Shots are reported rounded; the
    chain itself uses the ideal (real) repetition rate.
    """
    gamma_eff, rate = _decay_and_rate(s)
    p = shot_probability(s)
    m = _repetitions(s)
    if gamma_eff == 0.0:
        # The |sin| factors of delta_P and dP/domega cancel algebraically;
        # dividing them numerically would break down at the turning points.
        delta_omega = 1.0 / (rate * s.t * math.sqrt(m))
    else:
        dp_domega = (
            0.5 * rate * s.t * math.exp(-gamma_eff * s.t) * abs(math.sin(rate * s.omega * s.t))
        )
        delta_p = math.sqrt(max(p * (1.0 - p), 0.0) / m)
        delta_omega = delta_p / dp_domega if dp_domega > 0 else math.inf
    return PrecisionReport(delta_omega=delta_omega, p_plus=p, shots=int(round(m)))


def precision_envelope(s: Strategy, t: float) -> float:
    """The chain of `precision` with the shot tuned to quadrature
    (cos(rate omega t) = 0), as a function of the per-shot duration."""
    gamma_eff, rate = _decay_and_rate(s)
    m = (s.n if s.kind == StrategyKind.PRODUCT else 1.0) * s.T_total / t
    return math.exp(gamma_eff * t) / (0.5 * rate * t) * 0.5 / math.sqrt(m)


def optimize_precision(s: Strategy) -> OptimizedPrecision:
    """Minimize the quadrature-tuned uncertainty over t in (0, T_total].

    With decay gamma_eff the envelope exp(gamma_eff t)/sqrt(t) has its
    interior optimum at gamma_eff t = 1/2; without decay the objective
    improves monotonically with t and the budget boundary is returned with
    a flag.
    """
    gamma_eff, _ = _decay_and_rate(s)
    if gamma_eff == 0.0:
        t_star = s.T_total
        return OptimizedPrecision(t_star, precision_envelope(s, t_star), at_boundary=True)
    t_star = 1.0 / (2.0 * gamma_eff)
    if t_star >= s.T_total:
        return OptimizedPrecision(s.T_total, precision_envelope(s, s.T_total), at_boundary=True)
    return OptimizedPrecision(t_star, precision_envelope(s, t_star), at_boundary=False)


# ---------------------------------------------------------------------------
# Information-gain improvement curve (two hypotheses, symmetric decoherence)
# ---------------------------------------------------------------------------
#
# Two equiprobable hypotheses on a two-qubit probe: no field versus a static
# field of frequency omega on each qubit. Either probe is prepared, evolves
# for time t under symmetric decoherence at rate gamma, and the minimum-error
# measurement is performed. The undamped overlap angle theta between the
# evolved and static states is omega t for the entangled (Bell) probe and
# arccos(cos^2(omega t / 2)) for the product probe; the minimum achievable
# error is 1/2 - 1/2 e^{-gamma t} |sin theta|.

ENTANGLED = "entangled"
PRODUCT = "product"


def fig1_sin_theta(strategy: str, omega_t):
    """|sin theta(t)| of the evolving-versus-static state pair."""
    omega_t = np.asarray(omega_t, dtype=float)
    if strategy == ENTANGLED:
        return np.abs(np.sin(omega_t))
    if strategy == PRODUCT:
        return np.sqrt(np.maximum(0.0, 1.0 - np.cos(omega_t / 2.0) ** 4))
    raise ValueError(f"unknown strategy {strategy!r}")


def fig1_error_probability(strategy: str, gamma: float, omega: float, t):
    """Minimum-error probability 1/2 - 1/2 e^{-gamma t} |sin theta|."""
    t = np.asarray(t, dtype=float)
    return 0.5 - 0.5 * np.exp(-gamma * t) * fig1_sin_theta(strategy, omega * t)


def _entropy_rows(*ps):
    total = np.zeros_like(np.asarray(ps[0], dtype=float))
    for p in ps:
        q = np.clip(np.asarray(p, dtype=float), 1e-300, 1.0)
        total = total - np.where(q > 1e-300, q * np.log2(q), 0.0)
    return total


def fig1_measurement_info(strategy: str, gamma: float, omega: float, t):
    """Mutual information (bits) between the hypothesis and the outcome of
    the complete orthogonal measurement in the decision eigenbasis.

    In the four-dimensional probe space the two states are
    e^{-gamma t} |psi_i><psi_i| + (1 - e^{-gamma t}) I/4; the decision
    operator's eigenbasis consists of the two in-span vectors (outcome
    probabilities e (1 +/- sin theta)/2 + (1-e)/4) and two null-space vectors
    ((1-e)/4 each).
    """
    t = np.asarray(t, dtype=float)
    e = np.exp(-gamma * t)
    s = fig1_sin_theta(strategy, omega * t)
    p_plus = e * (1.0 + s) / 2.0 + (1.0 - e) / 4.0
    p_minus = e * (1.0 - s) / 2.0 + (1.0 - e) / 4.0
    p_null = (1.0 - e) / 4.0 * np.ones_like(p_plus)
    avg = 0.5 * (p_plus + p_minus)
    h_y = _entropy_rows(avg, avg, p_null, p_null)
    # By the swap symmetry of the two hypotheses, H(Y|X) is hypothesis
    # independent.
    h_y_given_x = _entropy_rows(p_plus, p_minus, p_null, p_null)
    return h_y - h_y_given_x


def fig1_binary_info(strategy: str, gamma: float, omega: float, t):
    """1 - H2(p_error): the symmetric binary-channel reading of the gain."""
    p = fig1_error_probability(strategy, gamma, omega, t)
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    q = np.clip(p, 1e-300, 1.0 - 1e-16)
    h2 = -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)
    return 1.0 - np.where((p > 0.0) & (p < 1.0), h2, 0.0)


@dataclass(frozen=True)
class Figure1Point:
    ratio: float
    t_star_ent: float
    t_star_prod: float
    info_ent: float
    info_prod: float
    delta_bits: float
    info_ent_binary: float
    info_prod_binary: float
    delta_bits_binary: float
    p_err_ent: float
    p_err_prod: float
    delta_p_err: float


@dataclass(frozen=True)
class Figure1Result:
    points: tuple[Figure1Point, ...]
    peak_ratio: float
    peak_bits: float


def _fig1_t_max(gamma: float, omega: float) -> float:
    return max(4.0 * math.pi / omega, 10.0 / gamma)


def _optimized_gain(strategy: str, gamma: float, omega: float, grid: int):
    """Maximize the measurement information over t; also report the
    quantities at the optimizing time. Returns (t_star, info, info_binary,
    p_err)."""
    t_max = _fig1_t_max(gamma, omega)
    t_star, neg = grid_golden_minimize(
        lambda t: -fig1_measurement_info(strategy, gamma, omega, t),
        t_max,
        grid_points=grid,
        vectorized=True,
    )
    info = -float(neg)
    p_err = float(fig1_error_probability(strategy, gamma, omega, t_star))
    info_binary = float(fig1_binary_info(strategy, gamma, omega, t_star))
    return t_star, info, info_binary, p_err


def figure1_point(ratio: float, grid: int = 2048) -> Figure1Point:
    """Evaluate both strategies at one decoherence-to-frequency ratio.

    Frequencies are normalized to omega = 1 (the gains depend only on the
    ratio). The binary-reading columns are evaluated at their own optimal
    times, and the error columns at the error-minimizing times.
    """
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    omega = 1.0
    gamma = ratio
    te, info_e, _, _ = _optimized_gain(ENTANGLED, gamma, omega, grid)
    tp, info_p, _, _ = _optimized_gain(PRODUCT, gamma, omega, grid)
    t_max = _fig1_t_max(gamma, omega)

    def best_binary(strategy):
        t, neg = grid_golden_minimize(
            lambda t: -fig1_binary_info(strategy, gamma, omega, t),
            t_max,
            grid_points=grid,
            vectorized=True,
        )
        return -float(neg)

    def best_perr(strategy):
        _, val = grid_golden_minimize(
            lambda t: fig1_error_probability(strategy, gamma, omega, t),
            t_max,
            grid_points=grid,
            vectorized=True,
        )
        return float(val)

    be, bp = best_binary(ENTANGLED), best_binary(PRODUCT)
    pe, pp = best_perr(ENTANGLED), best_perr(PRODUCT)
    return Figure1Point(
        ratio=float(ratio),
        t_star_ent=float(te),
        t_star_prod=float(tp),
        info_ent=float(info_e),
        info_prod=float(info_p),
        delta_bits=float(info_e - info_p),
        info_ent_binary=be,
        info_prod_binary=bp,
        delta_bits_binary=float(be - bp),
        p_err_ent=pe,
        p_err_prod=pp,
        delta_p_err=float(pp - pe),
    )


def figure1_curve(ratios, grid: int = 2048, refine_peak: bool = True) -> Figure1Result:
    """Information-gain improvement over a set of decoherence ratios.

    Evaluates every requested ratio, optionally refines the peak of the
    improvement by golden section on the log-ratio axis, and returns the
    ratio-ordered points together with the located peak.
    """
    ratios = [float(r) for r in ratios]
    if not ratios or any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive")
    points = [figure1_point(r, grid) for r in ratios]

    if refine_peak and len(points) >= 3:
        deltas = [p.delta_bits for p in points]
        i = int(np.argmax(deltas))
        lo = points[max(i - 1, 0)].ratio
        hi = points[min(i + 1, len(points) - 1)].ratio
        if lo < hi:
            points.append(refine_log_peak(lo, hi, grid))
            points.sort(key=lambda p: p.ratio)

    best = max(points, key=lambda p: p.delta_bits)
    return Figure1Result(points=tuple(points), peak_ratio=best.ratio, peak_bits=best.delta_bits)


def refine_log_peak(lo: float, hi: float, grid: int) -> Figure1Point:
    """Golden-section maximization of delta_bits on the log-ratio interval."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    cache: dict[float, Figure1Point] = {}

    def value(x: float) -> float:
        if x not in cache:
            cache[x] = figure1_point(math.exp(x), grid)
        return cache[x].delta_bits

    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = value(c), value(d)
    while (b - a) > 1e-7:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = value(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = value(d)
    x = (a + b) / 2
    return cache.get(x) or figure1_point(math.exp(x), grid)
