"""Batch experiment runner.

`qd <experiment> [--config cfg.json] [--seed N] [--out path] [--format csv|json]
[--check] [--workers N]` runs one of the registered experiments with seeded,
reproducible inputs and writes a CSV or JSON report atomically. `qd list`
prints the experiment table. Identical configuration and seed produce
byte-identical reports, independent of the worker count.

Exit codes: 0 success, 1 failed --check assertion, 2 configuration error,
3 numerical precondition failure, 4 I/O failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources

import click
import jsonschema
import numpy as np

from . import discrimination, metrology, phase_estimation, qmath, search, spectral_arc
from .dynamics import FieldHamiltonian, NoiseKind, NoiseModel

DEFAULT_SEED = 1234567890
OUT_DIR_ENV = "QD_OUT_DIR"
WORKERS_ENV = "QD_WORKERS"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    name: str
    summary: str
    defaults: dict
    runner: object  # (params, seed, workers) -> (rows, summary_line)
    checker: object  # (params, seed) -> list[(label, ok, detail)]


def _merge_params(defaults: dict, overrides: dict) -> dict:
    params = dict(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            raise ConfigError(f"unknown parameter {key!r}; valid: {sorted(defaults)}")
        params[key] = value
    return params


def _spawned_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


# --- superdense ------------------------------------------------------------


def _geometry_directions(params):
    geometry = params["geometry"]
    if geometry == "tetrahedron":
        return discrimination.symmetric_directions(4, -1.0 / 3.0), -1.0 / 3.0
    if geometry == "planar-trine":
        return discrimination.symmetric_directions(3, -0.5), -0.5
    if geometry == "lifted-trine":
        cos_theta = float(params["cos_theta"])
        return discrimination.symmetric_directions(3, cos_theta), cos_theta
    raise ConfigError(f"unknown geometry {geometry!r}")


def _run_superdense(params, seed, workers):
    directions, cos_theta = _geometry_directions(params)
    result = discrimination.trine_discriminate(directions)
    row = {
        "geometry": params["geometry"],
        "cos_theta": cos_theta,
        "n_directions": len(directions),
        "t_star": result.t_star,
        "p_error": result.p_error,
        "info_bits": result.info_bits,
    }
    columns = ["geometry", "cos_theta", "n_directions", "t_star", "p_error", "info_bits"]
    return columns, [row], (
        f"superdense {params['geometry']}: p_error={result.p_error:.3e} "
        f"info={result.info_bits:.6f} bits at t*={result.t_star:.6f}"
    )


def _check_superdense(params, seed):
    _, rows, _ = _run_superdense(params, seed, 1)
    row = rows[0]
    target = math.log2(row["n_directions"])
    return [
        ("error probability vanishes", row["p_error"] <= 1e-10, f"p_error={row['p_error']:.2e}"),
        (
            f"info equals log2({row['n_directions']})",
            abs(row["info_bits"] - target) <= 1e-9,
            f"info={row['info_bits']:.12f}",
        ),
    ]


# --- grover ----------------------------------------------------------------


def _run_grover(params, seed, workers):
    sizes = [int(n) for n in params["sizes"]]
    energy = float(params["energy"])
    rows = []
    for n in sizes:
        inst = search.GroverInstance(dim=n, marked=n // 2, energy=energy)
        prob, T = search.grover_run(inst)
        rows.append({"N": n, "energy": energy, "T": T, "success_prob": prob})
    worst = min(r["success_prob"] for r in rows)
    return ["N", "energy", "T", "success_prob"], rows, (
        f"grover: worst success over N={sizes} is {worst:.12f}"
    )


def _check_grover(params, seed):
    _, rows, _ = _run_grover(params, seed, 1)
    ok_success = all(r["success_prob"] >= 1.0 - 1e-9 for r in rows)
    checks = [
        ("success certainty at the flop time", ok_success, f"min={min(r['success_prob'] for r in rows):.2e}")
    ]
    if len(rows) >= 2:
        logs_n = np.log([r["N"] for r in rows])
        logs_t = np.log([r["T"] for r in rows])
        slope = np.polyfit(logs_n, logs_t, 1)[0]
        checks.append(("T scales as sqrt(N)", abs(slope - 0.5) <= 1e-6, f"slope={slope:.9f}"))
    return checks


# --- two-ham ---------------------------------------------------------------


def _two_ham_ensemble(omega: float, gamma: float):
    noise = NoiseModel(NoiseKind.QUBIT_DEPOLARIZING, gamma)
    trivial = discrimination.Hypothesis(np.zeros((2, 2)), noise, 0.5)
    driven = discrimination.Hypothesis(FieldHamiltonian(omega, (0, 0, 1)), noise, 0.5)
    return discrimination.HypothesisEnsemble((trivial, driven))


def _run_two_ham(params, seed, workers):
    omega, gamma = float(params["omega"]), float(params["gamma"])
    t_star = discrimination.optimal_time_qubit(omega, gamma)
    ensemble = _two_ham_ensemble(omega, gamma)
    result = discrimination.discriminate_superops(ensemble, qmath.KET_PLUS, t_star)
    formula = 0.5 - 0.5 * math.exp(-gamma * t_star) * abs(math.sin(omega * t_star / 2.0))
    row = {
        "omega": omega,
        "gamma": gamma,
        "t_star": t_star,
        "p_error": result.p_error,
        "p_error_formula": formula,
        "info_bits": result.info_bits,
    }
    columns = ["omega", "gamma", "t_star", "p_error", "p_error_formula", "info_bits"]
    return columns, [row], (
        f"two-ham: t*={t_star:.6f} p_error={result.p_error:.6f} info={result.info_bits:.6f} bits"
    )


def _check_two_ham(params, seed):
    _, rows, _ = _run_two_ham(params, seed, 1)
    row = rows[0]
    return [
        (
            "minimum error matches the closed form",
            abs(row["p_error"] - row["p_error_formula"]) <= 1e-10,
            f"|diff|={abs(row['p_error'] - row['p_error_formula']):.2e}",
        )
    ]


# --- fixed-time ------------------------------------------------------------


def _run_fixed_time(params, seed, workers):
    dim = int(params["dim"])
    t = float(params["t"])
    samples = int(params["samples"])
    h_norm = float(params["h_norm"])
    k_norm = float(params["k_norm"])
    rows = []
    for idx, rng in enumerate(_spawned_rngs(seed, samples)):
        H = spectral_arc.random_hermitian(dim, h_norm * rng.uniform(0.2, 1.0), rng)
        K = spectral_arc.random_hermitian(dim, k_norm * rng.uniform(0.0, 1.0), rng)
        _, overlap_driven = discrimination.fixed_time_overlap(H, K, t)
        _, overlap_plain = discrimination.fixed_time_overlap(H, np.zeros_like(K), t)
        rows.append(
            {
                "sample": idx,
                "dim": dim,
                "t": t,
                "overlap_driven": overlap_driven,
                "overlap_undriven": overlap_plain,
                "margin": overlap_driven - overlap_plain,
            }
        )
    worst = min(r["margin"] for r in rows)
    columns = ["sample", "dim", "t", "overlap_driven", "overlap_undriven", "margin"]
    return columns, rows, f"fixed-time: worst driven-minus-undriven overlap margin {worst:.3e}"


def _check_fixed_time(params, seed):
    _, rows, _ = _run_fixed_time(params, seed, 1)
    worst = min(r["margin"] for r in rows)
    return [("driving never helps at fixed time", worst >= -1e-9, f"worst margin {worst:.3e}")]


# --- eliminate -------------------------------------------------------------


def _run_eliminate(params, seed, workers):
    n_hyp = int(params["n_hypotheses"])
    dim = int(params["dim"])
    trials = int(params["trials"])
    rows = []
    for idx, rng in enumerate(_spawned_rngs(seed, trials)):
        gens = [spectral_arc.random_hermitian(dim, 2.0, rng) for _ in range(n_hyp)]
        ensemble = discrimination.HypothesisEnsemble(
            tuple(discrimination.Hypothesis(g, NoiseModel(), 1.0 / n_hyp) for g in gens)
        )
        true_index = int(rng.integers(n_hyp))
        identified, count, _ = discrimination.adaptive_eliminate(
            ensemble, true_index, int(rng.integers(2**63))
        )
        rows.append(
            {
                "trial": idx,
                "true_index": true_index,
                "identified": identified,
                "measurements": count,
                "correct": int(identified == true_index),
            }
        )
    rate = sum(r["correct"] for r in rows) / len(rows)
    columns = ["trial", "true_index", "identified", "measurements", "correct"]
    return columns, rows, f"eliminate: identification rate {rate:.3f} over {trials} trials"


def _check_eliminate(params, seed):
    _, rows, _ = _run_eliminate(params, seed, 1)
    n_hyp = int(params["n_hypotheses"])
    all_correct = all(r["correct"] for r in rows)
    bounded = all(r["measurements"] <= n_hyp - 1 for r in rows)
    return [
        ("every trial identifies the true generator", all_correct, f"{len(rows)} trials"),
        ("never more than N-1 measurements", bounded, f"max={max(r['measurements'] for r in rows)}"),
    ]


# --- phase-est -------------------------------------------------------------


def _run_phase_est(params, seed, workers):
    cfg = phase_estimation.PhaseConfig(n=int(params["n"]), omega=float(params["omega"]))
    trials = int(params["trials"])
    counts = np.zeros(2**cfg.n, dtype=int)
    for child in np.random.SeedSequence(seed).spawn(trials):
        rec = phase_estimation.sqft_estimate(cfg, int(child.generate_state(1)[0]))
        counts[int(round(rec.estimate * 2**cfg.n))] += 1
    exact = phase_estimation.exact_distribution(cfg)
    rows = [
        {
            "omega_tilde": j / 2**cfg.n,
            "exact_prob": exact[j],
            "empirical_freq": counts[j] / trials,
            "trials": trials,
        }
        for j in range(2**cfg.n)
    ]
    tvd = 0.5 * float(np.abs(exact - counts / trials).sum())
    columns = ["omega_tilde", "exact_prob", "empirical_freq", "trials"]
    return columns, rows, (
        f"phase-est: n={cfg.n} omega={cfg.omega} total-variation distance {tvd:.4f}"
    )


def _check_phase_est(params, seed):
    _, rows, _ = _run_phase_est(params, seed, 1)
    trials = rows[0]["trials"]
    ok = True
    worst = 0.0
    for r in rows:
        sigma = math.sqrt(max(r["exact_prob"] * (1 - r["exact_prob"]), 1e-12) / trials)
        dev = abs(r["empirical_freq"] - r["exact_prob"]) / (3 * sigma + 1e-15)
        worst = max(worst, dev)
        if dev > 1.0:
            ok = False
    return [("empirical frequencies within 3 sigma", ok, f"worst dev/3sigma {worst:.3f}")]


# --- metrology -------------------------------------------------------------


def _metrology_strategies(params):
    noise_kind = NoiseKind(params["noise"])
    n = int(params["n"])
    gamma = float(params["gamma"])
    t_total = float(params["t_total"])
    omega = float(params["omega"])
    n_for_model = n if noise_kind is NoiseKind.INDEPENDENT_DEPOLARIZING else None
    noise = NoiseModel(noise_kind, gamma, n_for_model)
    common = dict(n=n, T_total=t_total, omega=omega, noise=noise)
    return (
        metrology.Strategy(kind=metrology.StrategyKind.PRODUCT, t=t_total / 2, **common),
        metrology.Strategy(kind=metrology.StrategyKind.CAT, t=t_total / 2, **common),
    )


def _run_metrology(params, seed, workers):
    product, cat = _metrology_strategies(params)
    rows = []
    for strat in (product, cat):
        opt = metrology.optimize_precision(strat)
        rows.append(
            {
                "kind": strat.kind,
                "n": strat.n,
                "gamma": strat.noise.gamma,
                "noise": strat.noise.kind.value,
                "t_star": opt.t_star,
                "delta_omega": opt.delta_omega,
                "at_boundary": int(opt.at_boundary),
            }
        )
    columns = ["kind", "n", "gamma", "noise", "t_star", "delta_omega", "at_boundary"]
    return columns, rows, (
        "metrology: product delta_omega={:.6e}, cat delta_omega={:.6e}".format(
            rows[0]["delta_omega"], rows[1]["delta_omega"]
        )
    )


def _check_metrology(params, seed):
    _, rows, _ = _run_metrology(params, seed, 1)
    checks = []
    if params["noise"] == NoiseKind.INDEPENDENT_DEPOLARIZING.value:
        a, b = rows[0]["delta_omega"], rows[1]["delta_omega"]
        rel = abs(a - b) / max(a, b)
        checks.append(("product and cat optima agree", rel <= 1e-6, f"rel diff {rel:.2e}"))
    gamma, n = float(params["gamma"]), int(params["n"])
    if gamma > 0:
        expect = math.sqrt(2 * math.e * gamma / (n * float(params["t_total"])))
        rel = abs(rows[0]["delta_omega"] - expect) / expect
        checks.append(("product optimum matches sqrt(2 e gamma / nT)", rel <= 1e-6, f"rel {rel:.2e}"))
    return checks


# --- figure1 ---------------------------------------------------------------


def _run_figure1(params, seed, workers):
    ratio_min = float(params["ratio_min"])
    ratio_max = float(params["ratio_max"])
    points = int(params["points"])
    grid = int(params["grid"])
    refine = bool(params["refine_peak"])
    ratios = np.logspace(math.log10(ratio_min), math.log10(ratio_max), points)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pts = list(pool.map(lambda r: metrology.figure1_point(float(r), grid), ratios))
    else:
        pts = [metrology.figure1_point(float(r), grid) for r in ratios]

    if refine and len(pts) >= 3:
        deltas = [p.delta_bits for p in pts]
        i = int(np.argmax(deltas))
        lo = pts[max(i - 1, 0)].ratio
        hi = pts[min(i + 1, len(pts) - 1)].ratio
        if lo < hi:
            pts.append(metrology.refine_log_peak(lo, hi, grid))
            pts.sort(key=lambda p: p.ratio)

    rows = [
        {
            "ratio": p.ratio,
            "t_star_ent": p.t_star_ent,
            "t_star_prod": p.t_star_prod,
            "info_ent": p.info_ent,
            "info_prod": p.info_prod,
            "delta_bits": p.delta_bits,
            "info_ent_binary": p.info_ent_binary,
            "info_prod_binary": p.info_prod_binary,
            "delta_bits_binary": p.delta_bits_binary,
            "p_err_ent": p.p_err_ent,
            "p_err_prod": p.p_err_prod,
            "delta_p_err": p.delta_p_err,
        }
        for p in pts
    ]
    best = max(pts, key=lambda p: p.delta_bits)
    columns = [
        "ratio", "t_star_ent", "t_star_prod", "info_ent", "info_prod", "delta_bits",
        "info_ent_binary", "info_prod_binary", "delta_bits_binary",
        "p_err_ent", "p_err_prod", "delta_p_err",
    ]
    return columns, rows, (
        f"figure1: peak improvement {best.delta_bits:.6f} bits at ratio {best.ratio:.6f}"
    )


def _check_figure1(params, seed):
    _, rows, _ = _run_figure1(params, seed, 1)
    best = max(rows, key=lambda r: r["delta_bits"])
    return [
        (
            "peak improvement 0.136 +/- 0.005 bits",
            abs(best["delta_bits"] - 0.136) <= 0.005,
            f"peak {best['delta_bits']:.6f}",
        ),
        (
            "peak location 0.379 +/- 0.01",
            abs(best["ratio"] - 0.379) <= 0.01,
            f"ratio {best['ratio']:.6f}",
        ),
    ]


# --- theorem-check ---------------------------------------------------------


def _run_theorem_check(params, seed, workers):
    dims = [int(d) for d in params["dims"]]
    trials = int(params["trials"])
    mode = params["mode"]
    if mode == "search":
        rows = []
        for dim in dims:
            found = spectral_arc.counterexample_search(dim, trials, seed)
            for case in found:
                rows.append(
                    {
                        "dim": dim,
                        "violation": case.max_violation,
                        "lhs_max": case.lhs_max,
                        "rhs_max": case.rhs_max,
                        "lhs_min": case.lhs_min,
                        "rhs_min": case.rhs_min,
                    }
                )
        columns = ["dim", "violation", "lhs_max", "rhs_max", "lhs_min", "rhs_min"]
        return columns, rows, (
            f"theorem-check search: {len(rows)} out-of-regime violations found"
        )
    if mode != "verify":
        raise ConfigError("mode must be 'verify' or 'search'")

    h_norm_max = float(params["h_norm_max"])
    k_norm_max = float(params["k_norm_max"])

    def run_dim(args):
        dim, dim_seed = args
        holds = 0
        worst = -math.inf
        for rng in _spawned_rngs(dim_seed, trials):
            H = spectral_arc.random_hermitian(dim, rng.uniform(0, h_norm_max), rng)
            K = spectral_arc.random_hermitian(dim, rng.uniform(0, k_norm_max), rng)
            case = spectral_arc.arc_bound_check(H, K)
            holds += int(case.holds)
            worst = max(worst, case.max_violation)
        return {
            "dim": dim,
            "trials": trials,
            "holds": holds,
            "violations": trials - holds,
            "worst_violation": worst,
        }

    jobs = [(dim, seed + 1000 * i) for i, dim in enumerate(dims)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_dim, jobs))
    else:
        rows = [run_dim(j) for j in jobs]
    total_viol = sum(r["violations"] for r in rows)
    columns = ["dim", "trials", "holds", "violations", "worst_violation"]
    return columns, rows, (
        f"theorem-check verify: {total_viol} violations in {trials * len(dims)} cases"
    )


def _check_theorem_check(params, seed):
    params = dict(params)
    params["mode"] = "verify"
    _, rows, _ = _run_theorem_check(params, seed, 1)
    ok = all(r["violations"] == 0 for r in rows)
    worst = max(r["worst_violation"] for r in rows)
    return [("arc bound holds on every in-regime case", ok, f"worst slack {worst:.3e}")]


EXPERIMENTS = {
    "superdense": Experiment(
        "superdense",
        "entangled-probe discrimination of symmetric field directions",
        {"geometry": "tetrahedron", "cos_theta": -1.0 / 3.0},
        _run_superdense,
        _check_superdense,
    ),
    "grover": Experiment(
        "grover",
        "continuous-time search with the uniform-projector drive",
        {"sizes": [2, 4, 16, 256, 1024], "energy": 1.0},
        _run_grover,
        _check_grover,
    ),
    "two-ham": Experiment(
        "two-ham",
        "optimal-time binary discrimination of a precessing qubit with damping",
        {"omega": 1.0, "gamma": 0.1},
        _run_two_ham,
        _check_two_ham,
    ),
    "fixed-time": Experiment(
        "fixed-time",
        "fixed-duration probes: driving terms never beat the undriven probe",
        {"dim": 4, "t": 1.0, "samples": 50, "h_norm": 1.5, "k_norm": 5.0},
        _run_fixed_time,
        _check_fixed_time,
    ),
    "eliminate": Experiment(
        "eliminate",
        "adaptive pairwise elimination over N candidate generators",
        {"n_hypotheses": 5, "dim": 3, "trials": 20},
        _run_eliminate,
        _check_eliminate,
    ),
    "phase-est": Experiment(
        "phase-est",
        "bitwise adaptive frequency estimation versus the exact distribution",
        {"n": 4, "omega": 1.0 / 3.0, "trials": 2000},
        _run_phase_est,
        _check_phase_est,
    ),
    "metrology": Experiment(
        "metrology",
        "time-budget-optimized frequency precision: product versus cat probes",
        {
            "n": 4,
            "omega": 1.0,
            "gamma": 0.05,
            "t_total": 1000.0,
            "noise": "independent_depolarizing",
        },
        _run_metrology,
        _check_metrology,
    ),
    "figure1": Experiment(
        "figure1",
        "information-gain improvement of the entangled probe under symmetric decoherence",
        {"ratio_min": 0.01, "ratio_max": 10.0, "points": 200, "grid": 2048, "refine_peak": True},
        _run_figure1,
        _check_figure1,
    ),
    "theorem-check": Experiment(
        "theorem-check",
        "randomized verification of the driven-evolution spectral-arc bound",
        {
            "dims": [2, 3, 4, 5, 6],
            "trials": 400,
            "mode": "verify",
            "h_norm_max": math.pi * 0.999,
            "k_norm_max": 10.0,
        },
        _run_theorem_check,
        _check_theorem_check,
    ),
}


# ---------------------------------------------------------------------------
# Config handling and report writing
# ---------------------------------------------------------------------------


def load_schema() -> dict:
    with resources.files("qdlab.data").joinpath("config_schema.json").open("r") as fh:
        return json.load(fh)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(config, load_schema())
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config does not match the schema: {exc.message}") from exc
    return config


def format_float(x: float) -> str:
    return f"{x:.17g}"


def rows_to_csv(columns: list[str], rows: list[dict]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, float) else v for v in (row[h] for h in columns)]
        )
    return buf.getvalue().encode("utf-8")


def rows_to_json(experiment: str, seed: int, params: dict, rows: list[dict]) -> bytes:
    doc = {"experiment": experiment, "seed": seed, "parameters": params, "rows": rows}
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def write_atomic(path: str, payload: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".qd-tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def list_experiments() -> str:
    lines = ["experiment      parameters (defaults)"]
    lines.append("-" * 72)
    for name in EXPERIMENTS:
        exp = EXPERIMENTS[name]
        lines.append(f"{name:<15} {exp.summary}")
        for key, value in exp.defaults.items():
            lines.append(f"{'':<15}   {key} = {value!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


@click.command(name="qd")
@click.argument("experiment")
@click.option("--config", "config_path", type=str, default=None, help="JSON config file.")
@click.option("--seed", type=int, default=None, help="Root RNG seed (64-bit).")
@click.option("--out", "out_path", type=str, default=None, help="Report path.")
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default=None, help="Report format."
)
@click.option("--check", is_flag=True, help="Run the experiment's acceptance assertions.")
@click.option("--workers", type=int, default=None, help=f"Worker threads (or ${WORKERS_ENV}).")
def main(experiment, config_path, seed, out_path, fmt, check, workers):
    """Run EXPERIMENT (or `qd list` to see all) and write a seeded report."""
    try:
        if experiment == "list":
            click.echo(list_experiments(), nl=False)
            sys.exit(EXIT_OK)

        if experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {experiment!r}; valid: {sorted(EXPERIMENTS)} or 'list'"
            )
        config = load_config(config_path)
        if "experiment" in config and config["experiment"] != experiment:
            raise ConfigError(
                f"config is for {config['experiment']!r}, but {experiment!r} was requested"
            )
        exp = EXPERIMENTS[experiment]
        params = _merge_params(exp.defaults, config.get("parameters", {}))
        run_seed = seed if seed is not None else config.get("seed", DEFAULT_SEED)
        out_fmt = fmt or config.get("output", {}).get("format", "csv")
        target = out_path or config.get("output", {}).get("path")
        if target is None:
            target = os.path.join(os.environ.get(OUT_DIR_ENV, "."), f"{experiment}.{out_fmt}")
        try:
            n_workers = (
                workers if workers is not None else int(os.environ.get(WORKERS_ENV, "1"))
            )
        except ValueError as exc:
            raise ConfigError(f"bad {WORKERS_ENV} value: {exc}") from exc
        if n_workers < 1:
            raise ConfigError("workers must be at least 1")
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    if check:
        try:
            results = exp.checker(params, run_seed)
        except ValueError as exc:
            click.echo(f"numerical precondition failure: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
        all_ok = True
        for label, ok, detail in results:
            click.echo(f"[{'PASS' if ok else 'FAIL'}] {experiment}: {label} ({detail})")
            all_ok = all_ok and ok
        sys.exit(EXIT_OK if all_ok else EXIT_CHECK_FAILED)

    started = time.monotonic()
    try:
        columns, rows, summary = exp.runner(params, run_seed, n_workers)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except ValueError as exc:
        click.echo(f"numerical precondition failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    elapsed = time.monotonic() - started

    payload = (
        rows_to_csv(columns, rows)
        if out_fmt == "csv"
        else rows_to_json(experiment, run_seed, params, rows)
    )
    try:
        write_atomic(target, payload)
    except OSError as exc:
        click.echo(f"i/o failure writing {target}: {exc}", err=True)
        sys.exit(EXIT_IO)

    click.echo(f"{summary} | seed={run_seed} rows={len(rows)} out={target} [{elapsed:.2f}s]")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
