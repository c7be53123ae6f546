"""fracwalk CLI using typer."""

from __future__ import annotations

import math
import tempfile
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, NoReturn, Optional, Sequence

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from fracwalk.config import Config, get_config, write_config_file
from fracwalk.errors import (
    ConfigError,
    DomainError,
    ManifestError,
    NumericFailure,
    RangeError,
)
from fracwalk.log import configure_logging
from fracwalk.output import TableWriter, load_manifest, manifest_path, write_manifest
from fracwalk.output.writer import digest
from fracwalk.schemas import (
    CtrwConfig,
    FracDiffProblem,
    JumpLaw,
    RunManifest,
    ScaleState,
    WaitingLaw,
)
from fracwalk.services import CtrwService, FracDiffService, RenewalService, ValidatorService
from fracwalk.services.ctrw import (
    empirical_char_function,
    empirical_density,
    renewal_pmf,
    respeed_transform,
)
from fracwalk.services.fracdiff import subordination_paths
from fracwalk.services.renewal import counting_distribution, thinned_laplace
from fracwalk.special import ml_density_result, ml_two, mwright
from fracwalk.special.wright import TOLERANCE as MWRIGHT_TOLERANCE
from fracwalk.variates import (
    RngStream,
    run_batches,
    sample_jump,
    sample_mittag_leffler_inversion,
    sample_one_sided_stable,
    sample_waiting,
)

app = typer.Typer(
    name="fracwalk",
    help="Mittag-Leffler renewal processes, random walks and space-time fractional diffusion.",
    no_args_is_help=True,
)

# stdout carries data; messages go to stderr
console = Console(stderr=True)

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# Settings that do not change a run's output; the seed is kept with the params
RUNTIME_FIELDS = {"log_level", "threads", "seed", "manifest_dir"}

WAITING_KINDS = ("exponential", "mittag_leffler", "pareto")
JUMP_KINDS = ("two_point", "gaussian", "sym_pareto", "sym_stable", "unit_drift")

SEED = typer.Option(None, "--seed", help="Base seed (default: FRACWALK_SEED or 0)")
STREAM = typer.Option(0, "--stream", help="Stream id under the seed")
THREADS = typer.Option(None, "--threads", help="Worker threads (default: FRACWALK_THREADS)")
CONFIG = typer.Option(None, "--config", help="key=value config file; flags override it")
OUTPUT = typer.Option(None, "--output", "-o", help="Output file (default: stdout)")
JSON = typer.Option(False, "--json", help="Write JSON lines instead of CSV")


class TableOutput(NamedTuple):
    table: str
    columns: List[str]
    rows: List[Sequence[Any]]
    status: int = 0


def _fail(message: str, code: int) -> NoReturn:
    console.print(f"[red]Error: {message}[/red]")
    raise typer.Exit(code)


def _execute(
    subcommand: str,
    params: Dict[str, Any],
    produce: Callable[[Config, RngStream], TableOutput],
) -> str:
    """Load config, run ``produce``, write its table and the run manifest.

    Returns the digest of the written table.
    """
    config_file = params.pop("config_file", None)
    output = params.pop("output", None)
    try:
        config = get_config(config_file, threads=params.get("threads"), seed=params.get("seed"))
    except (ConfigError, ValidationError, ValueError) as e:
        _fail(str(e).splitlines()[0], EXIT_USAGE)
    configure_logging(config.log_level)
    if "seed" in params:
        params["seed"] = config.seed
    stream_id = params.get("stream", 0)
    stream = RngStream(config.seed, stream_id)

    started = time.perf_counter()
    try:
        result = produce(config, stream)
    except (DomainError, RangeError, ValidationError) as e:
        _fail(str(e).splitlines()[0], EXIT_USAGE)
    except (NumericFailure, OverflowError) as e:
        _fail(f"{type(e).__name__}: {e}", EXIT_NUMERIC)
    except typer.Exit:
        raise
    except Exception as e:
        _fail(f"{type(e).__name__}: {e}".splitlines()[0], EXIT_NUMERIC)

    writer = TableWriter(result.table, result.columns, json_lines=params.get("json_lines", False))
    data_digest = writer.write(result.rows, output)
    manifest = RunManifest(
        subcommand=subcommand,
        params=params,
        seed=config.seed,
        stream_ids=[stream_id] if "stream" in params else [],
        duration_seconds=time.perf_counter() - started,
        outputs={"data": data_digest},
        config=config.model_dump(mode="json", exclude=RUNTIME_FIELDS),
    )
    write_manifest(manifest, manifest_path(manifest, output, config.manifest_dir))
    if result.status:
        raise typer.Exit(result.status)
    return data_digest


def _waiting_law(kind: str, beta: Optional[float], theta: float, rate: float) -> WaitingLaw:
    if kind == "exponential":
        return WaitingLaw.exponential(rate)
    if beta is None:
        raise DomainError(f"--beta is required for {kind} waiting times")
    if kind == "mittag_leffler":
        return WaitingLaw.mittag_leffler(beta)
    if kind == "pareto":
        return WaitingLaw.pareto(beta, theta)
    raise DomainError(f"unknown waiting law {kind!r}; use one of {', '.join(WAITING_KINDS)}")


def _jump_law(kind: str, alpha: Optional[float], sigma: float, theta: float) -> JumpLaw:
    if kind == "two_point":
        return JumpLaw.two_point()
    if kind == "gaussian":
        return JumpLaw.gaussian(sigma)
    if kind == "unit_drift":
        return JumpLaw.unit_drift()
    if alpha is None:
        raise DomainError(f"--alpha is required for {kind} jumps")
    if kind == "sym_pareto":
        return JumpLaw.sym_pareto(alpha, theta)
    if kind == "sym_stable":
        return JumpLaw.sym_stable(alpha)
    raise DomainError(f"unknown jump law {kind!r}; use one of {', '.join(JUMP_KINDS)}")


@app.command("ml-eval")
def ml_eval(
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Order of E_alpha"),
    beta2: float = typer.Option(1.0, "--beta2", help="Second parameter of E_{alpha,beta2}"),
    z: Optional[List[float]] = typer.Option(None, "--z", help="Argument (repeatable)"),
    survival: bool = typer.Option(False, "--survival", help="Survival E_beta(-t^beta) at --t"),
    density: bool = typer.Option(False, "--density", help="Waiting-time density at --t"),
    use_mwright: bool = typer.Option(False, "--mwright", help="M-Wright M_beta at --z"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Exponent for --survival, "
                                         "--density and --mwright"),
    t: Optional[List[float]] = typer.Option(None, "--t", help="Time (repeatable)"),
    method: str = typer.Option("auto", "--method", help="M-Wright route: auto, series, "
                               "sine_series, integral (integral also routes --density)"),
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Evaluate Mittag-Leffler functions, the waiting-time law, or the M-Wright function."""
    params = dict(locals())

    def produce(config: Config, stream: RngStream) -> TableOutput:
        rows: List[Sequence[Any]] = []
        if survival or density or use_mwright:
            if beta is None:
                raise DomainError("--beta is required")
        if survival or density:
            for ti in t or []:
                if survival:
                    if ti == 0.0:
                        rows.append((ti, 1.0, 0.0, "series"))
                        continue
                    if ti < 0.0:
                        raise DomainError(f"time must be nonnegative, got {ti}")
                    r = ml_two(beta, 1.0, -(ti**beta), **_ml_kwargs(config))
                    rows.append((ti, min(max(float(r.value), 0.0), 1.0), r.abs_error_bound,
                                 r.method_used))
                else:
                    route = "integral" if method == "integral" else "series"
                    r = ml_density_result(beta, ti, route, **_ml_kwargs(config))
                    rows.append((ti, float(r), r.abs_error_bound, r.method_used))
        elif use_mwright:
            for zi in z or []:
                rows.append((zi, mwright(beta, zi, method), MWRIGHT_TOLERANCE, method))
        else:
            if alpha is None:
                raise DomainError("--alpha is required")
            for zi in z or []:
                r = ml_two(alpha, beta2, zi, **_ml_kwargs(config))
                rows.append((zi, float(r.value), r.abs_error_bound, r.method_used))
        return TableOutput("ml_eval", ["argument", "value", "abs_error_bound", "method"], rows)

    _execute("ml-eval", params, produce)


def _ml_kwargs(config: Config) -> Dict[str, Any]:
    return {
        "series_radius": config.series_radius,
        "asymptotic_threshold": config.asymptotic_threshold,
        "z_max_real": config.z_max_real,
        "z_max_complex": config.z_max_complex,
        "extended_digits": config.extended_digits,
        "nodes": config.talbot_nodes,
    }


@app.command()
def sample(
    law: str = typer.Option("mittag_leffler", "--law", help="Waiting law, jump law, or "
                            "one_sided_stable"),
    n: int = typer.Option(1000, "--n", help="Number of samples"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Waiting-time or stable order"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Jump tail exponent"),
    theta: float = typer.Option(1.0, "--theta", help="Pareto scale"),
    rate: float = typer.Option(1.0, "--rate", help="Exponential rate"),
    sigma: float = typer.Option(1.0, "--sigma", help="Gaussian standard deviation"),
    inversion: bool = typer.Option(False, "--inversion", help="Mittag-Leffler by survival "
                                   "inversion instead of the transformation formula"),
    seed: Optional[int] = SEED,
    stream: int = STREAM,
    threads: Optional[int] = THREADS,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Draw variates from one of the supported laws."""
    params = dict(locals())

    def produce(config: Config, rng: RngStream) -> TableOutput:
        if n < 1:
            raise DomainError(f"--n must be positive, got {n}")
        if law == "one_sided_stable" and beta is None:
            raise DomainError("--beta is required for one_sided_stable")
        waiting = _waiting_law(law, beta, theta, rate) if law in WAITING_KINDS else None
        jump = None
        if waiting is None and law != "one_sided_stable":
            jump = _jump_law(law, alpha, sigma, theta)

        def draw(k: int, child: RngStream) -> np.ndarray:
            if waiting is None and jump is None:
                return sample_one_sided_stable(beta, child, size=k)
            if jump is not None:
                return sample_jump(jump, child, size=k)
            if inversion and waiting.kind == "mittag_leffler":
                return sample_mittag_leffler_inversion(waiting.beta, child, size=k)
            return sample_waiting(waiting, child, size=k)

        values = np.concatenate(run_batches(draw, n, rng, threads=config.threads))
        return TableOutput("sample", ["index", "value"], list(enumerate(values.tolist())))

    _execute("sample", params, produce)


@app.command("renewal-sim")
def renewal_sim(
    waiting: str = typer.Option("mittag_leffler", "--waiting", help="exponential, "
                                "mittag_leffler or pareto"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Tail exponent"),
    theta: float = typer.Option(1.0, "--theta", help="Pareto scale"),
    rate: float = typer.Option(1.0, "--rate", help="Exponential rate"),
    horizon: float = typer.Option(10.0, "--horizon", help="Simulated time span"),
    n_paths: int = typer.Option(5, "--n-paths", help="Number of paths"),
    pmf: bool = typer.Option(False, "--pmf", help="Counting law at --horizon instead of "
                             "event times"),
    seed: Optional[int] = SEED,
    stream: int = STREAM,
    threads: Optional[int] = THREADS,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Simulate renewal paths, or compare the counting law with its exact form."""
    params = dict(locals())

    def produce(config: Config, rng: RngStream) -> TableOutput:
        law = _waiting_law(waiting, beta, theta, rate)
        service = RenewalService(config)
        if not pmf:
            paths = service.simulate_paths(law, horizon, n_paths, rng)
            rows = [
                (i, k + 1, float(time_))
                for i, path in enumerate(paths)
                for k, time_ in enumerate(path.event_times)
            ]
            return TableOutput("renewal_events", ["path", "index", "time"], rows)
        if not horizon > 0:
            raise DomainError(f"--horizon must be positive for --pmf, got {horizon}")
        empirical = service.empirical_pmf(law, horizon, n_paths, rng)
        if law.kind == "mittag_leffler":
            exact = counting_distribution(law.beta, horizon)
        else:
            exact = np.array(
                [renewal_pmf(law, 1.0, 1.0, horizon, k) for k in range(max(empirical.size, 1))]
            )
        size = max(exact.size, empirical.size)
        exact = np.pad(exact, (0, size - exact.size))
        empirical = np.pad(empirical, (0, size - empirical.size))
        rows = [(horizon, k, float(empirical[k]), float(exact[k])) for k in range(size)]
        return TableOutput("counting_pmf", ["t", "k", "empirical", "exact"], rows)

    _execute("renewal-sim", params, produce)


@app.command("thin-demo")
def thin_demo(
    waiting: str = typer.Option("pareto", "--waiting", help="mittag_leffler or pareto"),
    beta: float = typer.Option(0.75, "--beta", help="Tail exponent"),
    theta: float = typer.Option(1.0, "--theta", help="Pareto scale"),
    tau: Optional[List[float]] = typer.Option(None, "--tau", help="Time scale (repeatable, "
                                              "decreasing)"),
    s: Optional[List[float]] = typer.Option(None, "--s", help="Laplace variable (repeatable)"),
    respeed: bool = typer.Option(False, "--respeed", help="Respeed by a = lambda tau^beta "
                                 "instead of thinning"),
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Deviation of the thinned (or respeeded) transform from 1/(1 + s^beta)."""
    params = dict(locals())

    def produce(config: Config, stream: RngStream) -> TableOutput:
        law = _waiting_law(waiting, beta, theta, 1.0)
        taus = tau or [1e-1, 1e-2, 1e-3, 1e-4]
        if any(b >= a for a, b in zip(taus, taus[1:])):
            raise DomainError("--tau values must be strictly decreasing")
        rows = []
        for tau_ in taus:
            q = law.lambda_scale * tau_**law.beta
            for s_ in s or [0.25, 1.0, 4.0]:
                if respeed:
                    value = respeed_transform(law, tau_, q, s_)
                else:
                    value = thinned_laplace(law, q, tau_, s_)
                rows.append((tau_, q, s_, abs(value - 1.0 / (1.0 + s_**law.beta))))
        return TableOutput("thinning_limit", ["tau", "q", "s", "deviation"], rows)

    _execute("thin-demo", params, produce)


@app.command("ctrw-sim")
def ctrw_sim(
    waiting: str = typer.Option("mittag_leffler", "--waiting", help="Waiting law"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Waiting-time exponent"),
    theta: float = typer.Option(1.0, "--theta", help="Pareto waiting scale"),
    rate: float = typer.Option(1.0, "--rate", help="Exponential rate"),
    jump: str = typer.Option("gaussian", "--jump", help="Jump law"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Jump tail exponent"),
    sigma: float = typer.Option(1.0, "--sigma", help="Gaussian jump standard deviation"),
    jump_theta: float = typer.Option(1.0, "--jump-theta", help="Pareto jump scale"),
    h: float = typer.Option(1.0, "--h", help="Space scale"),
    tau: float = typer.Option(1.0, "--tau", help="Time scale"),
    a: float = typer.Option(1.0, "--a", help="Respeeding factor, at most 1 on paths"),
    well_scaled: bool = typer.Option(False, "--well-scaled", help="Derive tau from h"),
    n_paths: int = typer.Option(10_000, "--n-paths", help="Number of walks"),
    t: Optional[List[float]] = typer.Option(None, "--t", help="Observation time (repeatable)"),
    kappa: Optional[List[float]] = typer.Option(None, "--kappa", help="Wavenumber "
                                                "(repeatable); selects the char-function table"),
    bins: int = typer.Option(50, "--bins", help="Histogram bins"),
    x_min: float = typer.Option(-5.0, "--x-min", help="Histogram lower edge"),
    x_max: float = typer.Option(5.0, "--x-max", help="Histogram upper edge"),
    seed: Optional[int] = SEED,
    stream: int = STREAM,
    threads: Optional[int] = THREADS,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Simulate a continuous-time random walk; write histograms or char functions."""
    params = dict(locals())

    def produce(config: Config, rng: RngStream) -> TableOutput:
        w = _waiting_law(waiting, beta, theta, rate)
        j = _jump_law(jump, alpha, sigma, jump_theta)
        if well_scaled:
            scale = ScaleState.well_scaled_for(w, j, h, a)
        else:
            scale = ScaleState.for_laws(w, j, h, tau, a)
        cfg = CtrwConfig(
            waiting=w, jump=j, scale=scale, n_paths=n_paths, observation_times=t or [1.0]
        )
        positions = CtrwService(config).simulate(cfg, rng)
        rows: List[Sequence[Any]] = []
        if kappa:
            for col, ti in enumerate(cfg.observation_times):
                field = empirical_char_function(positions[:, col], kappa, ti)
                rows.extend(zip([ti] * len(kappa), field.grid, field.values, field.stderr))
            return TableOutput("ctrw_char", ["t", "kappa", "re_estimate", "stderr"], rows)
        if not x_max > x_min or bins < 1:
            raise DomainError("histogram needs x_max > x_min and at least one bin")
        edges = np.linspace(x_min, x_max, bins + 1)
        for col, ti in enumerate(cfg.observation_times):
            field = empirical_density(positions[:, col], edges, ti)
            rows.extend(
                (ti, float(lo), float(hi), v)
                for lo, hi, v in zip(edges[:-1], edges[1:], field.values)
            )
        return TableOutput("ctrw_histogram", ["t", "bin_left", "bin_right", "density"], rows)

    _execute("ctrw-sim", params, produce)


@app.command()
def density(
    alpha: float = typer.Option(2.0, "--alpha", help="Space exponent in (0, 2]"),
    beta: float = typer.Option(1.0, "--beta", help="Time exponent in (0, 1]"),
    t: float = typer.Option(1.0, "--t", help="Evolution time"),
    x_min: float = typer.Option(-5.0, "--x-min", help="Grid start"),
    x_max: float = typer.Option(5.0, "--x-max", help="Grid end"),
    n_points: int = typer.Option(101, "--n-points", help="Grid points"),
    route: str = typer.Option("fourier", "--route", help="fourier, subordination or mc"),
    n_paths: int = typer.Option(100_000, "--n-paths", help="Particles for the mc route"),
    seed: Optional[int] = SEED,
    stream: int = STREAM,
    threads: Optional[int] = THREADS,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Density u(x, t) of the space-time fractional diffusion."""
    params = dict(locals())

    def produce(config: Config, rng: RngStream) -> TableOutput:
        p = FracDiffProblem(alpha=alpha, beta=beta, t=t)
        if n_points < 2:
            raise DomainError("--n-points must be at least 2")
        console.print(f"[dim]regime: {p.regime}[/dim]")
        x = np.linspace(x_min, x_max, n_points)
        u = FracDiffService(config).density(p, x, route=route, n_paths=n_paths, stream=rng)
        return TableOutput("density", ["x", "u"], list(zip(x.tolist(), u.tolist())))

    _execute("density", params, produce)


@app.command()
def subordinate(
    alpha: float = typer.Option(2.0, "--alpha", help="Space exponent in (0, 2]"),
    beta: float = typer.Option(0.5, "--beta", help="Time exponent in (0, 1]"),
    dt_star: float = typer.Option(1e-3, "--dt-star", help="Operational time step"),
    n_steps: int = typer.Option(1000, "--n-steps", help="Steps per path"),
    n_paths: int = typer.Option(1, "--n-paths", help="Number of paths"),
    seed: Optional[int] = SEED,
    stream: int = STREAM,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Parametric subordination paths: points (t(t_*), y(t_*)) of true particle positions."""
    params = dict(locals())

    def produce(config: Config, rng: RngStream) -> TableOutput:
        p = FracDiffProblem(alpha=alpha, beta=beta, t=1.0)
        t_star, times, positions = subordination_paths(p, dt_star, n_steps, n_paths, rng)
        rows = [
            (i, float(r), float(ti), float(xi))
            for i in range(n_paths)
            for r, ti, xi in zip(t_star, times[i], positions[i])
        ]
        return TableOutput("subordination", ["path", "t_star", "t", "x"], rows)

    _execute("subordinate", params, produce)


@app.command("variance-scan")
def variance_scan(
    beta: float = typer.Option(0.5, "--beta", help="Time exponent in (0, 1]"),
    t: Optional[List[float]] = typer.Option(None, "--t", help="Time (repeatable, increasing)"),
    n_paths: int = typer.Option(100_000, "--n-paths", help="Number of paths"),
    route: str = typer.Option("ctrw", "--route", help="ctrw or subordination"),
    h: float = typer.Option(0.1, "--h", help="Space scale of the well-scaled walk"),
    seed: Optional[int] = SEED,
    stream: int = STREAM,
    threads: Optional[int] = THREADS,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Empirical variance against 2 t^beta / Gamma(1 + beta) for Gaussian jumps."""
    params = dict(locals())

    def produce(config: Config, rng: RngStream) -> TableOutput:
        times = t or [1.0, 2.0, 4.0]
        if route == "ctrw":
            w, j = WaitingLaw.mittag_leffler(beta), JumpLaw.gaussian()
            cfg = CtrwConfig(
                waiting=w, jump=j, scale=ScaleState.well_scaled_for(w, j, h),
                n_paths=n_paths, observation_times=times,
            )
            estimates = CtrwService(config).variance_scan(cfg, rng)
        elif route == "subordination":
            estimates = FracDiffService(config).variance_scan(beta, times, n_paths, rng)
        else:
            raise DomainError(f"unknown route {route!r}; use ctrw or subordination")
        rows = [
            (e.t, 2.0 * e.t**beta / math.gamma(1.0 + beta), e.value, e.stderr)
            for e in estimates
        ]
        return TableOutput("variance_scan", ["t", "analytic", "empirical", "stderr"], rows)

    _execute("variance-scan", params, produce)


@app.command()
def validate(
    quick: bool = typer.Option(False, "--quick", help="Only the fast checks"),
    only: Optional[List[str]] = typer.Option(None, "--only", help="Run this check "
                                             "(repeatable)"),
    seed: Optional[int] = SEED,
    threads: Optional[int] = THREADS,
    config_file: Optional[Path] = CONFIG,
    output: Optional[Path] = OUTPUT,
    json_lines: bool = JSON,
) -> None:
    """Run the named cross-route checks; exit 1 on any failure, 3 on a numerical error."""
    params = dict(locals())

    def produce(config: Config, stream: RngStream) -> TableOutput:
        results = ValidatorService(config).run(config.seed, quick=quick, only=only)
        summary = Table(title="Validation")
        summary.add_column("Check")
        summary.add_column("Result", justify="center")
        summary.add_column("Detail", style="dim")
        for r in results:
            mark = "[green]pass[/green]" if r.passed else "[red]FAIL[/red]"
            summary.add_row(r.name, mark, r.detail)
        console.print(summary)
        status = 0
        if any(r.error for r in results):
            status = EXIT_NUMERIC
        elif not all(r.passed for r in results):
            status = EXIT_FAILED
        rows = [(r.name, r.passed, r.value, r.tolerance, r.detail) for r in results]
        return TableOutput(
            "validation", ["name", "passed", "value", "tolerance", "detail"], rows, status
        )

    _execute("validate", params, produce)


@app.command()
def replay(
    manifest: Path = typer.Argument(..., help="Run manifest to re-execute"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Keep the replayed "
                                          "output here"),
) -> None:
    """Re-run a manifest and compare the output digest; exit 1 on mismatch."""
    try:
        record = load_manifest(manifest)
    except ManifestError as e:
        _fail(str(e), EXIT_USAGE)
    command = REPLAYABLE.get(record.subcommand)
    if command is None:
        _fail(f"cannot replay subcommand {record.subcommand!r}", EXIT_USAGE)
    expected = record.outputs.get("data")

    with tempfile.TemporaryDirectory() as tmp:
        target = output or Path(tmp) / "replay.out"
        config_file = None
        if record.config:
            config_file = Path(tmp) / "replay.cfg"
            write_config_file(record.config, config_file)
        try:
            command(**record.params, config_file=config_file, output=target)
        except typer.Exit as e:
            # validate exits nonzero on failed checks but still writes its report
            if e.exit_code not in (0, EXIT_FAILED) or not target.exists():
                raise
        except TypeError as e:
            _fail(f"manifest parameters do not fit {record.subcommand}: {e}", EXIT_USAGE)
        actual = digest(target.read_text(encoding="utf-8"))

    if actual != expected:
        console.print(f"[red]Mismatch:[/red] expected {expected}, got {actual}")
        raise typer.Exit(EXIT_FAILED)
    console.print(f"[green]Replay matches[/green] {actual[:12]}")


REPLAYABLE: Dict[str, Callable[..., None]] = {
    "ml-eval": ml_eval,
    "sample": sample,
    "renewal-sim": renewal_sim,
    "thin-demo": thin_demo,
    "ctrw-sim": ctrw_sim,
    "density": density,
    "subordinate": subordinate,
    "variance-scan": variance_scan,
    "validate": validate,
}


if __name__ == "__main__":
    app()
