"""Command-line interface: run single episodes, Monte Carlo studies, and the
live steering service.

Verbosity is controlled by the ENCIRCLE_LOG environment variable
(DEBUG/INFO/WARNING/ERROR); diagnostics go to stderr, results to stdout and
the requested output files.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional

import click

from .errors import EncircleError, ParseError, ValidationError
from .experiments import monte_carlo
from .policies import POLICY_KINDS, PolicySpec
from .scenario import Scenario, load_scenario
from .simulation import TRACE_FLOAT_FORMAT, run_episode, write_trace_csv

log = logging.getLogger("encircle.cli")


def _setup_logging() -> None:
    level = os.environ.get("ENCIRCLE_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _fail(exc: EncircleError) -> None:
    kind = type(exc).__name__
    click.echo(f"error: {kind}: {exc}", err=True)
    code = 2 if isinstance(exc, (ParseError, ValidationError)) else 1
    sys.exit(code)


def _load(path: str, policy: Optional[str], seed: Optional[int]) -> Scenario:
    scenario = load_scenario(path)
    if policy is not None:
        scenario = scenario.with_overrides(policy=PolicySpec(kind=policy))
    if seed is not None:
        scenario = scenario.with_overrides(seed=seed)
    return scenario


@click.group()
def main() -> None:
    """Pursuit-evasion episodes with encirclement and capture-time certificates."""
    _setup_logging()


@main.command()
@click.argument("scenario_path", type=str)
@click.option("--policy", type=click.Choice(POLICY_KINDS), default=None,
              help="Override the scenario's evader policy.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out", "out_dir", type=str, default=None,
              help="Output directory (default runs/<scenario-stem>).")
def run(scenario_path: str, policy: Optional[str], seed: Optional[int],
        out_dir: Optional[str]) -> None:
    """Run one episode; write trace.csv and result.json."""
    try:
        scenario = _load(scenario_path, policy, seed)
        trace, result = run_episode(scenario)
    except EncircleError as exc:
        _fail(exc)
        return

    out = Path(out_dir) if out_dir else Path("runs") / Path(scenario_path).stem
    out.mkdir(parents=True, exist_ok=True)
    write_trace_csv(trace, str(out / "trace.csv"))
    summary = {
        "scenario": scenario.to_dict(),
        "policy": scenario.policy.kind,
        "result": result.to_dict(),
        "steps": len(trace),
    }
    (out / "result.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )

    f = lambda x: format(x, TRACE_FLOAT_FORMAT)  # noqa: E731
    if result.captured:
        click.echo(
            f"captured=true t_capture={f(result.t_capture)} by=p{result.captured_by} "
            f"t_bound={f(result.t_bound)} tau={f(result.tau)}"
        )
    else:
        click.echo(f"captured=false t_bound={f(result.t_bound)}")
    click.echo(
        f"encirclement={'ok' if result.encirclement_ok else 'VIOLATED'} "
        f"min_area={f(result.min_area_seen)}"
    )
    click.echo(f"wrote {out / 'trace.csv'} and {out / 'result.json'}")


@main.command()
@click.argument("scenario_path", type=str)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--mu", "mu_list", type=str, default=None,
              help="Comma-separated evader max speeds (default: scenario value).")
@click.option("--policy", type=click.Choice(POLICY_KINDS), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_dir", type=str, default=None,
              help="Output directory (default runs/<scenario-stem>-mc).")
def montecarlo(scenario_path: str, trials: int, mu_list: Optional[str],
               policy: Optional[str], seed: Optional[int],
               out_dir: Optional[str]) -> None:
    """Seeded Monte Carlo over evader starts; write per-trial CSV, tau
    histograms, and an aggregate JSON summary."""
    try:
        if trials < 1:
            raise ValidationError(f"--trials must be >= 1, got {trials}")
        scenario = load_scenario(scenario_path)
        mc_seed = seed if seed is not None else scenario.seed
        if mu_list is not None:
            try:
                mus = [float(x) for x in mu_list.split(",") if x.strip()]
            except ValueError as exc:
                raise ParseError(f"--mu: {exc}") from exc
        else:
            mus = [scenario.params.mu_max]
        pol = PolicySpec(kind=policy) if policy is not None else None
        results = monte_carlo(scenario, trials, mus, mc_seed, policy=pol)
    except EncircleError as exc:
        _fail(exc)
        return

    out = Path(out_dir) if out_dir else Path("runs") / f"{Path(scenario_path).stem}-mc"
    out.mkdir(parents=True, exist_ok=True)
    f = lambda x: format(x, TRACE_FLOAT_FORMAT)  # noqa: E731

    with open(out / "trials.csv", "w", encoding="utf-8", newline="\n") as fp:
        fp.write(
            "mu_max,trial,evader_x,evader_y,captured,t_capture,t_bound,tau,"
            "min_area_seen,encirclement_ok\n"
        )
        for res in results:
            for r in res.rows:
                fp.write(
                    ",".join(
                        [
                            f(r.mu_max),
                            str(r.trial),
                            f(r.evader_start.x),
                            f(r.evader_start.y),
                            "true" if r.captured else "false",
                            f(r.t_capture) if r.t_capture is not None else "",
                            f(r.t_bound),
                            f(r.tau) if r.tau is not None else "",
                            f(r.min_area_seen),
                            "true" if r.encirclement_ok else "false",
                        ]
                    )
                    + "\n"
                )

    for res in results:
        s = res.stats
        hist_path = out / f"tau_hist_mu{s.mu_max:g}.csv"
        with open(hist_path, "w", encoding="utf-8", newline="\n") as fp:
            fp.write("bin_lo,bin_hi,count\n")
            for lo, hi, c in zip(s.hist_edges, s.hist_edges[1:], s.hist_counts):
                fp.write(f"{f(lo)},{f(hi)},{c}\n")

    summary = {"trials": trials, "seed": mc_seed, "stats": [r.stats.to_dict() for r in results]}
    (out / "summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )

    for res in results:
        s = res.stats
        click.echo(
            f"mu={s.mu_max:g}: captured {s.captured}/{s.trials} "
            f"mean_t={f(s.mean_t)} std_t={f(s.std_t)} tau_max={f(s.tau_max)}"
        )
    click.echo(f"wrote {out / 'trials.csv'}, tau histograms, {out / 'summary.json'}")


@main.command()
@click.argument("scenario_path", type=str)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8090, show_default=True)
@click.option("--pacing", type=float, default=1.0, show_default=True,
              help="Simulated seconds per wall-clock second.")
@click.option("--frame-rate", type=float, default=30.0, show_default=True)
@click.option("--ui", "ui_dir", type=str, default=None,
              help="Serve a static client build from this directory at /.")
def serve(scenario_path: str, host: str, port: int, pacing: float,
          frame_rate: float, ui_dir: Optional[str]) -> None:
    """Host the live steering service (WebSocket endpoint /ws)."""
    import uvicorn

    from .service import create_app

    try:
        scenario = load_scenario(scenario_path)
        app = create_app(
            scenario, pacing=pacing, frame_rate=frame_rate, ui_dir=ui_dir
        )
    except EncircleError as exc:
        _fail(exc)
        return
    click.echo(f"steering service on ws://{host}:{port}/ws", err=True)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        click.echo(f"error: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
