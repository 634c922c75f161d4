"""Command-line interface: construct, validate, deform, and realize spectral
data of finite-type CMC cylinders in the 3-sphere.

Exit codes: 0 success, 2 malformed input (schema/parse errors), 3 numerical
failure (a validation or flow event prevented completion).
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys

import click
import numpy as np

from . import __version__
from .curve import SpectralData, check_conditions, h_values
from .frames import find_period, isospectral_step, offdiag_potential
from .polynomials import roots
from .rotational import classify_membership, genus0, genus1
from .serialization import (
    ParseError,
    TrajectoryWriter,
    load_potential,
    load_spectral_data,
    potential_to_dict,
    save_potential,
    save_spectral_data,
    spectral_data_to_dict,
)
from .whitham import FlowState, make_strategy, monitors, run_flow

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERICAL = 3


def thread_cap() -> int | None:
    """Parallelism cap from SPECTRAL_CMC_THREADS (None = unlimited)."""
    raw = os.environ.get("SPECTRAL_CMC_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError as exc:
        raise ParseError("SPECTRAL_CMC_THREADS must be an integer") from exc
    if n < 1:
        raise ParseError("SPECTRAL_CMC_THREADS must be >= 1")
    return n


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: command plus its input/output paths and numeric
    options.  `run` dispatches on `command`."""

    command: str  # validate | rot-gen | flow-run | surface | isospectral | period
    input: str | None = None
    output: str | None = None
    log: str | None = None
    report: str | None = None
    plot: str | None = None
    out_dir: str | None = None
    genus: int = 0
    H: float = 0.0
    alpha: float = 2.0
    non_embedded: bool = False
    strategy: str | None = None
    rate: float = 1.0
    sign: int = 1
    beta: complex | None = None
    gain: float = 1.0
    dt: float = 1e-3
    steps: int = 0
    resolution: int = 64
    extent: float = 0.5
    spacing: float | None = None
    tol: float = 1e-9
    direction: int = 0
    guess: complex | None = None
    seed: int = 0

    def __post_init__(self):
        if self.tol <= 0 or self.dt <= 0:
            raise ParseError("tolerances and dt must be > 0")
        if self.steps < 0:
            raise ParseError("steps must be >= 0")

    def path(self, p: str | None) -> str | None:
        if p is None or self.out_dir is None or os.path.isabs(p):
            return p
        os.makedirs(self.out_dir, exist_ok=True)
        return os.path.join(self.out_dir, p)


def run(config: RunConfig) -> int:
    """Execute one configured command; returns the process exit code.

    Raises ParseError for malformed inputs; numerical errors from the
    library propagate to the caller.
    """
    thread_cap()  # validate the env var early
    handler = _COMMANDS.get(config.command)
    if handler is None:
        raise ParseError(f"unknown command {config.command!r}")
    return handler(config)


def _emit(obj, path: str | None):
    text = json.dumps(obj, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    click.echo(text)


def _run_validate(cfg: RunConfig) -> int:
    data = load_spectral_data(cfg.input)
    report = check_conditions(data, tol=cfg.tol)
    _emit(report.as_dict(), cfg.path(cfg.report))
    if cfg.plot:
        from .plots import plot_delta_scan, plot_spectral_plane

        base = cfg.path(cfg.plot)
        root, ext = os.path.splitext(base)
        ext = ext or ".png"
        plot_spectral_plane(data, f"{root}-plane{ext}")
        plot_delta_scan(data, f"{root}-delta{ext}")
    return EXIT_OK if report.all_pass else EXIT_NUMERICAL


def _run_rot_gen(cfg: RunConfig) -> int:
    if cfg.genus == 0:
        data = genus0(cfg.H, non_embedded=cfg.non_embedded)
    elif cfg.genus == 1:
        data = genus1(cfg.H, cfg.alpha)
    else:
        raise ParseError("--genus must be 0 or 1")
    out = cfg.path(cfg.output)
    if out:
        save_spectral_data(data, out)
    else:
        click.echo(json.dumps(spectral_data_to_dict(data), indent=2))
    return EXIT_OK


def _strategy_from_config(cfg: RunConfig, data: SpectralData):
    kind = cfg.strategy
    if kind == "shrink":
        return make_strategy("shrink", rate=cfg.rate)
    if kind == "separate":
        return make_strategy("separate", sign=cfg.sign)
    if kind == "move-root":
        if cfg.beta is None:
            raise ParseError("--beta is required for the move-root strategy")
        return make_strategy("move-root", beta=cfg.beta, direction=cfg.rate)
    if kind == "track":
        # Hold the current h-values at the roots of b constant.
        rb = [r for r, _ in roots(data.b)]
        held = [v[0] for v in h_values(data, rb)]
        curves = [(lambda t, v=v: v) for v in held]
        return make_strategy("track", curves=curves, gain=cfg.gain)
    raise ParseError(f"unknown strategy {kind!r}")


def _run_flow(cfg: RunConfig) -> int:
    data = load_spectral_data(cfg.input)
    out = cfg.path(cfg.output)
    if cfg.steps == 0:
        if out:
            save_spectral_data(data, out)
        if cfg.log:
            with TrajectoryWriter(cfg.path(cfg.log), data.g) as writer:
                state = FlowState.from_data(data)
                writer.write(state, monitors(state))
        return EXIT_OK
    strategy = _strategy_from_config(cfg, data)
    state = FlowState.from_data(data)
    traj = run_flow(state, strategy, cfg.dt, cfg.steps)
    if cfg.log:
        with TrajectoryWriter(cfg.path(cfg.log), data.g) as writer:
            seen = 0
            for s in traj:
                new_events = s.events[seen:]
                seen = len(s.events)
                writer.write(s, monitors(s), new_events)
    final = traj[-1]
    if out:
        save_spectral_data(final.to_spectral_data(), out)
    if cfg.plot:
        from .plots import plot_trajectory

        times = [s.t for s in traj]
        coeffs = {
            f"a{k}": [s.a.coeff(k) for s in traj] for k in range(2 * data.g + 1)
        }
        arcs = [monitors(s).get("short_arc_length") for s in traj]
        arc = arcs if all(v is not None for v in arcs) else None
        plot_trajectory(times, coeffs, cfg.path(cfg.plot), arc=arc)
    click.echo(
        json.dumps(
            {
                "t_final": final.t,
                "steps": cfg.steps,
                "events": [str(e) for e in final.events if not _is_projection(e)],
            },
            indent=2,
        )
    )
    return EXIT_OK


def _is_projection(event) -> bool:
    return isinstance(event, tuple) and len(event) == 3 and event[0] == "projection"


def _run_surface(cfg: RunConfig) -> int:
    from .surface import build_surface, mesh_diagnostics

    data = load_spectral_data(cfg.input)
    mesh = build_surface(
        data, resolution=cfg.resolution, extent=cfg.extent, spacing=cfg.spacing
    )
    diag = mesh_diagnostics(mesh)
    out = cfg.path(cfg.output)
    if out:
        root, ext = os.path.splitext(out)
        if ext.lower() == ".obj":
            mesh.to_obj(out)
        else:
            mesh.to_r4_csv(out)
    if cfg.report:
        summary = {
            k: v
            for k, v in diag.items()
            if not isinstance(v, np.ndarray)
        }
        _emit(summary, cfg.path(cfg.report))
    else:
        click.echo(
            json.dumps(
                {k: v for k, v in diag.items() if not isinstance(v, np.ndarray)},
                indent=2,
            )
        )
    if cfg.plot:
        from .plots import plot_mesh_preview

        plot_mesh_preview(mesh, cfg.path(cfg.plot))
    return EXIT_OK


def _load_potential_any(cfg: RunConfig):
    try:
        return load_potential(cfg.input)
    except ParseError:
        data = load_spectral_data(cfg.input)
        return offdiag_potential(data.a, data.g)


def _run_isospectral(cfg: RunConfig) -> int:
    xi = _load_potential_any(cfg)
    for _ in range(max(cfg.steps, 1)):
        xi = isospectral_step(xi, cfg.direction, cfg.dt)
    out = cfg.path(cfg.output)
    if out:
        save_potential(xi, out)
    else:
        click.echo(json.dumps(potential_to_dict(xi), indent=2))
    return EXIT_OK


def _run_period(cfg: RunConfig) -> int:
    data = load_spectral_data(cfg.input)
    xi = offdiag_potential(data.a, data.g)
    guess = cfg.guess
    if guess is None:
        member = classify_membership(data)
        if member.kind in ("Rot0", "Boundary") and member.H is not None:
            guess = 4.0 * 8.0 * abs(data.b.coeff(data.g + 1))
        elif member.kind == "Rot1":
            guess = 4.0 * 8.0 * abs(data.b.coeff(2))
        else:
            raise ParseError(
                "--guess is required for data outside the rotational families"
            )
    tau = find_period(xi, data.lambda1, data.lambda2, guess)
    _emit(
        {"tau": [tau.real, tau.imag], "guess": [complex(guess).real,
                                                complex(guess).imag]},
        cfg.path(cfg.report),
    )
    return EXIT_OK


_COMMANDS = {
    "validate": _run_validate,
    "rot-gen": _run_rot_gen,
    "flow-run": _run_flow,
    "surface": _run_surface,
    "isospectral": _run_isospectral,
    "period": _run_period,
}


def _invoke(make_cfg):
    try:
        code = run(make_cfg())
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    except (ValueError, RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        click.echo(f"numerical failure: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    sys.exit(code)


def _complex_opt(_ctx, _param, value):
    if value is None:
        return None
    try:
        parts = value.split(",")
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise click.BadParameter("expected 're' or 're,im'")


@click.group()
@click.version_option(__version__)
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for relative output paths.")
@click.pass_context
def main(ctx, out_dir):
    """Spectral data of finite-type CMC cylinders in the 3-sphere."""
    ctx.ensure_object(dict)
    ctx.obj["out_dir"] = out_dir


@main.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False), default=None,
              help="Also write the report JSON to this path.")
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Render spectral-plane and trace-scan figures (basename).")
@click.pass_context
def validate(ctx, data, tol, report, plot):
    """Check the closing conditions of spectral data and print the report."""
    _invoke(lambda: RunConfig("validate", input=data, tol=tol, report=report,
                      plot=plot, out_dir=ctx.obj["out_dir"]))


@main.group()
def rot():
    """Rotational (closed-form) spectral data."""


@rot.command("gen")
@click.option("--genus", type=click.IntRange(0, 1), required=True)
@click.option("--H", "h_mean", type=float, required=True,
              help="Mean curvature H >= 0.")
@click.option("--alpha", type=float, default=2.0, show_default=True,
              help="Genus-1 branch parameter alpha >= 2.")
@click.option("--non-embedded", is_flag=True,
              help="Select the non-embedded genus-0 branch.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def rot_gen(ctx, genus, h_mean, alpha, non_embedded, output):
    """Generate rotational spectral data."""
    _invoke(lambda: RunConfig("rot-gen", genus=genus, H=h_mean, alpha=alpha,
                      non_embedded=non_embedded, output=output,
                      out_dir=ctx.obj["out_dir"]))


@main.command("rot-gen", hidden=True)
@click.option("--genus", type=click.IntRange(0, 1), required=True)
@click.option("--H", "h_mean", type=float, required=True)
@click.option("--alpha", type=float, default=2.0)
@click.option("--non-embedded", is_flag=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def rot_gen_alias(ctx, genus, h_mean, alpha, non_embedded, output):
    """Alias for `rot gen`."""
    _invoke(lambda: RunConfig("rot-gen", genus=genus, H=h_mean, alpha=alpha,
                      non_embedded=non_embedded, output=output,
                      out_dir=ctx.obj["out_dir"]))


@main.group()
def flow():
    """Whitham deformation flows."""


@flow.command("run")
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--strategy",
              type=click.Choice(["shrink", "separate", "move-root", "track"]),
              default="shrink", show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--log", type=click.Path(dir_okay=False), default=None,
              help="Trajectory CSV path.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Final spectral data JSON.")
@click.option("--rate", type=float, default=1.0, show_default=True,
              help="Flow rate (shrink) / direction sign factor (move-root).")
@click.option("--sign", type=click.Choice(["1", "-1"]), default="1",
              show_default=True, help="Separation mode for `separate`.")
@click.option("--beta", callback=_complex_opt, default=None,
              help="Root of b to move ('re' or 're,im'), for `move-root`.")
@click.option("--gain", type=float, default=1.0, show_default=True,
              help="Feedback gain for `track`.")
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Trajectory figure path.")
@click.pass_context
def flow_run(ctx, data_path, strategy, dt, steps, log, output, rate, sign,
             beta, gain, plot):
    """Integrate a deformation flow and log the trajectory."""
    _invoke(lambda: RunConfig("flow-run", input=data_path, strategy=strategy, dt=dt,
                      steps=steps, log=log, output=output, rate=rate,
                      sign=int(sign), beta=beta, gain=gain, plot=plot,
                      out_dir=ctx.obj["out_dir"]))


@main.command()
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--resolution", type=click.IntRange(min=4), default=64,
              show_default=True)
@click.option("--extent", type=float, default=0.5, show_default=True,
              help="Side length of the coordinate window.")
@click.option("--spacing", type=float, default=None,
              help="Grid spacing (overrides extent/(resolution-1)).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Mesh file: .obj (stereographic) or .csv (R^4).")
@click.option("--report", type=click.Path(dir_okay=False), default=None,
              help="Diagnostics JSON path.")
@click.option("--plot", type=click.Path(dir_okay=False), default=None,
              help="Mesh preview figure path.")
@click.pass_context
def surface(ctx, data_path, resolution, extent, spacing, output, report, plot):
    """Synthesize the immersed surface mesh with diagnostics."""
    _invoke(lambda: RunConfig("surface", input=data_path, resolution=resolution,
                      extent=extent, spacing=spacing, output=output,
                      report=report, plot=plot, out_dir=ctx.obj["out_dir"]))


@main.command()
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False),
              required=True,
              help="Potential JSON, or spectral data JSON (off-diagonal "
                   "potential is built from it).")
@click.option("--direction", type=click.IntRange(min=0), default=0,
              show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=1, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def isospectral(ctx, data_path, direction, dt, steps, output):
    """Apply isospectral flow steps to a potential."""
    _invoke(lambda: RunConfig("isospectral", input=data_path, direction=direction,
                      dt=dt, steps=steps, output=output,
                      out_dir=ctx.obj["out_dir"]))


@main.command()
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--guess", callback=_complex_opt, default=None,
              help="Initial period guess ('re' or 're,im'); defaults to the "
                   "rotational closed form when the data is rotational.")
@click.option("--report", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def period(ctx, data_path, guess, report):
    """Locate the cylinder period of the data's off-diagonal potential."""
    _invoke(lambda: RunConfig("period", input=data_path, guess=guess, report=report,
                      out_dir=ctx.obj["out_dir"]))


if __name__ == "__main__":
    main()
