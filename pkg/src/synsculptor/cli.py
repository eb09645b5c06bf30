"""Command line front end.

Each subcommand wraps exactly one engine operation and exits non-zero
with the operation's own error text on failure. Trajectories travel as
CSV files with a JSON sidecar; libraries and plans as JSON.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import kinmodel as km
from . import metrics as metrics_mod
from . import synergy as synergy_mod
from . import synth as synth_mod
from . import trajio
from .segmenter import segment as segment_op, segments_to_csv
from .server import create_app, load_library_dir, load_model_arg


def _fail_on_error(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, KeyError, OSError) as exc:
            msg = str(exc.args[0]) if exc.args else str(exc)
            raise click.ClickException(msg)

    return wrapper


_model_option = click.option(
    "--model",
    "model_spec",
    default="humanoid19",
    envvar="SYNSCULPT_MODEL",
    show_default=True,
    help="Bundled model name or path to a model JSON file.",
)


@click.group()
def main():
    """Postural synergy extraction and style-controllable motion synthesis."""


@main.command()
@click.argument("traj_csv", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), required=True, help="Output CSV path.")
@_model_option
@click.option("--resample-hz", type=float, default=None, help="Resample to this rate.")
@click.option("--lowpass-hz", type=float, default=None, help="Low-pass velocity re-derivation.")
@click.option("--style", default=None, help="Override the style tag.")
@click.option("--source", default=None, help="Override the source tag.")
@_fail_on_error
def ingest(traj_csv, out, model_spec, resample_hz, lowpass_hz, style, source):
    """Validate a raw trajectory file and write a normalized copy."""
    model = load_model_arg(model_spec)
    traj = trajio.load_trajectory(traj_csv, model)
    if lowpass_hz is not None:
        traj = trajio.make_trajectory(
            traj.positions,
            traj.rate_hz,
            traj.model,
            t0=float(traj.times[0]),
            style=traj.style,
            source=traj.source,
            lowpass_hz=lowpass_hz,
        )
    if resample_hz is not None:
        traj = trajio.resample(traj, resample_hz)
    if style is not None or source is not None:
        traj = trajio.make_trajectory(
            traj.positions,
            traj.rate_hz,
            traj.model,
            velocities=traj.velocities,
            t0=float(traj.times[0]),
            style=style if style is not None else traj.style,
            source=source if source is not None else traj.source,
        )
    trajio.save_trajectory(traj, out)
    click.echo(f"{out}: {traj.n_frames} frames at {traj.rate_hz:g} Hz ({traj.duration_s:.3f} s)")


@main.command()
@click.argument("traj_csv", type=click.Path(exists=True))
@_model_option
@click.option("--threshold", type=float, default=0.75, show_default=True, help="Momentum jump threshold.")
@click.option("--min-duration", type=float, default=0.5, show_default=True, help="Refractory window, seconds.")
@click.option("--out", type=click.Path(), default=None, help="Write the segment CSV here instead of stdout.")
@_fail_on_error
def segment(traj_csv, model_spec, threshold, min_duration, out):
    """Split a trajectory at generalized-momentum jumps."""
    model = load_model_arg(model_spec)
    traj = trajio.load_trajectory(traj_csv, model)
    segs = segment_op(traj, model, dp_threshold=threshold, min_duration_s=min_duration)
    csv_text = segments_to_csv(segs)
    if out:
        Path(out).write_text(csv_text)
        click.echo(f"{out}: {len(segs)} segments")
    else:
        click.echo(csv_text, nl=False)


@main.command()
@click.argument("traj_csvs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), required=True, help="Library JSON path.")
@_model_option
@click.option("--k", type=int, default=3, show_default=True, help="Synergies per segment.")
@click.option("--name", default="library", show_default=True, help="Library name.")
@click.option("--threshold", type=float, default=0.75, show_default=True)
@click.option("--min-duration", type=float, default=0.5, show_default=True)
@click.option("--exclude-base", is_flag=True, help="Decompose joint rows only.")
@_fail_on_error
def extract(traj_csvs, out, model_spec, k, name, threshold, min_duration, exclude_base):
    """Build a synergy library from one or more trajectories."""
    model = load_model_arg(model_spec)
    trajs = [trajio.load_trajectory(p, model) for p in traj_csvs]
    lib = synergy_mod.build_library(
        trajs,
        model,
        dp_threshold=threshold,
        k=k,
        min_duration_s=min_duration,
        name=name,
        include_base=not exclude_base,
    )
    synergy_mod.save_library(lib, out)
    click.echo(f"{out}: {len(lib.entries)} entries from {len(trajs)} trajectories")
    for entry in lib.entries:
        v = synergy_mod.variance_explained(entry.synergy)
        click.echo(f"  {entry.label}: var{entry.synergy.k} = {v:.4f}")


@main.command()
@click.argument("library_json", type=click.Path(exists=True))
@click.argument("label")
@click.option("--out", type=click.Path(), required=True, help="Output CSV path.")
@_model_option
@click.option("--coeffs", default=None, help="Constant coefficients, comma separated. Default replays the stored series.")
@click.option("--duration", type=float, default=None, help="Seconds; defaults to the segment's own span.")
@click.option("--rate", type=float, default=100.0, show_default=True)
@_fail_on_error
def synth(library_json, label, out, model_spec, coeffs, duration, rate):
    """Reconstruct a motion from one library entry."""
    model = load_model_arg(model_spec)
    lib = synergy_mod.load_library(library_json)
    if lib.model != model.name:
        raise click.ClickException(f"library model {lib.model!r}, requested model {model.name!r}")
    entry = lib.find(label)
    if coeffs is None:
        schedule = synth_mod.CoefficientSchedule(mode="stored")
    else:
        values = np.array([float(c) for c in coeffs.split(",")])
        schedule = synth_mod.CoefficientSchedule(mode="const", values=values)
    req = synth_mod.SynthesisRequest(
        synergy=entry.synergy, schedule=schedule, duration_s=duration, rate_hz=rate
    )
    traj = synth_mod.reconstruct(model, req, style=entry.style)
    trajio.save_trajectory(traj, out)
    click.echo(f"{out}: {traj.n_frames} frames ({traj.duration_s:.3f} s)")


@main.command()
@click.argument("plan_json", type=click.Path(exists=True))
@click.option("--library", "library_jsons", multiple=True, required=True,
              type=click.Path(exists=True), help="Library file; repeatable. Plans reference libraries by name.")
@click.option("--out", type=click.Path(), required=True, help="Output CSV path.")
@_model_option
@_fail_on_error
def sequence(plan_json, library_jsons, out, model_spec):
    """Render a multi-step sequence plan into one trajectory."""
    model = load_model_arg(model_spec)
    libraries = {}
    for p in library_jsons:
        lib = synergy_mod.load_library(p)
        if lib.model != model.name:
            raise click.ClickException(
                f"library {lib.name!r} targets model {lib.model!r}, requested {model.name!r}"
            )
        libraries[lib.name] = lib
    doc = json.loads(Path(plan_json).read_text())
    plan = synth_mod.plan_from_dict(doc, libraries)
    traj = synth_mod.sequence(model, plan)
    trajio.save_trajectory(traj, out)
    click.echo(f"{out}: {len(plan.steps)} steps, {traj.n_frames} frames ({traj.duration_s:.3f} s)")


@main.command()
@click.argument("traj_csvs", nargs=-1, required=True, type=click.Path(exists=True))
@_model_option
@click.option("--baseline", default=None, help="Label to divide the other rows by; adds ratio columns.")
@click.option("--eval-rate", type=float, default=1000.0, show_default=True, help="Energetics evaluation rate, Hz.")
@click.option("--out", type=click.Path(), default=None, help="Write the CSV here instead of stdout.")
@_fail_on_error
def metrics(traj_csvs, model_spec, baseline, eval_rate, out):
    """Energetics, mechanical power, and foot sliding for trajectories."""
    model = load_model_arg(model_spec)
    foot_frames = tuple(f for f in metrics_mod.FOOT_FRAMES_DEFAULT if f in model.frames)
    reports = []
    for p in traj_csvs:
        traj = trajio.load_trajectory(p, model)
        label = Path(p).stem
        reports.append(
            metrics_mod.evaluate(traj, model, label, eval_rate, foot_frames=foot_frames)
        )
    if baseline is not None:
        csv_text = metrics_mod.compare(reports, baseline)
    else:
        csv_text = metrics_mod.reports_to_csv(reports)
    if out:
        Path(out).write_text(csv_text)
        click.echo(f"{out}: {len(reports)} rows")
    else:
        click.echo(csv_text, nl=False)


@main.command()
@click.argument("traj_csv", type=click.Path(exists=True))
@click.argument("library_json", type=click.Path(exists=True))
@click.argument("label")
@click.option("--out", type=click.Path(), required=True, help="Output CSV path.")
@_model_option
@click.option("--no-torso-task", is_flag=True, help="Skip the torso-preserving nullspace step.")
@_fail_on_error
def project(traj_csv, library_json, label, out, model_spec, no_torso_task):
    """Filter an external trajectory into a library entry's synergy span."""
    model = load_model_arg(model_spec)
    traj = trajio.load_trajectory(traj_csv, model)
    lib = synergy_mod.load_library(library_json)
    if lib.model != model.name:
        raise click.ClickException(f"library model {lib.model!r}, requested model {model.name!r}")
    S = lib.find(label).synergy.S
    task = None if no_torso_task else synth_mod.TORSO_TASK_DEFAULT
    projected = synth_mod.project_external(traj, S, model, torso_task=task)
    trajio.save_trajectory(projected, out)
    click.echo(f"{out}: {projected.n_frames} frames")


@main.command()
@click.option("--port", type=int, default=8080, envvar="SYNSCULPT_PORT", show_default=True)
@click.option("--host", default="127.0.0.1", envvar="SYNSCULPT_HOST", show_default=True)
@_model_option
@click.option("--library-dir", type=click.Path(exists=True, file_okay=False), default=None,
              envvar="SYNSCULPT_LIBRARY_DIR", help="Preload every *.json library in this directory.")
@click.option("--cors-origin", default=None, envvar="SYNSCULPT_CORS_ORIGIN",
              help="Allow browser requests from this origin.")
@_fail_on_error
def serve(port, host, model_spec, library_dir, cors_origin):
    """Run the HTTP service (synchronous, one model per process)."""
    import uvicorn

    model = load_model_arg(model_spec)
    libraries = load_library_dir(library_dir) if library_dir else []
    for lib in libraries:
        if lib.model != model.name:
            raise click.ClickException(
                f"library {lib.name!r} targets model {lib.model!r}, server runs {model.name!r}"
            )
    app = create_app(model, libraries, cors_origin=cors_origin)
    click.echo(f"serving model {model.name!r} with {len(libraries)} libraries on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
