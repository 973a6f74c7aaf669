"""Command-line front end. Every subcommand is a thin composition of library
operations; exit codes: 0 ok, 2 usage, 3 format, 4 numeric."""

from __future__ import annotations

import functools
import json
import pathlib
import sys

import click

from . import bench as bench_mod
from . import fio
from .errors import FormatError, InvalidArgumentError, NumericError
from .pipeline import run_warp_pipeline
from .stats import (
    BatteryConfig,
    battery_passes,
    gaussianity_battery,
    reports_to_ldjson,
    reports_to_table,
)
from .synth import render_scene_flows, scene_from_json

EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_NUMERIC = 4


def _mapped_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FormatError as exc:
            click.echo(f"format error: {exc}", err=True)
            sys.exit(EXIT_FORMAT)
        except InvalidArgumentError as exc:
            click.echo(f"usage error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except (NumericError, FloatingPointError, ZeroDivisionError) as exc:
            click.echo(f"numeric error: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
    return wrapper


def _load_flows_dir(directory: pathlib.Path):
    files = sorted(directory.glob("*.flo"))
    if not files:
        raise InvalidArgumentError(f"no .flo files in {directory}")
    flows = []
    for path in files:
        try:
            flows.append(fio.read_flo(path.read_bytes()))
        except FormatError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return flows


def _load_scene(path: pathlib.Path):
    return scene_from_json(path.read_text())


@click.group()
def main():
    """Optical-flow noise warping toolkit."""


@main.command()
@click.option("--flows", "flows_dir", type=click.Path(exists=True, file_okay=False,
              path_type=pathlib.Path), default=None,
              help="Directory of .flo files (sorted by name).")
@click.option("--scene", "scene_file", type=click.Path(exists=True, dir_okay=False,
              path_type=pathlib.Path), default=None,
              help="Scene JSON file to render flows from.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--channels", type=int, default=1, show_default=True)
@click.option("--gamma", type=float, default=0.0, show_default=True)
@click.option("--spatial-down", type=int, default=1, show_default=True)
@click.option("--temporal-down", type=int, default=1, show_default=True)
@click.option("--verify", is_flag=True, help="Run the Gaussianity battery.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=pathlib.Path),
              required=True)
@_mapped_errors
def warp(flows_dir, scene_file, seed, channels, gamma, spatial_down,
         temporal_down, verify, out):
    """Warp white noise along flows and write a GWTF noise container."""
    if (flows_dir is None) == (scene_file is None):
        raise InvalidArgumentError("exactly one of --flows/--scene is required")
    if not 0.0 <= gamma <= 1.0:
        raise InvalidArgumentError("--gamma must lie in [0, 1]")
    flows = (_load_flows_dir(flows_dir) if flows_dir is not None
             else render_scene_flows(_load_scene(scene_file)))
    seq, timings = run_warp_pipeline(
        flows, seed=seed, channels=channels, gamma=gamma,
        spatial_down=spatial_down, temporal_down=temporal_down,
        collect_timings=True)
    out.write_bytes(fio.write_noise_container(seq))
    for t, dt in enumerate(timings):
        click.echo(f"frame {t + 1}: {dt * 1e3:.2f} ms")
    if verify:
        reports = gaussianity_battery(seq)
        ok = battery_passes(reports, BatteryConfig().quota)
        click.echo(reports_to_table(reports))
        click.echo(f"battery: {'pass' if ok else 'FAIL'}")
    click.echo(f"wrote {out} ({len(seq)} frames, "
               f"{seq.channels}x{seq.height}x{seq.width})")


@main.command("synth-flow")
@click.option("--scene", "scene_file", type=click.Path(exists=True, dir_okay=False,
              path_type=pathlib.Path), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False,
              path_type=pathlib.Path), required=True)
@_mapped_errors
def synth_flow(scene_file, out_dir):
    """Render a scene's flow fields to numbered .flo files."""
    flows = render_scene_flows(_load_scene(scene_file))
    out_dir.mkdir(parents=True, exist_ok=True)
    for t, flow in enumerate(flows):
        (out_dir / f"{t:05d}.flo").write_bytes(fio.write_flo(flow))
    click.echo(f"wrote {len(flows)} flows to {out_dir}")


@main.command("stats")
@click.option("--in", "in_file", type=click.Path(exists=True, dir_okay=False,
              path_type=pathlib.Path), required=True)
@click.option("--json", "as_json", is_flag=True,
              help="Emit line-delimited JSON instead of a table.")
@_mapped_errors
def stats_cmd(in_file, as_json):
    """Run the Gaussianity battery on a noise container."""
    seq = fio.read_noise_container(in_file.read_bytes())
    reports = gaussianity_battery(seq)
    if as_json:
        click.echo(reports_to_ldjson(reports))
    else:
        click.echo(reports_to_table(reports))
    ok = battery_passes(reports, BatteryConfig().quota)
    click.echo(f"battery: {'pass' if ok else 'FAIL'}", err=as_json)
    sys.exit(0 if ok else 1)


@main.command("bench")
@click.option("--sizes", default="256,512,1024", show_default=True,
              help="Comma-separated square resolutions.")
@click.option("--frames", type=int, default=30, show_default=True)
@click.option("--flow-kind", type=click.Choice(["pan", "zoom", "rotate"]),
              default="zoom", show_default=True)
@_mapped_errors
def bench(sizes, frames, flow_kind):
    """Benchmark per-frame warp wall time across resolutions."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s]
    except ValueError as exc:
        raise InvalidArgumentError(f"bad --sizes list: {sizes!r}") from exc
    report = bench_mod.bench_warp(size_list, frames=frames, flow_kind=flow_kind)
    click.echo(bench_mod.bench_report_ldjson(report))


@main.command("serve")
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--root", type=click.Path(file_okay=False, path_type=pathlib.Path),
              default=None, help="Optional directory for job persistence.")
def serve(port, host, root):
    """Run the local HTTP authoring/warping service."""
    import uvicorn

    from .server import create_app
    uvicorn.run(create_app(persist_dir=root), host=host, port=port)


if __name__ == "__main__":
    main()
