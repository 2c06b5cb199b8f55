"""Command-line interface: simulate, ingest, serve, layout, export-svg.

Every flag can also be set through an environment variable named
``BSPPROF_<COMMAND>_<FLAG>`` (click auto-envvar convention, e.g.
``BSPPROF_SERVE_PORT``).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import graphio, tracefile
from .aggregate import hierarchy_aggregate, temporal_aggregate
from .layout import WeightKind, chord_geometry, circular_order
from .model import Level, validate_trace
from .partition import hash_partition, locality_partition
from .programs import khop_broadcast_program, pagerank_program, sssp_program
from .simulate import SimConfig, TreeShape, run_job
from .store import JobStore
from .svgexport import render_chord_svg

DEFAULT_STORE = "./bspprof-store"


@click.group(context_settings={"auto_envvar_prefix": "BSPPROF"})
def main() -> None:
    """Profiler toolkit for BSP graph computations."""


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True),
              help="Edge-list file, one 'u v [w]' per line.")
@click.option("--program", "program_name", required=True,
              type=click.Choice(["sssp", "sssp-buggy", "pagerank", "khop"]))
@click.option("--source", default=0, show_default=True, help="SSSP source vertex.")
@click.option("--iterations", default=10, show_default=True, help="PageRank supersteps.")
@click.option("--hops", default=2, show_default=True, help="k-hop flood radius.")
@click.option("--rounds", default=3, show_default=True, help="k-hop flood periods.")
@click.option("--max-supersteps", default=None, type=int,
              help="Superstep cap (mainly for sssp-buggy).")
@click.option("--tree", "tree_spec", default="1:2:2", show_default=True,
              help="Cluster shape R:H:W.")
@click.option("--partitioner", type=click.Choice(["hash", "locality"]),
              default="hash", show_default=True)
@click.option("--alpha", default=1.0, show_default=True, help="ms per active vertex.")
@click.option("--beta", default=0.01, show_default=True, help="ms per sent message.")
@click.option("--gamma", default=0.01, show_default=True, help="ms per received message.")
@click.option("--slowdown", multiple=True, metavar="HOST=FACTOR",
              help="Multiplicative per-host slowdown; repeatable.")
@click.option("--seed", default=0, show_default=True)
@click.option("--job-id", default="", help="Job id recorded in the output.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory for topology.jsonl + trace.jsonl.")
def simulate(graph_path: str, program_name: str, source: int, iterations: int,
             hops: int, rounds: int, max_supersteps: int | None, tree_spec: str,
             partitioner: str, alpha: float, beta: float, gamma: float,
             slowdown: tuple[str, ...], seed: int, job_id: str, out_dir: str) -> None:
    """Run a workload and write its trace in canonical form."""
    graph = graphio.load_edge_list(graph_path)
    shape = TreeShape.parse(tree_spec)
    slowdowns = {}
    for item in slowdown:
        host, _, factor = item.partition("=")
        if not factor:
            raise click.BadParameter(f"expected HOST=FACTOR, got {item!r}")
        slowdowns[host] = float(factor)
    config = SimConfig(tree=shape, alpha=alpha, beta=beta, gamma=gamma,
                       host_slowdown=slowdowns, seed=seed)

    if program_name == "sssp":
        program = sssp_program(source, max_supersteps=max_supersteps)
    elif program_name == "sssp-buggy":
        program = sssp_program(source, buggy=True, max_supersteps=max_supersteps)
    elif program_name == "pagerank":
        program = pagerank_program(iterations)
    else:
        program = khop_broadcast_program(hops, rounds)

    workers = shape.worker_labels()
    if partitioner == "hash":
        part = hash_partition(graph, workers)
    else:
        part = locality_partition(graph, workers, seed=seed)

    job = run_job(graph, program, part, config, job_id=job_id,
                  input_name=Path(graph_path).name)
    tracefile.write_job(job, out_dir)
    click.echo(f"wrote {job.superstep_count} supersteps to {out_dir}")


@main.command()
@click.option("--trace-dir", required=True, type=click.Path(exists=True),
              help="Directory holding topology.jsonl and trace.jsonl.")
@click.option("--store", "store_root", default=DEFAULT_STORE, show_default=True)
@click.option("--job-id", default="")
@click.option("--algorithm", default="")
@click.option("--input-graph", default="")
def ingest(trace_dir: str, store_root: str, job_id: str, algorithm: str,
           input_graph: str) -> None:
    """Validate a trace directory and add it to the store."""
    directory = Path(trace_dir)
    metadata = {}
    if algorithm:
        metadata["algorithm"] = algorithm
    if input_graph:
        metadata["input_graph"] = input_graph
    record = JobStore(store_root).ingest(
        (directory / tracefile.TOPOLOGY_FILENAME).read_text(encoding="utf-8"),
        (directory / tracefile.TRACE_FILENAME).read_text(encoding="utf-8"),
        job_id=job_id, metadata=metadata)
    click.echo(json.dumps(record.as_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--store", "store_root", default=DEFAULT_STORE, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8630, show_default=True)
@click.option("--ui-dir", default=None, type=click.Path(exists=True),
              help="Directory with the built browser UI, served under /ui.")
def serve(store_root: str, host: str, port: int, ui_dir: str | None) -> None:
    """Start the HTTP query service."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(store_root, static_dir=ui_dir), host=host, port=port)


def _layout_document(trace_dir: str, frame_size: int, level: str, kind: str) -> dict:
    job = tracefile.load_job(trace_dir)
    report = validate_trace(job)
    if not report.ok:
        raise click.ClickException(
            f"trace fails validation: {report.violations[0].message}")
    lvl = Level(level)
    wk = WeightKind(kind)
    whole = hierarchy_aggregate(
        temporal_aggregate(job, job.superstep_count)[0], lvl, job.tree)
    order = circular_order(whole, job.tree, wk)
    frames = [hierarchy_aggregate(f, lvl, job.tree)
              for f in temporal_aggregate(job, frame_size)]
    from .server import _chord_payload
    return {
        "job_id": job.job_id,
        "level": lvl.value,
        "kind": wk.value,
        "order": list(order.units),
        "frames": [
            {"first": f.first, "last": f.last, "start": f.start,
             "chord": _chord_payload(chord_geometry(f, order, wk))}
            for f in frames
        ],
    }


@main.command("layout")
@click.option("--trace-dir", required=True, type=click.Path(exists=True))
@click.option("--frame-size", default=1, show_default=True)
@click.option("--level", type=click.Choice([l.value for l in Level]),
              default="worker", show_default=True)
@click.option("--kind", type=click.Choice([k.value for k in WeightKind]),
              default="messages", show_default=True)
@click.option("--out", "out_path", default="-",
              help="Output JSON path, '-' for stdout.")
def layout_cmd(trace_dir: str, frame_size: int, level: str, kind: str,
               out_path: str) -> None:
    """Emit the circular order and per-frame chord geometry as JSON."""
    doc = _layout_document(trace_dir, frame_size, level, kind)
    text = json.dumps(doc, indent=2)
    if out_path == "-":
        click.echo(text)
    else:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out_path}")


@main.command("export-svg")
@click.option("--trace-dir", required=True, type=click.Path(exists=True))
@click.option("--frame", "frame_no", default=1, show_default=True,
              help="1-based frame index.")
@click.option("--frame-size", default=1, show_default=True)
@click.option("--level", type=click.Choice([l.value for l in Level]),
              default="worker", show_default=True)
@click.option("--kind", type=click.Choice([k.value for k in WeightKind]),
              default="messages", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def export_svg(trace_dir: str, frame_no: int, frame_size: int, level: str,
               kind: str, out_path: str) -> None:
    """Render one frame's chord diagram to a static SVG file."""
    job = tracefile.load_job(trace_dir)
    lvl = Level(level)
    wk = WeightKind(kind)
    whole = hierarchy_aggregate(
        temporal_aggregate(job, job.superstep_count)[0], lvl, job.tree)
    order = circular_order(whole, job.tree, wk)
    frames = [hierarchy_aggregate(f, lvl, job.tree)
              for f in temporal_aggregate(job, frame_size)]
    if frame_no < 1 or frame_no > len(frames):
        raise click.ClickException(f"frame must be in 1..{len(frames)}")
    svg = render_chord_svg(chord_geometry(frames[frame_no - 1], order, wk))
    Path(out_path).write_text(svg, encoding="utf-8")
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
