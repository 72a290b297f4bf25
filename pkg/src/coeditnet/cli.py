"""Command-line entry point.

Stages communicate through files so they can be run one at a time::

    coeditnet parse ChangeLog -o work/contributions.tsv
    coeditnet slice work/contributions.tsv --timeline webkit-figures -o work
    coeditnet graph work/slices.json -o work
    coeditnet metrics work/*.graph.graphml -o work
    coeditnet render work/*.graph.graphml -o work

``coeditnet run`` chains the same stages and writes ``manifest.json``.

Exit codes: 0 success, 1 input rejected (strict parsing, malformed GraphML)
or eigenvector non-convergence,
2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path

from .affiliation import AffiliationError, AffiliationTable, default_affiliation_table, load_affiliation_table
from .changelog import (Contribution, ParseError, format_commitlog, format_timestamp, parse_changelog,
                        parse_commitlog, parse_timestamp)
from .graph import DEFAULT_EXCLUDES, CollabGraph, build_graph
from .metrics import ConvergenceError, graph_summary
from .render import (RenderError, StyleMap, default_style, export_dot, export_graphml, export_metrics,
                     export_svg, layout_force_directed, load_style, read_graphml)
from .timeline import (PRESET_SPANS, Slice, TimelineError, build_slices, load_timeline,
                       preset_timeline)

log = logging.getLogger("coeditnet")

RENDER_FORMATS = ("graphml", "dot", "svg")
METRIC_FORMATS = ("csv", "json")
ALL_FORMATS = RENDER_FORMATS + METRIC_FORMATS
REFERENCE_COUNTS = {"nodes": 445, "edges": 2169}


class ConfigError(ValueError):
    pass


class InputError(ValueError):
    pass


@dataclass
class PipelineConfig:
    inputs: list[Path] = field(default_factory=list)
    affiliations: Path | None = None
    timeline: str = "webkit-figures"
    span_start: datetime | None = None
    span_end: datetime | None = None
    exclude: list[str] = field(default_factory=lambda: list(DEFAULT_EXCLUDES))
    output: Path = Path("out")
    seed: int = 42
    iterations: int = 500
    style: Path | None = None
    formats: tuple[str, ...] = ALL_FORMATS
    strict: bool = False
    compare_reference: bool = False


class Manifest:
    def __init__(self, root: Path):
        self.root = root
        self.entries: list[dict] = []

    def write(self, name: str, data: bytes, stage: str, slice_index: int | None = None) -> Path:
        path = self.root / name
        path.write_bytes(data)
        self.entries.append({
            "path": name,
            "sha256": hashlib.sha256(data).hexdigest(),
            "stage": stage,
            "slice": slice_index,
        })
        return path

    def dump(self) -> bytes:
        return (json.dumps(self.entries, indent=2) + "\n").encode("utf-8")


# -- loading helpers ---------------------------------------------------------

def load_table(path: Path | None) -> AffiliationTable:
    if path is None:
        return default_affiliation_table()
    return load_affiliation_table(path.read_text("utf-8"))


def load_style_file(path: Path | None) -> StyleMap:
    return default_style() if path is None else load_style(path.read_text("utf-8"))


def resolve_timeline(source: str):
    """``source`` is a preset name or a path to a timeline file."""
    if source in PRESET_SPANS:
        return preset_timeline(source), PRESET_SPANS[source]
    path = Path(source)
    if not path.exists():
        raise ConfigError(f"timeline {source!r} is neither a preset ({', '.join(PRESET_SPANS)}) nor a file")
    return load_timeline(path.read_text("utf-8")), None


def sniff_format(path: Path, head: bytes) -> str:
    if path.suffix in (".tsv", ".txt") and b"\t" in head:
        return "commitlog"
    for line in head.splitlines():
        if line.strip():
            return "commitlog" if line.count(b"\t") == 2 else "changelog"
    return "changelog"


# -- stages ------------------------------------------------------------------

def stage_parse(inputs: list[Path], strict: bool = False, fmt: str = "auto") -> list[Contribution]:
    contribs: list[Contribution] = []
    for path in inputs:
        data = path.read_bytes()
        kind = sniff_format(path, data[:4096]) if fmt == "auto" else fmt
        if kind == "changelog":
            got, report = parse_changelog(data, strict=strict)
        else:
            got, report = parse_commitlog(data)
            if strict and report.rejected:
                line, reason = next(d for d in report.diagnostics if d[1] != "invalid UTF-8 bytes replaced")
                raise ParseError(line, reason)
        for line, reason in report.diagnostics:
            log.warning("%s:%d: %s", path, line, reason)
        log.info("%s: %d contributions, %d rejected", path, report.accepted, report.rejected)
        contribs.extend(got)
    if not contribs:
        log.warning("no contributions parsed from %s", ", ".join(map(str, inputs)) or "no input")
    return contribs


def stage_slice(contribs: list[Contribution], timeline_spec: str,
                span_start: datetime | None, span_end: datetime | None) -> list[Slice]:
    timeline, preset_span = resolve_timeline(timeline_spec)
    start, end = span_start, span_end
    if preset_span is not None:
        start = start or preset_span[0]
        end = end or preset_span[1]
    if start is None or end is None:
        if not contribs:
            raise ConfigError("cannot infer the analysis span from empty input; pass --span-start/--span-end")
        start = start or min(c.timestamp for c in contribs)
        end = end or max(c.timestamp for c in contribs) + timedelta(seconds=1)
    outside = sum(not start <= c.timestamp < end for c in contribs)
    if outside:
        log.warning("%d contributions fall outside [%s, %s) and are ignored",
                    outside, format_timestamp(start), format_timestamp(end))
    return build_slices(timeline, start, end)


def slice_entries(slices: list[Slice]) -> list[dict]:
    """Named work units: one per slice plus the cumulative span."""
    entries = [
        {"name": f"slice-{s.index:02d}", "index": s.index, "start": format_timestamp(s.start),
         "end": format_timestamp(s.end), "label": s.label}
        for s in slices
    ]
    entries.append({"name": "cumulative", "index": None, "start": format_timestamp(slices[0].start),
                    "end": format_timestamp(slices[-1].end), "label": "cumulative"})
    for e in entries:
        e["contributions"] = f"{e['name']}.tsv"
    return entries


def _in(entry: dict, contribs: list[Contribution]) -> list[Contribution]:
    start, end = parse_timestamp(entry["start"]), parse_timestamp(entry["end"])
    return [c for c in contribs if start <= c.timestamp < end]


def write_slices(contribs: list[Contribution], slices: list[Slice], manifest: Manifest) -> list[dict]:
    entries = slice_entries(slices)
    for e in entries:
        manifest.write(e["contributions"], format_commitlog(_in(e, contribs)), "slice", e["index"])
    manifest.write("slices.json", (json.dumps({"slices": entries}, indent=2) + "\n").encode(), "slice")
    return entries


def stage_graph(entry: dict, contribs: list[Contribution], table: AffiliationTable,
                exclude: list[str]) -> CollabGraph:
    interval = (parse_timestamp(entry["start"]), parse_timestamp(entry["end"]))
    return build_graph(contribs, interval, table, exclude)


def write_metrics(name: str, g: CollabGraph, formats, manifest: Manifest, index) -> None:
    wanted = [f for f in METRIC_FORMATS if f in formats]
    if not wanted:
        return
    report = graph_summary(g)
    for fmt in wanted:
        manifest.write(f"{name}.metrics.{fmt}", export_metrics(report, fmt), "metrics", index)


def write_render(name: str, g: CollabGraph, style: StyleMap, seed: int, iterations: int,
                 formats, manifest: Manifest, index) -> None:
    wanted = [f for f in RENDER_FORMATS if f in formats]
    if not wanted:
        return
    layout = layout_force_directed(g, seed, iterations) if {"graphml", "svg"} & set(wanted) else None
    if "graphml" in wanted:
        manifest.write(f"{name}.graphml", export_graphml(g, layout, style), "render", index)
    if "dot" in wanted:
        manifest.write(f"{name}.dot", export_dot(g, style), "render", index)
    if "svg" in wanted:
        manifest.write(f"{name}.svg", export_svg(g, layout, style), "render", index)


def reference_report(g: CollabGraph, cfg: PipelineConfig) -> dict:
    return {
        "cumulative": {"nodes": g.n, "edges": g.m},
        "reference": REFERENCE_COUNTS,
        "diff": {"nodes": g.n - REFERENCE_COUNTS["nodes"], "edges": g.m - REFERENCE_COUNTS["edges"]},
        "span": [format_timestamp(g.interval[0]), format_timestamp(g.interval[1])],
        "exclude": list(cfg.exclude),
        "note": "reference counts come from the historical WebKit ChangeLogs; "
                "differences follow from file exclusions and email canonicalization",
    }


def run_pipeline(cfg: PipelineConfig) -> list[dict]:
    if not cfg.inputs:
        raise ConfigError("at least one input is required")
    bad = [f for f in cfg.formats if f not in ALL_FORMATS]
    if bad:
        raise ConfigError(f"unknown format(s): {', '.join(bad)}")
    resolve_timeline(cfg.timeline)
    table = load_table(cfg.affiliations)
    style = load_style_file(cfg.style)
    cfg.output.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(cfg.output)

    contribs = stage_parse(cfg.inputs, cfg.strict)
    manifest.write("contributions.tsv", format_commitlog(contribs), "parse")
    slices = stage_slice(contribs, cfg.timeline, cfg.span_start, cfg.span_end)
    entries = write_slices(contribs, slices, manifest)
    for e in entries:
        g = stage_graph(e, _in(e, contribs), table, cfg.exclude)
        manifest.write(f"{e['name']}.graph.graphml", export_graphml(g, None, style), "graph", e["index"])
        write_metrics(e["name"], g, cfg.formats, manifest, e["index"])
        write_render(e["name"], g, style, cfg.seed, cfg.iterations, cfg.formats, manifest, e["index"])
        if e["index"] is None and cfg.compare_reference:
            doc = reference_report(g, cfg)
            log.warning("cumulative graph: %d nodes / %d edges (reference %d / %d)",
                        g.n, g.m, REFERENCE_COUNTS["nodes"], REFERENCE_COUNTS["edges"])
            manifest.write("reference.json", (json.dumps(doc, indent=2) + "\n").encode(), "report")
    (cfg.output / "manifest.json").write_bytes(manifest.dump())
    return manifest.entries


# -- argument handling -------------------------------------------------------

def read_config_file(path: Path) -> dict:
    """``key = value`` lines; ``input`` and ``exclude`` may repeat."""
    out: dict[str, object] = {}
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in ("input", "exclude"):
            out.setdefault(key, []).append(value)
        else:
            out[key] = value
    return out


def _span(value: str | None) -> datetime | None:
    if value is None:
        return None
    try:
        return parse_timestamp(value)
    except ValueError:
        raise ConfigError(f"bad date {value!r}") from None


def _formats(value: str | None, allowed) -> tuple[str, ...]:
    fmts = tuple(f.strip() for f in value.split(",") if f.strip())
    bad = [f for f in fmts if f not in allowed]
    if bad:
        raise ConfigError(f"unknown format(s) {', '.join(bad)}; choose from {', '.join(allowed)}")
    return fmts


_CONFIG_KEYS = {"input", "exclude", "affiliations", "timeline", "span_start", "span_end", "output",
                "seed", "iterations", "style", "formats", "strict", "compare_reference",
                "no_default_excludes"}


def config_from_args(args) -> PipelineConfig:
    file_cfg = read_config_file(Path(args.config)) if args.config else {}
    unknown = set(file_cfg) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    def pick(name, default=None):
        value = getattr(args, name, None)
        if value not in (None, [], False):
            return value
        return file_cfg.get(name, default)

    def flag(name):
        v = pick(name, False)
        return v is True or str(v).lower() in ("1", "true", "yes")

    excludes = [] if flag("no_default_excludes") else list(DEFAULT_EXCLUDES)
    excludes += list(pick("exclude", []))
    try:
        seed, iterations = int(pick("seed", 42)), int(pick("iterations", 500))
    except ValueError:
        raise ConfigError("seed and iterations must be integers") from None
    if iterations < 1:
        raise ConfigError("iterations must be >= 1")
    style, aff = pick("style"), pick("affiliations")
    return PipelineConfig(
        inputs=[Path(p) for p in pick("input", [])],
        affiliations=Path(aff) if aff else None,
        timeline=pick("timeline", "webkit-figures"),
        span_start=_span(pick("span_start")),
        span_end=_span(pick("span_end")),
        exclude=excludes,
        output=Path(pick("output", "out")),
        seed=seed,
        iterations=iterations,
        style=Path(style) if style else None,
        formats=_formats(pick("formats", ",".join(ALL_FORMATS)), ALL_FORMATS),
        strict=flag("strict"),
        compare_reference=flag("compare_reference"),
    )


def _graph_name(path: Path) -> str:
    name = path.name
    for suffix in (".graphml", ".graph"):
        name = name.removesuffix(suffix)
    return name


def _read_graph(path: Path) -> CollabGraph:
    try:
        return read_graphml(path.read_bytes())[0]
    except RenderError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_parse(args) -> None:
    contribs = stage_parse([Path(p) for p in args.inputs], args.strict, args.format)
    data = format_commitlog(contribs)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        out = Path(args.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(data)


def cmd_slice(args) -> None:
    contribs, _ = parse_commitlog(Path(args.contributions).read_bytes())
    slices = stage_slice(contribs, args.timeline, _span(args.span_start), _span(args.span_end))
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    write_slices(contribs, slices, Manifest(out))


def cmd_graph(args) -> None:
    index_path = Path(args.slices)
    entries = json.loads(index_path.read_text("utf-8"))["slices"]
    table = load_table(Path(args.affiliations) if args.affiliations else None)
    style = load_style_file(Path(args.style) if args.style else None)
    exclude = ([] if args.no_default_excludes else list(DEFAULT_EXCLUDES)) + list(args.exclude or [])
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out)
    for e in entries:
        contribs, _ = parse_commitlog((index_path.parent / e["contributions"]).read_bytes())
        g = stage_graph(e, contribs, table, exclude)
        manifest.write(f"{e['name']}.graph.graphml", export_graphml(g, None, style), "graph", e["index"])


def cmd_metrics(args) -> None:
    formats = _formats(args.formats, METRIC_FORMATS)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for p in map(Path, args.graphs):
        write_metrics(_graph_name(p), _read_graph(p), formats, Manifest(out), None)


def cmd_render(args) -> None:
    formats = _formats(args.formats, RENDER_FORMATS)
    style = load_style_file(Path(args.style) if args.style else None)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for p in map(Path, args.graphs):
        write_render(_graph_name(p), _read_graph(p), style, args.seed, args.iterations, formats,
                     Manifest(out), None)


def cmd_run(args) -> None:
    cfg = config_from_args(args)
    entries = run_pipeline(cfg)
    log.info("wrote %d artifacts to %s", len(entries), cfg.output)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coeditnet", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="ChangeLogs / commit logs -> contributions TSV")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("-o", "--output")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--format", choices=("auto", "changelog", "commitlog"), default="auto")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("slice", help="split a contributions TSV by timeline")
    sp.add_argument("contributions")
    sp.add_argument("--timeline", default="webkit-figures", help="preset name or timeline file")
    sp.add_argument("--span-start")
    sp.add_argument("--span-end")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_slice)

    sp = sub.add_parser("graph", help="build co-edit graphs for every slice in slices.json")
    sp.add_argument("slices")
    sp.add_argument("--affiliations")
    sp.add_argument("--style")
    sp.add_argument("--exclude", action="append")
    sp.add_argument("--no-default-excludes", action="store_true")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("metrics", help="centralities and summary measures from GraphML")
    sp.add_argument("graphs", nargs="+")
    sp.add_argument("--formats", default="csv,json")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("render", help="layout + GraphML/DOT/SVG from GraphML")
    sp.add_argument("graphs", nargs="+")
    sp.add_argument("--formats", default="graphml,dot,svg")
    sp.add_argument("--style")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--iterations", type=int, default=500)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("run", help="full pipeline with manifest")
    sp.add_argument("input", nargs="*")
    sp.add_argument("--config")
    sp.add_argument("--affiliations")
    sp.add_argument("--timeline")
    sp.add_argument("--span-start", dest="span_start")
    sp.add_argument("--span-end", dest="span_end")
    sp.add_argument("--exclude", action="append")
    sp.add_argument("--no-default-excludes", action="store_true")
    sp.add_argument("-o", "--output")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--iterations", type=int)
    sp.add_argument("--style")
    sp.add_argument("--formats")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--compare-reference", action="store_true",
                    help="report cumulative node/edge counts against the published WebKit figures")
    sp.set_defaults(func=cmd_run)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except (ParseError, InputError, ConvergenceError) as exc:
        log.error("%s", exc)
        return 1
    except (ConfigError, TimelineError, AffiliationError, RenderError) as exc:
        log.error("%s", exc)
        return 2
    except OSError as exc:
        log.error("%s", exc)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
