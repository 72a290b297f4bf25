"""Layout and export of collaboration graphs (GraphML, DOT, SVG, CSV, JSON).

Every exporter is a pure function returning bytes: nodes in ascending id,
edges in ``(u, v)`` order, floats written with ``repr`` so output is stable
byte for byte.
"""

from __future__ import annotations

import colorsys
import csv
import hashlib
import io
import json
import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime
from importlib import resources
from xml.sax.saxutils import escape

import numpy as np

from . import kernels
from .affiliation import OTHER, Developer
from .graph import CollabGraph
from .metrics import MetricsReport, betweenness_centrality, degree_centrality, eigenvector_centrality

OTHER_COLOR = "#808080"
SIZE_METRICS = ("degree", "eigenvector", "betweenness")
METRICS_HEADER = (
    "id", "email", "affiliation", "degree", "degree_centrality",
    "betweenness", "betweenness_normalized", "eigenvector", "clustering",
)
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_HEX_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


class RenderError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LayoutResult:
    positions: np.ndarray  # shape (n, 2), inside the unit square
    seed: int
    iterations: int

    def __post_init__(self):
        p = self.positions
        if p.ndim != 2 or p.shape[1] != 2:
            raise RenderError("positions must have shape (n, 2)")
        if len(p) and (not np.all(np.isfinite(p)) or p.min() < 0.0 or p.max() > 1.0):
            raise RenderError("positions must be finite and inside [0, 1]^2")


@dataclass(frozen=True)
class StyleMap:
    colors: dict[str, str] = field(default_factory=dict)
    size_metric: str = "degree"
    min_px: float = 3.0
    max_px: float = 18.0

    def __post_init__(self):
        for org, color in self.colors.items():
            if not _HEX_RE.match(color):
                raise RenderError(f"bad colour {color!r} for {org!r}")
            if org == OTHER and color.upper() != OTHER_COLOR:
                raise RenderError(f'"{OTHER}" is always {OTHER_COLOR}')
        if self.size_metric not in SIZE_METRICS:
            raise RenderError(f"size_metric must be one of {SIZE_METRICS}")
        if not 0 <= self.min_px < self.max_px:
            raise RenderError("need 0 <= min_px < max_px")

    def color(self, org: str) -> str:
        if org == OTHER:
            return OTHER_COLOR
        if org in self.colors:
            return self.colors[org].upper()
        # unlisted organizations: stable hue from the name
        h = int.from_bytes(hashlib.sha256(org.encode()).digest()[:2], "big") / 65536
        r, g, b = colorsys.hls_to_rgb(h, 0.45, 0.65)
        return "#%02X%02X%02X" % (round(r * 255), round(g * 255), round(b * 255))


def load_style(text: str) -> StyleMap:
    """Parse ``Organization = #RRGGBB`` lines plus the ``size_metric``,
    ``min_px`` and ``max_px`` settings."""
    colors: dict[str, str] = {}
    opts: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise RenderError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("size_metric", "min_px", "max_px"):
            value = value.split("#", 1)[0].strip()
        if key == "size_metric":
            opts["size_metric"] = value
        elif key in ("min_px", "max_px"):
            try:
                opts[key] = float(value)
            except ValueError:
                raise RenderError(f"line {lineno}: {key} must be a number") from None
        else:
            colors[key] = value.split()[0] if value else value
    return StyleMap(colors, **opts)


def default_style() -> StyleMap:
    return load_style(resources.files("coeditnet").joinpath("data/style.txt").read_text("utf-8"))


def layout_force_directed(g: CollabGraph, seed: int = 42, iterations: int = 500) -> LayoutResult:
    """Seeded Fruchterman-Reingold layout in the unit square.

    The finished drawing is translated so its bounding box is centred on
    (0.5, 0.5); distances are not rescaled.
    """
    if iterations < 1:
        raise RenderError("iterations must be >= 1")
    n = g.n
    if n == 0:
        return LayoutResult(np.zeros((0, 2)), seed, iterations)
    pos = np.random.default_rng(seed).random((n, 2))
    e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 3)
    pos = kernels.fruchterman_reingold(pos, e[:, 0], e[:, 1], iterations, math.sqrt(1.0 / n), 0.1)
    pos = np.asarray(pos)
    pos += 0.5 - (pos.min(axis=0) + pos.max(axis=0)) / 2.0
    np.clip(pos, 0.0, 1.0, out=pos)
    return LayoutResult(pos, seed, iterations)


def size_values(g: CollabGraph, metric: str) -> np.ndarray:
    if metric == "degree":
        return degree_centrality(g)[0].astype(np.float64)
    if metric == "eigenvector":
        return eigenvector_centrality(g)
    if metric == "betweenness":
        return betweenness_centrality(g)
    raise RenderError(f"unknown size metric {metric!r}")


def node_radii(values: np.ndarray, min_px: float, max_px: float) -> np.ndarray:
    """Affine map of ``[min(values), max(values)]`` onto ``[min_px, max_px]``;
    constant inputs all get the midpoint."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) == 0:
        return values
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.full(len(values), (min_px + max_px) / 2.0)
    return min_px + (values - lo) * ((max_px - min_px) / (hi - lo))


def _iso(ts: datetime) -> str:
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


# -- GraphML -----------------------------------------------------------------

_NODE_KEYS = (
    ("email", "string"), ("affiliation", "string"), ("color", "string"),
    ("size", "double"), ("x", "double"), ("y", "double"),
)


def export_graphml(g: CollabGraph, layout: LayoutResult | None, style: StyleMap) -> bytes:
    if layout is not None and len(layout.positions) != g.n:
        raise RenderError("layout does not cover the graph's nodes")
    size = size_values(g, style.size_metric)
    out = io.StringIO()
    w = out.write
    w('<?xml version="1.0" encoding="UTF-8"?>\n')
    w(f'<graphml xmlns="{GRAPHML_NS}">\n')
    for name in ("interval_start", "interval_end", "size_metric"):
        w(f'  <key id="{name}" for="graph" attr.name="{name}" attr.type="string"/>\n')
    for name, typ in _NODE_KEYS:
        w(f'  <key id="{name}" for="node" attr.name="{name}" attr.type="{typ}"/>\n')
    w('  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>\n')
    w('  <graph id="G" edgedefault="undirected">\n')
    w(f'    <data key="interval_start">{_iso(g.interval[0])}</data>\n')
    w(f'    <data key="interval_end">{_iso(g.interval[1])}</data>\n')
    w(f'    <data key="size_metric">{style.size_metric}</data>\n')
    for i, dev in enumerate(g.nodes):
        w(f'    <node id="n{dev.id}">')
        w(f'<data key="email">{escape(dev.email)}</data>')
        w(f'<data key="affiliation">{escape(dev.affiliation)}</data>')
        w(f'<data key="color">{style.color(dev.affiliation)}</data>')
        w(f'<data key="size">{float(size[i])!r}</data>')
        if layout is not None:
            x, y = layout.positions[i]
            w(f'<data key="x">{float(x)!r}</data><data key="y">{float(y)!r}</data>')
        w("</node>\n")
    for u, v, wt in g.edges:
        w(f'    <edge source="n{u}" target="n{v}"><data key="weight">{wt}</data></edge>\n')
    w("  </graph>\n</graphml>\n")
    return out.getvalue().encode("utf-8")


def read_graphml(data: bytes) -> tuple[CollabGraph, LayoutResult | None]:
    """Rebuild a CollabGraph (and layout, when every node has x/y) from
    GraphML. Nodes are numbered in document order."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise RenderError(f"malformed GraphML: {exc}") from None
    ns = {"g": GRAPHML_NS}
    keys = {k.get("id"): k.get("attr.name", k.get("id")) for k in root.iterfind("g:key", ns)}
    graph = root.find("g:graph", ns)
    if graph is None:
        raise RenderError("GraphML document has no <graph>")

    def attrs(el):
        return {keys.get(d.get("key"), d.get("key")): (d.text or "") for d in el.iterfind("g:data", ns)}

    gattrs = attrs(graph)
    try:
        interval = (datetime.fromisoformat(gattrs["interval_start"].replace("Z", "+00:00")),
                    datetime.fromisoformat(gattrs["interval_end"].replace("Z", "+00:00")))
    except (KeyError, ValueError):
        raise RenderError("GraphML graph lacks a valid interval") from None

    index: dict[str, int] = {}
    nodes, xy = [], []
    for el in graph.iterfind("g:node", ns):
        a = attrs(el)
        if "email" not in a:
            raise RenderError(f"node {el.get('id')!r} has no email")
        index[el.get("id")] = len(nodes)
        nodes.append(Developer(len(nodes), a["email"], a.get("affiliation") or OTHER))
        if "x" in a and "y" in a:
            xy.append((float(a["x"]), float(a["y"])))
    edges: dict[tuple[int, int], int] = {}
    for el in graph.iterfind("g:edge", ns):
        try:
            u, v = sorted((index[el.get("source")], index[el.get("target")]))
        except KeyError:
            raise RenderError("edge references an unknown node") from None
        if (u, v) in edges:
            raise RenderError(f"duplicate edge {el.get('source')}--{el.get('target')}")
        edges[(u, v)] = int(attrs(el).get("weight", "1"))
    g = CollabGraph(tuple(nodes), tuple((u, v, w) for (u, v), w in sorted(edges.items())), interval)
    layout = None
    if nodes and len(xy) == len(nodes):
        layout = LayoutResult(np.array(xy), seed=-1, iterations=0)
    return g, layout


# -- DOT ---------------------------------------------------------------------

def _dot_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: CollabGraph, style: StyleMap) -> bytes:
    radii = node_radii(size_values(g, style.size_metric), style.min_px, style.max_px)
    lines = ["graph {"]
    for i, dev in enumerate(g.nodes):
        width = 2.0 * float(radii[i]) / 72.0
        lines.append(
            f"  n{dev.id} [label={_dot_str(dev.email)}, affiliation={_dot_str(dev.affiliation)}, "
            f'style=filled, fillcolor="{style.color(dev.affiliation)}", '
            f"shape=circle, fixedsize=true, width={width!r}];"
        )
    for u, v, w in g.edges:
        lines.append(f"  n{u} -- n{v} [weight={w}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- SVG ---------------------------------------------------------------------

CANVAS = 800
LEGEND_WIDTH = 200


def legend_entries(g: CollabGraph, style: StyleMap) -> list[str]:
    """Organizations present in ``g``: styled ones in style order, then the
    rest alphabetically, with "other" last."""
    present = {d.affiliation for d in g.nodes}
    known = [org for org in style.colors if org in present and org != OTHER]
    rest = sorted(present - set(known) - {OTHER})
    return known + rest + ([OTHER] if OTHER in present else [])


def export_svg(g: CollabGraph, layout: LayoutResult, style: StyleMap) -> bytes:
    if len(layout.positions) != g.n:
        raise RenderError(f"layout has {len(layout.positions)} positions for {g.n} nodes")
    radii = node_radii(size_values(g, style.size_metric), style.min_px, style.max_px)
    margin = style.max_px + 4.0
    span = CANVAS - 2.0 * margin
    px = margin + layout.positions * span
    width = CANVAS + LEGEND_WIDTH
    out = io.StringIO()
    w = out.write
    w('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n')
    w(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
      f'height="{CANVAS}" viewBox="0 0 {width} {CANVAS}">\n')
    w('<g id="edges" stroke="#B0B0B0" stroke-opacity="0.6">\n')
    for u, v, wt in g.edges:
        sw = 0.5 + 0.5 * math.log2(wt)
        w(f'<line x1="{px[u, 0]:.3f}" y1="{px[u, 1]:.3f}" x2="{px[v, 0]:.3f}" '
          f'y2="{px[v, 1]:.3f}" stroke-width="{sw:.3f}"/>\n')
    w("</g>\n")
    w('<g id="nodes" stroke="#FFFFFF" stroke-width="0.5">\n')
    for i, dev in enumerate(g.nodes):
        title = escape(f"{dev.email} ({dev.affiliation})")
        w(f'<circle cx="{px[i, 0]:.3f}" cy="{px[i, 1]:.3f}" r="{radii[i]:.3f}" '
          f'fill="{style.color(dev.affiliation)}"><title>{title}</title></circle>\n')
    w("</g>\n")
    w('<g id="legend" font-family="sans-serif" font-size="12">\n')
    for row, org in enumerate(legend_entries(g, style)):
        y = 20 + 20 * row
        w(f'<rect x="{CANVAS + 10}" y="{y}" width="12" height="12" fill="{style.color(org)}"/>')
        w(f'<text x="{CANVAS + 28}" y="{y + 10}">{escape(org)}</text>\n')
    w("</g>\n</svg>\n")
    return out.getvalue().encode("utf-8")


# -- metrics -----------------------------------------------------------------

def export_metrics(report: MetricsReport, fmt: str) -> bytes:
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for row in report.nodes:
            writer.writerow([repr(getattr(row, k)) if isinstance(getattr(row, k), float)
                             else getattr(row, k) for k in METRICS_HEADER])
        return out.getvalue().encode("utf-8")
    if fmt == "json":
        doc = {
            "node_count": report.node_count,
            "edge_count": report.edge_count,
            "density": report.density,
            "global_clustering": report.global_clustering,
            "component_count": report.component_count,
            "nodes": [{k: getattr(row, k) for k in METRICS_HEADER} for row in report.nodes],
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    raise RenderError(f"unknown metrics format {fmt!r}")
