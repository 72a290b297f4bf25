"""Temporal co-edit collaboration networks from version-control change logs."""

from .affiliation import (AffiliationTable, Developer, canonicalize_email, default_affiliation_table,
                          load_affiliation_table, resolve_affiliation)
from .changelog import (Contribution, ParseReport, format_commitlog, parse_changelog, parse_commitlog,
                        validate_contributions)
from .graph import BipartiteEdits, CollabGraph, build_bipartite, build_graph, project_collaboration, slice_graphs
from .kernels import BACKEND
from .metrics import (MetricsReport, betweenness_centrality, clustering, degree_centrality, density,
                      eigenvector_centrality, graph_summary)
from .render import (LayoutResult, StyleMap, default_style, export_dot, export_graphml, export_metrics,
                     export_svg, layout_force_directed, load_style, read_graphml)
from .timeline import EventTimeline, Slice, assign_slice, build_slices, load_timeline, preset_timeline

__version__ = "0.1.0"
