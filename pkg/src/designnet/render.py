"""Serializers for backbone graphs: JSON, GraphML, DOT and SVG."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .layout import Layout
from .semnet import Edge, Node, WeightedGraph


@dataclass(frozen=True)
class SvgStyle:
    margin_fraction: float = 0.05
    node_radius_base: float = 4.0
    node_radius_scale: float = 2.0
    edge_width_base: float = 0.5
    edge_width_scale: float = 2.5
    mst_opacity: float = 0.9
    non_mst_opacity: float = 0.5
    font_size: float = 10.0
    canvas_width: float = 1200.0

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive")
        if self.mst_opacity > 1 or self.non_mst_opacity > 1:
            raise ValueError("opacities must lie in (0, 1]")


def _check_layout(graph: WeightedGraph, layout: Layout | None):
    if layout is not None and layout.positions.shape[0] != graph.n:
        raise ValueError(
            f"layout covers {layout.positions.shape[0]} nodes, graph has {graph.n}"
        )


def _num(x: float) -> str:
    return repr(float(x))


def to_dict(graph: WeightedGraph, layout: Layout | None = None, layout_meta: dict | None = None) -> dict:
    _check_layout(graph, layout)
    meta = dict(graph.meta)
    previous = meta.pop("layout", None) or {}
    if layout is not None:
        if layout_meta is None:
            layout_meta = {k: v for k, v in previous.items() if k not in ("iterations_run", "converged")}
        meta["layout"] = {
            "iterations_run": layout.iterations_run,
            "converged": layout.converged,
            **layout_meta,
        }
    nodes = []
    for node in graph.nodes:
        rec = {"id": node.id, "label": node.label, "degree": node.degree}
        if layout is not None:
            x, y = layout.positions[node.id]
            rec["x"] = float(x)
            rec["y"] = float(y)
        nodes.append(rec)
    edges = [
        {"source": e.source, "target": e.target, "weight": e.weight, "mst": e.mst}
        for e in graph.edges
    ]
    return {"directed": False, "meta": meta, "nodes": nodes, "edges": edges}


def to_json(graph: WeightedGraph, layout: Layout | None = None, layout_meta: dict | None = None) -> str:
    return json.dumps(to_dict(graph, layout, layout_meta), indent=2, ensure_ascii=False) + "\n"


def from_json(text: str) -> tuple[WeightedGraph, Layout | None]:
    """Inverse of :func:`to_json`; the layout is ``None`` when nodes carry no coordinates."""
    doc = json.loads(text)
    try:
        if doc["directed"] is not False:
            raise ValueError("directed graphs are not supported")
        meta = dict(doc["meta"])
        nodes = [Node(int(r["id"]), str(r["label"]), int(r["degree"])) for r in doc["nodes"]]
        edges = [
            Edge(int(r["source"]), int(r["target"]), float(r["weight"]), bool(r["mst"]))
            for r in doc["edges"]
        ]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a graph document: missing {exc}") from None
    if [n.id for n in nodes] != list(range(len(nodes))):
        raise ValueError("node ids must be 0..N-1 in order")
    for e in edges:
        if not (0 <= e.source < len(nodes) and 0 <= e.target < len(nodes)) or e.source == e.target:
            raise ValueError(f"invalid edge {e.source}-{e.target}")
    layout = None
    layout_info = meta.get("layout")
    if nodes and all("x" in r and "y" in r for r in doc["nodes"]):
        pos = [[float(r["x"]), float(r["y"])] for r in doc["nodes"]]
        info = layout_info or {}
        layout = Layout(pos, int(info.get("iterations_run", 0)), bool(info.get("converged", False)))
    elif not nodes and layout_info is not None:
        layout = Layout([], int(layout_info.get("iterations_run", 0)), bool(layout_info.get("converged", False)))
    return WeightedGraph(nodes, edges, meta), layout


def to_graphml(graph: WeightedGraph, layout: Layout | None = None) -> str:
    _check_layout(graph, layout)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="degree" for="node" attr.name="degree" attr.type="int"/>',
        '  <key id="x" for="node" attr.name="x" attr.type="double"/>',
        '  <key id="y" for="node" attr.name="y" attr.type="double"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>',
        '  <key id="mst" for="edge" attr.name="mst" attr.type="boolean"/>',
        '  <key id="meta" for="graph" attr.name="meta" attr.type="string"/>',
        '  <graph id="G" edgedefault="undirected">',
    ]
    if graph.meta:
        out.append(f'    <data key="meta">{escape(_meta_text(graph))}</data>')
    for node in graph.nodes:
        out.append(f'    <node id="n{node.id}">')
        out.append(f'      <data key="label">{escape(node.label)}</data>')
        out.append(f'      <data key="degree">{node.degree}</data>')
        if layout is not None:
            x, y = layout.positions[node.id]
            out.append(f'      <data key="x">{_num(x)}</data>')
            out.append(f'      <data key="y">{_num(y)}</data>')
        out.append("    </node>")
    for k, e in enumerate(graph.edges):
        out.append(f'    <edge id="e{k}" source="n{e.source}" target="n{e.target}">')
        out.append(f'      <data key="weight">{_num(e.weight)}</data>')
        out.append(f'      <data key="mst">{"true" if e.mst else "false"}</data>')
        out.append("    </edge>")
    out += ["  </graph>", "</graphml>"]
    return "\n".join(out) + "\n"


def _meta_text(graph: WeightedGraph) -> str:
    return json.dumps(graph.meta, ensure_ascii=False, separators=(",", ":"))


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(graph: WeightedGraph) -> str:
    out = [f"// meta {_meta_text(graph)}"] if graph.meta else []
    out.append("graph semnet {")
    for node in graph.nodes:
        out.append(f"  {node.id} [label={_dot_quote(node.label)}];")
    for e in graph.edges:
        style = "" if e.mst else ", style=dashed"
        out.append(f"  {e.source} -- {e.target} [weight={_num(e.weight)}{style}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _fmt(v: float) -> str:
    s = f"{v:.4f}"
    if float(s) == 0:
        return "0"
    return s.rstrip("0").rstrip(".")


def node_radius(degree: int, style: SvgStyle) -> float:
    return style.node_radius_base + style.node_radius_scale * math.sqrt(degree)


def edge_width(weight: float, style: SvgStyle) -> float:
    return style.edge_width_base + style.edge_width_scale * weight


def to_svg(graph: WeightedGraph, layout: Layout, style: SvgStyle | None = None) -> str:
    """Draw the laid-out graph; SVG y grows downward, so layout y is negated."""
    style = style or SvgStyle()
    if graph.n == 0:
        raise ValueError("cannot render an empty graph")
    _check_layout(graph, layout)
    xs = layout.positions[:, 0]
    ys = -layout.positions[:, 1]
    radii = [node_radius(n.degree, style) for n in graph.nodes]
    x0 = min(x - r for x, r in zip(xs, radii))
    x1 = max(x + r for x, r in zip(xs, radii))
    y0 = min(y - r for y, r in zip(ys, radii))
    y1 = max(y + r for y, r in zip(ys, radii))
    pad = style.margin_fraction * max(x1 - x0, y1 - y0)
    vx, vy, vw, vh = x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad
    height = style.canvas_width * vh / vw

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(style.canvas_width)}" '
        f'height="{_fmt(height)}" viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
    ]
    if graph.meta:
        out.append(f"  <metadata>{escape(_meta_text(graph))}</metadata>")
    out.append('  <g class="edges" stroke="#555555" stroke-linecap="round">')
    for e in graph.edges:
        opacity = style.mst_opacity if e.mst else style.non_mst_opacity
        out.append(
            f'    <line x1="{_fmt(xs[e.source])}" y1="{_fmt(ys[e.source])}" '
            f'x2="{_fmt(xs[e.target])}" y2="{_fmt(ys[e.target])}" '
            f'stroke-width="{_fmt(edge_width(e.weight, style))}" stroke-opacity="{_fmt(opacity)}"/>'
        )
    out.append("  </g>")
    out.append('  <g class="nodes" fill="#4c78a8" stroke="#ffffff" stroke-width="0.5">')
    for node, r in zip(graph.nodes, radii):
        out.append(f'    <circle cx="{_fmt(xs[node.id])}" cy="{_fmt(ys[node.id])}" r="{_fmt(r)}"/>')
    out.append("  </g>")
    out.append(
        f'  <g class="labels" font-family="sans-serif" font-size="{_fmt(style.font_size)}" '
        'text-anchor="middle" dominant-baseline="central" fill="#222222">'
    )
    for node in graph.nodes:
        label = node.label.replace("_", " ")
        out.append(f'    <text x="{_fmt(xs[node.id])}" y="{_fmt(ys[node.id])}">{escape(label)}</text>')
    out += ["  </g>", "</svg>"]
    return "\n".join(out) + "\n"


RENDERERS = {
    "json": lambda g, lay, meta=None: to_json(g, lay, meta),
    "graphml": lambda g, lay, meta=None: to_graphml(g, lay),
    "dot": lambda g, lay, meta=None: to_dot(g),
    "svg": lambda g, lay, meta=None: to_svg(g, lay),
}

__all__ = [
    "SvgStyle", "to_json", "from_json", "to_dict", "to_graphml", "to_dot", "to_svg",
    "node_radius", "edge_width", "RENDERERS",
]
