import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, strategies as st

from designnet.layout import Layout
from designnet.render import SvgStyle, edge_width, from_json, node_radius, to_dot, to_graphml, to_json, to_svg
from designnet.semnet import Edge, Node, WeightedGraph

GML = "{http://graphml.graphdrawing.org/xmlns}"
SVG = "{http://www.w3.org/2000/svg}"

# XML 1.0 forbids most control characters
labels = st.text(
    st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="\x00"), min_size=1, max_size=12
)


@st.composite
def graphs(draw, min_nodes=0, max_nodes=12):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = [
        Edge(i, j, draw(st.floats(0, 1, allow_nan=False)), draw(st.booleans())) for i, j in chosen
    ]
    deg = [0] * n
    for e in edges:
        deg[e.source] += 1
        deg[e.target] += 1
    nodes = [Node(i, draw(labels), deg[i]) for i in range(n)]
    meta = {"kb": draw(labels), "n_terms": n, "multiplier": 2.0, "seed": draw(st.integers(0, 2**32))}
    return WeightedGraph(nodes, edges, meta)


@st.composite
def laid_out(draw, min_nodes=1):
    g = draw(graphs(min_nodes=min_nodes))
    coords = draw(
        st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2 * g.n, max_size=2 * g.n)
    )
    return g, Layout(np.array(coords).reshape(-1, 2), draw(st.integers(0, 600)), draw(st.booleans()))


def single():
    return WeightedGraph([Node(0, "robot", 0)], [], {"kb": "k"}), Layout(np.zeros((1, 2)), 1, True)


def test_empty_graph_json():
    doc = json.loads(to_json(WeightedGraph([], [], {"kb": "k"})))
    assert doc == {"directed": False, "meta": {"kb": "k"}, "nodes": [], "edges": []}
    assert list(doc) == ["directed", "meta", "nodes", "edges"]


def test_single_node_json():
    g, lay = single()
    doc = json.loads(to_json(g, lay, {"seed": 3}))
    assert doc["nodes"] == [{"id": 0, "label": "robot", "degree": 0, "x": 0.0, "y": 0.0}]
    assert doc["edges"] == []
    assert doc["meta"]["layout"] == {"iterations_run": 1, "converged": True, "seed": 3}


@given(graphs())
def test_json_round_trip_without_layout(g):
    text = to_json(g)
    back, lay = from_json(text)
    assert lay is None
    assert back == g
    assert to_json(back) == text


@given(laid_out())
def test_json_round_trip_with_layout(args):
    g, lay = args
    text = to_json(g, lay, {"seed": 1})
    back, back_lay = from_json(text)
    assert np.array_equal(back_lay.positions, lay.positions)
    assert (back_lay.iterations_run, back_lay.converged) == (lay.iterations_run, lay.converged)
    assert to_json(back, back_lay) == text


def test_layout_mismatch_rejected():
    g, _ = single()
    with pytest.raises(ValueError):
        to_json(g, Layout(np.zeros((2, 2))))
    with pytest.raises(ValueError):
        to_graphml(g, Layout(np.zeros((3, 2))))


def test_from_json_rejects_bad_documents():
    with pytest.raises(ValueError):
        from_json('{"n_terms": 1, "terms": ["a"], "occurrences": []}')
    with pytest.raises(ValueError):
        from_json('{"directed": false, "meta": {}, "nodes": [{"id": 0, "label": "a", "degree": 1}],'
                  ' "edges": [{"source": 0, "target": 4, "weight": 1.0, "mst": true}]}')


def test_graphml_two_nodes_and_escaping():
    g = WeightedGraph([Node(0, "R&D", 1), Node(1, "<b>", 1)], [Edge(0, 1, 0.5, True)])
    text = to_graphml(g, Layout(np.array([[0.0, 1.0], [2.0, 3.0]])))
    assert "R&amp;D" in text and "&lt;b&gt;" in text
    root = ET.fromstring(text)
    assert len(root.findall(f"{GML}graph/{GML}node")) == 2
    assert len(root.findall(f"{GML}graph/{GML}edge")) == 1
    keys = {(k.get("id"), k.get("for"), k.get("attr.type")) for k in root.findall(f"{GML}key")}
    assert {("label", "node", "string"), ("weight", "edge", "double"), ("mst", "edge", "boolean"),
            ("x", "node", "double"), ("y", "node", "double")} <= keys


def test_dot_output():
    g, _ = single()
    text = to_dot(g)
    assert text.splitlines()[1] == "graph semnet {"
    assert text.count("--") == 0 and '0 [label="robot"];' in text
    tri = WeightedGraph(
        [Node(i, lab, 2) for i, lab in enumerate(['say "hi"', "b", "c"])],
        [Edge(0, 1, 0.9, True), Edge(1, 2, 0.8, True), Edge(0, 2, 0.1, False)],
    )
    text = to_dot(tri)
    assert text.count(" -- ") == 3
    assert 'label="say \\"hi\\""' in text
    assert "weight=0.9" in text


def test_meta_embedded_in_every_format():
    g = WeightedGraph([Node(0, "a", 0)], [], {"kb": "R&D <x>", "seed": 42, "multiplier": 2.0})
    lay = Layout(np.zeros((1, 2)))
    gml = ET.fromstring(to_graphml(g, lay))
    assert json.loads(gml.find(f"{GML}graph/{GML}data[@key='meta']").text) == g.meta
    svg = ET.fromstring(to_svg(g, lay))
    assert json.loads(svg.find(f"{SVG}metadata").text) == g.meta
    first = to_dot(g).splitlines()[0]
    assert first.startswith("// meta ") and json.loads(first[8:]) == g.meta
    bare = WeightedGraph([Node(0, "a", 0)], [])
    assert to_dot(bare).startswith("graph semnet {") and "<metadata>" not in to_svg(bare, lay)


def test_svg_defaults_single_node():
    g, lay = single()
    root = ET.fromstring(to_svg(g, lay))
    circles = root.findall(f".//{SVG}circle")
    assert len(circles) == 1 and float(circles[0].get("r")) == 4.0
    assert root.findall(f".//{SVG}line") == []


def test_style_formulas():
    style = SvgStyle()
    assert node_radius(4, style) == 8.0
    assert edge_width(1.0, style) == 3.0


def test_svg_structure():
    g = WeightedGraph(
        [Node(0, "a", 4), Node(1, "b", 1), Node(2, "c", 1), Node(3, "d", 1), Node(4, "e", 1)],
        [Edge(0, k, 1.0 if k == 1 else 0.2, k < 3) for k in range(1, 5)],
    )
    lay = Layout(np.array([[0, 0], [10, 5], [-10, 5], [0, -10], [5, 5]], dtype=float))
    text = to_svg(g, lay)
    root = ET.fromstring(text)
    lines = root.findall(f".//{SVG}line")
    circles = root.findall(f".//{SVG}circle")
    assert [float(c.get("r")) for c in circles][0] == 8.0
    assert float(lines[0].get("stroke-width")) == 3.0
    assert [l.get("stroke-opacity") for l in lines] == ["0.9", "0.9", "0.5", "0.5"]
    # edges precede nodes; y is flipped
    assert text.index("<line") < text.index("<circle")
    assert circles[3].get("cy") == "10"
    vx, vy, vw, vh = map(float, root.get("viewBox").split())
    for c in circles:
        x, y, r = float(c.get("cx")), float(c.get("cy")), float(c.get("r"))
        assert vx <= x - r and x + r <= vx + vw and vy <= y - r and y + r <= vy + vh


def test_svg_empty_graph_error():
    with pytest.raises(ValueError):
        to_svg(WeightedGraph([], []), Layout(np.zeros((0, 2))))


def test_style_validation():
    with pytest.raises(ValueError):
        SvgStyle(mst_opacity=1.5)
    with pytest.raises(ValueError):
        SvgStyle(node_radius_base=0.0)


@given(laid_out())
def test_renderers_well_formed_and_pure(args):
    g, lay = args
    gml = to_graphml(g, lay)
    svg = to_svg(g, lay)
    root = ET.fromstring(gml)
    assert len(root.findall(f"{GML}graph/{GML}node")) == g.n
    assert len(root.findall(f"{GML}graph/{GML}edge")) == len(g.edges)
    sroot = ET.fromstring(svg)
    assert len(sroot.findall(f".//{SVG}circle")) == g.n
    assert len(sroot.findall(f".//{SVG}line")) == len(g.edges)
    assert gml == to_graphml(g, lay) and svg == to_svg(g, lay) and to_dot(g) == to_dot(g)
