import json
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from conftest import make_triples
from litnet.errors import LayoutMissing
from litnet.findnet import FindingsGraph, WordNode, build_graph, build_incidence
from litnet.graphio import (
    SIGN_NOTATION,
    export_wordcloud,
    from_json_dict,
    render_svg,
    to_dot,
    to_graphml,
    to_json_dict,
)


def graph_of(corpus, **kwargs):
    return build_graph(build_incidence(make_triples(corpus)), **kwargs)


ONE_EDGE = {"d1": {("information", "positive", "awareness")}}

MIXED = {
    "d1": {("education", "positive", "awareness")},
    "d2": {("income", "negative", "migration")},
    "d3": {("trust", "neutral", "preparedness"), ("education", "positive", "awareness")},
}


class TestJson:
    def test_document_schema(self):
        doc = to_json_dict(graph_of(MIXED))
        assert set(doc) == {"n_articles", "nodes", "edges"}
        assert doc["n_articles"] == 3
        for node in doc["nodes"]:
            assert set(node) == {"label", "degree", "ring", "cluster", "x", "y"}
        for edge in doc["edges"]:
            assert set(edge) == {
                "source", "target", "weight", "sign_weights", "dominant_sign", "article_count",
            }
            assert set(edge["sign_weights"]) == {"pos", "neu", "neg"}

    def test_nodes_and_edges_sorted(self):
        doc = to_json_dict(graph_of(MIXED))
        labels = [n["label"] for n in doc["nodes"]]
        assert labels == sorted(labels)
        keys = [(e["source"], e["target"]) for e in doc["edges"]]
        assert keys == sorted(keys)

    def test_weights_are_floats(self):
        doc = to_json_dict(graph_of(ONE_EDGE))
        (edge,) = doc["edges"]
        assert isinstance(edge["weight"], float)
        assert edge["weight"] == 1.0
        assert edge["sign_weights"] == {"pos": 1.0, "neu": 0.0, "neg": 0.0}

    def test_json_serializable(self):
        json.dumps(to_json_dict(graph_of(MIXED)))

    def test_round_trip_preserves_graph(self):
        graph = graph_of(MIXED)
        back = from_json_dict(to_json_dict(graph))
        assert back.n_articles == graph.n_articles
        assert [(w.label, w.degree, w.ring, w.cluster, w.x, w.y) for w in back.words] == [
            (w.label, w.degree, w.ring, w.cluster, w.x, w.y)
            for w in sorted(graph.words, key=lambda w: w.label)
        ]
        got = {(e.source, e.target): (e.weight, e.dominant_sign, e.article_count) for e in back.edges}
        want = {(e.source, e.target): (e.weight, e.dominant_sign, e.article_count) for e in graph.edges}
        assert got == want

    def test_reexport_of_reload_is_identical(self):
        doc = to_json_dict(graph_of(MIXED))
        assert to_json_dict(from_json_dict(doc)) == doc

    def test_deterministic(self):
        assert to_json_dict(graph_of(MIXED)) == to_json_dict(graph_of(MIXED))


class TestGraphml:
    def test_parses_and_counts(self):
        root = ET.fromstring(to_graphml(graph_of(MIXED)))
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        nodes = root.findall(".//g:node", ns)
        edges = root.findall(".//g:edge", ns)
        assert len(nodes) == 6
        assert len(edges) == 3

    def test_directed_and_attributed(self):
        root = ET.fromstring(to_graphml(graph_of(ONE_EDGE)))
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        assert root.find(".//g:graph", ns).get("edgedefault") == "directed"
        declared = {k.get("attr.name") for k in root.findall("g:key", ns)}
        assert declared == {
            "degree", "ring", "cluster", "x", "y",
            "weight", "sign", "vs_pos", "vs_neu", "vs_neg", "article_count",
        }
        (edge,) = root.findall(".//g:edge", ns)
        assert edge.get("source") == "information"
        assert edge.get("target") == "awareness"
        data = {d.get("key"): d.text for d in edge.findall("g:data", ns)}
        assert data["e0"] == "1.0"
        assert data["e1"] == "positive"

    def test_label_escaping(self):
        graph = graph_of({"d1": {('flood "risk" & loss', "positive", "b")}})
        root = ET.fromstring(to_graphml(graph))
        ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
        ids = {n.get("id") for n in root.findall(".//g:node", ns)}
        assert 'flood "risk" & loss' in ids


class TestDot:
    def test_single_edge_document(self):
        dot = to_dot(graph_of(ONE_EDGE))
        assert dot.startswith("digraph findings {")
        assert '"information" -> "awareness"' in dot
        assert "weight=1.0" in dot
        assert 'sign="+"' in dot

    def test_negative_edge_sign_notation(self):
        dot = to_dot(graph_of({"d1": {("income", "negative", "migration")}}))
        assert 'sign="-"' in dot

    def test_neutral_edge_sign_notation(self):
        dot = to_dot(graph_of({"d1": {("trust", "neutral", "policy")}}))
        assert 'sign="+/-"' in dot

    def test_node_attributes_present(self):
        dot = to_dot(graph_of(ONE_EDGE))
        assert '"awareness" [degree=1, ring=0, cluster=0,' in dot

    def test_quote_escaping(self):
        dot = to_dot(graph_of({"d1": {('say "hi"', "neutral", "b")}}))
        assert '"say \\"hi\\""' in dot

    def test_deterministic(self):
        assert to_dot(graph_of(MIXED)) == to_dot(graph_of(MIXED))


class TestWordcloud:
    def test_sorted_by_degree_then_label(self):
        rows = export_wordcloud(graph_of(MIXED))
        assert rows[0] == ("awareness", 2)
        assert rows[1] == ("education", 2)
        degrees = [d for _, d in rows]
        assert degrees == sorted(degrees, reverse=True)

    def test_empty_graph(self):
        assert export_wordcloud(graph_of({})) == []


class TestSvg:
    def test_cluster_mode_draws_signed_arrows_and_legend(self):
        svg = render_svg(graph_of(MIXED))
        assert svg.startswith("<svg ")
        assert 'marker-end="url(#arrow-positive)"' in svg
        assert 'marker-end="url(#arrow-negative)"' in svg
        assert "+: positively associated" in svg
        assert "+/-: neutral association" in svg
        assert "-: negatively associated" in svg

    def test_positive_relation_renders_plus_arrow(self):
        svg = render_svg(graph_of({"d1": {("education", "positive", "adaptation")}}))
        assert 'marker-end="url(#arrow-positive)"' in svg
        assert "education + adaptation" in svg

    def test_sign_nodes_mode_hides_edges(self):
        svg = render_svg(graph_of(MIXED), mode="sign_nodes")
        assert "marker-end" not in svg

    def test_sign_nodes_mode_colors_neighbors_by_edge_sign(self):
        corpus = {
            "d1": {("a", "positive", "information")},
            "d2": {("b", "negative", "information")},
        }
        svg = render_svg(graph_of(corpus), mode="sign_nodes", ego="information")
        assert svg.count('fill="#2e8b57"') >= 1
        assert svg.count('fill="#c0392b"') >= 1

    def test_every_node_labeled(self):
        graph = graph_of(MIXED)
        svg = render_svg(graph)
        for w in graph.words:
            assert f">{w.label}</text>" in svg

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            render_svg(graph_of(ONE_EDGE), mode="3d")

    def test_layout_missing_raises(self):
        flat = FindingsGraph(
            n_articles=1,
            words=[WordNode("a", 1), WordNode("b", 1)],
            edges=[],
            incidence=build_incidence([]),
        )
        with pytest.raises(LayoutMissing):
            render_svg(flat)

    def test_deterministic(self):
        assert render_svg(graph_of(MIXED)) == render_svg(graph_of(MIXED))

    def test_sign_notation_table(self):
        assert SIGN_NOTATION == {"positive": "+", "neutral": "+/-", "negative": "-"}
