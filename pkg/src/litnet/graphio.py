"""Graph exports: JSON, GraphML, DOT, SVG, and the word-cloud table.

Writers are hand-rolled and fully sorted so repeated runs produce identical
bytes. Rational weights become floats here and nowhere earlier.
"""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape, quoteattr

from .errors import LayoutMissing
from .findnet import ArticleIncidence, FindingsGraph, SignedEdge, WordNode

SIGN_NOTATION = {"positive": "+", "neutral": "+/-", "negative": "-"}
SIGN_COLORS = {"positive": "#2e8b57", "neutral": "#808080", "negative": "#c0392b"}
SIGN_LEGEND = [
    ("+", "positively associated", SIGN_COLORS["positive"]),
    ("+/-", "neutral association", SIGN_COLORS["neutral"]),
    ("-", "negatively associated", SIGN_COLORS["negative"]),
]

CLUSTER_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def _sorted_nodes(graph: FindingsGraph) -> list[WordNode]:
    return sorted(graph.words, key=lambda w: w.label)


def _sorted_edges(graph: FindingsGraph) -> list[SignedEdge]:
    return sorted(graph.edges, key=lambda e: (e.source, e.target))


# -------------------------------------------------------------------- JSON

def to_json_dict(graph: FindingsGraph) -> dict:
    return {
        "n_articles": graph.n_articles,
        "nodes": [
            {
                "label": w.label,
                "degree": w.degree,
                "ring": w.ring,
                "cluster": w.cluster,
                "x": w.x,
                "y": w.y,
            }
            for w in _sorted_nodes(graph)
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "weight": float(e.weight),
                "sign_weights": {
                    "pos": float(e.sign_weights["positive"]),
                    "neu": float(e.sign_weights["neutral"]),
                    "neg": float(e.sign_weights["negative"]),
                },
                "dominant_sign": e.dominant_sign,
                "article_count": e.article_count,
            }
            for e in _sorted_edges(graph)
        ],
    }


def from_json_dict(doc: dict) -> FindingsGraph:
    """Rebuild a graph value from its exported form.

    The article incidence is not part of the export, so the result supports
    inspection and re-export but not incidence-level filtering.
    """
    words = [
        WordNode(
            label=n["label"],
            degree=n["degree"],
            ring=n.get("ring", 0),
            cluster=n.get("cluster", 0),
            x=n.get("x", 0.0),
            y=n.get("y", 0.0),
        )
        for n in doc["nodes"]
    ]
    edges = []
    for e in doc["edges"]:
        sw = e["sign_weights"]
        edges.append(
            SignedEdge(
                source=e["source"],
                target=e["target"],
                per_sign_article_counts={},
                article_count=e["article_count"],
                weight=Fraction(e["weight"]).limit_denominator(10**12),
                sign_weights={
                    "positive": Fraction(sw["pos"]).limit_denominator(10**12),
                    "neutral": Fraction(sw["neu"]).limit_denominator(10**12),
                    "negative": Fraction(sw["neg"]).limit_denominator(10**12),
                },
                dominant_sign=e["dominant_sign"],
            )
        )
    return FindingsGraph(doc["n_articles"], words, edges, ArticleIncidence())


# ------------------------------------------------------------------ GraphML

def to_graphml(graph: FindingsGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d0" for="node" attr.name="degree" attr.type="int"/>',
        '  <key id="d1" for="node" attr.name="ring" attr.type="int"/>',
        '  <key id="d2" for="node" attr.name="cluster" attr.type="int"/>',
        '  <key id="d3" for="node" attr.name="x" attr.type="double"/>',
        '  <key id="d4" for="node" attr.name="y" attr.type="double"/>',
        '  <key id="e0" for="edge" attr.name="weight" attr.type="double"/>',
        '  <key id="e1" for="edge" attr.name="sign" attr.type="string"/>',
        '  <key id="e2" for="edge" attr.name="vs_pos" attr.type="double"/>',
        '  <key id="e3" for="edge" attr.name="vs_neu" attr.type="double"/>',
        '  <key id="e4" for="edge" attr.name="vs_neg" attr.type="double"/>',
        '  <key id="e5" for="edge" attr.name="article_count" attr.type="int"/>',
        '  <graph id="findings" edgedefault="directed">',
    ]
    for w in _sorted_nodes(graph):
        lines.append(f"    <node id={quoteattr(w.label)}>")
        lines.append(f'      <data key="d0">{w.degree}</data>')
        lines.append(f'      <data key="d1">{w.ring}</data>')
        lines.append(f'      <data key="d2">{w.cluster}</data>')
        lines.append(f'      <data key="d3">{w.x!r}</data>')
        lines.append(f'      <data key="d4">{w.y!r}</data>')
        lines.append("    </node>")
    for e in _sorted_edges(graph):
        lines.append(
            f"    <edge source={quoteattr(e.source)} target={quoteattr(e.target)}>"
        )
        lines.append(f'      <data key="e0">{float(e.weight)!r}</data>')
        lines.append(f'      <data key="e1">{escape(e.dominant_sign)}</data>')
        lines.append(f'      <data key="e2">{float(e.sign_weights["positive"])!r}</data>')
        lines.append(f'      <data key="e3">{float(e.sign_weights["neutral"])!r}</data>')
        lines.append(f'      <data key="e4">{float(e.sign_weights["negative"])!r}</data>')
        lines.append(f'      <data key="e5">{e.article_count}</data>')
        lines.append("    </edge>")
    lines += ["  </graph>", "</graphml>", ""]
    return "\n".join(lines)


# ---------------------------------------------------------------------- DOT

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: FindingsGraph) -> str:
    lines = ["digraph findings {"]
    for w in _sorted_nodes(graph):
        lines.append(
            f"  {_dot_quote(w.label)} [degree={w.degree}, ring={w.ring}, "
            f"cluster={w.cluster}, pos=\"{w.x!r},{w.y!r}\"];"
        )
    for e in _sorted_edges(graph):
        lines.append(
            f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)} "
            f"[weight={float(e.weight)!r}, sign={_dot_quote(SIGN_NOTATION[e.dominant_sign])}, "
            f"dominant={_dot_quote(e.dominant_sign)}, articles={e.article_count}];"
        )
    lines += ["}", ""]
    return "\n".join(lines)


# ---------------------------------------------------------------- wordcloud

def export_wordcloud(graph: FindingsGraph) -> list[tuple[str, int]]:
    """(label, degree) rows, heaviest first; the word-cloud data table."""
    return sorted(((w.label, w.degree) for w in graph.words), key=lambda r: (-r[1], r[0]))


# ---------------------------------------------------------------------- SVG

def _check_layout(graph: FindingsGraph) -> None:
    if len(graph.words) > 1 and all(w.x == 0.0 and w.y == 0.0 for w in graph.words):
        raise LayoutMissing("call the layout step before rendering")


def _infer_ego(graph: FindingsGraph) -> str | None:
    if not graph.edges:
        return None
    common = set([graph.edges[0].source, graph.edges[0].target])
    for e in graph.edges:
        common &= {e.source, e.target}
    return sorted(common)[0] if common else None


def render_svg(graph: FindingsGraph, mode: str = "cluster", ego: str | None = None) -> str:
    """Self-contained SVG of the laid-out graph.

    cluster mode: directed edges colored by dominant sign, nodes by cluster.
    sign_nodes mode: no edges; each node takes the sign color of its edge
    with the ego word (the hub of an ego-filtered view).
    """
    if mode not in ("cluster", "sign_nodes"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_layout(graph)
    radius = max((math.hypot(w.x, w.y) for w in graph.words), default=100.0)
    margin = 160.0
    half = radius + margin
    size = 2 * half
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="{-half:.1f} {-half:.1f} {size:.1f} {size:.1f}" font-family="sans-serif">',
        f'  <rect x="{-half:.1f}" y="{-half:.1f}" width="{size:.1f}" height="{size:.1f}" fill="white"/>',
        "  <defs>",
    ]
    for sign, color in sorted(SIGN_COLORS.items()):
        lines.append(
            f'    <marker id="arrow-{sign}" viewBox="0 0 10 10" refX="9" refY="5" '
            f'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
            f'<path d="M 0 0 L 10 5 L 0 10 z" fill="{color}"/></marker>'
        )
    lines.append("  </defs>")

    pos = {w.label: (w.x, w.y) for w in graph.words}
    node_r = 14.0

    if mode == "cluster":
        for e in _sorted_edges(graph):
            x1, y1 = pos[e.source]
            x2, y2 = pos[e.target]
            d = math.hypot(x2 - x1, y2 - y1) or 1.0
            # retract the head so the arrow tip meets the node rim
            xe = x2 - (x2 - x1) / d * node_r
            ye = y2 - (y2 - y1) / d * node_r
            color = SIGN_COLORS[e.dominant_sign]
            width = 1.0 + 6.0 * float(e.weight)
            lines.append(
                f'  <line x1="{x1:.2f}" y1="{y1:.2f}" x2="{xe:.2f}" y2="{ye:.2f}" '
                f'stroke="{color}" stroke-width="{width:.2f}" '
                f'marker-end="url(#arrow-{e.dominant_sign})">'
                f"<title>{escape(e.source)} {SIGN_NOTATION[e.dominant_sign]} {escape(e.target)} "
                f"(weight {float(e.weight):.4f})</title></line>"
            )

    ego_label = ego if ego is not None else _infer_ego(graph)
    node_color: dict[str, str] = {}
    if mode == "sign_nodes":
        for e in graph.edges:
            if e.source == ego_label:
                node_color[e.target] = SIGN_COLORS[e.dominant_sign]
            elif e.target == ego_label:
                node_color[e.source] = SIGN_COLORS[e.dominant_sign]
        if ego_label is not None:
            node_color[ego_label] = "#222222"

    for w in _sorted_nodes(graph):
        if mode == "cluster":
            fill = CLUSTER_PALETTE[w.cluster % len(CLUSTER_PALETTE)]
        else:
            fill = node_color.get(w.label, "#aaaaaa")
        lines.append(
            f'  <circle cx="{w.x:.2f}" cy="{w.y:.2f}" r="{node_r:.1f}" fill="{fill}" '
            f'stroke="#333" stroke-width="1"><title>{escape(w.label)} '
            f"(degree {w.degree})</title></circle>"
        )
        lines.append(
            f'  <text x="{w.x:.2f}" y="{w.y - node_r - 4:.2f}" text-anchor="middle" '
            f'font-size="11">{escape(w.label)}</text>'
        )

    ly = -half + 18
    lines.append(f'  <text x="{-half + 12:.1f}" y="{ly:.1f}" font-size="12" font-weight="bold">Edge sign</text>')
    for i, (symbol, blurb, color) in enumerate(SIGN_LEGEND):
        y = ly + 16 * (i + 1)
        lines.append(
            f'  <line x1="{-half + 12:.1f}" y1="{y - 4:.1f}" x2="{-half + 40:.1f}" y2="{y - 4:.1f}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
        lines.append(
            f'  <text x="{-half + 46:.1f}" y="{y:.1f}" font-size="11">{escape(symbol)}: {escape(blurb)}</text>'
        )
    lines.append("</svg>")
    lines.append("")
    return "\n".join(lines)
