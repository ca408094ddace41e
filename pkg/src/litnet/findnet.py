"""The findings network: degrees, edge weights, verb-sign weights, clusters,
concentric layout, and filtered views.

All weights are exact rationals; floats appear only when exporting. Degrees
and weights are article-level: a word or pair occurring seven times in one
article counts once, so duplicating triples within an article changes
nothing.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyGraph, UnknownWord
from .relex import RelationTriple

SIGNS = ("positive", "neutral", "negative")


@dataclass
class ArticleIncidence:
    """Binary indicators stored as article-id sets."""

    articles: set[str] = field(default_factory=set)
    word_articles: dict[str, set[str]] = field(default_factory=dict)
    pair_articles: dict[tuple[str, str], set[str]] = field(default_factory=dict)
    signed_pair_articles: dict[tuple[str, str, str], set[str]] = field(default_factory=dict)

    def words(self) -> list[str]:
        return sorted(self.word_articles)

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pair_articles)


def build_incidence(triples: list[RelationTriple]) -> ArticleIncidence:
    inc = ArticleIncidence()
    for t in triples:
        inc.articles.add(t.doc_id)
        inc.word_articles.setdefault(t.source_label, set()).add(t.doc_id)
        inc.word_articles.setdefault(t.target_label, set()).add(t.doc_id)
        pair = (t.source_label, t.target_label)
        inc.pair_articles.setdefault(pair, set()).add(t.doc_id)
        inc.signed_pair_articles.setdefault((t.sign,) + pair, set()).add(t.doc_id)
    return inc


def node_degree(incidence: ArticleIncidence, word: str) -> int:
    """Number of articles whose findings mention the word."""
    if word not in incidence.word_articles:
        raise UnknownWord(word)
    return len(incidence.word_articles[word])


def _pair_total(incidence: ArticleIncidence) -> int:
    return sum(len(v) for v in incidence.pair_articles.values())


def edge_weight(incidence: ArticleIncidence, pair: tuple[str, str]) -> Fraction:
    """Article count of the pair over the total of all pair indicators."""
    total = _pair_total(incidence)
    if total == 0:
        raise EmptyGraph("no relations anywhere")
    return Fraction(len(incidence.pair_articles.get(pair, ())), total)


def verb_sign_weight(incidence: ArticleIncidence, sign: str, pair: tuple[str, str]) -> Fraction:
    """Per-sign weight with a per-sign denominator (0 if the sign is absent)."""
    total = sum(
        len(v) for (s, _, _), v in incidence.signed_pair_articles.items() if s == sign
    )
    if total == 0:
        return Fraction(0)
    count = len(incidence.signed_pair_articles.get((sign,) + pair, ()))
    return Fraction(count, total)


@dataclass
class SignedEdge:
    source: str
    target: str
    per_sign_article_counts: dict[str, int]
    article_count: int
    weight: Fraction
    sign_weights: dict[str, Fraction]
    dominant_sign: str


@dataclass
class WordNode:
    label: str
    degree: int
    ring: int = 0
    cluster: int = 0
    x: float = 0.0
    y: float = 0.0


@dataclass
class FindingsGraph:
    n_articles: int
    words: list[WordNode]
    edges: list[SignedEdge]
    incidence: ArticleIncidence

    def node(self, label: str) -> WordNode:
        for w in self.words:
            if w.label == label:
                return w
        raise UnknownWord(label)

    def labels(self) -> list[str]:
        return [w.label for w in self.words]


def dominant_sign(edge_sign_weights: dict[str, Fraction], raw_counts: dict[str, int], basis: str = "eq3") -> str:
    """Sign with the largest weight; any tie at the top resolves to neutral."""
    table = raw_counts if basis == "raw" else edge_sign_weights
    best = max(table.values())
    winners = [s for s in SIGNS if table.get(s, 0) == best]
    return winners[0] if len(winners) == 1 else "neutral"


# ----------------------------------------------------------------- clusters

def _undirected_weights(
    incidence: ArticleIncidence,
) -> tuple[dict[tuple[str, str], Fraction], Fraction]:
    """Antiparallel edge weights summed; (weights keyed by sorted pair, m)."""
    total = _pair_total(incidence)
    weights: dict[tuple[str, str], Fraction] = {}
    for (a, b), arts in incidence.pair_articles.items():
        key = (a, b) if a <= b else (b, a)
        weights[key] = weights.get(key, Fraction(0)) + Fraction(len(arts), total)
    m = sum(weights.values(), Fraction(0))
    return weights, m


def cluster_modularity(incidence: ArticleIncidence, seed: int = 0) -> dict[str, int]:
    """Greedy agglomerative modularity clustering; fully deterministic.

    Communities merge while the best modularity gain is positive; equal gains
    go to the lexicographically smallest pair of community keys (a community's
    key is its sorted label tuple). Cluster numbers are assigned by
    descending community size, ties by smallest member label. The seed is
    accepted for interface stability; the algorithm uses no randomness.
    """
    del seed
    labels = incidence.words()
    if not labels:
        return {}
    if not incidence.pair_articles:
        return {lab: i for i, lab in enumerate(labels)}

    weights, m = _undirected_weights(incidence)

    # community id -> member set; key = sorted member tuple
    comms: dict[int, set[str]] = {i: {lab} for i, lab in enumerate(labels)}
    of_label = {lab: i for i, lab in enumerate(labels)}

    deg: dict[str, Fraction] = {lab: Fraction(0) for lab in labels}
    for (a, b), w in weights.items():
        if a == b:
            deg[a] += 2 * w
        else:
            deg[a] += w
            deg[b] += w

    # inter-community weights, keyed by (cid_small, cid_big)
    between: dict[tuple[int, int], Fraction] = {}
    for (a, b), w in weights.items():
        ca, cb = of_label[a], of_label[b]
        if ca != cb:
            key = (min(ca, cb), max(ca, cb))
            between[key] = between.get(key, Fraction(0)) + w
    a_sum: dict[int, Fraction] = {cid: sum((deg[l] for l in mem), Fraction(0)) for cid, mem in comms.items()}

    def comm_key(cid: int) -> tuple[str, ...]:
        return tuple(sorted(comms[cid]))

    while len(comms) > 1 and between:
        best_dq: Fraction | None = None
        best_pair: tuple[int, int] | None = None
        best_keys: tuple[tuple[str, ...], tuple[str, ...]] | None = None
        for (ca, cb), w in between.items():
            dq = w / m - (a_sum[ca] * a_sum[cb]) / (2 * m * m)
            ka, kb = comm_key(ca), comm_key(cb)
            keys = (ka, kb) if ka <= kb else (kb, ka)
            if best_dq is None or dq > best_dq or (dq == best_dq and keys < best_keys):
                best_dq, best_pair, best_keys = dq, (ca, cb), keys
        if best_dq is None or best_dq <= 0:
            break
        ca, cb = best_pair
        # merge cb into ca
        comms[ca] |= comms.pop(cb)
        a_sum[ca] += a_sum.pop(cb)
        for lab in comms[ca]:
            of_label[lab] = ca
        merged: dict[tuple[int, int], Fraction] = {}
        for (x, y), w in between.items():
            x2 = ca if x == cb else x
            y2 = ca if y == cb else y
            if x2 == y2:
                continue
            key = (min(x2, y2), max(x2, y2))
            merged[key] = merged.get(key, Fraction(0)) + w
        between = merged

    ordered = sorted(comms.values(), key=lambda mem: (-len(mem), min(mem)))
    assignment: dict[str, int] = {}
    for number, members in enumerate(ordered):
        for lab in members:
            assignment[lab] = number
    return assignment


# ------------------------------------------------------------------- layout

LAYOUT_UNIT = 100.0


def concentric_layout(
    nodes: list[WordNode], rings: int = 4, unit: float = LAYOUT_UNIT
) -> dict[str, tuple[float, float]]:
    """Place nodes on concentric circles, highest degrees innermost.

    A node's ring is floor(R * fraction of nodes with strictly greater
    degree); radius is (ring+1)*unit. Within a ring, nodes are ordered by
    (cluster, label) and spaced at equal angles starting from the top.
    """
    if not nodes:
        return {}
    degrees = sorted((n.degree for n in nodes), reverse=True)
    p = len(nodes)
    coords: dict[str, tuple[float, float]] = {}
    ring_members: dict[int, list[WordNode]] = {}
    for n in nodes:
        greater = sum(1 for d in degrees if d > n.degree)
        ring = min(rings - 1, math.floor(rings * greater / p))
        n.ring = ring
        ring_members.setdefault(ring, []).append(n)
    for ring, members in ring_members.items():
        members.sort(key=lambda n: (n.cluster, n.label))
        radius = (ring + 1) * unit
        for k, n in enumerate(members):
            theta = -math.pi / 2 + 2 * math.pi * k / len(members)
            n.x = round(radius * math.cos(theta), 6)
            n.y = round(radius * math.sin(theta), 6)
            coords[n.label] = (n.x, n.y)
    return coords


# -------------------------------------------------------------- build graph

def build_graph(
    incidence: ArticleIncidence,
    n_articles: int | None = None,
    sign_basis: str = "eq3",
    rings: int = 4,
) -> FindingsGraph:
    """Assemble the full graph: nodes, signed weighted edges, clusters, layout."""
    labels = incidence.words()
    clusters = cluster_modularity(incidence)
    nodes = [
        WordNode(label=lab, degree=len(incidence.word_articles[lab]), cluster=clusters.get(lab, 0))
        for lab in labels
    ]
    pair_total = _pair_total(incidence)
    sign_totals = {s: 0 for s in SIGNS}
    for (s, _, _), arts in incidence.signed_pair_articles.items():
        sign_totals[s] += len(arts)

    edges: list[SignedEdge] = []
    for pair in incidence.pairs():
        arts = incidence.pair_articles[pair]
        raw = {
            s: len(incidence.signed_pair_articles.get((s,) + pair, ()))
            for s in SIGNS
        }
        vs = {
            s: (Fraction(raw[s], sign_totals[s]) if sign_totals[s] else Fraction(0))
            for s in SIGNS
        }
        edges.append(
            SignedEdge(
                source=pair[0],
                target=pair[1],
                per_sign_article_counts=raw,
                article_count=len(arts),
                weight=Fraction(len(arts), pair_total),
                sign_weights=vs,
                dominant_sign=dominant_sign(vs, raw, sign_basis),
            )
        )
    graph = FindingsGraph(
        n_articles=len(incidence.articles) if n_articles is None else n_articles,
        words=nodes,
        edges=edges,
        incidence=incidence,
    )
    concentric_layout(graph.words, rings=rings)
    return graph


# ------------------------------------------------------------------ filters

@dataclass
class FilterSpec:
    """Conjunction of view filters; None fields are inactive."""

    ego_in: str | None = None
    ego_out: str | None = None
    targets_any: frozenset[str] | None = None
    top_clusters: int | None = None
    article_sample_n: int | None = None
    article_sample_seed: int = 0

    def is_identity(self) -> bool:
        return (
            self.ego_in is None
            and self.ego_out is None
            and self.targets_any is None
            and self.top_clusters is None
            and self.article_sample_n is None
        )


def _restrict_articles(incidence: ArticleIncidence, keep: set[str]) -> ArticleIncidence:
    out = ArticleIncidence(articles=set(keep))
    for w, arts in incidence.word_articles.items():
        kept = arts & keep
        if kept:
            out.word_articles[w] = kept
    for pair, arts in incidence.pair_articles.items():
        kept = arts & keep
        if kept:
            out.pair_articles[pair] = kept
    for spair, arts in incidence.signed_pair_articles.items():
        kept = arts & keep
        if kept:
            out.signed_pair_articles[spair] = kept
    return out


def _restrict_view(
    incidence: ArticleIncidence,
    nodes: set[str],
    pairs: set[tuple[str, str]],
) -> ArticleIncidence:
    out = ArticleIncidence(articles=set(incidence.articles))
    for w in nodes:
        if w in incidence.word_articles:
            out.word_articles[w] = set(incidence.word_articles[w])
    for pair, arts in incidence.pair_articles.items():
        if pair in pairs:
            out.pair_articles[pair] = set(arts)
            for s in SIGNS:
                sp = (s,) + pair
                if sp in incidence.signed_pair_articles:
                    out.signed_pair_articles[sp] = set(incidence.signed_pair_articles[sp])
    return out


def filter_graph(graph: FindingsGraph, spec: FilterSpec, sign_basis: str = "eq3", rings: int = 4) -> FindingsGraph:
    """Filtered view with every quantity recomputed on the kept incidence."""
    incidence = graph.incidence
    if spec.article_sample_n is not None:
        ids = sorted(incidence.articles)
        n = min(spec.article_sample_n, len(ids))
        keep = set(random.Random(spec.article_sample_seed).sample(ids, n))
        incidence = _restrict_articles(incidence, keep)

    base = build_graph(incidence, sign_basis=sign_basis, rings=rings)
    all_nodes = set(base.labels())
    all_pairs = set(incidence.pair_articles)

    for word in (spec.ego_in, spec.ego_out):
        if word is not None and word not in all_nodes:
            raise UnknownWord(word)

    nodes = set(all_nodes)
    pairs = set(all_pairs)
    if spec.ego_in is not None:
        kept_pairs = {p for p in pairs if p[1] == spec.ego_in}
        nodes &= {spec.ego_in} | {p[0] for p in kept_pairs}
        pairs = kept_pairs
    if spec.ego_out is not None:
        kept_pairs = {p for p in pairs if p[0] == spec.ego_out}
        nodes &= {spec.ego_out} | {p[1] for p in kept_pairs}
        pairs = kept_pairs
    if spec.targets_any is not None:
        listed = set(spec.targets_any)
        sources = {p[0] for p in pairs if p[1] in listed}
        nodes &= listed | sources
    if spec.top_clusters is not None:
        keep_nodes = {w.label for w in base.words if w.cluster < spec.top_clusters}
        nodes &= keep_nodes
    pairs = {p for p in pairs if p[0] in nodes and p[1] in nodes}

    filtered = _restrict_view(incidence, nodes, pairs)
    return build_graph(filtered, sign_basis=sign_basis, rings=rings)
