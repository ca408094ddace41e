// Findings-network explorer. The graph payload is rendered exactly as
// served: node positions, degrees, weights, and signs all come from the
// server layout, never recomputed here.

import {
  ApiClient,
  ApiError,
  GraphEdge,
  GraphNode,
  GraphPayload,
  GraphQuery,
  Sign,
  SIGN_GLYPH,
} from "./api.js";

export type RenderMode = "cluster" | "sign_nodes";

const SVG_NS = "http://www.w3.org/2000/svg";

// same notation as the pipeline's own SVG export
const SIGN_COLORS: Record<Sign, string> = {
  positive: "#2e8b57",
  neutral: "#808080",
  negative: "#c0392b",
};
const MIXED_COLOR = "#b0a48c";
const SIGN_LEGEND: [Sign, string][] = [
  ["positive", "positively associated"],
  ["neutral", "neutral association"],
  ["negative", "negatively associated"],
];
const CLUSTER_PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export class ExplorerView {
  readonly root: HTMLElement;

  private payload: GraphPayload | null = null;
  private mode: RenderMode = "cluster";
  private inflight: Promise<void> = Promise.resolve();

  private formEl: HTMLFormElement;
  private egoWordEl: HTMLInputElement;
  private egoDirEl: HTMLSelectElement;
  private targetsEl: HTMLInputElement;
  private clustersEl: HTMLInputElement;
  private sampleNEl: HTMLInputElement;
  private sampleSeedEl: HTMLInputElement;
  private modeEl: HTMLSelectElement;
  private errorEl: HTMLElement;
  private svgEl: SVGSVGElement;
  private panelEl: HTMLElement;
  private statusEl: HTMLElement;

  constructor(
    private readonly api: ApiClient,
    container: HTMLElement,
  ) {
    this.root = document.createElement("div");
    this.root.className = "explorer";

    this.formEl = document.createElement("form");
    this.formEl.className = "filters";
    this.egoWordEl = textInput("ego_word", "ego word");
    this.egoDirEl = select("ego_dir", [
      ["", "no ego"],
      ["in", "edges into word"],
      ["out", "edges out of word"],
    ]);
    this.targetsEl = textInput("targets", "targets (comma separated)");
    this.clustersEl = numberInput("clusters");
    this.sampleNEl = numberInput("sample_n");
    this.sampleSeedEl = numberInput("sample_seed");
    this.modeEl = select("mode", [
      ["cluster", "color by cluster"],
      ["sign_nodes", "color nodes by sign"],
    ]);
    const apply = document.createElement("button");
    apply.type = "submit";
    apply.textContent = "apply";
    this.formEl.append(
      labeled("word", this.egoWordEl),
      labeled("ego", this.egoDirEl),
      labeled("targets", this.targetsEl),
      labeled("clusters", this.clustersEl),
      labeled("sample", this.sampleNEl),
      labeled("seed", this.sampleSeedEl),
      labeled("mode", this.modeEl),
      apply,
    );
    this.formEl.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.refresh();
    });
    this.modeEl.addEventListener("change", () => {
      this.mode = this.modeEl.value as RenderMode;
      if (this.payload !== null) this.renderGraph(this.payload);
    });

    this.errorEl = document.createElement("div");
    this.errorEl.className = "error";
    this.errorEl.hidden = true;

    this.statusEl = document.createElement("div");
    this.statusEl.className = "status";

    const view = document.createElement("div");
    view.className = "view";
    this.svgEl = document.createElementNS(SVG_NS, "svg");
    this.svgEl.setAttribute("class", "graph");
    this.panelEl = document.createElement("aside");
    this.panelEl.className = "provenance";
    view.append(this.svgEl, this.panelEl);

    this.root.append(
      this.formEl,
      this.errorEl,
      this.statusEl,
      view,
      buildLegend(),
    );
    container.append(this.root);
  }

  /** Resolves once the current fetch or provenance lookup settles. */
  whenIdle(): Promise<void> {
    return this.inflight.catch(() => undefined);
  }

  query(): GraphQuery {
    const q: GraphQuery = {};
    const word = this.egoWordEl.value.trim();
    if (word !== "" && this.egoDirEl.value === "in") q.ego_in = word;
    if (word !== "" && this.egoDirEl.value === "out") q.ego_out = word;
    const targets = this.targetsEl.value
      .split(",")
      .map((t) => t.trim())
      .filter((t) => t !== "");
    if (targets.length > 0) q.targets = targets;
    if (this.clustersEl.value !== "") q.clusters = Number(this.clustersEl.value);
    if (this.sampleNEl.value !== "") q.sample_n = Number(this.sampleNEl.value);
    if (this.sampleSeedEl.value !== "") q.sample_seed = Number(this.sampleSeedEl.value);
    return q;
  }

  refresh(): Promise<void> {
    this.inflight = this.doRefresh();
    return this.inflight;
  }

  private async doRefresh(): Promise<void> {
    this.errorEl.hidden = true;
    this.mode = this.modeEl.value as RenderMode;
    try {
      const payload = await this.api.graph(this.query());
      this.payload = payload;
      this.statusEl.textContent =
        `${payload.nodes.length} words, ${payload.edges.length} relations, ` +
        `${payload.n_articles} articles`;
      this.renderGraph(payload);
      this.panelEl.replaceChildren();
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.showError(`word not in graph: ${err.message}`);
      } else if (err instanceof ApiError) {
        this.showError(err.message);
      } else {
        this.showError(String(err));
      }
    }
  }

  private showError(text: string): void {
    this.errorEl.textContent = text;
    this.errorEl.hidden = false;
  }

  private renderGraph(payload: GraphPayload): void {
    this.svgEl.replaceChildren();
    this.svgEl.setAttribute("class", `graph mode-${this.mode}`);
    this.svgEl.setAttribute("viewBox", viewBox(payload.nodes));
    this.svgEl.append(arrowDefs());

    const byLabel = new Map<string, GraphNode>();
    for (const node of payload.nodes) byLabel.set(node.label, node);
    const incident = new Map<string, GraphEdge[]>();
    for (const edge of payload.edges) {
      for (const label of [edge.source, edge.target]) {
        const list = incident.get(label);
        if (list === undefined) incident.set(label, [edge]);
        else list.push(edge);
      }
    }

    const edgeLayer = document.createElementNS(SVG_NS, "g");
    edgeLayer.setAttribute("class", "edges");
    for (const edge of payload.edges) {
      const from = byLabel.get(edge.source);
      const to = byLabel.get(edge.target);
      if (from === undefined || to === undefined) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("class", `edge sign-${edge.dominant_sign}`);
      line.setAttribute("data-source", edge.source);
      line.setAttribute("data-target", edge.target);
      line.setAttribute("data-sign", edge.dominant_sign);
      line.setAttribute("data-weight", String(edge.weight));
      line.setAttribute("data-article-count", String(edge.article_count));
      line.setAttribute("x1", String(from.x));
      line.setAttribute("y1", String(from.y));
      line.setAttribute("x2", String(to.x));
      line.setAttribute("y2", String(to.y));
      line.setAttribute("stroke", SIGN_COLORS[edge.dominant_sign]);
      line.setAttribute("marker-end", `url(#arrow-${edge.dominant_sign})`);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent =
        `${edge.source} ${SIGN_GLYPH[edge.dominant_sign]} ${edge.target} ` +
        `(weight ${edge.weight}, ${edge.article_count} articles)`;
      line.append(title);
      line.addEventListener("click", () => void this.selectEdge(edge));
      edgeLayer.append(line);
    }
    this.svgEl.append(edgeLayer);

    const nodeLayer = document.createElementNS(SVG_NS, "g");
    nodeLayer.setAttribute("class", "nodes");
    for (const node of payload.nodes) {
      const g = document.createElementNS(SVG_NS, "g");
      g.setAttribute("class", "node");
      g.setAttribute("data-label", node.label);
      g.setAttribute("data-degree", String(node.degree));
      g.setAttribute("data-ring", String(node.ring));
      g.setAttribute("data-cluster", String(node.cluster));
      const sign = nodeSign(incident.get(node.label) ?? []);
      g.setAttribute("data-sign", sign ?? "mixed");
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(node.x));
      circle.setAttribute("cy", String(node.y));
      circle.setAttribute("r", String(5 + node.degree));
      circle.setAttribute("fill", this.nodeColor(node, sign));
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${node.label} (degree ${node.degree})`;
      circle.append(title);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(node.x));
      text.setAttribute("y", String(node.y));
      text.setAttribute("dy", String(-(8 + node.degree)));
      text.textContent = node.label;
      g.append(circle, text);
      g.addEventListener("click", () => void this.selectNode(node, incident.get(node.label) ?? []));
      nodeLayer.append(g);
    }
    this.svgEl.append(nodeLayer);
  }

  private nodeColor(node: GraphNode, sign: Sign | null): string {
    if (this.mode === "sign_nodes") {
      return sign === null ? MIXED_COLOR : SIGN_COLORS[sign];
    }
    return CLUSTER_PALETTE[node.cluster % CLUSTER_PALETTE.length] ?? MIXED_COLOR;
  }

  private selectEdge(edge: GraphEdge): Promise<void> {
    this.inflight = this.showProvenance([edge]);
    return this.inflight;
  }

  private selectNode(node: GraphNode, edges: GraphEdge[]): Promise<void> {
    this.inflight = this.showProvenance(edges, node.label);
    return this.inflight;
  }

  private async showProvenance(edges: GraphEdge[], heading?: string): Promise<void> {
    this.panelEl.replaceChildren();
    if (heading !== undefined) {
      const h = document.createElement("h3");
      h.textContent = heading;
      this.panelEl.append(h);
    }
    if (edges.length === 0) {
      const p = document.createElement("p");
      p.textContent = "no relations";
      this.panelEl.append(p);
      return;
    }
    for (const edge of edges) {
      const section = document.createElement("section");
      const h = document.createElement("h4");
      h.textContent = `${edge.source} ${SIGN_GLYPH[edge.dominant_sign]} ${edge.target}`;
      section.append(h);
      try {
        const prov = await this.api.provenance(edge.source, edge.target);
        const ul = document.createElement("ul");
        for (const entry of prov.entries) {
          const li = document.createElement("li");
          const sent = document.createElement("span");
          sent.className = "sentence";
          sent.textContent = entry.sentence;
          const meta = document.createElement("span");
          meta.className = "meta";
          const year = entry.year === null ? "" : `, ${entry.year}`;
          meta.textContent = ` — ${entry.title}${year} [${entry.verb} ${SIGN_GLYPH[entry.sign]}]`;
          li.append(sent, meta);
          ul.append(li);
        }
        section.append(ul);
      } catch (err) {
        const p = document.createElement("p");
        p.className = "error";
        p.textContent = err instanceof ApiError ? err.message : String(err);
        section.append(p);
      }
      this.panelEl.append(section);
    }
  }
}

function nodeSign(edges: GraphEdge[]): Sign | null {
  // a node carries a sign only when a single edge touches it; anything
  // else would need aggregation, which belongs to the server
  if (edges.length === 1) return edges[0]!.dominant_sign;
  return null;
}

function viewBox(nodes: GraphNode[]): string {
  if (nodes.length === 0) return "0 0 100 100";
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const n of nodes) {
    if (n.x < minX) minX = n.x;
    if (n.y < minY) minY = n.y;
    if (n.x > maxX) maxX = n.x;
    if (n.y > maxY) maxY = n.y;
  }
  const pad = 60;
  const w = Math.max(maxX - minX, 1) + 2 * pad;
  const h = Math.max(maxY - minY, 1) + 2 * pad;
  return `${minX - pad} ${minY - pad} ${w} ${h}`;
}

function arrowDefs(): SVGDefsElement {
  const defs = document.createElementNS(SVG_NS, "defs");
  for (const [sign, color] of Object.entries(SIGN_COLORS)) {
    const marker = document.createElementNS(SVG_NS, "marker");
    marker.setAttribute("id", `arrow-${sign}`);
    marker.setAttribute("viewBox", "0 0 10 10");
    marker.setAttribute("refX", "9");
    marker.setAttribute("refY", "5");
    marker.setAttribute("markerWidth", "7");
    marker.setAttribute("markerHeight", "7");
    marker.setAttribute("orient", "auto-start-reverse");
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", "M 0 0 L 10 5 L 0 10 z");
    path.setAttribute("fill", color);
    marker.append(path);
    defs.append(marker);
  }
  return defs;
}

function buildLegend(): HTMLElement {
  const legend = document.createElement("div");
  legend.className = "legend";
  for (const [sign, label] of SIGN_LEGEND) {
    const item = document.createElement("span");
    item.className = "legend-item";
    item.dataset.sign = sign;
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = SIGN_COLORS[sign];
    item.append(swatch, ` ${SIGN_GLYPH[sign]}: ${label}`);
    legend.append(item);
  }
  return legend;
}

function textInput(name: string, placeholder: string): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "text";
  input.name = name;
  input.placeholder = placeholder;
  return input;
}

function numberInput(name: string): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "number";
  input.name = name;
  input.placeholder = name.replace("_", " ");
  return input;
}

function select(name: string, options: [string, string][]): HTMLSelectElement {
  const sel = document.createElement("select");
  sel.name = name;
  for (const [value, label] of options) {
    const opt = document.createElement("option");
    opt.value = value;
    opt.textContent = label;
    sel.append(opt);
  }
  return sel;
}

function labeled(text: string, control: HTMLElement): HTMLElement {
  const label = document.createElement("label");
  label.append(`${text} `, control);
  return label;
}
