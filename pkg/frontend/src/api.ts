// Typed client for the litnet HTTP API. All graph quantities (degrees,
// weights, signs, layout coordinates) are computed server-side; the UI
// renders these payloads verbatim.

export type Sign = "positive" | "neutral" | "negative";
export type Category = "positive" | "negative" | "neutral" | "depend" | "none";

export const CATEGORIES: Category[] = ["positive", "negative", "neutral", "depend", "none"];

/** Notation used for every visible sign marker, one glyph per sign. */
export const SIGN_GLYPH: Record<Sign, string> = {
  positive: "+",
  neutral: "+/-",
  negative: "-",
};

export interface GraphNode {
  label: string;
  degree: number;
  ring: number;
  cluster: number;
  x: number;
  y: number;
}

export interface SignWeights {
  pos: number;
  neu: number;
  neg: number;
}

export interface GraphEdge {
  source: string;
  target: string;
  weight: number;
  sign_weights: SignWeights;
  dominant_sign: Sign;
  article_count: number;
}

export interface GraphPayload {
  nodes: GraphNode[];
  edges: GraphEdge[];
  n_articles: number;
}

export interface GraphQuery {
  ego_in?: string;
  ego_out?: string;
  targets?: string[];
  clusters?: number;
  sample_n?: number;
  sample_seed?: number;
}

export interface PendingVerb {
  lemma: string;
  count: number;
}

export interface VerbQueue {
  pending: PendingVerb[];
  classified: number;
  total: number;
  dirty: boolean;
}

export interface SampleSentence {
  doc_id: string;
  section: string;
  sent_index: number;
  text: string;
  verb_start: number | null;
  verb_end: number | null;
}

export interface VerbSample {
  lemma: string;
  sentences: SampleSentence[];
}

export interface ClassifyResult {
  lemma: string;
  category: Category;
  dirty: boolean;
  pending: number;
}

export interface StageOutcome {
  stage: string;
  skipped: boolean;
  message: string;
}

export interface RebuildResult {
  edges_added: number;
  edges_removed: number;
  edges_sign_changed: number;
  edges_total: number;
  stages: StageOutcome[];
  dirty: boolean;
}

export interface ProvenanceEntry {
  doc_id: string;
  title: string;
  year: number | null;
  sentence: string;
  verb: string;
  sign: Sign;
}

export interface Provenance {
  source: string;
  target: string;
  entries: ProvenanceEntry[];
}

/** Error carrying the HTTP status; status 0 means the server was unreachable. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.base + path, init);
    } catch {
      throw new ApiError(0, "server unreachable");
    }
    if (!res.ok) {
      let detail = `${res.status} ${res.statusText}`;
      try {
        const body = await res.json();
        if (typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body, keep the status line
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  graph(query: GraphQuery = {}): Promise<GraphPayload> {
    const params = new URLSearchParams();
    if (query.ego_in !== undefined) params.set("ego_in", query.ego_in);
    if (query.ego_out !== undefined) params.set("ego_out", query.ego_out);
    if (query.targets !== undefined && query.targets.length > 0) {
      params.set("targets", query.targets.join(","));
    }
    if (query.clusters !== undefined) params.set("clusters", String(query.clusters));
    if (query.sample_n !== undefined) params.set("sample_n", String(query.sample_n));
    if (query.sample_seed !== undefined) params.set("sample_seed", String(query.sample_seed));
    const qs = params.toString();
    return this.request<GraphPayload>(qs ? `/api/graph?${qs}` : "/api/graph");
  }

  verbs(): Promise<VerbQueue> {
    return this.request<VerbQueue>("/api/verbs");
  }

  // Seed is left to the server default so the sample shown here matches
  // the one the command line annotator draws.
  sample(lemma: string, n = 10): Promise<VerbSample> {
    return this.request<VerbSample>(`/api/verbs/${encodeURIComponent(lemma)}/sample?n=${n}`);
  }

  classify(lemma: string, category: Category): Promise<ClassifyResult> {
    return this.request<ClassifyResult>(`/api/verbs/${encodeURIComponent(lemma)}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ category }),
    });
  }

  rebuild(): Promise<RebuildResult> {
    return this.request<RebuildResult>("/api/rebuild", { method: "POST" });
  }

  provenance(source: string, target: string): Promise<Provenance> {
    const params = new URLSearchParams({ source, target });
    return this.request<Provenance>(`/api/provenance?${params.toString()}`);
  }
}
