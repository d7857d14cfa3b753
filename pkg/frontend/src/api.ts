// Thin typed client over the fusion service. The fetch implementation is
// injectable so the view logic can be exercised without a network.

import type {
  AssociateResult,
  AuditPage,
  Envelope,
  EstablishResult,
  HypothesisCreated,
  PatternRow,
  PropagationResult,
  ProvenanceNode,
  SourceRow,
  TriplePage,
  Verdict,
} from "./model.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

export interface TripleQuery {
  kind?: string;
  subject?: string;
  limit?: number;
  offset?: number;
}

export class WorkbenchApi {
  /** Version of the latest snapshot any response was computed against. */
  latestVersion = 0;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<Envelope<T>> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    const envelope = (await response.json()) as Envelope<T>;
    if (envelope.version > this.latestVersion) {
      this.latestVersion = envelope.version;
    }
    return envelope;
  }

  private post<T>(path: string, body?: unknown): Promise<Envelope<T>> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? null : JSON.stringify(body),
    });
  }

  listSources(): Promise<Envelope<SourceRow[]>> {
    return this.request("/sources");
  }

  addSource(source: { id?: string; name: string; reliability: number; category?: string }) {
    return this.post<SourceRow>("/sources", source);
  }

  capture(sourceId: string, statements: Array<Record<string, unknown>>) {
    return this.post<{ source: string; mentions: string[] }>("/capture", {
      source_id: sourceId,
      statements,
    });
  }

  associate(): Promise<Envelope<AssociateResult>> {
    return this.post("/associate");
  }

  establish(): Promise<Envelope<EstablishResult>> {
    return this.post("/establish");
  }

  listTriples(query: TripleQuery = {}): Promise<Envelope<TriplePage>> {
    const params = new URLSearchParams();
    if (query.kind) params.set("kind", query.kind);
    if (query.subject) params.set("subject", query.subject);
    if (query.limit !== undefined) params.set("limit", String(query.limit));
    if (query.offset !== undefined) params.set("offset", String(query.offset));
    const qs = params.toString();
    return this.request(`/triples${qs ? `?${qs}` : ""}`);
  }

  provenance(tripleId: string): Promise<Envelope<ProvenanceNode>> {
    return this.request(`/triples/${encodeURIComponent(tripleId)}/provenance`);
  }

  createHypothesis(payload: { theta: number; patterns: PatternRow[] }) {
    return this.post<HypothesisCreated>("/hypotheses", payload);
  }

  testHypothesis(hypothesisId: string): Promise<Envelope<Verdict>> {
    return this.post(`/hypotheses/${encodeURIComponent(hypothesisId)}/test`);
  }

  propagate(verdictId: string): Promise<Envelope<PropagationResult>> {
    return this.post(`/verdicts/${encodeURIComponent(verdictId)}/propagate`);
  }

  audit(): Promise<Envelope<AuditPage>> {
    return this.request("/audit");
  }
}
