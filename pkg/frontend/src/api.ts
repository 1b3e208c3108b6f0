// Typed client for the campaign server. Every number the UI shows comes out
// of these responses untouched; concurrent fetches are tagged with a
// per-channel sequence so stale responses can be discarded by callers.

import type {
  Atom,
  CampaignDetail,
  CampaignSummary,
  ConstraintMetrics,
  FeaturesPayload,
  RerunResponse,
  TrialsPage,
  VerdictFilter,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Monotonic tags per channel; a response is stale when its tag is no longer
 * the latest the channel has issued. */
export class SequenceGate {
  private latest = new Map<string, number>();

  begin(channel: string): number {
    const seq = (this.latest.get(channel) ?? 0) + 1;
    this.latest.set(channel, seq);
    return seq;
  }

  isCurrent(channel: string, seq: number): boolean {
    return this.latest.get(channel) === seq;
  }
}

export class ApiClient {
  readonly gate = new SequenceGate();

  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, `server unreachable: ${String(err)}`);
    }
    const body = await response.text();
    if (!response.ok) {
      let detail = body;
      try {
        detail = JSON.parse(body).detail ?? body;
      } catch {
        // plain-text error body
      }
      throw new ApiError(response.status, String(detail));
    }
    return JSON.parse(body) as T;
  }

  async listCampaigns(): Promise<CampaignSummary[]> {
    const doc = await this.request<{ campaigns: CampaignSummary[] }>("/api/campaigns");
    return doc.campaigns;
  }

  getCampaign(id: string): Promise<CampaignDetail> {
    return this.request<CampaignDetail>(`/api/campaigns/${encodeURIComponent(id)}`);
  }

  getTrials(
    id: string,
    opts: { sut?: string; mr?: string; verdict?: VerdictFilter; limit?: number; offset?: number } = {},
  ): Promise<TrialsPage> {
    const params = new URLSearchParams();
    if (opts.sut) params.set("sut", opts.sut);
    if (opts.mr) params.set("mr", opts.mr);
    if (opts.verdict && opts.verdict !== "ALL") params.set("verdict", opts.verdict);
    params.set("limit", String(opts.limit ?? 1000));
    params.set("offset", String(opts.offset ?? 0));
    return this.request<TrialsPage>(`/api/campaigns/${encodeURIComponent(id)}/trials?${params}`);
  }

  getFeatures(id: string, sut: string, mr: string): Promise<FeaturesPayload> {
    const params = new URLSearchParams({ sut, mr });
    return this.request<FeaturesPayload>(
      `/api/campaigns/${encodeURIComponent(id)}/features?${params}`,
    );
  }

  evaluateConstraint(id: string, sut: string, mr: string, atoms: Atom[]): Promise<ConstraintMetrics> {
    return this.request<ConstraintMetrics>(`/api/campaigns/${encodeURIComponent(id)}/constraints`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ sut, mr, atoms }),
    });
  }

  rerun(
    id: string,
    body: { sut: string; mr: string; atoms: Atom[]; seed: number; n?: number; cap?: number },
  ): Promise<RerunResponse> {
    return this.request<RerunResponse>(`/api/campaigns/${encodeURIComponent(id)}/rerun`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
