/** Typed client for the verification service HTTP/JSON API. */

export interface ReviewItem {
  index: number;
  episode_id: string;
  instruction_type: string;
  original_instruction: string;
  transcript: string;
  audio_url: string;
  calibration: boolean;
}

export interface VerdictPayload {
  episode_id: string;
  annotator_id: string;
  intent_recoverable: boolean;
  phenomenon_fidelity: boolean;
  notes: string;
}

export interface AgreementReport {
  n_verdicts: number;
  recoverable_rate: number;
  fidelity_rate: number;
  per_type: Record<string, { n: number; recoverable_rate: number; fidelity_rate: number }>;
}

export type SubmitOutcome = "created" | "duplicate";

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null, readonly retryable: boolean) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let resp: Response;
    try {
      resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, null, true);
    }
    return resp;
  }

  /** Next unjudged item for this annotator, or null when the batch is done. */
  async nextItem(annotatorId: string): Promise<ReviewItem | null> {
    const resp = await this.request(
      `/api/review/next?annotator=${encodeURIComponent(annotatorId)}`,
    );
    if (resp.status === 204) return null;
    if (!resp.ok) throw new ApiError(`next failed: ${resp.status}`, resp.status, resp.status >= 500);
    return (await resp.json()) as ReviewItem;
  }

  /** 201 -> created; 409 -> duplicate (already counted server-side). */
  async submitVerdict(v: VerdictPayload): Promise<SubmitOutcome> {
    const resp = await this.request("/api/verdicts", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(v),
    });
    if (resp.status === 201) return "created";
    if (resp.status === 409) return "duplicate";
    throw new ApiError(`submit failed: ${resp.status}`, resp.status, resp.status >= 500);
  }

  async report(): Promise<AgreementReport | null> {
    const resp = await this.request("/api/report");
    if (resp.status === 404) return null;
    if (!resp.ok) throw new ApiError(`report failed: ${resp.status}`, resp.status, false);
    return (await resp.json()) as AgreementReport;
  }

  async batchMeta(): Promise<{ batch_id: string; n_items: number }> {
    const resp = await this.request("/api/batch");
    if (!resp.ok) throw new ApiError(`batch failed: ${resp.status}`, resp.status, false);
    return (await resp.json()) as { batch_id: string; n_items: number };
  }
}
