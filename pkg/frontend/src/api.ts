// Typed client for the session assessment service.
//
// Every response is validated with zod before it reaches the UI, so a
// drifting backend fails loudly at the boundary instead of rendering
// garbage. The fetch function is injectable for tests.

import { z } from "zod";

export const scaleValueSchema = z.union([
  z.literal(-2),
  z.literal(-1),
  z.literal(0),
  z.literal(1),
  z.literal(2),
  z.literal("dnk"),
]);

export type ScaleValue = z.infer<typeof scaleValueSchema>;

export const sessionSummarySchema = z.object({
  id: z.string(),
  action_count: z.number().int().nonnegative(),
  duration_s: z.number().nonnegative(),
  rated_by: z.array(z.string()),
});

export const sessionListingSchema = z.object({
  total: z.number().int().nonnegative(),
  items: z.array(sessionSummarySchema),
});

export const actionRowSchema = z.object({
  step: z.number().int().positive(),
  kind: z.string(),
  terms: z.array(z.string()),
  citation: z.string().nullable(),
  session_topic: z.string(),
  topic_number: z.number().int().positive(),
});

export const sessionDetailSchema = z.object({
  id: z.string(),
  duration_s: z.number().nonnegative(),
  actions: z.array(actionRowSchema),
  rated_by: z.array(z.string()),
});

export const progressSchema = z.object({
  rated: z.number().int().nonnegative(),
  total: z.number().int().nonnegative(),
  next_unrated_session_id: z.string().nullable(),
});

export type SessionSummary = z.infer<typeof sessionSummarySchema>;
export type SessionListing = z.infer<typeof sessionListingSchema>;
export type ActionRow = z.infer<typeof actionRowSchema>;
export type SessionDetail = z.infer<typeof sessionDetailSchema>;
export type Progress = z.infer<typeof progressSchema>;

export interface RatingBody {
  assessor: string;
  topic_quality: ScaleValue;
  segmentation_quality: ScaleValue;
  comment?: string;
}

/** Request failure; `retryable` means the rating may be resubmitted as-is. */
export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null,
    readonly retryable: boolean,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(
    private baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    // Bind so a bare globalThis.fetch keeps its receiver in browsers.
    this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`, null, true);
    }
    if (!response.ok) {
      const body = await response.text().catch(() => "");
      throw new ApiError(
        `${init?.method ?? "GET"} ${path} failed with ${response.status}: ${body}`,
        response.status,
        response.status >= 500,
      );
    }
    return response;
  }

  async listSessions(offset = 0, limit = 500): Promise<SessionListing> {
    const response = await this.request(`/api/sessions?offset=${offset}&limit=${limit}`);
    return sessionListingSchema.parse(await response.json());
  }

  async getSession(id: string): Promise<SessionDetail> {
    const response = await this.request(`/api/sessions/${encodeURIComponent(id)}`);
    return sessionDetailSchema.parse(await response.json());
  }

  async putRating(sessionId: string, body: RatingBody): Promise<void> {
    await this.request(`/api/sessions/${encodeURIComponent(sessionId)}/rating`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async progress(assessor: string): Promise<Progress> {
    const response = await this.request(
      `/api/assessors/${encodeURIComponent(assessor)}/progress`,
    );
    return progressSchema.parse(await response.json());
  }
}
