// Thin typed client over the play service JSON API.

import type {
  CreateSessionRequest,
  HintPayload,
  SessionView,
  SpecsPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(
    public baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? globalThis.fetch.bind(globalThis);
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  getSpecs(): Promise<SpecsPayload> {
    return this.request<SpecsPayload>("/api/specs");
  }

  createSession(req: CreateSessionRequest): Promise<SessionView> {
    return this.request<SessionView>("/api/session", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request<SessionView>(`/api/session/${id}`);
  }

  postMove(id: string, point: number): Promise<SessionView> {
    return this.request<SessionView>(`/api/session/${id}/move`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ point }),
    });
  }

  getHint(id: string): Promise<HintPayload> {
    return this.request<HintPayload>(`/api/session/${id}/hint`);
  }
}
