import type {
  DrawingRecord,
  GalleryFilter,
  ParamVector,
  ProposalItem,
  SpecDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Typed client for the exploration server; the UI keeps no state the API
 * cannot reconstruct. */
export class Api {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      let code = "http_error";
      let message = `HTTP ${resp.status}`;
      try {
        const doc = (await resp.json()) as { error?: { code: string; message: string } };
        if (doc.error) ({ code, message } = doc.error);
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(resp.status, code, message);
    }
    return (await resp.json()) as T;
  }

  getSpec(): Promise<SpecDoc> {
    return this.request("GET", "/api/spec");
  }

  play(agent: string, count: number): Promise<ProposalItem[]> {
    return this.request("POST", `/api/agents/${agent}/play`, { count });
  }

  feedback(drawId: string, score: number): Promise<void> {
    return this.request("POST", "/api/feedback", { draw_id: drawId, score });
  }

  timeWarp(agent: string, steps: number): Promise<void> {
    return this.request("POST", `/api/agents/${agent}/time_warp`, { steps });
  }

  resetAgent(agent: string): Promise<void> {
    return this.request("POST", `/api/agents/${agent}/reset`);
  }

  saveDrawing(
    params: ParamVector,
    score?: number,
    imageBase64?: string,
  ): Promise<{ draw_id: string }> {
    const body: Record<string, unknown> = { params };
    if (score !== undefined) body.score = score;
    if (imageBase64 !== undefined) body.image_base64 = imageBase64;
    return this.request("POST", "/api/drawings", body);
  }

  async uploadImage(drawId: string, png: Uint8Array | ArrayBuffer): Promise<void> {
    const body = png instanceof Uint8Array
      ? png.slice().buffer
      : png;
    const resp = await this.fetchImpl(`${this.base}/api/drawings/${drawId}/image`, {
      method: "POST",
      headers: { "content-type": "image/png" },
      body,
    });
    if (!resp.ok) throw new ApiError(resp.status, "upload_failed", `HTTP ${resp.status}`);
  }

  gallery(filter: GalleryFilter = {}): Promise<DrawingRecord[]> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filter)) {
      if (value !== undefined) params.set(key, String(value));
    }
    const query = params.toString();
    return this.request("GET", `/api/gallery${query ? "?" + query : ""}`);
  }

  deleteDrawing(drawId: string): Promise<void> {
    return this.request("DELETE", `/api/drawings/${drawId}`);
  }
}
