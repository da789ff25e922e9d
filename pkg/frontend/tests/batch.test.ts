import { describe, expect, it } from "vitest";

import { Api } from "../src/api.js";
import { BatchSession } from "../src/batch.js";
import type { Renderer } from "../src/render.js";
import type { ParamVector } from "../src/types.js";

/** In-memory fake of the server API surface the batch workflow touches. */
function fakeApi() {
  const calls: { method: string; path: string; body?: unknown }[] = [];
  let nextId = 0;
  const fetchImpl = async (url: string, init?: RequestInit) => {
    const path = url.replace("http://fake", "");
    const method = init?.method ?? "GET";
    const body = init?.body && typeof init.body === "string"
      ? JSON.parse(init.body)
      : init?.body;
    calls.push({ method, path, body });
    if (path.includes("/play")) {
      const { count } = body as { count: number };
      const items = Array.from({ length: count }, () => ({
        draw_id: `id${String(nextId++).padStart(12, "0")}`,
        params: { x: 0.5 },
        metadata: { agent: "gaussian", mode: "0" },
      }));
      return new Response(JSON.stringify(items), { status: 200 });
    }
    return new Response(JSON.stringify({ ok: true }), { status: 200 });
  };
  return { api: new Api("http://fake", fetchImpl), calls };
}

const stubRenderer: Renderer = {
  async render(_params: ParamVector, drawId: string) {
    return new TextEncoder().encode(`png:${drawId}`);
  },
};

describe("batch session", () => {
  it("renders and uploads one PNG per proposal, in order", async () => {
    const { api, calls } = fakeApi();
    const session = new BatchSession(api, stubRenderer);
    const tiles = await session.generate("gaussian", 16);
    expect(tiles).toHaveLength(16);
    const uploads = calls.filter((c) => c.path.endsWith("/image"));
    expect(uploads).toHaveLength(16);
    expect(uploads.map((c) => c.path)).toEqual(
      tiles.map((t) => `/api/drawings/${t.drawId}/image`),
    );
  });

  it("submits feedback only for touched tiles", async () => {
    const { api, calls } = fakeApi();
    const session = new BatchSession(api, stubRenderer);
    const tiles = await session.generate("gaussian", 16);
    session.setScore(tiles[2]!.drawId, 5);
    session.setScore(tiles[7]!.drawId, 4);
    session.setScore(tiles[7]!.drawId, 3); // re-touching replaces, not doubles
    session.setScore(tiles[11]!.drawId, 0);
    const sent = await session.submitScores();
    expect(sent).toBe(3);
    const feedback = calls.filter((c) => c.path === "/api/feedback");
    expect(feedback).toHaveLength(3);
    expect(feedback.map((c) => (c.body as { score: number }).score)).toEqual([5, 3, 0]);
    // a second submit sends nothing: scores were consumed
    expect(await session.submitScores()).toBe(0);
  });

  it("rejects out-of-range scores and unknown tiles", async () => {
    const { api } = fakeApi();
    const session = new BatchSession(api, stubRenderer);
    const tiles = await session.generate("gaussian", 2);
    expect(() => session.setScore(tiles[0]!.drawId, 6)).toThrow(/0\.\.5/);
    expect(() => session.setScore("nope", 3)).toThrow(/no tile/);
  });

  it("refuses overlapping batches", async () => {
    const { api } = fakeApi();
    const slowRenderer: Renderer = {
      render: () => new Promise((resolve) =>
        setTimeout(() => resolve(new Uint8Array([1])), 30),
      ),
    };
    const session = new BatchSession(api, slowRenderer);
    const first = session.generate("gaussian", 2);
    await expect(session.generate("gaussian", 2)).rejects.toThrow(/in flight/);
    await first;
  });

  it("forwards time warps", async () => {
    const { api, calls } = fakeApi();
    const session = new BatchSession(api, stubRenderer);
    await session.timeWarp("gaussian", -1);
    const warp = calls.find((c) => c.path.endsWith("/time_warp"));
    expect(warp?.body).toEqual({ steps: -1 });
  });
});
