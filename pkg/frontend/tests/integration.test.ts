/** Full UI loop against the real exploration server: batch, render-upload,
 * partial scoring, sigma decay, gallery filtering, time-warp round-trip.
 *
 * The server binary comes from the Python package (pxp-server); renders use
 * a stub since node has no canvas, which exercises every wire format the
 * browser path uses. */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Api } from "../src/api.js";
import { BatchSession } from "../src/batch.js";
import { parseBinding, validateBinding } from "../src/binding.js";
import { buildControls } from "../src/controls.js";
import { loadSketch } from "../src/render.js";
import type { Renderer } from "../src/render.js";

const here = (rel: string) => fileURLToPath(new URL(rel, import.meta.url));
const SPEC_PATH = here("../../fixtures/demo_spec.json");
const PORT = 8901 + (process.pid % 90);
const BASE = `http://127.0.0.1:${PORT}`;

const PNG_1PX = Uint8Array.from(
  atob(
    "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR4nGNgYGBgAAAABQAB" +
    "h6FO1AAAAABJRU5ErkJggg==",
  ),
  (c) => c.charCodeAt(0),
);

const stubRenderer: Renderer = {
  async render() {
    return PNG_1PX;
  },
};

let server: ChildProcess;
let dataDir: string;
const api = new Api(BASE);

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      await api.getSpec();
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  }
  throw new Error("server did not come up");
}

function readSigmas(): Record<string, number> {
  const db = JSON.parse(readFileSync(join(dataDir, "db.json"), "utf-8"));
  return db.agents.gaussian.state.payload.sigmas;
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "pxp-ui-"));
  server = spawn(
    "pxp-server",
    ["--spec", SPEC_PATH, "--db", join(dataDir, "db.json"),
     "--images", join(dataDir, "images"), "--listen", `127.0.0.1:${PORT}`,
     "--agent", "gaussian", "--seed", "7"],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 60000);

afterAll(() => {
  server?.kill();
});

describe("ui loop against the live server", () => {
  it("loads the demo sketch and builds one control per dimension", async () => {
    const binding = parseBinding(
      JSON.parse(readFileSync(here("../binding.json"), "utf-8")),
    );
    const spec = await api.getSpec();
    validateBinding(binding, spec);
    const sketch = loadSketch(readFileSync(here("../sketch/demo.js"), "utf-8"), binding.entry);
    expect(typeof sketch.render).toBe("function");
    expect(buildControls(spec)).toHaveLength(7);
  });

  it("runs the batch-score-warp loop with server-verified effects", async () => {
    const session = new BatchSession(api, stubRenderer);
    const tiles = await session.generate("gaussian", 16);
    expect(tiles).toHaveLength(16);

    // every tile's PNG has landed server-side
    const all = await api.gallery({ order: "asc" });
    expect(all).toHaveLength(16);
    for (const record of all) {
      expect(record.image_path).toBe(`images/${record.id}.png`);
      expect(record.score).toBeNull();
    }

    const sigmasBefore = readSigmas();

    // score exactly three tiles, leave the rest unrated
    session.setScore(tiles[0]!.drawId, 5);
    session.setScore(tiles[5]!.drawId, 4);
    session.setScore(tiles[9]!.drawId, 2);
    expect(await session.submitScores()).toBe(3);

    // store shows exactly 3 scored records
    const unrated = await api.gallery({ unrated_only: true });
    expect(unrated).toHaveLength(13);
    const scored = (await api.gallery({ score_min: 0 })).map((r) => r.id).sort();
    expect(scored).toEqual(
      [tiles[0]!.drawId, tiles[5]!.drawId, tiles[9]!.drawId].sort(),
    );

    // the scored tiles' modes decayed by gamma per feedback, others untouched
    const gamma = 0.97;
    const feedbacksPerMode = new Map<string, number>();
    for (const tile of [tiles[0]!, tiles[5]!, tiles[9]!]) {
      const mode = tile.metadata.mode!;
      feedbacksPerMode.set(mode, (feedbacksPerMode.get(mode) ?? 0) + 1);
    }
    const sigmasAfter = readSigmas();
    for (const [mode, before] of Object.entries(sigmasBefore)) {
      const hits = feedbacksPerMode.get(mode) ?? 0;
      const expected = before * gamma ** hits;
      expect(Math.abs(sigmasAfter[mode]! - expected)).toBeLessThan(1e-9);
      if (hits > 0) expect(sigmasAfter[mode]!).toBeLessThan(before);
    }

    // gallery filter score >= 4 returns exactly the matching tiles
    const top = await api.gallery({ score_min: 4 });
    expect(top.map((r) => r.id).sort()).toEqual(
      [tiles[0]!.drawId, tiles[5]!.drawId].sort(),
    );

    // time-warp buttons round-trip sigma within 1e-9
    const beforeWarp = readSigmas();
    await session.timeWarp("gaussian", 1);
    const warped = readSigmas();
    for (const [mode, value] of Object.entries(beforeWarp)) {
      expect(Math.abs(warped[mode]! - value * gamma)).toBeLessThan(1e-12);
    }
    await session.timeWarp("gaussian", -1);
    const restored = readSigmas();
    for (const [mode, value] of Object.entries(beforeWarp)) {
      expect(Math.abs(restored[mode]! - value)).toBeLessThan(1e-9);
    }
  }, 60000);

  it("manual save plus rating lands in the store", async () => {
    const params = {
      scale: 1.75, pinch: 2.5, twist: 3.14, noise: 0.25,
      symmetry: 8, layers: 4, detail: 21,
    };
    const { draw_id } = await api.saveDrawing(params);
    await api.uploadImage(draw_id, PNG_1PX);
    await api.feedback(draw_id, 5);
    const [rec] = await api.gallery({ agent: "manual" });
    expect(rec?.id).toBe(draw_id);
    expect(rec?.score).toBe(5);
    expect(rec?.params).toEqual(params);
  });

  it("bulk delete removes records", async () => {
    const victims = await api.gallery({ unrated_only: true, limit: 2 });
    for (const victim of victims) {
      await api.deleteDrawing(victim.id);
    }
    const left = await api.gallery({ unrated_only: true });
    expect(left).toHaveLength(11);
  });
});
