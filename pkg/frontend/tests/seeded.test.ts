import { describe, expect, it } from "vitest";

import { hashString, mulberry32, rngForDrawing } from "../src/seeded.js";

describe("seeded rng", () => {
  it("hashes deterministically", () => {
    expect(hashString("abc123")).toBe(hashString("abc123"));
    expect(hashString("abc123")).not.toBe(hashString("abc124"));
  });

  it("streams are reproducible per draw id", () => {
    const a = rngForDrawing("deadbeef00112233");
    const b = rngForDrawing("deadbeef00112233");
    const c = rngForDrawing("deadbeef00112234");
    const streamA = Array.from({ length: 20 }, () => a());
    const streamB = Array.from({ length: 20 }, () => b());
    const streamC = Array.from({ length: 20 }, () => c());
    expect(streamA).toEqual(streamB);
    expect(streamA).not.toEqual(streamC);
  });

  it("values stay in [0, 1) with a sane mean", () => {
    const rng = mulberry32(7);
    let sum = 0;
    for (let i = 0; i < 5000; i++) {
      const v = rng();
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(1);
      sum += v;
    }
    expect(sum / 5000).toBeGreaterThan(0.45);
    expect(sum / 5000).toBeLessThan(0.55);
  });
});
