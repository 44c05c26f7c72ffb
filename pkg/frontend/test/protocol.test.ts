import { describe, expect, it } from "vitest";
import {
  GENOME_SIZES,
  parseServerFrame,
  validateGenomeWeights,
} from "../src/protocol.js";

describe("validateGenomeWeights", () => {
  it("accepts a 13-weight genome for the gecko", () => {
    const result = validateGenomeWeights("gecko", new Array(13).fill(0.1));
    expect(result.ok).toBe(true);
  });

  it("rejects a 12-weight genome for the gecko", () => {
    const result = validateGenomeWeights("gecko", new Array(12).fill(0.1));
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.reason).toContain("13");
  });

  it("accepts the documented sizes for all presets", () => {
    for (const [robot, size] of Object.entries(GENOME_SIZES)) {
      expect(validateGenomeWeights(robot, new Array(size).fill(0)).ok).toBe(true);
      expect(validateGenomeWeights(robot, new Array(size + 1).fill(0)).ok).toBe(false);
    }
  });

  it("rejects non-numeric and out-of-range weights", () => {
    expect(validateGenomeWeights("gecko", "wat").ok).toBe(false);
    expect(validateGenomeWeights("gecko", new Array(13).fill("x")).ok).toBe(false);
    const big = new Array(13).fill(0);
    big[4] = 1.5;
    expect(validateGenomeWeights("gecko", big).ok).toBe(false);
    expect(validateGenomeWeights("newt", new Array(13).fill(0)).ok).toBe(false);
  });
});

describe("parseServerFrame", () => {
  it("parses state frames", () => {
    const frame = parseServerFrame(JSON.stringify({
      type: "state",
      t: 1.5,
      robots: [{ x: 0, y: 0, theta: 0, alpha: -3.2, signals: [0.1] }],
      target: { x: 1, y: 0 },
    }));
    expect(frame?.type).toBe("state");
    if (frame?.type === "state") expect(frame.robots[0].alpha).toBeCloseTo(-3.2);
  });

  it("parses error frames and drops junk", () => {
    expect(parseServerFrame(JSON.stringify({ type: "error", msg: "nope" })))
      .toEqual({ type: "error", msg: "nope" });
    expect(parseServerFrame("{not json")).toBeNull();
    expect(parseServerFrame(JSON.stringify({ type: "state" }))).toBeNull();
    expect(parseServerFrame("42")).toBeNull();
  });
});
