import { describe, expect, it } from "vitest";
import type { StateFrame } from "../src/protocol.js";
import {
  screenToWorld,
  SessionView,
  TRAIL_SECONDS,
  worldToScreen,
} from "../src/view.js";

function frameAt(t: number, x = 0, y = 0): StateFrame {
  return {
    type: "state",
    t,
    robots: [{ x, y, theta: Math.PI / 2, alpha: 0, signals: [0, 0] }],
    target: { x: 1, y: 0 },
  };
}

describe("transforms", () => {
  it("round-trips world and screen coordinates", () => {
    const view = new SessionView();
    view.onFrame(frameAt(0, 0.3, -0.2), 0);
    const t = view.transform();
    const [px, py] = worldToScreen(t, 900, 600, 0.8, 0.5);
    const [wx, wy] = screenToWorld(t, 900, 600, px, py);
    expect(wx).toBeCloseTo(0.8, 9);
    expect(wy).toBeCloseTo(0.5, 9);
  });

  it("centers on the robot and flips y up", () => {
    const view = new SessionView();
    view.onFrame(frameAt(0, 2, 3), 0);
    const t = view.transform();
    const [cx, cy] = worldToScreen(t, 900, 600, 2, 3);
    expect(cx).toBe(450);
    expect(cy).toBe(300);
    const [, above] = worldToScreen(t, 900, 600, 2, 3.5);
    expect(above).toBeLessThan(300);
  });

  it("zoom scales pixels per meter", () => {
    const view = new SessionView();
    view.onFrame(frameAt(0), 0);
    view.zoom = 2;
    expect(view.transform().scale).toBe(200);
  });
});

describe("trail", () => {
  it("caps the trail to the configured window", () => {
    const view = new SessionView();
    for (let k = 0; k <= TRAIL_SECONDS * 10 + 50; k++) {
      view.onFrame(frameAt(k * 0.1, k * 0.01, 0), k);
    }
    expect(view.trail[0].t).toBeGreaterThanOrEqual(
      view.trail[view.trail.length - 1].t - TRAIL_SECONDS,
    );
  });

  it("reset clears the trail", () => {
    const view = new SessionView();
    view.onFrame(frameAt(0), 0);
    expect(view.trail.length).toBe(1);
    view.clearTrail();
    expect(view.trail.length).toBe(0);
  });
});

describe("staleness", () => {
  it("marks the view stale after one second without frames", () => {
    const view = new SessionView();
    view.onFrame(frameAt(0), 1000);
    expect(view.isStale(1500)).toBe(false);
    expect(view.isStale(2100)).toBe(true);
  });
});
