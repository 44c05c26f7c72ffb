// Session view state: the latest server frame, the world-to-screen
// transform, and the pose trail. Robot poses are never extrapolated
// client-side; everything rendered comes from a server frame.

import type { StateFrame } from "./protocol.js";

export const PX_PER_METER = 100;
export const TRAIL_SECONDS = 120;

export interface Transform {
  scale: number; // pixels per meter, zoom included
  cx: number; // world point mapped to the canvas center
  cy: number;
}

export class SessionView {
  latest: StateFrame | null = null;
  lastFrameAt = 0; // ms timestamp of the last state frame
  connected = false;
  paused = false;
  robot = "gecko";
  zoom = 1.0;
  trail: { t: number; x: number; y: number }[] = [];

  onFrame(frame: StateFrame, nowMs: number): void {
    this.latest = frame;
    this.lastFrameAt = nowMs;
    const lead = frame.robots[0];
    if (lead !== undefined) {
      this.trail.push({ t: frame.t, x: lead.x, y: lead.y });
      const cutoff = frame.t - TRAIL_SECONDS;
      while (this.trail.length > 0 && this.trail[0].t < cutoff) {
        this.trail.shift();
      }
    }
  }

  clearTrail(): void {
    this.trail = [];
  }

  isStale(nowMs: number): boolean {
    return this.latest !== null && nowMs - this.lastFrameAt > 1000;
  }

  transform(): Transform {
    const lead = this.latest?.robots[0];
    return {
      scale: PX_PER_METER * this.zoom,
      cx: lead ? lead.x : 0,
      cy: lead ? lead.y : 0,
    };
  }
}

export function worldToScreen(
  t: Transform,
  width: number,
  height: number,
  x: number,
  y: number,
): [number, number] {
  // +y in the world points up on screen
  return [
    width / 2 + (x - t.cx) * t.scale,
    height / 2 - (y - t.cy) * t.scale,
  ];
}

export function screenToWorld(
  t: Transform,
  width: number,
  height: number,
  px: number,
  py: number,
): [number, number] {
  return [
    t.cx + (px - width / 2) / t.scale,
    t.cy - (py - height / 2) / t.scale,
  ];
}
