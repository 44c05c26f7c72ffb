// WebSocket session client: parses frames, throttles target updates to at
// most one per control step, and exposes the session controls.

import {
  CONTROL_STEP_S,
  parseServerFrame,
  validateGenomeWeights,
  type ClientMessage,
  type StateFrame,
} from "./protocol.js";

export interface SessionHooks {
  onState?: (frame: StateFrame) => void;
  onError?: (msg: string) => void;
  onStatus?: (connected: boolean) => void;
}

export class SessionClient {
  private ws: WebSocket | null = null;
  private hooks: SessionHooks;
  private lastTargetSentAt = -Infinity;
  private pendingTarget: { x: number; y: number } | null = null;
  private flushTimer: ReturnType<typeof setTimeout> | null = null;
  paused = false;
  private now: () => number;

  constructor(hooks: SessionHooks, now: () => number = () => performance.now()) {
    this.hooks = hooks;
    this.now = now;
  }

  connect(url: string): void {
    this.ws = new WebSocket(url);
    this.ws.onopen = () => this.hooks.onStatus?.(true);
    this.ws.onclose = () => this.hooks.onStatus?.(false);
    this.ws.onmessage = (event) => {
      const frame = parseServerFrame(String(event.data));
      if (frame === null) return;
      if (frame.type === "error") this.hooks.onError?.(frame.msg);
      else this.hooks.onState?.(frame);
    };
  }

  get connected(): boolean {
    return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
  }

  send(message: ClientMessage): boolean {
    if (!this.connected) return false;
    this.ws!.send(JSON.stringify(message));
    return true;
  }

  /** Throttled to one message per control step; drops while paused. */
  dragTarget(x: number, y: number): boolean {
    if (this.paused || !this.connected) return false;
    const minGapMs = CONTROL_STEP_S * 1000;
    const now = this.now();
    if (now - this.lastTargetSentAt >= minGapMs) {
      this.lastTargetSentAt = now;
      return this.send({ type: "set_target", x, y });
    }
    // keep only the newest position; send it when the window opens
    this.pendingTarget = { x, y };
    if (this.flushTimer === null) {
      const wait = minGapMs - (now - this.lastTargetSentAt);
      this.flushTimer = setTimeout(() => {
        this.flushTimer = null;
        const pending = this.pendingTarget;
        this.pendingTarget = null;
        if (pending !== null && !this.paused) {
          this.lastTargetSentAt = this.now();
          this.send({ type: "set_target", x: pending.x, y: pending.y });
        }
      }, Math.max(wait, 0));
    }
    return true;
  }

  pause(): void {
    if (this.send({ type: "pause" })) this.paused = true;
  }

  resume(): void {
    if (this.send({ type: "resume" })) this.paused = false;
  }

  reset(robot: string, scenario = "external"): boolean {
    return this.send({ type: "reset", robot, scenario });
  }

  /** Validates locally first; invalid genomes never reach the server. */
  loadGenome(robot: string, weights: unknown): { ok: boolean; reason?: string } {
    const checked = validateGenomeWeights(robot, weights);
    if (!checked.ok) return { ok: false, reason: checked.reason };
    this.send({ type: "load_genome", weights: checked.weights });
    return { ok: true };
  }

  close(): void {
    this.ws?.close();
  }
}
