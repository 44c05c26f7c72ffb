// Wire protocol between the UI and the session server. The server is the
// single source of truth for robot state; the client only renders frames
// and sends control messages.

export interface RobotState {
  x: number;
  y: number;
  theta: number;
  alpha: number;
  signals: number[];
}

export interface StateFrame {
  type: "state";
  t: number;
  robots: RobotState[];
  target: { x: number; y: number };
}

export interface ErrorFrame {
  type: "error";
  msg: string;
}

export type ServerFrame = StateFrame | ErrorFrame;

export type ClientMessage =
  | { type: "set_target"; x: number; y: number }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "reset"; robot: string; scenario: string }
  | { type: "load_genome"; weights: number[] };

// weight-vector lengths of the built-in robots (joints + couplings)
export const GENOME_SIZES: Record<string, number> = {
  spider: 18,
  gecko: 13,
  baby: 16,
};

export const HALF_FOV_DEG = 31.1;
export const CONTROL_STEP_S = 0.1;

export function parseServerFrame(raw: string): ServerFrame | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const frame = data as Record<string, unknown>;
  if (frame.type === "error" && typeof frame.msg === "string") {
    return { type: "error", msg: frame.msg };
  }
  if (
    frame.type === "state" &&
    typeof frame.t === "number" &&
    Array.isArray(frame.robots) &&
    typeof frame.target === "object"
  ) {
    return frame as unknown as StateFrame;
  }
  return null;
}

// Client-side gate: a genome that cannot fit the robot is never sent.
export function validateGenomeWeights(
  robot: string,
  weights: unknown,
): { ok: true; weights: number[] } | { ok: false; reason: string } {
  const expected = GENOME_SIZES[robot];
  if (expected === undefined) {
    return { ok: false, reason: `unknown robot '${robot}'` };
  }
  if (!Array.isArray(weights) || !weights.every((w) => typeof w === "number" && isFinite(w))) {
    return { ok: false, reason: "weights must be a list of finite numbers" };
  }
  if (weights.length !== expected) {
    return {
      ok: false,
      reason: `${robot} needs ${expected} weights, got ${weights.length}`,
    };
  }
  if (!weights.every((w) => Math.abs(w) <= 1.0)) {
    return { ok: false, reason: "weights must lie in [-1, 1]" };
  }
  return { ok: true, weights: weights as number[] };
}
