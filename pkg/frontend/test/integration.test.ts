// End-to-end acceptance against the real session server: spawns the Python
// process, drives a scripted client through the documented protocol, and
// checks the live-loop guarantees (bearing reaction latency, client-side
// genome gating, frame rate).
import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";
import { validateGenomeWeights, type StateFrame } from "../src/protocol.js";

const PORT = 8734;
const URL = `ws://127.0.0.1:${PORT}/ws`;
let server: ChildProcess;

function waitForHealth(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  return new Promise((resolve, reject) => {
    const probe = async () => {
      try {
        const response = await fetch(`http://127.0.0.1:${PORT}/health`);
        if (response.ok) return resolve();
      } catch {
        // not up yet
      }
      if (Date.now() > deadline) return reject(new Error("server never came up"));
      setTimeout(probe, 250);
    };
    probe();
  });
}

function connect(): Promise<WebSocket> {
  return new Promise((resolve, reject) => {
    const ws = new WebSocket(URL);
    ws.on("open", () => resolve(ws));
    ws.on("error", reject);
  });
}

function nextState(ws: WebSocket, timeoutMs = 5000): Promise<StateFrame> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("no state frame")), timeoutMs);
    const handler = (raw: WebSocket.RawData) => {
      const frame = JSON.parse(String(raw));
      if (frame.type === "state") {
        clearTimeout(timer);
        ws.off("message", handler);
        resolve(frame);
      }
    };
    ws.on("message", handler);
  });
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "modloco", "serve", "--robot", "gecko", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForHealth();
}, 40000);

afterAll(() => {
  server?.kill();
});

describe("live session against the real server", () => {
  it("reports a negative bearing within two control steps of a left target", async () => {
    const ws = await connect();
    try {
      const first = await nextState(ws);
      const robot = first.robots[0];
      // place the target 20 degrees to the LEFT of the current heading
      const angle = robot.theta + (20 * Math.PI) / 180;
      ws.send(JSON.stringify({
        type: "set_target",
        x: robot.x + Math.cos(angle),
        y: robot.y + Math.sin(angle),
      }));
      const a = await nextState(ws);
      const b = await nextState(ws);
      expect(Math.min(a.robots[0].alpha, b.robots[0].alpha)).toBeLessThan(0);
    } finally {
      ws.close();
    }
  }, 20000);

  it("accepts a 13-weight genome and rejects 12 client-side", async () => {
    const ws = await connect();
    try {
      await nextState(ws);
      const short = validateGenomeWeights("gecko", new Array(12).fill(0.2));
      expect(short.ok).toBe(false); // never sent
      const full = validateGenomeWeights("gecko", new Array(13).fill(0.2));
      expect(full.ok).toBe(true);
      if (full.ok) {
        ws.send(JSON.stringify({ type: "load_genome", weights: full.weights }));
      }
      // the server keeps streaming states and raises no error frame
      let sawError = false;
      const watch = (raw: WebSocket.RawData) => {
        if (JSON.parse(String(raw)).type === "error") sawError = true;
      };
      ws.on("message", watch);
      await nextState(ws);
      await nextState(ws);
      ws.off("message", watch);
      expect(sawError).toBe(false);
    } finally {
      ws.close();
    }
  }, 20000);

  it("streams state frames at 10 +/- 2 Hz for 30 seconds", async () => {
    const ws = await connect();
    try {
      await nextState(ws);
      const count = await new Promise<number>((resolve) => {
        let frames = 0;
        const handler = (raw: WebSocket.RawData) => {
          if (JSON.parse(String(raw)).type === "state") frames += 1;
        };
        ws.on("message", handler);
        setTimeout(() => {
          ws.off("message", handler);
          resolve(frames);
        }, 30000);
      });
      const hz = count / 30;
      expect(hz).toBeGreaterThanOrEqual(8);
      expect(hz).toBeLessThanOrEqual(12);
    } finally {
      ws.close();
    }
  }, 45000);
});
