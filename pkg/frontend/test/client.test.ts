import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { SessionClient } from "../src/client.js";

// Minimal WebSocket stand-in so throttle behaviour is testable without IO.
class FakeSocket {
  static OPEN = 1;
  readyState = 1;
  sent: string[] = [];
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;
  onmessage: ((event: { data: string }) => void) | null = null;
  constructor(public url: string) {}
  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {
    this.readyState = 3;
  }
}

describe("SessionClient target throttling", () => {
  let client: SessionClient;
  let socket: FakeSocket;
  let clock: number;

  beforeEach(() => {
    vi.useFakeTimers();
    clock = 0;
    vi.stubGlobal("WebSocket", FakeSocket as unknown as typeof WebSocket);
    client = new SessionClient({}, () => clock);
    client.connect("ws://test/ws");
    socket = (client as unknown as { ws: FakeSocket }).ws;
  });

  afterEach(() => {
    vi.useRealTimers();
    vi.unstubAllGlobals();
  });

  function targets(): Array<{ x: number; y: number }> {
    return socket.sent
      .map((raw) => JSON.parse(raw))
      .filter((m) => m.type === "set_target");
  }

  it("sends at most one target message per control step", () => {
    for (let i = 0; i < 10; i++) {
      client.dragTarget(i, 0);
      clock += 10; // 10 ms between pointer events
      vi.advanceTimersByTime(10);
    }
    expect(targets().length).toBeLessThanOrEqual(2);
  });

  it("delivers the newest pending position after the window", () => {
    client.dragTarget(0, 0);
    client.dragTarget(1, 1);
    client.dragTarget(2, 2);
    clock += 100;
    vi.advanceTimersByTime(101);
    const sent = targets();
    expect(sent[0]).toMatchObject({ x: 0, y: 0 });
    expect(sent[sent.length - 1]).toMatchObject({ x: 2, y: 2 });
    expect(sent.length).toBe(2);
  });

  it("drops drags while paused", () => {
    client.pause();
    expect(client.dragTarget(5, 5)).toBe(false);
    expect(targets().length).toBe(0);
  });

  it("rejects short genomes before any message is sent", () => {
    const before = socket.sent.length;
    const result = client.loadGenome("gecko", new Array(12).fill(0));
    expect(result.ok).toBe(false);
    expect(socket.sent.length).toBe(before);
    const good = client.loadGenome("gecko", new Array(13).fill(0));
    expect(good.ok).toBe(true);
    expect(socket.sent.length).toBe(before + 1);
  });
});
