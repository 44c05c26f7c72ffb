// Page bootstrap: wires the canvas, pointer handling, and session controls.

import { SessionClient } from "./client.js";
import { GENOME_SIZES } from "./protocol.js";
import { renderFrame } from "./render.js";
import { screenToWorld, SessionView } from "./view.js";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const robotSelect = document.getElementById("robot") as HTMLSelectElement;
const pauseBtn = document.getElementById("pause") as HTMLButtonElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;
const genomeInput = document.getElementById("genome") as HTMLInputElement;
const statusEl = document.getElementById("status") as HTMLSpanElement;

const view = new SessionView();

function setStatus(text: string): void {
  statusEl.textContent = text;
}

const client = new SessionClient({
  onState: (frame) => view.onFrame(frame, performance.now()),
  onError: (msg) => setStatus(`server: ${msg}`),
  onStatus: (connected) => {
    view.connected = connected;
    setStatus(connected ? "connected" : "disconnected");
  },
});

const wsProto = location.protocol === "https:" ? "wss" : "ws";
client.connect(`${wsProto}://${location.host}/ws`);

// dragging moves the target; messages are throttled inside the client
let dragging = false;
function sendPointerTarget(event: PointerEvent): void {
  const rect = canvas.getBoundingClientRect();
  const [wx, wy] = screenToWorld(
    view.transform(), canvas.width, canvas.height,
    event.clientX - rect.left, event.clientY - rect.top,
  );
  client.dragTarget(wx, wy);
}
canvas.addEventListener("pointerdown", (event) => {
  dragging = true;
  sendPointerTarget(event);
});
canvas.addEventListener("pointermove", (event) => {
  if (dragging) sendPointerTarget(event);
});
window.addEventListener("pointerup", () => {
  dragging = false;
});
canvas.addEventListener("wheel", (event) => {
  event.preventDefault();
  const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
  view.zoom = Math.min(Math.max(view.zoom * factor, 0.2), 5.0);
});

pauseBtn.addEventListener("click", () => {
  if (client.paused) {
    client.resume();
    view.paused = false;
    pauseBtn.textContent = "pause";
  } else {
    client.pause();
    view.paused = true;
    pauseBtn.textContent = "resume";
  }
});

resetBtn.addEventListener("click", () => {
  const robot = robotSelect.value;
  view.robot = robot;
  client.reset(robot);
  view.clearTrail();
  setStatus(`reset to ${robot}`);
});

genomeInput.addEventListener("change", async () => {
  const file = genomeInput.files?.[0];
  if (!file) return;
  try {
    const data = JSON.parse(await file.text());
    const robot = typeof data.robot === "string" && data.robot in GENOME_SIZES
      ? data.robot
      : view.robot;
    const result = client.loadGenome(robot, data.weights);
    setStatus(result.ok ? `genome loaded (${robot})` : `rejected: ${result.reason}`);
  } catch {
    setStatus("rejected: not a genome JSON file");
  }
  genomeInput.value = "";
});

function loop(): void {
  renderFrame(ctx, view, performance.now());
  requestAnimationFrame(loop);
}
loop();
