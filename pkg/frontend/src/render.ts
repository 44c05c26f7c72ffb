// Canvas rendering: arena grid, robot glyph with FOV wedge, target, trail,
// bearing readout and per-joint signal bars.

import { HALF_FOV_DEG } from "./protocol.js";
import { SessionView, worldToScreen } from "./view.js";

const COLORS = {
  background: "#10141a",
  grid: "#232a33",
  trail: "#3d6ea5",
  robot: "#e8c468",
  fov: "rgba(232, 196, 104, 0.12)",
  target: "#e05c5c",
  text: "#c9d2dc",
  barPositive: "#6abf69",
  barNegative: "#bf6a6a",
};

export function renderFrame(ctx: CanvasRenderingContext2D, view: SessionView,
                            nowMs: number): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  const t = view.transform();

  drawGrid(ctx, view, width, height);

  const frame = view.latest;
  if (frame === null) {
    ctx.fillStyle = COLORS.text;
    ctx.font = "16px sans-serif";
    ctx.fillText("waiting for session...", 20, 30);
    return;
  }

  // trail
  if (view.trail.length > 1) {
    ctx.strokeStyle = COLORS.trail;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    view.trail.forEach((p, i) => {
      const [px, py] = worldToScreen(t, width, height, p.x, p.y);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }

  for (const robot of frame.robots) {
    drawRobot(ctx, view, width, height, robot.x, robot.y, robot.theta);
  }

  // target
  const [tx, ty] = worldToScreen(t, width, height, frame.target.x, frame.target.y);
  ctx.fillStyle = COLORS.target;
  ctx.beginPath();
  ctx.arc(tx, ty, 7, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = COLORS.background;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(tx, ty, 3, 0, 2 * Math.PI);
  ctx.stroke();

  drawReadouts(ctx, view, width, nowMs);
}

function drawGrid(ctx: CanvasRenderingContext2D, view: SessionView,
                  width: number, height: number): void {
  const t = view.transform();
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  const step = t.scale; // one meter
  const x0 = ((width / 2 - t.cx * t.scale) % step + step) % step;
  const y0 = ((height / 2 + t.cy * t.scale) % step + step) % step;
  for (let x = x0; x < width; x += step) {
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
  }
  for (let y = y0; y < height; y += step) {
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
    ctx.stroke();
  }
}

function drawRobot(ctx: CanvasRenderingContext2D, view: SessionView,
                   width: number, height: number,
                   x: number, y: number, theta: number): void {
  const t = view.transform();
  const [px, py] = worldToScreen(t, width, height, x, y);
  const screenAngle = -theta; // world counterclockwise, screen y flipped

  // field-of-view wedge
  const beta = (HALF_FOV_DEG * Math.PI) / 180;
  const reach = 1.2 * t.scale;
  ctx.fillStyle = COLORS.fov;
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.arc(px, py, reach, screenAngle - beta, screenAngle + beta);
  ctx.closePath();
  ctx.fill();

  // oriented triangle glyph
  const size = 0.12 * t.scale;
  ctx.save();
  ctx.translate(px, py);
  ctx.rotate(screenAngle);
  ctx.fillStyle = COLORS.robot;
  ctx.beginPath();
  ctx.moveTo(size, 0);
  ctx.lineTo(-0.6 * size, 0.55 * size);
  ctx.lineTo(-0.6 * size, -0.55 * size);
  ctx.closePath();
  ctx.fill();
  ctx.restore();
}

function drawReadouts(ctx: CanvasRenderingContext2D, view: SessionView,
                      width: number, nowMs: number): void {
  const frame = view.latest!;
  const lead = frame.robots[0];
  ctx.fillStyle = COLORS.text;
  ctx.font = "13px monospace";
  ctx.fillText(`t ${frame.t.toFixed(1)} s`, 12, 20);
  ctx.fillText(`bearing ${lead.alpha.toFixed(1)} deg`, 12, 38);
  if (view.paused) ctx.fillText("paused", 12, 56);
  if (view.isStale(nowMs)) {
    ctx.fillStyle = COLORS.target;
    ctx.fillText("stale: no frames for > 1 s", 12, 74);
  }

  // per-joint signal bars, right edge
  const bars = lead.signals;
  const barWidth = 14;
  const x0 = width - bars.length * (barWidth + 4) - 12;
  const mid = 60;
  for (let i = 0; i < bars.length; i++) {
    const value = bars[i];
    const h = Math.abs(value) * 40;
    ctx.fillStyle = value >= 0 ? COLORS.barPositive : COLORS.barNegative;
    const x = x0 + i * (barWidth + 4);
    if (value >= 0) ctx.fillRect(x, mid - h, barWidth, h);
    else ctx.fillRect(x, mid, barWidth, h);
    ctx.strokeStyle = COLORS.grid;
    ctx.strokeRect(x, mid - 40, barWidth, 80);
  }
}
