// Canvas rendering: triangulation shading, hull edges, capture discs,
// trails, agents. HUD text lives in the DOM (app.ts), not here.

import { Camera, type Viewport } from "./camera.js";
import type { Point, StateFrame } from "./protocol.js";

const PURSUER_COLORS = ["#4ea1ff", "#38d0a0", "#caa0ff", "#ffb060", "#7fd4ff"];

export class Trails {
  private paths = new Map<string, Point[]>();

  constructor(private maxPoints = 2000) {}

  push(frame: StateFrame): void {
    frame.pursuers.forEach((p, i) => this.append(`p${i}`, p));
    this.append("e", frame.evader);
  }

  private append(key: string, p: Point): void {
    let path = this.paths.get(key);
    if (!path) {
      path = [];
      this.paths.set(key, path);
    }
    path.push(p);
    if (path.length > this.maxPoints) path.shift();
  }

  get(key: string): Point[] {
    return this.paths.get(key) ?? [];
  }

  clear(): void {
    this.paths.clear();
  }
}

function poly(ctx: CanvasRenderingContext2D, pts: Point[]): void {
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
}

export function draw(
  ctx: CanvasRenderingContext2D,
  frame: StateFrame,
  camera: Camera,
  trails: Trails,
  view: Viewport,
): void {
  ctx.clearRect(0, 0, view.width, view.height);
  ctx.fillStyle = frame.encircled ? "#10141c" : "#2c1416";
  ctx.fillRect(0, 0, view.width, view.height);

  const n = frame.pursuers.length;
  const sp = frame.pursuers.map((p) => camera.worldToScreen(p, view));
  const se = camera.worldToScreen(frame.evader, view);
  const maxArea = Math.max(...frame.areas.map(Math.abs), 1e-9);

  // sub-triangle shading proportional to the signed area of each edge
  for (let i = 0; i < n; i++) {
    const a = frame.areas[i];
    const alpha = Math.min(Math.abs(a) / maxArea, 1) * 0.25;
    ctx.fillStyle = a >= 0 ? `rgba(80,160,255,${alpha})` : `rgba(255,80,80,${0.3 + alpha})`;
    poly(ctx, [se, sp[i], sp[(i + 1) % n]]);
    ctx.closePath();
    ctx.fill();
  }

  // hull edges, the active one highlighted
  for (let i = 0; i < n; i++) {
    const active =
      frame.active_edge !== null &&
      frame.active_edge[0] === i + 1 &&
      frame.active_edge[1] === ((i + 1) % n) + 1;
    ctx.strokeStyle = active ? "#ffcc33" : "#5a6578";
    ctx.lineWidth = active ? 3 : 1.5;
    poly(ctx, [sp[i], sp[(i + 1) % n]]);
    ctx.stroke();
  }

  // trails
  ctx.lineWidth = 1;
  for (let i = 0; i < n; i++) {
    ctx.strokeStyle = PURSUER_COLORS[i % PURSUER_COLORS.length] + "66";
    const path = trails.get(`p${i}`).map((p) => camera.worldToScreen(p, view));
    if (path.length > 1) {
      poly(ctx, path);
      ctx.stroke();
    }
  }
  ctx.strokeStyle = "#ff666688";
  const epath = trails.get("e").map((p) => camera.worldToScreen(p, view));
  if (epath.length > 1) {
    poly(ctx, epath);
    ctx.stroke();
  }

  // capture discs and pursuers
  for (let i = 0; i < n; i++) {
    const [x, y] = sp[i];
    ctx.beginPath();
    ctx.arc(x, y, frame.r_c * camera.scale, 0, 2 * Math.PI);
    ctx.fillStyle = "rgba(90,140,220,0.12)";
    ctx.fill();
    ctx.strokeStyle = "#46598066";
    ctx.lineWidth = 1;
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, 2 * Math.PI);
    ctx.fillStyle = PURSUER_COLORS[i % PURSUER_COLORS.length];
    ctx.fill();
    ctx.fillStyle = "#dde4ee";
    ctx.font = "12px sans-serif";
    ctx.fillText(`p${i + 1}`, x + 8, y - 8);
  }

  // evader
  ctx.beginPath();
  ctx.arc(se[0], se[1], 5, 0, 2 * Math.PI);
  ctx.fillStyle = frame.captured ? "#ffcc33" : "#ff5555";
  ctx.fill();

  if (frame.captured) {
    ctx.beginPath();
    ctx.arc(se[0], se[1], 14, 0, 2 * Math.PI);
    ctx.strokeStyle = "#ffcc33";
    ctx.lineWidth = 2;
    ctx.stroke();
  }
}
