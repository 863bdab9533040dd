// Application wiring: WebSocket with reconnect, render loop, pointer/key
// input, and the HUD. Rendering never mutates simulation state; everything
// displayed comes from server frames.

import { Camera } from "./camera.js";
import { ControlSender, pointerBearing } from "./input.js";
import {
  parseServerMessage,
  pauseMessage,
  resetMessage,
  resumeMessage,
  startMessage,
  type EndMessage,
  type StateFrame,
} from "./protocol.js";
import { draw, Trails } from "./render.js";

export interface HudElements {
  status: HTMLElement;
  time: HTMLElement;
  lyapunov: HTMLElement;
  dmin: HTMLElement;
  areas: HTMLElement;
  banner: HTMLElement;
  progress: HTMLElement;
  speed: HTMLInputElement;
  speedLabel: HTMLElement;
}

export class SteeringApp {
  private camera = new Camera();
  private trails = new Trails();
  private sender = new ControlSender();
  private socket: WebSocket | null = null;
  private frame: StateFrame | null = null;
  private end: EndMessage | null = null;
  private pointer: [number, number] | null = null;
  private connected = false;
  private running = false;

  constructor(
    private canvas: HTMLCanvasElement,
    private hud: HudElements,
    private url: string,
  ) {}

  start(): void {
    this.connect();
    this.bindInputs();
    const loop = () => {
      this.renderFrame();
      this.pushControl(performance.now());
      requestAnimationFrame(loop);
    };
    requestAnimationFrame(loop);
  }

  private connect(): void {
    const ws = new WebSocket(this.url);
    this.socket = ws;
    ws.onopen = () => {
      this.connected = true;
      this.sender.reset();
      this.hud.status.textContent = "connected — press Start";
    };
    ws.onmessage = (ev: MessageEvent) => this.onMessage(String(ev.data));
    ws.onclose = () => {
      this.connected = false;
      this.running = false;
      this.hud.status.textContent = "disconnected — retrying…";
      setTimeout(() => this.connect(), 1000);
    };
    ws.onerror = () => ws.close();
  }

  private onMessage(text: string): void {
    const msg = parseServerMessage(text);
    if (msg === null) return;
    if (msg.type === "state") {
      this.frame = msg;
      this.trails.push(msg);
      this.updateHud(msg);
    } else if (msg.type === "end") {
      this.end = msg;
      this.running = false;
      const r = msg.result;
      if (r && r.captured) {
        const tau = r.tau === null ? "?" : r.tau.toFixed(3);
        this.hud.banner.textContent =
          `CAPTURED by p${r.captured_by} at t=${r.t_capture?.toFixed(3)} s — ` +
          `tau=${tau} (bound ${r.t_bound.toFixed(3)} s)`;
        this.hud.banner.className = "banner captured";
      } else {
        this.hud.banner.textContent = "episode ended without capture";
        this.hud.banner.className = "banner";
      }
    } else {
      this.hud.status.textContent = `server: ${msg.detail}`;
    }
  }

  private bindInputs(): void {
    this.canvas.addEventListener("pointermove", (ev: PointerEvent) => {
      const rect = this.canvas.getBoundingClientRect();
      this.pointer = [ev.clientX - rect.left, ev.clientY - rect.top];
    });
    this.canvas.addEventListener("pointerleave", () => (this.pointer = null));
    window.addEventListener("keydown", (ev: KeyboardEvent) => {
      const step = 5;
      if (ev.key === "ArrowUp") this.hud.speed.value = String(Math.min(100, Number(this.hud.speed.value) + step));
      if (ev.key === "ArrowDown") this.hud.speed.value = String(Math.max(0, Number(this.hud.speed.value) - step));
    });
    document.getElementById("btn-start")?.addEventListener("click", () => {
      this.end = null;
      this.hud.banner.textContent = "";
      this.hud.banner.className = "banner";
      this.running = true;
      this.socket?.send(startMessage());
    });
    document.getElementById("btn-pause")?.addEventListener("click", () => {
      this.running = false;
      this.socket?.send(pauseMessage());
    });
    document.getElementById("btn-resume")?.addEventListener("click", () => {
      this.running = true;
      this.socket?.send(resumeMessage());
    });
    document.getElementById("btn-reset")?.addEventListener("click", () => {
      this.end = null;
      this.running = false;
      this.trails.clear();
      this.hud.banner.textContent = "";
      this.hud.banner.className = "banner";
      this.socket?.send(resetMessage());
    });
  }

  private pushControl(nowMs: number): void {
    if (!this.connected || !this.running || !this.frame || !this.pointer) return;
    const view = { width: this.canvas.width, height: this.canvas.height };
    const evaderScreen = this.camera.worldToScreen(this.frame.evader, view);
    const psi = pointerBearing(evaderScreen, this.pointer);
    const fraction = Number(this.hud.speed.value) / 100;
    const mu = this.frame.mu_max * fraction;
    const msg = this.sender.maybeSend({ mu, psi }, nowMs);
    if (msg !== null) this.socket?.send(msg);
  }

  private updateHud(f: StateFrame): void {
    this.hud.time.textContent = `t = ${f.t.toFixed(2)} s / bound ${f.t_bound.toFixed(2)} s`;
    this.hud.lyapunov.textContent = `V = ${f.V.toFixed(3)} m`;
    this.hud.dmin.textContent = `d_min = ${f.d_min.toFixed(3)} m`;
    this.hud.areas.textContent =
      "areas: " + f.areas.map((a) => a.toFixed(3)).join("  ");
    const pct = Math.min(100, (f.t / f.t_bound) * 100);
    this.hud.progress.style.width = `${pct.toFixed(1)}%`;
    this.hud.speedLabel.textContent = `${this.hud.speed.value}% of ${f.mu_max.toFixed(2)} m/s`;
    if (!f.encircled) {
      this.hud.banner.textContent = "ENCIRCLEMENT VIOLATION";
      this.hud.banner.className = "banner violated";
    }
    this.hud.status.textContent = `session ${f.status}` + (this.connected ? "" : " (offline)");
  }

  private renderFrame(): void {
    if (!this.frame) return;
    const view = { width: this.canvas.width, height: this.canvas.height };
    const pts = [...this.frame.pursuers, this.frame.evader];
    if (!this.camera.covers(pts, view)) {
      this.camera.fit(pts, view, 0.2);
    }
    const ctx = this.canvas.getContext("2d");
    if (ctx) draw(ctx, this.frame, this.camera, this.trails, view);
  }
}
