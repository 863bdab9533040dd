import { SteeringApp, type HudElements } from "./app.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

window.addEventListener("load", () => {
  const canvas = el<HTMLCanvasElement>("arena");
  const hud: HudElements = {
    status: el("status"),
    time: el("hud-time"),
    lyapunov: el("hud-V"),
    dmin: el("hud-dmin"),
    areas: el("hud-areas"),
    banner: el("banner"),
    progress: el("progress-fill"),
    speed: el<HTMLInputElement>("speed"),
    speedLabel: el("speed-label"),
  };
  const host = window.location.hostname || "127.0.0.1";
  const port = window.location.port || "8090";
  const app = new SteeringApp(canvas, hud, `ws://${host}:${port}/ws`);
  app.start();
});
