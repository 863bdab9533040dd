// Wire protocol (v1) shared with the steering service: newline-free JSON
// text messages over a persistent WebSocket.

export const PROTOCOL_VERSION = 1;

export type Point = [number, number];

export interface StateFrame {
  v: 1;
  type: "state";
  t: number;
  pursuers: Point[];
  evader: Point;
  areas: number[];
  V: number;
  d_min: number;
  phase: "interior" | "edge";
  active_edge: [number, number] | null;
  encircled: boolean;
  captured: boolean;
  t_bound: number;
  r_c: number;
  mu_max: number;
  status: string;
}

export interface EpisodeResult {
  captured: boolean;
  t_capture: number | null;
  captured_by: number | null;
  t_bound: number;
  tau: number | null;
  min_area_seen: number;
  encirclement_ok: boolean;
}

export interface ControlEntry {
  t: number;
  mu: number;
  psi: number;
}

export interface EndMessage {
  v: 1;
  type: "end";
  result: EpisodeResult | null;
  control_log: ControlEntry[];
  reason?: string;
}

export interface ErrorMessage {
  v: 1;
  type: "error";
  detail: string;
}

export type ServerMessage = StateFrame | EndMessage | ErrorMessage;

export function parseServerMessage(text: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const msg = obj as Record<string, unknown>;
  if (msg.v !== PROTOCOL_VERSION) return null;
  if (msg.type === "state") {
    if (!Array.isArray(msg.pursuers) || !Array.isArray(msg.evader)) return null;
    return msg as unknown as StateFrame;
  }
  if (msg.type === "end") return msg as unknown as EndMessage;
  if (msg.type === "error") {
    return typeof msg.detail === "string" ? (msg as unknown as ErrorMessage) : null;
  }
  return null;
}

export function startMessage(): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "start" });
}

export function pauseMessage(): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "pause" });
}

export function resumeMessage(): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "resume" });
}

export function resetMessage(): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "reset" });
}

export function controlMessage(mu: number, psi: number): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type: "control", mu, psi });
}
