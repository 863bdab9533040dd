// Pointer/keys -> control messages: heading from the pointer bearing relative
// to the evader, speed from the slider fraction, rate-limited and coalesced.

import { controlMessage, type Point } from "./protocol.js";

/** World-frame heading from the evader's screen position toward the pointer
 * (screen y points down, world y up). Pointer due east gives 0. */
export function pointerBearing(evaderScreen: Point, pointer: Point): number {
  return Math.atan2(-(pointer[1] - evaderScreen[1]), pointer[0] - evaderScreen[0]);
}

export interface ControlIntent {
  mu: number;
  psi: number;
}

/** Emits control messages at most once per interval and never for a
 * duplicate of the last sent intent. */
export class ControlSender {
  private lastSent: ControlIntent | null = null;
  private lastSentAt = -Infinity;

  constructor(
    private minIntervalMs = 1000 / 30,
    private psiTol = 1e-3,
    private muTol = 1e-6,
  ) {}

  private isDuplicate(intent: ControlIntent): boolean {
    if (this.lastSent === null) return false;
    const dpsi = Math.abs(
      Math.atan2(Math.sin(intent.psi - this.lastSent.psi), Math.cos(intent.psi - this.lastSent.psi)),
    );
    return dpsi <= this.psiTol && Math.abs(intent.mu - this.lastSent.mu) <= this.muTol;
  }

  maybeSend(intent: ControlIntent, nowMs: number): string | null {
    if (this.isDuplicate(intent)) return null;
    if (nowMs - this.lastSentAt < this.minIntervalMs) return null;
    this.lastSent = { ...intent };
    this.lastSentAt = nowMs;
    return controlMessage(intent.mu, intent.psi);
  }

  reset(): void {
    this.lastSent = null;
    this.lastSentAt = -Infinity;
  }
}
