import { describe, expect, it } from "vitest";

import { ControlSender, pointerBearing } from "../src/input.js";

describe("pointerBearing", () => {
  it("pointer due east of the evader gives psi = 0", () => {
    expect(pointerBearing([100, 100], [150, 100])).toBeCloseTo(0);
  });

  it("pointer above the evader on screen gives psi = +pi/2", () => {
    expect(pointerBearing([100, 100], [100, 40])).toBeCloseTo(Math.PI / 2);
  });

  it("pointer below-left gives a third-quadrant heading", () => {
    const psi = pointerBearing([100, 100], [60, 140]);
    expect(psi).toBeCloseTo((-3 * Math.PI) / 4);
  });
});

describe("ControlSender", () => {
  it("sends a changed intent immediately", () => {
    const s = new ControlSender();
    expect(s.maybeSend({ mu: 0.7, psi: 0 }, 0)).not.toBeNull();
  });

  it("suppresses duplicates regardless of time", () => {
    const s = new ControlSender();
    s.maybeSend({ mu: 0.7, psi: 0.5 }, 0);
    expect(s.maybeSend({ mu: 0.7, psi: 0.5 }, 1000)).toBeNull();
    expect(s.maybeSend({ mu: 0.7, psi: 0.5 + 1e-6 }, 2000)).toBeNull();
  });

  it("rate-limits distinct intents to the frame budget", () => {
    const s = new ControlSender(1000 / 30);
    expect(s.maybeSend({ mu: 0.7, psi: 0.0 }, 0)).not.toBeNull();
    expect(s.maybeSend({ mu: 0.7, psi: 1.0 }, 10)).toBeNull();
    expect(s.maybeSend({ mu: 0.7, psi: 1.0 }, 40)).not.toBeNull();
  });

  it("treats wrapped headings as equal", () => {
    const s = new ControlSender();
    s.maybeSend({ mu: 0.7, psi: Math.PI }, 0);
    expect(s.maybeSend({ mu: 0.7, psi: -Math.PI }, 100)).toBeNull();
  });

  it("zero slider fraction sends mu = 0", () => {
    const s = new ControlSender();
    const msg = s.maybeSend({ mu: 0, psi: 0.3 }, 0);
    expect(JSON.parse(msg!)).toMatchObject({ type: "control", mu: 0 });
  });
});
