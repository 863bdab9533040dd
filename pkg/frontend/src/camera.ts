// World <-> screen transform. World y points up, screen y points down.

import type { Point } from "./protocol.js";

export interface Viewport {
  width: number;
  height: number;
}

export class Camera {
  scale = 100; // pixels per meter
  cx = 0; // world coords at the viewport center
  cy = 0;

  /** Fit all points into the viewport with a fractional margin (default 20%). */
  fit(points: Point[], view: Viewport, margin = 0.2): void {
    if (points.length === 0) return;
    let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
    for (const [x, y] of points) {
      xmin = Math.min(xmin, x);
      xmax = Math.max(xmax, x);
      ymin = Math.min(ymin, y);
      ymax = Math.max(ymax, y);
    }
    this.cx = (xmin + xmax) / 2;
    this.cy = (ymin + ymax) / 2;
    const spanX = Math.max(xmax - xmin, 1e-6) * (1 + 2 * margin);
    const spanY = Math.max(ymax - ymin, 1e-6) * (1 + 2 * margin);
    this.scale = Math.min(view.width / spanX, view.height / spanY);
  }

  worldToScreen(p: Point, view: Viewport): Point {
    return [
      view.width / 2 + (p[0] - this.cx) * this.scale,
      view.height / 2 - (p[1] - this.cy) * this.scale,
    ];
  }

  screenToWorld(s: Point, view: Viewport): Point {
    return [
      this.cx + (s[0] - view.width / 2) / this.scale,
      this.cy - (s[1] - view.height / 2) / this.scale,
    ];
  }

  /** True when every point maps inside the viewport. */
  covers(points: Point[], view: Viewport): boolean {
    return points.every((p) => {
      const [sx, sy] = this.worldToScreen(p, view);
      return sx >= 0 && sx <= view.width && sy >= 0 && sy <= view.height;
    });
  }
}
