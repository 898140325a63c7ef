// Pure geometry: panel-local placement of glyphs and element marks, glyph
// anchors for curved links, and the quadratic link path itself. Everything
// here is computed from payload data, never measured from the DOM.

import type { BarPayload, DisplayMode, PanelPayload } from './types.js';

export const HEADER_HEIGHT = 28;
export const BODY_PADDING = 24;

export const BAR_WIDTH = 12;
export const BAR_GAP = 4;
export const BAR_BOX_HEIGHT = 36;

export interface Point {
  x: number;
  y: number;
}

/** Map a layout coordinate in [-1, 1]^2 into panel-local pixels. */
export function layoutToLocal(panel: PanelPayload, coord: [number, number]): Point {
  const bw = Math.max(panel.w - 2 * BODY_PADDING, 1);
  const bh = Math.max(panel.h - HEADER_HEIGHT - 2 * BODY_PADDING, 1);
  return {
    x: BODY_PADDING + ((coord[0] + 1) / 2) * bw,
    y: HEADER_HEIGHT + BODY_PADDING + ((coord[1] + 1) / 2) * bh,
  };
}

export function toPage(panel: PanelPayload, local: Point): Point {
  return { x: panel.x + local.x, y: panel.y + local.y };
}

export interface BarRect {
  viewId: string;
  x: number;
  boxTop: number;
  height: number;
  center: Point;
}

/** Horizontally aligned bars around the glyph center, one equal-size
 * bounding box per view; bar height scales by the shared reference max. */
export function barRects(center: Point, bars: BarPayload[], referenceMax: number): BarRect[] {
  const total = bars.length * BAR_WIDTH + (bars.length - 1) * BAR_GAP;
  const left = center.x - total / 2;
  const boxTop = center.y - BAR_BOX_HEIGHT / 2;
  return bars.map((bar, i) => {
    const x = left + i * (BAR_WIDTH + BAR_GAP);
    const height = referenceMax > 0 ? (bar.count / referenceMax) * BAR_BOX_HEIGHT : 0;
    return {
      viewId: bar.view_id,
      x,
      boxTop,
      height,
      center: { x: x + BAR_WIDTH / 2, y: center.y },
    };
  });
}

/** Anchor a curved link on a glyph: the circle center in circle mode, the
 * center of the target view's bar in summary mode. */
export function glyphAnchor(
  center: Point,
  mode: DisplayMode,
  bars: BarPayload[],
  referenceMax: number,
  targetView?: string,
): Point {
  if (mode === 'summary' && targetView) {
    const rect = barRects(center, bars, referenceMax).find((r) => r.viewId === targetView);
    if (rect) {
      return rect.center;
    }
  }
  return center;
}

/** Quadratic curve between two page points, bowed perpendicular to the
 * connecting segment. */
export function curvePath(from: Point, to: Point): string {
  const mx = (from.x + to.x) / 2;
  const my = (from.y + to.y) / 2;
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const norm = Math.hypot(dx, dy) || 1;
  const cx = mx - (dy / norm) * norm * 0.18;
  const cy = my + (dx / norm) * norm * 0.18;
  return `M ${from.x.toFixed(1)} ${from.y.toFixed(1)} Q ${cx.toFixed(1)} ${cy.toFixed(1)} ${to.x.toFixed(1)} ${to.y.toFixed(1)}`;
}
