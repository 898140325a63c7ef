// Curved-link overlay: one fixed SVG layer above all panels so curves can
// cross panel boundaries. Blue = automatic link, red = manual link.

import { Point, curvePath } from './geometry.js';

export interface CurveSpec {
  from: Point;
  to: Point;
  kind: 'automatic' | 'manual';
}

export class LinkOverlay {
  private svg: SVGSVGElement;

  constructor(host: HTMLElement) {
    this.svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
    this.svg.setAttribute('id', 'link-overlay');
    host.appendChild(this.svg);
  }

  draw(curves: CurveSpec[]): void {
    this.clear();
    for (const curve of curves) {
      const path = document.createElementNS('http://www.w3.org/2000/svg', 'path');
      path.setAttribute('d', curvePath(curve.from, curve.to));
      path.setAttribute('class', `link link-${curve.kind}`);
      this.svg.appendChild(path);
    }
  }

  clear(): void {
    while (this.svg.firstChild) {
      this.svg.removeChild(this.svg.firstChild);
    }
  }

  count(): number {
    return this.svg.childNodes.length;
  }
}
