// Relationship glyph rendering: one circle (or mini bar chart) per
// relationship of a relationship-view, colored by state.

import {
  BAR_BOX_HEIGHT,
  BAR_WIDTH,
  HEADER_HEIGHT,
  barRects,
  layoutToLocal,
} from './geometry.js';
import type {
  DisplayMode,
  PanelPayload,
  RelationshipPayload,
  RelationshipViewPayload,
} from './types.js';
import { relationshipId } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

export interface GlyphHandlers {
  onHover(rvId: string, relationshipId: string, entering: boolean): void;
  onClick(rvId: string, relationshipId: string): void;
  onContextMenu(rvId: string, relationshipId: string, event: MouseEvent): void;
}

export function glyphMode(rv: RelationshipViewPayload, rid: string): DisplayMode {
  return rv.display_modes[rid] ?? rv.display_mode_default;
}

export function renderRelationshipView(
  body: HTMLElement,
  rv: RelationshipViewPayload,
  panel: PanelPayload,
  handlers: GlyphHandlers,
): void {
  const svg = svgElement('svg');
  svg.setAttribute('class', 'view-body');
  svg.setAttribute('width', String(panel.w));
  svg.setAttribute('height', String(Math.max(panel.h - HEADER_HEIGHT, 10)));

  if (!rv.relationships.length) {
    const note = svgElement('text');
    note.setAttribute('x', '12');
    note.setAttribute('y', '24');
    note.setAttribute('class', 'diagnostic');
    note.textContent = rv.diagnostic ?? 'no relationships';
    svg.appendChild(note);
    body.appendChild(svg);
    return;
  }

  for (const rel of rv.relationships) {
    svg.appendChild(renderGlyph(rv, rel, panel, handlers));
  }
  body.appendChild(svg);
}

function renderGlyph(
  rv: RelationshipViewPayload,
  rel: RelationshipPayload,
  panel: PanelPayload,
  handlers: GlyphHandlers,
): SVGGElement {
  const rid = relationshipId(rel);
  const state = rv.states[rid] ?? 'normal';
  const mode = glyphMode(rv, rid);
  const local = layoutToLocal(panel, rv.layout.coordinates[rid]);
  const center = { x: local.x, y: local.y - HEADER_HEIGHT }; // svg sits below the header

  const group = svgElement('g');
  group.setAttribute('class', `glyph glyph-${state} glyph-mode-${mode}`);
  group.setAttribute('data-rv-id', rv.rv_id);
  group.setAttribute('data-relationship-id', rid);

  if (mode === 'circle') {
    const circle = svgElement('circle');
    circle.setAttribute('cx', String(center.x));
    circle.setAttribute('cy', String(center.y));
    circle.setAttribute('r', String(rv.layout.radii[rid]));
    group.appendChild(circle);
  } else {
    // equal-size bounding boxes with value bars, horizontally aligned
    for (const bar of barRects(center, rv.layout.bar_summaries[rid], rv.layout.bar_reference_max)) {
      const box = svgElement('rect');
      box.setAttribute('class', 'bar-box');
      box.setAttribute('x', String(bar.x));
      box.setAttribute('y', String(bar.boxTop));
      box.setAttribute('width', String(BAR_WIDTH));
      box.setAttribute('height', String(BAR_BOX_HEIGHT));
      group.appendChild(box);

      const fill = svgElement('rect');
      fill.setAttribute('class', 'bar-fill');
      fill.setAttribute('data-bar-view', bar.viewId);
      fill.setAttribute('x', String(bar.x));
      fill.setAttribute('y', String(bar.boxTop + BAR_BOX_HEIGHT - bar.height));
      fill.setAttribute('width', String(BAR_WIDTH));
      fill.setAttribute('height', String(bar.height));
      group.appendChild(fill);
    }
  }

  group.addEventListener('mouseenter', () => handlers.onHover(rv.rv_id, rid, true));
  group.addEventListener('mouseleave', () => handlers.onHover(rv.rv_id, rid, false));
  group.addEventListener('click', () => handlers.onClick(rv.rv_id, rid));
  group.addEventListener('contextmenu', (event) => {
    event.preventDefault();
    handlers.onContextMenu(rv.rv_id, rid, event);
  });
  return group;
}
