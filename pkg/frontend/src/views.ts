// Renderers for existing data views. Each element mark registers a
// panel-local anchor so the link overlay can target it later.

import { BODY_PADDING, HEADER_HEIGHT, Point } from './geometry.js';
import type { DocumentPanelPayload, PanelPayload, ViewPayload } from './types.js';

export type AnchorRegistry = Map<string, { panelId: string; local: Point }>;

export function anchorKey(viewId: string, elementId: string): string {
  return `${viewId}:${elementId}`;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

interface Placed {
  elementId: string;
  label: string;
  x: number;
  y: number;
}

function placeElements(view: ViewPayload, panel: PanelPayload): Placed[] {
  const width = Math.max(panel.w - 2 * BODY_PADDING, 10);
  const height = Math.max(panel.h - HEADER_HEIGHT - 2 * BODY_PADDING, 10);
  const elements = view.elements;

  if (view.view_type === 'map') {
    const lats = elements.map((e) => Number(e.attrs.lat));
    const lons = elements.map((e) => Number(e.attrs.lon));
    const latSpan = Math.max(...lats) - Math.min(...lats) || 1;
    const lonSpan = Math.max(...lons) - Math.min(...lons) || 1;
    const latMin = Math.min(...lats);
    const lonMin = Math.min(...lons);
    return elements.map((e) => ({
      elementId: e.element_id,
      label: e.label,
      x: BODY_PADDING + ((Number(e.attrs.lon) - lonMin) / lonSpan) * width,
      y: HEADER_HEIGHT + BODY_PADDING + (1 - (Number(e.attrs.lat) - latMin) / latSpan) * height,
    }));
  }

  if (view.view_type === 'graph') {
    // precomputed positions from attrs when present, radial fallback otherwise
    const hasPositions = elements.every((e) => 'x' in e.attrs && 'y' in e.attrs);
    if (hasPositions) {
      const xs = elements.map((e) => Number(e.attrs.x));
      const ys = elements.map((e) => Number(e.attrs.y));
      const xSpan = Math.max(...xs) - Math.min(...xs) || 1;
      const ySpan = Math.max(...ys) - Math.min(...ys) || 1;
      return elements.map((e) => ({
        elementId: e.element_id,
        label: e.label,
        x: BODY_PADDING + ((Number(e.attrs.x) - Math.min(...xs)) / xSpan) * width,
        y: HEADER_HEIGHT + BODY_PADDING + ((Number(e.attrs.y) - Math.min(...ys)) / ySpan) * height,
      }));
    }
    const cx = BODY_PADDING + width / 2;
    const cy = HEADER_HEIGHT + BODY_PADDING + height / 2;
    const radius = Math.min(width, height) / 2;
    return elements.map((e, i) => {
      const angle = (2 * Math.PI * i) / elements.length - Math.PI / 2;
      return {
        elementId: e.element_id,
        label: e.label,
        x: cx + radius * Math.cos(angle),
        y: cy + radius * Math.sin(angle),
      };
    });
  }

  // list / document / other: ranked rows
  const rowHeight = Math.min(24, height / Math.max(elements.length, 1));
  return elements.map((e, i) => ({
    elementId: e.element_id,
    label: e.label,
    x: BODY_PADDING + 6,
    y: HEADER_HEIGHT + BODY_PADDING + i * rowHeight + rowHeight / 2,
  }));
}

export interface ElementHandlers {
  onContextMenu(viewId: string, elementId: string, event: MouseEvent): void;
  onHover(viewId: string, elementId: string, entering: boolean): void;
}

export function renderDataView(
  body: HTMLElement,
  view: ViewPayload,
  panel: PanelPayload,
  panelId: string,
  anchors: AnchorRegistry,
  handlers: ElementHandlers,
): void {
  const svg = svgElement('svg');
  svg.setAttribute('class', 'view-body');
  svg.setAttribute('width', String(panel.w));
  svg.setAttribute('height', String(Math.max(panel.h - HEADER_HEIGHT, 10)));

  const isList = view.view_type === 'list' || view.view_type === 'document' || view.view_type === 'other';
  for (const placed of placeElements(view, panel)) {
    const group = svgElement('g');
    group.setAttribute('class', 'element-mark');
    group.setAttribute('data-view-id', view.view_id);
    group.setAttribute('data-element-id', placed.elementId);

    const dot = svgElement('circle');
    dot.setAttribute('cx', String(placed.x));
    dot.setAttribute('cy', String(placed.y - HEADER_HEIGHT));
    dot.setAttribute('r', isList ? '4' : '6');
    dot.setAttribute('class', `mark-${view.view_type}`);
    group.appendChild(dot);

    const text = svgElement('text');
    text.setAttribute('x', String(placed.x + 9));
    text.setAttribute('y', String(placed.y - HEADER_HEIGHT + 4));
    text.textContent = placed.label;
    group.appendChild(text);

    group.addEventListener('contextmenu', (event) => {
      event.preventDefault();
      handlers.onContextMenu(view.view_id, placed.elementId, event);
    });
    group.addEventListener('mouseenter', () => handlers.onHover(view.view_id, placed.elementId, true));
    group.addEventListener('mouseleave', () => handlers.onHover(view.view_id, placed.elementId, false));

    svg.appendChild(group);
    anchors.set(anchorKey(view.view_id, placed.elementId), {
      panelId,
      local: { x: placed.x, y: placed.y },
    });
  }
  body.appendChild(svg);
}

export function renderDocumentPanel(body: HTMLElement, doc: DocumentPanelPayload): void {
  const container = document.createElement('div');
  container.className = 'document-text';
  const spans = [...doc.highlights].sort((a, b) => a.start - b.start);
  let cursor = 0;
  for (const span of spans) {
    if (span.start < cursor) {
      continue; // overlapping span already covered
    }
    container.appendChild(document.createTextNode(doc.text.slice(cursor, span.start)));
    const mark = document.createElement('mark');
    mark.className = 'doc-highlight';
    mark.dataset.viewId = span.view_id;
    mark.dataset.elementId = span.element_id;
    mark.textContent = doc.text.slice(span.start, span.end);
    container.appendChild(mark);
    cursor = span.end;
  }
  container.appendChild(document.createTextNode(doc.text.slice(cursor)));
  body.appendChild(container);
}
