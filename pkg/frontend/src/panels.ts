// Panel chrome: header with pin toggle and close button, body, and the
// resize handle in the bottom-right corner. Drag starts on the header and is
// ignored entirely for pinned panels.

import type { PanelPayload } from './types.js';

export interface PanelHandlers {
  onDragEnd(panelId: string, dx: number, dy: number): void;
  onDragMove(panelId: string, dx: number, dy: number): void;
  onPinToggle(panelId: string, pinned: boolean): void;
  onClose(panelId: string): void;
  onResizeEnd(panelId: string, w: number, h: number): void;
}

export function buildPanel(
  panelId: string,
  panel: PanelPayload,
  title: string,
  handlers: PanelHandlers,
): { element: HTMLElement; body: HTMLElement } {
  const element = document.createElement('div');
  element.className = `panel panel-${panel.kind}${panel.pinned ? ' pinned' : ''}`;
  element.dataset.panelId = panelId;
  element.style.left = `${panel.x}px`;
  element.style.top = `${panel.y}px`;
  element.style.width = `${panel.w}px`;
  element.style.height = `${panel.h}px`;

  const header = document.createElement('div');
  header.className = 'panel-header';

  const titleSpan = document.createElement('span');
  titleSpan.className = 'panel-title';
  titleSpan.textContent = title;
  header.appendChild(titleSpan);

  const pin = document.createElement('button');
  pin.className = `pin-button${panel.pinned ? ' on' : ''}`;
  pin.title = panel.pinned ? 'Unpin' : 'Pin';
  pin.textContent = '⊙';
  pin.addEventListener('click', (event) => {
    event.stopPropagation();
    handlers.onPinToggle(panelId, !panel.pinned);
  });
  header.appendChild(pin);

  const close = document.createElement('button');
  close.className = 'close-button';
  close.textContent = '×';
  close.addEventListener('click', (event) => {
    event.stopPropagation();
    handlers.onClose(panelId);
  });
  header.appendChild(close);

  element.appendChild(header);

  const body = document.createElement('div');
  body.className = 'panel-body';
  element.appendChild(body);

  const handle = document.createElement('div');
  handle.className = 'resize-handle';
  element.appendChild(handle);

  header.addEventListener('mousedown', (event) => {
    if ((event.target as HTMLElement).tagName === 'BUTTON' || panel.pinned) {
      return;
    }
    event.preventDefault();
    const startX = event.clientX;
    const startY = event.clientY;
    const onMove = (move: MouseEvent) => {
      handlers.onDragMove(panelId, move.clientX - startX, move.clientY - startY);
    };
    const onUp = (up: MouseEvent) => {
      document.removeEventListener('mousemove', onMove);
      document.removeEventListener('mouseup', onUp);
      handlers.onDragEnd(panelId, up.clientX - startX, up.clientY - startY);
    };
    document.addEventListener('mousemove', onMove);
    document.addEventListener('mouseup', onUp);
  });

  handle.addEventListener('mousedown', (event) => {
    event.preventDefault();
    event.stopPropagation();
    const startX = event.clientX;
    const startY = event.clientY;
    const onUp = (up: MouseEvent) => {
      document.removeEventListener('mouseup', onUp);
      handlers.onResizeEnd(
        panelId,
        Math.max(panel.w + up.clientX - startX, 40),
        Math.max(panel.h + up.clientY - startY, 40),
      );
    };
    document.addEventListener('mouseup', onUp);
  });

  return { element, body };
}
