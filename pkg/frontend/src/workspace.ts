// Workspace controller: renders the snapshot, routes every interaction into
// session commands, and redraws curved links from /search results. The UI
// holds no authoritative state; after each command the scene is rebuilt from
// the server's answer.

import { ApiError, WorkspaceApi } from './api.js';
import { HEADER_HEIGHT, Point, glyphAnchor, layoutToLocal } from './geometry.js';
import { glyphMode, renderRelationshipView } from './glyphs.js';
import { CurveSpec, LinkOverlay } from './links.js';
import { buildPanel } from './panels.js';
import {
  anchorKey,
  AnchorRegistry,
  renderDataView,
  renderDocumentPanel,
} from './views.js';
import type {
  ElementRefPayload,
  LinkSetPayload,
  SearchOrigin,
  ViewPayload,
  WorkspaceSnapshot,
} from './types.js';

export class WorkspaceController {
  snapshot: WorkspaceSnapshot | null = null;
  views = new Map<string, ViewPayload>();
  private anchors: AnchorRegistry = new Map();
  private overlay: LinkOverlay | null = null;
  private panelsHost: HTMLElement | null = null;
  private hiddenPanels = new Set<string>();
  private stickyLinks: { origin: SearchOrigin; links: LinkSetPayload } | null = null;
  private hoverLinks: { origin: SearchOrigin; links: LinkSetPayload } | null = null;
  private pendingManualSource: ElementRefPayload | null = null;
  private menu: HTMLElement | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    private api: WorkspaceApi,
  ) {}

  async init(): Promise<void> {
    try {
      this.snapshot = await this.api.getWorkspace();
      for (const view of await this.api.getViews()) {
        this.views.set(view.view_id, view);
      }
    } catch (error) {
      this.renderEmptyState(error);
      return;
    }
    this.render();
  }

  /** Serialize event-triggered async work so tests (and the command log)
   * observe a stable order. */
  private track(work: () => Promise<void>): void {
    this.pending = this.pending.then(work).catch((error) => this.showError(error));
  }

  whenIdle(): Promise<void> {
    return this.pending;
  }

  private async refresh(): Promise<void> {
    this.snapshot = await this.api.getWorkspace();
    this.render();
  }

  // ------------------------------------------------------------ rendering

  render(): void {
    if (!this.snapshot) {
      return;
    }
    this.closeMenu();
    this.root.textContent = '';
    this.anchors.clear();

    this.panelsHost = document.createElement('div');
    this.panelsHost.id = 'panels';
    this.root.appendChild(this.panelsHost);

    const handlers = {
      onDragEnd: (panelId: string, dx: number, dy: number) => this.finishDrag(panelId, dx, dy),
      onDragMove: (panelId: string, dx: number, dy: number) => this.previewDrag(panelId, dx, dy),
      onPinToggle: (panelId: string, pinned: boolean) =>
        this.track(async () => {
          await this.api.command('pin', { panel_id: panelId, on: pinned });
          await this.refresh();
        }),
      onClose: (panelId: string) => {
        this.hiddenPanels.add(panelId);
        this.render();
      },
      onResizeEnd: (panelId: string, w: number, h: number) =>
        this.track(async () => {
          await this.api.command('resize', { panel_id: panelId, w, h });
          await this.refresh();
        }),
    };

    for (const panelId of Object.keys(this.snapshot.panels).sort()) {
      if (this.hiddenPanels.has(panelId)) {
        continue;
      }
      const panel = this.snapshot.panels[panelId];
      const { element, body } = buildPanel(panelId, panel, this.panelTitle(panelId), handlers);
      this.panelsHost.appendChild(element);
      this.renderPanelBody(panelId, body);
    }

    this.overlay = new LinkOverlay(this.root);
    this.redrawLinks();
  }

  private panelTitle(panelId: string): string {
    const view = this.views.get(panelId);
    if (view) {
      return view.label;
    }
    const rv = this.snapshot?.relationship_views[panelId];
    if (rv) {
      return `Relationships: ${rv.source_views.join(' + ')}`;
    }
    const doc = this.snapshot?.document_panels.find((d) => d.panel_id === panelId);
    return doc ? doc.title : panelId;
  }

  private renderPanelBody(panelId: string, body: HTMLElement): void {
    const snapshot = this.snapshot!;
    const panel = snapshot.panels[panelId];
    try {
      if (panel.kind === 'view') {
        const view = this.views.get(panelId);
        if (!view) {
          throw new Error(`no data for view ${panelId}`);
        }
        renderDataView(body, view, panel, panelId, this.anchors, {
          onContextMenu: (viewId, elementId, event) => this.openElementMenu(viewId, elementId, event),
          onHover: (viewId, elementId, entering) => this.hoverElement(viewId, elementId, entering),
        });
      } else if (panel.kind === 'relationship_view') {
        const rv = snapshot.relationship_views[panelId];
        if (!rv) {
          throw new Error(`no data for relationship-view ${panelId}`);
        }
        renderRelationshipView(body, rv, panel, {
          onHover: (rvId, rid, entering) => this.hoverGlyph(rvId, rid, entering),
          onClick: (rvId, rid) => this.clickGlyph(rvId, rid),
          onContextMenu: (rvId, rid, event) => this.openGlyphMenu(rvId, rid, event),
        });
        if (rv.level === 'multi_group') {
          body.appendChild(this.buildThresholdSlider(rv.rv_id, rv.threshold ?? 0.4));
        }
      } else {
        const doc = snapshot.document_panels.find((d) => d.panel_id === panelId);
        if (!doc) {
          throw new Error(`no data for document panel ${panelId}`);
        }
        renderDocumentPanel(body, doc);
      }
    } catch (error) {
      const card = document.createElement('div');
      card.className = 'error-card';
      card.textContent = `failed to render: ${(error as Error).message}`;
      body.appendChild(card);
    }
  }

  private buildThresholdSlider(rvId: string, value: number): HTMLElement {
    const wrap = document.createElement('div');
    wrap.className = 'threshold-control';
    const label = document.createElement('label');
    label.textContent = `threshold ${value.toFixed(2)}`;
    const slider = document.createElement('input');
    slider.type = 'range';
    slider.min = '0';
    slider.max = '1';
    slider.step = '0.05';
    slider.value = String(value);
    slider.addEventListener('change', () =>
      this.track(async () => {
        await this.api.patchRelationshipView(rvId, { threshold: Number(slider.value) });
        await this.refresh();
      }),
    );
    wrap.appendChild(label);
    wrap.appendChild(slider);
    return wrap;
  }

  private renderEmptyState(error: unknown): void {
    this.root.textContent = '';
    const card = document.createElement('div');
    card.className = 'empty-state';
    card.textContent =
      error instanceof ApiError && error.code === 'UnknownDataset'
        ? 'No dataset loaded. POST a bundle to /datasets or start the server with --bundle.'
        : `failed to load workspace: ${error}`;
    this.root.appendChild(card);
  }

  // ------------------------------------------------------------ anchors & links

  elementAnchor(ref: ElementRefPayload): Point | null {
    const entry = this.anchors.get(anchorKey(ref.view_id, ref.element_id));
    if (!entry || !this.snapshot) {
      return null;
    }
    const panel = this.snapshot.panels[entry.panelId];
    return panel ? { x: panel.x + entry.local.x, y: panel.y + entry.local.y } : null;
  }

  glyphPageAnchor(rvId: string, rid: string, targetView?: string): Point | null {
    const snapshot = this.snapshot;
    if (!snapshot) {
      return null;
    }
    const rv = snapshot.relationship_views[rvId];
    const panel = snapshot.panels[rvId];
    if (!rv || !panel || !(rid in rv.layout.coordinates)) {
      return null;
    }
    const local = layoutToLocal(panel, rv.layout.coordinates[rid]);
    const svgCenter = { x: local.x, y: local.y - HEADER_HEIGHT };
    const anchor = glyphAnchor(
      svgCenter,
      glyphMode(rv, rid),
      rv.layout.bar_summaries[rid] ?? [],
      rv.layout.bar_reference_max,
      targetView,
    );
    return { x: panel.x + anchor.x, y: panel.y + HEADER_HEIGHT + anchor.y };
  }

  private curvesFor(origin: SearchOrigin, links: LinkSetPayload): CurveSpec[] {
    const curves: CurveSpec[] = [];
    const elementTargets = [...links.same_view_elements, ...links.cross_view_elements];

    if ('rv_id' in origin) {
      for (const item of elementTargets) {
        const from = this.glyphPageAnchor(origin.rv_id, origin.relationship_id, item.view_id);
        const to = this.elementAnchor(item);
        if (from && to) {
          curves.push({ from, to, kind: item.kind });
        }
      }
      for (const related of links.related_relationships) {
        const from = this.glyphPageAnchor(origin.rv_id, origin.relationship_id);
        const to = this.glyphPageAnchor(related.rv_id, related.relationship_id);
        if (from && to) {
          curves.push({ from, to, kind: 'automatic' });
        }
      }
    } else {
      const from = this.elementAnchor(origin);
      if (from) {
        for (const item of elementTargets) {
          const to = this.elementAnchor(item);
          if (to) {
            curves.push({ from, to, kind: item.kind });
          }
        }
        for (const related of links.related_relationships) {
          const to = this.glyphPageAnchor(related.rv_id, related.relationship_id, origin.view_id);
          if (to) {
            curves.push({ from, to, kind: 'automatic' });
          }
        }
      }
    }
    return curves;
  }

  redrawLinks(): void {
    if (!this.overlay) {
      return;
    }
    const active = this.hoverLinks ?? this.stickyLinks;
    this.overlay.draw(active ? this.curvesFor(active.origin, active.links) : []);
  }

  // ------------------------------------------------------------ interactions

  private hoverGlyph(rvId: string, rid: string, entering: boolean): void {
    this.track(async () => {
      if (entering) {
        const links = await this.api.search({ rv_id: rvId, relationship_id: rid });
        this.hoverLinks = { origin: { rv_id: rvId, relationship_id: rid }, links };
      } else {
        this.hoverLinks = null;
      }
      this.redrawLinks();
    });
  }

  private hoverElement(viewId: string, elementId: string, entering: boolean): void {
    this.track(async () => {
      if (entering) {
        const links = await this.api.search({ view_id: viewId, element_id: elementId });
        this.hoverLinks = { origin: { view_id: viewId, element_id: elementId }, links };
      } else {
        this.hoverLinks = null;
      }
      this.redrawLinks();
    });
  }

  private clickGlyph(rvId: string, rid: string): void {
    this.track(async () => {
      const rv = this.snapshot?.relationship_views[rvId];
      const current = rv?.states[rid] ?? 'normal';
      const next = current === 'selected' ? 'normal' : 'selected';
      await this.api.command('set_state', { rv_id: rvId, relationship_id: rid, state: next });
      await this.refresh();
      if (next === 'selected') {
        const links = await this.api.search({ rv_id: rvId, relationship_id: rid });
        this.stickyLinks = { origin: { rv_id: rvId, relationship_id: rid }, links };
      } else {
        this.stickyLinks = null;
      }
      this.redrawLinks();
    });
  }

  private openGlyphMenu(rvId: string, rid: string, event: MouseEvent): void {
    const rv = this.snapshot?.relationship_views[rvId];
    if (!rv) {
      return;
    }
    const marked = rv.states[rid] === 'marked';
    const mode = glyphMode(rv, rid);
    this.openMenu(event, [
      {
        label: marked ? 'Unmark' : 'Mark',
        action: () => this.runCommand('set_state', { rv_id: rvId, relationship_id: rid, state: marked ? 'normal' : 'marked' }),
      },
      {
        label: mode === 'circle' ? 'Show summary' : 'Show circle',
        action: () =>
          this.runCommand('set_display_mode', {
            rv_id: rvId,
            relationship_id: rid,
            mode: mode === 'circle' ? 'summary' : 'circle',
          }),
      },
      {
        label: 'Summary for all',
        action: () => this.runCommand('set_display_mode', { rv_id: rvId, mode: 'summary' }),
      },
      {
        label: 'Circles for all',
        action: () => this.runCommand('set_display_mode', { rv_id: rvId, mode: 'circle' }),
      },
      {
        label: 'Retrieve documents',
        action: () => this.runCommand('retrieve_documents', { rv_id: rvId, relationship_id: rid }),
      },
    ]);
  }

  private openElementMenu(viewId: string, elementId: string, event: MouseEvent): void {
    const items = [];
    if (this.pendingManualSource) {
      const source = this.pendingManualSource;
      items.push({
        label: 'Create manual link to here',
        action: () => {
          this.pendingManualSource = null;
          this.runCommand('add_manual_link', {
            a: { view_id: source.view_id, element_id: source.element_id },
            b: { view_id: viewId, element_id: elementId },
          });
        },
      });
    }
    items.push({
      label: 'Start manual link from here',
      action: () => {
        this.pendingManualSource = { view_id: viewId, element_id: elementId };
      },
    });
    this.openMenu(event, items);
  }

  runCommand(op: string, args: Record<string, unknown>): void {
    this.track(async () => {
      await this.api.command(op, args);
      await this.refresh();
    });
  }

  // ------------------------------------------------------------ dragging

  private previewDrag(panelId: string, dx: number, dy: number): void {
    const panel = this.snapshot?.panels[panelId];
    const element = this.panelsHost?.querySelector<HTMLElement>(`[data-panel-id="${panelId}"]`);
    if (panel && element) {
      element.style.left = `${panel.x + dx}px`;
      element.style.top = `${panel.y + dy}px`;
    }
  }

  private finishDrag(panelId: string, dx: number, dy: number): void {
    if (dx === 0 && dy === 0) {
      return;
    }
    this.track(async () => {
      const result = (await this.api.command('drag_panel', { panel_id: panelId, dx, dy })) as {
        moved?: Record<string, [number, number]>;
      };
      // dust-and-magnet co-movement comes back from the server
      if (this.snapshot && result.moved) {
        for (const [id, [x, y]] of Object.entries(result.moved)) {
          const panel = this.snapshot.panels[id];
          if (panel) {
            panel.x = x;
            panel.y = y;
          }
        }
      }
      this.render();
    });
  }

  // ------------------------------------------------------------ menu & toasts

  private openMenu(event: MouseEvent, items: { label: string; action: () => void }[]): void {
    this.closeMenu();
    const menu = document.createElement('ul');
    menu.className = 'context-menu';
    menu.style.left = `${event.clientX}px`;
    menu.style.top = `${event.clientY}px`;
    for (const item of items) {
      const li = document.createElement('li');
      li.textContent = item.label;
      li.addEventListener('click', () => {
        this.closeMenu();
        item.action();
      });
      menu.appendChild(li);
    }
    this.root.appendChild(menu);
    this.menu = menu;
  }

  private closeMenu(): void {
    this.menu?.remove();
    this.menu = null;
  }

  private showError(error: unknown): void {
    const toast = document.createElement('div');
    toast.className = 'toast';
    toast.textContent =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    this.root.appendChild(toast);
    setTimeout(() => toast.remove(), 4000);
    if (error instanceof ApiError) {
      // never keep optimistic state on failure
      void this.refresh().catch(() => undefined);
    }
  }
}
