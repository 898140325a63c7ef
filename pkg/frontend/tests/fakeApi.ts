// In-memory stand-in for the workspace service, seeded with payloads
// captured from the real engine. Commands mutate the held snapshot the same
// way the server would, so re-fetch-and-render stays honest.

import type { WorkspaceApi } from '../src/api.js';
import type {
  DisplayMode,
  GlyphState,
  LinkSetPayload,
  SearchOrigin,
  ViewPayload,
  WorkspaceSnapshot,
} from '../src/types.js';

import fixture from './fixtures/golden_workspace.json';

export interface RecordedCommand {
  op: string;
  args: Record<string, unknown>;
}

export class FakeApi implements WorkspaceApi {
  snapshot: WorkspaceSnapshot = structuredClone(fixture.snapshot) as WorkspaceSnapshot;
  commands: RecordedCommand[] = [];
  searchCalls: SearchOrigin[] = [];
  patches: { rvId: string; body: Record<string, unknown> }[] = [];

  async getViews(): Promise<ViewPayload[]> {
    return structuredClone(fixture.views) as ViewPayload[];
  }

  async getWorkspace(): Promise<WorkspaceSnapshot> {
    return structuredClone(this.snapshot);
  }

  async search(origin: SearchOrigin): Promise<LinkSetPayload> {
    this.searchCalls.push(origin);
    const key =
      'rv_id' in origin
        ? `rel:${origin.rv_id}:${origin.relationship_id}`
        : `el:${origin.view_id}:${origin.element_id}`;
    const canned = (fixture.searches as Record<string, LinkSetPayload>)[key];
    if (!canned) {
      throw new Error(`no canned search for ${key}`);
    }
    return structuredClone(canned);
  }

  async command(op: string, args: Record<string, unknown>): Promise<Record<string, unknown>> {
    this.commands.push({ op, args });
    if (op === 'set_state') {
      const rv = this.snapshot.relationship_views[args.rv_id as string];
      const rid = args.relationship_id as string;
      const state = args.state as GlyphState;
      if (state === 'normal') {
        delete rv.states[rid];
      } else {
        rv.states[rid] = state;
      }
      return {};
    }
    if (op === 'set_display_mode') {
      const rv = this.snapshot.relationship_views[args.rv_id as string];
      const mode = args.mode as DisplayMode;
      if (args.relationship_id) {
        rv.display_modes[args.relationship_id as string] = mode;
      } else {
        rv.display_mode_default = mode;
        rv.display_modes = {};
      }
      return {};
    }
    if (op === 'drag_panel') {
      const panelId = args.panel_id as string;
      const dx = args.dx as number;
      const dy = args.dy as number;
      const ids =
        this.snapshot.panels[panelId].kind === 'relationship_view'
          ? (fixture.drag_moves as string[])
          : [panelId];
      const moved: Record<string, [number, number]> = {};
      for (const id of ids) {
        const panel = this.snapshot.panels[id];
        panel.x += dx;
        panel.y += dy;
        moved[id] = [panel.x, panel.y];
      }
      return { moved };
    }
    if (op === 'pin') {
      this.snapshot.panels[args.panel_id as string].pinned = args.on as boolean;
      return {};
    }
    if (op === 'resize') {
      const panel = this.snapshot.panels[args.panel_id as string];
      panel.w = args.w as number;
      panel.h = args.h as number;
      return {};
    }
    return {};
  }

  async patchRelationshipView(rvId: string, body: Record<string, unknown>): Promise<void> {
    this.patches.push({ rvId, body });
  }

  async getDocuments(): Promise<unknown> {
    return { documents: [] };
  }
}
