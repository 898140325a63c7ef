// HTTP client for the workspace service. Mutation commands run through a
// FIFO promise chain so the server's command log order matches user intent.

import type {
  LinkSetPayload,
  SearchOrigin,
  ViewPayload,
  WorkspaceSnapshot,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export interface WorkspaceApi {
  getViews(): Promise<ViewPayload[]>;
  getWorkspace(): Promise<WorkspaceSnapshot>;
  search(origin: SearchOrigin): Promise<LinkSetPayload>;
  command(op: string, args: Record<string, unknown>): Promise<Record<string, unknown>>;
  patchRelationshipView(rvId: string, body: Record<string, unknown>): Promise<void>;
  getDocuments(rvId: string, relationshipId: string): Promise<unknown>;
}

export class ApiClient implements WorkspaceApi {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(private base: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const envelope = payload as { code?: string; message?: string };
      throw new ApiError(envelope.code ?? 'InternalError', envelope.message ?? response.statusText, response.status);
    }
    return payload as T;
  }

  async getViews(): Promise<ViewPayload[]> {
    const snapshot = await this.getWorkspace();
    const body = await this.request<{ views: ViewPayload[] }>('GET', `/datasets/${snapshot.dataset_id}/views`);
    return body.views;
  }

  getWorkspace(): Promise<WorkspaceSnapshot> {
    return this.request('GET', '/workspace');
  }

  search(origin: SearchOrigin): Promise<LinkSetPayload> {
    return this.request('POST', '/search', { origin });
  }

  command(op: string, args: Record<string, unknown>): Promise<Record<string, unknown>> {
    // at most one in-flight mutation: later commands wait for earlier ones
    const next = this.queue.then(() =>
      this.request<{ result: Record<string, unknown> }>('POST', '/workspace/commands', { op, args }),
    );
    this.queue = next.catch(() => undefined);
    return next.then((body) => body.result);
  }

  async patchRelationshipView(rvId: string, body: Record<string, unknown>): Promise<void> {
    await this.request('PATCH', `/relationship-views/${rvId}`, body);
  }

  getDocuments(rvId: string, relationshipId: string): Promise<unknown> {
    return this.request('GET', `/relationship-views/${rvId}/relationships/${relationshipId}/documents`);
  }
}
