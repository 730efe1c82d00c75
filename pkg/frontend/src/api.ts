/** Typed client for the ctxscope service; the only write path to the server. */

import type { ContextView, FileView, LayoutView, ModelView, TurnView } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export interface ContextEdit {
  add_subtopics: string[];
  remove_subtopics: string[];
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      throw new ApiError(resp.status, (body as { error?: string }).error ?? `HTTP ${resp.status}`);
    }
    return body as T;
  }

  getModel(): Promise<ModelView> {
    return this.request("/model");
  }

  getLayout(expandedTopic: number | null): Promise<LayoutView> {
    const query = expandedTopic === null ? "" : `?expanded=${expandedTopic}`;
    return this.request(`/model/layout${query}`);
  }

  getItem(itemId: string): Promise<FileView> {
    return this.request(`/items/${itemId}`);
  }

  async createSession(): Promise<string> {
    const body = await this.request<{ session_id: string }>("/sessions", { method: "POST" });
    return body.session_id;
  }

  sendMessage(sessionId: string, text: string): Promise<TurnView> {
    return this.request(`/sessions/${sessionId}/messages`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  getContext(sessionId: string): Promise<ContextView> {
    return this.request(`/sessions/${sessionId}/context`);
  }

  editContext(sessionId: string, edit: ContextEdit): Promise<ContextView> {
    return this.request(`/sessions/${sessionId}/context`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(edit),
    });
  }
}
