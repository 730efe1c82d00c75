/** Shared fixtures: a small consistent model and a scriptable mock server. */

import type { FetchLike } from "../src/api.js";
import type { ContextView, FileView, LayoutView, ModelView, TurnView } from "../src/types.js";

export function makeLayout(expanded: number | null = null): LayoutView {
  const place = (id: string, topic: number, sub: string, x: number, y: number) => ({
    item_id: id,
    topic_id: topic,
    subtopic_id: sub,
    row: 0,
    col: 0,
    x,
    y,
    radius: 0.01,
  });
  return {
    cells: [
      { topic_id: 0, x: 0, y: 0, w: 0.5, h: 1 },
      { topic_id: 2, x: 0.5, y: 0, w: 0.5, h: 1 },
    ],
    placements: [
      place("a1", 0, "0.0", 0.1, 0.2),
      place("a2", 0, "0.0", 0.2, 0.2),
      place("a3", 0, "0.1", 0.3, 0.6),
      place("b1", 2, "2.0", 0.6, 0.2),
      place("b2", 2, "2.1", 0.7, 0.5),
      place("b3", 2, "2.1", 0.8, 0.5),
    ],
    expanded_topic: expanded,
  };
}

export function makeModel(): ModelView {
  return {
    schema_version: 1,
    corpus_fingerprint: "sha256:test",
    topics: [
      { id: 0, label: "Design", size: 3, member_ids: ["a1", "a2", "a3"] },
      { id: 2, label: "Marketing", size: 3, member_ids: ["b1", "b2", "b3"] },
    ],
    subtopics: [
      { id: "0.0", label: "Wireframes", member_ids: ["a1", "a2"], is_noise_bucket: false, topic_id: 0 },
      { id: "0.1", label: "Other", member_ids: ["a3"], is_noise_bucket: true, topic_id: 0 },
      { id: "2.0", label: "Launch", member_ids: ["b1"], is_noise_bucket: false, topic_id: 2 },
      { id: "2.1", label: "Brand", member_ids: ["b2", "b3"], is_noise_bucket: false, topic_id: 2 },
    ],
    layout: makeLayout(),
  };
}

export function makeContext(itemIds: string[], sessionId = "s-0001"): ContextView {
  const model = makeModel();
  const subtopicOf = new Map(model.subtopics.flatMap((s) => s.member_ids.map((m) => [m, s] as const)));
  return {
    session_id: sessionId,
    created_from_prompt: "q",
    entries: itemIds.map((id) => ({
      item_id: id,
      origin: "retrieved",
      subtopic_id: subtopicOf.get(id)?.id ?? null,
      topic_id: subtopicOf.get(id)?.topic_id ?? null,
    })),
  };
}

export function makeTurn(overrides: Partial<TurnView> = {}): TurnView {
  return {
    prompt: "q",
    response: "answer [b1]",
    citations: ["b1"],
    retrieved_ids: ["b1", "b2"],
    summaries: [
      {
        subtopic_id: "2.1",
        summary: "brand notes",
        relevance_explanation: "Contains the prompt terms: brand.",
        covered_item_ids: ["b2"],
      },
    ],
    ...overrides,
  };
}

export function makeFileView(id: string): FileView {
  return {
    id,
    kind: "email",
    title: "update",
    content: "hello there",
    created_at: "2024-02-02",
    participants: [
      { id: "emp-00001", full_name: "Aisha Patel", title: "Engineer", department: "SoftwareDev" },
      { id: "emp-00002", full_name: "Aisha Patel", title: "Designer", department: "ProductDesign" },
    ],
  };
}

type RouteResult = { status?: number; body: unknown };
type Handler = (url: string, init?: RequestInit) => RouteResult | Promise<RouteResult>;

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

/** Scriptable fetch double keyed by "METHOD path"; records every request. */
export class MockServer {
  requests: RecordedRequest[] = [];

  constructor(private routes: Record<string, Handler>) {}

  fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = typeof init?.body === "string" ? JSON.parse(init.body) : undefined;
    this.requests.push({ url, method, body });
    const handler = this.routes[`${method} ${url}`] ?? this.routes[`${method} *`];
    if (!handler) {
      return new Response(JSON.stringify({ error: `no route for ${method} ${url}` }), { status: 404 });
    }
    const result = await handler(url, init);
    return new Response(JSON.stringify(result.body), {
      status: result.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };

  sent(method: string): RecordedRequest[] {
    return this.requests.filter((r) => r.method === method);
  }
}
