import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  buildThumbnails,
  ContextPanelController,
  highlightForThumbnail,
} from "../src/contextPanel.js";
import { makeContext, makeModel, MockServer } from "./fixtures.js";

const SUBTOPICS = makeModel().subtopics;

describe("buildThumbnails", () => {
  it("shows one thumbnail per subtopic present in the block", () => {
    const context = makeContext(["a1", "a2", "b2"]);
    const thumbs = buildThumbnails(context, SUBTOPICS);
    expect(thumbs.map((t) => t.subtopicId)).toEqual(["0.0", "2.1"]);
    expect(thumbs[0].inContextCount).toBe(2);
    expect(thumbs[1].inContextCount).toBe(1);
  });

  it("clicking a thumbnail highlights the whole subtopic", () => {
    const thumbs = buildThumbnails(makeContext(["b2"]), SUBTOPICS);
    expect(highlightForThumbnail(thumbs[0])).toEqual(new Set(["b2", "b3"]));
  });
});

describe("ContextPanelController", () => {
  function controller(server: MockServer, itemIds: string[] = ["b1"]) {
    const api = new ApiClient("", server.fetch);
    const changes: string[][] = [];
    const panel = new ContextPanelController(
      api,
      "s-0001",
      makeContext(itemIds),
      SUBTOPICS,
      (ctx) => changes.push(ctx.entries.map((e) => e.item_id)),
    );
    return { panel, changes };
  }

  it("dropping a thumbnail posts the exact add_subtopics payload", async () => {
    const server = new MockServer({
      "POST /sessions/s-0001/context": () => ({ body: makeContext(["b1", "b2", "b3"]) }),
    });
    const { panel } = controller(server);
    const result = await panel.addSubtopic("2.1");
    expect(result.ok).toBe(true);
    const posts = server.sent("POST");
    expect(posts).toHaveLength(1);
    expect(posts[0].url).toBe("/sessions/s-0001/context");
    expect(posts[0].body).toEqual({ add_subtopics: ["2.1"], remove_subtopics: [] });
    expect(panel.context.entries.map((e) => e.item_id)).toEqual(["b1", "b2", "b3"]);
  });

  it("remove affordance posts remove_subtopics", async () => {
    const server = new MockServer({
      "POST /sessions/s-0001/context": () => ({ body: makeContext([]) }),
    });
    const { panel } = controller(server);
    await panel.removeSubtopic("2.0");
    expect(server.sent("POST")[0].body).toEqual({ add_subtopics: [], remove_subtopics: ["2.0"] });
  });

  it("applies the edit optimistically before the server answers", async () => {
    const server = new MockServer({
      "POST /sessions/s-0001/context": () => ({ body: makeContext(["b1", "b2", "b3"]) }),
    });
    const { panel, changes } = controller(server);
    await panel.addSubtopic("2.1");
    // first change is the optimistic preview, second the server truth
    expect(changes[0]).toEqual(["b1", "b2", "b3"]);
    expect(changes[1]).toEqual(["b1", "b2", "b3"]);
  });

  it("rolls back to the pre-drag state on a rejected edit", async () => {
    const server = new MockServer({
      "POST /sessions/s-0001/context": () => ({
        status: 400,
        body: { error: "unknown subtopic ids: 9.9" },
      }),
    });
    const { panel, changes } = controller(server);
    const before = panel.context;
    const result = await panel.addSubtopic("2.1");
    expect(result.ok).toBe(false);
    expect(result.toast).toContain("unknown subtopic");
    expect(panel.context).toEqual(before);
    expect(changes[changes.length - 1]).toEqual(before.entries.map((e) => e.item_id));
  });
});
