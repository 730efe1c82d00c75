/**
 * Data context panel: subtopic thumbnails for the current context block,
 * click-to-highlight and drag-and-drop context editing.
 *
 * Edits are optimistic: the local context updates immediately, the server
 * response becomes the source of truth, and a rejected edit rolls the panel
 * back to its pre-drag state and surfaces a toast message. All mutations go
 * through the context endpoints; the panel never rewrites server state
 * locally beyond the optimistic preview.
 */

import { ApiClient, ApiError } from "./api.js";
import type { ContextView, SubtopicView } from "./types.js";

export const DRAG_MIME = "application/x-ctxscope-subtopic";

export interface Thumbnail {
  subtopicId: string;
  label: string;
  topicId: number;
  inContextCount: number;
  memberIds: string[];
  isNoiseBucket: boolean;
}

/** One thumbnail per subtopic that has at least one item in the block. */
export function buildThumbnails(context: ContextView, subtopics: SubtopicView[]): Thumbnail[] {
  const counts = new Map<string, number>();
  for (const entry of context.entries) {
    if (entry.subtopic_id !== null) {
      counts.set(entry.subtopic_id, (counts.get(entry.subtopic_id) ?? 0) + 1);
    }
  }
  return subtopics
    .filter((s) => counts.has(s.id))
    .map((s) => ({
      subtopicId: s.id,
      label: s.label,
      topicId: s.topic_id,
      inContextCount: counts.get(s.id)!,
      memberIds: s.member_ids,
      isNoiseBucket: s.is_noise_bucket,
    }))
    .sort((a, b) => b.inContextCount - a.inContextCount || a.subtopicId.localeCompare(b.subtopicId));
}

/** Clicking a thumbnail highlights the whole subtopic in the treemap. */
export function highlightForThumbnail(thumbnail: Thumbnail): Set<string> {
  return new Set(thumbnail.memberIds);
}

export interface EditResult {
  ok: boolean;
  toast: string | null;
}

export class ContextPanelController {
  context: ContextView;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    context: ContextView,
    private subtopics: SubtopicView[],
    private onChange: (context: ContextView) => void = () => {},
  ) {
    this.context = context;
  }

  thumbnails(): Thumbnail[] {
    return buildThumbnails(this.context, this.subtopics);
  }

  /** Drop of a dragged thumbnail onto the chat composer. */
  async addSubtopic(subtopicId: string): Promise<EditResult> {
    return this.edit({ add_subtopics: [subtopicId], remove_subtopics: [] });
  }

  /** Remove affordance on a thumbnail. */
  async removeSubtopic(subtopicId: string): Promise<EditResult> {
    return this.edit({ add_subtopics: [], remove_subtopics: [subtopicId] });
  }

  private optimistic(edit: { add_subtopics: string[]; remove_subtopics: string[] }): ContextView {
    const removed = new Set(
      this.subtopics
        .filter((s) => edit.remove_subtopics.includes(s.id))
        .flatMap((s) => s.member_ids),
    );
    const entries = this.context.entries.filter((e) => !removed.has(e.item_id));
    const present = new Set(entries.map((e) => e.item_id));
    for (const sid of edit.add_subtopics) {
      const subtopic = this.subtopics.find((s) => s.id === sid);
      if (!subtopic) continue;
      for (const itemId of subtopic.member_ids) {
        if (!present.has(itemId)) {
          entries.push({
            item_id: itemId,
            origin: "user_added",
            subtopic_id: subtopic.id,
            topic_id: subtopic.topic_id,
          });
          present.add(itemId);
        }
      }
    }
    return { ...this.context, entries };
  }

  private async edit(body: { add_subtopics: string[]; remove_subtopics: string[] }): Promise<EditResult> {
    const snapshot = this.context;
    this.context = this.optimistic(body);
    this.onChange(this.context);
    try {
      this.context = await this.api.editContext(this.sessionId, body);
      this.onChange(this.context);
      return { ok: true, toast: null };
    } catch (err) {
      this.context = snapshot; // rollback to the pre-drag state
      this.onChange(this.context);
      const message = err instanceof ApiError ? err.message : "context edit failed";
      return { ok: false, toast: message };
    }
  }
}
