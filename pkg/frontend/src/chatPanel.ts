/**
 * Chat panel controller: turn list, citation chips, per-turn highlight.
 *
 * One message may be in flight per session (the composer is disabled while
 * awaiting a turn). After every completed turn the treemap highlight is
 * replaced with the session's current context, and citation chips open the
 * full file view fetched from the server.
 */

import { ApiClient, ApiError } from "./api.js";
import type { FileView, TurnView } from "./types.js";

export interface SendOutcome {
  ok: boolean;
  /** Draft to keep in the composer (empty when the send succeeded). */
  draft: string;
  error: string | null;
}

export class ChatController {
  sessionId: string | null = null;
  turns: TurnView[] = [];
  highlight: Set<string> = new Set();
  inFlight = false;
  openFile: FileView | null = null;
  expandedSummaries: Set<string> = new Set();

  constructor(
    private api: ApiClient,
    private onChange: () => void = () => {},
  ) {}

  async init(): Promise<string> {
    this.sessionId = await this.api.createSession();
    this.onChange();
    return this.sessionId;
  }

  composerEnabled(): boolean {
    return this.sessionId !== null && !this.inFlight;
  }

  async send(text: string): Promise<SendOutcome> {
    if (!this.sessionId) {
      return { ok: false, draft: text, error: "no active session" };
    }
    if (this.inFlight) {
      return { ok: false, draft: text, error: "a message is already in flight" };
    }
    if (!text.trim()) {
      return { ok: false, draft: text, error: "enter a prompt" };
    }
    this.inFlight = true;
    this.onChange();
    try {
      const turn = await this.api.sendMessage(this.sessionId, text);
      this.turns.push(turn);
      const context = await this.api.getContext(this.sessionId);
      // Replace, never merge: the highlight is this turn's context.
      this.highlight = new Set(context.entries.map((e) => e.item_id));
      return { ok: true, draft: "", error: null };
    } catch (err) {
      const message = err instanceof ApiError ? err.message : "send failed";
      return { ok: false, draft: text, error: message };
    } finally {
      this.inFlight = false;
      this.onChange();
    }
  }

  /** Citation chip click: fetch and open the file view for that item. */
  async openCitation(itemId: string): Promise<FileView> {
    const view = await this.api.getItem(itemId);
    this.openFile = view;
    this.onChange();
    return view;
  }

  closeFileView(): void {
    this.openFile = null;
    this.onChange();
  }

  toggleSummary(subtopicId: string): boolean {
    if (this.expandedSummaries.has(subtopicId)) {
      this.expandedSummaries.delete(subtopicId);
    } else {
      this.expandedSummaries.add(subtopicId);
    }
    this.onChange();
    return this.expandedSummaries.has(subtopicId);
  }
}
