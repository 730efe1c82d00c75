/**
 * Browser bootstrap: wires the treemap, chat and data context panels to the
 * DOM. All state flows one way: server -> controllers -> render.
 */

import { ApiClient } from "./api.js";
import { ChatController } from "./chatPanel.js";
import { ContextPanelController, DRAG_MIME, highlightForThumbnail } from "./contextPanel.js";
import { buildScene, renderSvg, SceneError } from "./treemap.js";
import type { LayoutView, ModelView } from "./types.js";
import { initialViewState, replaceHighlight, toggleExpanded, toggleFileList } from "./viewstate.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function escapeHtml(text: string): string {
  const div = document.createElement("div");
  div.textContent = text;
  return div.innerHTML;
}

function toast(message: string): void {
  const box = el<HTMLDivElement>("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  let state = initialViewState();
  let model: ModelView;
  let layout: LayoutView;
  try {
    model = await api.getModel();
    layout = model.layout;
  } catch (err) {
    el("banner").textContent = `Cannot load the model bundle: ${String(err)}`;
    el("banner").classList.add("visible");
    return;
  }

  const chat = new ChatController(api, render);
  await chat.init();
  state.activeSession = chat.sessionId;
  let contextPanel: ContextPanelController | null = null;

  function renderTreemap(): void {
    const host = el<HTMLDivElement>("treemap");
    try {
      const scene = buildScene(model, layout, state.highlight, host.clientWidth || 900, 620);
      host.innerHTML = renderSvg(scene);
    } catch (err) {
      if (err instanceof SceneError) {
        el("banner").textContent = `Layout/bundle mismatch: ${err.message}`;
        el("banner").classList.add("visible");
        return;
      }
      throw err;
    }
    if (state.fileListTopic !== null) {
      renderFileList(state.fileListTopic);
    }
  }

  function renderFileList(topicId: number): void {
    const topic = model.topics.find((t) => t.id === topicId);
    if (!topic) return;
    const host = el<HTMLDivElement>("filelist");
    const rows = topic.member_ids
      .map((id) => `<li><button class="file-link" data-item="${id}">${id}</button></li>`)
      .join("");
    host.innerHTML = `<h3>${escapeHtml(topic.label)} (file view)</h3><ul>${rows}</ul>`;
    host.classList.add("visible");
  }

  function renderChat(): void {
    const list = el<HTMLDivElement>("turns");
    list.innerHTML = chat.turns
      .map((turn, i) => {
        const chips = turn.citations
          .map((c) => `<button class="chip" data-item="${c}">${c}</button>`)
          .join(" ");
        const summaries = turn.summaries
          .map((s) => {
            const open = chat.expandedSummaries.has(`${i}:${s.subtopic_id}`);
            const body = open
              ? `<div class="summary-body">${escapeHtml(s.summary)}<br/><em>${escapeHtml(
                  s.relevance_explanation,
                )}</em></div>`
              : "";
            return (
              `<div class="summary-card"><button class="summary-toggle" data-key="${i}:${s.subtopic_id}">` +
              `${s.subtopic_id} · ${s.covered_item_ids.length} items</button>${body}</div>`
            );
          })
          .join("");
        return (
          `<div class="turn"><div class="prompt">${escapeHtml(turn.prompt)}</div>` +
          `<div class="response">${escapeHtml(turn.response)}</div>` +
          `<div class="chips">${chips}</div><div class="summaries">${summaries}</div></div>`
        );
      })
      .join("");
    el<HTMLButtonElement>("send").disabled = !chat.composerEnabled();
  }

  function renderContextPanel(): void {
    const host = el<HTMLDivElement>("thumbnails");
    if (!contextPanel) {
      host.innerHTML = "<p class=\"hint\">Send a prompt to retrieve context.</p>";
      return;
    }
    host.innerHTML = contextPanel
      .thumbnails()
      .map(
        (t) =>
          `<div class="thumbnail" draggable="true" data-subtopic="${t.subtopicId}">` +
          `<span class="thumb-label">${escapeHtml(t.label)}</span>` +
          `<span class="thumb-count">${t.inContextCount} in context</span>` +
          `<button class="thumb-remove" data-subtopic="${t.subtopicId}" title="remove from context">×</button>` +
          `</div>`,
      )
      .join("");
  }

  function renderFileModal(): void {
    const modal = el<HTMLDivElement>("filemodal");
    if (!chat.openFile) {
      modal.classList.remove("visible");
      modal.innerHTML = "";
      return;
    }
    const f = chat.openFile;
    const people = f.participants
      .map((p) => `<li>${escapeHtml(p.full_name)} — ${escapeHtml(p.title)} (${p.id})</li>`)
      .join("");
    modal.innerHTML =
      `<div class="modal-box"><button id="close-modal">close</button>` +
      `<h3>${escapeHtml(f.title)} <small>(${f.kind}, ${f.created_at})</small></h3>` +
      `<ul>${people}</ul><pre>${escapeHtml(f.content)}</pre></div>`;
    modal.classList.add("visible");
  }

  function render(): void {
    renderTreemap();
    renderChat();
    renderContextPanel();
    renderFileModal();
  }

  async function refreshContextPanel(): Promise<void> {
    if (!chat.sessionId) return;
    const context = await api.getContext(chat.sessionId);
    contextPanel = new ContextPanelController(api, chat.sessionId, context, model.subtopics, () => {
      render();
    });
    render();
  }

  // treemap interactions: expand cells, open items, highlight subtopics
  el("treemap").addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const topicAttr = target.getAttribute("data-topic");
    const itemAttr = target.getAttribute("data-item");
    if (itemAttr) {
      await chat.openCitation(itemAttr);
      return;
    }
    if (topicAttr !== null) {
      state = toggleExpanded(state, Number(topicAttr));
      layout = await api.getLayout(state.expandedTopic);
      render();
    }
  });
  el("treemap").addEventListener("dblclick", (event) => {
    const topicAttr = (event.target as HTMLElement).getAttribute("data-topic");
    if (topicAttr !== null) {
      state = toggleFileList(state, Number(topicAttr));
      if (state.fileListTopic === null) {
        el("filelist").classList.remove("visible");
      }
      render();
    }
  });

  el("filelist").addEventListener("click", async (event) => {
    const itemAttr = (event.target as HTMLElement).getAttribute("data-item");
    if (itemAttr) await chat.openCitation(itemAttr);
  });

  // chat composer
  el<HTMLFormElement>("composer").addEventListener("submit", async (event) => {
    event.preventDefault();
    const input = el<HTMLInputElement>("prompt");
    const outcome = await chat.send(input.value);
    input.value = outcome.draft;
    if (outcome.error) toast(outcome.error);
    if (outcome.ok) await refreshContextPanel();
    render();
  });

  // citation chips and summary cards
  el("turns").addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const item = target.getAttribute("data-item");
    if (item) {
      await chat.openCitation(item);
      return;
    }
    const key = target.getAttribute("data-key");
    if (key) chat.toggleSummary(key);
  });

  el("filemodal").addEventListener("click", (event) => {
    if ((event.target as HTMLElement).id === "close-modal") chat.closeFileView();
  });

  // data context panel: click to highlight, drag into the chat panel to add
  el("thumbnails").addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const sid = target.getAttribute("data-subtopic");
    if (!sid || !contextPanel) return;
    if (target.classList.contains("thumb-remove")) {
      const result = await contextPanel.removeSubtopic(sid);
      if (result.toast) toast(result.toast);
      return;
    }
    const thumb = contextPanel.thumbnails().find((t) => t.subtopicId === sid);
    if (thumb) {
      state = replaceHighlight(state, highlightForThumbnail(thumb));
      state.selectedSubtopic = sid;
      render();
    }
  });
  el("thumbnails").addEventListener("dragstart", (event) => {
    const sid = (event.target as HTMLElement).getAttribute("data-subtopic");
    if (sid && event.dataTransfer) {
      event.dataTransfer.setData(DRAG_MIME, sid);
      event.dataTransfer.effectAllowed = "copy";
    }
  });
  const dropzone = el("chatpanel");
  dropzone.addEventListener("dragover", (event) => {
    if (event.dataTransfer?.types.includes(DRAG_MIME)) event.preventDefault();
  });
  dropzone.addEventListener("drop", async (event) => {
    const sid = event.dataTransfer?.getData(DRAG_MIME);
    if (!sid || !contextPanel) return;
    event.preventDefault();
    const result = await contextPanel.addSubtopic(sid);
    if (result.toast) toast(result.toast);
  });

  render();
}

boot().catch((err) => {
  const banner = document.getElementById("banner");
  if (banner) {
    banner.textContent = String(err);
    banner.classList.add("visible");
  }
});
