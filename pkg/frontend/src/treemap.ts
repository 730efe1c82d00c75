/**
 * Treemap scene construction and SVG rendering.
 *
 * The scene is a pure data structure (cells, one circle per item, subtopic
 * tags) computed from the served layout plus the current highlight set, so
 * the accent/dim logic is testable without a DOM. Highlighted items use the
 * accent color; everything else stays visible at reduced opacity, and
 * subtopic boundary tags are always drawn.
 */

import {
  ACCENT_FILL,
  ACCENT_OPACITY,
  CELL_FILL,
  CELL_STROKE,
  DIM_OPACITY,
  LABEL_COLOR,
  TAG_COLOR,
  topicFill,
} from "./theme.js";
import type { LayoutView, ModelView } from "./types.js";

export interface CellMark {
  topicId: number;
  label: string;
  x: number;
  y: number;
  w: number;
  h: number;
  expanded: boolean;
}

export interface CircleMark {
  itemId: string;
  topicId: number;
  subtopicId: string;
  cx: number;
  cy: number;
  r: number;
  fill: string;
  opacity: number;
  accented: boolean;
}

export interface TagMark {
  subtopicId: string;
  label: string;
  x: number;
  y: number;
}

export interface TreemapScene {
  width: number;
  height: number;
  cells: CellMark[];
  circles: CircleMark[];
  tags: TagMark[];
}

export class SceneError extends Error {}

export function buildScene(
  model: ModelView,
  layout: LayoutView,
  highlight: Set<string>,
  width = 900,
  height = 620,
): TreemapScene {
  const topicLabels = new Map(model.topics.map((t) => [t.id, t.label]));
  const subtopicLabels = new Map(model.subtopics.map((s) => [s.id, s.label]));
  const knownItems = new Set(model.topics.flatMap((t) => t.member_ids));

  const cells: CellMark[] = layout.cells.map((cell) => {
    const label = topicLabels.get(cell.topic_id);
    if (label === undefined) {
      throw new SceneError(`layout references unknown topic ${cell.topic_id}`);
    }
    return {
      topicId: cell.topic_id,
      label,
      x: cell.x * width,
      y: cell.y * height,
      w: cell.w * width,
      h: cell.h * height,
      expanded: layout.expanded_topic === cell.topic_id,
    };
  });

  const circles: CircleMark[] = layout.placements.map((p) => {
    if (!knownItems.has(p.item_id)) {
      throw new SceneError(`layout places unknown item ${p.item_id}`);
    }
    const accented = highlight.has(p.item_id);
    return {
      itemId: p.item_id,
      topicId: p.topic_id,
      subtopicId: p.subtopic_id,
      cx: p.x * width,
      cy: p.y * height,
      r: Math.max(1.5, p.radius * Math.min(width, height)),
      fill: accented ? ACCENT_FILL : topicFill(p.topic_id),
      opacity: accented ? ACCENT_OPACITY : DIM_OPACITY,
      accented,
    };
  });

  // One boundary tag per subtopic, anchored at its top-left placement.
  const anchors = new Map<string, { x: number; y: number }>();
  for (const p of layout.placements) {
    const current = anchors.get(p.subtopic_id);
    const px = p.x * width;
    const py = p.y * height;
    if (!current || py < current.y || (py === current.y && px < current.x)) {
      anchors.set(p.subtopic_id, { x: px, y: py });
    }
  }
  const tags: TagMark[] = [...anchors.entries()].map(([subtopicId, anchor]) => ({
    subtopicId,
    label: subtopicLabels.get(subtopicId) ?? subtopicId,
    x: anchor.x,
    y: anchor.y,
  }));
  tags.sort((a, b) => a.subtopicId.localeCompare(b.subtopicId));

  return { width, height, cells, circles, tags };
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Render the scene as an SVG document; marks carry data-* hooks for events. */
export function renderSvg(scene: TreemapScene): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${scene.width} ${scene.height}" ` +
      `width="${scene.width}" height="${scene.height}">`,
  );
  for (const cell of scene.cells) {
    parts.push(
      `<rect class="cell" data-topic="${cell.topicId}" x="${cell.x.toFixed(2)}" y="${cell.y.toFixed(2)}" ` +
        `width="${cell.w.toFixed(2)}" height="${cell.h.toFixed(2)}" fill="${CELL_FILL}" ` +
        `stroke="${CELL_STROKE}" stroke-width="${cell.expanded ? 2.5 : 1}"/>`,
    );
    parts.push(
      `<text class="cell-label" data-topic="${cell.topicId}" x="${(cell.x + 5).toFixed(2)}" ` +
        `y="${(cell.y + 14).toFixed(2)}" fill="${LABEL_COLOR}" font-size="12" font-weight="600">` +
        `${escapeXml(cell.label)}</text>`,
    );
  }
  for (const c of scene.circles) {
    parts.push(
      `<circle class="item${c.accented ? " accented" : ""}" data-item="${c.itemId}" ` +
        `data-subtopic="${c.subtopicId}" cx="${c.cx.toFixed(2)}" cy="${c.cy.toFixed(2)}" ` +
        `r="${c.r.toFixed(2)}" fill="${c.fill}" fill-opacity="${c.opacity}"/>`,
    );
  }
  for (const tag of scene.tags) {
    parts.push(
      `<text class="subtopic-tag" data-subtopic="${tag.subtopicId}" x="${tag.x.toFixed(2)}" ` +
        `y="${Math.max(10, tag.y - 6).toFixed(2)}" fill="${TAG_COLOR}" font-size="9">` +
        `${escapeXml(tag.label)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
