/** Palette and opacity defaults; tweak here to retheme the treemap. */

export const ACCENT_FILL = "#e8590c";
export const ACCENT_OPACITY = 1.0;

// Dimmed items must stay visible so the topical shape never disappears.
export const DIM_OPACITY = 0.35;

export const CELL_STROKE = "#4a4a4a";
export const CELL_FILL = "#fafafa";
export const TAG_COLOR = "#333333";
export const LABEL_COLOR = "#111111";

const TOPIC_HUES = [210, 110, 260, 30, 170, 330, 65, 0];

export function topicFill(topicId: number): string {
  const hue = TOPIC_HUES[topicId % TOPIC_HUES.length];
  return `hsl(${hue}, 45%, 55%)`;
}
