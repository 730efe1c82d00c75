/** Wire types for the ctxscope HTTP API. */

export interface TopicView {
  id: number;
  label: string;
  size: number;
  member_ids: string[];
}

export interface SubtopicView {
  id: string;
  label: string;
  member_ids: string[];
  is_noise_bucket: boolean;
  topic_id: number;
}

export interface CellRect {
  topic_id: number;
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface Placement {
  item_id: string;
  topic_id: number;
  subtopic_id: string;
  row: number;
  col: number;
  x: number;
  y: number;
  radius: number;
}

export interface LayoutView {
  cells: CellRect[];
  placements: Placement[];
  expanded_topic: number | null;
}

export interface ModelView {
  schema_version: number;
  corpus_fingerprint: string;
  topics: TopicView[];
  subtopics: SubtopicView[];
  layout: LayoutView;
}

export interface ContextEntryView {
  item_id: string;
  origin: "retrieved" | "user_added";
  subtopic_id: string | null;
  topic_id: number | null;
}

export interface ContextView {
  session_id: string;
  created_from_prompt: string | null;
  entries: ContextEntryView[];
}

export interface SummaryView {
  subtopic_id: string;
  summary: string;
  relevance_explanation: string;
  covered_item_ids: string[];
}

export interface TurnView {
  prompt: string;
  response: string;
  citations: string[];
  retrieved_ids: string[];
  summaries: SummaryView[];
}

export interface ParticipantView {
  id: string;
  full_name: string;
  title: string;
  department: string;
}

export interface FileView {
  id: string;
  kind: string;
  title: string;
  content: string;
  created_at: string;
  participants: ParticipantView[];
}
