/** UI view state with the invariants the panels rely on. */

export interface ViewState {
  expandedTopic: number | null;
  activeSession: string | null;
  highlight: Set<string>; // last turn's context (or a clicked subtopic)
  selectedSubtopic: string | null;
  fileListTopic: number | null; // at most one cell in file-list mode
}

export function initialViewState(): ViewState {
  return {
    expandedTopic: null,
    activeSession: null,
    highlight: new Set(),
    selectedSubtopic: null,
    fileListTopic: null,
  };
}

/** Replace (never merge) the highlight set. */
export function replaceHighlight(state: ViewState, itemIds: Iterable<string>): ViewState {
  return { ...state, highlight: new Set(itemIds) };
}

export function toggleExpanded(state: ViewState, topicId: number): ViewState {
  return { ...state, expandedTopic: state.expandedTopic === topicId ? null : topicId };
}

/** Only one cell can be in file-list mode; selecting a new one resets the old. */
export function toggleFileList(state: ViewState, topicId: number): ViewState {
  return { ...state, fileListTopic: state.fileListTopic === topicId ? null : topicId };
}
