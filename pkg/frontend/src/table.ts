// Row model for the session review table.
//
// Separator placement is derived from topic_number changes and nothing
// else; the backend decided the segmentation, this module only displays it.

import type { ActionRow, SessionDetail } from "./api.js";

export interface TableRow {
  step: number;
  kind: string;
  terms: string;
  citation: string;
  topic: string;
  topicNumber: number;
  /** True when a segment boundary sits directly above this row. */
  startsSegment: boolean;
}

const KIND_LABELS: Record<string, string> = {
  simple_search: "Simple search",
  advanced_search: "Advanced search",
  facet_search: "Facet search",
  doc_view: "Document view",
};

export function kindLabel(kind: string): string {
  return KIND_LABELS[kind] ?? kind;
}

export function buildRows(detail: SessionDetail): TableRow[] {
  return detail.actions.map((action: ActionRow, i: number) => ({
    step: action.step,
    kind: kindLabel(action.kind),
    terms: action.terms.join(", "),
    citation: action.citation ?? "",
    topic: action.session_topic,
    topicNumber: action.topic_number,
    startsSegment:
      i > 0 && action.topic_number !== detail.actions[i - 1]!.topic_number,
  }));
}

/** 0-based row indices that open a new segment (never includes row 0). */
export function separatorPositions(rows: TableRow[]): number[] {
  return rows.flatMap((row, i) => (row.startsSegment ? [i] : []));
}
