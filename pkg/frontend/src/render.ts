// HTML renderers. Pure string builders so they are testable without a DOM;
// app.ts injects the output and wires events.

import type { ScaleValue, SessionListing } from "./api.js";
import type { Draft } from "./state.js";
import type { TableRow } from "./table.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderSessionList(listing: SessionListing, assessor: string): string {
  if (listing.total === 0) {
    return '<p class="empty-state">No sessions to assess.</p>';
  }
  const items = listing.items
    .map((item) => {
      const rated = item.rated_by.includes(assessor);
      const marker = rated ? "&#10003; rated" : "unrated";
      const cls = rated ? "session-link rated" : "session-link";
      return (
        `<li><a class="${cls}" href="#/sessions/${encodeURIComponent(item.id)}">` +
        `${escapeHtml(item.id)}</a> <span class="marker">${marker}</span>` +
        ` <span class="meta">${item.action_count} actions</span></li>`
      );
    })
    .join("\n");
  return `<ol class="session-list">\n${items}\n</ol>`;
}

export function renderSessionTable(rows: TableRow[]): string {
  const body = rows
    .map((row) => {
      const cls = row.startsSegment ? ' class="segment-start"' : "";
      const cells = [
        String(row.step),
        escapeHtml(row.kind),
        escapeHtml(row.terms),
        escapeHtml(row.citation),
        escapeHtml(row.topic),
        `T${row.topicNumber}`,
      ];
      return `<tr${cls}>${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`;
    })
    .join("\n");
  return (
    '<table class="session-table">\n<thead><tr>' +
    "<th>Step</th><th>Type</th><th>Search terms</th><th>Document</th>" +
    "<th>Session topic</th><th>Topic</th>" +
    `</tr></thead>\n<tbody>\n${body}\n</tbody>\n</table>`
  );
}

const SCALE_CHOICES: ReadonlyArray<{ value: ScaleValue; label: string }> = [
  { value: -2, label: "very bad" },
  { value: -1, label: "bad" },
  { value: 0, label: "acceptable" },
  { value: 1, label: "good" },
  { value: 2, label: "very good" },
];

function renderScale(name: string, legend: string, chosen: ScaleValue | undefined): string {
  const radios = SCALE_CHOICES.map(({ value, label }) => {
    const checked = chosen === value ? " checked" : "";
    return (
      `<label><input type="radio" name="${name}" value="${value}"${checked}> ` +
      `${label}</label>`
    );
  });
  const dnkChecked = chosen === "dnk" ? " checked" : "";
  const dnk =
    `<label class="dnk"><input type="radio" name="${name}" value="dnk"${dnkChecked}> ` +
    "do not know</label>";
  return (
    `<fieldset class="scale" data-question="${name}">` +
    `<legend>${escapeHtml(legend)}</legend>\n` +
    `${radios.join("\n")}\n${dnk}\n</fieldset>`
  );
}

export function renderRatingForm(draft: Draft, missing: string[]): string {
  const error =
    missing.length > 0
      ? `<p class="form-error">Please answer: ${escapeHtml(missing.join(", "))}.</p>`
      : "";
  return (
    '<form class="rating-form">\n' +
    renderScale("topic_quality", "Quality of the session topic assignment", draft.topicQuality) +
    "\n" +
    renderScale(
      "segmentation_quality",
      "Quality of the segmentation",
      draft.segmentationQuality,
    ) +
    "\n" +
    '<label class="comment">Comment<br>' +
    `<textarea name="comment" rows="3">${escapeHtml(draft.comment)}</textarea></label>\n` +
    error +
    '<button type="submit">Save rating</button>\n</form>'
  );
}

export function renderProgress(rated: number, total: number): string {
  return `<p class="progress">${rated} of ${total} sessions rated</p>`;
}

export function renderRetryBanner(message: string): string {
  return (
    '<div class="retry-banner">Saving failed (' +
    escapeHtml(message) +
    '); your rating is kept. <button type="button" class="retry">Retry</button></div>'
  );
}
