// Browser entry point: wires the flow state to the DOM.
//
// Layout: a sidebar lists all sessions with rated markers; the main pane
// shows the open session's table and the rating form. The URL hash tracks
// the open session so reload and back/forward work.

import { ApiClient } from "./api.js";
import type { ScaleValue } from "./api.js";
import { AssessmentFlow } from "./state.js";
import {
  renderProgress,
  renderRatingForm,
  renderRetryBanner,
  renderSessionList,
  renderSessionTable,
} from "./render.js";
import { buildRows } from "./table.js";

function scaleFromInput(value: string): ScaleValue {
  return value === "dnk" ? "dnk" : (Number(value) as ScaleValue);
}

function assessorName(): string {
  let name = localStorage.getItem("assessor");
  while (!name) {
    name = (window.prompt("Assessor name:") ?? "").trim();
  }
  localStorage.setItem("assessor", name);
  return name;
}

async function main(): Promise<void> {
  const flow = new AssessmentFlow(new ApiClient(""), assessorName());
  const sidebar = document.getElementById("sidebar")!;
  const pane = document.getElementById("session-pane")!;
  let lastError: string | null = null;

  function render(): void {
    if (flow.listing !== null) {
      const progress = flow.progress;
      sidebar.innerHTML =
        (progress ? renderProgress(progress.rated, progress.total) : "") +
        renderSessionList(flow.listing, flow.assessor);
    }
    if (flow.current === null) {
      pane.innerHTML = '<p class="done">All sessions rated. Thank you!</p>';
      return;
    }
    const missing = lastError === "invalid" ? flow.missingFields() : [];
    pane.innerHTML =
      `<h2>Session ${flow.current.id}</h2>` +
      renderSessionTable(buildRows(flow.current)) +
      renderRatingForm(flow.draft, missing) +
      (flow.pendingRetry !== null && lastError !== null && lastError !== "invalid"
        ? renderRetryBanner(lastError)
        : "");
    wireForm();
  }

  function wireForm(): void {
    const form = pane.querySelector<HTMLFormElement>("form.rating-form");
    if (form === null) {
      return;
    }
    form.addEventListener("change", (event) => {
      const input = event.target as HTMLInputElement;
      if (input.name === "topic_quality") {
        flow.setTopicQuality(scaleFromInput(input.value));
      } else if (input.name === "segmentation_quality") {
        flow.setSegmentationQuality(scaleFromInput(input.value));
      } else if (input.name === "comment") {
        flow.setComment(input.value);
      }
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void submit();
    });
    pane.querySelector("button.retry")?.addEventListener("click", () => {
      void (async () => {
        const result = await flow.resubmit();
        lastError = result.outcome === "network-error" ? result.message : null;
        render();
      })();
    });
  }

  async function submit(): Promise<void> {
    const result = await flow.submit();
    if (result.outcome === "invalid") {
      lastError = "invalid";
    } else if (result.outcome === "network-error") {
      lastError = result.message;
    } else {
      lastError = null;
      if (result.nextSessionId !== null) {
        window.location.hash = `#/sessions/${encodeURIComponent(result.nextSessionId)}`;
      } else {
        window.location.hash = "";
      }
    }
    render();
  }

  window.addEventListener("hashchange", () => {
    const match = window.location.hash.match(/^#\/sessions\/(.+)$/);
    if (match !== null) {
      void flow.open(decodeURIComponent(match[1]!)).then(render);
    }
  });

  await flow.start();
  if (flow.current !== null) {
    window.location.hash = `#/sessions/${encodeURIComponent(flow.current.id)}`;
  }
  render();
}

void main();
