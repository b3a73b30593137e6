// Assessment flow: which session is open, what the draft rating holds,
// and how the tool advances once a rating is acknowledged.
//
// The server is the source of truth for progress. A rating is only marked
// rated locally after the 204 arrives; a network failure keeps the draft
// so the assessor can resubmit without retyping.

import { ApiClient, ApiError } from "./api.js";
import type { Progress, ScaleValue, SessionDetail, SessionListing } from "./api.js";

export interface Draft {
  topicQuality?: ScaleValue;
  segmentationQuality?: ScaleValue;
  comment: string;
}

export type SubmitResult =
  | { outcome: "accepted"; nextSessionId: string | null }
  | { outcome: "invalid"; missing: string[] }
  | { outcome: "network-error"; message: string };

function emptyDraft(): Draft {
  return { comment: "" };
}

export class AssessmentFlow {
  listing: SessionListing | null = null;
  current: SessionDetail | null = null;
  draft: Draft = emptyDraft();
  progress: Progress | null = null;
  /** Draft kept after a failed submit, ready for resubmission. */
  pendingRetry: Draft | null = null;

  constructor(
    private api: ApiClient,
    readonly assessor: string,
  ) {
    if (!assessor) {
      throw new Error("assessor name must not be empty");
    }
  }

  /** Load the listing and open the next unrated session, if any. */
  async start(): Promise<void> {
    this.listing = await this.api.listSessions();
    this.progress = await this.api.progress(this.assessor);
    if (this.progress.next_unrated_session_id !== null) {
      await this.open(this.progress.next_unrated_session_id);
    } else {
      this.current = null;
    }
  }

  async open(sessionId: string): Promise<void> {
    this.current = await this.api.getSession(sessionId);
    this.draft = emptyDraft();
    this.pendingRetry = null;
  }

  setTopicQuality(value: ScaleValue): void {
    this.draft.topicQuality = value;
  }

  setSegmentationQuality(value: ScaleValue): void {
    this.draft.segmentationQuality = value;
  }

  setComment(text: string): void {
    this.draft.comment = text;
  }

  /** Scale questions still unanswered ("do not know" counts as answered). */
  missingFields(): string[] {
    const missing: string[] = [];
    if (this.draft.topicQuality === undefined) {
      missing.push("topic quality");
    }
    if (this.draft.segmentationQuality === undefined) {
      missing.push("segmentation quality");
    }
    return missing;
  }

  async submit(): Promise<SubmitResult> {
    if (this.current === null) {
      throw new Error("no session open");
    }
    const missing = this.missingFields();
    if (missing.length > 0) {
      return { outcome: "invalid", missing };
    }
    const body = {
      assessor: this.assessor,
      topic_quality: this.draft.topicQuality!,
      segmentation_quality: this.draft.segmentationQuality!,
      comment: this.draft.comment || undefined,
    };
    try {
      await this.api.putRating(this.current.id, body);
    } catch (err) {
      if (err instanceof ApiError && err.retryable) {
        this.pendingRetry = { ...this.draft };
        return { outcome: "network-error", message: err.message };
      }
      throw err;
    }
    this.pendingRetry = null;
    return { outcome: "accepted", nextSessionId: await this.advance() };
  }

  /** Resubmit a draft retained by a failed submit. */
  async resubmit(): Promise<SubmitResult> {
    if (this.pendingRetry === null) {
      throw new Error("nothing to resubmit");
    }
    this.draft = { ...this.pendingRetry };
    return this.submit();
  }

  /** Refresh listing + progress, then open the next unrated session. */
  private async advance(): Promise<string | null> {
    this.listing = await this.api.listSessions();
    this.progress = await this.api.progress(this.assessor);
    const nextId = this.progress.next_unrated_session_id;
    if (nextId === null) {
      this.current = null;
      this.draft = emptyDraft();
    } else {
      await this.open(nextId);
    }
    return nextId;
  }
}
