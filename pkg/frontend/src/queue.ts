/**
 * Submission pipeline with an offline queue.
 *
 * Exactly-once observable behavior: a verdict is enqueued at most once per
 * (episode, annotator), queued entries are flushed before new submissions,
 * and a server 409 counts as success (the verdict is already durable).
 */

import { ApiClient, ApiError, SubmitOutcome, VerdictPayload } from "./api.js";

export interface QueueStorage {
  load(): VerdictPayload[];
  save(entries: VerdictPayload[]): void;
}

export class MemoryStorage implements QueueStorage {
  private entries: VerdictPayload[] = [];
  load(): VerdictPayload[] {
    return [...this.entries];
  }
  save(entries: VerdictPayload[]): void {
    this.entries = [...entries];
  }
}

export class BrowserStorage implements QueueStorage {
  constructor(private readonly key: string = "review-console.pending") {}
  load(): VerdictPayload[] {
    try {
      return JSON.parse(window.localStorage.getItem(this.key) ?? "[]") as VerdictPayload[];
    } catch {
      return [];
    }
  }
  save(entries: VerdictPayload[]): void {
    window.localStorage.setItem(this.key, JSON.stringify(entries));
  }
}

export type SubmitResult =
  | { state: "acked"; outcome: SubmitOutcome }
  | { state: "queued" };

const keyOf = (v: VerdictPayload): string => `${v.episode_id}${v.annotator_id}`;

export class SubmissionQueue {
  private pending: VerdictPayload[];
  private settled = new Set<string>();

  constructor(
    private readonly api: ApiClient,
    private readonly storage: QueueStorage = new MemoryStorage(),
  ) {
    this.pending = this.storage.load();
  }

  get pendingCount(): number {
    return this.pending.length;
  }

  /** True if this verdict was acked (or queued) already in this session. */
  isSettled(episodeId: string, annotatorId: string): boolean {
    return this.settled.has(`${episodeId}${annotatorId}`);
  }

  /**
   * Flush anything pending, then submit. Network failure queues the verdict
   * for a later flush and reports "queued"; the double-send of the same
   * verdict never happens because settled keys are dropped early.
   */
  async submit(v: VerdictPayload): Promise<SubmitResult> {
    const key = keyOf(v);
    if (this.settled.has(key)) return { state: "acked", outcome: "duplicate" };
    await this.flush();
    try {
      const outcome = await this.api.submitVerdict(v);
      this.settled.add(key);
      return { state: "acked", outcome };
    } catch (err) {
      if (err instanceof ApiError && err.retryable) {
        this.enqueue(v);
        return { state: "queued" };
      }
      throw err;
    }
  }

  private enqueue(v: VerdictPayload): void {
    const key = keyOf(v);
    if (!this.pending.some((p) => keyOf(p) === key)) {
      this.pending.push(v);
      this.storage.save(this.pending);
    }
    this.settled.add(key);
  }

  /** Drain the queue front to back; stops at the first network failure. */
  async flush(): Promise<number> {
    let flushed = 0;
    while (this.pending.length > 0) {
      const head = this.pending[0];
      try {
        await this.api.submitVerdict(head); // 409 resolves as "duplicate": fine
      } catch (err) {
        if (err instanceof ApiError && err.retryable) return flushed;
        // non-retryable rejection: drop the entry rather than wedge the queue
      }
      this.pending.shift();
      this.storage.save(this.pending);
      flushed += 1;
    }
    return flushed;
  }
}
