/** DOM glue: one screen, driven by the pure modules. */

import { ApiClient, ApiError, ReviewItem } from "./api.js";
import { emptyForm, formComplete, formReduce, FormState } from "./form.js";
import { MarkupParseError, renderTranscriptHtml } from "./markup.js";
import { BrowserStorage, SubmissionQueue } from "./queue.js";

interface Els {
  root: HTMLElement;
  banner: HTMLElement;
  badge: HTMLElement;
  calibration: HTMLElement;
  instruction: HTMLElement;
  transcript: HTMLElement;
  audio: HTMLAudioElement;
  q1: HTMLElement;
  q2: HTMLElement;
  notes: HTMLTextAreaElement;
  status: HTMLElement;
  done: HTMLElement;
  progress: HTMLElement;
}

export class ReviewApp {
  private form: FormState = emptyForm();
  private item: ReviewItem | null = null;
  private unrenderable = false;
  private judged = 0;

  constructor(
    private readonly els: Els,
    private readonly api: ApiClient,
    private readonly queue: SubmissionQueue,
    private readonly annotatorId: string,
  ) {}

  async start(): Promise<void> {
    window.addEventListener("keydown", (ev) => this.onKey(ev));
    window.addEventListener("online", () => void this.queue.flush());
    await this.loadNext();
  }

  private async loadNext(): Promise<void> {
    this.setBanner("");
    try {
      this.item = await this.api.nextItem(this.annotatorId);
    } catch (err) {
      this.setBanner(`cannot reach the service: ${String(err)} (retry with R)`);
      return;
    }
    if (!this.item) {
      this.showCompletion();
      return;
    }
    this.renderItem(this.item);
  }

  private renderItem(item: ReviewItem): void {
    this.form = emptyForm();
    this.unrenderable = false;
    this.els.done.hidden = true;
    this.els.root.hidden = false;
    this.els.badge.textContent = item.instruction_type;
    this.els.badge.className = `type-badge type-${item.instruction_type}`;
    this.els.calibration.hidden = !item.calibration;
    this.els.instruction.textContent = item.original_instruction;
    this.els.progress.textContent = `item ${item.index + 1}`;
    try {
      this.els.transcript.innerHTML = renderTranscriptHtml(item.transcript);
    } catch (err) {
      this.unrenderable = true;
      const detail = err instanceof MarkupParseError ? err.message : String(err);
      this.els.transcript.textContent = item.transcript;
      this.setBanner(`transcript failed the grammar: ${detail} (press S to skip)`);
    }
    this.els.audio.src = item.audio_url;
    this.els.audio.preload = "auto";
    this.els.notes.value = "";
    this.paintForm();
  }

  private onKey(ev: KeyboardEvent): void {
    if (this.els.done.hidden === false) return;
    if (ev.target === this.els.notes && ev.key !== "Enter") return;
    if (ev.key.toLowerCase() === "r") {
      void this.loadNext();
      return;
    }
    const step = formReduce(this.form, ev.key);
    this.form = step.state;
    this.paintForm();
    if (step.effect === "toggle-audio") {
      ev.preventDefault();
      if (this.els.audio.paused) void this.els.audio.play();
      else this.els.audio.pause();
    } else if (step.effect === "submit" && this.item) {
      ev.preventDefault();
      void this.submitCurrent();
    } else if (step.effect === "skip" && this.unrenderable) {
      void this.loadNext();
    }
  }

  private async submitCurrent(): Promise<void> {
    const item = this.item;
    if (!item || !formComplete(this.form)) return;
    this.form.notes = this.els.notes.value;
    let result;
    try {
      result = await this.queue.submit({
        episode_id: item.episode_id,
        annotator_id: this.annotatorId,
        intent_recoverable: this.form.intentRecoverable as boolean,
        phenomenon_fidelity: this.form.phenomenonFidelity as boolean,
        notes: this.form.notes,
      });
    } catch (err) {
      if (err instanceof ApiError) {
        this.setBanner(`submit rejected (${err.status}); skipping item`);
        await this.loadNext();
        return;
      }
      throw err;
    }
    this.judged += 1;
    if (result.state === "queued") {
      this.setBanner("offline: verdict queued, will flush on reconnect");
    } else if (result.outcome === "duplicate") {
      this.setBanner("already judged on the server; moving on");
    }
    await this.loadNext();
  }

  private paintForm(): void {
    paintQuestion(this.els.q1, this.form.intentRecoverable, this.form.focused === 0);
    paintQuestion(this.els.q2, this.form.phenomenonFidelity, this.form.focused === 1);
    this.els.status.textContent = formComplete(this.form)
      ? "press Enter to submit"
      : "answer both questions with Y / N";
  }

  private showCompletion(): void {
    this.els.root.hidden = true;
    this.els.done.hidden = false;
    this.els.done.querySelector(".done-count")!.textContent = String(this.judged);
  }

  private setBanner(text: string): void {
    this.els.banner.textContent = text;
    this.els.banner.hidden = text === "";
  }
}

function paintQuestion(el: HTMLElement, answer: boolean | null, focused: boolean): void {
  el.classList.toggle("focused", focused);
  const value = el.querySelector(".answer")!;
  value.textContent = answer === null ? "-" : answer ? "Yes" : "No";
  el.classList.toggle("answered", answer !== null);
}

export function collectEls(doc: Document): Els {
  const get = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el as T;
  };
  return {
    root: get("review"),
    banner: get("banner"),
    badge: get("type-badge"),
    calibration: get("calibration-flag"),
    instruction: get("instruction"),
    transcript: get("transcript"),
    audio: get<HTMLAudioElement>("player"),
    q1: get("q-intent"),
    q2: get("q-fidelity"),
    notes: get<HTMLTextAreaElement>("notes"),
    status: get("form-status"),
    done: get("done"),
    progress: get("progress"),
  };
}
