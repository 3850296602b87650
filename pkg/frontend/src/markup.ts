/**
 * Transcript markup for display: the published tag grammar, nothing more.
 *
 * [S1]/[S2]/[S3]/[Robot] start turns; [Overlap] opens the spoken-over tail
 * of a turn and the next tag must be [Overlap_Sx], which also starts the
 * interrupting turn; [Sound] and [SentimentCue] are point anchors; [ACT]
 * is the action-onset marker, last in a Robot turn. Unknown bracketed
 * tokens are grammar failures, surfaced to the caller by message.
 */

export type SpeakerTag = "S1" | "S2" | "S3" | "Robot";

export interface TurnPiece {
  kind: "text" | "overlap-text";
  text: string;
}

export interface TurnView {
  speaker: SpeakerTag;
  interrupting: boolean;
  pieces: TurnPiece[];
  soundAnchors: number;
  sentimentCues: number;
  hasAct: boolean;
}

export class MarkupParseError extends Error {
  constructor(message: string, readonly position: number) {
    super(message);
    this.name = "MarkupParseError";
  }
}

const TAG_RE = /\[([^\[\]]*)\]/g;
const SPEAKERS = new Set(["S1", "S2", "S3", "Robot"]);
const OVERLAP_REPLY = /^Overlap_S([123])$/;

export function parseTranscript(markup: string): TurnView[] {
  const turns: TurnView[] = [];
  let current: TurnView | null = null;
  let inOverlapTail = false;
  let afterAct = false;
  let pos = 0;

  const pushText = (raw: string, at: number): void => {
    if (!raw) return;
    if (!current) {
      if (raw.trim()) throw new MarkupParseError("text before the first speaker tag", at);
      return;
    }
    if (afterAct) {
      if (raw.trim()) throw new MarkupParseError("text after the [ACT] marker", at);
      return;
    }
    current.pieces.push({ kind: inOverlapTail ? "overlap-text" : "text", text: raw });
  };

  const closeTurn = (at: number): void => {
    if (current && inOverlapTail) {
      // legal only when the next tag is [Overlap_Sx]; callers handle that case
      throw new MarkupParseError("overlap never answered by [Overlap_Sx]", at);
    }
    if (current) trimTurn(current);
  };

  TAG_RE.lastIndex = 0;
  let m: RegExpExecArray | null;
  while ((m = TAG_RE.exec(markup)) !== null) {
    pushText(markup.slice(pos, m.index), m.index);
    pos = skipWs(markup, TAG_RE.lastIndex);
    TAG_RE.lastIndex = pos;
    const name = m[1];

    if (SPEAKERS.has(name)) {
      closeTurn(m.index);
      current = newTurn(name as SpeakerTag, false);
      turns.push(current);
      afterAct = false;
      continue;
    }
    const reply = OVERLAP_REPLY.exec(name);
    if (reply) {
      if (!current || !inOverlapTail) {
        throw new MarkupParseError("[Overlap_Sx] without a preceding [Overlap]", m.index);
      }
      const speaker = `S${reply[1]}` as SpeakerTag;
      if (speaker === current.speaker) {
        throw new MarkupParseError("a speaker cannot interrupt their own turn", m.index);
      }
      inOverlapTail = false;
      trimTurn(current);
      current = newTurn(speaker, true);
      turns.push(current);
      afterAct = false;
      continue;
    }
    if (!current) throw new MarkupParseError(`[${name}] before the first speaker tag`, m.index);
    if (afterAct) throw new MarkupParseError("tag after the [ACT] marker", m.index);
    switch (name) {
      case "Overlap":
        if (inOverlapTail) throw new MarkupParseError("nested [Overlap]", m.index);
        inOverlapTail = true;
        break;
      case "Sound":
        current.soundAnchors += 1;
        break;
      case "SentimentCue":
        current.sentimentCues += 1;
        break;
      case "ACT":
        if (current.speaker !== "Robot") {
          throw new MarkupParseError("[ACT] outside a Robot turn", m.index);
        }
        current.hasAct = true;
        afterAct = true;
        break;
      default:
        throw new MarkupParseError(`unknown tag [${name}]`, m.index);
    }
  }
  pushText(markup.slice(pos), pos);
  closeTurn(markup.length);
  return turns;
}

function newTurn(speaker: SpeakerTag, interrupting: boolean): TurnView {
  return { speaker, interrupting, pieces: [], soundAnchors: 0, sentimentCues: 0, hasAct: false };
}

function trimTurn(turn: TurnView): void {
  const last = turn.pieces[turn.pieces.length - 1];
  if (last) {
    last.text = last.text.replace(/\s+$/u, "");
    if (!last.text) turn.pieces.pop();
  }
}

function skipWs(text: string, from: number): number {
  let i = from;
  while (i < text.length && /\s/.test(text[i])) i += 1;
  return i;
}

const SPEAKER_LABEL: Record<SpeakerTag, string> = {
  S1: "Speaker 1",
  S2: "Speaker 2",
  S3: "Speaker 3",
  Robot: "Robot",
};

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Render the transcript to HTML: one block per turn, speaker-colored,
 * overlap text marked, sound/cue/act badges appended. Pure string in/out. */
export function renderTranscriptHtml(markup: string): string {
  const turns = parseTranscript(markup);
  const blocks = turns.map((turn) => {
    const cls = `turn speaker-${turn.speaker.toLowerCase()}${turn.interrupting ? " interrupting" : ""}`;
    const label = turn.interrupting
      ? `${SPEAKER_LABEL[turn.speaker]} (interrupting)`
      : SPEAKER_LABEL[turn.speaker];
    const body = turn.pieces
      .map((p) =>
        p.kind === "overlap-text"
          ? `<mark class="overlap" title="spoken over">${escapeHtml(p.text)}</mark>`
          : escapeHtml(p.text),
      )
      .join("");
    const badges: string[] = [];
    for (let i = 0; i < turn.soundAnchors; i += 1) {
      badges.push('<span class="badge badge-sound" title="sound event anchor">sound</span>');
    }
    for (let i = 0; i < turn.sentimentCues; i += 1) {
      badges.push('<span class="badge badge-cue" title="sentiment cue">cue</span>');
    }
    if (turn.hasAct) {
      badges.push('<span class="badge badge-act" title="action onset">ACT</span>');
    }
    return `<div class="${cls}"><span class="speaker-label">${label}</span> <span class="turn-text">${body}</span> ${badges.join(" ")}</div>`;
  });
  return blocks.join("\n");
}
