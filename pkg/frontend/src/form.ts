/**
 * Verdict form as a pure keyboard-driven state machine.
 *
 * Keys: y/n answer the focused question and advance focus, arrows move
 * focus, Enter submits once both questions are answered, space toggles
 * audio, s skips an unrenderable item. The whole annotation flow is
 * reachable without a pointer.
 */

export interface FormState {
  intentRecoverable: boolean | null;
  phenomenonFidelity: boolean | null;
  focused: 0 | 1;
  notes: string;
}

export const emptyForm = (): FormState => ({
  intentRecoverable: null,
  phenomenonFidelity: null,
  focused: 0,
  notes: "",
});

export const formComplete = (s: FormState): boolean =>
  s.intentRecoverable !== null && s.phenomenonFidelity !== null;

export type FormEffect = "none" | "submit" | "toggle-audio" | "skip";

export interface FormStep {
  state: FormState;
  effect: FormEffect;
}

export function formReduce(state: FormState, key: string): FormStep {
  const s: FormState = { ...state };
  switch (key.toLowerCase()) {
    case "y":
    case "n": {
      const answer = key.toLowerCase() === "y";
      if (s.focused === 0) {
        s.intentRecoverable = answer;
        s.focused = 1;
      } else {
        s.phenomenonFidelity = answer;
      }
      return { state: s, effect: "none" };
    }
    case "arrowup":
    case "arrowleft":
      s.focused = 0;
      return { state: s, effect: "none" };
    case "arrowdown":
    case "arrowright":
      s.focused = 1;
      return { state: s, effect: "none" };
    case "enter":
      return { state: s, effect: formComplete(s) ? "submit" : "none" };
    case " ":
    case "p":
      return { state: s, effect: "toggle-audio" };
    case "s":
      return { state: s, effect: "skip" };
    default:
      return { state: s, effect: "none" };
  }
}
