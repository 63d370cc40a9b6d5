// Tri-state judgment form with the skip-lock rule: answering yes to
// "acceptable" locks the remaining four controls to yes and the submission
// body records them as skipped. Client validation is strictly narrower
// than the service rule, so the UI can never produce a rejectable body.

import { CATEGORIES, Category, Judgment, TriState, WireLabel } from "./types.js";

export interface FormState {
  acceptable: TriState;
  grammatical: TriState;
  interpretable: TriState;
  relevant: TriState;
  correct: TriState;
}

export function emptyForm(): FormState {
  return {
    acceptable: "unset",
    grammatical: "unset",
    interpretable: "unset",
    relevant: "unset",
    correct: "unset",
  };
}

export function skipLocked(state: FormState): boolean {
  return state.acceptable === "yes";
}

/** Apply one judgment, honouring the skip lock. Setting acceptable=yes
 * forces the other controls to yes; leaving acceptable=yes resets them to
 * unset; judging a locked control is a no-op. */
export function setJudgment(state: FormState, category: Category, value: Judgment): FormState {
  if (category === "acceptable") {
    if (value === "yes") {
      return {
        acceptable: "yes",
        grammatical: "yes",
        interpretable: "yes",
        relevant: "yes",
        correct: "yes",
      };
    }
    if (skipLocked(state)) {
      return { ...emptyForm(), acceptable: "no" };
    }
    return { ...state, acceptable: "no" };
  }
  if (skipLocked(state)) {
    return state;
  }
  return { ...state, [category]: value };
}

export function clearJudgment(state: FormState, category: Category): FormState {
  if (category === "acceptable") {
    return emptyForm();
  }
  if (skipLocked(state)) {
    return state;
  }
  return { ...state, [category]: "unset" };
}

/** Submission is allowed only when acceptable=yes, or acceptable=no with
 * every other control explicitly judged. */
export function canSubmit(state: FormState): boolean {
  if (state.acceptable === "yes") {
    return true;
  }
  if (state.acceptable === "no") {
    return CATEGORIES.every((c) => c === "acceptable" || state[c] !== "unset");
  }
  return false;
}

export function toWireLabel(state: FormState): WireLabel {
  if (!canSubmit(state)) {
    throw new Error("form is incomplete");
  }
  if (state.acceptable === "yes") {
    return {
      acceptable: "yes",
      grammatical: "skipped",
      interpretable: "skipped",
      relevant: "skipped",
      correct: "skipped",
    };
  }
  return {
    acceptable: "no",
    grammatical: state.grammatical as Judgment,
    interpretable: state.interpretable as Judgment,
    relevant: state.relevant as Judgment,
    correct: state.correct as Judgment,
  };
}
