// Browser wiring: one annotator session against the annotation service.
// All protocol logic lives in formState/deck/keyboard; this file only
// moves state in and out of the DOM.

import { AnnotationApi, ApiError, isDone } from "./api.js";
import { buildDeck } from "./deck.js";
import {
  FormState,
  canSubmit,
  clearJudgment,
  emptyForm,
  setJudgment,
  skipLocked,
  toWireLabel,
} from "./formState.js";
import { handleKey } from "./keyboard.js";
import { CATEGORIES, Category, QuestionCard } from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new AnnotationApi(params.get("service") ?? "");
const annotator = params.get("annotator") ?? "A1";

let card: QuestionCard | null = null;
let form: FormState = emptyForm();
let focused: Category = "acceptable";
let revealed = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string) {
  el("status").textContent = message;
}

async function loadGuidelines() {
  const guidelines = await api.guidelines();
  el("skip-rule").textContent = guidelines.skip_rule;
  const list = el("guidelines");
  list.innerHTML = "";
  for (const entry of guidelines.categories) {
    const item = document.createElement("li");
    const prompt = document.createElement("strong");
    prompt.textContent = `${entry.category}: ${entry.prompt}`;
    const guidance = document.createElement("p");
    guidance.textContent = entry.guidance;
    item.append(prompt, guidance);
    list.append(item);
  }
}

async function refreshProgress() {
  const progress = await api.progress();
  const mine = progress[annotator];
  if (!mine) return;
  const bar = el<HTMLProgressElement>("progress-bar");
  bar.max = mine.total;
  bar.value = mine.completed;
  el("progress-text").textContent = `${mine.completed} / ${mine.total}`;
}

function renderForm() {
  const locked = skipLocked(form);
  for (const category of CATEGORIES) {
    const row = el(`row-${category}`);
    row.classList.toggle("focused", category === focused);
    row.classList.toggle("locked", locked && category !== "acceptable");
    for (const value of ["yes", "no"] as const) {
      const button = el<HTMLButtonElement>(`${category}-${value}`);
      button.classList.toggle("selected", form[category] === value);
      button.disabled = locked && category !== "acceptable";
    }
  }
  el("skip-indicator").hidden = !locked;
  el<HTMLButtonElement>("submit").disabled = !canSubmit(form);
}

function renderCard() {
  if (!card) return;
  el("position").textContent = `${card.position} of ${card.total}`;
  el("question").textContent = card.question;
  const answer = el("answer");
  answer.textContent = revealed ? card.answer : "(press space or Reveal to show the answer)";
  answer.classList.toggle("hidden-answer", !revealed);
  renderForm();
}

async function advance() {
  form = emptyForm();
  focused = "acceptable";
  revealed = false;
  const next = await api.next(annotator);
  if (isDone(next)) {
    card = null;
    el("annotation-view").hidden = true;
    el("done-view").hidden = false;
    const link = el<HTMLAnchorElement>("export-link");
    link.href = `${params.get("service") ?? ""}/api/export`;
    return;
  }
  card = next;
  renderCard();
  await refreshProgress();
}

async function submit() {
  if (!card || !canSubmit(form)) return;
  const body = {
    pair_id: card.pair_id,
    annotator_id: annotator,
    label: toWireLabel(form),
  };
  try {
    await api.submit(body);
  } catch (err) {
    // keep the filled form so nothing is lost; the user can retry
    if (err instanceof ApiError) {
      setStatus(`submission failed (${err.status || "network"}): ${err.message}. Retry when ready.`);
    }
    return;
  }
  setStatus("");
  await advance();
}

async function downloadDeck() {
  try {
    const [questions, records] = await Promise.all([api.questions(), api.exportRecords()]);
    const deck = buildDeck(questions, records);
    if (deck.warning) setStatus(deck.warning);
    const blob = new Blob([deck.text], { type: "text/tab-separated-values" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "deck.tsv";
    link.click();
    URL.revokeObjectURL(link.href);
  } catch (err) {
    setStatus(err instanceof Error ? err.message : String(err));
  }
}

function wire() {
  for (const category of CATEGORIES) {
    for (const value of ["yes", "no"] as const) {
      el(`${category}-${value}`).addEventListener("click", () => {
        form = setJudgment(form, category, value);
        focused = category;
        renderForm();
      });
    }
    el(`${category}-clear`).addEventListener("click", () => {
      form = clearJudgment(form, category);
      renderForm();
    });
  }
  el("reveal").addEventListener("click", () => {
    revealed = true;
    renderCard();
  });
  el("submit").addEventListener("click", () => void submit());
  el("deck-download").addEventListener("click", () => void downloadDeck());

  window.addEventListener("keydown", (event) => {
    if (el("annotation-view").hidden) return;
    const action = handleKey(event.key);
    if (action.kind === "none") return;
    event.preventDefault();
    if (action.kind === "focus") {
      focused = action.category;
      renderForm();
    } else if (action.kind === "judge") {
      form = setJudgment(form, focused, action.value);
      renderForm();
    } else if (action.kind === "reveal") {
      revealed = true;
      renderCard();
    } else if (action.kind === "submit") {
      void submit();
    }
  });
}

async function start() {
  el("annotator-name").textContent = annotator;
  wire();
  try {
    await loadGuidelines();
    await advance();
  } catch (err) {
    setStatus(err instanceof Error ? err.message : String(err));
  }
}

void start();
