// Scripted end-to-end session against the live annotation service started
// by globalSetup: three annotators work through the 10-item fixture eval
// set with the same form logic the browser uses, then the export and the
// curated deck are checked against the script's intent.

import { beforeAll, describe, expect, it } from "vitest";

import { AnnotationApi, isDone } from "../src/api.js";
import { buildDeck } from "../src/deck.js";
import { canSubmit, emptyForm, setJudgment, skipLocked, toWireLabel } from "../src/formState.js";
import { ExportRecord, Judgment, WireLabel } from "../src/types.js";
import { BASE_URL } from "./globalSetup.js";

const api = new AnnotationApi(BASE_URL);

const PAIR_IDS = Array.from({ length: 10 }, (_, i) => `ui-${String(i).padStart(5, "0")}`);

// which pairs each annotator accepts outright (skip path)
const ACCEPTS: Record<string, Set<number>> = {
  A1: new Set([0, 1, 2, 3, 4, 5, 6]),
  A2: new Set([0, 1, 2, 3, 4, 7]),
  A3: new Set([2, 3, 4, 5, 6, 8]),
};
const MAJORITY_YES = PAIR_IDS.filter(
  (_, i) => Number(ACCEPTS.A1.has(i)) + Number(ACCEPTS.A2.has(i)) + Number(ACCEPTS.A3.has(i)) >= 2,
);

// explicit judgments used on the reject path, varied per pair index
function rejectJudgments(index: number): Record<string, Judgment> {
  return {
    grammatical: index % 2 === 0 ? "yes" : "no",
    interpretable: index % 3 === 0 ? "yes" : "no",
    relevant: "yes",
    correct: index % 4 === 0 ? "no" : "yes",
  };
}

function expectedLabel(annotator: string, index: number): WireLabel {
  if (ACCEPTS[annotator].has(index)) {
    return {
      acceptable: "yes",
      grammatical: "yes",
      interpretable: "yes",
      relevant: "yes",
      correct: "yes",
    };
  }
  const j = rejectJudgments(index);
  return {
    acceptable: "no",
    grammatical: j.grammatical,
    interpretable: j.interpretable,
    relevant: j.relevant,
    correct: j.correct,
  };
}

describe("annotation workflow over the live service", () => {
  beforeAll(async () => {
    const guidelines = await api.guidelines();
    expect(guidelines.categories.map((c) => c.category)).toEqual([
      "acceptable", "grammatical", "interpretable", "relevant", "correct",
    ]);
  });

  it("runs three scripted sessions with skip-lock and validation", async () => {
    for (const annotator of ["A1", "A2", "A3"]) {
      let seen = 0;
      for (;;) {
        const card = await api.next(annotator);
        if (isDone(card)) break;
        const index = PAIR_IDS.indexOf(card.pair_id);
        expect(index).toBeGreaterThanOrEqual(0);
        expect(card.position).toBe(seen + 1);
        expect(card.total).toBe(10);

        let form = emptyForm();
        if (ACCEPTS[annotator].has(index)) {
          form = setJudgment(form, "acceptable", "yes");
          // skip-lock engages: the other controls are forced and frozen
          expect(skipLocked(form)).toBe(true);
          expect(setJudgment(form, "interpretable", "no")).toEqual(form);
        } else {
          form = setJudgment(form, "acceptable", "no");
          // half-filled forms can never be submitted
          expect(canSubmit(form)).toBe(false);
          expect(() => toWireLabel(form)).toThrow();
          for (const [category, value] of Object.entries(rejectJudgments(index))) {
            form = setJudgment(form, category as never, value);
          }
        }
        expect(canSubmit(form)).toBe(true);
        const { revision } = await api.submit({
          pair_id: card.pair_id,
          annotator_id: annotator,
          label: toWireLabel(form),
        });
        expect(revision).toBe(1);
        seen += 1;
      }
      expect(seen).toBe(10);
    }
    const progress = await api.progress();
    for (const annotator of ["A1", "A2", "A3"]) {
      expect(progress[annotator]).toEqual({ completed: 10, total: 10 });
    }
  });

  it("rejects a hand-built invalid body at the service boundary", async () => {
    // the client cannot build this body; posting it raw proves the client
    // rule is a strict subset of the service rule
    const response = await fetch(`${BASE_URL}/api/annotations`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        pair_id: PAIR_IDS[0],
        annotator_id: "A1",
        label: { acceptable: "no", grammatical: "skipped", interpretable: "yes",
                 relevant: "yes", correct: "yes" },
      }),
    });
    expect(response.status).toBe(400);
    const body = (await response.json()) as { detail: string };
    expect(body.detail).toMatch(/incomplete annotation/);
  });

  it("exports exactly the intended expanded labels", async () => {
    const records = await api.exportRecords("ui-ev");
    expect(records).toHaveLength(30);
    const expected: Array<[string, string, WireLabel]> = [];
    for (const pairId of PAIR_IDS) {
      for (const annotator of ["A1", "A2", "A3"]) {
        expected.push([pairId, annotator, expectedLabel(annotator, PAIR_IDS.indexOf(pairId))]);
      }
    }
    expected.sort((a, b) => (a[0] + a[1] < b[0] + b[1] ? -1 : 1));
    records.forEach((record: ExportRecord, i: number) => {
      const [pairId, annotator, label] = expected[i];
      expect([record.pair_id, record.annotator_id]).toEqual([pairId, annotator]);
      expect(record.label).toEqual(label);
      expect(record.revision).toBe(1);
    });
  });

  it("curates the deck to exactly the majority-acceptable pairs", async () => {
    const [questions, records] = await Promise.all([api.questions(), api.exportRecords()]);
    const deck = buildDeck(questions, records);
    expect(deck.kept).toEqual(MAJORITY_YES);
    const lines = deck.text.split("\n");
    expect(lines).toHaveLength(MAJORITY_YES.length);
    for (const line of lines) {
      const [question, answer] = line.split("\t");
      expect(question).toMatch(/^What is/);
      expect(answer.length).toBeGreaterThan(0);
    }
  });

  it("resubmission bumps the revision and overrides the export", async () => {
    const { revision } = await api.submit({
      pair_id: PAIR_IDS[9],
      annotator_id: "A1",
      label: { acceptable: "yes", grammatical: "skipped", interpretable: "skipped",
               relevant: "skipped", correct: "skipped" },
    });
    expect(revision).toBe(2);
    const records = await api.exportRecords();
    const updated = records.find(
      (r: ExportRecord) => r.pair_id === PAIR_IDS[9] && r.annotator_id === "A1",
    );
    expect(updated?.revision).toBe(2);
    expect(updated?.label.acceptable).toBe("yes");
  });
});
