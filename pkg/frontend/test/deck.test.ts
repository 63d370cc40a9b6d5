import { describe, expect, it } from "vitest";

import { buildDeck, majorityAcceptable } from "../src/deck.js";
import { ExportRecord, QuestionRow, WireLabel } from "../src/types.js";

function record(pairId: string, annotator: string, acceptable: "yes" | "no"): ExportRecord {
  const label: WireLabel = {
    acceptable,
    grammatical: "yes",
    interpretable: acceptable,
    relevant: "yes",
    correct: "yes",
  };
  return { pair_id: pairId, annotator_id: annotator, label, submitted_at: "t", revision: 1 };
}

const QUESTIONS: QuestionRow[] = [
  { pair_id: "p1", question: "What is a posting list?", answer: "Posting List" },
  { pair_id: "p2", question: "What is a stop word?", answer: "Stop Word" },
  { pair_id: "p3", question: "What is gap encoding?", answer: "Gap Encoding" },
];

describe("deck curation", () => {
  it("keeps exactly the majority-acceptable pairs, in question order", () => {
    const records = [
      record("p1", "A1", "yes"), record("p1", "A2", "yes"), record("p1", "A3", "no"),
      record("p2", "A1", "no"), record("p2", "A2", "no"), record("p2", "A3", "yes"),
      record("p3", "A1", "yes"), record("p3", "A2", "yes"), record("p3", "A3", "yes"),
    ];
    const majority = majorityAcceptable(records);
    expect(majority.get("p1")).toBe(true);
    expect(majority.get("p2")).toBe(false);
    expect(majority.get("p3")).toBe(true);

    const deck = buildDeck(QUESTIONS, records);
    expect(deck.kept).toEqual(["p1", "p3"]);
    expect(deck.text).toBe(
      "What is a posting list?\tPosting List\nWhat is gap encoding?\tGap Encoding",
    );
    expect(deck.warning).toBeUndefined();
  });

  it("rejects an empty export", () => {
    expect(() => buildDeck(QUESTIONS, [])).toThrow("no annotations yet");
  });

  it("returns an empty deck with a warning when everything was rejected", () => {
    const records = QUESTIONS.flatMap((q) =>
      ["A1", "A2", "A3"].map((a) => record(q.pair_id, a, "no")),
    );
    const deck = buildDeck(QUESTIONS, records);
    expect(deck.kept).toEqual([]);
    expect(deck.text).toBe("");
    expect(deck.warning).toMatch(/empty/);
  });

  it("treats a tie as not acceptable", () => {
    const records = [record("p1", "A1", "yes"), record("p1", "A2", "no")];
    expect(majorityAcceptable(records).get("p1")).toBe(false);
  });
});
