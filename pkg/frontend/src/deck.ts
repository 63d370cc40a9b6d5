// Flashcard deck curation: keep the pairs a majority of annotators marked
// acceptable and render them as tab-separated question/answer lines.

import { ExportRecord, QuestionRow } from "./types.js";

export interface DeckResult {
  text: string;
  kept: string[];
  warning?: string;
}

export function majorityAcceptable(records: ExportRecord[]): Map<string, boolean> {
  const votes = new Map<string, { yes: number; total: number }>();
  for (const record of records) {
    const entry = votes.get(record.pair_id) ?? { yes: 0, total: 0 };
    entry.total += 1;
    if (record.label.acceptable === "yes") {
      entry.yes += 1;
    }
    votes.set(record.pair_id, entry);
  }
  const out = new Map<string, boolean>();
  for (const [pairId, { yes, total }] of votes) {
    out.set(pairId, yes * 2 > total);
  }
  return out;
}

export function buildDeck(questions: QuestionRow[], records: ExportRecord[]): DeckResult {
  if (records.length === 0) {
    throw new Error("no annotations yet");
  }
  const accepted = majorityAcceptable(records);
  const kept = questions.filter((q) => accepted.get(q.pair_id) === true);
  const text = kept.map((q) => `${q.question}\t${q.answer}`).join("\n");
  const result: DeckResult = { text, kept: kept.map((q) => q.pair_id) };
  if (kept.length === 0) {
    result.warning = "no pairs were majority-acceptable; deck is empty";
  }
  return result;
}
