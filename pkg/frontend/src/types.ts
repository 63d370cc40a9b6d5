export const CATEGORIES = [
  "acceptable",
  "grammatical",
  "interpretable",
  "relevant",
  "correct",
] as const;

export type Category = (typeof CATEGORIES)[number];

export type Judgment = "yes" | "no";
export type TriState = Judgment | "unset";
export type WireValue = Judgment | "skipped";

export type WireLabel = Record<Category, WireValue>;

export interface QuestionCard {
  pair_id: string;
  question: string;
  answer: string;
  position: number;
  total: number;
}

export interface AnnotationBody {
  pair_id: string;
  annotator_id: string;
  label: WireLabel;
}

export interface ExportRecord {
  pair_id: string;
  annotator_id: string;
  label: WireLabel;
  submitted_at: string;
  revision: number;
}

export interface QuestionRow {
  pair_id: string;
  question: string;
  answer: string;
}

export interface GuidelineEntry {
  category: Category;
  prompt: string;
  guidance: string;
}

export interface Guidelines {
  skip_rule: string;
  categories: GuidelineEntry[];
}

export interface ProgressEntry {
  completed: number;
  total: number;
}
