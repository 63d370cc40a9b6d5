// Keyboard layer: digits focus a criterion, y/n judge the focused one,
// space reveals the answer, enter submits (the caller checks validity).

import { CATEGORIES, Category, Judgment } from "./types.js";

export type KeyAction =
  | { kind: "focus"; category: Category }
  | { kind: "judge"; value: Judgment }
  | { kind: "reveal" }
  | { kind: "submit" }
  | { kind: "none" };

export function handleKey(key: string): KeyAction {
  const lower = key.toLowerCase();
  const digit = Number.parseInt(lower, 10);
  if (digit >= 1 && digit <= CATEGORIES.length) {
    return { kind: "focus", category: CATEGORIES[digit - 1] };
  }
  if (lower === "y") {
    return { kind: "judge", value: "yes" };
  }
  if (lower === "n") {
    return { kind: "judge", value: "no" };
  }
  if (lower === " " || lower === "spacebar") {
    return { kind: "reveal" };
  }
  if (lower === "enter") {
    return { kind: "submit" };
  }
  return { kind: "none" };
}

export function nextFocus(current: Category): Category {
  const index = CATEGORIES.indexOf(current);
  return CATEGORIES[Math.min(index + 1, CATEGORIES.length - 1)];
}
