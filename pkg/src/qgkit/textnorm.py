"""Text normalization shared by ingest, matching, and metrics.

All substring matching in the toolkit (key-term lookups, dedup keys,
round-trip comparisons) goes through one normalization so the corpus and
metrics modules can never disagree on what counts as a match.
"""

import string

_PUNCT = set(string.punctuation)


def collapse_ws(text: str) -> str:
    """Collapse runs of whitespace (incl. newlines) to single spaces and trim."""
    return " ".join(text.split())


def fold(text: str) -> str:
    """Matching form: whitespace-collapsed and case-folded."""
    return collapse_ws(text).casefold()


def contains_folded(needle: str, haystack: str) -> bool:
    """Case-insensitive, whitespace-normalized substring test."""
    return fold(needle) in fold(haystack)


def strip_trailing_punct(token: str) -> str:
    return token.rstrip(string.punctuation)


def strip_punct_fold(text: str) -> str:
    """Aggressive form for round-trip answer comparison: case-folded,
    punctuation removed, whitespace collapsed."""
    cleaned = "".join(c for c in text.casefold() if c not in _PUNCT)
    return collapse_ws(cleaned)
