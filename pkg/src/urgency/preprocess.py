"""Deterministic text-cleaning pipeline producing token lists for featurization.

Fixed order: lowercase -> replace everything outside [a-z0-9] with spaces ->
collapse whitespace -> drop stopwords -> Porter-stem each survivor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ._porter import stem as stem_token
from ._stopwords import STOPWORDS, STOPWORDS_VERSION

__all__ = [
    "TokenizedPost",
    "clean_text",
    "remove_stopwords",
    "stem_token",
    "preprocess_post",
    "preprocess_texts",
    "STOPWORDS",
    "STOPWORDS_VERSION",
]

_NON_ALNUM = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class TokenizedPost:
    post_id: str
    tokens: tuple[str, ...]


def clean_text(text: str) -> str:
    """Lowercase, strip every char outside a-z0-9 to spaces, collapse runs."""
    return " ".join(_NON_ALNUM.sub(" ", text.lower()).split())


def remove_stopwords(tokens: list[str]) -> list[str]:
    return [t for t in tokens if t not in STOPWORDS]


def tokenize(text: str) -> list[str]:
    """Full pipeline on one text: clean, split, de-stopword, stem.

    Tokens that stem to the empty string (a bare plural "s") are dropped so
    every output token stays non-empty.
    """
    cleaned = clean_text(text)
    if not cleaned:
        return []
    stems = (stem_token(t) for t in remove_stopwords(cleaned.split(" ")))
    return [s for s in stems if s]


def preprocess_post(post) -> TokenizedPost:
    """Tokenize a RawPost (anything with .post_id and .text attributes)."""
    return TokenizedPost(post_id=post.post_id, tokens=tuple(tokenize(post.text)))


def preprocess_texts(posts) -> list[TokenizedPost]:
    return [preprocess_post(p) for p in posts]
