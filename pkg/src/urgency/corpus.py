"""Load, validate, filter, and summarize labeled forum-post datasets.

Two CSV source formats are supported: "upenn" (post_id, student_id,
timestamp, text, label; integer labels) and "stanford" (same roles, half-step
labels allowed, header names overridable via a column map).
"""

from __future__ import annotations

import csv
import logging
import math
import re
from dataclasses import dataclass

from .errors import ConfigError, DataError

logger = logging.getLogger("urgency")

LABEL_MIN = 1.0
LABEL_MAX = 7.0

# column roles -> default header names, shared by both formats
DEFAULT_COLUMNS = {
    "post_id": "post_id",
    "student_id": "student_id",
    "timestamp": "timestamp",
    "text": "text",
    "label": "label",
}

REQUIRED_ROLES = ("text", "label")


@dataclass(frozen=True)
class RawPost:
    post_id: str
    student_id: str
    timestamp: str
    text: str


@dataclass(frozen=True)
class LabeledPost:
    post: RawPost
    label: float


@dataclass(frozen=True)
class CorpusStats:
    n_posts: int
    n_students: int
    label_histogram: dict[float, int]
    word_count_mean: float
    word_count_stdev: float
    word_count_min: int
    word_count_max: int


def validate_label(value: float) -> float:
    """Labels live on the 1-7 scale quantized to halves (test sets use .5 steps)."""
    if not math.isfinite(value):
        raise DataError(f"label {value!r} is not finite")
    if not (LABEL_MIN <= value <= LABEL_MAX):
        raise DataError(f"label {value} outside [{LABEL_MIN:g}, {LABEL_MAX:g}]")
    doubled = value * 2.0
    if doubled != round(doubled):
        raise DataError(f"label {value} is not a multiple of 0.5")
    return value


def _resolve_columns(header, column_map, path):
    names = dict(DEFAULT_COLUMNS)
    if column_map:
        unknown = set(column_map) - set(DEFAULT_COLUMNS)
        if unknown:
            raise ConfigError(f"unknown column roles: {sorted(unknown)}")
        names.update(column_map)
    index = {}
    for role, name in names.items():
        if name in header:
            index[role] = header.index(name)
    missing = [r for r in REQUIRED_ROLES if r not in index]
    if missing:
        raise ConfigError(
            f"{path}: required column(s) {missing} not found in header {header}; "
            "map them with --column-map role=name"
        )
    return index


def load_posts(
    path,
    format: str = "upenn",
    column_map: dict[str, str] | None = None,
    require_label: bool = True,
):
    """Read a corpus CSV; returns (posts, labels) with labels=None rows allowed
    only when require_label is False."""
    if format not in ("upenn", "stanford"):
        raise ConfigError(f"unknown corpus format {format!r}")
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open corpus file {path}: {exc}") from exc
    posts: list[RawPost] = []
    labels: list[float | None] = []
    bad_labels: list[str] = []
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a CSV header row")
        except csv.Error as exc:
            raise DataError(f"{path}: row 1: {exc}") from exc
        if require_label:
            index = _resolve_columns(header, column_map, path)
        else:
            names = dict(DEFAULT_COLUMNS)
            if column_map:
                names.update(column_map)
            index = {r: header.index(n) for r, n in names.items() if n in header}
            if "text" not in index:
                raise ConfigError(f"{path}: no text column in header {header}")
        seen_ids = set()
        synthesized_students = 0
        row_no = 1
        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                raise DataError(f"{path}: row {row_no + 1}: {exc}") from exc
            row_no += 1
            if not row:
                continue
            width = max(index.values())
            if len(row) <= width:
                raise DataError(
                    f"{path}: row {row_no}: expected at least {width + 1} fields, got {len(row)}"
                )

            def get(role, default=""):
                return row[index[role]] if role in index else default

            text = get("text")
            if not text:
                raise DataError(f"{path}: row {row_no}: empty text field")
            post_id = get("post_id") or str(row_no - 2)
            if post_id in seen_ids:
                raise DataError(f"{path}: row {row_no}: duplicate post_id {post_id!r}")
            seen_ids.add(post_id)
            student_id = get("student_id")
            if not student_id:
                student_id = post_id
                synthesized_students += 1
            posts.append(
                RawPost(
                    post_id=post_id,
                    student_id=student_id,
                    timestamp=get("timestamp"),
                    text=text,
                )
            )
            raw_label = get("label") if "label" in index else ""
            if raw_label == "":
                if require_label:
                    bad_labels.append(f"row {row_no}: missing label")
                labels.append(None)
            else:
                try:
                    value = validate_label(float(raw_label))
                except ValueError:
                    bad_labels.append(f"row {row_no}: unparseable label {raw_label!r}")
                    labels.append(None)
                except DataError as exc:
                    bad_labels.append(f"row {row_no}: {exc}")
                    labels.append(None)
                else:
                    labels.append(value)
    if require_label and bad_labels:
        shown = "; ".join(bad_labels[:10])
        more = f" (+{len(bad_labels) - 10} more)" if len(bad_labels) > 10 else ""
        raise DataError(f"{path}: invalid labels: {shown}{more}")
    if synthesized_students:
        logger.warning(
            "%s: %d rows had no student_id; synthesized from post_id "
            "(grouping degrades to post level)",
            path,
            synthesized_students,
        )
    return posts, labels


def load_corpus(
    path,
    format: str = "upenn",
    column_map: dict[str, str] | None = None,
) -> list[LabeledPost]:
    posts, labels = load_posts(path, format=format, column_map=column_map)
    return [LabeledPost(post=p, label=v) for p, v in zip(posts, labels)]


def save_corpus(posts: list[LabeledPost], path) -> None:
    """Serialize to the canonical upenn-format CSV (used by ingest round-trips)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["post_id", "student_id", "timestamp", "text", "label"])
        for lp in posts:
            p = lp.post
            writer.writerow([p.post_id, p.student_id, p.timestamp, p.text, format_label(lp.label)])


def format_label(value: float) -> str:
    return f"{value:g}"


# --- filtering -------------------------------------------------------------

_URL_PREFIXES = ("http://", "https://", "www.")
_MATH_CHARS = set("0123456789+-*/^=()[]{}<>.,:;~_'\" %|!?")
_LETTER_RUN = re.compile(r"[^\W\d_]{2,}")


def _is_math_formula(text: str) -> bool:
    """Only digits, operators, parentheses; letters allowed as lone variables."""
    if _LETTER_RUN.search(text):
        return False
    return all(c.isspace() or c.isalpha() or c in _MATH_CHARS for c in text)


def _drop_reason(text: str) -> str | None:
    alpha = [c for c in text if c.isalpha()]
    # language heuristic needs letters to judge; symbol posts fall through to (b)
    if alpha:
        ascii_alpha = sum(1 for c in alpha if c.isascii())
        if ascii_alpha / len(alpha) < 0.5:
            return "non-english"
    if not any(c.isalnum() for c in text):
        return "symbols-only"
    if _is_math_formula(text):
        return "math-only"
    tokens = text.split()
    if tokens and all(tok.lower().startswith(_URL_PREFIXES) for tok in tokens):
        return "links-only"
    return None


def filter_posts(posts):
    """Partition posts into (kept, dropped); dropped entries carry a reason tag."""
    kept = []
    dropped = []
    for post in posts:
        reason = _drop_reason(post.text)
        if reason is None:
            kept.append(post)
        else:
            dropped.append((post, reason))
    return kept, dropped


def filter_labeled(posts: list[LabeledPost]):
    kept = []
    dropped = []
    for lp in posts:
        reason = _drop_reason(lp.post.text)
        if reason is None:
            kept.append(lp)
        else:
            dropped.append((lp, reason))
    return kept, dropped


# --- statistics ------------------------------------------------------------


def compute_stats(posts: list[LabeledPost], token_counts) -> CorpusStats:
    """Label histogram plus population stats over per-post token counts."""
    if not posts:
        raise DataError("empty corpus: no statistics to compute")
    if len(token_counts) != len(posts):
        raise DataError(
            f"token_counts length {len(token_counts)} != posts length {len(posts)}"
        )
    histogram: dict[float, int] = {}
    for lp in posts:
        histogram[lp.label] = histogram.get(lp.label, 0) + 1
    n = len(token_counts)
    mean = sum(token_counts) / n
    var = sum((c - mean) ** 2 for c in token_counts) / n
    return CorpusStats(
        n_posts=len(posts),
        n_students=len({lp.post.student_id for lp in posts}),
        label_histogram=dict(sorted(histogram.items())),
        word_count_mean=mean,
        word_count_stdev=math.sqrt(var),
        word_count_min=min(token_counts),
        word_count_max=max(token_counts),
    )
