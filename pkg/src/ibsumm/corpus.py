"""Corpus loading, rule-based sentence segmentation, and the shared tokenizer.

Every stage of the pipeline (keyphrase extraction, scoring, ROUGE) uses the
same token definition so there is no cross-module tokenization drift.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

log = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Boundary candidate: sentence-final punctuation, whitespace, then an
# uppercase letter or digit.
_BOUNDARY_RE = re.compile(r"[.?!](?=\s+[A-Z0-9])")

# Abbreviations that commonly precede a period mid-sentence in scientific
# text.  Single alphabetic letters (initials, "e.g."/"i.e." fragments) are
# guarded separately.
ABBREVIATIONS = frozenset({
    "al", "fig", "figs", "eq", "eqs", "sec", "secs", "ref", "refs",
    "tab", "no", "vol", "pp", "cf", "vs", "etc", "resp", "approx",
    "dr", "mr", "mrs", "ms", "prof", "st", "jr", "inc", "dept",
})


class CorpusError(Exception):
    """Fatal corpus-level problem (unreadable file, zero valid documents)."""


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase and split on non-alphanumeric boundaries, dropping empties."""
    return tuple(_TOKEN_RE.findall(text.lower()))


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    tokens: tuple[str, ...]

    @property
    def word_count(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]
    reference: tuple[Sentence, ...] = ()
    category: str | None = None


def _make_sentences(texts: list[str]) -> tuple[Sentence, ...]:
    out = []
    for text in texts:
        text = text.strip()
        if not text:
            continue
        out.append(Sentence(index=len(out), text=text, tokens=tokenize(text)))
    return tuple(out)


def _preceding_word(text: str, punct_pos: int) -> str:
    """The alphabetic run immediately before the punctuation mark."""
    i = punct_pos
    while i > 0 and text[i - 1].isalpha():
        i -= 1
    return text[i:punct_pos]


def segment(raw_text: str) -> tuple[Sentence, ...]:
    """Split raw text into Sentences on ., ?, ! followed by whitespace and an
    uppercase letter or digit, guarding common abbreviations and initials."""
    pieces = []
    start = 0
    for m in _BOUNDARY_RE.finditer(raw_text):
        if raw_text[m.start()] == ".":
            word = _preceding_word(raw_text, m.start())
            if len(word) == 1 or word.lower() in ABBREVIATIONS:
                continue
        pieces.append(raw_text[start:m.end()])
        start = m.end()
    pieces.append(raw_text[start:])
    return _make_sentences(pieces)


def filter_by_length(
    sentences: tuple[Sentence, ...] | list[Sentence],
    min_words: int,
    max_words: int,
) -> list[Sentence]:
    """Keep sentences with min_words <= word_count <= max_words (inclusive),
    preserving order and original indices."""
    if min_words > max_words:
        raise ValueError(
            f"min_words ({min_words}) must not exceed max_words ({max_words})"
        )
    return [s for s in sentences if min_words <= s.word_count <= max_words]


def _parse_record(obj: dict) -> Document:
    doc_id = obj.get("article_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("missing or invalid 'article_id'")
    has_split = "article_text" in obj
    has_raw = "raw_text" in obj
    if has_split == has_raw:
        raise ValueError("exactly one of 'article_text' or 'raw_text' required")
    if has_split:
        texts = obj["article_text"]
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise ValueError("'article_text' must be an array of strings")
        sentences = _make_sentences(texts)
    else:
        if not isinstance(obj["raw_text"], str):
            raise ValueError("'raw_text' must be a string")
        sentences = segment(obj["raw_text"])
    abstract = obj.get("abstract_text", [])
    if not isinstance(abstract, list) or not all(isinstance(t, str) for t in abstract):
        raise ValueError("'abstract_text' must be an array of strings")
    category = obj.get("category")
    if category is not None and not isinstance(category, str):
        raise ValueError("'category' must be a string")
    return Document(
        id=doc_id,
        sentences=sentences,
        reference=_make_sentences(abstract),
        category=category,
    )


def load_corpus(path: str | Path, limit: int | None = None) -> list[Document]:
    """Load a JSON-lines corpus file.

    Malformed lines and empty documents are skipped with a logged warning;
    a file that yields zero valid documents is fatal.
    """
    path = Path(path)
    docs: list[Document] = []
    bad_lines = 0
    empty_docs = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if limit is not None and len(docs) >= limit:
                break
            try:
                doc = _parse_record(json.loads(line))
            except (json.JSONDecodeError, ValueError) as exc:
                bad_lines += 1
                log.error("%s:%d: skipping malformed record: %s", path, lineno, exc)
                continue
            if not doc.sentences:
                empty_docs += 1
                log.warning("%s:%d: document %r has no sentences, skipped",
                            path, lineno, doc.id)
                continue
            docs.append(doc)
    if bad_lines or empty_docs:
        log.warning("%s: skipped %d malformed lines, %d empty documents",
                    path, bad_lines, empty_docs)
    if not docs:
        raise CorpusError(f"{path}: no valid documents")
    return docs


def write_corpus(documents: list[Document], path: str | Path) -> None:
    """Write documents back out in the corpus JSON-lines schema."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for doc in documents:
            obj: dict = {
                "article_id": doc.id,
                "article_text": [s.text for s in doc.sentences],
            }
            if doc.reference:
                obj["abstract_text"] = [s.text for s in doc.reference]
            if doc.category is not None:
                obj["category"] = doc.category
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
