"""Local searchable corpus: a positional inverted index answering
exact-phrase queries with single-token wildcards, plus an n-gram
frequency table.

External formats:

* corpus input: UTF-8 plain text, either one document per line or one
  document per file in a directory;
* n-gram table: Web1T-compatible TSV, ``token[ token...]<TAB>count``;
* persisted index: single binary file, 4-byte magic ``NCIX`` + one
  format version byte + payload.
"""

from __future__ import annotations

import pickle
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol

INDEX_MAGIC = b"NCIX"
INDEX_VERSION = 1

DEFAULT_SNIPPET_RADIUS = 10
DEFAULT_SEARCH_CAP = 1000

MAX_QUERY_SLOTS = 16
MAX_NGRAM_LEN = 5

# words (with optional internal apostrophe) or single punctuation marks
_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*|[^\sa-z0-9]")


class CorpusError(ValueError):
    """Raised for malformed queries, corpora, and index files."""


def tokenize(text: str) -> list[str]:
    """Lowercase and split into word and punctuation tokens."""
    return _TOKEN_RE.findall(text.lower())


def read_corpus(path, per_file: bool = False) -> list[list[str]]:
    """Read documents as token lists; one per line, or one per file when
    ``per_file`` is set and ``path`` is a directory (files in sorted
    order so document ids are stable)."""
    path = Path(path)
    docs: list[list[str]] = []
    if per_file or path.is_dir():
        if not path.is_dir():
            raise CorpusError(f"not a directory: {path}")
        for child in sorted(path.iterdir()):
            if child.is_file():
                toks = tokenize(child.read_text(encoding="utf-8"))
                if toks:
                    docs.append(toks)
    else:
        for line in path.read_text(encoding="utf-8").splitlines():
            toks = tokenize(line)
            if toks:
                docs.append(toks)
    return docs


@dataclass(frozen=True)
class PhraseQuery:
    """An ordered sequence of literal tokens and single-token wildcards.

    Wildcards are stored as ``None``; ``str()`` renders them as ``*``.
    """

    slots: tuple[str | None, ...]

    def __post_init__(self):
        if not self.slots or len(self.slots) > MAX_QUERY_SLOTS:
            raise CorpusError(f"query must have 1..{MAX_QUERY_SLOTS} slots")
        if not any(s is not None for s in self.slots):
            raise CorpusError("query needs at least one literal")
        for s in self.slots:
            if s is not None and (not s or s != s.lower() or " " in s):
                raise CorpusError(f"bad literal: {s!r}")

    @classmethod
    def parse(cls, text: str) -> "PhraseQuery":
        return cls(tuple(None if t == "*" else t for t in text.split()))

    def __str__(self):
        return " ".join("*" if s is None else s for s in self.slots)

    def __len__(self):
        return len(self.slots)

    @property
    def wildcard_count(self) -> int:
        return sum(1 for s in self.slots if s is None)


@dataclass(frozen=True)
class Snippet:
    """A matched token window with provenance.

    ``match_start``/``match_end`` are document-absolute token offsets of
    the matched span (end exclusive); ``window_start`` anchors
    ``tokens`` within the document.
    """

    doc_id: int
    match_start: int
    match_end: int
    window_start: int
    tokens: tuple[str, ...]

    @property
    def window_end(self) -> int:
        return self.window_start + len(self.tokens)

    def rel(self, abs_pos: int) -> int:
        """Map a document-absolute offset into ``tokens``."""
        return abs_pos - self.window_start

    @property
    def match_tokens(self) -> tuple[str, ...]:
        return self.tokens[self.rel(self.match_start):self.rel(self.match_end)]


class SnippetProvider(Protocol):
    """Anything that can answer phrase queries with snippets."""

    def search(self, query: PhraseQuery,
               cap: int = DEFAULT_SEARCH_CAP) -> list[Snippet]:
        ...


class CorpusIndex:
    """Positional inverted index; immutable after build, so concurrent
    searches need no locking."""

    def __init__(self, documents: Iterable[list[str]],
                 snippet_radius: int = DEFAULT_SNIPPET_RADIUS):
        docs = [list(d) for d in documents]
        if not docs:
            raise CorpusError("empty document collection")
        self._docs: list[list[str]] = docs
        self._radius = snippet_radius
        self._postings: dict[str, list[tuple[int, int]]] = {}
        for doc_id, tokens in enumerate(docs):
            for pos, token in enumerate(tokens):
                self._postings.setdefault(token, []).append((doc_id, pos))
        self._total_tokens = sum(len(d) for d in docs)

    @property
    def doc_count(self) -> int:
        return len(self._docs)

    @property
    def total_tokens(self) -> int:
        return self._total_tokens

    def postings(self, token: str) -> list[tuple[int, int]]:
        return self._postings.get(token, [])

    def search(self, query: PhraseQuery,
               cap: int = DEFAULT_SEARCH_CAP) -> list[Snippet]:
        """All spans matching the query slot-for-slot, in corpus order,
        at most ``cap`` of them.  Each wildcard consumes exactly one
        token."""
        if cap < 1:
            raise CorpusError("cap must be >= 1")
        # anchor on the rarest literal
        anchor_slot, anchor_token, best = -1, "", None
        for i, slot in enumerate(query.slots):
            if slot is None:
                continue
            n = len(self._postings.get(slot, ()))
            if best is None or n < best:
                anchor_slot, anchor_token, best = i, slot, n
        matches: list[tuple[int, int]] = []
        for doc_id, pos in self._postings.get(anchor_token, ()):
            start = pos - anchor_slot
            if start < 0:
                continue
            tokens = self._docs[doc_id]
            if start + len(query.slots) > len(tokens):
                continue
            ok = True
            for offset, slot in enumerate(query.slots):
                if slot is not None and tokens[start + offset] != slot:
                    ok = False
                    break
            if ok:
                matches.append((doc_id, start))
                if len(matches) >= cap:
                    break
        return [self._snippet(d, s, s + len(query.slots)) for d, s in matches]

    def _snippet(self, doc_id: int, start: int, end: int) -> Snippet:
        tokens = self._docs[doc_id]
        w0 = max(0, start - self._radius)
        w1 = min(len(tokens), end + self._radius)
        return Snippet(doc_id, start, end, w0, tuple(tokens[w0:w1]))

    # -- persistence -------------------------------------------------------

    def save(self, path) -> None:
        payload = {
            "radius": self._radius,
            "docs": self._docs,
        }
        blob = pickle.dumps(payload, protocol=4)
        Path(path).write_bytes(INDEX_MAGIC + bytes([INDEX_VERSION]) + blob)

    @classmethod
    def load(cls, path) -> "CorpusIndex":
        raw = Path(path).read_bytes()
        if raw[:4] != INDEX_MAGIC:
            raise CorpusError(f"not an index file: {path}")
        if raw[4] != INDEX_VERSION:
            raise CorpusError(f"unsupported index version {raw[4]}")
        payload = pickle.loads(raw[5:])
        return cls(payload["docs"], snippet_radius=payload["radius"])


class NGramTable:
    """Token-sequence frequency counts, lengths 1..5; absent n-grams
    count as zero."""

    def __init__(self, counts: dict[tuple[str, ...], int] | None = None):
        self._counts: dict[tuple[str, ...], int] = {}
        for key, value in (counts or {}).items():
            self._put(tuple(key), int(value))

    def _put(self, key: tuple[str, ...], value: int):
        if not 1 <= len(key) <= MAX_NGRAM_LEN:
            raise CorpusError(f"n-gram length out of range: {key!r}")
        if value < 1:
            raise CorpusError(f"non-positive count for {key!r}")
        self._counts[key] = value

    def __len__(self):
        return len(self._counts)

    def count(self, tokens) -> int:
        key = tuple(tokens)
        if not 1 <= len(key) <= MAX_NGRAM_LEN:
            raise CorpusError(f"n-gram length out of range: {key!r}")
        return self._counts.get(key, 0)

    @classmethod
    def from_corpus(cls, documents: Iterable[list[str]],
                    max_n: int = 2) -> "NGramTable":
        if not 1 <= max_n <= MAX_NGRAM_LEN:
            raise CorpusError(f"max_n out of range: {max_n}")
        counts: dict[tuple[str, ...], int] = {}
        for tokens in documents:
            for n in range(1, max_n + 1):
                for i in range(len(tokens) - n + 1):
                    key = tuple(tokens[i:i + n])
                    counts[key] = counts.get(key, 0) + 1
        return cls(counts)

    @classmethod
    def from_web1t(cls, path) -> "NGramTable":
        table = cls()
        for lineno, line in enumerate(
                Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            gram, sep, count = line.rpartition("\t")
            if not sep:
                raise CorpusError(f"{path}:{lineno}: expected TAB")
            try:
                value = int(count)
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: bad count {count!r}")
            table._put(tuple(gram.split()), value)
        return table

    def save_web1t(self, path) -> None:
        lines = [
            " ".join(key) + "\t" + str(self._counts[key])
            for key in sorted(self._counts)
        ]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
