"""Step 1 of the loop: turn snippets matched by step-1 queries into NC
candidates and filter them.

Argument extraction avoids taggers and parsers on purpose: a candidate
argument is the noun nearest the matched pattern inside the phrase
delimited by punctuation, conjunctions, prepositions, or relative
pronouns.  When a delimited phrase holds several nouns ("a range of
white grapes") the one adjacent to the pattern wins, even where that is
the semantically wrong head; that failure mode is part of the method.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import NGramTable, Snippet
from .lexicon import Lexicon
from .model import NounCompound, Pattern
from .queries import Step1Query

BEFORE = "before"
AFTER = "after"

DEFAULT_MIN_NGRAM_COUNT = 100


@dataclass(frozen=True)
class NCCandidate:
    nc: NounCompound
    source_pattern: Pattern
    support: int


def is_delimiter(lexicon: Lexicon, token: str) -> bool:
    if not token:
        return True
    if not any(c.isalnum() for c in token):
        return True  # punctuation token
    return (token in lexicon.prepositions
            or token in lexicon.coordinating
            or token in lexicon.subordinating
            or token in lexicon.relative_pronouns)


def segment_argument(lexicon: Lexicon, snippet: Snippet, start_abs: int,
                     direction: str) -> str | None:
    """Scan outward from ``start_abs`` until a delimiter or the window
    edge; return the first noun met (the noun nearest the anchor), or
    None when the delimited phrase holds no noun."""
    step = 1 if direction == AFTER else -1
    pos = snippet.rel(start_abs)
    while 0 <= pos < len(snippet.tokens):
        token = snippet.tokens[pos]
        if is_delimiter(lexicon, token):
            return None
        if lexicon.is_noun(token):
            return token
        pos += step
    return None


def extract_nc(lexicon: Lexicon, query: Step1Query,
               snippet: Snippet) -> NounCompound | None:
    """Recover the NC candidate for one matched snippet, pairing the
    free argument(s) with the template's fixed noun where there is one.

    The noun before the relativizer is the NC head and the noun after
    the pattern is the modifier, for both voices.
    """
    head = query.fixed_lemma if query.template == "head_fixed" else None
    modifier = query.fixed_lemma if query.template == "mod_fixed" else None
    if query.extracts_before:
        word = segment_argument(lexicon, snippet, snippet.match_start, BEFORE)
        if word is None:
            return None
        head = lexicon.lemmatize(word, "noun")
    if query.extracts_after:
        after_abs = snippet.match_start + len(query.query.slots) - 1
        word = segment_argument(lexicon, snippet, after_abs, AFTER)
        if word is None:
            return None
        modifier = lexicon.lemmatize(word, "noun")
    if head is None or modifier is None:
        return None
    return NounCompound(modifier, head)


def form_candidates(lexicon: Lexicon,
                    matches: list[tuple[Step1Query, Snippet]]
                    ) -> list[NCCandidate]:
    """Aggregate extraction events into candidates with support counts.

    Support sums over every instantiation of a pattern, but one corpus
    occurrence of a pattern counts once even when several queries match
    it (the strict templates overlap on the same clause).
    """
    counts: dict[tuple[NounCompound, Pattern], int] = {}
    seen_events: set[tuple] = set()
    for query, snippet in matches:
        nc = extract_nc(lexicon, query, snippet)
        if nc is None:
            continue
        pattern_abs = snippet.match_start + query.pattern_slot_start
        event = (snippet.doc_id, pattern_abs, query.pattern, nc)
        if event in seen_events:
            continue
        seen_events.add(event)
        key = (nc, query.pattern)
        counts[key] = counts.get(key, 0) + 1
    return [NCCandidate(nc, pattern, support)
            for (nc, pattern), support in
            sorted(counts.items(),
                   key=lambda kv: (kv[0][0], kv[0][1].sort_key()))]


def filter_candidates(lexicon: Lexicon, candidates: list[NCCandidate],
                      history_ncs: set[NounCompound],
                      seed_ncs: set[NounCompound],
                      ngrams: NGramTable, n_threshold: int,
                      min_ngram_count: int = DEFAULT_MIN_NGRAM_COUNT
                      ) -> list[NCCandidate]:
    """Apply the five acceptance conditions; candidates survive only if
    (1) new, (2) head != modifier, (3) both parts are nouns, (4) the
    bigram is frequent enough, and (5) extraction support reaches the
    threshold."""
    out = []
    for cand in candidates:
        nc = cand.nc
        if nc in seed_ncs or nc in history_ncs:
            continue
        if nc.modifier == nc.head:
            continue
        if not (lexicon.is_noun(nc.modifier) and lexicon.is_noun(nc.head)):
            continue
        if ngrams.count((nc.modifier, nc.head)) < min_ngram_count:
            continue
        if cand.support < n_threshold:
            continue
        out.append(cand)
    return out


def filter_ncs(lexicon: Lexicon, candidates: list[NCCandidate],
               history_ncs: set[NounCompound],
               seed_ncs: set[NounCompound], ngrams: NGramTable,
               n_threshold: int,
               min_ngram_count: int = DEFAULT_MIN_NGRAM_COUNT
               ) -> list[NounCompound]:
    """Deduplicated NCs of the surviving candidates, in stable order."""
    passing = filter_candidates(lexicon, candidates, history_ncs, seed_ncs,
                                ngrams, n_threshold, min_ngram_count)
    seen: set[NounCompound] = set()
    out = []
    for cand in passing:
        if cand.nc not in seen:
            seen.add(cand.nc)
            out.append(cand.nc)
    return out


def candidates_to_tsv(candidates: list[NCCandidate],
                      lexicon: Lexicon | None = None) -> str:
    lines = [
        f"{c.nc.modifier}\t{c.nc.head}\t{c.source_pattern.display(lexicon)}"
        f"\t{c.support}"
        for c in candidates
    ]
    return "\n".join(lines) + ("\n" if lines else "")
