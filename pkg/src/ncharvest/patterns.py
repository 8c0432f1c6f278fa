"""Step 2 of the loop: from snippets matched by step-2 queries, find
sentences that restate the NC as a relative clause, extract the verb
phrase between the two target nouns, and filter the resulting patterns.

The verb phrase extractor is a deterministic rule cascade over lexicon
lookups, not a trained chunker.  Modals and auxiliaries are ignored,
the passive "be" is kept, adjectives and participles may stand between
the verb and its preposition but nouns may not, and a sentence with
zero or more than one verb phrase between the targets yields nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Snippet
from .lexicon import Lexicon
from .model import ACTIVE, PASSIVE, NounCompound, Pattern
from .queries import Step2Query

TERMINALS = {".", "!", "?"}

MODALS = frozenset({"can", "could", "may", "might", "must", "shall",
                    "should", "will", "would"})
DO_FORMS = frozenset({"do", "does", "did"})
HAVE_FORMS = frozenset({"have", "has", "had"})
BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been",
                      "being"})

DEFAULT_TOP_K_PATTERNS = 20


@dataclass(frozen=True)
class ScreenedSentence:
    """A complete sentence containing both target nouns in order."""

    doc_id: int
    abs_start: int
    tokens: tuple[str, ...]
    head_pos: int
    mod_pos: int


@dataclass
class PatternCandidate:
    pattern: Pattern
    nc_support: dict[NounCompound, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.nc_support.values())

    @property
    def distinct_ncs(self) -> int:
        return len(self.nc_support)


def split_and_screen(lexicon: Lexicon, snippet: Snippet,
                     nc: NounCompound) -> list[ScreenedSentence]:
    """Sentence-split the snippet window and keep spans that contain an
    inflected head before an inflected modifier and whose tail after
    the modifier is non-empty with at least one non-noun (so the
    modifier really ends its noun phrase).

    A span not closed by terminal punctuation inside the window is
    incomplete and dropped.
    """
    head_forms = set(lexicon.noun_forms(nc.head).values())
    mod_forms = set(lexicon.noun_forms(nc.modifier).values())
    out = []
    start = 0
    tokens = snippet.tokens
    for i, token in enumerate(tokens):
        if token in TERMINALS:
            span = tokens[start:i]
            screened = _screen(lexicon, snippet, start, span,
                               head_forms, mod_forms)
            if screened is not None:
                out.append(screened)
            start = i + 1
    # the trailing span has no terminal inside the window: incomplete
    return out


def _screen(lexicon, snippet, rel_start, span, head_forms, mod_forms):
    head_pos = next((i for i, t in enumerate(span) if t in head_forms), None)
    if head_pos is None:
        return None
    mod_pos = next((i for i in range(head_pos + 1, len(span))
                    if span[i] in mod_forms), None)
    if mod_pos is None:
        return None
    tail = span[mod_pos + 1:]
    if not tail or all(lexicon.is_noun(t) for t in tail):
        return None
    return ScreenedSentence(snippet.doc_id,
                            snippet.window_start + rel_start,
                            tuple(span), head_pos, mod_pos)


def _is_closed_class(lexicon: Lexicon, token: str) -> bool:
    return (token in lexicon.prepositions
            or token in lexicon.coordinating
            or token in lexicon.subordinating
            or token in lexicon.relative_pronouns
            or token in MODALS)


def _is_participial(lexicon: Lexicon, token: str) -> bool:
    slots = lexicon.verb_slots_of(token)
    return bool(slots & {"past_participle", "gerund"})


@dataclass
class _Group:
    aux: list[str]
    main: str | None
    passive: bool
    end: int


_AUX_TOKENS = MODALS | DO_FORMS | HAVE_FORMS | BE_FORMS


def extract_pattern(lexicon: Lexicon, tokens: tuple[str, ...],
                    head_pos: int, mod_pos: int) -> Pattern | None:
    """Extract the single verb phrase between the target nouns as a
    lemmatized pattern with voice and trailing preposition(s).

    Voice is passive when a "be" auxiliary precedes a past participle,
    or when a bare participle opens a reduced relative clause right
    after the head ("juice made from oranges").  After the verb phrase,
    participles read as attributive adjectives rather than as a second
    verb phrase ("made of crushed oranges").
    """
    region = list(tokens[head_pos + 1:mod_pos])
    reduced = True  # no overt relativizer
    if region and region[0] in lexicon.relative_pronouns:
        region = region[1:]
        reduced = False

    groups: list[_Group] = []
    i = 0
    n = len(region)
    while i < n:
        token = region[i]
        if _is_closed_class(lexicon, token) and token not in MODALS:
            i += 1
            continue
        starts_aux = token in _AUX_TOKENS
        lemma = lexicon.verb_lemma_of(token)
        if not starts_aux and lemma is None:
            i += 1
            continue
        if not starts_aux and groups and _is_participial(lexicon, token):
            i += 1  # attributive participle after the verb phrase
            continue
        start = i
        aux: list[str] = []
        while i < n and region[i] in _AUX_TOKENS:
            aux.append(region[i])
            i += 1
        main = None
        passive = False
        if i < n:
            candidate = region[i]
            if (lexicon.verb_lemma_of(candidate) is not None
                    and not _is_closed_class(lexicon, candidate)):
                main = candidate
                slots = lexicon.verb_slots_of(candidate)
                participle = ("past_participle" in slots
                              and "gerund" not in slots)
                if any(a in BE_FORMS for a in aux):
                    passive = participle
                elif (not aux and reduced and start == 0 and not groups
                      and participle):
                    passive = True  # reduced passive relative
                i += 1
        if main is None and aux:
            main = aux[-1]  # copular or aux-only group, e.g. "that is"
        if main is not None:
            groups.append(_Group(aux, main, passive, i))

    if len(groups) != 1:
        return None
    group = groups[0]
    main_lemma = lexicon.verb_lemma_of(group.main or "")
    if main_lemma is None or main_lemma == "be":
        return None

    # trailing preposition: adjectives and participles may stand between
    # the verb and the preposition, nouns may not
    j = group.end
    while j < n and not lexicon.is_noun(region[j]) and (
            lexicon.is_adjective(region[j])
            or _is_participial(lexicon, region[j])):
        j += 1
    preps: list[str] = []
    while j < n and region[j] in lexicon.prepositions:
        preps.append(region[j])
        j += 1

    voice = PASSIVE if group.passive else ACTIVE
    return Pattern(main_lemma, voice, " ".join(preps) or None)


def collect_pattern_candidates(lexicon: Lexicon,
                               matches: list[tuple[Step2Query, Snippet]]
                               ) -> list[PatternCandidate]:
    """Run screening and extraction over step-2 matches and aggregate
    occurrence counts per (pattern, NC).  One sentence occurrence
    counts once even when several queries matched it."""
    counts: dict[Pattern, dict[NounCompound, int]] = {}
    seen: set[tuple] = set()
    for query, snippet in matches:
        for sentence in split_and_screen(lexicon, snippet, query.nc):
            pattern = extract_pattern(lexicon, sentence.tokens,
                                      sentence.head_pos, sentence.mod_pos)
            if pattern is None:
                continue
            event = (sentence.doc_id, sentence.abs_start, pattern, query.nc)
            if event in seen:
                continue
            seen.add(event)
            per_nc = counts.setdefault(pattern, {})
            per_nc[query.nc] = per_nc.get(query.nc, 0) + 1
    return [PatternCandidate(p, counts[p])
            for p in sorted(counts, key=Pattern.sort_key)]


def filter_pattern_candidates(candidates: list[PatternCandidate],
                              history_patterns: set[Pattern],
                              seed_patterns: set[Pattern],
                              n_threshold: int, m_threshold: int,
                              top_k: int = DEFAULT_TOP_K_PATTERNS
                              ) -> list[PatternCandidate]:
    """Selection rules, applied in order: drop known patterns, keep the
    top-k most frequent (ties at the cut broken lexicographically by
    (verb, voice, preposition)), then enforce the occurrence and
    distinct-NC thresholds."""
    fresh = [c for c in candidates
             if c.pattern not in seed_patterns
             and c.pattern not in history_patterns]
    ranked = sorted(fresh, key=lambda c: (-c.total, c.pattern.sort_key()))
    top = ranked[:top_k]
    kept = [c for c in top
            if c.total >= n_threshold and c.distinct_ncs >= m_threshold]
    return sorted(kept, key=lambda c: c.pattern.sort_key())


def filter_patterns(candidates, history_patterns, seed_patterns,
                    n_threshold, m_threshold,
                    top_k=DEFAULT_TOP_K_PATTERNS) -> list[Pattern]:
    return [c.pattern for c in
            filter_pattern_candidates(candidates, history_patterns,
                                      seed_patterns, n_threshold,
                                      m_threshold, top_k)]


def top_ncs(candidate: PatternCandidate, k: int) -> list[NounCompound]:
    """The k best-supported NCs for a pattern, ties lexicographic."""
    ranked = sorted(candidate.nc_support.items(),
                    key=lambda kv: (-kv[1], kv[0]))
    return [nc for nc, _ in ranked[:k]]


def candidates_to_tsv(candidates: list[PatternCandidate]) -> str:
    lines = [
        f"{c.pattern.verb}\t{c.pattern.voice}\t{c.pattern.preposition or ''}"
        f"\t{c.total}\t{c.distinct_ncs}"
        for c in candidates
    ]
    return "\n".join(lines) + ("\n" if lines else "")
