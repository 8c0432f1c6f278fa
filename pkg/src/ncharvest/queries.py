"""Query generation for both harvesting steps.

Step 1 (NC extraction) instantiates relative-clause templates around an
inflected pattern:

* loose:  ``* REL PATTERN *`` over the relativizers {that, which};
* strict: ``HEAD that PATTERN *`` and ``* that PATTERN MOD`` with the
  fixed noun in both number forms.

Step 2 (pattern extraction) instantiates ``HEAD THAT? *{1..6} MOD``
where THAT? ranges over {that, which, who, <empty>} and both nouns
range over both number forms.

The per-pattern query counts produced by these enumerations are frozen
constants of the repository (see the ``*_QUERIES_*`` values below).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import PhraseQuery
from .lexicon import InflectedPattern, Lexicon
from .model import NounCompound, Pattern, Strategy

STEP_NC_EXTRACTION = "nc_extraction"
STEP_PATTERN_EXTRACTION = "pattern_extraction"

TEMPLATE_LOOSE = "loose"
TEMPLATE_HEAD_FIXED = "head_fixed"
TEMPLATE_MOD_FIXED = "mod_fixed"

LOOSE_RELATIVIZERS = ("that", "which")
STRICT_RELATIVIZER = "that"
STEP2_RELATIVIZERS = ("that", "which", "who", None)
STEP2_WILDCARD_RUNS = (1, 2, 3, 4, 5, 6)

# committed per-pattern query counts (regular nouns, distinct noun forms)
LOOSE_QUERIES_ACTIVE = 14
LOOSE_QUERIES_PASSIVE = 20
STRICT_QUERIES_PER_NC_ACTIVE = 28
STRICT_QUERIES_PER_NC_PASSIVE = 40
STEP2_QUERIES_PER_NC = 96


class QueryGenError(ValueError):
    pass


@dataclass(frozen=True)
class Step1Query:
    """A concrete step-1 query plus what extraction needs to interpret
    its match: the instantiated template and the fixed noun, if any.

    Slot layout is always ``[arg][relativizer][pattern ...][arg]`` with
    the pattern occupying slots 2..2+len(inflection).
    """

    query: PhraseQuery
    pattern: Pattern
    inflection: InflectedPattern
    template: str
    relativizer: str
    fixed_lemma: str | None = None
    fixed_form: str | None = None

    @property
    def pattern_slot_start(self) -> int:
        return 2

    @property
    def pattern_slot_end(self) -> int:
        return 2 + len(self.inflection.tokens)

    @property
    def extracts_before(self) -> bool:
        return self.template in (TEMPLATE_LOOSE, TEMPLATE_MOD_FIXED)

    @property
    def extracts_after(self) -> bool:
        return self.template in (TEMPLATE_LOOSE, TEMPLATE_HEAD_FIXED)


@dataclass(frozen=True)
class Step2Query:
    query: PhraseQuery
    nc: NounCompound
    relativizer: str | None
    wildcards: int
    head_form: str
    mod_form: str


@dataclass(frozen=True)
class BatchOrigin:
    step: str
    pattern: Pattern | None = None
    nc: NounCompound | None = None


@dataclass
class QueryBatch:
    origin: BatchOrigin
    queries: list = field(default_factory=list)

    def __len__(self):
        return len(self.queries)

    def query_strings(self) -> list[str]:
        return [str(q.query) for q in self.queries]


def step1_queries(lexicon: Lexicon, pattern: Pattern, strategy: Strategy,
                  seed_ncs: list[NounCompound] | None = None) -> QueryBatch:
    """All step-1 queries for one pattern under a strategy.

    Strict strategies require seed NCs known to match the pattern; the
    queries fix one noun of a seed NC (in both numbers) and wildcard
    the other.  Queries are deduplicated, so seed NCs sharing a noun do
    not repeat work.
    """
    if not strategy.allows(pattern):
        raise QueryGenError(
            f"strategy {strategy.kind} does not admit pattern "
            f"{pattern.display()!r}")
    inflections = lexicon.inflect_pattern(pattern)
    seed_ncs = list(seed_ncs or [])
    origin = BatchOrigin(STEP_NC_EXTRACTION, pattern=pattern,
                         nc=seed_ncs[0] if len(seed_ncs) == 1 else None)
    batch = QueryBatch(origin)
    seen: set[tuple] = set()

    def emit(q: Step1Query):
        key = (q.template, q.fixed_lemma, str(q.query))
        if key not in seen:
            seen.add(key)
            batch.queries.append(q)

    if not strategy.fixes_a_noun:
        for rel in LOOSE_RELATIVIZERS:
            for inf in inflections:
                slots = (None, rel) + inf.tokens + (None,)
                emit(Step1Query(PhraseQuery(slots), pattern, inf,
                                TEMPLATE_LOOSE, rel))
        return batch

    if not seed_ncs:
        raise QueryGenError(
            f"strict strategies need seed NCs for {pattern.display()!r}")
    rel = STRICT_RELATIVIZER
    for nc in seed_ncs:
        head_forms = lexicon.noun_forms(nc.head)
        mod_forms = lexicon.noun_forms(nc.modifier)
        for inf in inflections:
            for form in (head_forms["singular"], head_forms["plural"]):
                slots = (form, rel) + inf.tokens + (None,)
                emit(Step1Query(PhraseQuery(slots), pattern, inf,
                                TEMPLATE_HEAD_FIXED, rel,
                                fixed_lemma=nc.head, fixed_form=form))
            for form in (mod_forms["singular"], mod_forms["plural"]):
                slots = (None, rel) + inf.tokens + (form,)
                emit(Step1Query(PhraseQuery(slots), pattern, inf,
                                TEMPLATE_MOD_FIXED, rel,
                                fixed_lemma=nc.modifier, fixed_form=form))
    return batch


def step2_queries(lexicon: Lexicon, nc: NounCompound) -> QueryBatch:
    """All step-2 queries for one NC: the head, an optional relativizer,
    a 1..6 token gap, then the modifier."""
    head_forms = lexicon.noun_forms(nc.head)
    mod_forms = lexicon.noun_forms(nc.modifier)
    batch = QueryBatch(BatchOrigin(STEP_PATTERN_EXTRACTION, nc=nc))
    seen: set[str] = set()
    for rel in STEP2_RELATIVIZERS:
        for run in STEP2_WILDCARD_RUNS:
            for head in (head_forms["singular"], head_forms["plural"]):
                for mod in (mod_forms["singular"], mod_forms["plural"]):
                    slots = ((head,) + ((rel,) if rel else ())
                             + (None,) * run + (mod,))
                    query = PhraseQuery(slots)
                    if str(query) in seen:
                        continue
                    seen.add(str(query))
                    batch.queries.append(Step2Query(
                        query, nc, rel, run, head, mod))
    return batch


def batches_to_tsv(batches: list[QueryBatch]) -> str:
    """Debug serialization: one query per line."""
    lines = ["step\tpattern\tnc\tquery"]
    for batch in batches:
        pat = ""
        if batch.origin.pattern is not None:
            p = batch.origin.pattern
            pat = f"{p.verb}:{p.voice}:{p.preposition or ''}"
        for q in batch.queries:
            nc = ""
            if isinstance(q, Step2Query):
                nc = str(q.nc)
            elif q.fixed_lemma:
                nc = f"{q.template}:{q.fixed_form}"
            lines.append(f"{batch.origin.step}\t{pat}\t{nc}\t{q.query}")
    return "\n".join(lines) + "\n"
