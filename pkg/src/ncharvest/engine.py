"""The bootstrapping loop: alternate NC extraction (step 1) and pattern
extraction (step 2) over a snippet provider until no new NCs appear or
the iteration budget runs out.

State grows monotonically; an NC or pattern accepted once is never
re-admitted, and every NC-pattern pair carries the summed support of
its extraction events.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus import NGramTable, SnippetProvider
from .lexicon import Lexicon
from .model import (
    NC_ONLY_STRICT,
    STRATEGIES,
    NounCompound,
    Pattern,
    Strategy,
)
from .ncextract import filter_candidates, form_candidates
from .patterns import (
    collect_pattern_candidates,
    filter_pattern_candidates,
    top_ncs,
)
from .queries import QueryBatch, step1_queries, step2_queries

STATE_FORMAT_VERSION = 1


class SeedError(ValueError):
    """Malformed seed files, with line diagnostics."""


class ProviderError(RuntimeError):
    """A snippet provider failed; the running iteration is aborted."""


@dataclass(frozen=True)
class BootstrapConfig:
    strategy: str
    n_threshold: int = 5
    m_threshold: int = 50
    max_iterations: int = 3
    top_k_patterns: int = 20
    top_k_nc_seeds: int = 10
    snippet_cap: int = 1000
    min_ngram_count: int = 100
    workers: int = 1

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy: {self.strategy!r}")
        for name in ("n_threshold", "m_threshold", "top_k_patterns",
                     "top_k_nc_seeds", "snippet_cap", "min_ngram_count",
                     "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass(frozen=True)
class Seeds:
    ncs: tuple[NounCompound, ...]
    patterns: tuple[Pattern, ...]
    pairs: tuple[tuple[NounCompound, Pattern], ...]

    def pattern_ncs(self, pattern: Pattern) -> list[NounCompound]:
        return [nc for nc, p in self.pairs if p == pattern]


@dataclass
class HarvestState:
    """Cumulative harvest: discovery iteration per item, support per
    pair.  Seeds are kept apart from harvested items so the "already
    known" filters can tell them apart."""

    seeds: Seeds
    iteration: int = 0
    accepted_ncs: dict[NounCompound, int] = field(default_factory=dict)
    accepted_patterns: dict[Pattern, int] = field(default_factory=dict)
    pairs: dict[tuple[NounCompound, Pattern], int] = field(
        default_factory=dict)

    @property
    def active_patterns(self) -> list[Pattern]:
        return sorted(set(self.seeds.patterns)
                      | set(self.accepted_patterns),
                      key=Pattern.sort_key)

    def pattern_support(self, pattern: Pattern) -> dict[NounCompound, int]:
        return {nc: n for (nc, p), n in self.pairs.items() if p == pattern}

    def check(self) -> None:
        known_ncs = set(self.accepted_ncs) | set(self.seeds.ncs)
        known_patterns = set(self.accepted_patterns) | set(
            self.seeds.patterns)
        for nc, pattern in self.pairs:
            if nc not in known_ncs or pattern not in known_patterns:
                raise ValueError(f"dangling pair: {nc} / {pattern}")

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "format_version": STATE_FORMAT_VERSION,
            "iteration": self.iteration,
            "seed_ncs": [[n.modifier, n.head] for n in self.seeds.ncs],
            "seed_patterns": [[p.verb, p.voice, p.preposition or ""]
                              for p in self.seeds.patterns],
            "seed_pairs": [[n.modifier, n.head, p.verb, p.voice,
                            p.preposition or ""]
                           for n, p in self.seeds.pairs],
            "accepted_ncs": sorted(
                [n.modifier, n.head, it]
                for n, it in self.accepted_ncs.items()),
            "accepted_patterns": sorted(
                [p.verb, p.voice, p.preposition or "", it]
                for p, it in self.accepted_patterns.items()),
            "pairs": sorted(
                [n.modifier, n.head, p.verb, p.voice, p.preposition or "", c]
                for (n, p), c in self.pairs.items()),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "HarvestState":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format_version") != STATE_FORMAT_VERSION:
            raise ValueError(f"unsupported state version in {path}")
        seeds = Seeds(
            ncs=tuple(NounCompound(m, h) for m, h in doc["seed_ncs"]),
            patterns=tuple(Pattern(v, vo, p or None)
                           for v, vo, p in doc["seed_patterns"]),
            pairs=tuple((NounCompound(m, h), Pattern(v, vo, p or None))
                        for m, h, v, vo, p in doc["seed_pairs"]),
        )
        state = cls(seeds=seeds, iteration=doc["iteration"])
        for m, h, it in doc["accepted_ncs"]:
            state.accepted_ncs[NounCompound(m, h)] = it
        for v, vo, p, it in doc["accepted_patterns"]:
            state.accepted_patterns[Pattern(v, vo, p or None)] = it
        for m, h, v, vo, p, c in doc["pairs"]:
            state.pairs[(NounCompound(m, h), Pattern(v, vo, p or None))] = c
        state.check()
        return state


@dataclass
class IterationReport:
    iteration: int
    strategy: str
    new_ncs: int
    new_patterns: int
    new_pairs: int
    queries_issued: int
    ncs_per_pattern: dict[Pattern, int] = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "iteration": self.iteration,
            "strategy": self.strategy,
            "new_ncs": self.new_ncs,
            "new_patterns": self.new_patterns,
            "new_pairs": self.new_pairs,
            "queries_issued": self.queries_issued,
            "ncs_per_pattern": sorted(
                [p.verb, p.voice, p.preposition or "", n]
                for p, n in self.ncs_per_pattern.items()),
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- seed files -------------------------------------------------------------


def _seed_rows(path, n_cols, optional_last=False):
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if optional_last and len(cols) == n_cols - 1:
            cols = cols + [""]
        if len(cols) != n_cols:
            raise SeedError(
                f"{path}:{lineno}: expected {n_cols} columns, "
                f"got {len(cols)}")
        rows.append((lineno, cols))
    return rows


def load_seeds(nc_path, pattern_path, pair_path) -> Seeds:
    ncs = []
    for lineno, (mod, head) in _seed_rows(nc_path, 2):
        try:
            ncs.append(NounCompound(mod.strip(), head.strip()))
        except ValueError as exc:
            raise SeedError(f"{nc_path}:{lineno}: {exc}") from exc
    patterns = []
    for lineno, (verb, voice, prep) in _seed_rows(pattern_path, 3,
                                              optional_last=True):
        try:
            patterns.append(Pattern(verb.strip(), voice.strip(),
                                    prep.strip() or None))
        except ValueError as exc:
            raise SeedError(f"{pattern_path}:{lineno}: {exc}") from exc
    pairs = []
    nc_set, pattern_set = set(ncs), set(patterns)
    for lineno, (mod, head, verb, voice, prep) in _seed_rows(
            pair_path, 5, optional_last=True):
        try:
            nc = NounCompound(mod.strip(), head.strip())
            pattern = Pattern(verb.strip(), voice.strip(),
                              prep.strip() or None)
        except ValueError as exc:
            raise SeedError(f"{pair_path}:{lineno}: {exc}") from exc
        if nc not in nc_set:
            raise SeedError(f"{pair_path}:{lineno}: pair references "
                            f"unlisted NC {nc}")
        if pattern not in pattern_set:
            raise SeedError(f"{pair_path}:{lineno}: pair references "
                            f"unlisted pattern {pattern.display()}")
        pairs.append((nc, pattern))
    if len(set(pairs)) != len(pairs):
        raise SeedError(f"{pair_path}: duplicate pairs")
    return Seeds(tuple(ncs), tuple(patterns), tuple(pairs))


def bundled_seed_paths() -> tuple[Path, Path, Path]:
    from importlib import resources

    base = resources.files("ncharvest").joinpath("data/seeds")
    return (base.joinpath("seed_ncs.tsv"),
            base.joinpath("seed_patterns.tsv"),
            base.joinpath("seed_pairs.tsv"))


# -- the loop ---------------------------------------------------------------


def select_nc_seeds(pairs_by_pattern: dict[Pattern, dict[NounCompound, int]],
                    k: int) -> dict[Pattern, list[NounCompound]]:
    """Per pattern, the k best-supported NCs, ties lexicographic."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = {}
    for pattern, support in pairs_by_pattern.items():
        ranked = sorted(support.items(), key=lambda kv: (-kv[1], kv[0]))
        out[pattern] = [nc for nc, _ in ranked[:k]]
    return out


class BootstrapEngine:
    def __init__(self, lexicon: Lexicon, provider: SnippetProvider,
                 ngrams: NGramTable, config: BootstrapConfig,
                 debug_query_sink=None):
        self.lexicon = lexicon
        self.provider = provider
        self.ngrams = ngrams
        self.config = config
        self.debug_query_sink = debug_query_sink

    def _strategy(self, seeds: Seeds) -> Strategy:
        initial = frozenset(seeds.patterns)
        return Strategy(self.config.strategy, initial)

    def _run_queries(self, batch: QueryBatch) -> list:
        """Pair every query in a batch with its snippets; deterministic
        regardless of worker count (results merge in batch order)."""
        if self.debug_query_sink is not None:
            self.debug_query_sink(batch)
        try:
            if self.config.workers > 1:
                with ThreadPoolExecutor(self.config.workers) as pool:
                    hit_lists = list(pool.map(
                        lambda q: self.provider.search(
                            q.query, self.config.snippet_cap),
                        batch.queries))
            else:
                hit_lists = [self.provider.search(q.query,
                                                  self.config.snippet_cap)
                             for q in batch.queries]
        except Exception as exc:
            raise ProviderError(f"snippet provider failed: {exc}") from exc
        return [(q, s) for q, hits in zip(batch.queries, hit_lists)
                for s in hits]

    def _nc_seeds_for(self, state: HarvestState,
                      pattern: Pattern) -> list[NounCompound]:
        """NC seeds for a strict step-1 instantiation: the top-k NCs by
        cumulative pair support, or the seed-file NCs while the pattern
        has no harvested support yet."""
        support = state.pattern_support(pattern)
        if support:
            selected = select_nc_seeds({pattern: support},
                                       self.config.top_k_nc_seeds)
            return selected[pattern]
        return sorted(state.seeds.pattern_ncs(pattern))

    def run_iteration(self, state: HarvestState,
                      on_checkpoint=None) -> tuple[HarvestState,
                                                   IterationReport]:
        """One full iteration.  The input state is never mutated; a
        provider failure aborts with the state unchanged."""
        strategy = self._strategy(state.seeds)
        iteration = state.iteration + 1
        queries_issued = 0

        # step 1: harvest NCs with the strategy's pattern set
        if strategy.kind == NC_ONLY_STRICT:
            step1_patterns = sorted(set(state.seeds.patterns),
                                    key=Pattern.sort_key)
        else:
            step1_patterns = state.active_patterns
        matches = []
        for pattern in step1_patterns:
            nc_seeds = (self._nc_seeds_for(state, pattern)
                        if strategy.fixes_a_noun else None)
            batch = step1_queries(self.lexicon, pattern, strategy, nc_seeds)
            queries_issued += len(batch)
            matches.extend(self._run_queries(batch))
        candidates = form_candidates(self.lexicon, matches)
        passing = filter_candidates(
            self.lexicon, candidates, set(state.accepted_ncs),
            set(state.seeds.ncs), self.ngrams, self.config.n_threshold,
            self.config.min_ngram_count)

        new_state = replace(
            state,
            iteration=iteration,
            accepted_ncs=dict(state.accepted_ncs),
            accepted_patterns=dict(state.accepted_patterns),
            pairs=dict(state.pairs),
        )
        pairs_before = len(new_state.pairs)
        new_ncs: list[NounCompound] = []
        ncs_per_pattern: dict[Pattern, int] = {}
        for cand in passing:
            if cand.nc not in new_state.accepted_ncs:
                new_state.accepted_ncs[cand.nc] = iteration
                new_ncs.append(cand.nc)
            key = (cand.nc, cand.source_pattern)
            new_state.pairs[key] = new_state.pairs.get(key, 0) + cand.support
            ncs_per_pattern[cand.source_pattern] = \
                ncs_per_pattern.get(cand.source_pattern, 0) + 1
        if on_checkpoint is not None:
            on_checkpoint(new_state, iteration, "step1")

        # step 2: harvest patterns from the newly accepted NCs
        new_patterns = 0
        if strategy.kind != NC_ONLY_STRICT and new_ncs:
            matches2 = []
            for nc in sorted(new_ncs):
                batch = step2_queries(self.lexicon, nc)
                queries_issued += len(batch)
                matches2.extend(self._run_queries(batch))
            pattern_candidates = collect_pattern_candidates(self.lexicon,
                                                            matches2)
            accepted = filter_pattern_candidates(
                pattern_candidates, set(new_state.accepted_patterns),
                set(state.seeds.patterns), self.config.n_threshold,
                self.config.m_threshold, self.config.top_k_patterns)
            for cand in accepted:
                new_state.accepted_patterns[cand.pattern] = iteration
                for nc, count in cand.nc_support.items():
                    key = (nc, cand.pattern)
                    new_state.pairs[key] = new_state.pairs.get(key, 0) + count
            new_patterns = len(accepted)
            # evidence for already-known patterns still enriches the
            # per-NC distributions
            fresh = {c.pattern for c in accepted}
            known = (set(new_state.accepted_patterns)
                     | set(state.seeds.patterns)) - fresh
            for cand in pattern_candidates:
                if cand.pattern in known:
                    for nc, count in cand.nc_support.items():
                        key = (nc, cand.pattern)
                        new_state.pairs[key] = \
                            new_state.pairs.get(key, 0) + count
        if on_checkpoint is not None:
            on_checkpoint(new_state, iteration, "step2")

        report = IterationReport(
            iteration=iteration,
            strategy=strategy.kind,
            new_ncs=len(new_ncs),
            new_patterns=new_patterns,
            new_pairs=len(new_state.pairs) - pairs_before,
            queries_issued=queries_issued,
            ncs_per_pattern=ncs_per_pattern,
        )
        new_state.check()
        return new_state, report

    def run(self, seeds: Seeds, initial_state: HarvestState | None = None,
            on_checkpoint=None) -> tuple[HarvestState,
                                         list[IterationReport]]:
        """Run until fixpoint (no new NCs) or ``max_iterations``."""
        if initial_state is not None and initial_state.seeds != seeds:
            raise ValueError(
                "checkpoint was produced with different seed files")
        state = initial_state or HarvestState(seeds=seeds)
        reports: list[IterationReport] = []
        while state.iteration < self.config.max_iterations:
            state, report = self.run_iteration(state, on_checkpoint)
            reports.append(report)
            if report.new_ncs == 0:
                break
        return state, reports
