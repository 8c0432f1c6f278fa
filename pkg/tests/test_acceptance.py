"""Acceptance suite: one test per shipped criterion, each printing a
PASS/FAIL line.  Run with ``pytest -s tests/test_acceptance.py`` to see
the lines as they complete."""

import contextlib
import json
import random
import time

import pytest

from ncharvest.analysis import (
    CORRECT,
    INCORRECT,
    JudgmentFile,
    bin_accuracy_by_dice,
    cohen_kappa,
    dice,
)
from ncharvest.cli import main
from ncharvest.corpus import CorpusIndex, NGramTable, PhraseQuery, tokenize
from ncharvest.engine import (
    BootstrapConfig,
    BootstrapEngine,
    bundled_seed_paths,
    load_seeds,
)
from ncharvest.lexicon import Lexicon
from ncharvest.model import NounCompound, Pattern, Strategy
from ncharvest.ncextract import NCCandidate, filter_ncs
from ncharvest.patterns import (
    PatternCandidate,
    extract_pattern,
    filter_patterns,
    split_and_screen,
)
from ncharvest.queries import (
    LOOSE_QUERIES_ACTIVE,
    LOOSE_QUERIES_PASSIVE,
    STRICT_QUERIES_PER_NC_ACTIVE,
    STRICT_QUERIES_PER_NC_PASSIVE,
    step1_queries,
    step2_queries,
)

import planted
from test_analysis import judgments_from_matrix, kappa_oracle
from test_corpus import scan_oracle, spans
from test_patterns import HAND_CASES, run_extract

LEX = Lexicon.bundled()


@contextlib.contextmanager
def criterion(number, name):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:2d} ({name}): FAIL")
        raise
    elapsed = time.monotonic() - start
    print(f"ACCEPTANCE {number:2d} ({name}): PASS [{elapsed:.2f}s]")


def test_01_seed_fidelity():
    with criterion(1, "seed fidelity"):
        seeds = load_seeds(*bundled_seed_paths())
        assert len(seeds.ncs) == 20
        assert len(seeds.patterns) == 18
        assert len(seeds.pairs) == 84


def test_02_query_goldens():
    with criterion(2, "query goldens"):
        be_made_of = Pattern("make", "passive", "of")
        orange_juice = NounCompound("orange", "juice")
        loose = step1_queries(LEX, be_made_of,
                              Strategy("loose")).query_strings()
        assert "* that were made of *" in loose
        strict = step1_queries(LEX, be_made_of, Strategy("strict"),
                               [orange_juice]).query_strings()
        assert "juice that was made of *" in strict
        assert "* that is made of oranges" in strict
        step2 = step2_queries(LEX, orange_juice).query_strings()
        assert "juice that * oranges" in step2
        assert "juices which * * * * * * oranges" in step2


def test_03_query_count_goldens():
    with criterion(3, "query count goldens"):
        active = Pattern("contain", "active")
        passive = Pattern("make", "passive", "of")
        nc = NounCompound("chocolate", "bar")
        assert len(step1_queries(LEX, active, Strategy("loose"))) == \
            LOOSE_QUERIES_ACTIVE
        assert len(step1_queries(LEX, passive, Strategy("loose"))) == \
            LOOSE_QUERIES_PASSIVE
        assert len(step1_queries(LEX, active, Strategy("strict"),
                                 [nc])) == STRICT_QUERIES_PER_NC_ACTIVE
        assert len(step1_queries(LEX, passive, Strategy("strict"),
                                 [nc])) == STRICT_QUERIES_PER_NC_PASSIVE
        for committed, reported in ((LOOSE_QUERIES_ACTIVE, 14),
                                    (LOOSE_QUERIES_PASSIVE, 20),
                                    (STRICT_QUERIES_PER_NC_ACTIVE, 28),
                                    (STRICT_QUERIES_PER_NC_PASSIVE, 40)):
            assert abs(committed - reported) <= 2


def _random_corpus(rng, budget):
    vocab = ["juice", "that", "is", "made", "of", "oranges", "statue",
             "bronze", "the", "a", ",", ".", "contains", "water", "glass",
             "and", "from", "cube", "sugar", "team", "which", "were"]
    docs = []
    remaining = budget
    while remaining > 0:
        size = min(remaining, rng.randint(5, 400))
        docs.append([rng.choice(vocab) for _ in range(size)])
        remaining -= size
    return docs


def _random_query(rng):
    vocab = ["juice", "that", "is", "made", "of", "oranges", "water",
             "contains", "the", "which"]
    length = rng.randint(1, 7)
    slots = [rng.choice(vocab + [None, None, None]) for _ in range(length)]
    if all(s is None for s in slots):
        slots[rng.randrange(length)] = rng.choice(vocab)
    return PhraseQuery(tuple(slots))


def test_04_search_oracle_equivalence():
    with criterion(4, "search oracle equivalence, 200x50"):
        rng = random.Random(20100615)
        for corpus_no in range(200):
            budget = (rng.randint(50, 1500) if corpus_no % 4
                      else rng.randint(1500, 10_000))
            docs = _random_corpus(rng, budget)
            index = CorpusIndex(docs)
            for _ in range(50):
                query = _random_query(rng)
                got = spans(index.search(query, cap=10**9))
                want = scan_oracle(docs, query)
                assert got == want, str(query)


@pytest.fixture(scope="module")
def planted_run():
    lines, counts = planted.build_planted_corpus(LEX)
    index = CorpusIndex([tokenize(line) for line in lines])
    ngrams = NGramTable(counts)
    config = BootstrapConfig(strategy="strict", n_threshold=5,
                             m_threshold=20, max_iterations=2)
    engine = BootstrapEngine(LEX, index, ngrams, config)
    state, reports = engine.run(planted.planted_seeds())
    return lines, counts, index, ngrams, state, reports


def test_05_planted_corpus_end_to_end(planted_run):
    with criterion(5, "planted corpus end to end"):
        lines, counts, index, ngrams, state, reports = planted_run
        expected = planted.planted_nc_set()
        accepted = set(state.accepted_ncs)
        recovered = expected & accepted
        assert len(recovered) >= 0.9 * len(expected), \
            f"only {len(recovered)}/{len(expected)} planted NCs found"
        # distractor fillers and traps must not smuggle anything in
        assert accepted <= expected, sorted(map(str, accepted - expected))
        # no accepted candidate may violate the same-noun, noun-POS, or
        # bigram-frequency conditions
        for nc in accepted:
            assert nc.modifier != nc.head
            assert LEX.is_noun(nc.modifier) and LEX.is_noun(nc.head)
            assert ngrams.count((nc.modifier, nc.head)) >= 100
        assert planted.TRAP_SAME_NOUN not in accepted
        assert planted.TRAP_RARE_BIGRAM not in accepted
        assert planted.TRAP_LOW_SUPPORT not in accepted
        # the same corpus under nc_only_strict never grows the pattern set
        config = BootstrapConfig(strategy="nc_only_strict", n_threshold=5,
                                 m_threshold=20, max_iterations=2)
        engine = BootstrapEngine(LEX, index, ngrams, config)
        nc_only_state, nc_only_reports = engine.run(planted.planted_seeds())
        assert nc_only_reports, "nc_only_strict run produced no iterations"
        assert all(r.new_patterns == 0 for r in nc_only_reports)
        assert nc_only_state.accepted_patterns == {}


def test_06_filter_boundaries():
    with criterion(6, "filter boundaries"):
        made_of = Pattern("make", "passive", "of")
        table = NGramTable({("grape", "juice"): 99, ("apple", "juice"): 100})

        def accept(nc, support, n=5):
            cands = [NCCandidate(nc, made_of, support)]
            return filter_ncs(LEX, cands, set(), set(), table, n)

        # bigram count 99 rejects, 100 accepts
        assert accept(NounCompound("grape", "juice"), 50) == []
        assert accept(NounCompound("apple", "juice"), 50) == \
            [NounCompound("apple", "juice")]
        # support N-1 rejects, N accepts
        assert accept(NounCompound("apple", "juice"), 4) == []
        assert accept(NounCompound("apple", "juice"), 5) == \
            [NounCompound("apple", "juice")]
        # top-20 rank cut with deterministic lexicographic tie-break
        tied = [PatternCandidate(Pattern("press", "passive", f"p{i:02d}"),
                                 {NounCompound("orange", "juice"): 7})
                for i in range(25)]
        kept = filter_patterns(tied, set(), set(), 1, 1)
        assert len(kept) == 20
        assert Pattern("press", "passive", "p19") in kept
        assert Pattern("press", "passive", "p20") not in kept


def test_07_pattern_extraction_suite():
    with criterion(7, "pattern extraction suite"):
        assert len(HAND_CASES) == 20
        for text, expected in HAND_CASES:
            assert run_extract(text) == expected, text
        assert run_extract("juice that is squeezed from oranges is "
                           "tasty .") == Pattern("squeeze", "passive",
                                                 "from")
        assert run_extract("juice that people say is made of oranges "
                           "is rare .") is None


def test_08_kappa_oracle():
    with criterion(8, "kappa vs confusion-matrix oracle"):
        rng = random.Random(1960)
        checked = 0
        while checked < 1000:
            cc, ci, ic, ii = (rng.randint(0, 30) for _ in range(4))
            if cc + ci + ic + ii == 0:
                continue
            a, b = judgments_from_matrix(cc, ci, ic, ii)
            marginal_a = {v for v in a.labels.values()}
            marginal_b = {v for v in b.labels.values()}
            if len(marginal_a) == 1 and len(marginal_b) == 1 \
                    and marginal_a != marginal_b:
                continue  # kappa undefined: complete one-sided labels
            try:
                got = cohen_kappa(a, b)
            except Exception:
                continue
            want = kappa_oracle(a.labels, b.labels)
            assert abs(got - want) <= 1e-12
            checked += 1
        a, b = judgments_from_matrix(160, 20, 31, 129)
        assert len(a) == 340
        agreement = sum(1 for k in a.labels
                        if a.labels[k] == b.labels[k]) / 340
        assert agreement == pytest.approx(0.85)
        assert 0.60 <= cohen_kappa(a, b) <= 0.72


def test_09_dice_properties():
    with criterion(9, "dice properties and binning"):
        nc = NounCompound("orange", "juice")
        assert dice(nc, NGramTable({("orange",): 200, ("juice",): 100,
                                    ("orange", "juice"): 30})) == \
            pytest.approx(0.2)
        rng = random.Random(4)
        for _ in range(300):
            c_mod, c_head = rng.randint(1, 10**6), rng.randint(1, 10**6)
            joint = rng.randint(0, min(c_mod, c_head))
            value = dice(nc, NGramTable({("orange",): c_mod,
                                         ("juice",): c_head,
                                         ("orange", "juice"): joint}
                                        if joint else
                                        {("orange",): c_mod,
                                         ("juice",): c_head}))
            swapped = dice(nc, NGramTable({("orange",): c_head,
                                           ("juice",): c_mod,
                                           ("orange", "juice"): joint}
                                          if joint else
                                          {("orange",): c_head,
                                           ("juice",): c_mod}))
            assert 0.0 <= value <= 1.0
            assert value == pytest.approx(swapped)
        items = [(rng.random(), rng.choice([CORRECT, INCORRECT]))
                 for _ in range(997)]
        rows = bin_accuracy_by_dice(items, 13)
        assert sum(r["n"] for r in rows) == len(items)


def test_10_replay_determinism(tmp_path):
    with criterion(10, "replay determinism"):
        lines, counts = planted.build_planted_corpus(LEX)
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("\n".join(lines) + "\n", encoding="utf-8")
        ngram_path = tmp_path / "web1t.tsv"
        NGramTable(counts).save_web1t(ngram_path)
        assert main(["index", str(corpus),
                     "--out", str(tmp_path / "corpus.idx")]) == 0

        seeds = planted.planted_seeds()
        (tmp_path / "seed_ncs.tsv").write_text(
            "".join(f"{n.modifier}\t{n.head}\n" for n in seeds.ncs))
        (tmp_path / "seed_patterns.tsv").write_text(
            "".join(f"{p.verb}\t{p.voice}\t{p.preposition or ''}\n"
                    for p in seeds.patterns))
        (tmp_path / "seed_pairs.tsv").write_text(
            "".join(f"{n.modifier}\t{n.head}\t{p.verb}\t{p.voice}\t"
                    f"{p.preposition or ''}\n" for n, p in seeds.pairs))

        outputs = []
        for label in ("a", "b"):
            conf = tmp_path / f"{label}.conf"
            conf.write_text("\n".join([
                "strategy = strict",
                "n_threshold = 5",
                "m_threshold = 20",
                "max_iterations = 2",
                "index = corpus.idx",
                "ngrams = web1t.tsv",
                "seed_ncs = seed_ncs.tsv",
                "seed_patterns = seed_patterns.tsv",
                "seed_pairs = seed_pairs.tsv",
                f"output_dir = out_{label}",
            ]) + "\n", encoding="utf-8")
            assert main(["run", "--config", str(conf)]) == 0
            outputs.append(tmp_path / f"out_{label}")
        out_a, out_b = outputs
        compared = 0
        for file_a in sorted(out_a.rglob("*")):
            # the manifest snapshots its config, which differs in
            # output_dir by construction; everything else must agree
            if not file_a.is_file() or file_a.name == "manifest.json":
                continue
            file_b = out_b / file_a.relative_to(out_a)
            assert file_b.is_file(), file_b
            assert file_a.read_bytes() == file_b.read_bytes(), file_a.name
            compared += 1
        assert compared >= 6  # checkpoints, state, reports, dataset
        state = json.loads((out_a / "state.json").read_text())
        assert len(state["accepted_ncs"]) == 40
