import random

import pytest
from hypothesis import given, settings, strategies as st

from ncharvest.corpus import (
    CorpusError,
    CorpusIndex,
    NGramTable,
    PhraseQuery,
    tokenize,
)


def scan_oracle(docs, query, cap=10**9):
    """Brute-force window scan; the reference for search()."""
    out = []
    for doc_id, tokens in enumerate(docs):
        for start in range(len(tokens) - len(query.slots) + 1):
            if all(slot is None or tokens[start + i] == slot
                   for i, slot in enumerate(query.slots)):
                out.append((doc_id, start, start + len(query.slots)))
                if len(out) >= cap:
                    return out
    return out


def recount_oracle(docs, tokens):
    """Reference n-gram recount by streaming the corpus."""
    n = len(tokens)
    target = tuple(tokens)
    total = 0
    for doc in docs:
        for i in range(len(doc) - n + 1):
            if tuple(doc[i:i + n]) == target:
                total += 1
    return total


def spans(snippets):
    return [(s.doc_id, s.match_start, s.match_end) for s in snippets]


def random_corpus(rng, max_tokens=10_000):
    vocab = ["juice", "that", "is", "made", "of", "oranges", "statue",
             "bronze", "the", "a", ",", ".", "contains", "water", "glass",
             "and", "from", "cube", "sugar", "team"]
    n_docs = rng.randint(1, 40)
    budget = rng.randint(20, max_tokens)
    docs = []
    while budget > 0 and len(docs) < n_docs:
        size = rng.randint(1, max(1, budget // max(1, n_docs - len(docs))))
        docs.append([rng.choice(vocab) for _ in range(size)])
        budget -= size
    return docs or [["the"]]


def random_query(rng):
    vocab = ["juice", "that", "is", "made", "of", "oranges", "water",
             "contains", "the"]
    length = rng.randint(1, 6)
    slots = [rng.choice(vocab + [None, None]) for _ in range(length)]
    if all(s is None for s in slots):
        slots[rng.randrange(length)] = rng.choice(vocab)
    return PhraseQuery(tuple(slots))


class TestTokenize:
    def test_words_and_punctuation(self):
        assert tokenize("Juice, that is MADE of oranges.") == [
            "juice", ",", "that", "is", "made", "of", "oranges", "."]

    def test_apostrophes_kept_inside_words(self):
        assert tokenize("don't stop") == ["don't", "stop"]


class TestPhraseQuery:
    def test_parse_round_trip(self):
        q = PhraseQuery.parse("juice that * oranges")
        assert q.slots == ("juice", "that", None, "oranges")
        assert str(q) == "juice that * oranges"

    def test_all_wildcards_rejected(self):
        with pytest.raises(CorpusError):
            PhraseQuery((None, None))

    def test_too_long_rejected(self):
        with pytest.raises(CorpusError):
            PhraseQuery(tuple(["a"] * 17))


class TestBuild:
    def test_single_document(self):
        idx = CorpusIndex([["juice", "that", "is", "made", "of", "oranges"]])
        assert idx.doc_count == 1
        assert idx.total_tokens == 6
        words = ("juice", "that", "is", "made", "of", "oranges")
        assert sum(len(idx.postings(t)) for t in words) == 6

    def test_empty_collection_rejected(self):
        with pytest.raises(CorpusError):
            CorpusIndex([])


class TestSearch:
    def test_wildcard_match(self):
        doc = tokenize("we drink juice that contains oranges every day")
        idx = CorpusIndex([doc])
        hits = idx.search(PhraseQuery.parse("juice that * oranges"))
        assert len(hits) == 1
        snip = hits[0]
        assert snip.match_tokens == ("juice", "that", "contains", "oranges")

    def test_no_match(self):
        idx = CorpusIndex([["only", "some", "words"]])
        assert idx.search(PhraseQuery.parse("juice that * oranges")) == []

    def test_matches_equal_oracle_on_small_corpora(self):
        rng = random.Random(7)
        for _ in range(25):
            docs = random_corpus(rng, max_tokens=400)
            idx = CorpusIndex(docs)
            for _ in range(10):
                q = random_query(rng)
                assert spans(idx.search(q, cap=10**9)) == scan_oracle(docs, q)

    def test_thousand_doc_corpus_equals_oracle(self):
        rng = random.Random(1000)
        vocab = ["juice", "that", "is", "made", "of", "oranges", "the", "."]
        docs = [[rng.choice(vocab) for _ in range(rng.randint(1, 10))]
                for _ in range(1000)]
        idx = CorpusIndex(docs)
        for text in ("juice that * oranges", "* is made of *", "the the",
                     "oranges", "* that is *"):
            q = PhraseQuery.parse(text)
            assert spans(idx.search(q, cap=10**9)) == scan_oracle(docs, q)

    def test_cap_is_prefix(self):
        rng = random.Random(3)
        docs = random_corpus(rng, max_tokens=2000)
        idx = CorpusIndex(docs)
        q = PhraseQuery.parse("* that *")
        full = spans(idx.search(q, cap=10**9))
        for k in (1, 2, 5, len(full) or 1):
            assert spans(idx.search(q, cap=k)) == full[:k]

    def test_deterministic(self):
        rng = random.Random(5)
        docs = random_corpus(rng)
        q = PhraseQuery.parse("* is *")
        a = spans(CorpusIndex(docs).search(q))
        b = spans(CorpusIndex(docs).search(q))
        assert a == b

    def test_span_length_fixed_by_slot_count(self):
        rng = random.Random(11)
        docs = random_corpus(rng, max_tokens=1500)
        idx = CorpusIndex(docs)
        for _ in range(20):
            q = random_query(rng)
            for s in idx.search(q):
                assert s.match_end - s.match_start == len(q.slots)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_oracle_equivalence_property(self, data):
        vocab = ["a", "b", "c", "that", "of"]
        docs = data.draw(st.lists(
            st.lists(st.sampled_from(vocab), min_size=1, max_size=60),
            min_size=1, max_size=6))
        slots = data.draw(st.lists(
            st.sampled_from(vocab + [None]), min_size=1, max_size=5))
        if all(s is None for s in slots):
            slots[0] = "a"
        query = PhraseQuery(tuple(slots))
        assert spans(CorpusIndex(docs).search(query, cap=10**9)) == \
            scan_oracle(docs, query)

    def test_window_bounds_match_span(self):
        doc = tokenize("a b c d e f g h i j k l juice that is made of "
                       "oranges m n o p q r s t u v w x")
        idx = CorpusIndex([doc])
        (snip,) = idx.search(PhraseQuery.parse("juice that is made of *"))
        assert snip.window_start <= snip.match_start
        assert snip.match_end <= snip.window_end
        assert snip.match_start - snip.window_start == 10
        assert snip.window_end - snip.match_end == 10


class TestPersistence:
    def test_round_trip(self, tmp_path):
        docs = [tokenize("juice that is made of oranges"),
                tokenize("statues that were made of bronze")]
        idx = CorpusIndex(docs)
        path = tmp_path / "corpus.idx"
        idx.save(path)
        loaded = CorpusIndex.load(path)
        q = PhraseQuery.parse("* that * made of *")
        assert spans(loaded.search(q)) == spans(idx.search(q))
        assert loaded.total_tokens == idx.total_tokens

    def test_magic_and_version_checked(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_bytes(b"XXXX\x01junk")
        with pytest.raises(CorpusError):
            CorpusIndex.load(path)
        path.write_bytes(b"NCIX\x09junk")
        with pytest.raises(CorpusError):
            CorpusIndex.load(path)

    def test_save_is_byte_stable(self, tmp_path):
        docs = [tokenize("juice that is made of oranges")]
        a, b = tmp_path / "a.idx", tmp_path / "b.idx"
        CorpusIndex(docs).save(a)
        CorpusIndex(docs).save(b)
        assert a.read_bytes() == b.read_bytes()


class TestNGramTable:
    def test_planted_lookup(self):
        table = NGramTable({("orange", "juice"): 150})
        assert table.count(("orange", "juice")) == 150

    def test_absent_is_zero(self):
        table = NGramTable()
        assert table.count(("no", "such")) == 0

    def test_length_bounds(self):
        table = NGramTable()
        with pytest.raises(CorpusError):
            table.count(())
        with pytest.raises(CorpusError):
            table.count(tuple("abcdef"))

    def test_from_corpus_equals_recount(self):
        rng = random.Random(13)
        docs = random_corpus(rng, max_tokens=800)
        table = NGramTable.from_corpus(docs, max_n=3)
        for tokens in [("juice",), ("juice", "that"), ("is", "made", "of"),
                       ("absent", "gram")]:
            assert table.count(tokens) == recount_oracle(docs, tokens)

    def test_web1t_round_trip(self, tmp_path):
        table = NGramTable({("orange", "juice"): 150, ("juice",): 900})
        path = tmp_path / "grams.tsv"
        table.save_web1t(path)
        loaded = NGramTable.from_web1t(path)
        assert loaded.count(("orange", "juice")) == 150
        assert loaded.count(("juice",)) == 900

    def test_web1t_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("orange juice\tnotanumber\n")
        with pytest.raises(CorpusError):
            NGramTable.from_web1t(path)
