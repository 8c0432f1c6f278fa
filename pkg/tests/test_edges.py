"""Edge coverage that the module-focused files do not reach."""

import pytest

from ncharvest.cli import main
from ncharvest.corpus import (
    CorpusError,
    CorpusIndex,
    NGramTable,
    PhraseQuery,
    read_corpus,
    tokenize,
)
from ncharvest.engine import (
    BootstrapConfig,
    BootstrapEngine,
    HarvestState,
    Seeds,
)
from ncharvest.lexicon import Lexicon
from ncharvest.model import NounCompound, Pattern

LEX = Lexicon.bundled()
MADE_OF = Pattern("make", "passive", "of")


class TestReadCorpus:
    def test_one_document_per_line(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("first doc here\nsecond doc here\n\n",
                        encoding="utf-8")
        docs = read_corpus(path)
        assert len(docs) == 2
        assert docs[0] == ["first", "doc", "here"]

    def test_one_document_per_file(self, tmp_path):
        d = tmp_path / "docs"
        d.mkdir()
        (d / "b.txt").write_text("second document\nstill second\n")
        (d / "a.txt").write_text("first document")
        docs = read_corpus(d, per_file=True)
        assert docs == [["first", "document"],
                        ["second", "document", "still", "second"]]

    def test_per_file_requires_directory(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("text\n", encoding="utf-8")
        with pytest.raises(CorpusError):
            read_corpus(path, per_file=True)


class TestWindowEdges:
    def test_window_truncated_at_document_start_and_end(self):
        doc = tokenize("juice that is made of oranges")
        idx = CorpusIndex([doc])
        (snip,) = idx.search(PhraseQuery.parse("juice that is made of *"))
        assert snip.window_start == 0
        assert snip.window_end == len(doc)
        assert snip.match_tokens[-1] == "oranges"

    def test_single_token_document(self):
        idx = CorpusIndex([["juice"]])
        (snip,) = idx.search(PhraseQuery.parse("juice"))
        assert snip.tokens == ("juice",)


class TestNcSeedCut:
    def test_top_k_cut_applies_to_harvested_support(self):
        seeds = Seeds(ncs=(NounCompound("orange", "juice"),),
                      patterns=(MADE_OF,),
                      pairs=((NounCompound("orange", "juice"), MADE_OF),))
        state = HarvestState(seeds=seeds)
        heads = ["juice", "statue", "bar", "cube", "team", "chain", "coin",
                 "toy", "dune", "wall", "tool", "helmet"]
        for rank, head in enumerate(heads):
            nc = NounCompound("bronze", head)
            state.accepted_ncs[nc] = 1
            state.pairs[(nc, MADE_OF)] = 100 - rank
        config = BootstrapConfig(strategy="strict", n_threshold=5,
                                 m_threshold=1, max_iterations=1,
                                 top_k_nc_seeds=10)
        engine = BootstrapEngine(LEX, CorpusIndex([["x"]]), NGramTable(),
                                 config)
        selected = engine._nc_seeds_for(state, MADE_OF)
        assert len(selected) == 10
        assert NounCompound("bronze", "tool") not in selected
        assert NounCompound("bronze", "juice") in selected

    def test_seed_file_fallback_without_harvested_support(self):
        seeds = Seeds(ncs=(NounCompound("orange", "juice"),
                           NounCompound("bronze", "statue")),
                      patterns=(MADE_OF,),
                      pairs=((NounCompound("orange", "juice"), MADE_OF),
                             (NounCompound("bronze", "statue"), MADE_OF)))
        config = BootstrapConfig(strategy="strict", n_threshold=5,
                                 m_threshold=1, max_iterations=1)
        engine = BootstrapEngine(LEX, CorpusIndex([["x"]]), NGramTable(),
                                 config)
        state = HarvestState(seeds=seeds)
        assert engine._nc_seeds_for(state, MADE_OF) == [
            NounCompound("bronze", "statue"),
            NounCompound("orange", "juice")]


class TestCliFlags:
    def test_index_per_file_directory(self, tmp_path, capsys):
        d = tmp_path / "docs"
        d.mkdir()
        (d / "one.txt").write_text("juice that is made of apples .")
        (d / "two.txt").write_text("another short document .")
        code = main(["index", str(d), "--per-file",
                     "--out", str(tmp_path / "c.idx")])
        assert code == 0
        assert "documents: 2" in capsys.readouterr().out

    def test_run_workers_override_keeps_results(self, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text(
            "\n".join(["the juice that is made of apples is cheap ."] * 5)
            + "\n", encoding="utf-8")
        (tmp_path / "web1t.tsv").write_text("apple juice\t150\n",
                                            encoding="utf-8")
        (tmp_path / "sn.tsv").write_text("orange\tjuice\n")
        (tmp_path / "sp.tsv").write_text("make\tpassive\tof\n")
        (tmp_path / "pr.tsv").write_text("orange\tjuice\tmake\tpassive\tof\n")
        assert main(["index", str(corpus),
                     "--out", str(tmp_path / "c.idx")]) == 0
        base = [
            "strategy = strict", "n_threshold = 5", "m_threshold = 1",
            "max_iterations = 1", "index = c.idx", "ngrams = web1t.tsv",
            "seed_ncs = sn.tsv", "seed_patterns = sp.tsv",
            "seed_pairs = pr.tsv",
        ]
        for label, extra_args in (("one", []), ("four", ["--workers", "4"])):
            conf = tmp_path / f"{label}.conf"
            conf.write_text("\n".join(base + [f"output_dir = out_{label}"])
                            + "\n", encoding="utf-8")
            assert main(["run", "--config", str(conf)] + extra_args) == 0
        a = (tmp_path / "out_one" / "state.json").read_text()
        b = (tmp_path / "out_four" / "state.json").read_text()
        assert a == b
