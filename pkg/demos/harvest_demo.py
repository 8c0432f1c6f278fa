#!/usr/bin/env python3
"""Walk through a complete harvest on a tiny in-memory corpus.

The corpus embeds a handful of noun compounds reachable from two seed
patterns.  We build the index, run two strict iterations, and print
what was found at each stage.
"""

from ncharvest.corpus import CorpusIndex, NGramTable, tokenize
from ncharvest.engine import (
    BootstrapConfig,
    BootstrapEngine,
    HarvestState,
    Seeds,
)
from ncharvest.analysis import emit_dataset
from ncharvest.lexicon import Lexicon
from ncharvest.model import NounCompound, Pattern

CORPUS = (
    ["the juice that is made of apples is sold here ."] * 5
    + ["the juices that are made of grapes are quite popular ."] * 5
    + ["juice that is pressed from apples daily is the best ."] * 5
    + ["the pie that is made of apples is on display ."] * 5
    + ["a story about nothing much at all ."]
)

# bigram counts stand in for a web-scale frequency table; the pipeline
# rejects candidate compounds that are rare as bigrams
NGRAMS = NGramTable({
    ("apple", "juice"): 150, ("grape", "juice"): 150,
    ("apple", "pie"): 400, ("orange", "juice"): 500,
    ("apple",): 1000, ("grape",): 1000, ("juice",): 1000,
    ("pie",): 1000, ("orange",): 1000,
})

SEEDS = Seeds(
    ncs=(NounCompound("orange", "juice"),),
    patterns=(Pattern("make", "passive", "of"),),
    pairs=((NounCompound("orange", "juice"), Pattern("make", "passive",
                                                     "of")),),
)


def main():
    lexicon = Lexicon.bundled()
    index = CorpusIndex([tokenize(line) for line in CORPUS])
    print(f"indexed {index.doc_count} documents, "
          f"{index.total_tokens} tokens")

    config = BootstrapConfig(strategy="strict", n_threshold=5,
                             m_threshold=1, max_iterations=2)
    engine = BootstrapEngine(lexicon, index, NGRAMS, config)

    state = HarvestState(seeds=SEEDS)
    for _ in range(config.max_iterations):
        state, report = engine.run_iteration(state)
        print(f"\niteration {report.iteration}: "
              f"{report.new_ncs} new NCs, "
              f"{report.new_patterns} new patterns, "
              f"{report.queries_issued} queries")
        for nc, found_at in sorted(state.accepted_ncs.items()):
            if found_at == report.iteration:
                print(f"  + {nc}")
        if report.new_ncs == 0:
            break

    print("\nfinal dataset (per NC, its paraphrasing patterns):")
    print(emit_dataset(state, "tsv", lexicon))


if __name__ == "__main__":
    main()
