#!/usr/bin/env python3
"""Demonstrate the post-hoc analytics: collocation strength, agreement
between two annotators, and accuracy binned by collocation strength."""

import random

from ncharvest.analysis import (
    CORRECT,
    INCORRECT,
    JudgmentFile,
    bin_accuracy_by_dice,
    bin_table_to_tsv,
    cohen_kappa,
    dice,
)
from ncharvest.corpus import NGramTable
from ncharvest.model import NounCompound


def main():
    # dice collocation strength from planted counts
    ngrams = NGramTable({
        ("orange",): 200, ("juice",): 100, ("orange", "juice"): 30,
        ("worker",): 900, ("work",): 800, ("worker", "work"): 2,
    })
    strong = NounCompound("orange", "juice")
    weak = NounCompound("worker", "work")
    print(f"dice({strong}) = {dice(strong, ngrams):.3f}")
    print(f"dice({weak})  = {dice(weak, ngrams):.4f}")

    # two annotators who disagree on some items
    a = JudgmentFile({f"item{i}": CORRECT if i % 10 else INCORRECT
                      for i in range(100)})
    b = JudgmentFile({f"item{i}": CORRECT if i % 10 and i % 7 else INCORRECT
                      for i in range(100)})
    print(f"\ncohen kappa between annotators: {cohen_kappa(a, b):.3f}")

    # accuracy tends to rise with collocation strength in this
    # synthetic sample
    rng = random.Random(7)
    items = []
    for _ in range(2000):
        strength = rng.random()
        label = CORRECT if rng.random() < 0.3 + 0.6 * strength \
            else INCORRECT
        items.append((strength, label))
    print("\naccuracy by collocation-strength bin:")
    print(bin_table_to_tsv(bin_accuracy_by_dice(items, 5)))


if __name__ == "__main__":
    main()
