"""Post-hoc analytics over a finished harvest: collocation strength,
accuracy-vs-collocation binning, inter-annotator agreement, and the
final dataset emission (one NC per record with its distribution over
paraphrasing patterns)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import NGramTable
from .engine import HarvestState
from .lexicon import Lexicon
from .model import NounCompound, Pattern

CORRECT = "correct"
INCORRECT = "incorrect"


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class JudgmentFile:
    """Binary correctness labels keyed by item id."""

    labels: dict[str, str]

    def __post_init__(self):
        for item, label in self.labels.items():
            if label not in (CORRECT, INCORRECT):
                raise AnalysisError(f"bad label for {item!r}: {label!r}")

    @classmethod
    def load(cls, path) -> "JudgmentFile":
        labels: dict[str, str] = {}
        for lineno, line in enumerate(
                Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            item, sep, label = line.partition("\t")
            if not sep:
                raise AnalysisError(f"{path}:{lineno}: expected TAB")
            if item in labels:
                raise AnalysisError(f"{path}:{lineno}: duplicate id {item!r}")
            labels[item] = label.strip()
        return cls(labels)

    def __len__(self):
        return len(self.labels)


def dice(nc: NounCompound, ngrams: NGramTable) -> float:
    """Collocation strength 2*c(mod head) / (c(mod) + c(head))."""
    c_mod = ngrams.count((nc.modifier,))
    c_head = ngrams.count((nc.head,))
    if c_mod <= 0 or c_head <= 0:
        raise AnalysisError(f"zero unigram count for {nc}")
    return 2.0 * ngrams.count((nc.modifier, nc.head)) / (c_mod + c_head)


def bin_accuracy_by_dice(items: list[tuple[float, str]],
                         bin_count: int) -> list[dict]:
    """Equal-width bins over [0, 1]; items are (dice, label) pairs.

    Returns one row per bin: lo, hi, n, accuracy (None when empty).
    """
    if bin_count < 1:
        raise AnalysisError("bin_count must be >= 1")
    totals = [0] * bin_count
    correct = [0] * bin_count
    for value, label in items:
        if not 0.0 <= value <= 1.0:
            raise AnalysisError(f"dice value out of range: {value}")
        idx = min(int(value * bin_count), bin_count - 1)
        totals[idx] += 1
        if label == CORRECT:
            correct[idx] += 1
    rows = []
    for i in range(bin_count):
        rows.append({
            "lo": i / bin_count,
            "hi": (i + 1) / bin_count,
            "n": totals[i],
            "accuracy": (100.0 * correct[i] / totals[i]
                         if totals[i] else None),
        })
    return rows


def bin_table_to_tsv(rows: list[dict]) -> str:
    lines = ["lo\thi\tn\taccuracy"]
    for r in rows:
        acc = "" if r["accuracy"] is None else f"{r['accuracy']:.2f}"
        lines.append(f"{r['lo']:.3f}\t{r['hi']:.3f}\t{r['n']}\t{acc}")
    return "\n".join(lines) + "\n"


def cohen_kappa(a: JudgmentFile, b: JudgmentFile) -> float:
    """Chance-corrected agreement over two binary judgment files with
    identical item ids."""
    if set(a.labels) != set(b.labels):
        missing = sorted(set(a.labels) ^ set(b.labels))
        raise AnalysisError(f"judgment id mismatch: {missing[:5]}")
    n = len(a.labels)
    if n == 0:
        raise AnalysisError("empty judgment files")
    observed = sum(1 for item, label in a.labels.items()
                   if b.labels[item] == label) / n
    p_e = 0.0
    for label in (CORRECT, INCORRECT):
        p_a = sum(1 for v in a.labels.values() if v == label) / n
        p_b = sum(1 for v in b.labels.values() if v == label) / n
        p_e += p_a * p_b
    if p_e == 1.0:
        if observed == 1.0:
            return 1.0
        raise AnalysisError("degenerate marginals with disagreement")
    return (observed - p_e) / (1.0 - p_e)


def nc_item_id(nc: NounCompound) -> str:
    return f"{nc.modifier} {nc.head}"


def dataset_records(state: HarvestState,
                    lexicon: Lexicon | None = None) -> list[dict]:
    """One record per harvested NC: modifier, head, and its patterns
    sorted by descending support (ties by pattern key)."""
    by_nc: dict[NounCompound, list[tuple[Pattern, int]]] = {}
    for (nc, pattern), support in state.pairs.items():
        by_nc.setdefault(nc, []).append((pattern, support))
    records = []
    for nc in sorted(by_nc):
        entries = sorted(by_nc[nc],
                         key=lambda ps: (-ps[1], ps[0].sort_key()))
        records.append({
            "modifier": nc.modifier,
            "head": nc.head,
            "patterns": [
                {
                    "verb": p.verb,
                    "voice": p.voice,
                    "preposition": p.preposition,
                    "display": p.display(lexicon),
                    "support": n,
                }
                for p, n in entries
            ],
        })
    return records


def emit_dataset(state: HarvestState, fmt: str = "jsonl",
                 lexicon: Lexicon | None = None) -> str:
    records = dataset_records(state, lexicon)
    if fmt == "jsonl":
        return "".join(json.dumps(r, sort_keys=True, separators=(",", ":"))
                       + "\n" for r in records)
    if fmt == "tsv":
        lines = ["modifier\thead\tpattern\tsupport"]
        for r in records:
            for p in r["patterns"]:
                lines.append(f"{r['modifier']}\t{r['head']}\t"
                             f"{p['display']}\t{p['support']}")
        return "\n".join(lines) + "\n"
    raise AnalysisError(f"unknown dataset format: {fmt!r}")
