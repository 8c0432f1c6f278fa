"""Word knowledge for the pipeline: POS lookup, lemmatization, and
inflection generation for nouns (number) and verb patterns
(number x tense x voice), backed by a bundled lexicon file.

Lexicon file format (UTF-8, tab separated, ``#`` lines ignored)::

    lemma<TAB>pos<TAB>form_name=form,...

``pos`` is a comma separated subset of {noun, verb, adjective, other}.
Regular inflections are derived by suffix rules at load time; the form
column only lists exceptions (e.g. ``plural=children``,
``past=made``).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import ACTIVE, Pattern

NOUN = "noun"
VERB = "verb"
ADJECTIVE = "adjective"
OTHER = "other"
POS_TAGS = (NOUN, VERB, ADJECTIVE, OTHER)

PRESENT = "present"
PAST = "past"
PRESENT_PERFECT = "present_perfect"
PRESENT_PROGRESSIVE = "present_progressive"
PAST_PROGRESSIVE = "past_progressive"

SINGULAR = "singular"
PLURAL = "plural"

_VOWELS = "aeiou"

VERB_SLOTS = ("base", "third_singular", "past", "past_participle", "gerund")


class LexiconError(ValueError):
    """Raised for malformed lexicon files and invalid lookups."""


def _regular_plural(word: str) -> str:
    if word.endswith(("s", "sh", "ch", "x", "z")):
        return word + "es"
    if word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if word.endswith("o") and len(word) > 1 and word[-2] not in _VOWELS:
        return word + "es"
    return word + "s"


def _doubles_final(word: str) -> bool:
    # short consonant-initial words ending CVC double the final consonant
    # (stop -> stopped); final w/x/y never double
    return (
        3 <= len(word) <= 4
        and word[0] not in _VOWELS
        and word[-1] not in _VOWELS
        and word[-1] not in "wxy"
        and word[-2] in _VOWELS
        and word[-3] not in _VOWELS
    )


def _regular_past(word: str) -> str:
    if word.endswith("e"):
        return word + "d"
    if word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        return word[:-1] + "ied"
    if _doubles_final(word):
        return word + word[-1] + "ed"
    return word + "ed"


def _regular_gerund(word: str) -> str:
    if word.endswith(("ee", "oe", "ye")):
        return word + "ing"
    if word.endswith("e"):
        return word[:-1] + "ing"
    if _doubles_final(word):
        return word + word[-1] + "ing"
    return word + "ing"


# fallback suffix rules for words outside the lexicon, tried in order;
# each entry is (suffix, replacement)
_FALLBACK_NOUN_RULES = (("ies", "y"), ("ses", "s"), ("xes", "x"),
                        ("zes", "z"), ("ches", "ch"), ("shes", "sh"),
                        ("s", ""))
_FALLBACK_VERB_RULES = (("ies", "y"), ("ied", "y"), ("es", ""), ("ed", ""),
                        ("ing", ""), ("s", ""))

# unknown-word oddities the suffix rules get wrong
_FALLBACK_EXCEPTIONS = {
    "axes": "axe",
    "gases": "gas",
    "lenses": "lens",
    "quizzes": "quiz",
}


@dataclass(frozen=True)
class InflectedPattern:
    """One concrete surface realization of a pattern."""

    tokens: tuple[str, ...]
    voice: str
    number: str
    tense: str

    def __str__(self):
        return " ".join(self.tokens)


class Lexicon:
    """Immutable after load; safe for unrestricted concurrent reads."""

    def __init__(self):
        self._pos: dict[str, set[str]] = {}
        self._explicit: dict[str, dict[str, str]] = {}
        # form -> {pos -> lemma}; built once all entries are read
        self._form_index: dict[str, dict[str, str]] = {}
        self._noun_plural: dict[str, str] = {}
        self._verb_forms: dict[str, dict[str, str]] = {}
        self.prepositions: frozenset[str] = frozenset()
        self.coordinating: frozenset[str] = frozenset()
        self.subordinating: frozenset[str] = frozenset()
        self.relative_pronouns: frozenset[str] = frozenset()

    # -- loading -----------------------------------------------------------

    @classmethod
    def bundled(cls) -> "Lexicon":
        data = resources.files("ncharvest").joinpath("data")
        lex = cls.from_file(data.joinpath("lexicon.tsv"))
        lex.prepositions = _load_wordlist(data.joinpath("prepositions.txt"))
        lex.coordinating = _load_wordlist(data.joinpath("conjunctions.txt"))
        lex.subordinating = _load_wordlist(data.joinpath("subordinating.txt"))
        lex.relative_pronouns = _load_wordlist(
            data.joinpath("relative_pronouns.txt"))
        return lex

    @classmethod
    def from_file(cls, path) -> "Lexicon":
        lex = cls()
        text = (path.read_text(encoding="utf-8")
                if hasattr(path, "read_text") else
                Path(path).read_text(encoding="utf-8"))
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2:
                raise LexiconError(f"line {lineno}: expected >=2 columns")
            lemma = cols[0].strip().lower()
            pos_set = {p.strip() for p in cols[1].split(",") if p.strip()}
            bad = pos_set - set(POS_TAGS)
            if not lemma or bad:
                raise LexiconError(f"line {lineno}: bad entry {raw!r}")
            forms = {}
            if len(cols) >= 3 and cols[2].strip():
                for item in cols[2].split(","):
                    name, _, value = item.partition("=")
                    if not value:
                        raise LexiconError(
                            f"line {lineno}: bad form spec {item!r}")
                    forms[name.strip()] = value.strip().lower()
            lex._add(lemma, pos_set, forms)
        lex._build_indexes()
        return lex

    def _add(self, lemma, pos_set, forms):
        self._pos.setdefault(lemma, set()).update(pos_set)
        self._explicit.setdefault(lemma, {}).update(forms)

    def _build_indexes(self):
        for lemma, pos_set in self._pos.items():
            explicit = self._explicit.get(lemma, {})
            if NOUN in pos_set:
                plural = explicit.get("plural", _regular_plural(lemma))
                self._noun_plural[lemma] = plural
                self._index(lemma, NOUN, lemma)
                self._index(plural, NOUN, lemma)
            if VERB in pos_set:
                forms = {
                    "base": lemma,
                    "third_singular": explicit.get(
                        "third_singular", _regular_plural(lemma)),
                    "plural_present": explicit.get("plural_present", lemma),
                    "past": explicit.get("past", _regular_past(lemma)),
                    "gerund": explicit.get("gerund", _regular_gerund(lemma)),
                }
                forms["past_participle"] = explicit.get(
                    "past_participle", forms["past"])
                for extra in ("past_plural", "first_singular"):
                    if extra in explicit:
                        forms[extra] = explicit[extra]
                self._verb_forms[lemma] = forms
                for surface in forms.values():
                    self._index(surface, VERB, lemma)
            if ADJECTIVE in pos_set:
                self._index(lemma, ADJECTIVE, lemma)
            if OTHER in pos_set:
                self._index(lemma, OTHER, lemma)

    def _index(self, form, pos, lemma):
        slot = self._form_index.setdefault(form, {})
        # first listed lemma wins on collisions within one POS
        slot.setdefault(pos, lemma)

    # -- lookups -----------------------------------------------------------

    def pos_of(self, lemma: str) -> frozenset[str]:
        return frozenset(self._pos.get(lemma, ()))

    def is_noun(self, word: str) -> bool:
        """True iff the lemmatized word is listed as a noun."""
        if not word:
            raise LexiconError("empty word")
        return NOUN in self._form_index.get(word.lower(), {})

    def is_verb_form(self, word: str) -> bool:
        return VERB in self._form_index.get(word.lower(), {})

    def is_adjective(self, word: str) -> bool:
        return ADJECTIVE in self._form_index.get(word.lower(), {})

    def is_known(self, word: str) -> bool:
        return bool(self._form_index.get(word.lower()))

    def verb_lemma_of(self, word: str) -> str | None:
        return self._form_index.get(word.lower(), {}).get(VERB)

    def verb_slots_of(self, word: str) -> frozenset[str]:
        """All form slots a surface form can fill for its verb lemma."""
        word = word.lower()
        lemma = self.verb_lemma_of(word)
        if lemma is None:
            return frozenset()
        forms = self._verb_forms[lemma]
        return frozenset(slot for slot, f in forms.items() if f == word)

    def lemmatize(self, word: str, pos: str) -> str:
        return self.lemmatize_flagged(word, pos)[0]

    def lemmatize_flagged(self, word: str, pos: str) -> tuple[str, bool]:
        """Lowercase and reduce to base form.

        Unknown words fall back to suffix stripping and are flagged
        ``False`` in the second slot; they are never an error.
        """
        if not word:
            raise LexiconError("empty word")
        if pos not in (NOUN, VERB):
            raise LexiconError(f"unsupported lemmatization pos: {pos!r}")
        word = word.lower()
        hit = self._form_index.get(word, {}).get(pos)
        if hit is not None:
            return hit, True
        if word in _FALLBACK_EXCEPTIONS:
            return _FALLBACK_EXCEPTIONS[word], False
        rules = (_FALLBACK_NOUN_RULES if pos == NOUN
                 else _FALLBACK_VERB_RULES)
        for suffix, replacement in rules:
            if word.endswith(suffix) and len(word) > len(suffix) + 1:
                candidate = word[: -len(suffix)] + replacement
                # undo consonant doubling left over from -ed/-ing
                if (len(candidate) > 2 and candidate[-1] == candidate[-2]
                        and candidate[-1] not in _VOWELS
                        and candidate not in self._pos):
                    undoubled = candidate[:-1]
                    if undoubled in self._pos:
                        candidate = undoubled
                hit = self._form_index.get(candidate, {}).get(pos)
                if hit is not None:
                    return hit, True
                return candidate, False
        return word, False

    def noun_forms(self, lemma: str) -> dict[str, str]:
        lemma = lemma.lower()
        if lemma not in self._noun_plural:
            raise LexiconError(f"not a noun lemma: {lemma!r}")
        return {"singular": lemma, "plural": self._noun_plural[lemma]}

    def verb_forms(self, lemma: str) -> dict[str, str]:
        lemma = lemma.lower()
        if lemma not in self._verb_forms:
            raise LexiconError(f"not a verb lemma: {lemma!r}")
        return dict(self._verb_forms[lemma])

    # -- inflection grid ---------------------------------------------------

    def inflect_pattern(self, pattern: Pattern) -> list[InflectedPattern]:
        """Enumerate the committed surface grid for a pattern.

        Active patterns inflect the main verb over seven slots (present
        singular/plural, past, present perfect singular/plural, present
        progressive singular/plural); passive patterns keep the fixed
        past participle and inflect the auxiliary "be" over ten slots
        (the active ones with number-marked past, plus past
        progressive).  Identical surfaces collapse to one entry.
        """
        if pattern.verb not in self._verb_forms:
            raise LexiconError(f"unknown pattern verb: {pattern.verb!r}")
        forms = self._verb_forms[pattern.verb]
        prep = pattern.prep_tokens
        slots: list[tuple[tuple[str, ...], str, str]]
        if pattern.voice == ACTIVE:
            slots = [
                ((forms["third_singular"],), SINGULAR, PRESENT),
                ((forms["plural_present"],), PLURAL, PRESENT),
                ((forms["past"],), SINGULAR, PAST),
                (("has", forms["past_participle"]), SINGULAR, PRESENT_PERFECT),
                (("have", forms["past_participle"]), PLURAL, PRESENT_PERFECT),
                (("is", forms["gerund"]), SINGULAR, PRESENT_PROGRESSIVE),
                (("are", forms["gerund"]), PLURAL, PRESENT_PROGRESSIVE),
            ]
        else:
            pp = forms["past_participle"]
            slots = [
                (("is", pp), SINGULAR, PRESENT),
                (("are", pp), PLURAL, PRESENT),
                (("was", pp), SINGULAR, PAST),
                (("were", pp), PLURAL, PAST),
                (("has", "been", pp), SINGULAR, PRESENT_PERFECT),
                (("have", "been", pp), PLURAL, PRESENT_PERFECT),
                (("is", "being", pp), SINGULAR, PRESENT_PROGRESSIVE),
                (("are", "being", pp), PLURAL, PRESENT_PROGRESSIVE),
                (("was", "being", pp), SINGULAR, PAST_PROGRESSIVE),
                (("were", "being", pp), PLURAL, PAST_PROGRESSIVE),
            ]
        out: list[InflectedPattern] = []
        seen: set[tuple[str, ...]] = set()
        for tokens, number, tense in slots:
            surface = tokens + prep
            if surface in seen:
                continue
            seen.add(surface)
            out.append(InflectedPattern(surface, pattern.voice, number, tense))
        return out


def _load_wordlist(path) -> frozenset[str]:
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)
