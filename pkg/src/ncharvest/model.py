"""Core value types shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

ACTIVE = "active"
PASSIVE = "passive"
VOICES = (ACTIVE, PASSIVE)

LOOSE = "loose"
STRICT = "strict"
NC_ONLY_STRICT = "nc_only_strict"
STRATEGIES = (LOOSE, STRICT, NC_ONLY_STRICT)


@dataclass(frozen=True, order=True)
class NounCompound:
    """An ordered (modifier, head) lemma pair, e.g. ("orange", "juice")."""

    modifier: str
    head: str

    def __post_init__(self):
        for part in (self.modifier, self.head):
            if not part or part != part.lower() or " " in part:
                raise ValueError(f"bad noun compound part: {part!r}")

    def __str__(self):
        return f"{self.modifier} {self.head}"


@dataclass(frozen=True, order=True)
class Pattern:
    """A paraphrasing predicate: verb lemma, voice, optional trailing
    preposition (space separated when more than one word, e.g. "up of")."""

    verb: str
    voice: str
    preposition: str | None = None

    def __post_init__(self):
        if self.voice not in VOICES:
            raise ValueError(f"bad voice: {self.voice!r}")
        if not self.verb or self.verb != self.verb.lower():
            raise ValueError(f"bad verb lemma: {self.verb!r}")
        if self.preposition == "":
            object.__setattr__(self, "preposition", None)
        if self.verb == "be":
            raise ValueError("bare copular patterns are excluded")

    @property
    def prep_tokens(self) -> tuple[str, ...]:
        return tuple(self.preposition.split()) if self.preposition else ()

    def sort_key(self) -> tuple[str, str, str]:
        return (self.verb, self.voice, self.preposition or "")

    def display(self, lexicon=None) -> str:
        """Human-readable citation form, e.g. "be made of" / "look like"."""
        if self.voice == PASSIVE:
            participle = self.verb
            if lexicon is not None:
                participle = lexicon.verb_forms(self.verb)["past_participle"]
            head = f"be {participle}"
        else:
            head = self.verb
        return " ".join((head,) + self.prep_tokens)


@dataclass(frozen=True)
class Strategy:
    """Bootstrapping strategy for the NC-extraction step.

    Under nc_only_strict the usable pattern set is frozen to the initial
    seed patterns, which must be supplied here.
    """

    kind: str
    initial_patterns: frozenset[Pattern] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy: {self.kind!r}")
        if self.kind == NC_ONLY_STRICT and not self.initial_patterns:
            raise ValueError("nc_only_strict requires the initial pattern set")

    @property
    def fixes_a_noun(self) -> bool:
        return self.kind in (STRICT, NC_ONLY_STRICT)

    def allows(self, pattern: Pattern) -> bool:
        if self.kind == NC_ONLY_STRICT:
            return pattern in self.initial_patterns
        return True
