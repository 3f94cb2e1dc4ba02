"""Finitely presented groups as alphabet + relator words."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .words import Alphabet, FreeWord, cyclic_reduce


@dataclass(frozen=True)
class Presentation:
    """
    A finite presentation.  Relators are stored freely and cyclically
    reduced (the cyclic core is what cells read anyway).
    """

    alphabet: Alphabet
    relators: tuple[FreeWord, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for r in self.relators:
            self.alphabet.check(r)
            core, _ = cyclic_reduce(r)
            if tuple(core.letters) != tuple(r):
                raise ValueError("relator not cyclically reduced: %r" % (r,))

    @classmethod
    def parse(cls, generators: str, relators: Sequence[str] = ()) -> "Presentation":
        """
        Build from text: generator names separated by whitespace, each
        relator in word syntax (``a b a' b'``).

        >>> P = Presentation.parse("a b", ["a b a' b'"])
        >>> P.alphabet.names
        ('a', 'b')
        """
        alphabet = Alphabet(tuple(generators.split()))
        return cls(alphabet, tuple(alphabet.parse(r) for r in relators))

    def spell(self) -> str:
        rels = ", ".join(self.alphabet.spell(r) for r in self.relators)
        return "< %s | %s >" % (" ".join(self.alphabet.names), rels)

    def __repr__(self) -> str:
        return "Presentation(%s)" % (self.spell(),)

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def relator_forms(self) -> list[tuple[FreeWord, int, int, int]]:
        """
        All distinct insertable forms: cyclic rotations of each relator and
        its inverse, as (word, relator index, rotation, inverted) with the
        words deduplicated.
        """
        forms: list[tuple[FreeWord, int, int, int]] = []
        seen: set[tuple[int, ...]] = set()
        for idx, r in enumerate(self.relators):
            for inv in (0, 1):
                base = tuple(~r) if inv else tuple(r)
                for rot in range(max(1, len(base))):
                    word = base[rot:] + base[:rot]
                    if word not in seen:
                        seen.add(word)
                        forms.append((FreeWord(word), idx, rot, inv))
        return forms

    def face_words(self, idx: int) -> set[tuple[int, ...]]:
        """All words a face tagged with relator ``idx`` may read."""
        r = self.relators[idx]
        out: set[tuple[int, ...]] = set()
        for inv in (0, 1):
            base = tuple(~r) if inv else tuple(r)
            for rot in range(max(1, len(base))):
                out.add(base[rot:] + base[:rot])
        return out
