r"""
Free-word algebra over a signed generator alphabet.

Letters are nonzero integers: generator ``i`` of an alphabet is the letter
``i + 1`` and its formal inverse is ``-(i + 1)``.  Every word is stored freely
reduced; :class:`CyclicWord` is additionally reduced across the wrap and
compares equal up to rotation.  These are the currency of the whole package:
relators, edge elements, twist images and diagram boundaries are all
:class:`FreeWord` instances over one alphabet per session.

The text form of a word is whitespace-separated generator names, a trailing
apostrophe marking the inverse: ``a b' a``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .errors import TrivialWord, UnknownGenerator


class Alphabet:
    """
    An ordered list of distinct generator names.

    Translates between names and signed letters, and parses/spells words.

    >>> ab = Alphabet(("a", "b"))
    >>> ab.parse("a b' a")
    FreeWord("a b' a")
    >>> ab.spell((1, -2, 1))
    "a b' a"
    """

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct: %r" % (names,))
        for name in names:
            if not name or name.endswith("'") or any(ch.isspace() for ch in name):
                raise ValueError("bad generator name: %r" % (name,))
        self.names = names
        self._index = {name: i + 1 for i, name in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return "Alphabet(%r)" % (self.names,)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def letter(self, name: str) -> int:
        """Signed letter for a generator name, ``a'`` meaning the inverse."""
        if name.endswith("'"):
            base, sign = name[:-1], -1
        else:
            base, sign = name, 1
        try:
            return sign * self._index[base]
        except KeyError:
            raise UnknownGenerator("unknown generator %r" % (name,)) from None

    def name(self, letter: int) -> str:
        if not 1 <= abs(letter) <= len(self.names):
            raise UnknownGenerator("letter %d outside alphabet of size %d"
                                   % (letter, len(self.names)))
        base = self.names[abs(letter) - 1]
        return base if letter > 0 else base + "'"

    def generators(self) -> list["FreeWord"]:
        """The one-letter words, in order."""
        return [FreeWord((i + 1,)) for i in range(len(self.names))]

    def parse(self, text: str) -> "FreeWord":
        """Parse whitespace-separated tokens into a reduced word."""
        return free_reduce(self.letter(tok) for tok in text.split())

    def spell(self, letters: Iterable[int]) -> str:
        return " ".join(self.name(l) for l in letters)

    def check(self, word: Sequence[int]) -> None:
        """Raise UnknownGenerator if any letter falls outside this alphabet."""
        n = len(self.names)
        for l in word:
            if l == 0 or abs(l) > n:
                raise UnknownGenerator("letter %d outside alphabet of size %d"
                                       % (l, n))

    def extended(self, extra: Sequence[str]) -> "Alphabet":
        """This alphabet with more names appended."""
        return Alphabet(self.names + tuple(extra))


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for l in letters:
        l = int(l)
        if l == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


class FreeWord(tuple):
    """
    A freely reduced word, stored as a tuple of signed letters.

    The constructor insists on reduced input; use :func:`free_reduce` to
    build one from a raw letter sequence.  Multiplication reduces, ``~w`` is
    the inverse and ``w ** n`` the (signed) power.

    >>> w = free_reduce([1, 2, -2, 1])
    >>> w
    FreeWord('a a')
    >>> ~w * w
    FreeWord('')
    >>> free_reduce([2]) ** -2
    FreeWord("b' b'")
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        letters = tuple(letters)
        for a, b in itertools.pairwise(letters):
            if a == -b:
                raise ValueError("word is not freely reduced: %r" % (letters,))
        if any(l == 0 for l in letters):
            raise ValueError("0 is not a letter")
        return tuple.__new__(cls, letters)

    def __repr__(self) -> str:
        return "FreeWord(%r)" % (_default_spelling(self),)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return free_reduce(itertools.chain(self, other))

    def __invert__(self) -> "FreeWord":
        return FreeWord(tuple(-l for l in reversed(self)))

    def __pow__(self, n: int) -> "FreeWord":
        if n < 0:
            return (~self) ** (-n)
        result = FreeWord()
        for _ in range(n):
            result = result * self
        return result

    def conjugated_by(self, c: "FreeWord") -> "FreeWord":
        """``c^-1 * self * c``."""
        return ~c * self * c


def _default_spelling(word: Sequence[int]) -> str:
    # letters past 'z' fall back to x1, x2, ... purely for repr
    names = "abcdefghijklmnopqrstuvwxyz"
    parts = []
    for l in word:
        i = abs(l) - 1
        base = names[i] if i < len(names) else "x%d" % (i + 1,)
        parts.append(base if l > 0 else base + "'")
    return " ".join(parts)


def free_reduce(letters: Iterable[int]) -> FreeWord:
    """
    Freely reduce a raw letter sequence.

    >>> free_reduce([1, -1, 2])
    FreeWord('b')
    >>> free_reduce([])
    FreeWord('')
    >>> free_reduce([1, 2, -2, 1])
    FreeWord('a a')
    """
    return tuple.__new__(FreeWord, _reduce(letters))


class CyclicWord:
    """
    A cyclically reduced word identified up to rotation.

    The concrete rotation handed to the constructor is preserved (so callers
    can still conjugate back exactly); equality and hashing use the minimal
    rotation.

    >>> CyclicWord((1, 2)) == CyclicWord((2, 1))
    True
    >>> CyclicWord((1, 2)) == CyclicWord((1, -2))
    False
    """

    __slots__ = ("letters", "_canon")

    def __init__(self, letters: Iterable[int]):
        letters = tuple(letters)
        for a, b in itertools.pairwise(letters):
            if a == -b:
                raise ValueError("not reduced: %r" % (letters,))
        if letters and letters[0] == -letters[-1]:
            raise ValueError("not cyclically reduced: %r" % (letters,))
        self.letters = letters
        self._canon = min(letters[i:] + letters[:i] for i in range(len(letters))) \
            if letters else ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self._canon == other._canon

    def __hash__(self) -> int:
        return hash(("cyc", self._canon))

    def __repr__(self) -> str:
        return "CyclicWord(%r)" % (_default_spelling(self.letters),)

    def word(self) -> FreeWord:
        """The stored rotation as a plain word."""
        return FreeWord(self.letters)

    def rotations(self) -> list[tuple[int, ...]]:
        ls = self.letters
        return [ls[i:] + ls[:i] for i in range(len(ls))] or [()]


def cyclic_reduce(w: FreeWord) -> tuple[CyclicWord, FreeWord]:
    """
    Split ``w`` as ``conjugator * core * conjugator^-1`` with a cyclically
    reduced core.

    >>> ab = Alphabet(("a", "b"))
    >>> core, conj = cyclic_reduce(ab.parse("b a b'"))
    >>> (ab.spell(core), ab.spell(conj))
    ('a', 'b')
    >>> cyclic_reduce(ab.parse("a b"))[1]
    FreeWord('')
    """
    letters = tuple(w)
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    return CyclicWord(letters[i:j]), FreeWord(letters[:i])


def _least_period(letters: tuple[int, ...]) -> int:
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters == letters[:d] * (n // d):
            return d
    return n


def primitive_root(w: FreeWord) -> tuple[FreeWord, int]:
    """
    Write ``w`` as ``root ** exponent`` with a root that is not a proper
    power.  The root is conjugated back by the cyclic-reduction conjugator,
    so the identity ``root ** exponent == w`` holds on the nose.

    >>> ab = Alphabet(("a", "b"))
    >>> primitive_root(ab.parse("a a a a a a"))
    (FreeWord('a'), 6)
    >>> primitive_root(ab.parse("a b a b a b"))
    (FreeWord('a b'), 3)
    >>> root, n = primitive_root(ab.parse("b a a a a b'"))
    >>> (ab.spell(root), n)
    ("b a b'", 4)
    """
    core, conj = cyclic_reduce(w)
    if not core.letters:
        raise TrivialWord("the trivial word has no primitive root")
    d = _least_period(core.letters)
    root = conj * FreeWord(core.letters[:d]) * ~conj
    return root, len(core.letters) // d


class GeneratorMap:
    """
    A total map sending each generator of an alphabet to a word.

    Houses substitutions like twist automorphisms; ``apply`` substitutes
    letterwise and reduces.

    >>> ab = Alphabet(("a", "b"))
    >>> m = GeneratorMap.from_strings(ab, {"a": "a", "b": "a b"})
    >>> m.apply(ab.parse("b"))
    FreeWord('a b')
    >>> m.apply(ab.parse("a b a' b'"))
    FreeWord("a a b a' b' a'")
    """

    __slots__ = ("alphabet", "images")

    def __init__(self, alphabet: Alphabet, images: Sequence[FreeWord]):
        if len(images) != len(alphabet):
            raise ValueError("need one image per generator")
        for img in images:
            alphabet.check(img)
        self.alphabet = alphabet
        self.images = tuple(FreeWord(img) for img in images)

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "GeneratorMap":
        return cls(alphabet, alphabet.generators())

    @classmethod
    def from_strings(cls, alphabet: Alphabet, images: dict[str, str]) -> "GeneratorMap":
        if set(images) != set(alphabet.names):
            raise ValueError("images must cover exactly the alphabet")
        return cls(alphabet, [alphabet.parse(images[n]) for n in alphabet.names])

    def __eq__(self, other) -> bool:
        return (isinstance(other, GeneratorMap)
                and self.alphabet == other.alphabet
                and self.images == other.images)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.images))

    def __repr__(self) -> str:
        pairs = ", ".join("%s -> %s" % (n, self.alphabet.spell(img))
                          for n, img in zip(self.alphabet.names, self.images))
        return "GeneratorMap(%s)" % (pairs,)

    def is_identity(self) -> bool:
        return all(img == (i + 1,) for i, img in enumerate(self.images))

    def apply(self, w: Sequence[int]) -> FreeWord:
        """Letterwise substitution followed by free reduction."""
        self.alphabet.check(w)
        out: list[int] = []
        for l in w:
            img = self.images[abs(l) - 1]
            chunk = img if l > 0 else tuple(-x for x in reversed(img))
            for x in chunk:
                if out and out[-1] == -x:
                    out.pop()
                else:
                    out.append(x)
        return FreeWord(out)

    def after(self, first: "GeneratorMap") -> "GeneratorMap":
        """Composite ``self ∘ first`` (apply ``first``, then ``self``)."""
        return GeneratorMap(self.alphabet, [self.apply(img) for img in first.images])

    def iterate(self, w: FreeWord, n: int, inverse: "GeneratorMap | None" = None) -> FreeWord:
        """Apply this map ``n`` times (``n < 0`` uses the supplied inverse)."""
        if n < 0:
            if inverse is None:
                raise ValueError("negative iterate needs the inverse map")
            return inverse.iterate(w, -n)
        for _ in range(n):
            w = self.apply(w)
        return w


def apply_map(m: GeneratorMap, w: FreeWord) -> FreeWord:
    """Operation form of :meth:`GeneratorMap.apply`."""
    return m.apply(w)


def is_conjugate_free(u: FreeWord, v: FreeWord) -> bool:
    """
    Whether two words are conjugate in the free group: their cyclic cores
    must be rotations of each other.

    >>> ab = Alphabet(("a", "b"))
    >>> is_conjugate_free(ab.parse("a b"), ab.parse("b a"))
    True
    >>> is_conjugate_free(ab.parse("a"), ab.parse("b"))
    False
    >>> is_conjugate_free(ab.parse("b a a a a b'"), ab.parse("a a a a"))
    True
    """
    cu, _ = cyclic_reduce(u)
    cv, _ = cyclic_reduce(v)
    return cu == cv


def invert_map(m: GeneratorMap, max_len: int = 6) -> GeneratorMap | None:
    """
    Bounded breadth-first search for a two-sided inverse of ``m`` as a free
    map: for each generator, the shortest word mapping onto it.  Returns None
    when some generator has no preimage of length <= max_len.
    """
    alphabet = m.alphabet
    n = len(alphabet)
    targets = {FreeWord((i + 1,)): i for i in range(n)}
    found: dict[int, FreeWord] = {}
    seen = {FreeWord()}
    frontier = [FreeWord()]
    letters = [l for i in range(n) for l in (i + 1, -(i + 1))]
    while frontier and len(found) < n:
        next_frontier = []
        for u in frontier:
            for l in letters:
                v = u * FreeWord((l,))
                if len(v) <= len(u) or v in seen or len(v) > max_len:
                    continue
                seen.add(v)
                img = m.apply(v)
                if img in targets and targets[img] not in found:
                    found[targets[img]] = v
                next_frontier.append(v)
        frontier = next_frontier
    if len(found) < n:
        return None
    inv = GeneratorMap(alphabet, [found[i] for i in range(n)])
    if not inv.after(m).is_identity() or not m.after(inv).is_identity():
        return None
    return inv
