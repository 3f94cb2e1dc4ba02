"""
Pluggable word-problem oracles with three-valued answers.

An oracle answers EQUAL / NOT_EQUAL / UNKNOWN for words over a fixed
presentation.  EQUAL and NOT_EQUAL answers are always sound; UNKNOWN means
the strategy or budget ran out.  Complete strategies exist for the fixture
groups:

* ``free``     -- no relators; free reduction decides.
* ``abelian``  -- relators are exactly pairwise generator commutators
                  covering every pair of surviving generators.
* ``central``  -- one relator ``x^p y^q`` with |p|, |q| >= 2 (torus-knot
                  type); the central normal form z^m * (alternating
                  syllables in Z_|p| * Z_|q|) decides.
* ``rewrite``  -- bounded relator-insertion search; answers EQUAL or UNKNOWN
                  only, since exhausting a bounded search proves nothing.

Classification runs after a Tietze-elimination cascade: any generator that
occurs exactly once in some relator is solved for and substituted away (this
turns e.g. < a, b, c | a^2 b^-1, a c^-1 > into a free oracle on a).

Instances carry private memo tables; use one oracle per worker.
"""

from __future__ import annotations

import enum
from collections import deque
from typing import Hashable, Sequence

from .presentation import Presentation
from .words import FreeWord, GeneratorMap, free_reduce


class Answer(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not-equal"
    UNKNOWN = "unknown"


def _syllables(letters: Sequence[int]) -> list[tuple[int, int]]:
    """(base generator index, signed exponent) runs of a word."""
    out: list[tuple[int, int]] = []
    for l in letters:
        g, e = abs(l), (1 if l > 0 else -1)
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + e)
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append((g, e))
    return out


def _commutator_pair(r: FreeWord) -> frozenset[int] | None:
    if len(r) == 4 and r[0] == -r[2] and r[1] == -r[3] and abs(r[0]) != abs(r[1]):
        return frozenset((abs(r[0]), abs(r[1])))
    return None


class _Eliminator:
    """Cascade of Tietze eliminations over a presentation."""

    def __init__(self, pres: Presentation):
        alphabet = pres.alphabet
        n = len(alphabet)
        images: list[FreeWord] = [FreeWord((i + 1,)) for i in range(n)]
        relators = [FreeWord(r) for r in pres.relators]
        eliminated: set[int] = set()

        changed = True
        while changed:
            changed = False
            for r in relators:
                counts: dict[int, int] = {}
                for l in r:
                    counts[abs(l)] = counts.get(abs(l), 0) + 1
                target = next((g for g, c in sorted(counts.items()) if c == 1), None)
                if target is None:
                    continue
                k = next(i for i, l in enumerate(r) if abs(l) == target)
                rot = tuple(r)[k:] + tuple(r)[:k]
                tail = FreeWord(rot[1:])
                # rot reads target^(+-1) * tail = 1
                replacement = ~tail if rot[0] > 0 else tail
                subst = GeneratorMap(
                    alphabet,
                    [replacement if i + 1 == target else FreeWord((i + 1,))
                     for i in range(n)])
                images = [subst.apply(img) for img in images]
                relators = [w for w in (subst.apply(x) for x in relators) if w]
                eliminated.add(target)
                changed = True
                break

        self.map = GeneratorMap(alphabet, images)
        self.relators = tuple(relators)
        self.eliminated = frozenset(eliminated)

    def rewrite(self, w: Sequence[int]) -> FreeWord:
        return self.map.apply(w)


class _CentralForm:
    """Normal form for one relator reading x^p y^q, |p|, |q| >= 2.

    The element z = x^p = y^(-q) is central; every element is uniquely
    z^m * w with w an alternating word whose x-exponents lie in [1, |p|)
    and y-exponents in [1, |q|).  Generators other than x, y (if any) ride
    along as free-product factors.
    """

    def __init__(self, xg: int, p: int, yg: int, q: int):
        self.mod = {xg: abs(p), yg: abs(q)}
        self.zden = {xg: p, yg: -q}  # g ** zden[g] == z

    def form(self, w: Sequence[int]) -> Hashable:
        m = 0
        stack: list[tuple[int, int]] = []

        def push(g: int, e: int):
            nonlocal m
            while True:
                if stack and stack[-1][0] == g:
                    e += stack.pop()[1]
                if g in self.mod:
                    rho = e % self.mod[g]
                    m += (e - rho) // self.zden[g]
                    e = rho
                if e == 0:
                    if stack:
                        g, e = stack.pop()
                        continue
                    return
                stack.append((g, e))
                return

        for g, e in _syllables(w):
            push(g, e)
        return (m, tuple(stack))


class WordProblemOracle:
    """
    Three-valued word-problem oracle for one presentation.

    ``strategy``: ``auto`` (elimination cascade, then strongest matching
    complete strategy, then rewrite fallback) or one of ``free``,
    ``abelian``, ``central``, ``rewrite`` to force a particular one.
    """

    def __init__(self, pres: Presentation, strategy: str = "auto", budget: int = 20000):
        self.presentation = pres
        self.budget = budget
        self._free = False
        self._abelian = False
        self._central: _CentralForm | None = None
        self._elim: _Eliminator | None = None
        self._memo_trivial: dict[tuple[int, ...], bool] = {}

        if strategy == "auto":
            self._elim = _Eliminator(pres)
            kind = self._classify(self._elim.relators, self._elim.eliminated)
        elif strategy in ("free", "abelian", "central"):
            kind = self._classify(pres.relators, frozenset())
            if kind != strategy:
                raise ValueError("presentation does not support the %r strategy"
                                 % (strategy,))
        elif strategy == "rewrite":
            kind = "rewrite"
        else:
            raise ValueError("unknown strategy %r" % (strategy,))
        self.strategy = kind
        self.complete = kind != "rewrite"

    def _classify(self, relators: Sequence[FreeWord], eliminated: frozenset[int]) -> str:
        if not relators:
            self._free = True
            return "free"
        n = len(self.presentation.alphabet)
        surviving = [g for g in range(1, n + 1) if g not in eliminated]
        pairs = set()
        for r in relators:
            pair = _commutator_pair(r)
            if pair is None:
                pairs = None
                break
            pairs.add(pair)
        if pairs is not None:
            needed = {frozenset((g, h)) for i, g in enumerate(surviving)
                      for h in surviving[i + 1:]}
            if pairs == needed:
                self._abelian = True
                return "abelian"
        if len(relators) == 1:
            syl = _syllables(relators[0])
            if (len(syl) == 2 and syl[0][0] != syl[1][0]
                    and abs(syl[0][1]) >= 2 and abs(syl[1][1]) >= 2):
                (xg, p), (yg, q) = syl
                self._central = _CentralForm(xg, p, yg, q)
                return "central"
        return "rewrite"

    # -- normal forms -------------------------------------------------------

    def has_normal_forms(self) -> bool:
        return self.complete

    def _prepared(self, w: Sequence[int]) -> FreeWord:
        return self._elim.rewrite(w) if self._elim else free_reduce(w)

    def normal_form(self, w: Sequence[int]) -> Hashable:
        """A complete invariant of the group element (complete strategies)."""
        u = self._prepared(w)
        if self._free:
            return tuple(u)
        if self._abelian:
            n = len(self.presentation.alphabet)
            vec = [0] * n
            for l in u:
                vec[abs(l) - 1] += 1 if l > 0 else -1
            return tuple(vec)
        if self._central is not None:
            return self._central.form(u)
        raise RuntimeError("no normal form under the rewrite strategy")

    def canonical_word(self, w: Sequence[int]) -> FreeWord:
        """A canonical representative word for the element; usable as a
        vertex id in Cayley-ball constructions (complete strategies)."""
        u = self._prepared(w)
        if self._free:
            return u
        if self._abelian:
            nf = self.normal_form(u)
            out: list[int] = []
            for i, e in enumerate(nf):  # type: ignore[arg-type]
                out.extend([(i + 1) if e > 0 else -(i + 1)] * abs(e))
            return FreeWord(out)
        if self._central is not None:
            m, syll = self._central.form(u)  # type: ignore[misc]
            cf = self._central
            xg = next(g for g in cf.zden if cf.zden[g] in (cf.mod[g], -cf.mod[g]))
            out = []
            zexp = m * cf.zden[xg]
            out.extend([xg if zexp > 0 else -xg] * abs(zexp))
            for g, e in syll:
                out.extend([g if e > 0 else -g] * abs(e))
            return free_reduce(out)
        raise RuntimeError("no canonical form under the rewrite strategy")

    # -- decisions ----------------------------------------------------------

    def is_trivial(self, w: Sequence[int]) -> Answer:
        u = free_reduce(w)
        if not u:
            return Answer.EQUAL
        if self.complete:
            return (Answer.EQUAL if self.normal_form(u) == self.normal_form(())
                    else Answer.NOT_EQUAL)
        key = tuple(u)
        if key in self._memo_trivial:
            return Answer.EQUAL if self._memo_trivial[key] else Answer.UNKNOWN
        found = self._rewrite_search(u)
        self._memo_trivial[key] = found
        return Answer.EQUAL if found else Answer.UNKNOWN

    def equal(self, u: Sequence[int], v: Sequence[int]) -> Answer:
        uw, vw = free_reduce(u), free_reduce(v)
        if uw == vw:
            return Answer.EQUAL
        return self.is_trivial(uw * ~vw)

    def _rewrite_search(self, w: FreeWord) -> bool:
        forms = [f for f, _, _, _ in self.presentation.relator_forms()]
        if not forms:
            return False
        max_len = len(w) + 2 * self.presentation.max_relator_length
        seen = {tuple(w)}
        queue = deque([tuple(w)])
        spent = 0
        while queue and spent < self.budget:
            cur = queue.popleft()
            for form in forms:
                for pos in range(len(cur) + 1):
                    spent += 1
                    nxt = tuple(free_reduce(cur[:pos] + tuple(form) + cur[pos:]))
                    if not nxt:
                        return True
                    if len(nxt) <= max_len and nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        return False


def oracle_for(pres: Presentation, budget: int = 20000) -> WordProblemOracle:
    """Auto-detected oracle for a presentation."""
    return WordProblemOracle(pres, "auto", budget)
