r"""
Mapping tori and the t-pushing normalization.

The mapping torus of an automorphism ``phi`` of ``G = <X; R>`` adds one
stable letter ``t`` and one relator ``t^-1 a t phi(a)^-1`` per generator.
Normalization moves every ``t`` of a word to the right end using the two
rewrite rules ``t a = phi^-1(a) t`` and ``t^-1 a = phi(a) t^-1``, producing
a t-free word ``z'`` with ``z = z' t^s`` in the torus; each single-letter
rule application is one t-cell of the corresponding diagram.

The peripheral family collects the primitive roots of the twisted edge
elements (one per free-conjugacy class); relative length counts a maximal
literal power of a peripheral root as one syllable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotInvertible, RootUnsupported
from .gog import (GraphOfGroups, OrderedLabeling, TwistSpec,
                  fundamental_presentation, lift_word, standard_twist,
                  standard_twist_inverse)
from .oracle import Answer, oracle_for
from .presentation import Presentation
from .words import (Alphabet, FreeWord, GeneratorMap, cyclic_reduce,
                    free_reduce, invert_map, is_conjugate_free, primitive_root)


# ---------------------------------------------------------------------------
# mapping torus presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MappingTorusPresentation:
    base: Presentation
    phi: GeneratorMap
    phi_inv: GeneratorMap
    presentation: Presentation
    stable_letter: int            # letter index of t in the full alphabet
    stable_name: str

    @property
    def t_relator_indices(self) -> range:
        return range(len(self.base.relators), len(self.presentation.relators))

    def parse(self, text: str) -> FreeWord:
        return self.presentation.alphabet.parse(text)

    def spell(self, w: Sequence[int]) -> str:
        return self.presentation.alphabet.spell(w)


def mapping_torus(base: Presentation, phi: GeneratorMap,
                  phi_inv: GeneratorMap | None = None,
                  stable_name: str = "t",
                  inverse_search_len: int = 6) -> MappingTorusPresentation:
    """
    Build ``< G, t ; t^-1 a t = phi(a) >``.  The inverse automorphism is
    verified (or found by a bounded search); NotInvertible otherwise.
    """
    if phi.alphabet != base.alphabet:
        raise ValueError("automorphism must live on the base alphabet")
    if phi_inv is None:
        phi_inv = invert_map(phi, inverse_search_len)
        if phi_inv is None:
            raise NotInvertible("no inverse found within the search budget")
    else:
        if not phi_inv.after(phi).is_identity() or not phi.after(phi_inv).is_identity():
            oracle = oracle_for(base)
            for gen in base.alphabet.generators():
                for comp in (phi_inv.apply(phi.apply(gen)), phi.apply(phi_inv.apply(gen))):
                    if oracle.equal(comp, gen) is not Answer.EQUAL:
                        raise NotInvertible("supplied inverse fails on %s"
                                            % base.alphabet.spell(gen))
    if stable_name in base.alphabet:
        raise ValueError("stable letter %r collides with a generator" % stable_name)
    alphabet = base.alphabet.extended([stable_name])
    t = alphabet.letter(stable_name)
    relators = list(base.relators)
    for i, gen in enumerate(base.alphabet.generators()):
        img = phi.images[i]
        relators.append(free_reduce((-t,) + tuple(gen) + (t,) + tuple(~img)))
    return MappingTorusPresentation(base, phi, phi_inv,
                                    Presentation(alphabet, tuple(relators)),
                                    t, stable_name)


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizeStep:
    sign: int            # the exponent of the t being pushed
    before: FreeWord     # the reduced block it crosses
    after: FreeWord      # free reduction of the letterwise image


@dataclass(frozen=True)
class NormalizationTrace:
    input: FreeWord
    output: FreeWord             # z' (t-free)
    s: int                       # t-exponent sum
    t_cell_count: int            # one per (t, letter) crossing
    steps: tuple[NormalizeStep, ...]
    direction: str = "right"


def _split_blocks(t: int, z: FreeWord) -> tuple[list[FreeWord], list[int]]:
    """``z`` as alternating blocks and t-signs: B0 e1 B1 ... en Bn."""
    blocks: list[FreeWord] = []
    signs: list[int] = []
    cur: list[int] = []
    for letter in z:
        if abs(letter) == t:
            blocks.append(FreeWord(cur))
            cur = []
            signs.append(1 if letter > 0 else -1)
        else:
            cur.append(letter)
    blocks.append(FreeWord(cur))
    return blocks, signs


def _push_right(phi: GeneratorMap, phi_inv: GeneratorMap,
                blocks: list[FreeWord], signs: list[int],
                steps: list[NormalizeStep] | None) -> tuple[FreeWord, int, int]:
    """
    The canonical right-pushing order: repeatedly move the leftmost t over
    the block that follows it (one t-cell per letter crossed) and cancel
    adjacent opposite t's for free.  Earlier cancellation gives the minimal
    crossing structure; right-to-left pushing would recross canceled pairs.
    """
    count = 0
    while True:
        j = 0
        while j + 1 < len(signs):
            if signs[j] == -signs[j + 1] and not blocks[j + 1]:
                merged = blocks[j] * blocks[j + 2]
                del signs[j:j + 2]
                blocks[j:j + 3] = [merged]
                j = max(j - 1, 0)
            else:
                j += 1
        j = next((j for j in range(len(signs)) if blocks[j + 1]), None)
        if j is None:
            break
        sign, block = signs[j], blocks[j + 1]
        rule = phi_inv if sign > 0 else phi
        image = rule.apply(block)
        if steps is not None:
            steps.append(NormalizeStep(sign, block, image))
        count += len(block)
        blocks[j] = blocks[j] * image
        blocks[j + 1] = FreeWord()
    return blocks[0], sum(signs), count


def normalize(M: MappingTorusPresentation, z: FreeWord,
              direction: str = "right") -> NormalizationTrace:
    """
    Push every ``t`` to the right end of ``z`` (or to the left with
    ``direction="left"``, which mirrors the procedure).  Returns the full
    trace; ``z = z' t^s`` holds in the torus, and each application of a
    rewrite rule to one generator letter counts as one t-cell.
    """
    if direction == "left":
        rt = normalize(M, ~z, "right")
        steps = tuple(NormalizeStep(-st.sign, ~st.before, ~st.after)
                      for st in rt.steps)
        return NormalizationTrace(z, ~rt.output, -rt.s, rt.t_cell_count,
                                  steps, "left")
    if direction != "right":
        raise ValueError("direction must be 'right' or 'left'")
    M.presentation.alphabet.check(z)
    blocks, signs = _split_blocks(M.stable_letter, FreeWord(z))
    steps: list[NormalizeStep] = []
    out, s, count = _push_right(M.phi, M.phi_inv, blocks, signs, steps)
    return NormalizationTrace(FreeWord(z), out, s, count, tuple(steps), "right")


def replay_normalization(M: MappingTorusPresentation,
                         trace: NormalizationTrace) -> bool:
    """
    Independent replay: re-run the two rewrite rules letter by letter in the
    same canonical order and compare every recorded step, the output, the
    exponent and the count.  Shares only the word algebra with normalize.
    """
    z = trace.input if trace.direction == "right" else ~trace.input
    expected = trace.steps if trace.direction == "right" else tuple(
        NormalizeStep(-st.sign, ~st.before, ~st.after) for st in trace.steps)
    blocks, signs = _split_blocks(M.stable_letter, FreeWord(z))
    idx = 0
    count = 0
    while True:
        j = 0
        while j + 1 < len(signs):
            if signs[j] == -signs[j + 1] and not blocks[j + 1]:
                merged = blocks[j] * blocks[j + 2]
                del signs[j:j + 2]
                blocks[j:j + 3] = [merged]
                j = max(j - 1, 0)
            else:
                j += 1
        j = next((j for j in range(len(signs)) if blocks[j + 1]), None)
        if j is None:
            break
        sign, block = signs[j], blocks[j + 1]
        if idx >= len(expected):
            return False
        st = expected[idx]
        idx += 1
        if st.sign != sign or tuple(st.before) != tuple(block):
            return False
        rule = M.phi_inv if sign > 0 else M.phi
        image: FreeWord = FreeWord()
        for x in block:
            image = image * rule.apply(FreeWord((x,)))
        count += len(block)
        if tuple(st.after) != tuple(image):
            return False
        blocks[j] = blocks[j] * image
        blocks[j + 1] = FreeWord()
    if idx != len(expected) or count != trace.t_cell_count:
        return False
    out, s = blocks[0], sum(signs)
    if trace.direction == "right":
        return tuple(out) == tuple(trace.output) and s == trace.s
    return tuple(~out) == tuple(trace.output) and -s == trace.s


def torus_blocks(M: MappingTorusPresentation, z: FreeWord
                 ) -> list[FreeWord]:
    """Maximal t-free blocks of ``z``, in order (may include empty ends)."""
    t = M.stable_letter
    blocks: list[FreeWord] = []
    cur: list[int] = []
    for letter in z:
        if abs(letter) == t:
            blocks.append(FreeWord(cur))
            cur = []
        else:
            cur.append(letter)
    blocks.append(FreeWord(cur))
    return blocks


# ---------------------------------------------------------------------------
# peripheral family and relative length
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeripheralFamily:
    roots: tuple[FreeWord, ...]          # cyclically reduced, primitive
    provenance: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.roots)


def peripheral_family(g: GraphOfGroups, lab: OrderedLabeling,
                      spec: TwistSpec) -> PeripheralFamily:
    """
    One cyclic subgroup per conjugacy class of primitive roots of the
    twisted edges' elements (edges with nonzero exponent).
    """
    spec.check(lab)
    roots: list[FreeWord] = []
    prov: list[list[str]] = []
    for le in lab.edges:
        if spec.exponents[le.index - 1] == 0:
            continue
        core, _ = cyclic_reduce(le.root)
        candidate = core.word()
        if not candidate:
            raise RootUnsupported("edge %s has a trivial root" % le.eid)
        for i, existing in enumerate(roots):
            if is_conjugate_free(existing, candidate) \
                    or is_conjugate_free(existing, ~candidate):
                prov[i].append(le.eid)
                break
        else:
            roots.append(candidate)
            prov.append([le.eid])
    return PeripheralFamily(tuple(roots), tuple(tuple(p) for p in prov))


def _power_run(w: tuple[int, ...], i: int, root: tuple[int, ...]) -> int:
    """Number of consecutive copies of ``root`` in ``w`` starting at ``i``."""
    k = 0
    n, m = len(w), len(root)
    while i + m <= n and w[i:i + m] == root:
        k += 1
        i += m
    return k


def relative_length(w: FreeWord, family: PeripheralFamily | Sequence[FreeWord]) -> int:
    """
    Greedy left-to-right syllable count: a maximal literal power of a
    peripheral root counts one, every other letter counts one.
    """
    roots = family.roots if isinstance(family, PeripheralFamily) else tuple(family)
    pats = []
    for r in roots:
        pats.append(tuple(r))
        pats.append(tuple(~r))
    letters = tuple(w)
    i = 0
    count = 0
    while i < len(letters):
        best = 0
        for pat in pats:
            k = _power_run(letters, i, pat)
            best = max(best, k * len(pat))
        if best:
            i += best
        else:
            i += 1
        count += 1
    return count


# ---------------------------------------------------------------------------
# the Proposition-level bound report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockBound:
    block: FreeWord
    lift_length: int
    bound: int
    ok: bool


@dataclass(frozen=True)
class PropBoundsReport:
    diameter: int
    blocks: tuple[BlockBound, ...]
    relative_len: int
    relative_bound: int
    relative_ok: bool
    t_cells: int
    insertions_pre: int           # stable letters over all per-letter loops
    insertions_post: int          # stable letters surviving reduction
    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_prop_bounds(g: GraphOfGroups, lab: OrderedLabeling, spec: TwistSpec,
                       z: FreeWord, stable_name: str = "t") -> PropBoundsReport:
    """
    Run the normalization pipeline for the standard twist and measure the
    lemma-level bounds: |L(X_i)| <= (2D+1)|X_i| per t-free block and
    relative_length(z') <= (2D+2)|z| for the peripheral family.
    """
    spec.check(lab)
    base = fundamental_presentation(g, lab)
    phi = standard_twist(g, lab, spec)
    phi_inv = standard_twist_inverse(g, lab, spec)
    M = mapping_torus(base, phi, phi_inv, stable_name)
    M.presentation.alphabet.check(z)
    trace = normalize(M, z)
    D = lab.diameter
    violations: list[str] = []

    blocks = []
    pre = 0
    post = 0
    n_vertex = len(g.alphabet)
    for block in torus_blocks(M, z):
        if not block:
            continue
        lift = lift_word(g, lab, block)
        length = len(lift)
        bound = (2 * D + 1) * len(block)
        ok = length <= bound
        if not ok:
            violations.append("lift of %s has length %d > %d"
                              % (base.alphabet.spell(block), length, bound))
        blocks.append(BlockBound(block, length, bound, ok))
        post += sum(1 for l in lift if abs(l) > n_vertex)
        for letter in block:
            from .gog import basic_loop
            loop = basic_loop(g, lab, FreeWord((letter,)))
            pre += sum(1 for l in loop if abs(l) > n_vertex)

    fam = peripheral_family(g, lab, spec)
    rel = relative_length(trace.output, fam)
    rel_bound = (2 * D + 2) * len(z)
    rel_ok = rel <= rel_bound
    if not rel_ok:
        violations.append("relative length %d > %d" % (rel, rel_bound))
    return PropBoundsReport(D, tuple(blocks), rel, rel_bound, rel_ok,
                            trace.t_cell_count, pre, post, tuple(violations))
