r"""
Graphs of groups with cyclic edge groups.

A graph of groups here is a connected graph whose vertices carry finitely
presented groups (on disjoint generator sets, all drawn from one global
alphabet) and whose directed edges carry two nontrivial edge elements: ``u``
in the initial vertex group and ``w`` in the terminal one.  The edge group is
infinite cyclic, so one relator per edge presents the fundamental group.

The ordered labeling fixes everything the twist machinery needs: a
breadth-first maximal tree from the basepoint, edge indices (tree edges
first, in attachment order), per-edge orientation (tree edges point from the
newly attached vertex toward the root; non-tree edges point out of the
vertex whose edge element has an extractable primitive root), and per-edge
root data ``u = root ** power``.

Twist conventions, pinned once and used everywhere:

* a tree-edge twist conjugates the component of the edge's *initial* (child)
  vertex by the rooted element ``u``, as ``x -> u^-1 x u``;
* a stable letter of a non-tree edge with both endpoints in the conjugated
  component is conjugated too, one with only its initial endpoint inside is
  left-multiplied by ``u^-1``, one with only its terminal endpoint inside is
  right-multiplied by ``u``;
* a non-tree edge twist sends its own stable letter ``t`` to ``u t``.

With these choices the closed-form powers of a standard twist hold verbatim
as free words, which the lift machinery and tests rely on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (BadEdgeIndex, BadSpec, Disconnected, InvalidLabeling,
                     NonTermination, NotAGenerator, NotAPower,
                     OracleBudgetExceeded, RootUnsupported,
                     SharedEndpointMissing)
from .oracle import Answer, WordProblemOracle, oracle_for
from .presentation import Presentation
from .words import Alphabet, FreeWord, GeneratorMap, free_reduce, primitive_root


# ---------------------------------------------------------------------------
# the graph itself
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vertex:
    vid: str
    generators: tuple[str, ...]          # names, disjoint across vertices
    relators: tuple[FreeWord, ...]       # over the global alphabet


@dataclass(frozen=True)
class Edge:
    eid: str
    init: str
    term: str
    u: FreeWord                          # element at init, global letters
    w: FreeWord                          # element at term


class GraphOfGroups:
    """Vertices with presentations, edges with cyclic edge elements."""

    def __init__(self, vertices: Sequence[Vertex], edges: Sequence[Edge],
                 basepoint: str):
        if len({v.vid for v in vertices}) != len(vertices):
            raise ValueError("duplicate vertex ids")
        if len({e.eid for e in edges}) != len(edges):
            raise ValueError("duplicate edge ids")
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.basepoint = basepoint
        self.by_vid = {v.vid: v for v in vertices}
        self.by_eid = {e.eid: e for e in edges}
        if basepoint not in self.by_vid:
            raise ValueError("basepoint %r is not a vertex" % (basepoint,))
        names: list[str] = []
        for v in vertices:
            names.extend(v.generators)
        self.alphabet = Alphabet(names)
        self.vertex_of_letter: dict[int, str] = {}
        for v in vertices:
            for name in v.generators:
                self.vertex_of_letter[self.alphabet.letter(name)] = v.vid
        self._validate()

    @classmethod
    def build(cls, vertices: Sequence[tuple], edges: Sequence[tuple],
              basepoint: str) -> "GraphOfGroups":
        """
        Construct from text: vertices as (vid, "gen names", [relator words]),
        edges as (eid, from, to, u word, w word).
        """
        names: list[str] = []
        for item in vertices:
            names.extend(item[1].split())
        alphabet = Alphabet(names)
        vs = []
        for item in vertices:
            vid, gens = item[0], tuple(item[1].split())
            rels = tuple(alphabet.parse(r) for r in (item[2] if len(item) > 2 else []))
            vs.append(Vertex(vid, gens, rels))
        es = [Edge(eid, a, b, alphabet.parse(u), alphabet.parse(w))
              for (eid, a, b, u, w) in edges]
        return cls(vs, es, basepoint)

    def _validate(self) -> None:
        gen_sets = {v.vid: {self.alphabet.letter(n) for n in v.generators}
                    for v in self.vertices}
        for v in self.vertices:
            for r in v.relators:
                if any(abs(l) not in {abs(x) for x in gen_sets[v.vid]} for l in r):
                    raise ValueError("relator of %s uses foreign generators" % v.vid)
        for e in self.edges:
            for vid in (e.init, e.term):
                if vid not in self.by_vid:
                    raise ValueError("edge %s references missing vertex %r"
                                     % (e.eid, vid))
            for word, vid in ((e.u, e.init), (e.w, e.term)):
                if not word:
                    raise ValueError("edge %s has a trivial edge element" % e.eid)
                allowed = {abs(l) for l in gen_sets[vid]}
                if any(abs(l) not in allowed for l in word):
                    raise ValueError("edge element of %s not in vertex group %s"
                                     % (e.eid, vid))
        if not self.is_connected():
            raise Disconnected("graph of groups is not connected")

    def is_connected(self) -> bool:
        seen = {self.basepoint}
        frontier = [self.basepoint]
        while frontier:
            v = frontier.pop()
            for e in self.edges:
                for a, b in ((e.init, e.term), (e.term, e.init)):
                    if a == v and b not in seen:
                        seen.add(b)
                        frontier.append(b)
        return len(seen) == len(self.vertices)

    def element_at(self, e: Edge, vid: str, end: str | None = None) -> FreeWord:
        """Edge element at one endpoint; ``end`` disambiguates loops."""
        if end == "init" or (end is None and e.init == vid):
            return e.u
        if end == "term" or (end is None and e.term == vid):
            return e.w
        raise ValueError("edge %s has no endpoint %r" % (e.eid, vid))

    def with_replaced_edge(self, new_edge: Edge) -> "GraphOfGroups":
        edges = tuple(new_edge if e.eid == new_edge.eid else e for e in self.edges)
        return GraphOfGroups(self.vertices, edges, self.basepoint)

    def vertex_group_is_free(self, vid: str) -> bool:
        return not self.by_vid[vid].relators

    def __repr__(self) -> str:
        return "GraphOfGroups(%d vertices, %d edges, basepoint %s)" % (
            len(self.vertices), len(self.edges), self.basepoint)


# ---------------------------------------------------------------------------
# ordered labeling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledEdge:
    eid: str
    index: int                  # 1-based; tree edges come first
    is_tree: bool
    flipped: bool               # oriented against the stored direction
    init: str                   # oriented initial vertex (tree: the child)
    term: str
    u: FreeWord                 # element at oriented init
    w: FreeWord                 # element at oriented term
    twist_vertex: str           # where the rooted element lives
    twist_u: FreeWord           # the element used for conjugation/multiplication
    root: FreeWord
    power: int


def _extract_root(g: GraphOfGroups, word: FreeWord, vid: str):
    if not g.vertex_group_is_free(vid):
        return None
    return primitive_root(word)


@dataclass(frozen=True)
class OrderedLabeling:
    vertex_order: tuple[str, ...]
    parent: dict                 # vid -> (parent vid, eid); basepoint absent
    depth: dict                  # vid -> int
    diameter: int
    edges: tuple[LabeledEdge, ...]
    loop_alphabet: Alphabet      # vertex letters + one t per edge (all edges)
    fun_alphabet: Alphabet       # vertex letters + one t per non-tree edge
    stable_name: dict            # eid -> "t{index}" for every edge
    fun_letter: dict             # eid -> signed letter in fun_alphabet (non-tree)
    loop_letter: dict            # eid -> signed letter in loop_alphabet

    def edge(self, key) -> LabeledEdge:
        """Look up by 1-based index or edge id."""
        if isinstance(key, int):
            if not 1 <= key <= len(self.edges):
                raise BadEdgeIndex("edge index %d out of range" % key)
            return self.edges[key - 1]
        for le in self.edges:
            if le.eid == key:
                return le
        raise BadEdgeIndex("no edge %r in labeling" % (key,))

    @property
    def tree_edges(self) -> tuple[LabeledEdge, ...]:
        return tuple(le for le in self.edges if le.is_tree)

    def geodesic(self, vid: str) -> list[LabeledEdge]:
        """Tree edges from the basepoint down to ``vid`` (shallowest first)."""
        path = []
        while vid in self.parent:
            pvid, eid = self.parent[vid]
            path.append(self.edge(eid))
            vid = pvid
        path.reverse()
        return path

    def subtree(self, vid: str) -> frozenset[str]:
        """Vertices whose tree path to the root passes through ``vid``."""
        out = {vid}
        changed = True
        while changed:
            changed = False
            for child, (pvid, _) in self.parent.items():
                if pvid in out and child not in out:
                    out.add(child)
                    changed = True
        return frozenset(out)


def order_and_orient(g: GraphOfGroups) -> OrderedLabeling:
    """
    Breadth-first maximal tree from the basepoint with deterministic
    tie-breaking (edges scanned in ascending edge-id order), edges oriented
    and rooted for the twist machinery.
    """
    order = [g.basepoint]
    parent: dict[str, tuple[str, str]] = {}
    depth = {g.basepoint: 0}
    tree_eids: list[str] = []
    queue = deque([g.basepoint])
    sorted_edges = sorted(g.edges, key=lambda e: e.eid)
    while queue:
        v = queue.popleft()
        for e in sorted_edges:
            for near, far in ((e.init, e.term), (e.term, e.init)):
                if near == v and far not in depth:
                    depth[far] = depth[v] + 1
                    parent[far] = (v, e.eid)
                    order.append(far)
                    tree_eids.append(e.eid)
                    queue.append(far)
    if len(order) != len(g.vertices):
        raise Disconnected("breadth-first search did not reach every vertex")

    labeled: list[LabeledEdge] = []
    for idx, eid in enumerate(tree_eids, start=1):
        e = g.by_eid[eid]
        child = e.init if depth[e.init] > depth[e.term] else e.term
        flipped = (child != e.init)
        init, term = (e.term, e.init) if flipped else (e.init, e.term)
        u, w = (e.w, e.u) if flipped else (e.u, e.w)
        # prefer the parent-side element for the root (deterministic; matches
        # the worked fixtures), fall back to the child side
        cand = [(term, w), (init, u)]
        choice = None
        for vid, word in cand:
            rooted = _extract_root(g, word, vid)
            if rooted is not None:
                choice = (vid, word, rooted)
                break
        if choice is None:
            raise RootUnsupported("no adjacent free vertex group roots edge %s" % eid)
        tvid, tword, (root, power) = choice
        labeled.append(LabeledEdge(eid, idx, True, flipped, init, term, u, w,
                                   tvid, tword, root, power))

    non_tree = [e for e in sorted_edges if e.eid not in set(tree_eids)]
    for off, e in enumerate(non_tree, start=len(tree_eids) + 1):
        rooted_init = _extract_root(g, e.u, e.init)
        rooted_term = _extract_root(g, e.w, e.term)
        if rooted_init is not None:
            flipped = False
            init, term, u, w = e.init, e.term, e.u, e.w
            root, power = rooted_init
        elif rooted_term is not None:
            flipped = True
            init, term, u, w = e.term, e.init, e.w, e.u
            root, power = rooted_term
        else:
            raise RootUnsupported("no adjacent free vertex group roots edge %s" % e.eid)
        labeled.append(LabeledEdge(e.eid, off, False, flipped, init, term, u, w,
                                   init, u, root, power))

    stable_name = {le.eid: "t%d" % le.index for le in labeled}
    for name in stable_name.values():
        if name in g.alphabet:
            raise InvalidLabeling("stable letter %r collides with a generator" % name)
    fun_names = [stable_name[le.eid] for le in labeled if not le.is_tree]
    loop_names = [stable_name[le.eid] for le in labeled]
    fun_alphabet = g.alphabet.extended(fun_names)
    loop_alphabet = g.alphabet.extended(loop_names)
    fun_letter = {le.eid: fun_alphabet.letter(stable_name[le.eid])
                  for le in labeled if not le.is_tree}
    loop_letter = {le.eid: loop_alphabet.letter(stable_name[le.eid])
                   for le in labeled}

    dist = dict(depth)
    diameter = 0
    for start in g.by_vid:
        d = {start: 0}
        q = deque([start])
        while q:
            v = q.popleft()
            for child, (pvid, _) in parent.items():
                for a, b in ((child, pvid), (pvid, child)):
                    if a == v and b not in d:
                        d[b] = d[v] + 1
                        q.append(b)
        diameter = max(diameter, max(d.values(), default=0))

    return OrderedLabeling(tuple(order), parent, dist, diameter, tuple(labeled),
                           loop_alphabet, fun_alphabet, stable_name,
                           fun_letter, loop_letter)


# ---------------------------------------------------------------------------
# fundamental presentation
# ---------------------------------------------------------------------------

def fundamental_presentation(g: GraphOfGroups, lab: OrderedLabeling) -> Presentation:
    """
    Presentation of the fundamental group relative to the labeling's tree:
    vertex relators, one relator ``u w^-1`` per tree edge (stable letter
    killed), and ``t^-1 u t w^-1`` per non-tree edge.
    """
    if {le.eid for le in lab.edges} != set(g.by_eid):
        raise InvalidLabeling("labeling does not match the graph's edges")
    relators: list[FreeWord] = []
    for v in g.vertices:
        relators.extend(v.relators)
    for le in lab.edges:
        if le.is_tree:
            stored = g.by_eid[le.eid]
            relators.append(stored.u * ~stored.w)
        else:
            t = FreeWord((lab.fun_letter[le.eid],))
            relators.append(~t * le.u * t * ~le.w)
    return Presentation(lab.fun_alphabet, tuple(relators))


def fundamental_oracle(g: GraphOfGroups, lab: OrderedLabeling,
                       budget: int = 20000) -> WordProblemOracle:
    return oracle_for(fundamental_presentation(g, lab), budget)


# ---------------------------------------------------------------------------
# twists
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistSpec:
    """One exponent per edge, in labeling index order."""

    exponents: tuple[int, ...]

    @classmethod
    def from_dict(cls, lab: OrderedLabeling, d: dict) -> "TwistSpec":
        exps = [0] * len(lab.edges)
        for eid, r in d.items():
            le = lab.edge(eid)
            exps[le.index - 1] = int(r)
        return cls(tuple(exps))

    def check(self, lab: OrderedLabeling) -> None:
        if len(self.exponents) != len(lab.edges):
            raise BadSpec("expected %d exponents, got %d"
                          % (len(lab.edges), len(self.exponents)))

    def exponent(self, lab: OrderedLabeling, key) -> int:
        return self.exponents[lab.edge(key).index - 1]

    def is_zero(self) -> bool:
        return not any(self.exponents)


def _twist_images(g: GraphOfGroups, lab: OrderedLabeling, le: LabeledEdge,
                  r: int) -> GeneratorMap:
    """The basic twist of ``le`` raised to the ``r``-th power, on the
    fundamental alphabet (the closed form of the power, exact as free words)."""
    alphabet = lab.fun_alphabet
    images = {l: FreeWord((l,)) for l in range(1, len(alphabet) + 1)}
    if r != 0:
        u = le.twist_u ** r
        if le.is_tree:
            inside = lab.subtree(le.init)
            for letter, vid in g.vertex_of_letter.items():
                if vid in inside:
                    images[letter] = ~u * images[letter] * u
            for other in lab.edges:
                if other.is_tree:
                    continue
                t = images[lab.fun_letter[other.eid]]
                i_in = other.init in inside
                t_in = other.term in inside
                if i_in and t_in:
                    images[lab.fun_letter[other.eid]] = ~u * t * u
                elif i_in:
                    images[lab.fun_letter[other.eid]] = ~u * t
                elif t_in:
                    images[lab.fun_letter[other.eid]] = t * u
        else:
            letter = lab.fun_letter[le.eid]
            images[letter] = u * images[letter]
    return GeneratorMap(alphabet, [images[l] for l in range(1, len(alphabet) + 1)])


def basic_dehn_twist(g: GraphOfGroups, lab: OrderedLabeling, k) -> GeneratorMap:
    """The basic Dehn twist of edge ``k`` (index or id) on the fundamental
    presentation's generators."""
    return _twist_images(g, lab, lab.edge(k), 1)


def reverse_twist(g: GraphOfGroups, lab: OrderedLabeling, k) -> GeneratorMap:
    """
    The basic twist of the reversed edge: for a tree edge, conjugation of the
    *terminal* component by the inverse of the other-side edge element; for a
    non-tree edge, ``t -> t w``.  Differs from the forward twist by an inner
    automorphism (trivial for non-tree edges).
    """
    le = lab.edge(k)
    alphabet = lab.fun_alphabet
    images = {l: FreeWord((l,)) for l in range(1, len(alphabet) + 1)}
    if le.is_tree:
        other = le.w if le.twist_vertex == le.init else le.u
        ubar = ~other
        inside = frozenset(v.vid for v in g.vertices) - lab.subtree(le.init)
        for letter, vid in g.vertex_of_letter.items():
            if vid in inside:
                images[letter] = ~ubar * images[letter] * ubar
        for oth in lab.edges:
            if oth.is_tree:
                continue
            letter = lab.fun_letter[oth.eid]
            t = images[letter]
            i_in, t_in = oth.init in inside, oth.term in inside
            if i_in and t_in:
                images[letter] = ~ubar * t * ubar
            elif i_in:
                images[letter] = ~ubar * t
            elif t_in:
                images[letter] = t * ubar
    else:
        letter = lab.fun_letter[le.eid]
        images[letter] = images[letter] * le.w
    return GeneratorMap(alphabet, [images[l] for l in range(1, len(alphabet) + 1)])


def standard_twist(g: GraphOfGroups, lab: OrderedLabeling,
                   spec: TwistSpec) -> GeneratorMap:
    """
    The standard-form composite: edge-1 twist applied first, edge-n last,
    each raised to its exponent.
    """
    spec.check(lab)
    total = GeneratorMap.identity(lab.fun_alphabet)
    for le, r in zip(lab.edges, spec.exponents):
        if r:
            total = _twist_images(g, lab, le, r).after(total)
    return total


def standard_twist_inverse(g: GraphOfGroups, lab: OrderedLabeling,
                           spec: TwistSpec) -> GeneratorMap:
    """Exact inverse: exponents negated, composition order reversed."""
    spec.check(lab)
    total = GeneratorMap.identity(lab.fun_alphabet)
    for le, r in reversed(list(zip(lab.edges, spec.exponents))):
        if r:
            total = _twist_images(g, lab, le, -r).after(total)
    return total


def twist_iterate(g: GraphOfGroups, lab: OrderedLabeling, spec: TwistSpec,
                  l: int, w: FreeWord) -> FreeWord:
    """``l``-fold application of the standard twist (negative ``l`` uses the
    inverse)."""
    phi = standard_twist(g, lab, spec) if l >= 0 else standard_twist_inverse(g, lab, spec)
    for _ in range(abs(l)):
        w = phi.apply(w)
    return w


def twists_commute_up_to_conjugation(g: GraphOfGroups, lab: OrderedLabeling,
                                     j, k, oracle: WordProblemOracle | None = None
                                     ) -> FreeWord | None:
    """
    Search a witness ``c`` with (phi_j phi_k)(x) = c^-1 (phi_k phi_j)(x) c for
    every generator, checked through the group oracle.  Returns the witness,
    None if every candidate is refuted, and raises OracleBudgetExceeded if
    unknowns block the decision.
    """
    lj, lk = lab.edge(j), lab.edge(k)
    if lj.eid == lk.eid:
        raise BadEdgeIndex("need two distinct edges")
    if oracle is None:
        oracle = fundamental_oracle(g, lab)
    pj, pk = basic_dehn_twist(g, lab, j), basic_dehn_twist(g, lab, k)
    jk = pj.after(pk)   # phi_j ∘ phi_k
    kj = pk.after(pj)
    basis = [FreeWord(), lj.twist_u, ~lj.twist_u, lk.twist_u, ~lk.twist_u]
    candidates: list[FreeWord] = []
    seen = set()
    for c in basis + [x * y for x in basis[1:] for y in basis[1:]]:
        if tuple(c) not in seen:
            seen.add(tuple(c))
            candidates.append(c)
    saw_unknown = False
    for c in candidates:
        ok = True
        for gen in lab.fun_alphabet.generators():
            ans = oracle.equal(jk.apply(gen), ~c * kj.apply(gen) * c)
            if ans is Answer.UNKNOWN:
                saw_unknown = True
                ok = False
                break
            if ans is Answer.NOT_EQUAL:
                ok = False
                break
        if ok:
            return c
    if saw_unknown:
        raise OracleBudgetExceeded("oracle could not decide any witness")
    return None


# ---------------------------------------------------------------------------
# sliding
# ---------------------------------------------------------------------------

SLIDE_POWER_BOUND = 64


@dataclass(frozen=True)
class SlideRecord:
    slid: str                    # edge that moved
    along: str
    vertex: str                  # the shared endpoint it was detached from
    power: int
    slid_end: str                # 'init' or 'term' of the slid edge
    target: str                  # vertex it re-attached to
    before: GraphOfGroups
    after: GraphOfGroups

    def replay(self) -> bool:
        """Re-run the slide on the before-graph and compare."""
        redone, rec = slide(self.before, self.slid, self.along, at=self.vertex)
        return ([ (e.eid, e.init, e.term, tuple(e.u), tuple(e.w)) for e in redone.edges]
                == [(e.eid, e.init, e.term, tuple(e.u), tuple(e.w)) for e in self.after.edges]
                and rec.power == self.power)


def _power_of(x: FreeWord, y: FreeWord) -> int | None:
    """p >= 1 with x == y**p exactly, via primitive roots."""
    if not x or not y:
        return None
    rx, mx = primitive_root(x)
    ry, my = primitive_root(y)
    if rx != ry or mx % my:
        return None
    p = mx // my
    return p if 1 <= p <= SLIDE_POWER_BOUND else None


def slide(g: GraphOfGroups, e1_id: str, e2_id: str, at: str | None = None
          ) -> tuple[GraphOfGroups, SlideRecord]:
    """
    Slide ``e1`` along ``e2``: both must meet a vertex ``v0`` where e1's
    element is a power of e2's (u1 = u2^p).  e1 is detached from v0 and
    re-attached at e2's far endpoint with element ``w2^p``; the presentation
    changes relator u1 = w1 into w1 = w2^p, defining the same group.
    """
    if e1_id == e2_id:
        raise SharedEndpointMissing("cannot slide an edge along itself")
    e1, e2 = g.by_eid[e1_id], g.by_eid[e2_id]
    shared = [v for v in (e1.init, e1.term) if v in (e2.init, e2.term)]
    if at is not None:
        shared = [v for v in shared if v == at]
    if not shared:
        raise SharedEndpointMissing("edges %s, %s share no usable endpoint"
                                    % (e1_id, e2_id))
    tried = False
    for v0 in dict.fromkeys(shared):
        if not g.vertex_group_is_free(v0):
            raise RootUnsupported("vertex group %s is not free" % v0)
        for end1 in ("init", "term"):
            if (e1.init if end1 == "init" else e1.term) != v0:
                continue
            x1 = g.element_at(e1, v0, end1)
            for end2 in ("init", "term"):
                if (e2.init if end2 == "init" else e2.term) != v0:
                    continue
                tried = True
                x2 = g.element_at(e2, v0, end2)
                p = _power_of(x1, x2)
                if p is None:
                    continue
                far_end = "term" if end2 == "init" else "init"
                far_vid = e2.term if far_end == "term" else e2.init
                far_el = g.element_at(e2, far_vid, far_end)
                new_el = far_el ** p
                if end1 == "init":
                    new_e1 = Edge(e1.eid, far_vid, e1.term, new_el, e1.w)
                else:
                    new_e1 = Edge(e1.eid, e1.init, far_vid, e1.u, new_el)
                new_g = g.with_replaced_edge(new_e1)
                rec = SlideRecord(e1_id, e2_id, v0, p, end1, far_vid, g, new_g)
                return new_g, rec
    if tried:
        raise NotAPower("no exponent p <= %d with u1 = u2^p" % SLIDE_POWER_BOUND)
    raise SharedEndpointMissing("edges %s, %s share no usable endpoint"
                                % (e1_id, e2_id))


def _slide_trigger(g: GraphOfGroups) -> tuple[str, str, str] | None:
    """The Remark's configuration: edge e at v is a power of edge e' at v
    and e' 's far element is a proper power; sliding e along e' roots it."""
    for e in sorted(g.edges, key=lambda e: e.eid):
        for end1 in ("init", "term"):
            v = e.init if end1 == "init" else e.term
            x = g.element_at(e, v, end1)
            for other in sorted(g.edges, key=lambda e: e.eid):
                if other.eid == e.eid:
                    continue
                for end2 in ("init", "term"):
                    if (other.init if end2 == "init" else other.term) != v:
                        continue
                    y = g.element_at(other, v, end2)
                    if not g.vertex_group_is_free(v):
                        raise RootUnsupported("vertex group %s is not free" % v)
                    if _power_of(x, y) is None:
                        continue
                    far_end = "term" if end2 == "init" else "init"
                    far_vid = other.term if far_end == "term" else other.init
                    far_el = g.element_at(other, far_vid, far_end)
                    if not g.vertex_group_is_free(far_vid):
                        raise RootUnsupported("vertex group %s is not free" % far_vid)
                    if primitive_root(far_el)[1] >= 2:
                        return e.eid, other.eid, v
    return None


def is_full_rooted(g: GraphOfGroups) -> bool:
    """Checkable full-rootedness: no improving slide configuration remains."""
    return _slide_trigger(g) is None


def make_full_rooted(g: GraphOfGroups, max_slides: int | None = None
                     ) -> tuple[GraphOfGroups, list[SlideRecord]]:
    """
    Greedy realization of the sliding remark: repeatedly slide an edge whose
    element is a power of a neighboring edge element whose far element is a
    proper power.  The output admits no further improving slide.
    """
    for v in g.vertices:
        if v.relators:
            raise RootUnsupported("vertex group %s is not free" % v.vid)
    bound = max_slides if max_slides is not None else 10 * max(1, len(g.edges))
    records: list[SlideRecord] = []
    current = g
    for _ in range(bound + 1):
        trig = _slide_trigger(current)
        if trig is None:
            return current, records
        if len(records) >= bound:
            raise NonTermination("exceeded %d slides" % bound)
        e1, e2, v = trig
        current, rec = slide(current, e1, e2, at=v)
        records.append(rec)
    raise NonTermination("exceeded %d slides" % bound)


def transfer_twist(rec: SlideRecord, lab_before: OrderedLabeling,
                   spec: TwistSpec, oracle: WordProblemOracle | None = None
                   ) -> tuple[TwistSpec, int]:
    """
    Push a standard twist through a slide: returns (spec', k) with
    standard_twist(after, spec') equal to the k-th power of
    standard_twist(before, spec) on every generator, oracle-verified.

    Basic twists of untouched edges carry over unchanged; for the along-edge
    exponent r the transferred spec gets k*r on the along edge and -r on the
    slid edge (with the child-side conjugation convention the slide identity
    reads phi_along^p = phi'_slid^-1 (phi'_along)^p; see the decisions
    ledger for the sign discussion).
    """
    g_after = rec.after
    lab_after = order_and_orient(g_after)
    r_along = spec.exponent(lab_before, rec.along)
    k = rec.power if r_along else 1
    exps = {le.eid: k * spec.exponent(lab_before, le.eid) for le in lab_before.edges}
    if r_along:
        exps[rec.slid] = exps.get(rec.slid, 0) - r_along
    new_spec = TwistSpec.from_dict(lab_after, exps)

    if oracle is None:
        oracle = fundamental_oracle(rec.before, lab_before)
    phi = standard_twist(rec.before, lab_before, spec)
    phi_k = GeneratorMap.identity(lab_before.fun_alphabet)
    for _ in range(k):
        phi_k = phi.after(phi_k)
    phi_new = standard_twist(g_after, lab_after, new_spec)
    if lab_after.fun_alphabet != lab_before.fun_alphabet:
        raise InvalidLabeling("slide changed the fundamental alphabet")
    for gen in lab_before.fun_alphabet.generators():
        ans = oracle.equal(phi_k.apply(gen), phi_new.apply(gen))
        if ans is Answer.UNKNOWN:
            raise OracleBudgetExceeded("could not verify the transferred twist")
        if ans is Answer.NOT_EQUAL:
            raise BadSpec("transferred twist disagrees on %r"
                          % (lab_before.fun_alphabet.spell(gen),))
    return new_spec, k


# ---------------------------------------------------------------------------
# basic loops and lifts
# ---------------------------------------------------------------------------

def _letter_vertex(g: GraphOfGroups, lab: OrderedLabeling, letter: int) -> str | None:
    if abs(letter) <= len(g.alphabet):
        return g.vertex_of_letter[abs(letter)]
    return None


def basic_loop(g: GraphOfGroups, lab: OrderedLabeling, x: FreeWord) -> FreeWord:
    """
    Lift a vertex element or a stable letter to the loop group: the word is
    conjugated along the tree geodesic to the basepoint; a stable letter is
    framed by the geodesics to both endpoints of its edge.  The result is a
    word over the labeling's loop alphabet (which has a letter for every
    edge's stable letter, tree edges included).
    """
    x = FreeWord(x)
    if not x:
        return FreeWord()
    vertices = {(_letter_vertex(g, lab, l)) for l in x}
    if None not in vertices and len(vertices) == 1:
        vid = vertices.pop()
        down = [lab.loop_letter[le.eid] for le in lab.geodesic(vid)]
        prefix = FreeWord([-t for t in down])
        return prefix * FreeWord(x) * ~prefix
    if len(x) == 1 and None in vertices:
        # a stable letter of a non-tree edge (possibly inverted)
        fun_letter = x[0]
        le = next((l for l in lab.edges
                   if not l.is_tree and lab.fun_letter[l.eid] == abs(fun_letter)), None)
        if le is None:
            raise NotAGenerator("letter %d is not a stable letter" % fun_letter)
        down_i = [lab.loop_letter[t.eid] for t in lab.geodesic(le.init)]
        down_t = [lab.loop_letter[t.eid] for t in lab.geodesic(le.term)]
        core = FreeWord((lab.loop_letter[le.eid],))
        loop = (FreeWord([-t for t in down_i]) * core
                * FreeWord(list(reversed(down_t))))
        return loop if fun_letter > 0 else ~loop
    raise NotAGenerator("not a single vertex-group word or stable letter: %r" % (x,))


def lift_word(g: GraphOfGroups, lab: OrderedLabeling, w: FreeWord) -> FreeWord:
    """Concatenation of basic loops, letter by letter, freely reduced."""
    out = FreeWord()
    for l in w:
        out = out * basic_loop(g, lab, FreeWord((l,)))
    return out


def lifted_twist_power(g: GraphOfGroups, lab: OrderedLabeling, spec: TwistSpec,
                       l: int, loop: FreeWord) -> FreeWord:
    """
    The lift of the l-th twist power on the loop group: every stable letter
    t_e becomes u_e^{l r_e} t_e (inverses handled by the sign), vertex
    letters are fixed; the result is freely reduced.
    """
    spec.check(lab)
    alphabet = lab.loop_alphabet
    images = {i + 1: FreeWord((i + 1,)) for i in range(len(alphabet))}
    for le in lab.edges:
        r = spec.exponents[le.index - 1]
        letter = lab.loop_letter[le.eid]
        images[letter] = (le.twist_u ** (l * r)) * FreeWord((letter,))
    m = GeneratorMap(alphabet, [images[i + 1] for i in range(len(alphabet))])
    return m.apply(loop)


def project_loop(g: GraphOfGroups, lab: OrderedLabeling, loop: FreeWord) -> FreeWord:
    """Canonical projection to the fundamental presentation: delete tree
    stable letters, keep everything else."""
    tree_letters = {abs(lab.loop_letter[le.eid]) for le in lab.edges if le.is_tree}
    out: list[int] = []
    n_vertex = len(g.alphabet)
    for letter in loop:
        if abs(letter) in tree_letters:
            continue
        if abs(letter) <= n_vertex:
            out.append(letter)
        else:
            # non-tree stable letter: translate loop-alphabet index to the
            # fundamental alphabet's
            name = lab.loop_alphabet.name(abs(letter))
            fun = lab.fun_alphabet.letter(name)
            out.append(fun if letter > 0 else -fun)
    return free_reduce(out)


def twist_power_closed_form(g: GraphOfGroups, lab: OrderedLabeling,
                            spec: TwistSpec, l: int, x: FreeWord) -> FreeWord:
    """
    The closed form of the l-th power of the standard twist on a vertex
    generator or stable letter, as a word in the fundamental presentation.
    """
    spec.check(lab)
    x = FreeWord(x)
    if not x:
        return FreeWord()

    def power(le: LabeledEdge) -> FreeWord:
        return le.twist_u ** (l * spec.exponents[le.index - 1])

    vertices = {_letter_vertex(g, lab, c) for c in x}
    if None not in vertices and len(vertices) == 1:
        vid = vertices.pop()
        left = FreeWord()
        for le in lab.geodesic(vid):
            left = left * ~power(le)
        return left * x * ~left
    if len(x) == 1:
        fun_letter = x[0]
        le = next((t for t in lab.edges
                   if not t.is_tree and lab.fun_letter[t.eid] == abs(fun_letter)), None)
        if le is None:
            raise NotAGenerator("letter %d is not a stable letter" % fun_letter)
        left = FreeWord()
        for ge in lab.geodesic(le.init):
            left = left * ~power(ge)
        right = FreeWord()
        for ge in reversed(lab.geodesic(le.term)):
            right = right * power(ge)
        word = left * power(le) * FreeWord((lab.fun_letter[le.eid],)) * right
        return word if fun_letter > 0 else ~word
    raise NotAGenerator("not a vertex word or stable letter: %r" % (x,))


def loop_length(loop: FreeWord) -> int:
    return len(loop)
