r"""
Van Kampen diagrams as combinatorial planar maps.

A diagram is a set of darts (half-edges).  Each dart has a twin (the other
half of its edge), a rotation successor ``sigma`` (the next dart
counterclockwise around its origin vertex), a signed generator label
(``label(twin) = -label``), and an origin vertex.  Faces are the orbits of
``d -> sigma(twin(d))``; the face of a dart lies to its left.  Every dart
carries the tag of its left face: a relator index for a 2-cell, None for the
outer face (and, transiently during surgery, for a hole being refilled).

Planarity is certified by the Euler formula V - E + F = 2 on a connected
map, which :meth:`VanKampenDiagram.validate` checks together with the face
labels, so every surgery can be followed by a full structural audit.

The surgeries implemented here are the diagram moves the corridor machinery
needs: direct and rotated folding of unreduced segments, path reduction,
t-corridor and t-ring detection, ring removal, induced images of diagrams
under a free map (edge subdivision + folding + refilling from a cell table),
and moving a room across a corridor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (BadFaceLabel, BoundaryMismatch, CrossingPresent,
                     DiagramError, DisconnectedIntersection, MalformedTCell,
                     MissingTableEntry, NonPlanar, NotARing, NotBounding,
                     SideOccupied)
from .presentation import Presentation
from .words import FreeWord, GeneratorMap, free_reduce


class VanKampenDiagram:
    """Mutable rotation-system diagram over a fixed presentation."""

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self._twin: dict[int, int] = {}
        self._next: dict[int, int] = {}   # sigma
        self._prev: dict[int, int] = {}   # sigma^-1
        self._label: dict[int, int] = {}
        self._origin: dict[int, int] = {}
        self.tag: dict[int, int | None] = {}
        self._dart_ctr = itertools.count(1)
        self._vertex_ctr = itertools.count(1)
        self.base_vertex = next(self._vertex_ctr)
        self.basepoint: int | None = None   # an outer dart; None when dartless

    # -- basic accessors ----------------------------------------------------

    def darts(self) -> list[int]:
        return sorted(self._twin)

    def twin(self, d: int) -> int:
        return self._twin[d]

    def sigma(self, d: int) -> int:
        return self._next[d]

    def sigma_inv(self, d: int) -> int:
        return self._prev[d]

    def label(self, d: int) -> int:
        return self._label[d]

    def origin(self, d: int) -> int:
        return self._origin[d]

    def end(self, d: int) -> int:
        return self._origin[self._twin[d]]

    def face_next(self, d: int) -> int:
        return self._next[self._twin[d]]

    def face_walk(self, d: int) -> list[int]:
        walk = [d]
        cur = self.face_next(d)
        while cur != d:
            walk.append(cur)
            cur = self.face_next(cur)
            if len(walk) > len(self._twin) + 1:
                raise DiagramError("face walk does not close")
        return walk

    def walk_word(self, walk: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._label[d] for d in walk)

    def faces(self) -> list[tuple[tuple[int, ...], int | None]]:
        seen: set[int] = set()
        out = []
        for d in self.darts():
            if d in seen:
                continue
            walk = self.face_walk(d)
            seen.update(walk)
            out.append((tuple(walk), self.tag[d]))
        return out

    def outer_walk(self) -> list[int]:
        if self.basepoint is None:
            return []
        return self.face_walk(self.basepoint)

    def boundary_word(self) -> FreeWord:
        """The word read along the outer face from the basepoint, freely
        reduced (surgery keeps it stable up to free reduction)."""
        return free_reduce(self.walk_word(self.outer_walk()))

    def boundary_raw(self) -> tuple[int, ...]:
        """The unreduced boundary word, exactly as the walk reads it."""
        return self.walk_word(self.outer_walk())

    def area(self) -> int:
        return sum(1 for _, t in self.faces() if t is not None)

    def cell_census(self, t_relators: Iterable[int] = ()) -> tuple[int, int]:
        """(primitive cells, t-cells); tags in ``t_relators`` count as t."""
        t_set = set(t_relators)
        prim = tc = 0
        for _, t in self.faces():
            if t is None:
                continue
            if t in t_set:
                tc += 1
            else:
                prim += 1
        return prim, tc

    def vertices(self) -> set[int]:
        verts = {self._origin[d] for d in self._twin}
        return verts or {self.base_vertex}

    def clone(self) -> "VanKampenDiagram":
        other = VanKampenDiagram(self.presentation)
        other._twin = dict(self._twin)
        other._next = dict(self._next)
        other._prev = dict(self._prev)
        other._label = dict(self._label)
        other._origin = dict(self._origin)
        other.tag = dict(self.tag)
        other._dart_ctr = itertools.count(max(self._twin, default=0) + 1)
        other._vertex_ctr = itertools.count(max(self.vertices()) + 1)
        other.base_vertex = self.base_vertex
        other.basepoint = self.basepoint
        return other

    def mirrored(self) -> "VanKampenDiagram":
        """The reflected diagram: rotations reversed, boundary word inverted."""
        other = self.clone()
        other._next = dict(self._prev)
        other._prev = dict(self._next)
        if other.basepoint is not None:
            # keep the basepoint on the outer face, starting the inverse word
            other.basepoint = self._twin[self.basepoint]
        return other

    # -- structural editing primitives ---------------------------------------

    def _new_vertex(self) -> int:
        return next(self._vertex_ctr)

    def _new_edge(self, a: int, b: int, label: int) -> tuple[int, int]:
        d = next(self._dart_ctr)
        e = next(self._dart_ctr)
        self._twin[d], self._twin[e] = e, d
        self._label[d], self._label[e] = label, -label
        self._origin[d], self._origin[e] = a, b
        for x in (d, e):
            self._next[x] = x
            self._prev[x] = x
        return d, e

    def _insert_after(self, at: int, new: int) -> None:
        """Insert ``new`` into the rotation right after ``at``."""
        nxt = self._next[at]
        self._next[at] = new
        self._prev[new] = at
        self._next[new] = nxt
        self._prev[nxt] = new
        self._origin[new] = self._origin[at]

    def _insert_before(self, at: int, new: int) -> None:
        self._insert_after(self._prev[at], new)

    def _cycle_remove(self, d: int) -> None:
        p, n = self._prev[d], self._next[d]
        if p == d:
            return
        self._next[p] = n
        self._prev[n] = p
        self._next[d] = d
        self._prev[d] = d

    def _delete_dart(self, d: int) -> None:
        self._cycle_remove(d)
        for table in (self._twin, self._next, self._prev, self._label,
                      self._origin, self.tag):
            table.pop(d, None)

    # -- validation -----------------------------------------------------------

    def validate(self, check_labels: bool = True) -> None:
        """Raise DiagramError unless this is a connected disk diagram."""
        darts = set(self._twin)
        if not darts:
            return
        for d in darts:
            if self._twin[self._twin[d]] != d or self._twin[d] == d:
                raise DiagramError("twin structure broken at %d" % d)
            if self._label[self._twin[d]] != -self._label[d]:
                raise DiagramError("label mismatch on edge of %d" % d)
            if self._next[self._prev[d]] != d or self._prev[self._next[d]] != d:
                raise DiagramError("rotation links broken at %d" % d)
            if self._origin[self._next[d]] != self._origin[d]:
                raise DiagramError("rotation leaves vertex at %d" % d)
        # sigma cycles partition the darts by origin, one cycle per vertex
        by_vertex: dict[int, set[int]] = {}
        for d in darts:
            by_vertex.setdefault(self._origin[d], set()).add(d)
        for v, group in by_vertex.items():
            d0 = next(iter(group))
            cyc = {d0}
            cur = self._next[d0]
            while cur != d0:
                cyc.add(cur)
                cur = self._next[cur]
            if cyc != group:
                raise DiagramError("vertex %d has a split rotation cycle" % v)
        # connectivity over edges
        start = next(iter(darts))
        seen_v = {self._origin[start]}
        stack = [self._origin[start]]
        adj: dict[int, list[int]] = {}
        for d in darts:
            adj.setdefault(self._origin[d], []).append(self.end(d))
        while stack:
            v = stack.pop()
            for w in adj.get(v, ()):
                if w not in seen_v:
                    seen_v.add(w)
                    stack.append(w)
        if seen_v != set(by_vertex):
            raise DiagramError("diagram is not connected")
        # Euler characteristic (V - E + F = 2 certifies a sphere map, i.e. a
        # planar embedding with the outer face among the faces)
        faces = self.faces()
        V = len(by_vertex)
        E = len(darts) // 2
        F = len(faces)
        if V - E + F != 2:
            raise NonPlanar("Euler check failed: V=%d E=%d F=%d" % (V, E, F))
        untagged = [walk for walk, t in faces if t is None]
        if len(untagged) != 1:
            raise DiagramError("expected exactly one untagged face, found %d"
                               % len(untagged))
        for walk, t in faces:
            first = walk[0]
            if any(self.tag[d] != t for d in walk):
                raise DiagramError("face of dart %d has mixed tags" % first)
        if self.basepoint is not None and self.tag[self.basepoint] is not None:
            raise DiagramError("basepoint dart is not on the outer face")
        if check_labels:
            for walk, t in faces:
                if t is None:
                    continue
                word = self.walk_word(walk)
                if word not in self.presentation.face_words(t):
                    raise BadFaceLabel(
                        "face %r does not read relator %d"
                        % (self.presentation.alphabet.spell(word), t))

    # -- construction ----------------------------------------------------------

    @classmethod
    def empty(cls, presentation: Presentation) -> "VanKampenDiagram":
        return cls(presentation)

    def attach_cell(self, face_dart: int | None, start: int, arc_len: int,
                    word: Sequence[int], tag: int | None) -> list[int]:
        """
        Glue a new face into the face of ``face_dart`` (the outer face when
        the diagram is empty) along ``arc_len`` consecutive darts of its walk
        beginning at position ``start``.  ``word`` is the word the new face
        reads; it must begin with the labels of the covered arc.  Returns the
        new darts that took the arc's place on the host face, in walk order.
        """
        word = tuple(word)
        if tag is not None and word not in self.presentation.face_words(tag):
            raise BadFaceLabel("cell word %s is not a form of relator %r"
                               % (self.presentation.alphabet.spell(word), tag))
        if face_dart is None:
            if self._twin:
                raise NonPlanar("face dart required on a nonempty diagram")
            walk: list[int] = []
            host_tag: int | None = None
        else:
            walk = self.face_walk(face_dart)
            host_tag = self.tag[face_dart]
        m = len(walk)
        if arc_len < 0 or (m == 0 and arc_len > 0) or (m and arc_len > m):
            raise NonPlanar("arc length %d out of range" % arc_len)
        arc = [walk[(start + i) % m] for i in range(arc_len)] if m else []
        if tuple(self._label[d] for d in arc) != word[:arc_len]:
            raise BoundaryMismatch("cell word does not extend the arc labels")
        rest = word[arc_len:]
        if not rest:
            raise NonPlanar("a cell covering a whole face must use close_face")

        if arc:
            v_from = self.end(arc[-1])
            v_to = self._origin[arc[0]]
        elif m:
            anchor = walk[start % m]
            v_from = v_to = self._origin[anchor]
        else:
            anchor = None
            v_from = v_to = self.base_vertex

        chain: list[int] = []     # forward darts e_1 .. e_p
        prev_vertex = v_from
        for i, letter in enumerate(rest):
            nxt_vertex = v_to if i == len(rest) - 1 else self._new_vertex()
            d, e = self._new_edge(prev_vertex, nxt_vertex, letter)
            chain.append(d)
            prev_vertex = nxt_vertex
        # rotation splices: interior chain vertices first
        for i in range(len(chain) - 1):
            a, b = chain[i], chain[i + 1]
            # at the shared vertex: cycle (twin(a), b)
            ta = self._twin[a]
            self._next[ta] = b
            self._prev[b] = ta
            self._next[b] = ta
            self._prev[ta] = b
            self._origin[b] = self._origin[ta]
        first, last = chain[0], chain[-1]
        if arc:
            self._insert_after(self._twin[arc[-1]], first)
            self._insert_before(arc[0], self._twin[last])
        elif m:
            # a lobe hanging at one vertex: insert [twin(last), first] before
            # the anchor dart
            self._insert_before(anchor, self._twin[last])
            self._insert_after(self._twin[last], first)
        else:
            # bootstrap on the empty diagram: cycle (twin(last), first)
            tl = self._twin[last]
            self._next[tl] = first
            self._prev[first] = tl
            self._next[first] = tl
            self._prev[tl] = first
            self._origin[first] = v_from
            self._origin[tl] = v_from
        for d in arc + chain:
            self.tag[d] = tag
        new_outer = [self._twin[c] for c in reversed(chain)]
        for d in new_outer:
            self.tag[d] = host_tag
        if self.basepoint is None:
            self.basepoint = new_outer[0]
        elif self.tag.get(self.basepoint) is not None and host_tag is None:
            self.basepoint = new_outer[0]
        return new_outer

    def close_face(self, face_dart: int, tag: int) -> None:
        """Tag an untagged face whose walk reads a relator form."""
        walk = self.face_walk(face_dart)
        if self.tag[face_dart] is not None:
            raise BadFaceLabel("face already tagged")
        word = self.walk_word(walk)
        if word not in self.presentation.face_words(tag):
            raise BadFaceLabel("face %r does not read relator %r"
                               % (self.presentation.alphabet.spell(word), tag))
        for d in walk:
            self.tag[d] = tag

    # -- folding ----------------------------------------------------------------

    def _fold_core(self, d1: int, q: int) -> dict[int, int]:
        """
        Identify the edge of ``q`` with the edge of ``d1``, where
        ``sigma(twin(d1)) == q`` and the labels cancel; the corner between
        them (in the face left of ``d1``) must be empty, which face-walk
        adjacency guarantees.  Returns the dart remapping.
        """
        p = self._twin[d1]
        if self._next[p] != q:
            raise SideOccupied("fold side is not free")
        if q == p or q == d1:
            raise DiagramError("cannot fold an edge with itself")
        if self._label[q] != -self._label[d1]:
            raise DiagramError("fold labels do not cancel")
        tq = self._twin[q]
        A, C = self._origin[d1], self._origin[tq]
        succ = self.face_next(q)    # survives; used to rehome the basepoint
        if C == A:
            if self._next[tq] != d1:
                raise SideOccupied("bigon fold would pinch off a sphere")
            self._cycle_remove(q)
            self._cycle_remove(tq)
            self.tag[d1] = self.tag[tq]
            mapping = {q: p, tq: d1}
            self._delete_dart(q)
            self._delete_dart(tq)
            self._rehome_basepoint(mapping, d1)
            return mapping
        self._cycle_remove(q)
        # splice C's remaining fan into A's cycle just before d1
        fan = []
        cur = self._next[tq]
        while cur != tq:
            fan.append(cur)
            cur = self._next[cur]
        self._cycle_remove(tq)
        at = self._prev[d1]
        for x in fan:
            self._cycle_remove(x)
        for x in fan:
            self._insert_after(at, x)
            at = x
        for x in fan:
            self._origin[x] = A
        self.tag[d1] = self.tag[tq]
        mapping = {q: p, tq: d1}
        self._delete_dart(q)
        self._delete_dart(tq)
        self._rehome_basepoint(mapping, succ)
        return mapping

    def _rehome_basepoint(self, mapping: dict, fallback: int | None) -> None:
        b = self.basepoint
        if b is not None and b in mapping:
            b = mapping[b]
        if b is None or b not in self._twin or self.tag.get(b) is not None:
            if fallback is not None and fallback in self._twin \
                    and self.tag.get(fallback) is None:
                b = fallback
            elif b is None or b not in self._twin or self.tag.get(b) is not None:
                b = next((d for d in self.darts() if self.tag[d] is None), None)
        self.basepoint = b

    def _prune_leaf(self, d: int) -> dict[int, int | None]:
        """Remove the edge of ``d`` whose far endpoint is a leaf
        (face-walk successor of ``d`` is its own twin)."""
        td = self._twin[d]
        if self._next[td] != td:
            raise DiagramError("dart %d does not end at a leaf" % d)
        mapping: dict[int, int | None] = {d: None, td: None}
        prev = self._prev[d] if self._prev[d] != d else None
        self._delete_dart(td)
        self._delete_dart(d)
        if self.basepoint in (d, td):
            self.basepoint = None
            self._rehome_basepoint({}, prev)
        return mapping

    def direct_fold(self, d1: int, d2: int) -> dict[int, int]:
        """
        Fold the unreduced segment ``d1, d2`` (consecutive darts with
        canceling labels) on whichever side of the middle vertex is free of
        other darts; SideOccupied if both sides carry darts.
        """
        if self.end(d1) != self._origin[d2]:
            raise DiagramError("segment darts are not consecutive")
        if self._label[d2] != -self._label[d1]:
            raise DiagramError("segment labels do not cancel")
        if d2 == self._twin[d1]:
            raise DiagramError("segment is a backtrack, not an unreduced segment")
        if self._next[self._twin[d1]] == d2:
            return self._fold_core(d1, d2)
        if self._next[d2] == self._twin[d1]:
            return self._fold_core(self._twin[d2], self._twin[d1])
        raise SideOccupied("both sides of the segment carry darts")

    def _segment_sides(self, d1: int, d2: int) -> tuple[list[int], list[int]]:
        p = self._twin[d1]
        side_x, side_y = [], []
        cur = self._next[p]
        bucket = side_x
        while cur != p:
            if cur == d2:
                bucket = side_y
            else:
                bucket.append(cur)
            cur = self._next[cur]
        return side_x, side_y

    def rotated_fold(self, d1: int, d2: int,
                     tracked: Sequence[Sequence[int]] = ()) -> dict[int, int]:
        """
        Fold an unreduced segment with darts on both sides: the middle vertex
        splits (one copy keeps each side's fan), the segment's endpoints
        merge, and the two edges survive as the two sides of the fold.  Any
        tracked path must not cross the segment at the middle vertex.
        """
        if self.end(d1) != self._origin[d2]:
            raise DiagramError("segment darts are not consecutive")
        if self._label[d2] != -self._label[d1]:
            raise DiagramError("segment labels do not cancel")
        if d2 == self._twin[d1]:
            raise DiagramError("segment is a backtrack")
        p = self._twin[d1]
        td2 = self._twin[d2]
        B = self._origin[p]
        A, C = self._origin[d1], self._origin[td2]
        if A == C:
            raise CrossingPresent("segment endpoints coincide; folding would pinch")
        if A == B or B == C:
            raise CrossingPresent("segment contains a loop edge")
        side_x, side_y = self._segment_sides(d1, d2)
        x_set = set(side_x) | {d2}
        y_set = set(side_y) | {p}
        seg_seen = 0
        for path in tracked:
            for u, v in zip(path, path[1:]):
                if self.end(u) != B or self._origin[v] != B:
                    continue
                if u == d1 and v == d2:
                    seg_seen += 1
                    if seg_seen > 1:
                        raise CrossingPresent("path traverses the segment twice")
                    continue
                tu = self._twin[u]
                if (tu in x_set) != (v in x_set):
                    raise CrossingPresent("tracked path crosses the segment")
        # split B
        B2 = self._new_vertex()
        for x in [p] + side_y:
            self._origin[x] = B2
        # rebuild the two cycles at B and B2
        seq_b = side_x + [d2]
        for a, b in zip(seq_b, seq_b[1:] + seq_b[:1]):
            self._next[a] = b
            self._prev[b] = a
        seq_b2 = [p] + side_y
        for a, b in zip(seq_b2, seq_b2[1:] + seq_b2[:1]):
            self._next[a] = b
            self._prev[b] = a
        # merge A and C: cycle (d1, P..., twin(d2), Q...)
        fan_a = []
        cur = self._next[d1]
        while cur != d1:
            fan_a.append(cur)
            cur = self._next[cur]
        fan_c = []
        cur = self._next[td2]
        while cur != td2:
            fan_c.append(cur)
            cur = self._next[cur]
        seq_m = [d1] + fan_a + [td2] + fan_c
        for a, b in zip(seq_m, seq_m[1:] + seq_m[:1]):
            self._next[a] = b
            self._prev[b] = a
        for x in seq_m:
            self._origin[x] = A
        self.tag[d1], self.tag[td2] = self.tag[td2], self.tag[d1]
        return {}

    # -- walk reduction -----------------------------------------------------

    def _apply_mapping(self, walks: list[list[int]], mapping: dict) -> None:
        for walk in walks:
            for i, d in enumerate(walk):
                if d in mapping:
                    walk[i] = mapping[d]

    def reduce_walk_cyclic(self, face_dart: int) -> list[int]:
        """
        Fold the face of ``face_dart`` until its boundary word is cyclically
        reduced.  Branches created on the way are pruned.  Returns the final
        walk.  Folds are applied leftmost-first from the smallest dart.
        """
        walk = self.face_walk(face_dart)
        start = min(walk)
        walk = self.face_walk(start)
        while True:
            m = len(walk)
            if m < 2:
                return walk
            pos = None
            for i in range(m):
                j = (i + 1) % m
                if m == 2 and i == 1:
                    break
                if self._label[walk[j]] == -self._label[walk[i]]:
                    pos = (i, j)
                    break
            if pos is None:
                return walk
            i, j = pos
            d1, d2 = walk[i], walk[j]
            if d2 == self._twin[d1]:
                self._prune_leaf(d1)
                mapping: dict = {}
            elif m == 2:
                mapping = self._fold_core(d1, d2)
            else:
                mapping = self._fold_core(d1, d2)
            if m == 2:
                return []
            del walk[max(i, j)]
            del walk[min(i, j)]
            self._apply_mapping([walk], mapping)
            if not walk:
                return walk

    def reduce_walk_linear(self, walk: list[int]) -> list[int]:
        """
        Fold a boundary walk as a linear word (no folding across the wrap),
        so the word read from the walk's start becomes its free reduction.
        """
        walk = list(walk)
        while True:
            pos = None
            for i in range(len(walk) - 1):
                if self._label[walk[i + 1]] == -self._label[walk[i]]:
                    pos = i
                    break
            if pos is None:
                return walk
            d1, d2 = walk[pos], walk[pos + 1]
            if d2 == self._twin[d1]:
                self._prune_leaf(d1)
                mapping: dict = {}
            else:
                mapping = self._fold_core(d1, d2)
            del walk[pos:pos + 2]
            self._apply_mapping([walk], mapping)

    def reduce_path(self, path: Sequence[int]) -> list[int]:
        """
        Reduce a diagram path (Lemma-style): backtracks are removed from the
        path without touching the diagram; unreduced segments are folded
        directly when a side is free and rotated otherwise; a crossing of the
        path over one of its own unreduced segments refuses the reduction.
        Area is unchanged.  Returns the reduced path.
        """
        path = list(path)
        for u, v in zip(path, path[1:]):
            if self.end(u) != self._origin[v]:
                raise DiagramError("path darts are not consecutive")
        while True:
            changed = False
            i = 0
            while i + 1 < len(path):
                if path[i + 1] == self._twin[path[i]]:
                    del path[i:i + 2]
                    i = max(i - 1, 0)
                    changed = True
                else:
                    i += 1
            pos = next((i for i in range(len(path) - 1)
                        if self._label[path[i + 1]] == -self._label[path[i]]), None)
            if pos is None and not changed:
                return path
            if pos is None:
                continue
            d1, d2 = path[pos], path[pos + 1]
            try:
                mapping = self.direct_fold(d1, d2)
            except SideOccupied:
                mapping = self.rotated_fold(d1, d2, tracked=[path])
            del path[pos:pos + 2]
            self._apply_mapping([path], mapping)

    # -- serialization ---------------------------------------------------------

    def to_text(self) -> str:
        lines = ["# dehnlab diagram v1"]
        lines.append("basepoint: %s" % ("-" if self.basepoint is None else self.basepoint))
        for d in self.darts():
            t = self.tag[d]
            lines.append("dart: %d twin=%d next=%d label=%d origin=%d tag=%s"
                         % (d, self._twin[d], self._next[d], self._label[d],
                            self._origin[d], "-" if t is None else t))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, presentation: Presentation, text: str) -> "VanKampenDiagram":
        diagram = cls(presentation)
        basepoint: int | None = None
        max_dart = 0
        max_vertex = 1
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("basepoint:"):
                val = line.split(":", 1)[1].strip()
                basepoint = None if val == "-" else int(val)
                continue
            if not line.startswith("dart:"):
                raise DiagramError("unrecognized line %r" % line)
            head, *fields = line[len("dart:"):].split()
            d = int(head)
            kv = dict(f.split("=", 1) for f in fields)
            diagram._twin[d] = int(kv["twin"])
            diagram._next[d] = int(kv["next"])
            diagram._label[d] = int(kv["label"])
            diagram._origin[d] = int(kv["origin"])
            diagram.tag[d] = None if kv["tag"] == "-" else int(kv["tag"])
            max_dart = max(max_dart, d)
            max_vertex = max(max_vertex, int(kv["origin"]))
        diagram._prev = {diagram._next[d]: d for d in diagram._next}
        diagram._dart_ctr = itertools.count(max_dart + 1)
        diagram._vertex_ctr = itertools.count(max_vertex + 1)
        diagram.basepoint = basepoint
        diagram.validate()
        return diagram


# ---------------------------------------------------------------------------
# region extraction and hole filling
# ---------------------------------------------------------------------------

def _region_darts(d: VanKampenDiagram, faces: Iterable[Sequence[int]]) -> set[int]:
    out: set[int] = set()
    for walk in faces:
        out.update(walk)
    return out


def extract_subdiagram(d: VanKampenDiagram,
                       faces: Sequence[Sequence[int]]) -> VanKampenDiagram:
    """
    A standalone copy of the closed region covered by the given faces (dart
    ids preserved).  Darts facing away from the region become its outer face.
    """
    inner = _region_darts(d, faces)
    keep = {x for x in inner} | {d.twin(x) for x in inner}
    sub = VanKampenDiagram(d.presentation)
    sub._twin = {x: d._twin[x] for x in keep}
    sub._label = {x: d._label[x] for x in keep}
    sub._origin = {x: d._origin[x] for x in keep}
    sub.tag = {x: (d.tag[x] if x in inner else None) for x in keep}
    # restrict the rotation cycles to the kept darts
    for x in keep:
        cur = d._next[x]
        while cur not in keep:
            cur = d._next[cur]
        sub._next[x] = cur
    sub._prev = {sub._next[x]: x for x in sub._next}
    sub._dart_ctr = itertools.count(max(keep, default=0) + 1)
    sub._vertex_ctr = itertools.count(max(sub._origin.values(), default=1) + 1)
    sub.basepoint = next((x for x in sorted(keep) if sub.tag[x] is None), None)
    return sub


def delete_region(d: VanKampenDiagram, faces: Sequence[Sequence[int]]) -> int:
    """
    Remove the interior of the region covered by the given faces, leaving a
    hole (a second untagged face).  Returns a dart on the hole.  The caller
    must refill (fill_hole / fold_shut) before validating.
    """
    inner = _region_darts(d, faces)
    hole_dart = None
    for x in sorted(inner):
        if x not in d._twin:
            continue
        tx = d._twin[x]
        if tx in inner:
            d._delete_dart(tx)
            d._delete_dart(x)
        else:
            d.tag[x] = None
            hole_dart = hole_dart if hole_dart is not None else x
    if hole_dart is None:
        raise DiagramError("region had no boundary")
    return hole_dart


def fill_hole(d: VanKampenDiagram, hole_dart: int, donor: VanKampenDiagram,
              align: int | None = None) -> None:
    """
    Glue a standalone diagram into a hole.  The donor's outer boundary must
    read the inverse of the hole walk at some rotation offset; donor edges
    with both sides on the donor boundary are not supported.
    """
    if donor.presentation is not d.presentation \
            and donor.presentation.relators != d.presentation.relators:
        raise BoundaryMismatch("donor is over a different presentation")
    hole = d.face_walk(hole_dart)
    G = donor.outer_walk()
    m = len(hole)
    if len(G) != m:
        raise BoundaryMismatch("hole walk has %d darts, donor boundary %d"
                               % (m, len(G)))
    if m == 0:
        raise DiagramError("cannot fill an empty hole")
    for g in G:
        if donor.tag[donor.twin(g)] is None:
            raise BoundaryMismatch("donor has boundary-only edges")
    offsets = [align] if align is not None else range(m)
    chosen = None
    for k in offsets:
        if all(donor.label(G[(k - i) % m]) == -d.label(hole[i]) for i in range(m)):
            chosen = k
            break
    if chosen is None:
        raise BoundaryMismatch("donor boundary does not match the hole")
    k = chosen
    pair = {i: G[(k - i) % m] for i in range(m)}

    # copy donor interior darts under fresh ids; donor boundary edges merge
    # onto the hole's existing edges
    outer_set = set(G)
    id_map: dict[int, int] = {}
    for x in donor.darts():
        if x in outer_set:
            continue
        if donor.twin(x) in outer_set:
            i = next(i for i in range(m) if pair[i] == donor.twin(x))
            id_map[x] = hole[i]
        else:
            id_map[x] = next(d._dart_ctr)
    vertex_map: dict[int, int] = {}
    for i in range(m):
        vertex_map[donor.origin(pair[i])] = d.origin(hole[(i + 1) % m])
    for v in {donor.origin(x) for x in donor.darts()}:
        if v not in vertex_map:
            vertex_map[v] = d._new_vertex()

    interior = [x for x in donor.darts()
                if x not in outer_set and donor.twin(x) not in outer_set]
    for x in interior:
        nx = id_map[x]
        d._twin[nx] = id_map[donor.twin(x)]
        d._label[nx] = donor.label(x)
        d._origin[nx] = vertex_map[donor.origin(x)]
        d.tag[nx] = donor.tag[x]
        d._next[nx] = nx
        d._prev[nx] = nx
    # interior rotation links (both endpoints interior to the donor)
    for x in interior:
        succ = donor.sigma(x)
        if succ not in outer_set and donor.twin(succ) not in outer_set:
            nx, ns = id_map[x], id_map[succ]
            d._next[nx] = ns
            d._prev[ns] = nx
    # boundary corners: splice each donor fan between twin(hole[i]) and
    # hole[i+1], and retag the merged darts
    for i in range(m):
        h = hole[i]
        g = pair[i]
        d.tag[h] = donor.tag[donor.twin(g)]
        fan = []
        cur = donor.sigma(g)
        g_next = pair[(i + 1) % m]      # donor dart paired one step on
        while cur != donor.twin(g_next):
            if cur in outer_set:
                raise BoundaryMismatch("donor boundary fan is inconsistent")
            fan.append(cur)
            cur = donor.sigma(cur)
        at = d.twin(h)
        for x in fan:
            nx = id_map[x]
            d._cycle_remove(nx)
            d._insert_after(at, nx)
            at = nx
    # merged darts may carry donor-interior rotation data for their cycles:
    # hole[i] keeps its place in d's cycles, so nothing else moves.


def fold_shut(d: VanKampenDiagram, hole_dart: int) -> None:
    """Close a hole whose boundary word reduces to the identity by folding
    its sides together pairwise."""
    walk = d.face_walk(hole_dart)
    while walk:
        m = len(walk)
        pos = None
        for i in range(m):
            j = (i + 1) % m
            if m >= 2 and d.label(walk[j]) == -d.label(walk[i]):
                if m == 2 and i == 1:
                    continue
                pos = (i, j)
                break
        if pos is None:
            raise BoundaryMismatch("hole word does not reduce to the identity")
        i, j = pos
        d1, d2 = walk[i], walk[j]
        if d2 == d.twin(d1):
            d._prune_leaf(d1)
            mapping: dict = {}
        else:
            mapping = d._fold_core(d1, d2)
        if m == 2:
            return
        del walk[max(i, j)]
        del walk[min(i, j)]
        for idx, x in enumerate(walk):
            if x in mapping:
                walk[idx] = mapping[x]


# ---------------------------------------------------------------------------
# t-corridors and rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Corridor:
    kind: str                       # 'boundary' or 'ring'
    cells: tuple[tuple[int, ...], ...]   # face walks, chained in order
    bottoms: tuple[int, ...]        # cell-side darts of the bottom path
    tops: tuple[int, ...]           # cell-side darts of the top path
    t_darts: tuple[int, ...]        # the +t darts, one per cell

    def __len__(self) -> int:
        return len(self.cells)

    def bottom_word(self, d: "VanKampenDiagram") -> tuple[int, ...]:
        return tuple(d.label(x) for x in self.bottoms)


def _t_cell_shape(d: VanKampenDiagram, walk: Sequence[int], t: int
                  ) -> tuple[int, int]:
    """(position of the -t dart, position of the +t dart) in the walk."""
    neg = [i for i, x in enumerate(walk) if d.label(x) == -t]
    pos = [i for i, x in enumerate(walk) if d.label(x) == t]
    if len(neg) != 1 or len(pos) != 1:
        raise MalformedTCell("t-cell with %d+%d t-edges" % (len(pos), len(neg)))
    return neg[0], pos[0]


def find_corridors(d: VanKampenDiagram, t: int,
                   t_relators: Iterable[int]) -> list[Corridor]:
    """
    Partition the t-cells into maximal corridors: chains glued along
    t-edges, each either meeting the boundary at both ends or closing into
    a ring.  ``t`` is the stable letter, ``t_relators`` the relator indices
    whose faces count as t-cells.
    """
    t_set = set(t_relators)
    by_first = {}
    for walk, tag in d.faces():
        if tag in t_set:
            by_first[walk[0]] = walk
    keys = {}
    for first, walk in by_first.items():
        for x in walk:
            keys[x] = first

    def neighbor(first: int, forward: bool) -> int | None:
        walk = by_first[first]
        neg, pos = _t_cell_shape(d, walk, t)
        dart = walk[pos] if forward else walk[neg]
        return keys.get(d.twin(dart))

    assigned: set[int] = set()
    corridors: list[Corridor] = []
    for first in sorted(by_first):
        if first in assigned:
            continue
        chain = [first]
        assigned.add(first)
        kind = "boundary"
        cur = first
        while True:
            nxt = neighbor(cur, True)
            if nxt is None:
                break
            if nxt == chain[0]:
                kind = "ring"
                break
            chain.append(nxt)
            assigned.add(nxt)
            cur = nxt
        if kind != "ring":
            cur = first
            while True:
                prv = neighbor(cur, False)
                if prv is None:
                    break
                chain.insert(0, prv)
                assigned.add(prv)
                cur = prv
        bottoms: list[int] = []
        tops: list[int] = []
        t_darts: list[int] = []
        cell_walks = []
        for key in chain:
            walk = by_first[key]
            neg, pos = _t_cell_shape(d, walk, t)
            n = len(walk)
            i = (neg + 1) % n
            while i != pos:
                bottoms.append(walk[i])
                i = (i + 1) % n
            i = (pos + 1) % n
            top_run = []
            while i != neg:
                top_run.append(walk[i])
                i = (i + 1) % n
            tops.extend(reversed(top_run))
            t_darts.append(walk[pos])
            cell_walks.append(tuple(walk))
        corridors.append(Corridor(kind, tuple(cell_walks), tuple(bottoms),
                                  tuple(tops), tuple(t_darts)))
    return corridors


def _face_flood(d: VanKampenDiagram, start_dart: int,
                blocked: set[int]) -> tuple[set[int], bool]:
    """
    Flood faces from the face of ``start_dart``, never entering faces whose
    representative darts are in ``blocked``.  Returns (set of face-walk
    tuples' first darts ... actually dart sets, reached_outer).
    """
    seen_darts: set[int] = set()
    reached_outer = False
    stack = [start_dart]
    face_darts: set[int] = set()
    while stack:
        x = stack.pop()
        if x in seen_darts or x in blocked:
            continue
        walk = d.face_walk(x)
        if any(w in blocked for w in walk):
            continue
        if d.tag[walk[0]] is None:
            reached_outer = True
        seen_darts.update(walk)
        face_darts.update(walk)
        for w in walk:
            tw = d.twin(w)
            if tw not in seen_darts and tw not in blocked:
                stack.append(tw)
    return face_darts, reached_outer


def ring_interior(d: VanKampenDiagram, ring: Corridor
                  ) -> tuple[list[tuple[int, ...]], int]:
    """
    The faces strictly inside a t-ring and the sign to use for the refill:
    +1 when the ring's bottom faces the interior (refill with the forward
    map), -1 when the top does.
    """
    if ring.kind != "ring":
        raise NotARing("corridor is not a ring")
    ring_darts = set()
    for walk in ring.cells:
        ring_darts.update(walk)
    sides = {}
    for name, loop in (("bottom", ring.bottoms), ("top", ring.tops)):
        probe = next((d.twin(x) for x in loop if d.twin(x) not in ring_darts), None)
        if probe is None:
            sides[name] = (set(), False)
            continue
        sides[name] = _face_flood(d, probe, ring_darts)
    for name, eps in (("bottom", 1), ("top", -1)):
        darts, outer = sides[name]
        if not outer:
            faces = []
            seen = set()
            for x in sorted(darts):
                if x in seen:
                    continue
                walk = d.face_walk(x)
                seen.update(walk)
                faces.append(tuple(walk))
            return faces, eps
    return [], 1    # empty interior; orientation immaterial


# ---------------------------------------------------------------------------
# cell filling tables and induced diagrams
# ---------------------------------------------------------------------------

class CellFillingTable:
    """
    For each relator of a presentation, a fixed diagram filling the reduced
    image of that relator under a free map; used to refill cells in induced
    diagrams.  An identity table maps every cell to itself (area 1).
    """

    def __init__(self, presentation: Presentation, phi: GeneratorMap,
                 entries: dict[int, VanKampenDiagram]):
        self.presentation = presentation
        self.phi = phi
        self.entries = entries
        for idx, r in enumerate(presentation.relators):
            if idx not in entries:
                raise MissingTableEntry("no filling for relator %d" % idx)

    @classmethod
    def identity(cls, presentation: Presentation) -> "CellFillingTable":
        phi = GeneratorMap.identity(presentation.alphabet)
        entries = {}
        for idx, r in enumerate(presentation.relators):
            cell = VanKampenDiagram(presentation)
            cell.attach_cell(None, 0, 0, tuple(~r), idx)
            entries[idx] = cell
        return cls(presentation, phi, entries)

    def max_area(self) -> int:
        return max((e.area() for e in self.entries.values()), default=0)

    def is_area_preserving(self) -> bool:
        return self.max_area() <= 1

    def entry(self, idx: int) -> VanKampenDiagram:
        if idx not in self.entries:
            raise MissingTableEntry("no filling for relator %d" % idx)
        return self.entries[idx]


def _subdivide_edges(d: VanKampenDiagram, phi: GeneratorMap) -> None:
    """Replace each edge labeled x by a chain reading phi(x) (step 1 of the
    induced-map construction).  The original darts keep their rotation slots
    at the edge's endpoints, so no splicing outside the chain is needed."""
    edges = [(dart, d.twin(dart)) for dart in d.darts() if dart < d.twin(dart)]
    for dart, g in edges:
        x = d.label(dart)
        image = phi.apply(FreeWord((x,))) if x > 0 else ~phi.apply(FreeWord((-x,)))
        L = len(image)
        if L == 0:
            raise DiagramError("free map kills a generator")
        if L == 1:
            d._label[dart] = image[0]
            d._label[g] = -image[0]
            continue
        tag_f, tag_g = d.tag[dart], d.tag[g]
        A, B = d.origin(dart), d.origin(g)
        mids = [d._new_vertex() for _ in range(L - 1)]
        forward = [dart] + [next(d._dart_ctr) for _ in range(L - 1)]
        backward = [next(d._dart_ctr) for _ in range(L - 1)] + [g]
        starts = [A] + mids
        for i in range(L):
            f, b = forward[i], backward[i]
            d._twin[f], d._twin[b] = b, f
            d._label[f], d._label[b] = image[i], -image[i]
            d._origin[f] = starts[i]
            d._origin[b] = mids[i] if i < L - 1 else B
            d.tag[f], d.tag[b] = tag_f, tag_g
            if f != dart:
                d._next[f] = f
                d._prev[f] = f
            if b != g:
                d._next[b] = b
                d._prev[b] = b
        # interior vertices mids[j] carry exactly (backward[j], forward[j+1])
        for j in range(L - 1):
            a, b = backward[j], forward[j + 1]
            d._next[a] = b
            d._prev[b] = a
            d._next[b] = a
            d._prev[a] = b


def induced_diagram(phi: GeneratorMap, d: VanKampenDiagram,
                    table: CellFillingTable,
                    phi_inverse_of_table: bool = False) -> VanKampenDiagram:
    """
    The image diagram: every edge is replaced by a path reading its image,
    every face folded until (cyclically) reduced and refilled by the fixed
    table entry, branches pruned, and the outer boundary linearly reduced.
    The boundary of the result reads the reduced image of the boundary.
    """
    out = d.clone()
    if not out._twin:
        return out
    original_faces = [(walk, tag) for walk, tag in out.faces() if tag is not None]
    _subdivide_edges(out, phi)
    # the face walks after subdivision: recompute; tags survive subdivision
    walks: list[list[int]] = []
    tags: list[int] = []
    for walk, tag in out.faces():
        if tag is not None:
            walks.append(list(walk))
            tags.append(tag)
    del original_faces
    # mark all as holes, fold them reduced, refill from the table
    for walk in walks:
        for x in walk:
            out.tag[x] = None
    for walk, tag in zip(walks, tags):
        live = next((x for x in walk if x in out._twin), None)
        if live is None:
            raise DiagramError("face vanished during subdivision")
        final = out.reduce_walk_cyclic(live)
        if not final:
            raise DiagramError("cell image reduced to nothing")
        word = out.walk_word(final)
        if word in out.presentation.face_words(tag):
            for x in final:
                out.tag[x] = tag
            continue
        donor = table.entry(tag)
        try:
            fill_hole(out, final[0], donor)
        except BoundaryMismatch:
            fill_hole(out, final[0], donor.mirrored())
    # outer boundary: linear reduction from the basepoint
    if out.basepoint is not None:
        out.reduce_walk_linear(out.outer_walk())
    return out


# ---------------------------------------------------------------------------
# surgical operations: ring removal and room moving
# ---------------------------------------------------------------------------

def remove_t_ring(d: VanKampenDiagram, ring: Corridor, phi: GeneratorMap,
                  phi_inv: GeneratorMap, table: CellFillingTable,
                  table_inv: CellFillingTable) -> None:
    """
    Delete a t-ring and its interior and refill the hole with the induced
    image of the interior (forward map when the ring's bottom faces inward,
    inverse map otherwise).  Boundary word and, with area-preserving tables,
    the primitive cell count are unchanged.
    """
    faces, eps = ring_interior(d, ring)
    interior = extract_subdiagram(d, faces) if faces else None
    hole = delete_region(d, list(ring.cells) + list(faces))
    if interior is None or not interior._twin:
        fold_shut(d, hole)
        return
    use_phi = phi if eps > 0 else phi_inv
    use_table = table if eps > 0 else table_inv
    donor = induced_diagram(use_phi, interior, use_table)
    if donor.basepoint is not None:
        donor.reduce_walk_cyclic(donor.basepoint)
        donor._rehome_basepoint({}, None)
    if not donor._twin:
        fold_shut(d, hole)
        return
    try:
        fill_hole(d, hole, donor)
    except BoundaryMismatch:
        fill_hole(d, hole, donor.mirrored())


@dataclass(frozen=True)
class Room:
    """The closure of one complement component after deleting t-corridors."""
    faces: tuple[tuple[int, ...], ...]

    def cell_count(self) -> int:
        return len(self.faces)


def find_rooms(d: VanKampenDiagram, t_relators: Iterable[int]) -> list[Room]:
    """Components of the primitive cells under shared-edge adjacency."""
    t_set = set(t_relators)
    prim = {}
    for walk, tag in d.faces():
        if tag is not None and tag not in t_set:
            prim[walk[0]] = tuple(walk)
    key_of = {}
    for first, walk in prim.items():
        for x in walk:
            key_of[x] = first
    seen: set[int] = set()
    rooms = []
    for first in sorted(prim):
        if first in seen:
            continue
        comp = []
        stack = [first]
        seen.add(first)
        while stack:
            k = stack.pop()
            comp.append(prim[k])
            for x in prim[k]:
                other = key_of.get(d.twin(x))
                if other is not None and other not in seen:
                    seen.add(other)
                    stack.append(other)
        rooms.append(Room(tuple(sorted(comp))))
    return rooms


def room_corridor_intersection(d: VanKampenDiagram, corridor: Corridor,
                               room: Room) -> tuple[str, list[int]]:
    """
    The darts of the corridor's bottom (or top) run shared with the room,
    which must form one connected run of one side; returns (side, run).
    """
    room_darts = _region_darts(d, room.faces)
    shared_bottom = [x for x in corridor.bottoms if d.twin(x) in room_darts]
    shared_top = [x for x in corridor.tops if d.twin(x) in room_darts]
    if shared_bottom and shared_top:
        raise DisconnectedIntersection("room touches both sides of the corridor")
    if not shared_bottom and not shared_top:
        raise NotBounding("corridor does not bound the room")
    side = "bottom" if shared_bottom else "top"
    run = shared_bottom or shared_top
    lane = corridor.bottoms if side == "bottom" else corridor.tops
    idx = [lane.index(x) for x in run]
    idx.sort()
    if idx != list(range(idx[0], idx[-1] + 1)):
        raise DisconnectedIntersection("room meets the corridor in pieces")
    return side, [lane[i] for i in range(idx[0], idx[-1] + 1)]


def _complete_t_cell(presentation: Presentation, t_relators: Iterable[int],
                     prefix: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """The unique t-relator form extending ``prefix``, if one exists."""
    for idx in sorted(t_relators):
        for form in sorted(presentation.face_words(idx)):
            if form[:len(prefix)] == prefix:
                return idx, form
    return None


def move_room(d: VanKampenDiagram, corridor: Corridor, room: Room,
              phi: GeneratorMap, phi_inv: GeneratorMap,
              table: CellFillingTable, table_inv: CellFillingTable,
              t_relators: Iterable[int]) -> None:
    """
    Move all primitive cells of a room to the other side of a
    boundary-to-boundary corridor.  The corridor and the room are cut out;
    a new corridor is rebuilt one t-cell at a time along the section of the
    hole where the room sat, its final wall folds onto the old far wall, and
    the image of the room under the automorphism (the inverse when the room
    sat on the top side) fills what remains.  The boundary word is unchanged
    and, with area-preserving tables, so is the primitive cell count.
    """
    if corridor.kind != "boundary":
        raise NotBounding("room moving needs a boundary-to-boundary corridor")
    if not room.faces:
        return
    t_rel_set = set(t_relators)
    side, _run = room_corridor_intersection(d, corridor, room)
    eps = 1 if side == "bottom" else -1
    use_phi = phi if eps > 0 else phi_inv
    use_table = table if eps > 0 else table_inv
    t_letter = abs(d.label(corridor.t_darts[0]))

    region_darts = _region_darts(d, list(corridor.cells) + list(room.faces))
    room_markers = {d.twin(x) for x in _region_darts(d, room.faces)
                    if d.twin(x) not in region_darts}
    lane = corridor.bottoms if side == "bottom" else corridor.tops
    lane_markers = {d.twin(x) for x in lane if d.twin(x) not in region_darts}
    markers = room_markers | lane_markers

    room_standalone = extract_subdiagram(d, room.faces)
    hole = delete_region(d, list(corridor.cells) + list(room.faces))
    walk = d.face_walk(hole)
    t_pos = [i for i, x in enumerate(walk) if abs(d.label(x)) == t_letter]
    if len(t_pos) != 2:
        raise NotBounding("hole shows %d corridor walls instead of 2" % len(t_pos))
    i1, i2 = t_pos
    sections = {
        i1: walk[i1 + 1:i2],
        i2: walk[i2 + 1:] + walk[:i1],
    }
    wall_for = None
    for wall_idx, section in sections.items():
        if any(x in markers for x in section):
            wall_for = wall_idx
            break
    if wall_for is None:
        # the room section may be empty (fully degenerate y); take the
        # shorter section next to the walls
        wall_for = i1 if len(sections[i1]) <= len(sections[i2]) else i2
    bottom_section = sections[wall_for]
    prev_wall = walk[wall_for]

    for x in bottom_section:
        prefix = (d.label(prev_wall), d.label(x), -d.label(prev_wall))
        completed = _complete_t_cell(d.presentation, t_rel_set, prefix)
        if completed is None:
            raise NotBounding("no t-relator matches prefix %r"
                              % (d.presentation.alphabet.spell(prefix),))
        rel_idx, cell_word = completed
        walk_now = d.face_walk(x)
        s = walk_now.index(prev_wall)
        if walk_now[(s + 1) % len(walk_now)] != x:
            raise NotBounding("corridor rebuild lost its wall")
        new_outer = d.attach_cell(x, s, 2, cell_word, rel_idx)
        prev_wall = new_outer[-1]

    donor = induced_diagram(use_phi, room_standalone, use_table)
    if donor.basepoint is not None and donor._twin:
        donor.reduce_walk_cyclic(donor.basepoint)
        donor._rehome_basepoint({}, None)
    anchor = prev_wall if prev_wall in d._twin else hole
    final = d.reduce_walk_cyclic(anchor)
    if not final:
        if donor._twin:
            raise BoundaryMismatch("hole closed but the room image is nonempty")
        return
    if not donor._twin:
        fold_shut(d, final[0])
        return
    try:
        fill_hole(d, final[0], donor)
    except BoundaryMismatch:
        fill_hole(d, final[0], donor.mirrored())


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_from_filling(presentation: Presentation, boundary: FreeWord,
                       cells: Sequence[tuple[int, int, Sequence[int], int]]
                       ) -> VanKampenDiagram:
    """
    Build a diagram from an explicit gluing description: each cell is
    (arc start, arc length, face word, relator tag), positions indexing the
    current outer walk from the basepoint (arcs may not wrap past it).  The
    final boundary must read ``boundary`` exactly from the basepoint.
    """
    d = VanKampenDiagram(presentation)
    walk: list[int] = []
    for (start, arc_len, word, tag) in cells:
        if not d._twin:
            if arc_len:
                raise NonPlanar("first cell cannot share an arc")
            new_outer = d.attach_cell(None, 0, 0, word, tag)
            walk = list(new_outer)
        else:
            if start < 0 or start + arc_len > len(walk):
                raise NonPlanar("arc [%d, %d) outside the boundary"
                                % (start, start + arc_len))
            anchor = walk[start] if arc_len else walk[start % len(walk)]
            s = d.face_walk(anchor).index(anchor)
            new_outer = d.attach_cell(anchor, s, arc_len, word, tag)
            walk[start:start + arc_len] = new_outer
        d.basepoint = walk[0]
    raw = d.boundary_raw()
    if raw != tuple(boundary):
        raise BoundaryMismatch("built boundary reads %s, wanted %s"
                               % (presentation.alphabet.spell(raw),
                                  presentation.alphabet.spell(boundary)))
    d.validate()
    return d


def single_cell(presentation: Presentation, relator_idx: int) -> VanKampenDiagram:
    """One cell whose boundary reads the relator from the basepoint."""
    r = presentation.relators[relator_idx]
    d = VanKampenDiagram(presentation)
    d.attach_cell(None, 0, 0, tuple(~r), relator_idx)
    walk = d.outer_walk()
    raw = d.boundary_raw()
    k = next(i for i in range(len(raw)) if raw[i:] + raw[:i] == tuple(r))
    d.basepoint = walk[k]
    d.validate()
    return d


def grid_diagram(presentation: Presentation, relator_idx: int,
                 cols: int, rows: int) -> VanKampenDiagram:
    """
    A cols x rows grid of commutator cells: boundary
    x^cols y^rows x^-cols y^-rows for a relator reading x y x' y'.
    """
    r = presentation.relators[relator_idx]
    if len(r) != 4 or r[0] != -r[2] or r[1] != -r[3]:
        raise BadFaceLabel("grid needs a commutator relator")
    x, y = r[0], r[1]
    d = single_cell(presentation, relator_idx)
    idx = relator_idx

    def attach_at(pos: int, arc_len: int, word: tuple[int, ...]) -> None:
        walk = d.outer_walk()
        anchor = walk[pos]
        s = d.face_walk(anchor).index(anchor)
        base = d.basepoint
        d.attach_cell(anchor, s, arc_len, word, idx)
        if base in d._twin and d.tag.get(base) is None:
            d.basepoint = base

    for i in range(1, cols):
        # boundary reads x^i y x^-i y^-1; grow along the rightmost y
        attach_at(i, 1, (y, x, -y, -x))
    for j in range(1, rows):
        # boundary reads x^c y^j x^-c y^-j; lay a row along the top
        attach_at(cols + j, 1, (-x, y, x, -y))
        for i in range(1, cols):
            # fold each next cell over the (y', x') corner it meets
            attach_at(cols + j + 1 + i, 2, (-y, -x, y, x))
    raw = d.boundary_raw()
    want = (x,) * cols + (y,) * rows + (-x,) * cols + (-y,) * rows
    k = next(i for i in range(len(raw)) if raw[i:] + raw[:i] == want)
    d.basepoint = d.outer_walk()[k]
    d.validate()
    return d


def wrap_in_t_ring(d: VanKampenDiagram, t: int, t_relators: Iterable[int]) -> None:
    """
    Enclose the whole diagram in a ring of t-cells whose bottoms read the
    current boundary; the new boundary reads the letterwise image of the old
    one, folded reduced.  Needs a nonempty cyclically reduced boundary.
    """
    raw = d.boundary_raw()
    if not raw or raw[0] == -raw[-1] or any(a == -b for a, b in zip(raw, raw[1:])):
        raise BoundaryMismatch("wrap needs a cyclically reduced boundary")
    if any(abs(l) == t for l in raw):
        raise BoundaryMismatch("wrap needs a t-free boundary")
    t_rel_set = set(t_relators)
    walk = list(d.outer_walk())
    for i in range(len(walk) - 1, -1, -1):
        dart = walk[i]
        completed = _complete_t_cell(d.presentation, t_rel_set,
                                     (d.label(dart), t))
        if completed is None:
            raise BoundaryMismatch("no t-relator over letter %s"
                                   % d.presentation.alphabet.name(d.label(dart)))
        rel_idx, cell_word = completed
        s = d.face_walk(dart).index(dart)
        d.attach_cell(dart, s, 1, cell_word, rel_idx)
    outer_probe = next(dd for dd in d.darts() if d.tag[dd] is None)
    final = d.reduce_walk_cyclic(outer_probe)
    d._rehome_basepoint({}, final[0] if final else None)
    d.validate()
