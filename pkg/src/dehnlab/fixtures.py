"""
The worked examples every test and experiment leans on.

* FIX-A: one vertex <a>, one loop edge with u = w = a (an HNN extension of Z;
  the fundamental group is Z^2).
* FIX-B: two vertices <a>, <b>, one tree edge with u = a^2, w = b^3 (the
  torus-knot amalgam <a, b | a^2 = b^3>).
* FIX-C: a star: center <a> (basepoint), leaves <b> and <c>; e1 carries
  u = a^2, w = b and e2 carries u = a, w = c.  FIX-C' replaces w on e2 by
  c^3, the configuration that needs one slide to become full-rooted.
* FIX-D: base presentation <a, b | [a, b]> (Z^2) with the identity
  automorphism; its mapping torus is Z^3.
* FIX-E: free base F_2 = <a, b> with a -> a, b -> a b.
"""

from __future__ import annotations

from .gog import GraphOfGroups
from .presentation import Presentation
from .words import GeneratorMap


def fix_a() -> GraphOfGroups:
    return GraphOfGroups.build(
        vertices=[("A", "a")],
        edges=[("e1", "A", "A", "a", "a")],
        basepoint="A")


def fix_b() -> GraphOfGroups:
    return GraphOfGroups.build(
        vertices=[("A", "a"), ("B", "b")],
        edges=[("e1", "A", "B", "a a", "b b b")],
        basepoint="A")


def fix_c() -> GraphOfGroups:
    return GraphOfGroups.build(
        vertices=[("A", "a"), ("B", "b"), ("C", "c")],
        edges=[("e1", "A", "B", "a a", "b"),
               ("e2", "A", "C", "a", "c")],
        basepoint="A")


def fix_c_prime() -> GraphOfGroups:
    return GraphOfGroups.build(
        vertices=[("A", "a"), ("B", "b"), ("C", "c")],
        edges=[("e1", "A", "B", "a a", "b"),
               ("e2", "A", "C", "a", "c c c")],
        basepoint="A")


def fix_d_base() -> Presentation:
    return Presentation.parse("a b", ["a b a' b'"])


def fix_d_phi() -> GeneratorMap:
    return GeneratorMap.identity(fix_d_base().alphabet)


def fix_e_base() -> Presentation:
    return Presentation.parse("a b", [])


def fix_e_phi() -> GeneratorMap:
    P = fix_e_base()
    return GeneratorMap.from_strings(P.alphabet, {"a": "a", "b": "a b"})
