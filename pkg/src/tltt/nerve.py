"""Nerves of finite categories, weak spines, Segal checks, pointed nerves.

The nerve of a category has, at level k, the composable chains
(x_0, f_1 : x_0 -> x_1, ..., f_k).  The outer faces drop an end of the
chain; an inner face composes two adjacent arrows.  The Segal condition
compares level n against chains of n composable edges via the canonical
restriction map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .categories import FinCat
from .simplex import FiniteSemiSimplicialSet, MonoMap, coface, compose_mono


def nerve(c: FinCat, depth: int) -> FiniteSemiSimplicialSet:
    """The nerve of c, truncated at the given depth.

    A level-k cell is ``(x0, (f1, ..., fk))`` with each f_i an arrow
    x_{i-1} -> x_i (identities allowed).
    """
    levels: list[list] = [[(x, ()) for x in c.objects]]
    for k in range(1, depth + 1):
        level = []
        for (x0, chain) in levels[k - 1]:
            tail = c.dst[chain[-1]] if chain else x0
            for y in c.objects:
                for f in c.hom(tail, y):
                    level.append((x0, chain + (f,)))
        levels.append(level)
    faces: dict = {}
    for m in range(1, depth + 1):
        for i in range(m + 1):
            fn = {}
            for cell in levels[m]:
                x0, chain = cell
                if i == 0:
                    out = (c.dst[chain[0]], chain[1:])
                elif i == m:
                    out = (x0, chain[:-1])
                else:
                    composed = c.compose[(chain[i], chain[i - 1])]
                    out = (x0, chain[:i - 1] + (composed,) + chain[i + 1:])
                fn[cell] = out
            faces[(m, i)] = fn
    out = FiniteSemiSimplicialSet(levels, faces)
    out.validate()
    return out


def weak_spines(x: FiniteSemiSimplicialSet, n: int) -> list[tuple]:
    """Chains of n edges (e_1, ..., e_n) with target(e_i) = source(e_{i+1}),
    where source is the 1-face and target the 0-face."""
    if n < 1:
        raise ValueError("weak spines need n >= 1")
    chains = [(e,) for e in x.levels[1]]
    for _ in range(n - 1):
        chains = [ch + (e,)
                  for ch in chains for e in x.levels[1]
                  if x.faces[(1, 0)][ch[-1]] == x.faces[(1, 1)][e]]
    return chains


def spine_restriction(x: FiniteSemiSimplicialSet, n: int, cell) -> tuple:
    """The chain of edges obtained by restricting a level-n cell along the
    n vertex-pair inclusions [1] -> [n] hitting {i-1, i}."""
    return tuple(x.act(MonoMap(n, (i - 1, i)), cell) for i in range(1, n + 1))


@dataclass
class SegalVerdict:
    n: int
    cells: int
    spines: int
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cells": self.cells,
            "spines": self.spines,
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
        }


def segal_check(x: FiniteSemiSimplicialSet, n: int) -> SegalVerdict:
    """Is the restriction map X_n -> (weak spines of length n) a bijection?"""
    spines = set(weak_spines(x, n))
    image = [spine_restriction(x, n, cell) for cell in x.levels[n]]
    return SegalVerdict(
        n=n,
        cells=len(x.levels[n]),
        spines=len(spines),
        injective=len(set(image)) == len(image),
        surjective=set(image) == spines,
    )


def segal_report(x: FiniteSemiSimplicialSet, up_to: int) -> list[SegalVerdict]:
    return [segal_check(x, n) for n in range(1, up_to + 1)]


# ---------------------------------------------------------------------------
# Pointed nerves over a finite universe of sets
# ---------------------------------------------------------------------------

def _functions(dom: tuple, cod: tuple) -> list[tuple]:
    """All functions dom -> cod, each as a tuple of images in dom order."""
    return [tuple(imgs) for imgs in itertools.product(cod, repeat=len(dom))]


def pointed_nerve_level(universe: list[tuple], n: int) -> list[tuple]:
    """Level n of the nerve of pointed sets drawn from the universe:
    chains of sets with a chosen point in each and point-preserving maps.

    A cell is ``(sets, points, maps)`` where sets are indices into the
    universe, maps are image tuples, and maps[i](points[i]) = points[i+1].
    """
    cells = []
    for sets in itertools.product(range(len(universe)), repeat=n + 1):
        point_space = itertools.product(*(universe[s] for s in sets))
        map_space = itertools.product(*(
            _functions(universe[sets[i]], universe[sets[i + 1]])
            for i in range(n)))
        maps_list = list(map_space)
        for points in itertools.product(*(universe[s] for s in sets)):
            for maps in maps_list:
                if all(maps[i][universe[sets[i]].index(points[i])]
                       == points[i + 1] for i in range(n)):
                    cells.append((sets, points, maps))
    return cells


def based_nerve_level(universe: list[tuple], n: int) -> list[tuple]:
    """Level n of the equivalent presentation: chains of plain sets with a
    single point in the first set and arbitrary maps.

    A cell is ``(sets, point, maps)``.
    """
    cells = []
    for sets in itertools.product(range(len(universe)), repeat=n + 1):
        map_space = list(itertools.product(*(
            _functions(universe[sets[i]], universe[sets[i + 1]])
            for i in range(n))))
        for point in universe[sets[0]]:
            for maps in map_space:
                cells.append((sets, point, maps))
    return cells


def pointed_to_based(cell: tuple) -> tuple:
    """Forget all points except the first one."""
    sets, points, maps = cell
    return (sets, points[0], maps)


def based_to_pointed(universe: list[tuple], cell: tuple) -> tuple:
    """Push the base point forward along the chain."""
    sets, point, maps = cell
    points = [point]
    for i in range(len(maps)):
        points.append(maps[i][universe[sets[i]].index(points[i])])
    return (sets, tuple(points), maps)


def pointed_face(universe: list[tuple], cell: tuple, i: int) -> tuple:
    """The i-th face on the pointed-chain presentation."""
    sets, points, maps = cell
    n = len(maps)
    if i == 0:
        return (sets[1:], points[1:], maps[1:])
    if i == n:
        return (sets[:-1], points[:-1], maps[:-1])
    left, right = maps[i - 1], maps[i]
    dom = universe[sets[i - 1]]
    mid = universe[sets[i]]
    composed = tuple(right[mid.index(left[j])] for j in range(len(dom)))
    return (sets[:i] + sets[i + 1:], points[:i] + points[i + 1:],
            maps[:i - 1] + (composed,) + maps[i + 1:])


def based_face(universe: list[tuple], cell: tuple, i: int) -> tuple:
    """The i-th face on the based presentation; dropping the first set
    pushes the point forward along the first map."""
    sets, point, maps = cell
    n = len(maps)
    if i == 0:
        new_point = maps[0][universe[sets[0]].index(point)]
        return (sets[1:], new_point, maps[1:])
    if i == n:
        return (sets[:-1], point, maps[:-1])
    left, right = maps[i - 1], maps[i]
    dom = universe[sets[i - 1]]
    mid = universe[sets[i]]
    composed = tuple(right[mid.index(left[j])] for j in range(len(dom)))
    return (sets[:i] + sets[i + 1:], point,
            maps[:i - 1] + (composed,) + maps[i + 1:])


@dataclass
class PointedNerveComparison:
    n: int
    pointed_counts: list[int]
    based_counts: list[int]
    bijective: bool
    natural: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pointed_counts": self.pointed_counts,
            "based_counts": self.based_counts,
            "bijective": self.bijective,
            "natural": self.natural,
        }


def compare_pointed_nerves(universe: list[tuple],
                           up_to: int) -> PointedNerveComparison:
    """Check that forgetting the non-initial points is a levelwise bijection
    commuting with all face maps."""
    pointed = [pointed_nerve_level(universe, n) for n in range(up_to + 1)]
    based = [based_nerve_level(universe, n) for n in range(up_to + 1)]
    bij = True
    for n in range(up_to + 1):
        fwd = [pointed_to_based(c) for c in pointed[n]]
        if len(set(fwd)) != len(fwd) or set(fwd) != set(based[n]):
            bij = False
        if any(based_to_pointed(universe, pointed_to_based(c)) != c
               for c in pointed[n]):
            bij = False
    natural = True
    for n in range(1, up_to + 1):
        for c in pointed[n]:
            for i in range(n + 1):
                lhs = pointed_to_based(pointed_face(universe, c, i))
                rhs = based_face(universe, pointed_to_based(c), i)
                if lhs != rhs:
                    natural = False
    return PointedNerveComparison(
        n=up_to,
        pointed_counts=[len(l) for l in pointed],
        based_counts=[len(l) for l in based],
        bijective=bij,
        natural=natural,
    )
