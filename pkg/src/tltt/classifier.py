"""A classifier for diagrams fibred over a base diagram on an inverse category.

Over a finite inverse category with objects of rank < n and a base diagram B,
the classifier is built by recursion on rank: a stage-0 element is trivial,
and a stage-(r+1) element extends a stage-r element X with a choice, for
every rank-r object i, every b in B_i, and every matching family m of the
interpretation of X at i whose boundary agrees (p applied componentwise to m
equals the boundary of b), of a value set drawn from a declared finite
universe.

``interpret`` turns such an element back into an honest diagram with a map
to B: the fibre over (b, m) is the chosen set, and the action evaluates the
stored matching family.  ``round_trip`` re-extracts the fibres of the
interpreted diagram and checks that interpreting those again gives a
levelwise bijective, natural correspondence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .categories import (
    CategoryError, DiagramMap, FinInvCat, SetDiagram, family_key,
    matching_object, reduced_coslice,
)


@dataclass(frozen=True)
class ClassifierElement:
    """One element of the classifier at stage n.

    ``choices[r]`` maps keys (object i of rank r, b in B_i, canonical
    matching family) to the chosen value set (a tuple).
    """

    n: int
    choices: tuple   # tuple of frozensets of (key, value-set) pairs


def _boundary(diagram: SetDiagram, c: FinInvCat, i, x) -> dict:
    """The matching family of x in diagram at i (all arrows out of i)."""
    cos_objects = [a for a in c.non_identity_arrows() if c.src[a] == i]
    return {f: diagram.action[f][x] for f in cos_objects}


def _push_family(fam: dict, components: dict, c: FinInvCat) -> dict:
    return {f: components[c.dst[f]][v] for f, v in fam.items()}


def classifier_elements(c: FinInvCat, n: int, base: SetDiagram,
                        universe: list[tuple]) -> list[ClassifierElement]:
    """All classifier elements at stage n over the given base diagram.

    ``base`` must live over the rank < n part of c; ``universe`` is the
    declared finite collection of allowed fibre sets.
    """
    if any(c.rank[o] >= n for o in base.cat.objects):
        raise CategoryError("base diagram has objects of rank >= stage")
    elements = [ClassifierElement(0, ())]
    for r in range(n):
        extended = []
        for x in elements:
            diagram, p = interpret(c, x, base)
            keys = []
            for i in base.cat.objects:
                if c.rank[i] != r:
                    continue
                families, _ = matching_object(diagram, i, ambient=c)
                for b in base.values[i]:
                    b_boundary = _boundary(base, c, i, b)
                    for m in families:
                        pushed = _push_family(m, p.components, c)
                        if family_key(pushed) == family_key(b_boundary):
                            keys.append((i, b, family_key(m)))
            for assignment in itertools.product(universe, repeat=len(keys)):
                stage = frozenset(zip(keys, assignment))
                extended.append(
                    ClassifierElement(x.n + 1, x.choices + (stage,)))
        elements = extended
    return elements


def interpret(c: FinInvCat, x: ClassifierElement, base: SetDiagram
              ) -> tuple[SetDiagram, DiagramMap]:
    """The diagram classified by x, with its projection to base.

    An element over i is a triple (b, canonical matching family, y) with y
    in the chosen fibre; the action along f out of i evaluates the family
    at f, and the projection returns b.
    """
    sub = base.cat
    values: dict = {}
    components: dict = {}
    stage_of = {}
    for r, stage in enumerate(x.choices):
        for (i, b, mkey), fibre in stage:
            stage_of.setdefault(i, {})[(b, mkey)] = fibre
    for i in sorted(sub.objects, key=lambda o: (c.rank[o], str(o))):
        elems = []
        comp = {}
        for (b, mkey), fibre in stage_of.get(i, {}).items():
            for y in fibre:
                e = (b, mkey, y)
                elems.append(e)
                comp[e] = b
        values[i] = tuple(elems)
        components[i] = comp
    action: dict = {}
    for a in sub.arrows():
        if a in sub.identity.values():
            action[a] = {e: e for e in values[sub.src[a]]}
        else:
            action[a] = {e: dict(e[1])[a] for e in values[sub.src[a]]}
    diagram = SetDiagram(sub, values, action)
    p = DiagramMap(diagram, base, components)
    return diagram, p


def extract(c: FinInvCat, n: int, diagram: SetDiagram, p: DiagramMap,
            base: SetDiagram) -> tuple[ClassifierElement, dict]:
    """Recover a classifier element from a diagram over base by taking
    literal fibres, together with the levelwise correspondence eta mapping
    each diagram element to its re-encoded triple."""
    eta: dict = {o: {} for o in base.cat.objects}
    stages = []
    for r in range(n):
        pairs = []
        for i in sorted(base.cat.objects, key=str):
            if c.rank[i] != r:
                continue
            grouped: dict = {}
            for v in diagram.values[i]:
                b = p.components[i][v]
                fam = _boundary(diagram, c, i, v)
                moved = family_key(_push_family(fam, eta, c))
                grouped.setdefault((b, moved), []).append(v)
            for (b, mkey), fibre in grouped.items():
                encoded = []
                for v in fibre:
                    e = (b, mkey, v)
                    eta[i][v] = e
                    encoded.append(e)
            for (b, mkey), fibre in grouped.items():
                pairs.append(((i, b, mkey),
                              tuple(eta[i][v][2] for v in fibre)))
        stages.append(frozenset(
            ((i, b, mkey), tuple(vs)) for (i, b, mkey), vs in pairs))
    return ClassifierElement(n, tuple(stages)), eta


@dataclass
class RoundTrip:
    ok: bool
    sizes: dict
    detail: str

    def to_json(self) -> dict:
        return {"ok": self.ok, "sizes": {str(k): v for k, v in self.sizes.items()},
                "detail": self.detail}


def round_trip(c: FinInvCat, x: ClassifierElement, base: SetDiagram
               ) -> RoundTrip:
    """Interpret x, re-extract fibres, interpret again, and compare: the
    correspondence must be a levelwise bijection commuting with the action
    and the projection."""
    diagram, p = interpret(c, x, base)
    diagram.validate()
    p.validate()
    element2, eta = extract(c, x.n, diagram, p, base)
    diagram2, p2 = interpret(c, element2, base)
    diagram2.validate()
    p2.validate()
    sizes = {o: (len(diagram.values[o]), len(diagram2.values[o]))
             for o in base.cat.objects}
    for o in base.cat.objects:
        image = [eta[o][v] for v in diagram.values[o]]
        if len(set(image)) != len(image) or set(image) != set(diagram2.values[o]):
            return RoundTrip(False, sizes, f"not a bijection at {o!r}")
        for v in diagram.values[o]:
            if p2.components[o][eta[o][v]] != p.components[o][v]:
                return RoundTrip(False, sizes, f"projection mismatch at {o!r}")
    for a in base.cat.arrows():
        s, d = base.cat.src[a], base.cat.dst[a]
        for v in diagram.values[s]:
            if eta[d][diagram.action[a][v]] != diagram2.action[a][eta[s][v]]:
                return RoundTrip(False, sizes, f"naturality fails at {a!r}")
    return RoundTrip(True, sizes, "levelwise bijection")
