"""Finite categories, inverse categories, and finite-set-valued diagrams.

Everything is table-driven and validated exhaustively: category laws,
rank discipline (non-identity arrows strictly decrease rank), functoriality
of diagrams.  Limits are computed two independent ways: directly as natural
families, and recursively by peeling off a maximal-rank object and pulling
back along its matching object.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .simplex import FiniteSemiSimplicialSet, MonoMap, compose_mono, enumerate_homs


class CategoryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Finite categories
# ---------------------------------------------------------------------------

@dataclass
class FinCat:
    """A finite category given by explicit tables.

    ``homs[(x, y)]`` lists arrow ids from x to y (identities included);
    ``compose[(g, f)]`` is g after f.
    """

    objects: tuple
    homs: dict
    compose: dict
    identity: dict
    src: dict = field(default_factory=dict)
    dst: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.src:
            for (x, y), arrows in self.homs.items():
                for a in arrows:
                    self.src[a] = x
                    self.dst[a] = y

    def arrows(self) -> list:
        return [a for hom in self.homs.values() for a in hom]

    def non_identity_arrows(self) -> list:
        ids = set(self.identity.values())
        return [a for a in self.arrows() if a not in ids]

    def hom(self, x, y) -> tuple:
        return self.homs.get((x, y), ())

    def validate(self) -> None:
        seen = set()
        for (x, y), arrows in self.homs.items():
            if x not in self.objects or y not in self.objects:
                raise CategoryError(f"hom set over unknown objects ({x}, {y})")
            for a in arrows:
                if a in seen:
                    raise CategoryError(f"duplicate arrow id {a!r}")
                seen.add(a)
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or i not in self.hom(x, x):
                raise CategoryError(f"missing identity for object {x!r}")
        for f in self.arrows():
            for g in self.arrows():
                if self.dst[f] != self.src[g]:
                    if (g, f) in self.compose:
                        raise CategoryError(
                            f"compose defined for non-composable ({g!r}, {f!r})")
                    continue
                h = self.compose.get((g, f))
                if h is None:
                    raise CategoryError(f"compose missing for ({g!r}, {f!r})")
                if h not in self.hom(self.src[f], self.dst[g]):
                    raise CategoryError(
                        f"compose ({g!r}, {f!r}) = {h!r} lands outside "
                        f"hom({self.src[f]!r}, {self.dst[g]!r})")
        for f in self.arrows():
            if self.compose[(self.identity[self.dst[f]], f)] != f:
                raise CategoryError(f"left unit law fails at {f!r}")
            if self.compose[(f, self.identity[self.src[f]])] != f:
                raise CategoryError(f"right unit law fails at {f!r}")
        for f in self.arrows():
            for g in self.arrows():
                if self.dst[f] != self.src[g]:
                    continue
                for h in self.arrows():
                    if self.dst[g] != self.src[h]:
                        continue
                    lhs = self.compose[(h, self.compose[(g, f)])]
                    rhs = self.compose[(self.compose[(h, g)], f)]
                    if lhs != rhs:
                        raise CategoryError(
                            f"associativity fails on ({h!r}, {g!r}, {f!r})")


@dataclass
class FinInvCat(FinCat):
    """Finite inverse category: a rank function reflecting identities."""

    rank: dict = field(default_factory=dict)

    def validate(self) -> None:
        super().validate()
        for x in self.objects:
            if x not in self.rank:
                raise CategoryError(f"missing rank for object {x!r}")
            if self.rank[x] < 0:
                raise CategoryError(f"negative rank at {x!r}")
        ids = set(self.identity.values())
        for a in self.arrows():
            if a in ids:
                continue
            if self.rank[self.dst[a]] >= self.rank[self.src[a]]:
                raise CategoryError(
                    f"arrow {a!r}: {self.src[a]!r} -> {self.dst[a]!r} does "
                    f"not strictly decrease rank")

    def without_object(self, z) -> "FinInvCat":
        objs = tuple(o for o in self.objects if o != z)
        homs = {(x, y): arrows for (x, y), arrows in self.homs.items()
                if x != z and y != z}
        arrows = {a for hom in homs.values() for a in hom}
        compose = {k: v for k, v in self.compose.items()
                   if k[0] in arrows and k[1] in arrows}
        identity = {o: i for o, i in self.identity.items() if o != z}
        rank = {o: r for o, r in self.rank.items() if o != z}
        return FinInvCat(objs, homs, compose, identity, rank=rank)

    def truncate_below(self, n: int) -> "FinInvCat":
        """Full subcategory of objects of rank < n."""
        out = self
        for o in self.objects:
            if self.rank[o] >= n:
                out = out.without_object(o)
        return out


def reduced_coslice(c: FinInvCat, x) -> FinInvCat:
    """Non-identity arrows out of x, as an inverse category.

    Objects are the arrow ids f : x -> y (y determined); an arrow from f to
    g is (f, h) for h with h . f = g; rank is inherited from the codomain.
    The base object and base arrow are recoverable as ``c.dst[f]`` and the
    second component.
    """
    objs = tuple(sorted((a for a in c.non_identity_arrows()
                         if c.src[a] == x), key=str))
    homs: dict = {}
    compose: dict = {}
    identity: dict = {}
    rank = {f: c.rank[c.dst[f]] for f in objs}
    for f in objs:
        for g in objs:
            arrows = tuple((f, h) for h in c.hom(c.dst[f], c.dst[g])
                           if c.compose[(h, f)] == g)
            if arrows:
                homs[(f, g)] = arrows
        identity[f] = (f, c.identity[c.dst[f]])
    for (f, g), arrows in homs.items():
        for (_, h1) in arrows:
            for g2 in objs:
                for (_, h2) in homs.get((g, g2), ()):
                    compose[((g, h2), (f, h1))] = (f, c.compose[(h2, h1)])
    return FinInvCat(objs, homs, compose, identity, rank=rank)


# ---------------------------------------------------------------------------
# Set-valued diagrams
# ---------------------------------------------------------------------------

@dataclass
class SetDiagram:
    """A functor from a finite category to finite sets, as tables."""

    cat: FinCat
    values: dict          # object -> tuple of elements
    action: dict          # arrow id -> dict element -> element

    def validate(self) -> None:
        for o in self.cat.objects:
            if o not in self.values:
                raise CategoryError(f"missing value set at {o!r}")
        for a in self.cat.arrows():
            fn = self.action.get(a)
            if fn is None:
                raise CategoryError(f"missing function for arrow {a!r}")
            for x in self.values[self.cat.src[a]]:
                if x not in fn or fn[x] not in self.values[self.cat.dst[a]]:
                    raise CategoryError(
                        f"function for {a!r} not total into the target on {x!r}")
        for o in self.cat.objects:
            i = self.cat.identity[o]
            for x in self.values[o]:
                if self.action[i][x] != x:
                    raise CategoryError(f"identity at {o!r} acts nontrivially")
        for (g, f), h in self.cat.compose.items():
            for x in self.values[self.cat.src[f]]:
                if self.action[g][self.action[f][x]] != self.action[h][x]:
                    raise CategoryError(
                        f"functoriality fails: {g!r} . {f!r} != {h!r} on {x!r}")

    def map(self, arrow, x):
        return self.action[arrow][x]

    def restrict(self, sub: FinCat) -> "SetDiagram":
        return SetDiagram(
            sub,
            {o: self.values[o] for o in sub.objects},
            {a: self.action[a] for a in sub.arrows()})


def constant_diagram(c: FinCat, elements: tuple) -> SetDiagram:
    ident = {x: x for x in elements}
    return SetDiagram(c, {o: tuple(elements) for o in c.objects},
                      {a: dict(ident) for a in c.arrows()})


def product_diagram(f: SetDiagram, g: SetDiagram) -> SetDiagram:
    c = f.cat
    values = {o: tuple(itertools.product(f.values[o], g.values[o]))
              for o in c.objects}
    action = {}
    for a in c.arrows():
        action[a] = {(u, v): (f.action[a][u], g.action[a][v])
                     for (u, v) in values[c.src[a]]}
    return SetDiagram(c, values, action)


def representable(c: FinCat, d) -> SetDiagram:
    """The covariant representable y_d = Hom(d, -)."""
    values = {o: tuple(c.hom(d, o)) for o in c.objects}
    action = {}
    for a in c.arrows():
        action[a] = {g: c.compose[(a, g)] for g in values[c.src[a]]}
    return SetDiagram(c, values, action)


# ---------------------------------------------------------------------------
# Limits and matching objects
# ---------------------------------------------------------------------------

def _object_order(c: FinCat) -> list:
    if isinstance(c, FinInvCat):
        return sorted(c.objects, key=lambda o: (-c.rank[o], str(o)))
    return list(c.objects)


def limit_direct(x: SetDiagram) -> list[dict]:
    """All natural families (c_y) with X(f)(c_y) = c_y' for every arrow."""
    c = x.cat
    order = _object_order(c)
    results: list[dict] = []
    assign: dict = {}

    def ok(o) -> bool:
        for a in c.arrows():
            s, d = c.src[a], c.dst[a]
            if s in assign and d in assign:
                if x.action[a][assign[s]] != assign[d]:
                    return False
        return True

    def backtrack(i: int):
        if i == len(order):
            results.append(dict(assign))
            return
        o = order[i]
        for v in x.values[o]:
            assign[o] = v
            if ok(o):
                backtrack(i + 1)
            del assign[o]

    backtrack(0)
    return results


def family_key(fam: dict):
    return frozenset(fam.items())


def matching_object(x: SetDiagram, z, ambient: Optional[FinInvCat] = None
                    ) -> tuple[list[dict], dict]:
    """Matching object at z: the limit of X over the reduced coslice of z.

    Returns the matching families (dicts keyed by coslice objects, i.e.
    non-identity arrows out of z) and the canonical projection from X_z
    (as a dict X_z-element -> family); when ``ambient`` is given the coslice
    is taken there (used when z itself lies outside X's base).
    """
    c = ambient or x.cat
    cos = reduced_coslice(c, z)
    values = {f: x.values[c.dst[f]] for f in cos.objects}
    action = {}
    for (f, h) in cos.arrows():
        action[(f, h)] = x.action[h] if h not in c.identity.values() \
            else {v: v for v in values[f]}
    diagram = SetDiagram(cos, values, action)
    families = limit_direct(diagram)
    projection = {}
    if z in x.values:
        for v in x.values[z]:
            projection[v] = {f: x.action[f][v] for f in cos.objects}
    return families, projection


def limit_recursive(x: SetDiagram) -> list[dict]:
    """Limit by recursion on rank: remove a maximal-rank object z and pull
    back the remaining limit against X_z over the matching object at z."""
    c = x.cat
    if not isinstance(c, FinInvCat):
        raise CategoryError("recursive limits need an inverse category")
    if not c.objects:
        return [{}]
    top = max(c.rank[o] for o in c.objects)
    z = min((o for o in c.objects if c.rank[o] == top), key=str)
    rest = c.without_object(z)
    sub = limit_recursive(x.restrict(rest))
    families, projection = matching_object(x, z)
    cos_objects = sorted((a for a in c.non_identity_arrows()
                          if c.src[a] == z), key=str)
    out = []
    for fam in sub:
        induced = {f: fam[c.dst[f]] for f in cos_objects}
        key = family_key(induced)
        for v in x.values[z]:
            if family_key(projection[v]) == key:
                full = dict(fam)
                full[z] = v
                out.append(full)
    return out


# ---------------------------------------------------------------------------
# Natural transformations and exponentials
# ---------------------------------------------------------------------------

def diagram_nat_transforms(f: SetDiagram, g: SetDiagram) -> list[dict]:
    """All natural transformations f -> g over the same base, brute force.

    A transformation is represented as a dict (object, element) -> element.
    """
    c = f.cat
    order = _object_order(c)
    cells = [(o, u) for o in order for u in f.values[o]]
    results: list[dict] = []
    assign: dict = {}

    def consistent() -> bool:
        for a in c.arrows():
            s, d = c.src[a], c.dst[a]
            for u in f.values[s]:
                ks, kd = (s, u), (d, f.action[a][u])
                if ks in assign and kd in assign:
                    if g.action[a][assign[ks]] != assign[kd]:
                        return False
        return True

    def backtrack(i: int):
        if i == len(cells):
            results.append(dict(assign))
            return
        o, u = cells[i]
        for v in g.values[o]:
            assign[(o, u)] = v
            if consistent():
                backtrack(i + 1)
            del assign[(o, u)]

    backtrack(0)
    return results


def nat_key(t: dict):
    return frozenset(t.items())


def exponential_diagram(f: SetDiagram, g: SetDiagram) -> SetDiagram:
    """[F, G](d) = Nat(F x y_d, G), with action by precomposition."""
    c = f.cat
    values = {}
    for d in c.objects:
        nats = diagram_nat_transforms(product_diagram(f, representable(c, d)), g)
        values[d] = tuple(sorted((nat_key(t) for t in nats), key=str))
    action = {}
    for a in c.arrows():
        d, d2 = c.src[a], c.dst[a]
        fn = {}
        for alpha in values[d]:
            table = dict(alpha)
            moved = {}
            for o in c.objects:
                for u in f.values[o]:
                    for h in c.hom(d2, o):
                        moved[(o, (u, h))] = table[(o, (u, c.compose[(h, a)]))]
            fn[alpha] = nat_key(moved)
        action[a] = fn
    return SetDiagram(c, values, action)


# ---------------------------------------------------------------------------
# Maps of diagrams and pullbacks
# ---------------------------------------------------------------------------

@dataclass
class DiagramMap:
    """A natural transformation between diagrams over the same base."""

    source: SetDiagram
    target: SetDiagram
    components: dict      # object -> dict element -> element

    def validate(self) -> None:
        c = self.source.cat
        for o in c.objects:
            comp = self.components.get(o)
            if comp is None:
                raise CategoryError(f"missing component at {o!r}")
            for v in self.source.values[o]:
                if comp[v] not in self.target.values[o]:
                    raise CategoryError(f"component at {o!r} leaves the target")
        for a in c.arrows():
            s, d = c.src[a], c.dst[a]
            for v in self.source.values[s]:
                lhs = self.components[d][self.source.action[a][v]]
                rhs = self.target.action[a][self.components[s][v]]
                if lhs != rhs:
                    raise CategoryError(f"naturality fails at {a!r} on {v!r}")


def pullback_diagram(p: DiagramMap, q: DiagramMap
                     ) -> tuple[SetDiagram, DiagramMap, DiagramMap]:
    """Levelwise pullback of p : X -> Z and q : Y -> Z."""
    if p.target is not q.target and p.target.values != q.target.values:
        raise CategoryError("pullback needs a common target")
    c = p.source.cat
    x, y = p.source, q.source
    values = {o: tuple((u, v)
                       for u in x.values[o] for v in y.values[o]
                       if p.components[o][u] == q.components[o][v])
              for o in c.objects}
    action = {}
    for a in c.arrows():
        action[a] = {(u, v): (x.action[a][u], y.action[a][v])
                     for (u, v) in values[c.src[a]]}
    w = SetDiagram(c, values, action)
    pr1 = DiagramMap(w, x, {o: {uv: uv[0] for uv in values[o]}
                            for o in c.objects})
    pr2 = DiagramMap(w, y, {o: {uv: uv[1] for uv in values[o]}
                            for o in c.objects})
    return w, pr1, pr2


# ---------------------------------------------------------------------------
# The semi-simplex base category and the bridge from simplicial subsets
# ---------------------------------------------------------------------------

def semisimplex_category(n: int) -> FinInvCat:
    """The opposite semi-simplex category, truncated at rank <= n.

    Objects are 0..n (object k standing for [k]); an arrow k -> j is a
    strictly increasing map [j] -> [k], so ranks strictly decrease.
    """
    objects = tuple(range(n + 1))
    homs: dict = {}
    identity = {}
    for k in objects:
        for j in objects:
            if j > k:
                continue
            arrows = tuple(("m", k, m.image) for m in enumerate_homs(k, j))
            if arrows:
                homs[(k, j)] = arrows
        identity[k] = ("m", k, tuple(range(k + 1)))
    compose = {}
    for (k, j), arrows in homs.items():
        for a in arrows:
            fa = MonoMap(k, a[2])
            for (j2, i), arrows2 in homs.items():
                if j2 != j:
                    continue
                for b in arrows2:
                    fb = MonoMap(j, b[2])
                    comp = compose_mono(fa, fb)
                    compose[(b, a)] = ("m", k, comp.image)
    rank = {k: k for k in objects}
    return FinInvCat(objects, homs, compose, identity, rank=rank)


def sset_to_diagram(x: FiniteSemiSimplicialSet,
                    c: Optional[FinInvCat] = None) -> SetDiagram:
    c = c or semisimplex_category(x.truncation)
    values = {k: tuple(x.levels[k]) for k in c.objects}
    action = {}
    for a in c.arrows():
        _, k, image = a
        m = MonoMap(k, image)
        action[a] = {v: x.act(m, v) for v in values[k]}
    return SetDiagram(c, values, action)


# ---------------------------------------------------------------------------
# Random instances (free path categories on rank-decreasing generators)
# ---------------------------------------------------------------------------

def random_inverse_category(rng: random.Random, max_objects: int = 5,
                            max_rank: int = 3, max_hom: int = 3) -> FinInvCat:
    """A random finite inverse category: the free category on a random
    rank-decreasing generator graph, resampled until hom-sets are small."""
    for _ in range(1000):
        n = rng.randint(1, max_objects)
        objects = tuple(f"o{i}" for i in range(n))
        rank = {o: rng.randint(0, max_rank) for o in objects}
        gens = []
        for x in objects:
            for y in objects:
                if rank[x] > rank[y]:
                    for idx in range(rng.randint(0, 2)):
                        gens.append((f"g{len(gens)}", x, y))
        cat = _free_category(objects, rank, gens)
        if cat is not None and all(len(v) <= max_hom for v in cat.homs.values()):
            return cat
    raise RuntimeError("failed to sample a small inverse category")


def _free_category(objects, rank, gens) -> Optional[FinInvCat]:
    by_src: dict = {}
    for g in gens:
        by_src.setdefault(g[1], []).append(g)
    paths: dict = {}      # (x, y) -> list of tuples of generator ids
    for x in objects:
        stack = [(x, ())]
        while stack:
            y, path = stack.pop()
            if path:
                paths.setdefault((x, y), []).append(path)
                if len(paths[(x, y)]) > 64:
                    return None
            for (gid, s, d) in by_src.get(y, []):
                stack.append((d, path + (gid,)))
    homs: dict = {}
    identity = {}
    for x in objects:
        identity[x] = ("id", x)
    for x in objects:
        for y in objects:
            arrows = tuple(("p", p) for p in sorted(paths.get((x, y), [])))
            if x == y:
                arrows = (identity[x],) + arrows
            if arrows:
                homs[(x, y)] = arrows
    compose = {}
    for (x, y), arrows in homs.items():
        for f in arrows:
            for (y2, z), arrows2 in homs.items():
                if y2 != y:
                    continue
                for g in arrows2:
                    compose[(g, f)] = _concat(f, g, x, z, identity)
    return FinInvCat(tuple(objects), homs, compose, identity, rank=dict(rank))


def _concat(f, g, x, z, identity):
    fp = f[1] if f[0] == "p" else ()
    gp = g[1] if g[0] == "p" else ()
    path = fp + gp
    if not path:
        return identity[x]
    return ("p", path)


def random_diagram(rng: random.Random, c: FinInvCat,
                   max_card: int = 4) -> SetDiagram:
    """A random diagram: values per object, generator actions random, and
    the action on paths forced by functoriality."""
    values = {o: tuple(range(rng.randint(0, max_card))) for o in c.objects}
    # an arrow into an empty value set forces the source empty
    changed = True
    while changed:
        changed = False
        for a in c.non_identity_arrows():
            if not values[c.dst[a]] and values[c.src[a]]:
                values[c.src[a]] = ()
                changed = True
    gen_action: dict = {}
    action: dict = {}
    for a in c.arrows():
        if a[0] == "id":
            action[a] = {v: v for v in values[c.src[a]]}
            continue
        path = a[1]
        fn = {}
        for v in values[c.src[a]]:
            cur, pos = v, c.src[a]
            for gid in path:
                key = (gid, pos)
                tbl = gen_action.setdefault(key, {})
                nxt_obj = _gen_target(c, pos, gid)
                if cur not in tbl:
                    tbl[cur] = rng.choice(values[nxt_obj])
                cur = tbl[cur]
                pos = nxt_obj
            fn[v] = cur
        action[a] = fn
    return SetDiagram(c, values, action)


def _gen_target(c: FinInvCat, pos, gid):
    for (x, y), arrows in c.homs.items():
        if x == pos and ("p", (gid,)) in arrows:
            return y
    raise CategoryError(f"generator {gid!r} not found at {pos!r}")
