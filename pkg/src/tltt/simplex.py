"""Exact combinatorics of the semi-simplex category and Yoneda subfunctors.

Objects are ``[n] = {0..n}``; morphisms ``[k] -> [n]`` are strictly
increasing functions, stored as their image, a (k+1)-subset of ``{0..n}``.
Subfunctors of the representable on ``[n]`` are given levelwise; sieves are
downward-closed subset families of the powerset of ``{0..n}`` and realize to
subfunctors.  The central algorithm factors the spine-into-horn inclusion as
a chain of horn pushout steps, each removing a maximal set ``S`` together
with ``S\\{h}`` from the current sieve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional

MAX_DIM = 12     # sieves are stored extensionally; guard the exponent


class DimensionError(ValueError):
    pass


def _check_dim(n: int):
    if n < 0:
        raise DimensionError(f"dimension must be non-negative, got {n}")
    if n > MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds the cap {MAX_DIM}")


# ---------------------------------------------------------------------------
# Monotone maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class MonoMap:
    """A strictly increasing map [k] -> [n], stored as its image."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        if not all(a < b for a, b in zip(self.image, self.image[1:])):
            raise ValueError(f"image not strictly increasing: {self.image}")
        if self.image and not (0 <= self.image[0] and self.image[-1] <= self.n):
            raise ValueError(f"image {self.image} out of range for [{self.n}]")

    @property
    def k(self) -> int:
        return len(self.image) - 1

    @property
    def is_identity(self) -> bool:
        return self.image == tuple(range(self.n + 1))

    def __call__(self, i: int) -> int:
        return self.image[i]


def identity_map(n: int) -> MonoMap:
    return MonoMap(n, tuple(range(n + 1)))


def coface(n: int, j: int) -> MonoMap:
    """The elementary coface [n-1] -> [n] skipping j."""
    if not 0 <= j <= n:
        raise ValueError(f"coface index {j} out of range for [{n}]")
    return MonoMap(n, tuple(i for i in range(n + 1) if i != j))


def enumerate_homs(n: int, k: int) -> list[MonoMap]:
    """All maps [k] -> [n] in lexicographic order; count C(n+1, k+1)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return [MonoMap(n, c) for c in itertools.combinations(range(n + 1), k + 1)]


def compose_mono(g: MonoMap, f: MonoMap) -> MonoMap:
    """g after f, for g : [m] -> [n] and f : [k] -> [m]."""
    if f.n != g.k:
        raise ValueError(f"arity mismatch: composing [{f.n}] target "
                         f"with [{g.k}] source")
    return MonoMap(g.n, tuple(g(f(i)) for i in range(f.k + 1)))


# ---------------------------------------------------------------------------
# Simplicial subsets of the representable on [n]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimplicialSubset:
    """A subfunctor of the representable on [n], given levelwise."""

    n: int
    levels: tuple[frozenset, ...]      # index k holds maps [k] -> [n]

    def __post_init__(self):
        _check_dim(self.n)
        if len(self.levels) != self.n + 1:
            raise ValueError("levels must cover 0..n")
        for k, lvl in enumerate(self.levels):
            for g in lvl:
                if g.k != k or g.n != self.n:
                    raise ValueError(f"map {g} misplaced at level {k}")
        # closure under the elementary cofaces generates all precompositions
        for k in range(1, self.n + 1):
            for g in self.levels[k]:
                for j in range(k + 1):
                    if compose_mono(g, coface(k, j)) not in self.levels[k - 1]:
                        raise ValueError(
                            f"not closed under precomposition at level {k}: "
                            f"{g} missing face {j}")

    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(l) for l in self.levels)

    def __le__(self, other: "SimplicialSubset") -> bool:
        return (self.n == other.n
                and all(a <= b for a, b in zip(self.levels, other.levels)))

    def contains(self, g: MonoMap) -> bool:
        return g in self.levels[g.k]


def full_subfunctor(n: int) -> SimplicialSubset:
    _check_dim(n)
    return SimplicialSubset(
        n, tuple(frozenset(enumerate_homs(n, k)) for k in range(n + 1)))


def spine_subfunctor(n: int) -> SimplicialSubset:
    """Vertices plus the adjacent edges (i, i+1); nothing above level 1."""
    _check_dim(n)
    levels = [frozenset(enumerate_homs(n, 0))]
    if n >= 1:
        levels.append(frozenset(MonoMap(n, (i, i + 1)) for i in range(n)))
    levels.extend(frozenset() for _ in range(n - 1))
    return SimplicialSubset(n, tuple(levels))


def horn_subfunctor(n: int, j: int) -> SimplicialSubset:
    """All faces except the identity and the j-th face."""
    _check_dim(n)
    if n < 1 or not 0 <= j <= n:
        raise ValueError(f"horn index {j} out of range for [{n}]")
    omit = {identity_map(n), coface(n, j)}
    return SimplicialSubset(
        n, tuple(frozenset(g for g in enumerate_homs(n, k) if g not in omit)
                 for k in range(n + 1)))


def boundary_subfunctor(n: int) -> SimplicialSubset:
    _check_dim(n)
    return SimplicialSubset(
        n, tuple(frozenset(g for g in enumerate_homs(n, k)
                           if not g.is_identity)
                 for k in range(n + 1)))


# ---------------------------------------------------------------------------
# Sieves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sieve:
    """A downward-closed family of subsets of {0..n}."""

    n: int
    members: frozenset    # of frozenset[int]

    def __post_init__(self):
        _check_dim(self.n)
        universe = frozenset(range(self.n + 1))
        for s in self.members:
            if not s <= universe:
                raise ValueError(f"member {sorted(s)} not a subset of [0,{self.n}]")
        self._check_closed()

    def _check_closed(self):
        for s in self.members:
            for x in s:
                if s - {x} not in self.members:
                    raise ValueError(
                        f"not downward closed: {sorted(s)} present but "
                        f"{sorted(s - {x})} missing")

    def maximal(self) -> set:
        return {s for s in self.members
                if not any(s < t for t in self.members)}

    def realize(self) -> SimplicialSubset:
        levels = []
        for k in range(self.n + 1):
            levels.append(frozenset(
                g for g in enumerate_homs(self.n, k)
                if any(set(g.image) <= s for s in self.members)))
        return SimplicialSubset(self.n, tuple(levels))

    def __le__(self, other: "Sieve") -> bool:
        return self.n == other.n and self.members <= other.members


def _downward_close(n: int, gens: Iterable[frozenset]) -> Sieve:
    members = set()
    for g in gens:
        for r in range(len(g) + 1):
            members.update(frozenset(c) for c in itertools.combinations(sorted(g), r))
    return Sieve(n, frozenset(members))


def powerset_sieve(n: int) -> Sieve:
    _check_dim(n)
    return _downward_close(n, [frozenset(range(n + 1))])


def principal_sieve(n: int, s: Iterable[int]) -> Sieve:
    return _downward_close(n, [frozenset(s)])


def generated_sieve(n: int, gens: Iterable[Iterable[int]]) -> Sieve:
    return _downward_close(n, [frozenset(g) for g in gens])


def zigzag_sieve(n: int) -> Sieve:
    """The smallest sieve containing every {i, i+1}; realizes the spine."""
    _check_dim(n)
    gens = [frozenset({i, i + 1}) for i in range(n)] or [frozenset()]
    sv = _downward_close(n, gens)
    if n == 0:
        sv = Sieve(n, sv.members | {frozenset({0})})
    return sv


def horn_sieve(n: int, k: int) -> Sieve:
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"horn index {k} out of range for [{n}]")
    return horn_remove(powerset_sieve(n), frozenset(range(n + 1)), k)


def horn_remove(x: Sieve, s: Iterable[int], h: int) -> Sieve:
    """Remove S and S\\{h} from the sieve; a pushout of a horn inclusion."""
    s = frozenset(s)
    if s not in x.members:
        raise ValueError(f"{sorted(s)} is not a member of the sieve")
    if any(s < t for t in x.members):
        raise ValueError(f"{sorted(s)} is not maximal in the sieve")
    if h not in s:
        raise ValueError(f"{h} is not an element of {sorted(s)}")
    remaining = x.members - {s, s - {h}}
    if any(s - {h} < t for t in remaining):
        raise ValueError(
            f"removing {sorted(s)} at {h} breaks downward closure: "
            f"{sorted(s - {h})} still below another member")
    return Sieve(x.n, remaining)


# ---------------------------------------------------------------------------
# The spine-through-horn factorization
# ---------------------------------------------------------------------------

def _internal(h: int, s: frozenset) -> bool:
    return h in s and min(s) < h < max(s)


@dataclass(frozen=True)
class HornStep:
    """One horn pushout: remove S and S\\{h}."""

    s: frozenset
    h: int

    @property
    def inner(self) -> bool:
        return _internal(self.h, self.s)

    def to_json(self) -> dict:
        return {"S": sorted(self.s), "h": self.h, "inner": self.inner}


@dataclass
class Factorization:
    """A chain of horn pushouts from the horn sieve down to the zigzag.

    ``length`` is the number of removed subsets (simplices), which is twice
    the number of pushout steps: every step removes exactly two sets.
    """

    n: int
    k: int
    start: Sieve
    end: Sieve
    steps: list[HornStep]

    @property
    def length(self) -> int:
        return 2 * len(self.steps)

    def sieves(self) -> list[Sieve]:
        """The chain of sieves, validating every step along the way."""
        chain = [self.start]
        for st in self.steps:
            chain.append(horn_remove(chain[-1], st.s, st.h))
        return chain

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "length": self.length,
                "steps": [s.to_json() for s in self.steps]}


class UnsupportedHorn(ValueError):
    """The spine is not contained in this horn, so no factorization exists."""

    def __init__(self, n: int, k: int, witness: frozenset):
        super().__init__(
            f"spine({n}) is not contained in horn({n},{k}): the spine cell "
            f"{sorted(witness)} is missing from the horn")
        self.n = n
        self.k = k
        self.witness = witness


def _cosieve_order(n: int, j: int, exclude: set) -> list[frozenset]:
    """Members of {S : j internal to S} by decreasing cardinality, then lex."""
    out = [frozenset(c)
           for r in range(n + 1, 2, -1)
           for c in itertools.combinations(range(n + 1), r)
           if _internal(j, frozenset(c))]
    return [s for s in sorted(out, key=lambda s: (-len(s), tuple(sorted(s))))
            if s not in exclude]


def _interval_steps(a: int, b: int) -> list[HornStep]:
    """Steps reducing the principal sieve on [a,b] to its zigzag part."""
    if b - a <= 1:
        return []
    j = a + 1
    steps = [HornStep(s, j)
             for s in _cosieve_order_interval(a, b, j)]
    return steps + _interval_steps(a, j) + _interval_steps(j, b)


def _cosieve_order_interval(a: int, b: int, j: int) -> list[frozenset]:
    out = [frozenset(c)
           for r in range(b - a + 1, 2, -1)
           for c in itertools.combinations(range(a, b + 1), r)
           if _internal(j, frozenset(c))]
    return sorted(out, key=lambda s: (-len(s), tuple(sorted(s))))


def factor_spine_to_horn(n: int, k: int) -> Factorization:
    """Factor the spine-into-horn inclusion through horn pushout steps.

    For an inner horn (0 < k < n) all steps are inner.  For k in {0, n}
    (with n >= 3) the chain follows the inner construction at the pivot
    n-1 (resp. 1), with the first step swapped so that it matches the
    outer horn.  For n = 1 and for the outer horns of n = 2 the spine is
    not contained in the horn at all and UnsupportedHorn is raised.
    """
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"horn index {k} out of range for [{n}]")
    start = horn_sieve(n, k)
    end = zigzag_sieve(n)
    if not end <= start:
        witness = min(end.members - start.members,
                      key=lambda s: tuple(sorted(s)))
        raise UnsupportedHorn(n, k, witness)
    full = frozenset(range(n + 1))
    if 0 < k < n:
        steps = [HornStep(s, k) for s in _cosieve_order(n, k, {full})]
        steps += _interval_steps(0, k) + _interval_steps(k, n)
    elif k == 0:
        j = n - 1
        steps = [HornStep(full - {j}, 0)]
        steps += [HornStep(s, j)
                  for s in _cosieve_order(n, j, {full, full - {0}})]
        steps += _interval_steps(0, j) + _interval_steps(j, n)
    else:   # k == n
        j = 1
        steps = [HornStep(full - {j}, n)]
        steps += [HornStep(s, j)
                  for s in _cosieve_order(n, j, {full, full - {n}})]
        steps += _interval_steps(0, j) + _interval_steps(j, n)
    fact = Factorization(n, k, start, end, steps)
    chain = fact.sieves()        # validates each step
    if chain[-1].members != end.members:
        raise AssertionError("factorization did not land on the zigzag sieve")
    return fact


# ---------------------------------------------------------------------------
# Finite semi-simplicial sets and natural transformations
# ---------------------------------------------------------------------------

@dataclass
class FiniteSemiSimplicialSet:
    """Truncated semi-simplicial set: finite levels plus face maps.

    ``faces[(m, i)]`` is the i-th face map X_m -> X_{m-1} (precomposition
    with the elementary coface skipping i).
    """

    levels: list[list]
    faces: dict[tuple[int, int], dict]

    @property
    def truncation(self) -> int:
        return len(self.levels) - 1

    def validate(self) -> None:
        for m in range(1, self.truncation + 1):
            for i in range(m + 1):
                fm = self.faces.get((m, i))
                if fm is None:
                    raise ValueError(f"missing face map ({m}, {i})")
                for x in self.levels[m]:
                    if fm[x] not in self.levels[m - 1]:
                        raise ValueError(f"face ({m},{i}) leaves level {m - 1}")
        # d_i . d_j = d_{j-1} . d_i  for i < j
        for m in range(2, self.truncation + 1):
            for j in range(m + 1):
                for i in range(j):
                    for x in self.levels[m]:
                        lhs = self.faces[(m - 1, i)][self.faces[(m, j)][x]]
                        rhs = self.faces[(m - 1, j - 1)][self.faces[(m, i)][x]]
                        if lhs != rhs:
                            raise ValueError(
                                f"simplicial identity fails at level {m}: "
                                f"d_{i} d_{j} != d_{j - 1} d_{i} on {x!r}")

    def act(self, f: MonoMap, x):
        """Restrict x in X_{f.n} along f : [k] -> [f.n]."""
        m = f.n
        missing = sorted(set(range(m + 1)) - set(f.image), reverse=True)
        for j in missing:
            x = self.faces[(m, j)][x]
            m -= 1
        return x

    @staticmethod
    def from_json(doc: dict) -> "FiniteSemiSimplicialSet":
        levels = [[_freeze(x) for x in lvl] for lvl in doc["levels"]]
        faces = {}
        for key, fn in doc["faces"].items():
            m_s, i_s = key.split(",")
            faces[(int(m_s), int(i_s))] = {
                _freeze(a): _freeze(b) for a, b in fn}
        out = FiniteSemiSimplicialSet(levels, faces)
        out.validate()
        return out


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


def nat_transforms(f: SimplicialSubset, x: FiniteSemiSimplicialSet) -> list[dict]:
    """All natural transformations from the subfunctor into X, brute force.

    A transformation assigns to every map g in level k of F an element of
    X_k, commuting with the elementary cofaces.
    """
    if x.truncation < f.n:
        raise ValueError(
            f"semi-simplicial set truncated at {x.truncation} cannot receive "
            f"a subfunctor of dimension {f.n}")
    cells = [(k, g) for k in range(f.n + 1) for g in sorted(f.levels[k])]
    results: list[dict] = []
    assign: dict = {}

    def backtrack(i: int):
        if i == len(cells):
            results.append(dict(assign))
            return
        k, g = cells[i]
        for val in x.levels[k]:
            ok = True
            for j in range(k + 1):
                if k == 0:
                    break
                face = compose_mono(g, coface(k, j))
                if assign[(k - 1, face)] != x.faces[(k, j)][val]:
                    ok = False
                    break
            if ok:
                assign[(k, g)] = val
                backtrack(i + 1)
                del assign[(k, g)]

    backtrack(0)
    return results


def yoneda_bijection(n: int, x: FiniteSemiSimplicialSet
                     ) -> tuple[list[dict], dict]:
    """Nat(full representable, X) with its bijection onto X_n."""
    nats = nat_transforms(full_subfunctor(n), x)
    mapping = {i: t[(n, identity_map(n))] for i, t in enumerate(nats)}
    return nats, mapping
