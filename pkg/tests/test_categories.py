"""Inverse categories, diagrams, limits two ways, exponentials, pullbacks."""

import random

import pytest

from tltt.categories import (
    CategoryError, DiagramMap, FinCat, FinInvCat, SetDiagram,
    constant_diagram, diagram_nat_transforms, exponential_diagram,
    family_key, limit_direct, limit_recursive, matching_object, nat_key,
    product_diagram, pullback_diagram, random_diagram,
    random_inverse_category, reduced_coslice, representable,
    semisimplex_category, sset_to_diagram,
)
from tltt.fixtures import load_fixture
from tltt.simplex import boundary_subfunctor, nat_transforms


@pytest.fixture(scope="module")
def cospan():
    fx = load_fixture("cospan.json")
    return fx.category, fx.diagrams["X"]


class TestValidation:
    def test_fixture_categories_validate(self, cospan):
        cospan[0].validate()

    def test_missing_compose_detected(self):
        cat = FinCat(("a",), {("a", "a"): (("id", "a"), "e")},
                     {}, {"a": ("id", "a")})
        with pytest.raises(CategoryError):
            cat.validate()

    def test_rank_violation_detected(self, cospan):
        cat, _ = cospan
        bad = FinInvCat(cat.objects, cat.homs, cat.compose, cat.identity,
                        rank={"a": 0, "b": 0, "c": 5})
        with pytest.raises(CategoryError):
            bad.validate()

    def test_functoriality_violation_detected(self, cospan):
        cat, x = cospan
        action = dict(x.action)
        action["f"] = {0: "*", 1: "*"}
        broken = dict(action)
        broken[("id", "a")] = {0: 1, 1: 0}
        with pytest.raises(CategoryError):
            SetDiagram(cat, x.values, broken).validate()

    def test_random_instances_validate(self):
        for seed in range(20):
            rng = random.Random(seed)
            cat = random_inverse_category(rng)
            cat.validate()
            random_diagram(rng, cat).validate()


class TestCoslice:
    def test_semisimplex_coslice_counts(self):
        c = semisimplex_category(2)
        cos = reduced_coslice(c, 2)
        # non-identity monos into [2]: 3 vertices + 3 edges
        assert len(cos.objects) == 6
        cos.validate()

    def test_coslice_is_inverse(self):
        for seed in range(10):
            rng = random.Random(seed)
            c = random_inverse_category(rng)
            for o in c.objects:
                reduced_coslice(c, o).validate()

    def test_coslice_forgetful_is_functorial(self):
        c = semisimplex_category(2)
        cos = reduced_coslice(c, 2)
        for (f, h) in cos.arrows():
            assert c.compose[(h, f)] in cos.objects or c.src[h] == c.dst[f]
        for ((g2, h2), (f1, h1)), (f, h) in cos.compose.items():
            assert h == c.compose[(h2, h1)]


class TestLimits:
    def test_cospan_limit_is_the_pullback(self, cospan):
        _, x = cospan
        fams = limit_direct(x)
        assert len(fams) == 4
        assert {family_key(f) for f in limit_recursive(x)} == \
            {family_key(f) for f in fams}

    def test_empty_category_limit_is_singleton(self):
        c = FinInvCat((), {}, {}, {}, rank={})
        d = SetDiagram(c, {}, {})
        assert limit_recursive(d) == [{}]
        assert limit_direct(d) == [{}]

    def test_empty_value_forces_empty_limit(self, cospan):
        cat, x = cospan
        values = dict(x.values)
        values["a"] = ()
        action = dict(x.action)
        action["f"] = {}
        action[("id", "a")] = {}
        d = SetDiagram(cat, values, action)
        assert limit_direct(d) == [] == limit_recursive(d)

    @pytest.mark.parametrize("seed", range(40))
    def test_two_oracles_agree(self, seed):
        rng = random.Random(seed)
        cat = random_inverse_category(rng)
        d = random_diagram(rng, cat)
        assert {family_key(f) for f in limit_direct(d)} == \
            {family_key(f) for f in limit_recursive(d)}


class TestMatchingObject:
    def test_matching_agrees_with_boundary_transforms(self):
        """On semi-simplex diagrams the matching object at [n] is the set of
        maps out of the boundary of the n-simplex."""
        from tltt.nerve import nerve
        fx = load_fixture("poset012.json")
        x = nerve(fx.category, 3)
        c = semisimplex_category(3)
        d = sset_to_diagram(x, c)
        for n in range(1, 4):
            fams, proj = matching_object(d, n, ambient=c)
            bnats = nat_transforms(boundary_subfunctor(n), x)
            assert len(fams) == len(bnats), n
            # the projection lands in the matching families
            keys = {family_key(f) for f in fams}
            for v in d.values[n]:
                assert family_key(proj[v]) in keys

    def test_matching_at_rank_zero_is_singleton(self, cospan):
        _, x = cospan
        fams, _ = matching_object(x, "c")
        assert fams == [{}]


class TestNatAndExponential:
    def test_representable_is_yoneda(self):
        c = semisimplex_category(2)
        y2 = representable(c, 2)
        y2.validate()
        d = constant_diagram(c, ("u", "v"))
        nats = diagram_nat_transforms(y2, d)
        # Yoneda: Nat(y_2, D) = D_2
        assert len(nats) == 2

    def test_product_projections_natural(self, cospan):
        cat, x = cospan
        p = product_diagram(x, x)
        p.validate()
        pr = DiagramMap(p, x, {o: {uv: uv[0] for uv in p.values[o]}
                               for o in cat.objects})
        pr.validate()

    @pytest.mark.parametrize("seed", range(15))
    def test_exponential_limit_is_nat(self, seed):
        rng = random.Random(seed)
        cat = random_inverse_category(rng, max_objects=3)
        f = random_diagram(rng, cat, max_card=2)
        g = random_diagram(rng, cat, max_card=2)
        exp = exponential_diagram(f, g)
        exp.validate()
        lim = limit_direct(exp)
        nats = diagram_nat_transforms(f, g)
        assert len(lim) == len(nats), seed
        # identity components give the explicit bijection
        image = set()
        for fam in lim:
            out = {}
            for d in cat.objects:
                table = dict(fam[d])
                for u in f.values[d]:
                    out[(d, u)] = table[(d, (u, cat.identity[d]))]
            image.add(nat_key(out))
        assert image == {nat_key(t) for t in nats}
        assert len(image) == len(lim)


class TestPullback:
    @pytest.mark.parametrize("seed", range(10))
    def test_pullback_is_a_diagram_with_natural_projections(self, seed):
        rng = random.Random(seed)
        cat = random_inverse_category(rng, max_objects=4)
        z = random_diagram(rng, cat, max_card=3)
        x = random_diagram(rng, cat, max_card=3)
        y = random_diagram(rng, cat, max_card=3)
        p = _random_map(rng, x, z, cat)
        q = _random_map(rng, y, z, cat)
        if p is None or q is None:
            return
        w, pr1, pr2 = pullback_diagram(p, q)
        w.validate()
        pr1.validate()
        pr2.validate()
        # universal property at set level: elements of W_o are exactly the
        # compatible pairs
        for o in cat.objects:
            expect = {(u, v) for u in x.values[o] for v in y.values[o]
                      if p.components[o][u] == q.components[o][v]}
            assert set(w.values[o]) == expect

    def test_pullback_matching_objects_commute(self):
        """The matching object of a pullback is the pullback of matching
        objects, levelwise."""
        rng = random.Random(7)
        cat = random_inverse_category(rng, max_objects=4)
        z = random_diagram(rng, cat, max_card=3)
        x = random_diagram(rng, cat, max_card=3)
        y = random_diagram(rng, cat, max_card=3)
        p = _random_map(rng, x, z, cat)
        q = _random_map(rng, y, z, cat)
        if p is None or q is None:
            pytest.skip("no maps exist for this seed")
        w, _, _ = pullback_diagram(p, q)
        for o in cat.objects:
            wf, _ = matching_object(w, o)
            xf, _ = matching_object(x, o)
            yf, _ = matching_object(y, o)
            zf, _ = matching_object(z, o)
            # matching families of W are pairs of matching families of X, Y
            # agreeing in Z
            paired = set()
            for fam in wf:
                fx = {k: v[0] for k, v in fam.items()}
                fy = {k: v[1] for k, v in fam.items()}
                paired.add((family_key(fx), family_key(fy)))
            xkeys = {family_key(f) for f in xf}
            ykeys = {family_key(f) for f in yf}
            for a, b in paired:
                assert a in xkeys and b in ykeys


def _random_map(rng, src, dst, cat):
    """A random natural transformation src -> dst, or None if none exists."""
    nats = diagram_nat_transforms(src, dst)
    if not nats:
        return None
    t = rng.choice(nats)
    comps = {o: {u: t[(o, u)] for u in src.values[o]} for o in cat.objects}
    m = DiagramMap(src, dst, comps)
    m.validate()
    return m


class TestSemisimplexBridge:
    def test_category_validates_up_to_3(self):
        for n in range(4):
            semisimplex_category(n).validate()

    def test_diagram_from_sset_is_functorial(self):
        from tltt.nerve import nerve
        fx = load_fixture("poset012.json")
        sset_to_diagram(nerve(fx.category, 2)).validate()
