"""Nerves, Segal checks, and pointed nerves."""

import itertools

import pytest

from tltt.fixtures import load_fixture
from tltt.nerve import (
    based_face, based_nerve_level, based_to_pointed, compare_pointed_nerves,
    nerve, pointed_face, pointed_nerve_level, pointed_to_based, segal_check,
    segal_report, spine_restriction, weak_spines,
)


@pytest.fixture(scope="module")
def poset():
    return load_fixture("poset012.json").category


@pytest.fixture(scope="module")
def poset_nerve(poset):
    return nerve(poset, 4)


@pytest.fixture(scope="module")
def non_segal():
    return load_fixture("non_segal.json").sset


class TestNerve:
    def test_level_sizes(self, poset_nerve):
        assert [len(l) for l in poset_nerve.levels] == [3, 6, 10, 15, 21]

    def test_levels_match_chain_count(self, poset, poset_nerve):
        """Level n is the sum over object tuples of the product of hom-set
        sizes along the chain."""
        for n in range(5):
            total = 0
            for xs in itertools.product(poset.objects, repeat=n + 1):
                size = 1
                for a, b in zip(xs, xs[1:]):
                    size *= len(poset.hom(a, b))
                total += size
            assert total == len(poset_nerve.levels[n])

    def test_simplicial_identities_hold(self, poset_nerve):
        poset_nerve.validate()

    def test_inner_face_composes(self, poset):
        n = nerve(poset, 2)
        cell = ("p0", (("le01"), ("le12")))
        assert n.faces[(2, 1)][cell] == ("p0", ("le02",))
        assert n.faces[(2, 0)][cell] == ("p1", ("le12",))
        assert n.faces[(2, 2)][cell] == ("p0", ("le01",))


class TestSegal:
    def test_poset_nerve_is_segal_up_to_4(self, poset_nerve):
        for verdict in segal_report(poset_nerve, 4):
            assert verdict.bijective, verdict.to_json()

    def test_weak_spines_chain_condition(self, poset_nerve):
        for (e1, e2) in weak_spines(poset_nerve, 2):
            assert poset_nerve.faces[(1, 0)][e1] == \
                poset_nerve.faces[(1, 1)][e2]

    def test_spine_restriction_lands_in_weak_spines(self, poset_nerve):
        spines = set(weak_spines(poset_nerve, 3))
        for cell in poset_nerve.levels[3]:
            assert spine_restriction(poset_nerve, 3, cell) in spines

    def test_non_segal_fixture_fails_at_two(self, non_segal):
        assert segal_check(non_segal, 1).bijective
        verdict = segal_check(non_segal, 2)
        assert not verdict.bijective and not verdict.injective

    def test_non_segal_fixture_is_a_valid_sset(self, non_segal):
        non_segal.validate()


UNIVERSES = [
    [()],
    [(), ("*",)],
    [("*",), ("a", "b")],
    [(), ("*",), ("a", "b")],
]


class TestPointedNerve:
    @pytest.mark.parametrize("universe", UNIVERSES)
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_counts_agree(self, universe, n):
        assert len(pointed_nerve_level(universe, n)) == \
            len(based_nerve_level(universe, n))

    @pytest.mark.parametrize("universe", UNIVERSES[:3])
    def test_bijection_and_naturality(self, universe):
        cmp = compare_pointed_nerves(universe, 2)
        assert cmp.bijective and cmp.natural

    def test_full_comparison_depth_three(self):
        cmp = compare_pointed_nerves([(), ("*",), ("a", "b")], 3)
        assert cmp.bijective and cmp.natural
        assert cmp.pointed_counts == cmp.based_counts

    def test_roundtrip_explicit(self):
        universe = [("*",), ("a", "b")]
        for cell in pointed_nerve_level(universe, 2):
            assert based_to_pointed(universe, pointed_to_based(cell)) == cell

    def test_faces_are_simplicial(self):
        """d_i d_j = d_{j-1} d_i for i < j on both presentations."""
        universe = [("*",), ("a", "b")]
        for cell in pointed_nerve_level(universe, 2):
            for j in range(3):
                for i in range(j):
                    lhs = pointed_face(universe,
                                       pointed_face(universe, cell, j), i)
                    rhs = pointed_face(universe,
                                       pointed_face(universe, cell, i), j - 1)
                    assert lhs == rhs
        for cell in based_nerve_level(universe, 2):
            for j in range(3):
                for i in range(j):
                    lhs = based_face(universe,
                                     based_face(universe, cell, j), i)
                    rhs = based_face(universe,
                                     based_face(universe, cell, i), j - 1)
                    assert lhs == rhs
