"""The truncated diagram classifier and its interpretation round trip."""

import random

import pytest

from tltt.categories import (
    constant_diagram, random_diagram, random_inverse_category,
    semisimplex_category,
)
from tltt.classifier import (
    ClassifierElement, classifier_elements, interpret, round_trip,
)

UNIVERSE = [(), ("*",)]


def _setup(n, universe=UNIVERSE, base_values=("*",)):
    ambient = semisimplex_category(max(n, 1))
    base = constant_diagram(ambient.truncate_below(n), base_values)
    return ambient, base, classifier_elements(ambient, n, base, universe)


class TestEnumeration:
    def test_stage_zero_is_singleton(self):
        _, _, els = _setup(0)
        assert els == [ClassifierElement(0, ())]

    def test_stage_one_has_two_elements(self):
        _, _, els = _setup(1)
        assert len(els) == 2

    def test_stage_two_has_three_elements(self):
        # over the empty vertex set there are no edge keys; over the
        # singleton vertex set there is one, valued in the universe
        _, _, els = _setup(2)
        assert len(els) == 3

    def test_stage_two_larger_universe(self):
        _, _, els = _setup(2, universe=[(), ("*",), ("a", "b")])
        # 1 (empty) + 3 (singleton vertex: 3 choices ^ 1 key)
        # + 81 (two vertices: 3 choices ^ 4 ordered pairs)
        assert len(els) == 85

    def test_interpret_of_empty_element_is_empty(self):
        ambient, base, els = _setup(1)
        empty = next(e for e in els
                     if all(not fib for _, fib in e.choices[0]))
        d, p = interpret(ambient, empty, base)
        assert all(len(v) == 0 for v in d.values.values())


class TestInterpretation:
    def test_interpretations_validate(self):
        ambient, base, els = _setup(2)
        for x in els:
            d, p = interpret(ambient, x, base)
            d.validate()
            p.validate()

    def test_level_sets_are_fibre_sums(self):
        ambient, base, els = _setup(2)
        for x in els:
            d, _ = interpret(ambient, x, base)
            for r, stage in enumerate(x.choices):
                for i in base.cat.objects:
                    if ambient.rank[i] != r:
                        continue
                    total = sum(len(fib) for (j, b, m), fib in stage
                                if j == i)
                    assert total == len(d.values[i])


class TestRoundTrip:
    def test_round_trip_exhaustive_stage_two(self):
        ambient, base, els = _setup(2)
        assert els
        for x in els:
            rt = round_trip(ambient, x, base)
            assert rt.ok, rt.to_json()

    def test_round_trip_two_element_fibres(self):
        ambient, base, els = _setup(2, universe=[(), ("*",), ("a", "b")])
        for x in els:
            assert round_trip(ambient, x, base).ok

    def test_round_trip_nonconstant_base(self):
        ambient = semisimplex_category(2)
        sub = ambient.truncate_below(2)
        rng = random.Random(3)
        base = random_diagram(rng, sub, max_card=2)
        els = classifier_elements(ambient, 2, base, UNIVERSE)
        assert els
        for x in els:
            assert round_trip(ambient, x, base).ok

    def test_round_trip_random_inverse_base(self):
        rng = random.Random(11)
        for _ in range(5):
            cat = random_inverse_category(rng, max_objects=3, max_rank=1)
            n = max(cat.rank.values()) + 1
            base = random_diagram(rng, cat.truncate_below(n), max_card=1)
            els = classifier_elements(cat, n, base, UNIVERSE)
            if len(els) > 200:
                continue
            for x in els:
                assert round_trip(cat, x, base).ok
