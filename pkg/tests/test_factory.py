"""Witness constructions and random instance generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from boxcert.factory import (
    hypothesis_instance,
    lift_product,
    pinwheel_partition,
    random_guillotine,
    strip_partition,
)
from boxcert.geometry import parse_point, validate_partition


def _F(x) -> Fraction:
    return Fraction(x)


def _rand_rat(rng, lo=1, hi=60, q=6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, q))


def test_strip_figure_instance():
    p = strip_partition(15, 5)
    assert p.dim == 2
    assert p.outer.extents() == (_F(20), _F(20))
    assert p.box(1).extents() == (_F(15), _F(20))
    assert p.box(2).extents() == (_F(5), _F(20))
    assert validate_partition(p).ok


def test_strip_random_parameters_always_valid():
    rng = random.Random(1)
    for _ in range(50):
        x, y = _rand_rat(rng), _rand_rat(rng)
        p = strip_partition(x, y)
        assert validate_partition(p).ok
        assert p.outer.extent(1) == x + y


def test_strip_rejects_nonpositive():
    with pytest.raises(ValueError):
        strip_partition(0, 5)
    with pytest.raises(ValueError):
        strip_partition(5, "-1/2")


def test_pinwheel_figure_instance():
    p = pinwheel_partition(17, 10, 7)
    assert p.outer.extents() == (_F(20), _F(20))
    assert [b.extents() for b in p.boxes] == [
        (_F(3), _F(17)),   # left column
        (_F(10), _F(3)),   # top row
        (_F(10), _F(10)),  # right column
        (_F(17), _F(10)),  # bottom row
        (_F(7), _F(7)),    # centre square
    ]
    assert validate_partition(p).ok
    # centre square sits at (y-z, x-z)
    assert p.box(5).lo == parse_point((3, 10))


def test_pinwheel_every_box_has_a_generator_side():
    p = pinwheel_partition(17, 10, 7)
    gens = {_F(17), _F(10), _F(7)}
    for b in p.boxes:
        assert gens.intersection(b.extents())


def test_pinwheel_area_identity():
    # the five box areas always sum to (x + y - z)^2 — checked exactly
    rng = random.Random(9)
    for _ in range(60):
        z = _rand_rat(rng, 1, 30)
        x = z + _rand_rat(rng, 1, 30)
        y = z + _rand_rat(rng, 1, 30)
        p = pinwheel_partition(x, y, z)
        total = sum(b.volume() for b in p.boxes)
        assert total == (x + y - z) ** 2
        assert validate_partition(p).ok


def test_pinwheel_rejects_bad_parameters():
    with pytest.raises(ValueError):
        pinwheel_partition(7, 10, 7)  # x == z
    with pytest.raises(ValueError):
        pinwheel_partition(17, 7, 7)  # y == z
    with pytest.raises(ValueError):
        pinwheel_partition(17, 10, 0)


def test_lift_to_three_dimensions():
    p = lift_product(strip_partition(15, 5), 20, 3)
    assert p.dim == 3
    assert p.outer.extents() == (_F(20), _F(20), _F(20))
    assert p.box(1).extents() == (_F(15), _F(20), _F(20))
    assert validate_partition(p).ok


def test_lift_identity_and_errors():
    p = strip_partition(15, 5)
    assert lift_product(p, 20, 2) == p
    with pytest.raises(ValueError):
        lift_product(p, 20, 1)
    with pytest.raises(ValueError):
        lift_product(p, 0, 3)
    with pytest.raises(ValueError):
        lift_product(lift_product(p, 20, 3), 20, 4)  # only 2D inputs


def test_guillotine_deterministic_and_valid():
    a = random_guillotine(2, 4, seed=7)
    b = random_guillotine(2, 4, seed=7)
    assert a == b
    assert validate_partition(a).ok
    assert random_guillotine(2, 4, seed=8) != a


def test_guillotine_respects_denominator_bound():
    for seed in range(20):
        p = random_guillotine(2, 5, seed=seed, coord_denom_bound=6)
        for b in p.boxes:
            for c in (*b.lo, *b.hi):
                assert c.denominator <= 6
        assert validate_partition(p).ok


def test_guillotine_three_dimensional():
    p = random_guillotine(3, 3, seed=5)
    assert p.dim == 3
    assert validate_partition(p).ok


def test_guillotine_rejects_bad_parameters():
    with pytest.raises(ValueError):
        random_guillotine(1, 3, seed=0)
    with pytest.raises(ValueError):
        random_guillotine(2, -1, seed=0)
    with pytest.raises(ValueError):
        random_guillotine(2, 3, seed=0, coord_denom_bound=0)


def test_hypothesis_instance_makes_premise_true():
    for seed in range(20):
        p = random_guillotine(2, 4, seed=seed)
        q, gens = hypothesis_instance(p, seed=seed * 3)
        assert q is p
        for b in p.boxes:
            assert any(e in gens for e in b.extents())


def test_hypothesis_instance_deterministic():
    p = random_guillotine(2, 4, seed=3)
    _, g1 = hypothesis_instance(p, seed=42)
    _, g2 = hypothesis_instance(p, seed=42)
    assert g1 == g2
