"""Closure operations, derivation trees, and the two independent engines.

The brute-force engine is the oracle: it recomputes the full fixpoint from
scratch each pass with no sharing, so its only failure mode is the math
itself.  The hand-checked fixtures below pin it down; the production engine
is then required to agree with it exactly.
"""

from __future__ import annotations

import random
import warnings
from fractions import Fraction

import pytest

from boxcert.closure import (
    GeneratorSet,
    Leaf,
    Sum,
    Triple,
    bounded_closure,
    brute_force_closure,
    derivation_value,
    membership,
    op_sum,
    op_triple,
    verify_derivation,
)
from boxcert.errors import LeafNotGenerator


def _F(x) -> Fraction:
    return Fraction(x)


def test_op_sum_basic():
    assert op_sum(_F(15), _F(5)) == 20
    assert op_sum(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    with pytest.raises(ValueError):
        op_sum(_F(0), _F(1))


def test_op_triple_symmetric_and_dominates_max():
    assert op_triple(_F(17), _F(10), _F(7)) == 20
    assert op_triple(_F(7), _F(17), _F(10)) == 20
    assert op_triple(_F(10), _F(7), _F(17)) == 20
    # b + c - a with a <= b <= c is never below c
    rng = random.Random(7)
    for _ in range(100):
        x, y, z = (Fraction(rng.randint(1, 60), rng.randint(1, 6)) for _ in range(3))
        assert op_triple(x, y, z) >= max(x, y, z)
    with pytest.raises(ValueError):
        op_triple(_F(1), _F(-1), _F(2))


def test_generator_set_normalizes_and_sorts():
    g = GeneratorSet.of("10/2", 3, 7, 3)
    assert g.sorted_values == (Fraction(3), Fraction(5), Fraction(7))
    assert str(g) == "{3, 5, 7}"
    assert list(g) == [Fraction(3), Fraction(5), Fraction(7)]
    with pytest.raises(ValueError):
        GeneratorSet.of(0)


def test_empty_generator_set_gives_empty_closure():
    empty = GeneratorSet.of()
    assert bounded_closure(empty, 5).sorted_elements() == ()
    assert brute_force_closure(empty, 5) == frozenset()
    with pytest.raises(ValueError):
        membership(empty, 5, 3)  # membership queries need generators


def test_derivation_evaluation_and_verification():
    d = Triple(Leaf(_F(10)), Leaf(_F(7)), Leaf(_F(17)))
    assert derivation_value(d) == 20
    g = GeneratorSet.of(17, 10, 7)
    assert verify_derivation(d, g) == 20
    with pytest.raises(LeafNotGenerator):
        verify_derivation(d, GeneratorSet.of(17, 10))


def test_deep_derivation_chain_evaluates_iteratively():
    # would blow the recursion limit if evaluation recursed
    d = Leaf(_F(1))
    for _ in range(5000):
        d = Sum(d, Leaf(_F(1)))
    assert derivation_value(d) == 5001


# ---------------------------------------------------------- oracle fixtures
# These closures are small enough to enumerate by hand; they anchor the
# brute-force engine before it is used to judge anything else.


def test_oracle_single_generator_counts_up():
    got = brute_force_closure(GeneratorSet.of(1), 5)
    assert got == {_F(1), _F(2), _F(3), _F(4), _F(5)}


def test_oracle_two_generators_fill_interval():
    # 2,3 -> 4=2+2, 5=2+3, 6=3+3, 7=2+2+3; everything 2..7 appears
    got = brute_force_closure(GeneratorSet.of(2, 3), 7)
    assert got == {_F(k) for k in range(2, 8)}


def test_oracle_rational_generator():
    got = brute_force_closure(GeneratorSet.of("1/2"), 2)
    assert got == {Fraction(1, 2), _F(1), Fraction(3, 2), _F(2)}


def test_oracle_needs_triple_to_reach_some_values():
    # with gens {3,5,7}: 9 = op_triple variants or 3+3+3; 8 = 3+5
    got = brute_force_closure(GeneratorSet.of(3, 5, 7), 10)
    assert _F(9) in got
    assert _F(4) not in got
    # everything in the closure is >= the smallest generator
    assert min(got) == 3


# ------------------------------------------------- production engine agrees


def test_bounded_matches_oracle_on_fixtures():
    for gens, bound in [
        (GeneratorSet.of(1), _F(5)),
        (GeneratorSet.of(2, 3), _F(7)),
        (GeneratorSet.of("1/2"), _F(2)),
        (GeneratorSet.of(17, 10, 7), _F(20)),
        (GeneratorSet.of(15, 5), _F(20)),
    ]:
        bc = bounded_closure(gens, bound)
        assert frozenset(bc.elements) == brute_force_closure(gens, bound)


def test_bounded_matches_oracle_on_random_sets():
    rng = random.Random(2024)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # some bounds undercut every generator
        for _ in range(40):
            k = rng.randint(1, 4)
            vals = {Fraction(rng.randint(1, 36), rng.randint(1, 6)) for _ in range(k)}
            gens = GeneratorSet.from_values(vals)
            bound = Fraction(rng.randint(6, 120), rng.randint(1, 6))
            bc = bounded_closure(gens, bound)
            assert frozenset(bc.elements) == brute_force_closure(gens, bound)


def test_every_element_gets_a_verifiable_derivation():
    gens = GeneratorSet.of(3, 5, 7)
    bc = bounded_closure(gens, 30)
    for e in bc.sorted_elements():
        d = bc.derivation_for(e)
        assert d is not None
        assert verify_derivation(d, gens) == e
    assert bc.derivation_for(_F(4)) is None
    assert _F(4) not in bc


def test_generators_derive_as_leaves():
    bc = bounded_closure(GeneratorSet.of(15, 5), 20)
    assert bc.derivation_for(_F(15)) == Leaf(_F(15))


def test_closure_respects_bound_tightly():
    bc = bounded_closure(GeneratorSet.of(2), 6)
    assert bc.sorted_elements() == (_F(2), _F(4), _F(6))
    assert _F(8) not in bc


def test_bound_below_all_generators_warns_and_is_empty():
    with pytest.warns(UserWarning):
        bc = bounded_closure(GeneratorSet.of(5), 3)
    assert bc.sorted_elements() == ()


def test_membership_round_trip():
    gens = GeneratorSet.of(5, 3, 7)
    d = membership(gens, 9, 9)
    assert d is not None
    assert verify_derivation(d, gens) == 9
    assert membership(GeneratorSet.of(2), 8, 5) is None
    with pytest.raises(ValueError):
        membership(gens, 4, 9)  # bound below value
    with pytest.raises(ValueError):
        membership(gens, 9, 0)


def test_closure_under_both_ops_within_bound():
    # spot-check closedness: applying either op to members stays inside
    gens = GeneratorSet.of("3/2", 2)
    bound = _F(12)
    bc = bounded_closure(gens, bound)
    els = bc.sorted_elements()
    for x in els:
        for y in els:
            s = op_sum(x, y)
            if s <= bound:
                assert s in bc
    rng = random.Random(5)
    for _ in range(300):
        x, y, z = (rng.choice(els) for _ in range(3))
        t = op_triple(x, y, z)
        if t <= bound:
            assert t in bc
