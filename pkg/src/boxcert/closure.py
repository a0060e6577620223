"""Bounded closure of a set of positive rationals under two operations.

The tracked set X is whatever contains the generators and is closed under

* ``op_sum(x, y) = x + y``
* ``op_triple(x, y, z) = x + y + z - 2*min(x, y, z)``

Both operations are symmetric and produce a value at least as large as every
operand, so the part of X below a bound is finite and computable: it lives on
the grid ``(1/Q) * Z`` where Q is the lcm of the generator denominators.

:func:`bounded_closure` computes that finite set together with one producing
rule per element, from which :func:`BoundedClosure.derivation_for` extracts a
checkable derivation tree.  :func:`brute_force_closure` is a deliberately
separate re-computation of the same set used to cross-check the engine; it
shares no code with it and must stay that way.
"""
from __future__ import annotations

import warnings
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Union

from .errors import LeafNotGenerator, SoundnessError
from .geometry import RatLike, format_rat, parse_rat


def op_sum(x: Fraction, y: Fraction) -> Fraction:
    """The first closure operation: plain addition of positive rationals."""
    if x <= 0 or y <= 0:
        raise ValueError(f"operands must be positive, got {x}, {y}")
    return x + y


def op_triple(x: Fraction, y: Fraction, z: Fraction) -> Fraction:
    """The second closure operation: ``x + y + z - 2*min(x, y, z)``.

    Equivalently, with the operands sorted as ``a <= b <= c``, the result is
    ``b + c - a``: never below the largest operand, and equal to it exactly
    when the two smallest operands coincide.
    """
    if x <= 0 or y <= 0 or z <= 0:
        raise ValueError(f"operands must be positive, got {x}, {y}, {z}")
    return x + y + z - 2 * min(x, y, z)


@dataclass(frozen=True)
class GeneratorSet:
    """A finite set of positive rational generators for the tracked set."""

    gens: frozenset[Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gens", frozenset(self.gens))
        bad = sorted(g for g in self.gens if g <= 0)
        if bad:
            raise ValueError(
                "generators must be positive, got "
                + ", ".join(format_rat(b) for b in bad)
            )

    @classmethod
    def of(cls, *values: RatLike) -> "GeneratorSet":
        return cls(frozenset(parse_rat(v) for v in values))

    @classmethod
    def from_values(cls, values: Iterable[RatLike]) -> "GeneratorSet":
        return cls(frozenset(parse_rat(v) for v in values))

    @property
    def sorted_values(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.gens))

    def __iter__(self):
        return iter(self.sorted_values)

    def __len__(self) -> int:
        return len(self.gens)

    def __contains__(self, value: object) -> bool:
        return value in self.gens

    def __str__(self) -> str:
        return "{" + ", ".join(format_rat(g) for g in self.sorted_values) + "}"


# --- derivation trees -------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """A generator used as-is."""

    value: Fraction


@dataclass(frozen=True)
class Sum:
    """op_sum applied to the values of two sub-derivations."""

    left: "Derivation"
    right: "Derivation"


@dataclass(frozen=True)
class Triple:
    """op_triple applied to the values of three sub-derivations."""

    first: "Derivation"
    second: "Derivation"
    third: "Derivation"


Derivation = Union[Leaf, Sum, Triple]


def _children(node: Derivation) -> tuple[Derivation, ...]:
    if isinstance(node, Leaf):
        return ()
    if isinstance(node, Sum):
        return (node.left, node.right)
    if isinstance(node, Triple):
        return (node.first, node.second, node.third)
    raise TypeError(f"not a derivation node: {node!r}")


def _evaluate(d: Derivation, gens: Optional[GeneratorSet]) -> Fraction:
    # Iterative post-order with an id-keyed memo: derivations extracted from
    # closure provenance share subtrees, and chains can be deep.
    values: dict[int, Fraction] = {}
    stack: list[Derivation] = [d]
    while stack:
        node = stack[-1]
        if id(node) in values:
            stack.pop()
            continue
        kids = _children(node)
        pending = [k for k in kids if id(k) not in values]
        if pending:
            stack.extend(pending)
            continue
        if isinstance(node, Leaf):
            if gens is not None and node.value not in gens:
                raise LeafNotGenerator(node.value)
            if node.value <= 0:
                raise ValueError(f"leaf value must be positive: {node.value}")
            values[id(node)] = node.value
        elif isinstance(node, Sum):
            values[id(node)] = op_sum(values[id(node.left)], values[id(node.right)])
        else:
            values[id(node)] = op_triple(
                values[id(node.first)],
                values[id(node.second)],
                values[id(node.third)],
            )
        stack.pop()
    return values[id(d)]


def derivation_value(d: Derivation) -> Fraction:
    """The rational a derivation tree derives (no generator check)."""
    return _evaluate(d, None)


def verify_derivation(d: Derivation, gens: GeneratorSet) -> Fraction:
    """Re-evaluate a derivation bottom-up and return its value.

    Every leaf must be one of ``gens`` (else :class:`LeafNotGenerator`), and
    every internal node is recomputed with exact arithmetic, so a returned
    value really is in the closure of ``gens``.
    """
    return _evaluate(d, gens)


# --- the closure engine -----------------------------------------------------

#: Producing rule for one closure element: ``("gen",)``, ``("sum", x, y)``
#: with x + y = element, or ``("triple", a, b, c)`` with a <= b <= c and
#: b + c - a = element.  Operands are themselves closure elements, each
#: strictly smaller than the element, so extraction terminates.
Provenance = tuple


@dataclass(frozen=True, eq=False)
class BoundedClosure:
    """All closure elements of ``gens`` that are <= ``bound``, with provenance."""

    gens: GeneratorSet
    bound: Fraction
    elements: frozenset[Fraction]
    provenance: Mapping[Fraction, Provenance] = field(repr=False)

    def __contains__(self, value: object) -> bool:
        return value in self.elements

    def sorted_elements(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.elements))

    def derivation_for(self, value: Fraction) -> Optional[Derivation]:
        """A derivation of ``value`` from the generators, or None.

        Built iteratively from the provenance map; shared subtrees are reused,
        so the result is a DAG presented as a tree.
        """
        if value not in self.elements:
            return None
        memo: dict[Fraction, Derivation] = {}
        stack = [value]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            rule = self.provenance[cur]
            if rule[0] == "gen":
                memo[cur] = Leaf(cur)
                stack.pop()
                continue
            deps = rule[1:]
            pending = [d for d in deps if d not in memo]
            if pending:
                stack.extend(pending)
                continue
            if rule[0] == "sum":
                memo[cur] = Sum(memo[deps[0]], memo[deps[1]])
            else:
                memo[cur] = Triple(memo[deps[0]], memo[deps[1]], memo[deps[2]])
            stack.pop()
        return memo[value]


def _scaled_setup(gens: GeneratorSet, bound: Fraction) -> tuple[list[int], int, int]:
    """Common-denominator scaling: generators and bound as exact integers."""
    usable = [g for g in gens.sorted_values if g <= bound]
    if not usable:
        return [], 1, 0
    q = lcm(*(g.denominator for g in usable))
    scaled_bound = (bound.numerator * q) // bound.denominator  # floor, exact
    return [int(g * q) for g in usable], q, scaled_bound


def _saturate_bits(gen_bits: list[int], limit: int) -> int:
    """Fixpoint of both operations on the scaled integer grid, as a bitmask.

    Bit v of the result is set iff value v (scaled) is in the closure.  Each
    round applies both operations to the whole current set:

    * sums: OR of ``mask << v`` over elements v;
    * triples in canonical form ``b + c - a`` with ``a <= b <= c``: walk the
      elements in descending order maintaining the pair sums of the suffix
      (all elements >= the current one), then shift by the current element,
      which subtracts it as the minimum.
    """
    full = (1 << (limit + 1)) - 2  # bits 1..limit
    mask = 0
    for v in gen_bits:
        if v <= limit:
            mask |= 1 << v
    while True:
        els = _bits(mask)
        sums = 0
        for v in els:
            sums |= mask << v
        pair_sums = 0
        active = 0
        triples = 0
        for v in reversed(els):
            bit = 1 << v
            active |= bit
            pair_sums |= active << v
            triples |= pair_sums >> v
        candidate = (sums | triples) & full
        if candidate | mask == mask:
            return mask
        mask |= candidate


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _assign_provenance(els: list[int], gen_bits: set[int]) -> dict[int, tuple]:
    """One well-founded producing rule per element, in increasing value order.

    Every non-generator element has a production whose operands are strictly
    smaller closure elements (the first production that ever created it had
    that property), so searching smaller elements only is complete.  For sums
    the most balanced split is taken to keep derivation trees shallow; the
    rare sum-free elements fall back to a triple witness found through a
    max-min pair-sum table.
    """
    present = set(els)
    prov: dict[int, tuple] = {}
    pair_best: Optional[dict[int, tuple[int, int]]] = None
    for e in els:
        if e in gen_bits:
            prov[e] = ("gen",)
            continue
        rule: Optional[tuple] = None
        i = bisect_right(els, e // 2) - 1
        while i >= 0:
            x = els[i]
            y = e - x
            if y > els[-1]:
                break  # partners only grow as x shrinks; none can be present
            if y in present:
                rule = ("sum", x, y)
                break
            i -= 1
        if rule is None:
            if pair_best is None:
                pair_best = {}
                for i, b in enumerate(els):
                    for c in els[i:]:
                        pair_best[b + c] = (b, c)  # later rows have larger min
            for a in els:
                if a >= e:
                    break
                witness = pair_best.get(e + a)
                if witness is not None and witness[0] > a:
                    rule = ("triple", a, witness[0], witness[1])
                    break
        if rule is None:
            raise SoundnessError(
                f"no producing rule found for closure element {e} (scaled); "
                f"elements={els}"
            )
        prov[e] = rule
    return prov


def bounded_closure(gens: GeneratorSet, bound: RatLike) -> BoundedClosure:
    """All values derivable from ``gens`` that do not exceed ``bound``.

    Both operations only ever grow values, so this finite set *is* the part
    of the (infinite) closed set below the bound.  Generators above the bound
    are ignored; if none survive, the closure is empty (with a warning when
    the bound cut them all off).
    """
    bound_f = parse_rat(bound)
    scaled_gens, q, limit = _scaled_setup(gens, bound_f)
    if not scaled_gens:
        if len(gens) > 0:
            warnings.warn(
                f"bound {format_rat(bound_f)} is below the smallest generator; "
                "the bounded closure is empty",
                stacklevel=2,
            )
        return BoundedClosure(gens, bound_f, frozenset(), {})
    mask = _saturate_bits(scaled_gens, limit)
    els = _bits(mask)
    prov_scaled = _assign_provenance(els, set(scaled_gens))
    to_frac = {v: Fraction(v, q) for v in els}
    provenance: dict[Fraction, tuple] = {}
    for v, rule in prov_scaled.items():
        if rule[0] == "gen":
            provenance[to_frac[v]] = ("gen",)
        else:
            provenance[to_frac[v]] = (rule[0],) + tuple(to_frac[w] for w in rule[1:])
    return BoundedClosure(
        gens=gens,
        bound=bound_f,
        elements=frozenset(to_frac.values()),
        provenance=provenance,
    )


def membership(gens: GeneratorSet, bound: RatLike, value: RatLike) -> Optional[Derivation]:
    """A derivation of ``value`` from ``gens`` if one exists below ``bound``.

    Returns None for non-members.  The bound must cover the value, otherwise
    the answer would be trivially (and misleadingly) negative.
    """
    if len(gens) == 0:
        raise ValueError("membership queries need a nonempty generator set")
    value_f = parse_rat(value)
    bound_f = parse_rat(bound)
    if value_f <= 0:
        raise ValueError(f"value must be positive, got {format_rat(value_f)}")
    if bound_f < value_f:
        raise ValueError(
            f"bound {format_rat(bound_f)} is smaller than the value "
            f"{format_rat(value_f)}"
        )
    return bounded_closure(gens, bound_f).derivation_for(value_f)


def brute_force_closure(gens: GeneratorSet, bound: RatLike) -> frozenset[Fraction]:
    """Independent oracle for :func:`bounded_closure`'s element set.

    Repeated full passes until nothing new appears: every pass enumerates all
    unordered pairs for sums, and all triples in the canonical sorted form
    ``a <= b <= c -> b + c - a`` (for each pair sum, every small-enough
    element a up to the best pair minimum).  No frontier, no provenance, no
    sharing with the engine above; passes run on common-denominator integers
    so the cross-check is exact but affordable.
    """
    bound_f = parse_rat(bound)
    start = [g for g in gens.sorted_values if g <= bound_f]
    if not start:
        return frozenset()
    q = lcm(*(g.denominator for g in start))
    limit = (bound_f.numerator * q) // bound_f.denominator
    current = {int(g * q) for g in start}
    while True:
        els = sorted(current)
        found: set[int] = set()
        best_min: dict[int, int] = {}
        for i, b in enumerate(els):
            for c in els[i:]:
                s = b + c
                if s <= limit:
                    found.add(s)
                if best_min.get(s, 0) < b:
                    best_min[s] = b
        for s, m in best_min.items():
            lo = bisect_left(els, s - limit)  # keep results within the bound
            for a in els[lo:]:
                if a > m:
                    break
                found.add(s - a)
        if found <= current:
            break
        current |= found
    return frozenset(Fraction(v, q) for v in current)
