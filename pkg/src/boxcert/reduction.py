"""Collapse a position sequence to a single derived length, with a replayable log.

A :class:`~boxcert.trailgraph.YSequence` walks from 0 to L inside [0, L] with
every step length in the tracked set X.  Three rewrites shrink it while
keeping every step length in X:

1. **loop** — two equal positions enclose a detour; delete it.
2. **sum** — an interior position lies (weakly) between its neighbours, so
   the two adjacent steps point the same way and merge into their sum.
3. **triple** — with no loops and no mergeable position the walk is a strict
   zigzag; at the first index where a step out-grows its predecessor, three
   consecutive steps merge into ``op_triple`` of their lengths, which equals
   the distance between the outer endpoints because the middle step is the
   strict minimum of the three.  Both facts are asserted at runtime.

Applied to exhaustion this leaves the two-point sequence [0, L] and a
derivation of L from X.  The recorded :class:`RewriteStep` log is enough to
re-run everything from the input alone (:func:`replay`), which is how
certificates are checked without trusting the producer.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .closure import (
    Derivation,
    GeneratorSet,
    Sum,
    Triple,
    op_sum,
    op_triple,
    verify_derivation,
)
from .errors import (
    GenerationFailed,
    LeafNotGenerator,
    ReplayMismatch,
    SoundnessError,
    ZigzagIndexMissing,
)
from .geometry import RatLike, format_rat, parse_rat
from .trailgraph import YSequence


@dataclass(frozen=True)
class RewriteStep:
    """One applied rewrite, recorded against 1-based positions at apply time.

    * ``kind="loop"``: positions i and j were equal; steps i..j-1 (their
      lengths in ``lengths``) were deleted.
    * ``kind="sum"``: position i merged steps i-1 and i; ``lengths`` holds
      the two merged lengths, ``merged`` their sum.
    * ``kind="triple"``: steps i-2, i-1, i merged; ``lengths`` holds the
      three lengths, ``merged`` the op_triple value.
    """

    kind: str
    i: int
    j: Optional[int]
    lengths: tuple[Fraction, ...]
    merged: Optional[Fraction]


@dataclass(frozen=True)
class ReductionCertificate:
    """Input sequence, rewrite log, final length, and its derivation."""

    sequence: YSequence
    steps: tuple[RewriteStep, ...]
    result: Fraction
    derivation: Derivation


def _step_lengths(pts: list[Fraction]) -> list[Fraction]:
    return [abs(b - a) for a, b in zip(pts, pts[1:])]


def _first_loop(pts: list[Fraction]) -> Optional[tuple[int, int]]:
    """Smallest 0-based (i, j), i < j, with pts[i] == pts[j]."""
    first_at: dict[Fraction, int] = {}
    for j, v in enumerate(pts):
        if v in first_at:
            # smallest j overall; among equal j the smallest i is the stored one
            return first_at[v], j
        first_at[v] = j
    return None


def _first_between(pts: list[Fraction]) -> Optional[int]:
    """Smallest 0-based interior q with pts[q] inside [pts[q-1], pts[q+1]]."""
    for q in range(1, len(pts) - 1):
        lo, hi = sorted((pts[q - 1], pts[q + 1]))
        if lo <= pts[q] <= hi:
            return q
    return None


def _growth_index(steps: list[Fraction]) -> Optional[int]:
    """Smallest 1-based sequence index i > 2 with step i longer than step i-1.

    ``steps[t]`` is the length between positions t+1 and t+2 (1-based), so
    the comparison for index i reads ``steps[i-1] > steps[i-2]``.
    """
    for i in range(3, len(steps) + 1):
        if steps[i - 1] > steps[i - 2]:
            return i
    return None


def reduce_sequence(
    y: YSequence, leaf_derivation: Callable[[Fraction], Derivation]
) -> ReductionCertificate:
    """Reduce ``y`` to the single length L, logging every rewrite.

    ``leaf_derivation`` supplies a derivation for each original step length
    (a bare Leaf when the length is a generator, a closure derivation
    otherwise).  Rewrites are tried in the fixed order loop, sum, triple;
    loops close at the earliest repeated position, merges pick the smallest
    admissible index — so the log and the final derivation are deterministic
    functions of the input.
    """
    pts = list(y.points)
    derivs: list[Derivation] = [
        leaf_derivation(le) for le in _step_lengths(pts)
    ]
    log: list[RewriteStep] = []
    while len(pts) > 2:
        loop = _first_loop(pts)
        if loop is not None:
            i0, j0 = loop
            dropped = _step_lengths(pts)[i0:j0]
            log.append(
                RewriteStep(
                    kind="loop", i=i0 + 1, j=j0 + 1,
                    lengths=tuple(dropped), merged=None,
                )
            )
            del pts[i0 + 1 : j0 + 1]
            del derivs[i0:j0]
            continue
        q = _first_between(pts)
        if q is not None:
            l1 = abs(pts[q] - pts[q - 1])
            l2 = abs(pts[q + 1] - pts[q])
            merged = abs(pts[q + 1] - pts[q - 1])
            if merged != op_sum(l1, l2):
                raise SoundnessError(
                    f"sum merge at position {q + 1} is not length-preserving: "
                    f"{format_rat(l1)}+{format_rat(l2)} != {format_rat(merged)}"
                )
            log.append(
                RewriteStep(
                    kind="sum", i=q + 1, j=None, lengths=(l1, l2), merged=merged
                )
            )
            derivs[q - 1 : q + 1] = [Sum(derivs[q - 1], derivs[q])]
            del pts[q]
            continue
        steps = _step_lengths(pts)
        i = _growth_index(steps)
        if i is None:
            raise ZigzagIndexMissing(tuple(pts))
        l1, l2, l3 = steps[i - 3], steps[i - 2], steps[i - 1]
        if not (l2 < l1 and l2 < l3):
            raise SoundnessError(
                f"triple merge middle {format_rat(l2)} is not the strict minimum "
                f"of ({format_rat(l1)}, {format_rat(l2)}, {format_rat(l3)}); "
                f"points={tuple(pts)}"
            )
        merged = op_triple(l1, l2, l3)
        geometric = abs(pts[i] - pts[i - 3])
        if merged != geometric:
            raise SoundnessError(
                f"triple merge value {format_rat(merged)} disagrees with the "
                f"geometric span {format_rat(geometric)}; points={tuple(pts)}"
            )
        log.append(
            RewriteStep(
                kind="triple", i=i, j=None, lengths=(l1, l2, l3), merged=merged
            )
        )
        derivs[i - 3 : i] = [Triple(derivs[i - 3], derivs[i - 2], derivs[i - 1])]
        del pts[i - 2 : i]
    if pts != [Fraction(0), y.length]:
        raise SoundnessError(f"reduction ended at {tuple(pts)} instead of [0, L]")
    return ReductionCertificate(
        sequence=y, steps=tuple(log), result=y.length, derivation=derivs[0]
    )


def replay(cert: ReductionCertificate, gens: GeneratorSet) -> Fraction:
    """Re-run a recorded reduction and verify everything it claims.

    Checks, per step and with exact arithmetic: the geometric precondition of
    the rewrite (loop equality; betweenness; strict-zigzag state with the
    minimal growth index), the recorded step lengths, and the merged values.
    Afterwards the sequence must be exactly [0, result] and the attached
    derivation must evaluate to the result using only the given generators.
    Any discrepancy raises :class:`ReplayMismatch`.
    """
    pts = list(cert.sequence.points)
    for idx, st in enumerate(cert.steps):
        m = len(pts)
        steps = _step_lengths(pts)
        if st.kind == "loop":
            if st.j is None or not 1 <= st.i < st.j <= m:
                raise ReplayMismatch(idx, f"loop indices ({st.i}, {st.j}) out of range")
            if pts[st.i - 1] != pts[st.j - 1]:
                raise ReplayMismatch(
                    idx,
                    f"positions {st.i} and {st.j} differ: "
                    f"{format_rat(pts[st.i - 1])} vs {format_rat(pts[st.j - 1])}",
                )
            if tuple(steps[st.i - 1 : st.j - 1]) != st.lengths:
                raise ReplayMismatch(idx, "recorded loop lengths do not match")
            del pts[st.i : st.j]
        elif st.kind == "sum":
            if not 2 <= st.i <= m - 1:
                raise ReplayMismatch(idx, f"sum index {st.i} out of range")
            q = st.i - 1
            lo, hi = sorted((pts[q - 1], pts[q + 1]))
            if not lo <= pts[q] <= hi:
                raise ReplayMismatch(
                    idx, f"position {st.i} is not between its neighbours"
                )
            l1, l2 = abs(pts[q] - pts[q - 1]), abs(pts[q + 1] - pts[q])
            if st.lengths != (l1, l2):
                raise ReplayMismatch(idx, "recorded sum lengths do not match")
            if st.merged != l1 + l2:
                raise ReplayMismatch(idx, "recorded sum value is wrong")
            del pts[q]
        elif st.kind == "triple":
            if not 3 <= st.i <= m - 1:
                raise ReplayMismatch(idx, f"triple index {st.i} out of range")
            if _first_loop(pts) is not None or _first_between(pts) is not None:
                raise ReplayMismatch(idx, "triple applied to a non-zigzag state")
            if _growth_index(steps) != st.i:
                raise ReplayMismatch(
                    idx, f"{st.i} is not the smallest growth index"
                )
            l1, l2, l3 = steps[st.i - 3], steps[st.i - 2], steps[st.i - 1]
            if st.lengths != (l1, l2, l3):
                raise ReplayMismatch(idx, "recorded triple lengths do not match")
            if not (l2 < l1 and l2 < l3):
                raise ReplayMismatch(idx, "middle length is not the strict minimum")
            value = op_triple(l1, l2, l3)
            if st.merged != value or value != abs(pts[st.i] - pts[st.i - 3]):
                raise ReplayMismatch(idx, "triple value disagrees with geometry")
            del pts[st.i - 2 : st.i]
        else:
            raise ReplayMismatch(idx, f"unknown rewrite kind {st.kind!r}")
    final = len(cert.steps)
    if len(pts) != 2:
        raise ReplayMismatch(final, f"{len(pts)} positions remain after replay")
    if pts[0] != 0 or pts[1] != cert.result:
        raise ReplayMismatch(
            final,
            f"replay ended at [{format_rat(pts[0])}, {format_rat(pts[1])}], "
            f"result claims {format_rat(cert.result)}",
        )
    try:
        derived = verify_derivation(cert.derivation, gens)
    except LeafNotGenerator as exc:
        raise ReplayMismatch(final, str(exc)) from exc
    if derived != cert.result:
        raise ReplayMismatch(
            final,
            f"derivation evaluates to {format_rat(derived)}, "
            f"result claims {format_rat(cert.result)}",
        )
    return cert.result


def random_y_sequence(
    length: RatLike,
    step_pool: Iterable[RatLike],
    seed: int,
    *,
    max_steps: int = 64,
    retries: int = 200,
) -> YSequence:
    """A seeded random walk from 0 to ``length`` inside [0, length].

    Steps are drawn (signed) from ``step_pool``; a move that lands exactly on
    the endpoint is always taken, so the walk terminates as soon as it can.
    Attempts that wander too long are retried up to ``retries`` times; if the
    endpoint is unreachable (or never hit within the budget) this raises
    :class:`GenerationFailed`.
    """
    target = parse_rat(length)
    pool = sorted({parse_rat(s) for s in step_pool})
    if target <= 0:
        raise ValueError(f"length must be positive, got {format_rat(target)}")
    if not pool:
        raise ValueError("step pool must be nonempty")
    if any(s <= 0 for s in pool):
        raise ValueError("step pool entries must be positive")
    rng = random.Random(seed)
    pool_set = set(pool)
    for _ in range(retries):
        pos = Fraction(0)
        points = [pos]
        for _ in range(max_steps):
            if target - pos in pool_set:
                points.append(target)
                return YSequence(axis=1, length=target, points=tuple(points))
            moves = [pos + s for s in pool if pos + s < target]
            moves += [pos - s for s in pool if pos - s >= 0]
            if not moves:
                break
            pos = rng.choice(moves)
            points.append(pos)
    raise GenerationFailed(
        f"no walk from 0 to {format_rat(target)} with steps "
        f"{{{', '.join(format_rat(s) for s in pool)}}} found (seed {seed})"
    )
