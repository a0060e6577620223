"""Exact axis-aligned boxes, partitions, and partition validation.

All coordinates are exact rationals (``fractions.Fraction``).  Floats are
rejected at the boundary: geometric predicates here feed certificate
checking, so every comparison must be decidable, not approximate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

RatLike = Union[int, str, Fraction]

#: A point is a tuple of exact rationals; its length is the ambient dimension.
Point = tuple[Fraction, ...]


def parse_rat(value: RatLike) -> Fraction:
    """Parse an exact rational from an int, a Fraction, or a "p/q" string.

    Strings must be an optionally signed integer or ``p/q`` with a nonzero
    denominator.  Floats (and bools) are rejected outright: a binary float
    silently denotes a different rational than the decimal the user typed.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError(
            f"floats are not accepted (got {value!r}); write an exact \"p/q\" string"
        )
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)  # handles "p" and "p/q", normalizes sign
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


def format_rat(value: Fraction) -> str:
    """Render a rational in lowest terms: ``"p"`` for integers, else ``"p/q"``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_point(coords: Sequence[RatLike]) -> Point:
    return tuple(parse_rat(c) for c in coords)


def format_point(p: Point) -> str:
    return "(" + ", ".join(format_rat(c) for c in p) + ")"


@dataclass(frozen=True)
class Box:
    """A closed axis-aligned box ``[lo[1], hi[1]] x ... x [lo[n], hi[n]]``.

    Construction only enforces that ``lo`` and ``hi`` agree in length;
    degeneracy (``lo[j] >= hi[j]``) is a *reported* defect, not an exception,
    so raw input can be loaded and then validated.
    """

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", tuple(self.lo))
        object.__setattr__(self, "hi", tuple(self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError(
                f"lo has {len(self.lo)} coordinates but hi has {len(self.hi)}"
            )
        if not self.lo:
            raise ValueError("boxes need at least one axis")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def extent(self, axis: int) -> Fraction:
        """Side length along 1-based ``axis``."""
        if not 1 <= axis <= self.dim:
            raise ValueError(f"axis {axis} out of range 1..{self.dim}")
        return self.hi[axis - 1] - self.lo[axis - 1]

    def extents(self) -> tuple[Fraction, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def volume(self) -> Fraction:
        vol = Fraction(1)
        for e in self.extents():
            vol *= e
        return vol

    def is_degenerate(self) -> bool:
        return any(l >= h for l, h in zip(self.lo, self.hi))

    def contains_box(self, other: "Box") -> bool:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return all(sl <= ol for sl, ol in zip(self.lo, other.lo)) and all(
            oh <= sh for oh, sh in zip(other.hi, self.hi)
        )

    def corners(self) -> tuple[Point, ...]:
        """All 2^n vertices, in binary order (bit j-1 set means hi on axis j)."""
        out: list[Point] = []
        for bits in range(1 << self.dim):
            out.append(
                tuple(
                    self.hi[j] if bits >> j & 1 else self.lo[j]
                    for j in range(self.dim)
                )
            )
        return tuple(out)

    def __str__(self) -> str:
        parts = [
            f"[{format_rat(l)}, {format_rat(h)}]" for l, h in zip(self.lo, self.hi)
        ]
        return " x ".join(parts)


def box_extent(b: Box, axis: int) -> Fraction:
    """Side length of ``b`` along 1-based ``axis``."""
    return b.extent(axis)


def box_volume(b: Box) -> Fraction:
    return b.volume()


def interiors_disjoint(a: Box, b: Box) -> bool:
    """True iff the open interiors of ``a`` and ``b`` do not meet.

    Exact criterion: some axis separates them, i.e. one box ends (weakly)
    before the other begins.  Shared faces, edges, and corners are fine.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return any(
        a.hi[j] <= b.lo[j] or b.hi[j] <= a.lo[j] for j in range(a.dim)
    )


@dataclass(frozen=True)
class Partition:
    """An outer box together with the constituent boxes claimed to tile it.

    ``boxes`` are 1-based by convention: box ``k`` is ``boxes[k-1]``.  The
    claim itself (containment, disjointness, exact volume cover) is *not*
    enforced here; run :func:`validate_partition`.
    """

    dim: int
    outer: Box
    boxes: tuple[Box, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "boxes", tuple(self.boxes))
        if self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")
        if self.outer.dim != self.dim:
            raise ValueError(
                f"outer box has dimension {self.outer.dim}, expected {self.dim}"
            )
        bad = [k for k, b in enumerate(self.boxes, start=1) if b.dim != self.dim]
        if bad:
            raise ValueError(f"boxes {bad} do not have dimension {self.dim}")
        if not self.boxes:
            raise ValueError("a partition needs at least one box")

    def box(self, k: int) -> Box:
        """Constituent box ``k`` (1-based)."""
        if not 1 <= k <= len(self.boxes):
            raise ValueError(f"box index {k} out of range 1..{len(self.boxes)}")
        return self.boxes[k - 1]

    def __len__(self) -> int:
        return len(self.boxes)


@dataclass(frozen=True)
class Defect:
    """One validation failure, with exact witness coordinates in ``detail``."""

    kind: str  # "degenerate" | "not-contained" | "interior-overlap" | "volume-mismatch"
    boxes: tuple[int, ...]  # 1-based indices of the offending boxes
    detail: str

    def __str__(self) -> str:
        where = ",".join(f"k={k}" for k in self.boxes)
        return f"{self.kind} ({where}): {self.detail}" if where else (
            f"{self.kind}: {self.detail}"
        )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_partition`; falsy iff defects were found."""

    box_count: int
    outer_volume: Fraction
    defects: tuple[Defect, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.defects

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"OK: {self.box_count} boxes, volume {format_rat(self.outer_volume)}"
        lines = [f"INVALID: {len(self.defects)} defect(s)"]
        lines.extend(f"  - {d}" for d in self.defects)
        return "\n".join(lines)


def validate_partition(p: Partition) -> ValidationReport:
    """Check that the constituent boxes exactly tile the outer box.

    Three independent exact checks, all reported (defects are data, not
    exceptions):

    * every box is nondegenerate and contained in the outer box;
    * constituent interiors are pairwise disjoint (witnessed per pair);
    * volumes sum exactly to the outer volume, which together with the two
      conditions above makes the cover exact rather than merely a packing.
    """
    defects: list[Defect] = []
    outer = p.outer
    if outer.is_degenerate():
        defects.append(
            Defect("degenerate", (), f"outer box {outer} has a non-positive side")
        )
    for k, b in enumerate(p.boxes, start=1):
        if b.is_degenerate():
            defects.append(Defect("degenerate", (k,), f"box {b} has a non-positive side"))
        elif not outer.contains_box(b):
            defects.append(
                Defect("not-contained", (k,), f"box {b} is not inside outer {outer}")
            )
    # Pairwise overlap only makes sense for boxes that are proper boxes.
    solid = [
        (k, b) for k, b in enumerate(p.boxes, start=1) if not b.is_degenerate()
    ]
    for i, (ka, a) in enumerate(solid):
        for kb, b in solid[i + 1 :]:
            if not interiors_disjoint(a, b):
                lo = tuple(max(al, bl) for al, bl in zip(a.lo, b.lo))
                hi = tuple(min(ah, bh) for ah, bh in zip(a.hi, b.hi))
                defects.append(
                    Defect(
                        "interior-overlap",
                        (ka, kb),
                        f"common interior {Box(lo, hi)}",
                    )
                )
    if not defects:
        total = sum((b.volume() for b in p.boxes), Fraction(0))
        if total != outer.volume():
            defects.append(
                Defect(
                    "volume-mismatch",
                    (),
                    f"boxes cover volume {format_rat(total)} of "
                    f"{format_rat(outer.volume())}: the cover has gaps",
                )
            )
    return ValidationReport(
        box_count=len(p.boxes), outer_volume=outer.volume(), defects=tuple(defects)
    )


def dedupe_points(points: Iterable[Point]) -> tuple[Point, ...]:
    """Sorted tuple of distinct points (lexicographic, exact)."""
    return tuple(sorted(set(points)))
