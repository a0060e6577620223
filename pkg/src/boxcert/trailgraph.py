"""From a validated partition to a corner-to-corner trail and its projection.

Each constituent box gets one axis whose side length lies in the tracked set;
the box then contributes exactly its edges parallel to that axis to a
multigraph on the constituent-box vertices.  Degree parity in that graph is
forced: outer corners have degree exactly one, every other vertex even
degree.  A greedy non-repeating walk from one outer corner therefore ends at
a different outer corner, and projecting the walk to the first axis on which
the two corners differ yields a sequence of positions whose nonzero step
lengths are all tracked side lengths.  That sequence is what the reducer
collapses into a single derived length.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import HypothesisViolated, SoundnessError, StuckAtEvenVertex
from .geometry import Box, Partition, Point, format_point, format_rat


@dataclass(frozen=True)
class AxisAssignment:
    """For each constituent box (1-based), the chosen 1-based axis."""

    axes: tuple[int, ...]

    def axis_of(self, k: int) -> int:
        if not 1 <= k <= len(self.axes):
            raise ValueError(f"box index {k} out of range 1..{len(self.axes)}")
        return self.axes[k - 1]

    def __len__(self) -> int:
        return len(self.axes)


def assign_axes(p: Partition, member: Callable[[Fraction], bool]) -> AxisAssignment:
    """Choose, per box, the smallest axis whose extent satisfies ``member``.

    ``member`` decides membership in the tracked set (usually a bounded
    closure).  A box with no qualifying side falsifies the premise of the
    whole construction, reported as :class:`HypothesisViolated` with the
    smallest offending box index.
    """
    axes: list[int] = []
    for k, b in enumerate(p.boxes, start=1):
        for j in range(1, p.dim + 1):
            if member(b.extent(j)):
                axes.append(j)
                break
        else:
            raise HypothesisViolated(
                k, tuple(format_rat(e) for e in b.extents())
            )
    return AxisAssignment(tuple(axes))


@dataclass(frozen=True)
class Edge:
    """One box edge parallel to the box's assigned axis.

    ``edge_id`` enumerates the ``2^(n-1)`` parallel edges of box ``box``: bit
    t of ``edge_id`` says whether the t-th *other* axis (ascending) sits at
    the box's hi face.  ``a``/``b`` are the endpoints with the lower/higher
    coordinate on the assigned axis, so ``a < b`` lexicographically.
    """

    box: int
    edge_id: int
    a: Point
    b: Point


def edges_of_box(b: Box, k: int, axis: int) -> tuple[Edge, ...]:
    """All edges of box ``k`` parallel to 1-based ``axis``, in edge_id order."""
    others = [j for j in range(1, b.dim + 1) if j != axis]
    out: list[Edge] = []
    for bits in range(1 << len(others)):
        coords: list[Optional[Fraction]] = [None] * b.dim
        for t, j in enumerate(others):
            coords[j - 1] = b.hi[j - 1] if bits >> t & 1 else b.lo[j - 1]
        lo_end = list(coords)
        hi_end = list(coords)
        lo_end[axis - 1] = b.lo[axis - 1]
        hi_end[axis - 1] = b.hi[axis - 1]
        out.append(Edge(box=k, edge_id=bits, a=tuple(lo_end), b=tuple(hi_end)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class TrailGraph:
    """Multigraph of assigned-axis edges over all constituent-box vertices."""

    partition: Partition
    assignment: AxisAssignment
    vertices: tuple[Point, ...]
    edges: tuple[Edge, ...]
    #: vertex -> ((far endpoint, edge), ...) sorted by far endpoint, box, edge_id
    adjacency: Mapping[Point, tuple[tuple[Point, Edge], ...]]

    def degree(self, v: Point) -> int:
        return len(self.adjacency.get(v, ()))


def build_graph(p: Partition, c: AxisAssignment) -> TrailGraph:
    """Assemble the multigraph; deterministic given the assignment.

    Vertices are all corners of all constituent boxes (deduplicated as exact
    points).  Box k contributes its ``2^(n-1)`` edges parallel to axis
    ``c.axis_of(k)``; edges meeting at a vertex are kept sorted so that every
    later traversal choice is reproducible.  T-junction contacts (a vertex of
    one box interior to an edge of another) do not split edges.
    """
    if len(c) != len(p.boxes):
        raise ValueError(
            f"assignment covers {len(c)} boxes, partition has {len(p.boxes)}"
        )
    vertices: set[Point] = set()
    edges: list[Edge] = []
    for k, b in enumerate(p.boxes, start=1):
        vertices.update(b.corners())
        edges.extend(edges_of_box(b, k, c.axis_of(k)))
    incidence: dict[Point, list[tuple[Point, Edge]]] = {v: [] for v in sorted(vertices)}
    for e in edges:
        incidence[e.a].append((e.b, e))
        incidence[e.b].append((e.a, e))
    adjacency = {
        v: tuple(sorted(inc, key=lambda fe: (fe[0], fe[1].box, fe[1].edge_id)))
        for v, inc in incidence.items()
    }
    return TrailGraph(
        partition=p,
        assignment=c,
        vertices=tuple(sorted(vertices)),
        edges=tuple(edges),
        adjacency=adjacency,
    )


@dataclass(frozen=True)
class ParityEntry:
    point: Point
    degree: int
    is_outer_corner: bool

    @property
    def ok(self) -> bool:
        if self.is_outer_corner:
            return self.degree == 1
        return self.degree % 2 == 0


@dataclass(frozen=True)
class ParityReport:
    """Degree of every vertex, with the forced parity condition per vertex."""

    entries: tuple[ParityEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def __bool__(self) -> bool:
        return self.ok

    def violations(self) -> tuple[ParityEntry, ...]:
        return tuple(e for e in self.entries if not e.ok)

    def table(self) -> str:
        rows = ["vertex  degree  outer-corner  ok"]
        for e in self.entries:
            rows.append(
                f"{format_point(e.point)}  {e.degree}  "
                f"{'yes' if e.is_outer_corner else 'no'}  "
                f"{'ok' if e.ok else 'VIOLATION'}"
            )
        return "\n".join(rows)


def parity_audit(g: TrailGraph) -> ParityReport:
    """Check the forced degree parities: outer corners 1, everything else even.

    A violation means the partition was not actually valid (something slipped
    past validation) or the graph was built wrongly; either way certification
    must not proceed.
    """
    outer_corners = set(g.partition.outer.corners())
    entries = []
    seen = set(g.vertices) | outer_corners
    for v in sorted(seen):
        entries.append(
            ParityEntry(point=v, degree=g.degree(v), is_outer_corner=v in outer_corners)
        )
    return ParityReport(entries=tuple(entries))


@dataclass(frozen=True)
class TrailStep:
    edge: Edge
    src: Point
    dst: Point


@dataclass(frozen=True)
class Trail:
    """A non-repeating edge walk between two distinct outer corners."""

    start: Point
    steps: tuple[TrailStep, ...]
    end: Point

    def points(self) -> tuple[Point, ...]:
        return (self.start,) + tuple(s.dst for s in self.steps)


def extract_trail(g: TrailGraph, start: Optional[Point] = None) -> Trail:
    """Greedy non-repeating walk from an outer corner until it gets stuck.

    With the parity pattern in place the walk can only get stuck at an outer
    corner different from the start (at every even vertex an arrival leaves an
    odd number of used incidences, so an unused edge remains).  Tie-break at
    each vertex: unused edge with the lexicographically smallest far
    endpoint, then smallest box index, then smallest edge_id — this makes the
    whole pipeline reproducible byte-for-byte.
    """
    corners = set(g.partition.outer.corners())
    if start is None:
        start = min(corners)
    elif start not in corners:
        raise ValueError(
            f"start {format_point(start)} is not a corner of the outer box"
        )
    used: set[Edge] = set()
    current = start
    steps: list[TrailStep] = []
    while True:
        options = [
            (far, e) for far, e in g.adjacency.get(current, ()) if e not in used
        ]
        if not options:
            break
        far, e = options[0]  # adjacency lists are pre-sorted
        used.add(e)
        steps.append(TrailStep(edge=e, src=current, dst=far))
        current = far
    if not steps:
        raise StuckAtEvenVertex(current, f"no edges at start {format_point(current)}")
    if current == start or current not in corners:
        raise StuckAtEvenVertex(current)
    return Trail(start=start, steps=tuple(steps), end=current)


@dataclass(frozen=True)
class YSequence:
    """Positions of the trail vertices along one axis, zero steps dropped.

    ``points`` starts at 0, ends at ``length`` (the outer extent on ``axis``),
    stays within ``[0, length]``, and consecutive entries differ.  Every step
    ``|points[i+1] - points[i]|`` is the assigned-axis extent of some box, so
    it lies in the tracked set.
    """

    axis: int
    length: Fraction
    points: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")
        pts = self.points
        if len(pts) < 2:
            raise ValueError("a position sequence needs at least two points")
        if pts[0] != 0 or pts[-1] != self.length:
            raise ValueError(
                f"sequence must run from 0 to {format_rat(self.length)}, got "
                f"{format_rat(pts[0])} .. {format_rat(pts[-1])}"
            )
        if any(v < 0 or v > self.length for v in pts):
            raise ValueError("positions must stay within [0, length]")
        if any(a == b for a, b in zip(pts, pts[1:])):
            raise ValueError("consecutive positions must differ")

    def step_lengths(self) -> tuple[Fraction, ...]:
        return tuple(abs(b - a) for a, b in zip(self.points, self.points[1:]))


def project_to_axis(t: Trail, outer: Box) -> YSequence:
    """Project a corner-to-corner trail onto one axis of the outer box.

    The axis is the smallest one on which start and end corners differ; on it
    one corner sits at 0 and the other at the full outer extent, and the
    sequence is oriented to start at 0.  Steps from edges parallel to other
    axes project to zero and are dropped.
    """
    differing = [
        j for j in range(1, outer.dim + 1) if t.start[j - 1] != t.end[j - 1]
    ]
    if not differing:
        raise SoundnessError("trail starts and ends at the same corner")
    j = differing[0]
    lo = outer.lo[j - 1]
    length = outer.extent(j)
    positions: list[Fraction] = []
    for v in t.points():
        pos = v[j - 1] - lo
        if not positions or pos != positions[-1]:
            positions.append(pos)
    if positions[0] != 0:
        positions.reverse()
    if positions[0] != 0 or positions[-1] != length:
        raise SoundnessError(
            f"projection endpoints {format_rat(positions[0])}, "
            f"{format_rat(positions[-1])} do not span [0, {format_rat(length)}]"
        )
    return YSequence(axis=j, length=length, points=tuple(positions))
