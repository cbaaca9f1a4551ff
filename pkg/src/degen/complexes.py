"""Planar simplicial complexes modelling degenerations of surfaces.

A degeneration of a degree-``n`` surface is recorded as a planar complex:
``n`` triangles (the planes), straight edges, exact rational vertex
coordinates.  Interior edges (shared by two triangles) are the lines of the
degenerated branch curve and carry the 1..L numbering that the group-theoretic
layer works with.  Vertices met by at least one line are the singular points;
each is an inner point (closed fan of triangles) or an outer point (open fan).

The interchange JSON format ``degen-complex/1`` stores vertices as
``[id, [px, py, qx, qy]]`` with coordinates ``(px/qx, py/qy)``, triangles as
``[plane, [v1, v2, v3]]``, and lines as ``[index, [v1, v2]]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .geometry import Point, ccw_direction_key, orient, point_in_triangle, segments_conflict

FORMAT = "degen-complex/1"


class ComplexError(ValueError):
    """Raised for malformed interchange data or operations on invalid complexes."""


@dataclass(frozen=True)
class Line:
    """An interior edge: the common edge of exactly two planes."""

    index: int
    vertices: tuple[int, int]
    planes: tuple[int, int]


@dataclass(frozen=True)
class SingularPoint:
    """A vertex met by ``multiplicity`` lines.

    ``lines_cyclic`` lists the incident line indices in rotation order around
    the vertex: a full cycle for an inner point (rotated to start at the
    smallest index), the open fan order for an outer point.
    """

    vertex: int
    kind: str  # "inner" | "outer"
    multiplicity: int
    lines_cyclic: tuple[int, ...]

    def tangent_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs of lines adjacent in the rotation at this vertex."""
        c = self.lines_cyclic
        if self.multiplicity < 2:
            return ()
        if self.multiplicity == 2:
            return (tuple(sorted(c)),)
        pairs = [tuple(sorted((c[i], c[i + 1]))) for i in range(len(c) - 1)]
        if self.kind == "inner":
            pairs.append(tuple(sorted((c[-1], c[0]))))
        return tuple(sorted(set(pairs)))

    def transversal_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs of lines meeting here without being rotation-adjacent."""
        tangent = set(self.tangent_pairs())
        allp = {
            tuple(sorted((a, b)))
            for i, a in enumerate(self.lines_cyclic)
            for b in self.lines_cyclic[i + 1 :]
        }
        return tuple(sorted(allp - tangent))


@dataclass(frozen=True)
class DualGraph:
    """Planes as nodes, lines as edges (the dual tree-or-graph of the complex)."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (line index, plane, plane)

    def degree(self, node: int) -> int:
        return sum(1 for _, a, b in self.edges if node in (a, b))

    def incident_lines(self, node: int) -> tuple[int, ...]:
        return tuple(sorted(line for line, a, b in self.edges if node in (a, b)))

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj: dict[int, set[int]] = {v: set() for v in self.nodes}
        for _, a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]  # structural: the data does not describe a complex
    violations: tuple[str, ...]  # semantic: not a valid planar degeneration

    @property
    def ok(self) -> bool:
        return not self.errors and not self.violations


class PlanarComplex:
    """An immutable planar triangle complex with numbered interior edges."""

    def __init__(
        self,
        vertices: Mapping[int, Point],
        triangles: Mapping[int, tuple[int, int, int]],
        line_numbering: Mapping[int, tuple[int, int]],
    ):
        self.vertices: dict[int, Point] = {
            int(v): (Fraction(x), Fraction(y)) for v, (x, y) in vertices.items()
        }
        self.triangles: dict[int, tuple[int, int, int]] = {
            int(p): tuple(int(v) for v in tri) for p, tri in triangles.items()
        }
        self.line_numbering: dict[int, tuple[int, int]] = {
            int(i): tuple(int(v) for v in pair) for i, pair in line_numbering.items()
        }

    # -- derived incidence data -------------------------------------------------

    def edge_planes(self) -> dict[frozenset[int], list[int]]:
        """Map each edge (as a vertex pair) to the planes containing it."""
        out: dict[frozenset[int], list[int]] = {}
        for plane in sorted(self.triangles):
            a, b, c = self.triangles[plane]
            for e in (frozenset((a, b)), frozenset((b, c)), frozenset((a, c))):
                out.setdefault(e, []).append(plane)
        return out

    def interior_lines(self) -> dict[int, Line]:
        """The numbered lines, each with its two incident planes."""
        ep = self.edge_planes()
        lines: dict[int, Line] = {}
        for index in sorted(self.line_numbering):
            pair = self.line_numbering[index]
            planes = ep.get(frozenset(pair), [])
            if len(planes) != 2:
                raise ComplexError(
                    f"line {index} {pair} is not an interior edge (in {len(planes)} planes)"
                )
            lines[index] = Line(index, pair, (planes[0], planes[1]))
        return lines

    def boundary_edges(self) -> set[frozenset[int]]:
        return {e for e, ps in self.edge_planes().items() if len(ps) == 1}

    def _rotation(self, v: int) -> list[int]:
        """Neighbouring vertices of ``v`` sorted counterclockwise."""
        nbrs = sorted(
            {w for e in self.edge_planes() if v in e for w in e if w != v}
        )
        pv = self.vertices[v]
        dirs = {w: (self.vertices[w][0] - pv[0], self.vertices[w][1] - pv[1]) for w in nbrs}
        key = ccw_direction_key(list(dirs.values()))
        return sorted(nbrs, key=lambda w: key(dirs[w]))

    def _fan_gaps(self, v: int) -> tuple[list[int], list[int]]:
        """Rotation order at ``v`` and the positions after which no triangle sits."""
        rot = self._rotation(v)
        tris = {frozenset(t) for t in self.triangles.values()}
        gaps = [
            i
            for i in range(len(rot))
            if frozenset((v, rot[i], rot[(i + 1) % len(rot)])) not in tris
        ]
        if len(rot) == 1:
            gaps = [0]
        return rot, gaps

    # -- public queries ----------------------------------------------------------

    def validate(self) -> ValidationReport:
        errors: list[str] = []
        seen_pts: dict[Point, int] = {}
        for v, p in sorted(self.vertices.items()):
            if p in seen_pts:
                errors.append(f"vertices {seen_pts[p]} and {v} share coordinates {p}")
            seen_pts[p] = v
        seen_tris: dict[frozenset[int], int] = {}
        for plane, tri in sorted(self.triangles.items()):
            missing = [v for v in tri if v not in self.vertices]
            if missing:
                errors.append(f"plane {plane} references unknown vertices {missing}")
                continue
            if len(set(tri)) != 3:
                errors.append(f"plane {plane} repeats a vertex: {tri}")
                continue
            if orient(*(self.vertices[v] for v in tri)) == 0:
                errors.append(f"plane {plane} is degenerate (collinear): {tri}")
            key = frozenset(tri)
            if key in seen_tris:
                errors.append(f"planes {seen_tris[key]} and {plane} share all vertices")
            seen_tris[key] = plane
        if not self.triangles:
            errors.append("no triangles")
        if errors:
            return ValidationReport(tuple(errors), ())

        ep = self.edge_planes()
        for e, ps in sorted(ep.items(), key=lambda kv: sorted(kv[0])):
            if len(ps) > 2:
                errors.append(f"edge {sorted(e)} lies in {len(ps)} planes: {ps}")
        interior = {e for e, ps in ep.items() if len(ps) == 2}
        numbered = {}
        for i, pair in sorted(self.line_numbering.items()):
            e = frozenset(pair)
            if len(e) != 2 or not e <= set(self.vertices):
                errors.append(f"line {i} has bad endpoints {pair}")
            elif e not in interior:
                errors.append(f"line {i} {pair} is not an interior edge")
            elif e in numbered:
                errors.append(f"lines {numbered[e]} and {i} number the same edge")
            else:
                numbered[e] = i
        for e in sorted(interior - set(numbered), key=sorted):
            errors.append(f"interior edge {sorted(e)} has no line number")
        if sorted(self.line_numbering) != list(range(1, len(self.line_numbering) + 1)):
            errors.append(
                f"line indices are not 1..L: {sorted(self.line_numbering)}"
            )
        if errors:
            return ValidationReport(tuple(errors), ())

        violations: list[str] = []
        # Support connectivity via shared vertices.
        planes = sorted(self.triangles)
        parent = {p: p for p in planes}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_vertex: dict[int, list[int]] = {}
        for p, tri in self.triangles.items():
            for v in tri:
                by_vertex.setdefault(v, []).append(p)
        for group in by_vertex.values():
            for p in group[1:]:
                parent[find(p)] = find(group[0])
        if len({find(p) for p in planes}) > 1:
            violations.append("support is disconnected")
        elif not self.dual_graph().is_connected():
            violations.append("interior is disconnected (planes do not chain along lines)")

        for v in sorted(self.vertices):
            try:
                _, gaps = self._fan_gaps(v)
            except ValueError as exc:
                violations.append(f"vertex {v}: {exc}")
                continue
            if len(gaps) > 1:
                violations.append(f"vertex {v} is pinched: triangles form {len(gaps)} fans")

        euler = len(self.vertices) - len(ep) + len(self.triangles)
        if euler != 1:
            violations.append(f"Euler characteristic {euler} != 1 (support is not a disk)")

        if not violations:
            violations.extend(self._embedding_conflicts(ep))
        return ValidationReport((), tuple(violations))

    def _embedding_conflicts(self, ep: Mapping[frozenset[int], list[int]]) -> list[str]:
        out: list[str] = []
        edges = [tuple(sorted(e)) for e in ep]
        for i, e in enumerate(edges):
            a, b = (self.vertices[v] for v in e)
            for f in edges[i + 1 :]:
                c, d = (self.vertices[v] for v in f)
                if segments_conflict(a, b, c, d):
                    out.append(f"edges {e} and {f} overlap or cross")
        for plane, tri in sorted(self.triangles.items()):
            pts = [self.vertices[v] for v in tri]
            for v, p in sorted(self.vertices.items()):
                if v not in tri and point_in_triangle(p, *pts):
                    out.append(f"vertex {v} lies inside plane {plane}")
        return out

    def classify_vertices(self) -> list[SingularPoint]:
        """One ``SingularPoint`` per vertex met by at least one line."""
        line_of = {frozenset(p): i for i, p in self.line_numbering.items()}
        points: list[SingularPoint] = []
        for v in sorted(self.vertices):
            rot, gaps = self._fan_gaps(v)
            incident = [
                (w, line_of.get(frozenset((v, w)))) for w in rot
            ]
            if all(idx is None for _, idx in incident):
                continue
            if len(gaps) > 1:
                raise ComplexError(f"vertex {v} is pinched; classify needs a valid complex")
            if not gaps:
                # Closed fan: every incident edge is a line.
                cyc = [idx for _, idx in incident]
                if any(i is None for i in cyc):
                    raise ComplexError(f"inner vertex {v} has an unnumbered edge")
                start = cyc.index(min(cyc))
                cyc = cyc[start:] + cyc[:start]
                points.append(SingularPoint(v, "inner", len(cyc), tuple(cyc)))
            else:
                # Open fan: rotate so the gap sits at the end; the two extreme
                # edges are boundary, everything between is a line.
                k = gaps[0] + 1
                ordered = incident[k:] + incident[:k]
                fan = [idx for _, idx in ordered[1:-1]] if len(ordered) > 2 else []
                head, tail = ordered[0][1], ordered[-1][1]
                if head is not None or tail is not None or any(i is None for i in fan):
                    raise ComplexError(f"vertex {v}: boundary/line pattern is inconsistent")
                if fan:
                    points.append(SingularPoint(v, "outer", len(fan), tuple(fan)))
        return points

    def dual_graph(self) -> DualGraph:
        edges = tuple(
            (line.index, line.planes[0], line.planes[1])
            for line in self.interior_lines().values()
        )
        return DualGraph(tuple(sorted(self.triangles)), edges)

    def disjoint_line_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs of lines sharing no vertex (parasitic intersections after regeneration)."""
        pairs = []
        items = sorted(self.line_numbering.items())
        for i, (ia, pa) in enumerate(items):
            for ib, pb in items[i + 1 :]:
                if not set(pa) & set(pb):
                    pairs.append((ia, ib))
        return tuple(pairs)

    # -- interchange ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "vertices": [
                [v, [x.numerator, y.numerator, x.denominator, y.denominator]]
                for v, (x, y) in sorted(self.vertices.items())
            ],
            "triangles": [[p, list(t)] for p, t in sorted(self.triangles.items())],
            "line_numbering": [[i, list(p)] for i, p in sorted(self.line_numbering.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "PlanarComplex":
        if not isinstance(data, dict) or data.get("format") != FORMAT:
            raise ComplexError(
                f"unknown format {data.get('format')!r}; expected {FORMAT!r}"
                if isinstance(data, dict)
                else "complex JSON must be an object"
            )
        try:
            vertices: dict[int, Point] = {}
            for v, (px, py, qx, qy) in data["vertices"]:
                if int(v) in vertices:
                    raise ComplexError(f"duplicate vertex id {v}")
                vertices[int(v)] = (Fraction(int(px), int(qx)), Fraction(int(py), int(qy)))
            triangles: dict[int, tuple[int, int, int]] = {}
            for p, tri in data["triangles"]:
                if int(p) in triangles:
                    raise ComplexError(f"duplicate plane id {p}")
                triangles[int(p)] = tuple(int(v) for v in tri)
            lines: dict[int, tuple[int, int]] = {}
            for i, pair in data["line_numbering"]:
                if int(i) in lines:
                    raise ComplexError(f"duplicate line index {i}")
                lines[int(i)] = tuple(int(v) for v in pair)
        except ComplexError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc
        return cls(vertices, triangles, lines)

    @classmethod
    def loads(cls, text: str) -> "PlanarComplex":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ComplexError(f"invalid JSON: {exc}") from exc
        return cls.from_json(data)


def tangent_line_pairs(points: Iterable[SingularPoint]) -> tuple[tuple[int, int], ...]:
    """All unordered line pairs that are rotation-adjacent at some vertex."""
    pairs: set[tuple[int, int]] = set()
    for pt in points:
        pairs.update(pt.tangent_pairs())
    return tuple(sorted(pairs))
