"""Exact rational predicates for planar straight-line complexes.

All coordinates are ``fractions.Fraction`` pairs, so every predicate here is
exact: no epsilon tuning, no orientation flips from rounding.  The only
operations needed upstream are orientation tests, segment intersection
classification, and sorting directions counterclockwise around a vertex.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

Point = tuple[Fraction, Fraction]


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of triangle ``abc``: +1 ccw, -1 cw, 0 collinear.

    >>> O = Fraction(0)
    >>> orient((O, O), (Fraction(1), O), (O, Fraction(1)))
    1
    """
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    """True when collinear ``p`` lies within the closed bounding box of ``ab``."""
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_conflict(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when closed segments ``ab`` and ``cd`` intersect anywhere except at
    shared endpoints.

    A shared endpoint is the only contact allowed between distinct edges of a
    planar complex; crossings, T-contacts, and collinear overlaps all count as
    conflicts.
    """
    shared = {p for p in (a, b) if p in (c, d)}
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    for p, (u, v) in ((c, (a, b)), (d, (a, b)), (a, (c, d)), (b, (c, d))):
        if orient(u, v, p) == 0 and _on_segment(u, v, p) and p not in shared and p not in (u, v):
            return True
    # Collinear overlap with both endpoints shared is the same segment twice.
    if o1 == o2 == o3 == o4 == 0 and len(shared) == 2 and {a, b} != {c, d}:
        return True
    return False


def point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    """True when ``p`` lies strictly inside triangle ``abc``."""
    s = orient(a, b, c)
    if s == 0:
        return False
    return (
        orient(a, b, p) == s
        and orient(b, c, p) == s
        and orient(c, a, p) == s
    )


def _quadrant(d: Point) -> int:
    x, y = d
    if y == 0:
        return 0 if x > 0 else 4
    if y > 0:
        if x > 0:
            return 1
        return 2 if x == 0 else 3
    if x < 0:
        return 5
    return 6 if x == 0 else 7


def ccw_direction_key(directions: Sequence[Point]):
    """Sort key ordering direction vectors counterclockwise from the +x axis.

    Raises ``ValueError`` on a zero vector or on two parallel same-quadrant
    directions, since a straight-line complex cannot have two edges leaving a
    vertex in the same direction.
    """

    def cmp(u: Point, v: Point) -> int:
        if u == v:
            return 0
        qu, qv = _quadrant(u), _quadrant(v)
        if qu != qv:
            return -1 if qu < qv else 1
        cross = u[0] * v[1] - u[1] * v[0]
        if cross == 0:
            raise ValueError(f"parallel directions at a vertex: {u} and {v}")
        return -1 if cross > 0 else 1

    for d in directions:
        if d == (0, 0):
            raise ValueError("zero-length edge")
    return cmp_to_key(cmp)
