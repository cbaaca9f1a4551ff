"""Relators induced by a degeneration's line combinatorics.

After regeneration, each line ``i`` contributes two braid-monodromy
generators that the plane identification collapses to a single involution
``g_i``.  Two lines meeting at a singular point are either tangent (adjacent
in the rotation at that vertex) or transversal; lines sharing no vertex meet
parasitically after regeneration.  The induced relators are:

* ``g_i g_i`` for every line (involution),
* the braid relation ``g_i g_j g_i g_j^-1 g_i^-1 g_j^-1`` for tangent pairs,
* the commutator ``[g_i, g_j]`` for transversal and parasitic pairs,
* one equation per inner k-point tying the two "ends" of its closed fan,
* optionally, fork relators ``[g_i, g_j g_k g_j]`` for pairwise tangent
  triples not through a single vertex; these are consequences of the above
  and only accelerate coset enumeration.

The projective relation is omitted throughout: under the plane
identification and the involutions it freely reduces to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .complexes import PlanarComplex, SingularPoint

# A word is a tuple of (generator, exponent) letters with exponent +1 or -1.
Letter = tuple[int, int]
Word = tuple[Letter, ...]


class UnsupportedCaseError(ValueError):
    """Raised for vertex configurations outside the catalogued range."""


def word(*letters: int) -> Word:
    """Build a word from signed generator indices: ``word(1, -2)`` is g1 g2^-1."""
    return tuple((abs(g), 1 if g > 0 else -1) for g in letters)


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Word) -> Word:
    out: list[Letter] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def involution_relator(i: int) -> Word:
    return word(i, i)


def triple_relator(i: int, j: int) -> Word:
    """Braid relation for a tangent pair, in commutator-like form."""
    i, j = sorted((i, j))
    return word(i, j, i, -j, -i, -j)


def commutator_relator(i: int, j: int) -> Word:
    i, j = sorted((i, j))
    return word(i, j, -i, -j)


def fork_relator(i: int, j: int, k: int) -> Word:
    """``[g_i, g_j g_k g_j]`` for a pairwise tangent, non-concurrent triple."""
    i, j, k = sorted((i, j, k))
    return word(i, j, k, j, -i, -j, -k, -j)


def tangent_pairs(points: Iterable[SingularPoint]) -> tuple[tuple[int, int], ...]:
    pairs: set[tuple[int, int]] = set()
    for pt in points:
        pairs.update(pt.tangent_pairs())
    return tuple(sorted(pairs))


def transversal_pairs(points: Iterable[SingularPoint]) -> tuple[tuple[int, int], ...]:
    pairs: set[tuple[int, int]] = set()
    for pt in points:
        pairs.update(pt.transversal_pairs())
    return tuple(sorted(pairs))


def inner_point_relators(
    points: Iterable[SingularPoint],
    extra: Sequence[Word] | None = None,
) -> tuple[tuple[Word, int], ...]:
    """Relator and source vertex for each inner point.

    With lines sorted as l1 < l2 < ... the catalogued numbering schemes make
    these hold (checked against the symmetric-group images by callers):

    * k=3: ``g_l3 = g_l1 g_l2 g_l1``
    * k=4: ``g_l1 g_l2 g_l1 = g_l4 g_l3 g_l4``
    * k=5: ``g_l1 g_l2 g_l1 = g_l4 g_l5 g_l3 g_l5 g_l4``
    * k=6: no printed closed form; the relators are taken from catalogue
      data and must be passed in via ``extra``.
    """
    out: list[tuple[Word, int]] = []
    extra_used = False
    for pt in sorted(points, key=lambda p: p.vertex):
        if pt.kind != "inner":
            continue
        ls = sorted(pt.lines_cyclic)
        if pt.multiplicity == 3:
            a, b, c = ls
            rel = free_reduce(word(a, b, a) + inverse(word(c)))
        elif pt.multiplicity == 4:
            a, b, c, d = ls
            rel = free_reduce(word(a, b, a) + inverse(word(d, c, d)))
        elif pt.multiplicity == 5:
            a, b, c, d, e = ls
            rel = free_reduce(word(a, b, a) + inverse(word(d, e, c, e, d)))
        elif pt.multiplicity == 6:
            if extra is None or extra_used:
                raise UnsupportedCaseError(
                    f"inner 6-point at vertex {pt.vertex}: relators must come from catalogue data"
                )
            out.extend((tuple(w), pt.vertex) for w in extra)
            extra_used = True
            continue
        else:
            raise UnsupportedCaseError(
                f"inner {pt.multiplicity}-point at vertex {pt.vertex} is outside the supported range"
            )
        out.append((rel, pt.vertex))
    return tuple(out)


def fork_triples(
    tangent: Iterable[tuple[int, int]],
    points: Iterable[SingularPoint],
) -> tuple[tuple[int, int, int], ...]:
    """Pairwise tangent line triples not concurrent at a single vertex."""
    tset = {tuple(sorted(p)) for p in tangent}
    lines = sorted({i for p in tset for i in p})
    concurrent = {
        trip
        for pt in points
        if pt.multiplicity >= 3
        for trip in _triples_within(sorted(pt.lines_cyclic))
    }
    out = []
    for ai, a in enumerate(lines):
        for bi in range(ai + 1, len(lines)):
            b = lines[bi]
            if (a, b) not in tset:
                continue
            for c in lines[bi + 1 :]:
                if (a, c) in tset and (b, c) in tset and (a, b, c) not in concurrent:
                    out.append((a, b, c))
    return tuple(out)


def _triples_within(ls: Sequence[int]) -> list[tuple[int, int, int]]:
    n = len(ls)
    return [
        (ls[i], ls[j], ls[k])
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
    ]


def fork_relators(
    tangent: Iterable[tuple[int, int]],
    points: Iterable[SingularPoint],
) -> tuple[Word, ...]:
    return tuple(fork_relator(*t) for t in fork_triples(tangent, points))


@dataclass(frozen=True)
class Presentation:
    """A finite presentation with one annotation tag per relator."""

    generators: tuple[int, ...]
    relators: tuple[Word, ...]
    annotations: tuple[str, ...]

    def __post_init__(self):
        if len(self.relators) != len(self.annotations):
            raise ValueError("each relator needs exactly one annotation")

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for tag in self.annotations:
            out[tag] = out.get(tag, 0) + 1
        return out


def reduced_presentation(
    complex_: PlanarComplex,
    *,
    include_forks: bool = False,
    inner6_relators: Sequence[Word] | None = None,
) -> Presentation:
    """The presentation of the plane-identified quotient of the monodromy group.

    Generators are the line indices; the presented group surjects onto the
    symmetric group on the planes by sending each line to the transposition
    of its two planes.
    """
    points = complex_.classify_vertices()
    generators = tuple(sorted(complex_.line_numbering))
    relators: list[Word] = []
    tags: list[str] = []

    for i in generators:
        relators.append(involution_relator(i))
        tags.append("involution")
    for i, j in tangent_pairs(points):
        relators.append(triple_relator(i, j))
        tags.append("triple")
    commuting = sorted(set(transversal_pairs(points)) | set(complex_.disjoint_line_pairs()))
    for i, j in commuting:
        relators.append(commutator_relator(i, j))
        tags.append("commutator")
    for rel, _vertex in inner_point_relators(points, extra=inner6_relators):
        relators.append(rel)
        tags.append("inner-point")
    if include_forks:
        for rel in fork_relators(tangent_pairs(points), points):
            relators.append(rel)
            tags.append("fork")
    return Presentation(generators, tuple(relators), tuple(tags))


# -- serialization ---------------------------------------------------------------


def word_text(w: Word) -> str:
    return " ".join(f"g{g}" if e == 1 else f"g{g}^-1" for g, e in w) or "1"


def presentation_text(p: Presentation) -> str:
    lines = ["generators: " + " ".join(f"g{g}" for g in p.generators)]
    last_tag = None
    for rel, tag in zip(p.relators, p.annotations):
        if tag != last_tag:
            lines.append(f"# {tag}")
            last_tag = tag
        lines.append(word_text(rel))
    return "\n".join(lines) + "\n"


def presentation_json(p: Presentation) -> dict:
    return {
        "format": "degen-presentation/1",
        "generators": list(p.generators),
        "relators": [
            {"word": [[g, e] for g, e in rel], "annotation": tag}
            for rel, tag in zip(p.relators, p.annotations)
        ],
    }


def word_from_json(data: Sequence[Sequence[int]]) -> Word:
    w = tuple((int(g), int(e)) for g, e in data)
    if any(e not in (1, -1) for _, e in w):
        raise ValueError(f"exponents must be +-1: {data}")
    return w
