"""Decision pipeline for triviality of the cover's fundamental group.

The verdict combines three ingredients, applied strictly in this order:

1. A branch certificate: a plane meeting three or more lines that lies on no
   cycle of the line-dual graph forces a nontrivial group, regardless of any
   generator equalities.
2. Equality propagation: local rules at low-multiplicity singular points
   (optionally extended by catalogued hints) establish which lines have
   their two regenerated generators identified.  Only when every line is
   covered does the reduced presentation present the group in question.
3. Coset enumeration of the reduced presentation: order n! means the group
   is the symmetric group and the cover's fundamental group is trivial; a
   larger order certifies nontriviality; running out of cosets leaves the
   case undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complexes import PlanarComplex, SingularPoint
from .fpgroup import (
    DEFAULT_MAX_COSETS,
    Completed,
    EnumerationStats,
    Overflow,
    todd_coxeter,
)
from .relations import Word, reduced_presentation

ENGINE_MODES = ("lemmas-only", "with-hints")


class PipelineError(ValueError):
    """Inconsistent pipeline state (for example an impossible coset count)."""


@dataclass(frozen=True)
class CaseHint:
    """A catalogued equality with the conditions under which it applies.

    `citation` names the printed derivation the equality is lifted from so a
    verdict can always be traced back to its source.
    """

    line: int
    preconditions: frozenset[int]
    citation: str

    @classmethod
    def from_json(cls, data: dict) -> "CaseHint":
        return cls(
            line=int(data["line"]),
            preconditions=frozenset(int(x) for x in data["preconditions"]),
            citation=str(data["citation"]),
        )

    def to_json(self) -> dict:
        return {
            "line": self.line,
            "preconditions": sorted(self.preconditions),
            "citation": self.citation,
        }


@dataclass(frozen=True)
class DerivationStep:
    """One established equality and the rule application that produced it."""

    line: int
    rule: str
    vertex: int | None
    used: tuple[int, ...]
    citation: str | None = None

    def to_json(self) -> dict:
        out = {"line": self.line, "rule": self.rule, "used": list(self.used)}
        if self.vertex is not None:
            out["vertex"] = self.vertex
        if self.citation is not None:
            out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class EqualityFacts:
    """Fixed point of equality propagation, with a replayable log."""

    lines: frozenset[int]
    established: frozenset[int]
    steps: tuple[DerivationStep, ...]
    stale_hints: tuple[CaseHint, ...]

    @property
    def complete(self) -> bool:
        return self.established >= self.lines

    def to_json(self) -> dict:
        return {
            "lines": sorted(self.lines),
            "established": sorted(self.established),
            "complete": self.complete,
            "steps": [s.to_json() for s in self.steps],
            "stale_hints": [h.to_json() for h in self.stale_hints],
        }


def propagate_equalities(
    points: Iterable[SingularPoint],
    hints: Iterable[CaseHint] = (),
) -> EqualityFacts:
    """Close the equality set under the local rules and applicable hints.

    Rules fire per singular point on its sorted line indices l1 < l2 < ...:
    a branch point of one line gives l1; a two-line point transfers an
    equality to the other line; an inner triple point gives l1 outright and
    transfers between l2 and l3; an outer triple point gives all three once
    l1 or l2 is known.  Points of four or more lines propagate nothing on
    their own; printed derivations for them arrive as hints.  Iteration
    order is fixed (vertices ascending, then hints in catalog order) so the
    step log is reproducible.
    """
    pts = sorted(points, key=lambda p: p.vertex)
    pending = list(hints)
    lines = frozenset(i for p in pts for i in p.lines_cyclic)
    eq: set[int] = set()
    steps: list[DerivationStep] = []

    def establish(line: int, rule: str, vertex: int | None, used: Iterable[int],
                  citation: str | None = None) -> bool:
        if line in eq:
            return False
        eq.add(line)
        steps.append(DerivationStep(line, rule, vertex, tuple(sorted(used)), citation))
        return True

    changed = True
    while changed:
        changed = False
        for p in pts:
            srt = sorted(p.lines_cyclic)
            if p.kind == "outer" and p.multiplicity == 1:
                changed |= establish(srt[0], "one-point", p.vertex, ())
            elif p.kind == "outer" and p.multiplicity == 2:
                a, b = srt
                if a in eq and b not in eq:
                    changed |= establish(b, "two-point", p.vertex, (a,))
                elif b in eq and a not in eq:
                    changed |= establish(a, "two-point", p.vertex, (b,))
            elif p.kind == "inner" and p.multiplicity == 3:
                a, b, c = srt
                changed |= establish(a, "inner-three-point", p.vertex, ())
                if b in eq and c not in eq:
                    changed |= establish(c, "inner-three-point", p.vertex, (b,))
                elif c in eq and b not in eq:
                    changed |= establish(b, "inner-three-point", p.vertex, (c,))
            elif p.kind == "outer" and p.multiplicity == 3:
                a, b, c = srt
                if (a in eq or b in eq) and not {a, b, c} <= eq:
                    seed = a if a in eq else b
                    for x in (a, b, c):
                        if x not in eq:
                            changed |= establish(
                                x, "outer-three-point", p.vertex, (seed,)
                            )
        for h in list(pending):
            if h.preconditions <= eq:
                pending.remove(h)
                changed |= establish(
                    h.line, "hint", None, h.preconditions, h.citation
                )
    return EqualityFacts(
        lines=lines,
        established=frozenset(eq),
        steps=tuple(steps),
        stale_hints=tuple(pending),
    )


# ----------------------------------------------------------------------
# Branch certificate.
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ForkVertex:
    """A plane of line-valency >= 3 lying on no cycle of the dual graph."""

    plane: int
    lines: tuple[int, int, int]

    def to_json(self) -> dict:
        return {"kind": "fork-vertex", "plane": self.plane, "lines": list(self.lines)}


@dataclass(frozen=True)
class CosetOrder:
    """The enumerated order of the reduced group."""

    order: int

    def to_json(self) -> dict:
        return {"kind": "coset-order", "order": self.order}


def fork_certificate(complex_: PlanarComplex) -> ForkVertex | None:
    """First plane (by number) whose dual-graph node is an off-cycle fork.

    A node is on a cycle exactly when two of its neighbors stay connected
    after the node is removed.
    """
    dual = complex_.dual_graph()
    adj: dict[int, set[int]] = {n: set() for n in dual.nodes}
    incident: dict[int, list[int]] = {n: [] for n in dual.nodes}
    for line, p, q in dual.edges:
        adj[p].add(q)
        adj[q].add(p)
        incident[p].append(line)
        incident[q].append(line)
    for node in sorted(dual.nodes):
        if dual.degree(node) < 3:
            continue
        neigh = sorted(adj[node])
        if _touches_cycle(node, neigh, adj):
            continue
        lines = tuple(sorted(incident[node])[:3])
        return ForkVertex(plane=node, lines=lines)
    return None


def _touches_cycle(node: int, neigh: Sequence[int], adj: dict[int, set[int]]) -> bool:
    for i in range(len(neigh)):
        for j in range(i + 1, len(neigh)):
            stack = [neigh[i]]
            seen = {node, neigh[i]}
            while stack:
                x = stack.pop()
                if x == neigh[j]:
                    return True
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
    return False


# ----------------------------------------------------------------------
# Verdict assembly.
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of the pipeline together with everything needed to audit it."""

    outcome: str
    reason: str
    engine_mode: str
    certificate: ForkVertex | CosetOrder | None
    equalities: EqualityFacts
    enumeration: EnumerationStats | None = None

    def to_json(self) -> dict:
        out = {
            "outcome": self.outcome,
            "reason": self.reason,
            "engine_mode": self.engine_mode,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "equalities": self.equalities.to_json(),
        }
        if self.enumeration is not None:
            s = self.enumeration
            out["enumeration"] = {
                "strategy": s.strategy,
                "cosets_defined": s.cosets_defined,
                "live_cosets": s.live_cosets,
                "coincidences": s.coincidences,
            }
        return out


def enumeration_verdict(outcome, expected_order: int, *, engine_mode: str,
                        equalities: EqualityFacts) -> Verdict:
    """Map an enumeration outcome to a verdict; exposed for direct testing."""
    if isinstance(outcome, Overflow):
        return Verdict(
            outcome="undecided",
            reason=f"enumeration overflowed at {outcome.limit} cosets",
            engine_mode=engine_mode,
            certificate=None,
            equalities=equalities,
            enumeration=outcome.stats,
        )
    assert isinstance(outcome, Completed)
    if outcome.order == expected_order:
        return Verdict(
            outcome="trivial",
            reason=f"reduced group has order {outcome.order}",
            engine_mode=engine_mode,
            certificate=CosetOrder(outcome.order),
            equalities=equalities,
            enumeration=outcome.stats,
        )
    if outcome.order > expected_order:
        return Verdict(
            outcome="nontrivial",
            reason=(
                f"reduced group has order {outcome.order},"
                f" exceeding {expected_order}"
            ),
            engine_mode=engine_mode,
            certificate=CosetOrder(outcome.order),
            equalities=equalities,
            enumeration=outcome.stats,
        )
    raise PipelineError(
        f"enumerated order {outcome.order} is below the symmetric image"
        f" order {expected_order}"
    )


def decide(
    source,
    *,
    use_hints: bool = True,
    max_cosets: int = DEFAULT_MAX_COSETS,
    strategy: str = "relator-first",
) -> Verdict:
    """Run the full pipeline on a complex or a catalog record.

    `source` is either a `PlanarComplex` or any object carrying `.complex`,
    `.hints`, and `.extra_inner_relators` attributes (a catalog record).
    With `use_hints=False` the catalogued hints are ignored, which reports
    what the local rules alone can settle.
    """
    complex_ = getattr(source, "complex", source)
    if not isinstance(complex_, PlanarComplex):
        raise PipelineError(f"cannot decide on {type(source).__name__}")
    hints: Sequence[CaseHint] = getattr(source, "hints", ())
    extra: Sequence[Word] | None = getattr(source, "extra_inner_relators", None) or None
    engine_mode = "with-hints" if use_hints else "lemmas-only"

    points = complex_.classify_vertices()
    facts = propagate_equalities(points, hints if use_hints else ())

    fork = fork_certificate(complex_)
    if fork is not None:
        return Verdict(
            outcome="nontrivial",
            reason=(
                f"plane {fork.plane} meets lines"
                f" {', '.join(map(str, fork.lines))} and lies on no dual cycle"
            ),
            engine_mode=engine_mode,
            certificate=fork,
            equalities=facts,
        )

    if not facts.complete:
        missing = sorted(facts.lines - facts.established)
        return Verdict(
            outcome="undecided",
            reason=f"no equality derived for lines {', '.join(map(str, missing))}",
            engine_mode=engine_mode,
            certificate=None,
            equalities=facts,
        )

    pres = reduced_presentation(
        complex_, include_forks=True, inner6_relators=extra
    )
    outcome = todd_coxeter(pres, max_cosets=max_cosets, strategy=strategy)
    expected = math.factorial(len(complex_.triangles))
    return enumeration_verdict(
        outcome, expected, engine_mode=engine_mode, equalities=facts
    )
