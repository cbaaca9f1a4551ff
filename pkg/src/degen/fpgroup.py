"""Finitely presented group machinery for the line presentations.

Two independent tools live here.  `todd_coxeter` runs coset enumeration on a
presentation and either completes with the group order or overflows a coset
budget; running out of room is a normal, reportable outcome, not an error.
`kernel_abelianization` computes the abelianized kernel of a permutation
representation by rewriting relators along a Schreier tree, which gives an
independent check on enumeration results.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .relations import Presentation, Word, free_reduce

STRATEGIES = ("relator-first", "coincidence-first")

DEFAULT_MAX_COSETS = 1_000_000


class EnumerationError(ValueError):
    """Invalid enumeration input (bad strategy, budget, or presentation)."""


@dataclass(frozen=True)
class EnumerationStats:
    """Bookkeeping totals from one enumeration run."""

    strategy: str
    cosets_defined: int
    live_cosets: int
    coincidences: int


@dataclass(frozen=True)
class Completed:
    """The coset table closed; `order` is the subgroup index."""

    order: int
    stats: EnumerationStats


@dataclass(frozen=True)
class Overflow:
    """The run hit `limit` defined cosets (live plus dead) before closing."""

    limit: int
    stats: EnumerationStats


EnumerationOutcome = Completed | Overflow


def _letters(w: Word, ngens: int) -> tuple[int, ...]:
    """Encode a word as column indices: 2(g-1) for g, 2(g-1)+1 for g^-1."""
    out = []
    for g, e in free_reduce(w):
        if not 1 <= g <= ngens:
            raise EnumerationError(f"generator {g} outside 1..{ngens}")
        out.append(2 * (g - 1) + (0 if e > 0 else 1))
    # conjugates are equal as relators, so cyclic reduction is safe
    while len(out) >= 2 and out[0] == out[-1] ^ 1:
        out = out[1:-1]
    return tuple(out)


class _Overrun(Exception):
    pass


class _Table:
    """Coset table with union-find coincidence tracking.

    Rows are stored flat in an `array` so a run that approaches the default
    budget stays within ordinary memory.  Entry 0 means undefined; cosets are
    numbered from 1 and coset 1 (the subgroup itself) can never die because
    merges always keep the smaller number.
    """

    def __init__(self, ncols: int, limit: int) -> None:
        self.ncols = ncols
        self.limit = limit
        self._zero = array("i", [0] * ncols)
        self.tab = array("i", self._zero)
        self.p = array("i", [0])
        self.defined = 0
        self.coincidences = 0
        self.dead: deque[int] = deque()
        self.deductions: list[tuple[int, int]] = []

    def define(self) -> int:
        if self.defined >= self.limit:
            raise _Overrun
        self.tab.extend(self._zero)
        self.p.append(len(self.p))
        self.defined += 1
        return len(self.p) - 1

    def rep(self, c: int) -> int:
        p = self.p
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            nxt = p[c]
            p[c] = r
            c = nxt
        return r

    def get(self, c: int, x: int) -> int:
        d = self.tab[c * self.ncols + x]
        return self.rep(d) if d else 0

    def set(self, c: int, x: int, d: int) -> None:
        self.tab[c * self.ncols + x] = d

    def link(self, c: int, x: int, d: int) -> None:
        self.set(c, x, d)
        self.set(d, x ^ 1, c)
        self.deductions.append((c, x))

    def merge(self, a: int, b: int) -> None:
        a = self.rep(a)
        b = self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        self.coincidences += 1
        self.dead.append(b)

    def process_coincidences(self) -> None:
        while self.dead:
            e = self.dead.popleft()
            base = e * self.ncols
            for x in range(self.ncols):
                d = self.tab[base + x]
                if not d:
                    continue
                self.tab[base + x] = 0
                self.tab[d * self.ncols + (x ^ 1)] = 0
                mu = self.rep(e)
                nu = self.rep(d)
                existing = self.get(mu, x)
                if existing:
                    self.merge(nu, existing)
                else:
                    back = self.get(nu, x ^ 1)
                    if back:
                        self.merge(mu, back)
                    else:
                        self.link(mu, x, nu)

    def live_count(self) -> int:
        return sum(1 for c in range(1, len(self.p)) if self.p[c] == c)


def _scan(t: _Table, alpha: int, w: Sequence[int], fill: bool) -> None:
    """Trace relator w from coset alpha, filling or deducing as allowed."""
    f = alpha
    i = 0
    b = alpha
    j = len(w) - 1
    while True:
        while i <= j:
            d = t.get(f, w[i])
            if not d:
                break
            f = d
            i += 1
        if i > j:
            if f != b:
                t.merge(f, b)
                t.process_coincidences()
            return
        while j >= i:
            d = t.get(b, w[j] ^ 1)
            if not d:
                break
            b = d
            j -= 1
        if j < i:
            t.merge(f, b)
            t.process_coincidences()
            return
        if j == i:
            t.link(f, w[i], b)
            return
        if not fill:
            return
        t.link(f, w[i], t.define())


def _run_relator_first(
    t: _Table, relators: Sequence[Sequence[int]], subgroup: Sequence[Sequence[int]]
) -> None:
    t.define()
    for w in subgroup:
        _scan(t, 1, w, fill=True)
    alpha = 1
    while alpha < len(t.p):
        if t.rep(alpha) != alpha:
            alpha += 1
            continue
        for w in relators:
            _scan(t, alpha, w, fill=True)
            if t.rep(alpha) != alpha:
                break
        if t.rep(alpha) == alpha:
            for x in range(t.ncols):
                if not t.get(alpha, x):
                    t.link(alpha, x, t.define())
        alpha += 1


def _conjugate_index(
    relators: Sequence[Sequence[int]], ncols: int
) -> list[list[tuple[int, ...]]]:
    """Cyclic conjugates of each relator and its inverse, keyed by first letter."""
    index: list[set[tuple[int, ...]]] = [set() for _ in range(ncols)]
    for w in relators:
        winv = tuple(x ^ 1 for x in reversed(w))
        for base in (w, winv):
            for k in range(len(base)):
                rot = base[k:] + base[:k]
                index[rot[0]].add(rot)
    return [sorted(s) for s in index]


def _run_coincidence_first(
    t: _Table, relators: Sequence[Sequence[int]], subgroup: Sequence[Sequence[int]]
) -> None:
    index = _conjugate_index(relators, t.ncols)

    def drain() -> None:
        while t.deductions:
            c, x = t.deductions.pop()
            gamma = t.rep(c)
            delta = t.get(gamma, x)
            for w in index[x]:
                _scan(t, gamma, w, fill=False)
            if delta:
                delta = t.rep(delta)
                for w in index[x ^ 1]:
                    _scan(t, delta, w, fill=False)

    t.define()
    for w in subgroup:
        _scan(t, 1, w, fill=True)
        drain()
    alpha = 1
    while alpha < len(t.p):
        if t.rep(alpha) != alpha:
            alpha += 1
            continue
        x = 0
        while x < t.ncols and t.rep(alpha) == alpha:
            if not t.get(alpha, x):
                t.link(alpha, x, t.define())
                drain()
            x += 1
        alpha += 1


def todd_coxeter(
    presentation: Presentation,
    subgroup: Iterable[Word] = (),
    *,
    max_cosets: int = DEFAULT_MAX_COSETS,
    strategy: str = "relator-first",
) -> EnumerationOutcome:
    """Enumerate cosets of the subgroup generated by `subgroup` words.

    With an empty subgroup the completed order is the group order.  The
    budget counts every coset ever defined, including ones later merged
    away, so runs are reproducible across strategies of the same name.
    """
    if strategy not in STRATEGIES:
        raise EnumerationError(f"unknown strategy {strategy!r}; use {STRATEGIES}")
    if max_cosets < 1:
        raise EnumerationError("max_cosets must be positive")
    gens = presentation.generators
    if tuple(gens) != tuple(range(1, len(gens) + 1)):
        raise EnumerationError("generators must be numbered 1..n contiguously")
    ngens = len(gens)
    relators = [r for r in (_letters(w, ngens) for w in presentation.relators) if r]
    subgroup_words = [w for w in (_letters(v, ngens) for v in subgroup) if w]
    t = _Table(2 * ngens, max_cosets)
    run = _run_relator_first if strategy == "relator-first" else _run_coincidence_first
    try:
        run(t, relators, subgroup_words)
    except _Overrun:
        stats = EnumerationStats(strategy, t.defined, t.live_count(), t.coincidences)
        return Overflow(max_cosets, stats)
    stats = EnumerationStats(strategy, t.defined, t.live_count(), t.coincidences)
    return Completed(stats.live_cosets, stats)


# ----------------------------------------------------------------------
# Permutation images and the abelianized kernel.
# ----------------------------------------------------------------------


def line_transpositions(complex_) -> dict[int, tuple[int, int]]:
    """Each line swaps the two planes it bounds; the standard symmetric image."""
    return {i: ln.planes for i, ln in complex_.interior_lines().items()}


def transposition_images(
    transpositions: Mapping[int, tuple[int, int]], degree: int
) -> dict[int, tuple[int, ...]]:
    """Expand plane pairs into full one-line permutations of 1..degree."""
    images = {}
    for g, (a, b) in transpositions.items():
        perm = list(range(1, degree + 1))
        perm[a - 1], perm[b - 1] = perm[b - 1], perm[a - 1]
        images[g] = tuple(perm)
    return images


def word_permutation(
    w: Word, images: Mapping[int, Sequence[int]], degree: int
) -> tuple[int, ...]:
    """Image of a word, composing left to right; permutations map 1..degree."""
    perm = list(range(degree))
    zero = {g: [v - 1 for v in img] for g, img in images.items()}
    for g, e in w:
        img = zero[g]
        if e < 0:
            inv = [0] * degree
            for i, v in enumerate(img):
                inv[v] = i
            img = inv
        for _ in range(abs(e)):
            perm = [img[v] for v in perm]
    return tuple(v + 1 for v in perm)


def relators_hold(
    presentation: Presentation, images: Mapping[int, Sequence[int]], degree: int
) -> bool:
    """Whether every relator maps to the identity permutation."""
    identity = tuple(range(1, degree + 1))
    return all(
        word_permutation(w, images, degree) == identity for w in presentation.relators
    )


@dataclass(frozen=True)
class KernelAbelianization:
    """Abelianization of the kernel of the permutation representation."""

    index: int
    rank: int
    torsion: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    factors: list[int] = []
    while a and a[0]:
        pivot = None
        best = None
        for i, row in enumerate(a):
            for j, v in enumerate(row):
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[0], a[i] = a[i], a[0]
        for row in a:
            row[0], row[j] = row[j], row[0]
        while True:
            if a[0][0] < 0:
                a[0] = [-v for v in a[0]]
            p = a[0][0]
            dirty = False
            for i in range(1, len(a)):
                q = a[i][0] // p
                if q:
                    a[i] = [v - q * w for v, w in zip(a[i], a[0])]
                if a[i][0]:
                    a[0], a[i] = a[i], a[0]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(1, len(a[0])):
                q = a[0][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[0]
                if a[0][j]:
                    for row in a:
                        row[0], row[j] = row[j], row[0]
                    dirty = True
                    break
            if dirty:
                continue
            offender = None
            for i in range(1, len(a)):
                for j in range(1, len(a[i])):
                    if a[i][j] % p:
                        offender = i
                        break
                if offender:
                    break
            if offender is None:
                break
            a[0] = [v + w for v, w in zip(a[0], a[offender])]
        factors.append(a[0][0])
        a = [row[1:] for row in a[1:]]
    return tuple(f for f in factors if f)


def _unit_eliminate(
    rows: list[dict[int, int]],
) -> tuple[int, list[dict[int, int]]]:
    """Strike rows and columns through +-1 pivots; returns (units, residue).

    Each strike removes one invariant factor equal to 1 without changing the
    others, shrinking the matrix before the dense normal form runs.
    """
    by_col: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for c in row:
            by_col.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    queue = deque(
        (i, c) for i in alive for c, v in rows[i].items() if abs(v) == 1
    )
    units = 0
    while queue:
        i, c = queue.popleft()
        if i not in alive:
            continue
        v = rows[i].get(c, 0)
        if abs(v) != 1:
            continue
        if v == -1:
            rows[i] = {k: -w for k, w in rows[i].items()}
        pivot = rows[i]
        for k in list(by_col.get(c, ())):
            if k == i or k not in alive:
                continue
            factor = rows[k].get(c, 0)
            if not factor:
                continue
            row = rows[k]
            for pc, pv in pivot.items():
                new = row.get(pc, 0) - factor * pv
                if new:
                    row[pc] = new
                    by_col.setdefault(pc, set()).add(k)
                    if abs(new) == 1:
                        queue.append((k, pc))
                else:
                    row.pop(pc, None)
        alive.discard(i)
        for pc in pivot:
            by_col.get(pc, set()).discard(i)
        by_col.pop(c, None)
        units += 1
    residue = [rows[i] for i in sorted(alive) if rows[i]]
    return units, residue


def kernel_abelianization(
    presentation: Presentation,
    images: Mapping[int, Sequence[int]],
    degree: int,
) -> KernelAbelianization:
    """Abelianized kernel of the map sending generator g to images[g].

    The images must kill every relator, otherwise the map is not defined on
    the presented group.  Cosets of the kernel are the elements of the image
    subgroup; relators rewritten along a spanning tree of the coset graph
    present the kernel, and integer elimination reads off its abelianization.
    """
    if set(images) != set(presentation.generators):
        raise EnumerationError("images must cover exactly the generators")
    identity = tuple(range(1, degree + 1))
    for w in presentation.relators:
        if word_permutation(w, images, degree) != identity:
            raise EnumerationError(f"relator {w} does not map to the identity")

    zero = {g: tuple(v - 1 for v in images[g]) for g in images}
    inv = {}
    for g, p in zero.items():
        q = [0] * degree
        for i, v in enumerate(p):
            q[v] = i
        inv[g] = tuple(q)

    start = tuple(range(degree))
    coset_id = {start: 0}
    order = [start]
    tree_edges: set[tuple[int, int]] = set()
    queue = deque([start])
    while queue:
        u = queue.popleft()
        ui = coset_id[u]
        for g in sorted(images):
            for p, via in ((zero[g], "fwd"), (inv[g], "bwd")):
                v = tuple(p[x] for x in u)
                if v not in coset_id:
                    coset_id[v] = len(order)
                    order.append(v)
                    edge = (ui, g) if via == "fwd" else (coset_id[v], g)
                    tree_edges.add(edge)
                    queue.append(v)
    index = len(order)

    edge_col: dict[tuple[int, int], int] = {}
    for u in range(index):
        for g in sorted(images):
            e = (u, g)
            if e not in tree_edges and e not in edge_col:
                edge_col[e] = len(edge_col)

    def trace(u: int, w: Word) -> dict[int, int]:
        row: dict[int, int] = {}
        perm_u = order[u]
        for g, e in w:
            for _ in range(abs(e)):
                if e > 0:
                    v = tuple(zero[g][x] for x in perm_u)
                    edge = (coset_id[perm_u], g)
                    delta = 1
                else:
                    v = tuple(inv[g][x] for x in perm_u)
                    edge = (coset_id[v], g)
                    delta = -1
                if edge not in tree_edges:
                    c = edge_col[edge]
                    row[c] = row.get(c, 0) + delta
                    if not row[c]:
                        del row[c]
                perm_u = v
        return row

    rows = []
    for u in range(index):
        for w in presentation.relators:
            row = trace(u, w)
            if row:
                rows.append(row)

    ncols = len(edge_col)
    units, residue = _unit_eliminate(rows)
    remaining_cols = sorted({c for row in residue for c in row})
    dense = [[row.get(c, 0) for c in remaining_cols] for row in residue]
    dense_factors = smith_normal_form(dense) if dense else ()
    rank = ncols - units - len(dense_factors)
    torsion = tuple(f for f in dense_factors if f > 1)
    return KernelAbelianization(index=index, rank=rank, torsion=torsion)
