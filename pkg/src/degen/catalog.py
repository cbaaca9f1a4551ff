"""Access to the bundled catalog of the 29 degenerations.

Cases live as JSON files next to a manifest with SHA-256 checksums.  Lookup
accepts both the published name (`U_{4∪3,1}`, with or without TeX markup)
and the sanitized file alias (`u-4cup3-1`).  The directory can be overridden
with the ``DEGEN_CATALOG_DIR`` environment variable or an explicit argument,
which is how alternative catalogs are fed to the command-line tools.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .complexes import PlanarComplex
from .invariants import branch_stats, chern
from .pipeline import CaseHint
from .relations import Word, word_from_json

ENV_CATALOG_DIR = "DEGEN_CATALOG_DIR"

CASE_FORMAT = "degen-case/1"
MANIFEST_FORMAT = "degen-catalog/1"


class CatalogError(ValueError):
    """Missing case, malformed file, or checksum mismatch."""


@dataclass(frozen=True)
class ExpectedResults:
    """Published values a recomputation is checked against."""

    pi1: str
    m: int
    mu: int
    d: int
    rho: int
    c1_sq_coeff: Fraction
    c2_coeff: Fraction
    chi_coeff: Fraction
    points: tuple[tuple[int, str, int, tuple[int, ...]], ...]
    parasitic: tuple[tuple[int, int], ...]
    triples: tuple[tuple[int, int], ...] | None
    commutators: tuple[tuple[int, int], ...] | None
    inner_relators: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] | None
    forks: tuple[tuple[int, int, int], ...] | None
    forks_complete: bool

    @classmethod
    def from_json(cls, data: Mapping) -> "ExpectedResults":
        def pairs(key):
            if data[key] is None:
                return None
            return tuple(tuple(int(x) for x in item) for item in data[key])

        inner = None
        if data["inner_relators"] is not None:
            inner = tuple(
                (tuple(int(x) for x in lhs), tuple(int(x) for x in rhs))
                for lhs, rhs in data["inner_relators"]
            )
        return cls(
            pi1=str(data["pi1"]),
            m=int(data["m"]),
            mu=int(data["mu"]),
            d=int(data["d"]),
            rho=int(data["rho"]),
            c1_sq_coeff=Fraction(data["c1_sq_coeff"]),
            c2_coeff=Fraction(data["c2_coeff"]),
            chi_coeff=Fraction(data["chi_coeff"]),
            points=tuple(
                (int(v), str(kind), int(k), tuple(int(x) for x in lines))
                for v, kind, k, lines in data["points"]
            ),
            parasitic=pairs("parasitic"),
            triples=pairs("triples"),
            commutators=pairs("commutators"),
            inner_relators=inner,
            forks=pairs("forks"),
            forks_complete=bool(data["forks_complete"]),
        )


@dataclass(frozen=True)
class CaseRecord:
    """One catalogued degeneration, ready for the pipeline."""

    name: str
    aliases: tuple[str, ...]
    external_result: bool
    complex: PlanarComplex
    hints: tuple[CaseHint, ...]
    extra_inner_relators: tuple[Word, ...]
    expected: ExpectedResults
    notes: tuple[str, ...]

    @classmethod
    def from_json(cls, data: Mapping) -> "CaseRecord":
        if data.get("format") != CASE_FORMAT:
            raise CatalogError(f"unsupported case format {data.get('format')!r}")
        return cls(
            name=str(data["name"]),
            aliases=tuple(str(a) for a in data["aliases"]),
            external_result=bool(data["external_result"]),
            complex=PlanarComplex.from_json(data["complex"]),
            hints=tuple(CaseHint.from_json(h) for h in data["hints"]),
            extra_inner_relators=tuple(
                word_from_json(w) for w in data["extra_inner_relators"]
            ),
            expected=ExpectedResults.from_json(data["expected"]),
            notes=tuple(str(n) for n in data["notes"]),
        )


def _normalize(name: str) -> str:
    """Collapse TeX markup, separators, and case so lookups are forgiving."""
    key = name.strip().lower()
    for ch in "$\\{}_ \t,-":
        key = key.replace(ch, "")
    return key.replace("cup", "∪")


class Catalog:
    """A manifest plus lazily loaded case files."""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        manifest_path = self.root / "manifest.json"
        if not manifest_path.is_file():
            raise CatalogError(f"no manifest.json under {self.root}")
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        if manifest.get("format") != MANIFEST_FORMAT:
            raise CatalogError(
                f"unsupported manifest format {manifest.get('format')!r}"
            )
        self.entries: list[dict] = list(manifest["cases"])
        self._by_key: dict[str, dict] = {}
        for entry in self.entries:
            self._register(entry["name"], entry)

    def _register(self, label: str, entry: dict) -> None:
        key = _normalize(label)
        other = self._by_key.get(key)
        if other is not None and other is not entry:
            raise CatalogError(f"ambiguous case label {label!r}")
        self._by_key[key] = entry

    def names(self) -> tuple[str, ...]:
        return tuple(e["name"] for e in self.entries)

    def _read(self, entry: dict, *, check: bool = True) -> CaseRecord:
        path = self.root / entry["file"]
        blob = path.read_bytes()
        if check:
            digest = hashlib.sha256(blob).hexdigest()
            if digest != entry["sha256"]:
                raise CatalogError(
                    f"checksum mismatch for {entry['name']} ({path.name})"
                )
        record = CaseRecord.from_json(json.loads(blob.decode("utf-8")))
        for alias in record.aliases:
            self._register(alias, entry)
        return record

    def load(self, name: str) -> CaseRecord:
        key = _normalize(name)
        entry = self._by_key.get(key)
        if entry is None:
            # aliases are registered on read; fall back to filename stems
            for cand in self.entries:
                stem = Path(cand["file"]).stem
                if _normalize(stem) == key:
                    entry = cand
                    break
        if entry is None:
            raise CatalogError(f"no case named {name!r}")
        return self._read(entry)

    def __iter__(self) -> Iterator[CaseRecord]:
        for entry in self.entries:
            yield self._read(entry)


def catalog_root(catalog_dir: str | Path | None = None) -> Path:
    """Resolve the catalog directory: argument, environment, bundled data."""
    if catalog_dir is not None:
        return Path(catalog_dir)
    env = os.environ.get(ENV_CATALOG_DIR)
    if env:
        return Path(env)
    return Path(str(resources.files("degen.data")))


def open_catalog(catalog_dir: str | Path | None = None) -> Catalog:
    return Catalog(catalog_root(catalog_dir))


def load_case(name: str, catalog_dir: str | Path | None = None) -> CaseRecord:
    return open_catalog(catalog_dir).load(name)


def load_all(catalog_dir: str | Path | None = None) -> tuple[CaseRecord, ...]:
    return tuple(open_catalog(catalog_dir))


@dataclass(frozen=True)
class VerificationReport:
    """Problems found while re-deriving catalog contents; empty means clean."""

    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def verify_catalog(catalog_dir: str | Path | None = None) -> VerificationReport:
    """Check integrity and re-derive every stored quantity that has an oracle.

    Checksums must match the manifest, hint citations must appear in the
    case's notes, the complex must validate, and the stored classification,
    parasitic pairs, and invariants must equal what the complex yields.
    """
    problems: list[str] = []
    cat = open_catalog(catalog_dir)
    for entry in cat.entries:
        name = entry["name"]
        try:
            record = cat._read(entry)
        except (CatalogError, OSError, ValueError) as exc:
            problems.append(f"{name}: {exc}")
            continue
        report = record.complex.validate()
        if not report.ok:
            problems.append(f"{name}: complex invalid: {report.errors}")
            continue
        notes = set(record.notes)
        for hint in record.hints:
            if hint.citation not in notes:
                problems.append(f"{name}: hint citation {hint.citation!r} not in notes")
        points = record.complex.classify_vertices()
        derived_pts = tuple(
            (p.vertex, p.kind, p.multiplicity, tuple(sorted(p.lines_cyclic)))
            for p in points
        )
        if derived_pts != record.expected.points:
            problems.append(f"{name}: stored singular points disagree with complex")
        derived_parasitic = tuple(record.complex.disjoint_line_pairs())
        if derived_parasitic != record.expected.parasitic:
            problems.append(f"{name}: stored parasitic pairs disagree with complex")
        stats = branch_stats(record.complex)
        if (stats.mu, stats.d, stats.rho, stats.m) != (
            record.expected.mu,
            record.expected.d,
            record.expected.rho,
            record.expected.m,
        ):
            problems.append(f"{name}: stored branch statistics disagree with complex")
        ch = chern(stats)
        if (ch.c1_sq_coeff, ch.c2_coeff, ch.chi_coeff) != (
            record.expected.c1_sq_coeff,
            record.expected.c2_coeff,
            record.expected.chi_coeff,
        ):
            problems.append(f"{name}: stored Chern coefficients disagree with complex")
    return VerificationReport(problems=tuple(problems))
