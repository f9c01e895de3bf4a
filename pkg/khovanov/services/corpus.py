"""
Corpus of PD files with YAML front matter.

A corpus file looks like::

    ---
    name: "3_1"
    crossings: 3
    components: 1
    expected:
      even:
        - {i: 0, q: 1, free: 1}
    ---
    X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)
"""

import shutil
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from khovanov.core.coeff import SpecVariant
from khovanov.core.complex import build_complex
from khovanov.core.diagram import Diagram, parse_pd
from khovanov.core.homology import check_duality
from khovanov.exceptions import DiagramParseError, InputError
from khovanov.models.schemas import CheckResult, CorpusEntry
from khovanov.observability.logfire_config import log_debug, log_error
from khovanov.services.compute import compute_table


FRONT_MATTER = "---"


def split_front_matter(text: str, source: str) -> tuple[dict[str, Any], str]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FRONT_MATTER:
        raise InputError(f"{source}: missing '---' metadata header")
    try:
        end = next(k for k in range(1, len(lines)) if lines[k].strip() == FRONT_MATTER)
    except StopIteration:
        raise InputError(f"{source}: metadata header is not closed") from None
    try:
        meta = yaml.safe_load("\n".join(lines[1:end])) or {}
    except yaml.YAMLError as e:
        raise InputError(f"{source}: bad metadata: {e}") from e
    if not isinstance(meta, dict):
        raise InputError(f"{source}: metadata must be a mapping")
    return meta, "\n".join(lines[end + 1 :]).strip()


def parse_entry(text: str, source: str) -> CorpusEntry:
    """Parse and cross-check one corpus file."""
    meta, body = split_front_matter(text, source)
    if "name" not in meta:
        raise InputError(f"{source}: metadata needs a 'name'")
    if not isinstance(meta["name"], str):
        raise InputError(f"{source}: name {meta['name']!r} must be a quoted string")
    try:
        d = parse_pd(body)
    except DiagramParseError as e:
        raise InputError(f"{source}: {e}") from e
    crossings = meta.get("crossings", d.n)
    components = meta.get("components", d.components())
    if crossings != d.n:
        raise InputError(f"{source}: header says {crossings} crossings, PD has {d.n}")
    if components != d.components():
        raise InputError(
            f"{source}: header says {components} components, PD has {d.components()}"
        )
    expected = meta.get("expected") or {}
    unknown = [v for v in expected if v not in {s.value for s in SpecVariant}]
    if unknown:
        raise InputError(f"{source}: unknown variants in expected tables: {unknown}")
    try:
        return CorpusEntry(
            name=meta["name"],
            path=source,
            pd=body,
            crossings=d.n,
            components=d.components(),
            circles=d.free_circles,
            expected=expected,
        )
    except ValidationError as e:
        raise InputError(f"{source}: {e}") from e


def entry_diagram(entry: CorpusEntry) -> Diagram:
    return parse_pd(entry.pd)


def validate_entry(entry: CorpusEntry) -> CheckResult:
    """Rebuild the complex and compare every fixture table. Runs in worker processes."""
    details = []
    d = entry_diagram(entry)
    c = build_complex(d)
    for variant, rows in sorted(entry.expected.items()):
        table = compute_table(d, SpecVariant(variant), c)
        got = table.groups()
        want = {(r.i, r.q): (r.free, tuple(r.torsion)) for r in rows}
        for key in sorted(set(got) | set(want)):
            if got.get(key) != want.get(key):
                details.append(
                    f"{variant} at {key}: expected {want.get(key)}, got {got.get(key)}"
                )
    return CheckResult(name=entry.name, passed=not details, details=details)


class CorpusService:
    """List, add and validate corpus files; resolve corpus groups."""

    def __init__(self, corpus_dir: Path, config: Optional[dict[str, Any]] = None):
        """
        Args:
            corpus_dir: Directory holding the *.pd files
            config: Parsed corpus configuration with a 'groups' list
        """
        self.corpus_dir = Path(corpus_dir)
        self.config = config or {"groups": []}

    def paths(self) -> list[Path]:
        if not self.corpus_dir.is_dir():
            raise InputError(f"corpus directory not found: {self.corpus_dir}")
        return sorted(self.corpus_dir.glob("*.pd"))

    def load_entry(self, path: Path) -> CorpusEntry:
        return parse_entry(Path(path).read_text(encoding="utf-8"), str(path))

    def list_entries(self) -> list[CorpusEntry]:
        entries = [self.load_entry(p) for p in self.paths()]
        return sorted(entries, key=lambda e: e.name)

    def entry(self, name: str) -> CorpusEntry:
        for e in self.list_entries():
            if e.name == name:
                return e
        raise InputError(f"no corpus entry named {name!r}")

    def groups(self, kind: str) -> list[list[str]]:
        out = []
        for g in self.config.get("groups", []):
            if g.get("kind") != kind:
                continue
            members = list(g.get("members", []))
            bad = [m for m in members if not isinstance(m, str)]
            if bad:
                # YAML reads an unquoted 3_1 as the integer 31
                raise InputError(f"group {g.get('name')!r}: members {bad} must be quoted strings")
            out.append(members)
        return out

    def equivalents(self, name: str) -> list[Diagram]:
        """Other presentations of the same link, from the reidemeister groups."""
        out = []
        for members in self.groups("reidemeister"):
            if name in members:
                out.extend(entry_diagram(self.entry(m)) for m in members if m != name)
        return out

    def mirror_partner(self, name: str) -> Optional[str]:
        for members in self.groups("mirror"):
            if name in members and len(members) == 2:
                return members[1] if members[0] == name else members[0]
        return None

    def add(self, source: Path) -> CorpusEntry:
        """Validate ``source`` and copy it into the corpus."""
        entry = self.load_entry(source)
        if any(e.name == entry.name for e in self.list_entries()):
            raise InputError(f"corpus already has an entry named {entry.name!r}")
        result = validate_entry(entry)
        if not result.passed:
            raise InputError(f"{source}: fixture mismatch: {result.details[0]}")
        target = self.corpus_dir / f"{entry.name}.pd"
        shutil.copyfile(source, target)
        log_debug("corpus_entry_added", name=entry.name, path=str(target))
        return entry.model_copy(update={"path": str(target)})

    def validate(self, threads: int = 1) -> list[CheckResult]:
        entries = self.list_entries()
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(validate_entry, entries))
        else:
            results = [validate_entry(e) for e in entries]
        results.extend(self._group_checks({e.name: e for e in entries}))
        for r in results:
            if not r.passed:
                log_error("corpus_entry_failed", name=r.name, details=r.details)
        return results

    def _group_checks(self, entries: dict[str, CorpusEntry]) -> list[CheckResult]:
        """
        Members of a reidemeister group share their even and odd tables;
        the two members of a mirror group satisfy universal-coefficient duality.
        """
        results = []
        for first, second in (m for m in self.groups("mirror") if len(m) == 2):
            name = f"mirror:{first},{second}"
            if first not in entries or second not in entries:
                results.append(CheckResult(name=name, passed=False, details=["missing member"]))
                continue
            details = []
            for variant in (SpecVariant.EVEN, SpecVariant.ODD):
                original = compute_table(entry_diagram(entries[first]), variant)
                mirrored = compute_table(entry_diagram(entries[second]), variant)
                details.extend(f"{variant.value}: {x}" for x in check_duality(mirrored, original).details)
            results.append(CheckResult(name=name, passed=not details, details=details))
        for members in self.groups("reidemeister"):
            missing = [m for m in members if m not in entries]
            if missing:
                results.append(
                    CheckResult(name="group:" + ",".join(members), passed=False, details=[f"missing {missing}"])
                )
                continue
            details = []
            for variant in (SpecVariant.EVEN, SpecVariant.ODD):
                tables = {m: compute_table(entry_diagram(entries[m]), variant).groups() for m in members}
                first = tables[members[0]]
                details.extend(
                    f"{variant.value}: {m} differs from {members[0]}" for m in members[1:] if tables[m] != first
                )
            results.append(CheckResult(name="group:" + ",".join(members), passed=not details, details=details))
        return results
