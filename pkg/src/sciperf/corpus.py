"""Domain model, file ingestion, and structural validation of a publication corpus.

A corpus couples a roster of evaluated researchers with the publications they
(co-)authored inside a fixed observation window.  External co-authors are kept
in bylines without a researcher id: they count toward byline length and
organization layout but receive no metrics of their own.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

RANKS = ("assistant", "associate", "full", "unspecified")

EXTERNAL_AUTHOR = "-"  # byline placeholder for co-authors outside the roster


class CorpusLoadError(Exception):
    """Input files could not be turned into a valid corpus."""

    def __init__(self, problems: Iterable[str]):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


@dataclass(frozen=True)
class Researcher:
    """One evaluated scientist.

    ``active_years`` is the number of years the researcher was active inside
    the observation window; it is the divisor of the productivity indicator.
    """

    id: str
    field_id: str
    discipline_id: str
    rank: str = "unspecified"
    active_years: int = 1
    organization_id: str = "unknown"


@dataclass(frozen=True)
class AuthorSlot:
    """A single byline position.  ``researcher_id`` is None for externals."""

    position: int
    organization_id: str
    researcher_id: str | None = None


@dataclass(frozen=True)
class Publication:
    """One indexed research product with a citation snapshot."""

    id: str
    year: int
    citations: int
    subject_categories: tuple[str, ...]
    byline: tuple[AuthorSlot, ...]

    def roster_ids(self) -> tuple[str, ...]:
        """Researcher ids present in the byline, in byline order."""
        return tuple(s.researcher_id for s in self.byline if s.researcher_id is not None)


@dataclass(frozen=True)
class IngestConfig:
    """Loading parameters: observation window and per-discipline weighting."""

    window: tuple[int, int]
    discipline_policy: Mapping[str, str] = field(default_factory=dict)
    default_scheme: str = "equal_fraction"


@dataclass(frozen=True)
class Corpus:
    """Immutable researcher + publication collection.

    Entities are stored sorted by id so that corpora built from permuted
    input rows compare equal and serialize identically.
    """

    researchers: tuple[Researcher, ...]
    publications: tuple[Publication, ...]
    window: tuple[int, int]
    discipline_policy: Mapping[str, str] = field(default_factory=dict)
    default_scheme: str = "equal_fraction"

    @cached_property
    def researcher_by_id(self) -> dict[str, Researcher]:
        return {r.id: r for r in self.researchers}

    @cached_property
    def publication_by_id(self) -> dict[str, Publication]:
        return {p.id: p for p in self.publications}

    @cached_property
    def publications_by_researcher(self) -> dict[str, tuple[Publication, ...]]:
        acc: dict[str, list[Publication]] = {r.id: [] for r in self.researchers}
        for pub in self.publications:
            for rid in pub.roster_ids():
                if rid in acc:
                    acc[rid].append(pub)
        return {rid: tuple(pubs) for rid, pubs in acc.items()}

    @cached_property
    def researchers_by_field(self) -> dict[str, tuple[Researcher, ...]]:
        acc: dict[str, list[Researcher]] = {}
        for r in self.researchers:
            acc.setdefault(r.field_id, []).append(r)
        return {fid: tuple(rs) for fid, rs in sorted(acc.items())}

    @cached_property
    def field_discipline(self) -> dict[str, str]:
        """field id -> discipline id (validated to be one-to-one)."""
        return {r.field_id: r.discipline_id for r in self.researchers}

    @cached_property
    def discipline_ids(self) -> tuple[str, ...]:
        return tuple(sorted({r.discipline_id for r in self.researchers}))

    def scheme_for_discipline(self, discipline_id: str) -> str:
        return self.discipline_policy.get(discipline_id, self.default_scheme)


@dataclass(frozen=True)
class Violation:
    kind: str  # "researcher" | "publication" | "corpus"
    entity_id: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} {self.entity_id}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "no violations"
        return "\n".join(str(v) for v in self.violations)


def make_corpus(
    researchers: Iterable[Researcher],
    publications: Iterable[Publication],
    window: tuple[int, int],
    discipline_policy: Mapping[str, str] | None = None,
    default_scheme: str = "equal_fraction",
) -> Corpus:
    """Assemble a corpus with canonical (id-sorted) entity order."""
    return Corpus(
        researchers=tuple(sorted(researchers, key=lambda r: r.id)),
        publications=tuple(sorted(publications, key=lambda p: p.id)),
        window=(int(window[0]), int(window[1])),
        discipline_policy=dict(discipline_policy or {}),
        default_scheme=default_scheme,
    )


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Check every structural invariant; violations are data, not failures."""
    report = ValidationReport()
    window_len = corpus.window[1] - corpus.window[0] + 1

    seen_ids: set[str] = set()
    field_to_discipline: dict[str, str] = {}
    for r in corpus.researchers:
        if r.id in seen_ids:
            report.violations.append(Violation("corpus", r.id, "duplicate researcher id"))
        seen_ids.add(r.id)
        if not 1 <= r.active_years <= window_len:
            report.violations.append(
                Violation("researcher", r.id, f"active_years {r.active_years} outside [1, {window_len}]")
            )
        if r.rank not in RANKS:
            report.violations.append(Violation("researcher", r.id, f"unknown rank {r.rank!r}"))
        prior = field_to_discipline.setdefault(r.field_id, r.discipline_id)
        if prior != r.discipline_id:
            report.violations.append(
                Violation(
                    "researcher",
                    r.id,
                    f"field {r.field_id} mapped to both disciplines {prior} and {r.discipline_id}",
                )
            )

    seen_pub_ids: set[str] = set()
    for pub in corpus.publications:
        if pub.id in seen_pub_ids:
            report.violations.append(Violation("corpus", pub.id, "duplicate publication id"))
        seen_pub_ids.add(pub.id)
        if pub.citations < 0:
            report.violations.append(Violation("publication", pub.id, f"negative citations {pub.citations}"))
        if not corpus.window[0] <= pub.year <= corpus.window[1]:
            report.violations.append(
                Violation("publication", pub.id, f"year {pub.year} outside window {corpus.window}")
            )
        if not pub.subject_categories:
            report.violations.append(Violation("publication", pub.id, "no subject categories"))
        if not pub.byline:
            report.violations.append(Violation("publication", pub.id, "empty byline"))
            continue
        positions = sorted(s.position for s in pub.byline)
        if positions != list(range(1, len(pub.byline) + 1)):
            report.violations.append(
                Violation("publication", pub.id, f"byline positions {positions} are not 1..{len(pub.byline)}")
            )
        roster = [s.researcher_id for s in pub.byline if s.researcher_id is not None]
        dupes = {rid for rid in roster if roster.count(rid) > 1}
        for rid in sorted(dupes):
            report.violations.append(
                Violation("publication", pub.id, f"researcher {rid} appears more than once in byline")
            )
        for rid in roster:
            if rid not in seen_ids:
                report.violations.append(
                    Violation("publication", pub.id, f"byline references unknown researcher {rid}")
                )
    return report


# --- file ingestion ---------------------------------------------------------

RESEARCHER_COLUMNS = ("id", "field_id", "discipline_id", "rank", "active_years", "organization_id")
PUBLICATION_COLUMNS = ("id", "year", "citations", "subject_categories", "byline")


def load_corpus(researcher_file: str | Path, publication_file: str | Path, config: IngestConfig) -> Corpus:
    """Load and validate a corpus from CSV or JSON files.

    The loader dispatches on file extension.  Any parse problem or invariant
    violation raises :class:`CorpusLoadError` listing every problem found;
    row order in the input files never affects the result.
    """
    researcher_file = Path(researcher_file)
    publication_file = Path(publication_file)
    researchers, r_problems = _read_researchers(researcher_file)
    publications, pub_lines, p_problems = _read_publications(publication_file)
    problems = r_problems + p_problems
    if problems:
        raise CorpusLoadError(problems)
    corpus = make_corpus(
        researchers, publications, config.window, config.discipline_policy, config.default_scheme
    )
    report = validate_corpus(corpus)
    if not report.ok:
        messages = []
        for v in report.violations:
            where = ""
            if v.kind == "publication" and v.entity_id in pub_lines:
                where = f" ({publication_file.name}:{pub_lines[v.entity_id]})"
            elif v.kind != "publication" and v.entity_id in {r.id for r in researchers}:
                where = f" ({researcher_file.name})"
            messages.append(f"{v}{where}")
        raise CorpusLoadError(messages)
    return corpus


def dump_corpus(corpus: Corpus, researcher_file: str | Path, publication_file: str | Path) -> None:
    """Write a corpus back to disk in the ingestion schema (CSV or JSON by extension)."""
    researcher_file = Path(researcher_file)
    publication_file = Path(publication_file)
    if researcher_file.suffix == ".json":
        rows = [
            {
                "id": r.id,
                "field_id": r.field_id,
                "discipline_id": r.discipline_id,
                "rank": r.rank,
                "active_years": r.active_years,
                "organization_id": r.organization_id,
            }
            for r in corpus.researchers
        ]
        researcher_file.write_text(json.dumps(rows, indent=1), encoding="utf-8")
    else:
        with researcher_file.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(RESEARCHER_COLUMNS)
            for r in corpus.researchers:
                writer.writerow([r.id, r.field_id, r.discipline_id, r.rank, r.active_years, r.organization_id])
    if publication_file.suffix == ".json":
        rows = [
            {
                "id": p.id,
                "year": p.year,
                "citations": p.citations,
                "subject_categories": list(p.subject_categories),
                "byline": [
                    {
                        "position": s.position,
                        "researcher_id": s.researcher_id,
                        "organization_id": s.organization_id,
                    }
                    for s in p.byline
                ],
            }
            for p in corpus.publications
        ]
        publication_file.write_text(json.dumps(rows, indent=1), encoding="utf-8")
    else:
        with publication_file.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(PUBLICATION_COLUMNS)
            for p in corpus.publications:
                writer.writerow(
                    [p.id, p.year, p.citations, ";".join(p.subject_categories), _format_byline(p.byline)]
                )


def _format_byline(byline: tuple[AuthorSlot, ...]) -> str:
    parts = []
    for slot in byline:
        rid = slot.researcher_id if slot.researcher_id is not None else EXTERNAL_AUTHOR
        parts.append(f"{slot.position}|{rid}|{slot.organization_id}")
    return ";".join(parts)


def _read_researchers(path: Path) -> tuple[list[Researcher], list[str]]:
    researchers: list[Researcher] = []
    problems: list[str] = []
    for where, record in _iter_records(path, RESEARCHER_COLUMNS, problems):
        r = _parse_researcher(where, record, problems)
        if r is not None:
            researchers.append(r)
    return researchers, problems


def _read_publications(path: Path) -> tuple[list[Publication], dict[str, object], list[str]]:
    publications: list[Publication] = []
    lines: dict[str, object] = {}
    problems: list[str] = []
    for where, record in _iter_records(path, PUBLICATION_COLUMNS, problems):
        p = _parse_publication(where, record, problems)
        if p is not None:
            publications.append(p)
            lines.setdefault(p.id, where)
    return publications, lines, problems


def _iter_records(path: Path, columns: tuple[str, ...], problems: list[str]):
    """Yield (location, record-dict) pairs from a CSV or JSON file."""
    if not path.exists():
        problems.append(f"{path}: file not found")
        return
    if path.suffix == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            problems.append(f"{path.name}: invalid JSON: {exc}")
            return
        if not isinstance(data, list):
            problems.append(f"{path.name}: expected a JSON array of records")
            return
        for i, record in enumerate(data, start=1):
            if not isinstance(record, dict):
                problems.append(f"{path.name}:record {i}: expected an object")
                continue
            yield f"record {i}", record
    else:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in columns if c not in header and c not in _OPTIONAL_COLUMNS]
            if missing:
                problems.append(f"{path.name}: header is missing columns {missing}")
                return
            for record in reader:
                yield f"line {reader.line_num}", record


_OPTIONAL_COLUMNS = {"rank", "organization_id"}


def _parse_researcher(where: str, record: Mapping[str, object], problems: list[str]) -> Researcher | None:
    rid = _req_str(record, "id")
    field_id = _req_str(record, "field_id")
    discipline_id = _req_str(record, "discipline_id")
    if not rid or not field_id or not discipline_id:
        problems.append(f"{where}: field 'id'/'field_id'/'discipline_id': missing value")
        return None
    rank = _opt_str(record, "rank") or "unspecified"
    if rank not in RANKS:
        problems.append(f"{where}: field 'rank': unknown value {rank!r}")
        return None
    try:
        active_years = int(str(record.get("active_years", "")).strip())
    except ValueError:
        problems.append(f"{where}: field 'active_years': not an integer ({record.get('active_years')!r})")
        return None
    organization = _opt_str(record, "organization_id") or "unknown"
    return Researcher(rid, field_id, discipline_id, rank, active_years, organization)


def _parse_publication(where: str, record: Mapping[str, object], problems: list[str]) -> Publication | None:
    pid = _req_str(record, "id")
    if not pid:
        problems.append(f"{where}: field 'id': missing value")
        return None
    try:
        year = int(str(record.get("year", "")).strip())
    except ValueError:
        problems.append(f"{where}: field 'year': not an integer ({record.get('year')!r})")
        return None
    try:
        citations = int(str(record.get("citations", "")).strip())
    except ValueError:
        problems.append(f"{where}: field 'citations': not an integer ({record.get('citations')!r})")
        return None
    raw_cats = record.get("subject_categories", "")
    if isinstance(raw_cats, str):
        categories = tuple(c.strip() for c in raw_cats.split(";") if c.strip())
    elif isinstance(raw_cats, list):
        categories = tuple(str(c) for c in raw_cats)
    else:
        problems.append(f"{where}: field 'subject_categories': unsupported value")
        return None
    byline = _parse_byline(where, record.get("byline", ""), problems)
    if byline is None:
        return None
    return Publication(pid, year, citations, categories, byline)


def _parse_byline(where: str, raw: object, problems: list[str]) -> tuple[AuthorSlot, ...] | None:
    slots: list[AuthorSlot] = []
    if isinstance(raw, str):
        for chunk in (c for c in raw.split(";") if c.strip()):
            parts = chunk.split("|")
            if len(parts) != 3:
                problems.append(f"{where}: field 'byline': malformed slot {chunk!r} (want position|researcher|org)")
                return None
            pos_raw, rid, org = (p.strip() for p in parts)
            try:
                position = int(pos_raw)
            except ValueError:
                problems.append(f"{where}: field 'byline': position {pos_raw!r} is not an integer")
                return None
            researcher_id = None if rid in ("", EXTERNAL_AUTHOR) else rid
            slots.append(AuthorSlot(position, org or "unknown", researcher_id))
    elif isinstance(raw, list):
        for i, entry in enumerate(raw, start=1):
            if not isinstance(entry, dict):
                problems.append(f"{where}: field 'byline': slot {i} is not an object")
                return None
            try:
                position = int(entry.get("position", i))
            except (TypeError, ValueError):
                problems.append(f"{where}: field 'byline': slot {i} has a non-integer position")
                return None
            rid = entry.get("researcher_id")
            researcher_id = None if rid in (None, "", EXTERNAL_AUTHOR) else str(rid)
            org = str(entry.get("organization_id") or "unknown")
            slots.append(AuthorSlot(position, org, researcher_id))
    else:
        problems.append(f"{where}: field 'byline': unsupported value")
        return None
    slots.sort(key=lambda s: s.position)
    return tuple(slots)


def _req_str(record: Mapping[str, object], key: str) -> str:
    value = record.get(key)
    return str(value).strip() if value is not None else ""


def _opt_str(record: Mapping[str, object], key: str) -> str:
    value = record.get(key)
    if value is None:
        return ""
    return str(value).strip()
