"""Within-field percentile ranking, top-scientist and highly-cited-article flags.

Top scientists are researchers above the 95th percentile of FSS within their
field.  Highly cited articles are publications in the top 5% of the citation
ranking among publications of the same year and subject category, with ties at
the cutoff included.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Corpus
from .indicators import FssResult


@dataclass(frozen=True)
class RankedResearcher:
    researcher_id: str
    fss: float
    percentile: float
    is_top_scientist: bool


@dataclass(frozen=True)
class FieldRanking:
    """FSS ranking of one field, best first."""

    field_id: str
    entries: tuple[RankedResearcher, ...]

    @property
    def top_scientists(self) -> frozenset[str]:
        return frozenset(e.researcher_id for e in self.entries if e.is_top_scientist)

    def percentile_of(self, researcher_id: str) -> float:
        for e in self.entries:
            if e.researcher_id == researcher_id:
                return e.percentile
        raise KeyError(researcher_id)


@dataclass(frozen=True)
class HcaSet:
    """Publication ids flagged highly cited, plus the thresholds that did it.

    ``thresholds`` maps (year, category) to the minimum citation count that
    qualifies (inclusive).  Groups too small to carve out a top share have no
    threshold and contribute no highly cited articles.
    """

    publication_ids: frozenset[str]
    thresholds: dict[tuple[int, str], int]

    def __contains__(self, publication_id: str) -> bool:
        return publication_id in self.publication_ids

    def thresholds_to_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["year", "category", "min_citations_inclusive"])
            for (year, category), threshold in sorted(self.thresholds.items()):
                writer.writerow([year, category, threshold])


def load_threshold_table(path: str | Path) -> dict[tuple[int, str], int]:
    thresholds: dict[tuple[int, str], int] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            thresholds[(int(row["year"]), row["category"])] = int(row["min_citations_inclusive"])
    return thresholds


def eligible_fields(corpus: Corpus, coverage_threshold: float = 0.5) -> set[str]:
    """Fields where at least the given share of members produced a publication."""
    eligible = set()
    for field_id, members in corpus.researchers_by_field.items():
        publishing = sum(1 for r in members if corpus.publications_by_researcher.get(r.id))
        if publishing / len(members) >= coverage_threshold:
            eligible.add(field_id)
    return eligible


def eligible_researchers(
    corpus: Corpus, min_years: int = 3, fields: set[str] | None = None
) -> set[str]:
    """Researchers active at least ``min_years`` whose field is eligible."""
    if fields is None:
        fields = eligible_fields(corpus)
    return {r.id for r in corpus.researchers if r.active_years >= min_years and r.field_id in fields}


def percentiles_from_values(values: Mapping[str, float]) -> dict[str, float]:
    """Percentile (0..100, worst to best) of each key by its value.

    The percentile is the share of peers with a strictly lower value over
    n - 1, so ties share the lower percentile.  A singleton maps to 100.
    """
    if not values:
        raise ValueError("empty input")
    n = len(values)
    if n == 1:
        return {key: 100.0 for key in values}
    ordered = sorted(values.items(), key=lambda kv: kv[1])
    percentiles: dict[str, float] = {}
    below = 0
    i = 0
    while i < n:
        j = i
        while j < n and ordered[j][1] == ordered[i][1]:
            j += 1
        pct = 100.0 * below / (n - 1)
        for k in range(i, j):
            percentiles[ordered[k][0]] = pct
        below += j - i
        i = j
    return percentiles


def rank_field(
    field_id: str, fss_results: Iterable[FssResult], ts_percentile: float = 95.0
) -> FieldRanking:
    """Percentile-rank a field's researchers by FSS and flag top scientists."""
    results = list(fss_results)
    if not results:
        raise ValueError(f"no results for field {field_id}")
    percentiles = percentiles_from_values({r.researcher_id: r.fss for r in results})
    entries = [
        RankedResearcher(r.researcher_id, r.fss, percentiles[r.researcher_id], percentiles[r.researcher_id] > ts_percentile)
        for r in results
    ]
    entries.sort(key=lambda e: (-e.fss, e.researcher_id))
    return FieldRanking(field_id, tuple(entries))


def identify_hcas(
    corpus: Corpus,
    top_fraction: float = 0.05,
    thresholds: Mapping[tuple[int, str], int] | None = None,
) -> HcaSet:
    """Flag publications in the top share of their (year, category) citation ranking.

    With corpus-derived thresholds, each group's cutoff is the k-th highest
    citation count where k = floor(top_fraction * group size); everything at
    or above the cutoff qualifies, so ties can push the flagged share past the
    nominal fraction.  Groups with k = 0 yield no qualifying publications.
    A publication qualifies if it clears the cutoff in any of its categories.
    An externally supplied threshold table replaces the corpus-derived one.
    """
    if thresholds is None:
        groups: dict[tuple[int, str], list[int]] = {}
        for pub in corpus.publications:
            for category in pub.subject_categories:
                groups.setdefault((pub.year, category), []).append(pub.citations)
        thresholds = {}
        for key, citations in groups.items():
            k = math.floor(top_fraction * len(citations))
            if k < 1:
                continue
            citations.sort(reverse=True)
            thresholds[key] = citations[k - 1]
    else:
        thresholds = dict(thresholds)

    flagged = frozenset(
        pub.id
        for pub in corpus.publications
        if any(
            (pub.year, category) in thresholds and pub.citations >= thresholds[(pub.year, category)]
            for category in pub.subject_categories
        )
    )
    return HcaSet(flagged, dict(thresholds))


def hca_author_counts(corpus: Corpus, hcas: HcaSet) -> dict[str, int]:
    """Number of highly cited articles each roster researcher co-authored."""
    counts = {r.id: 0 for r in corpus.researchers}
    for pub in corpus.publications:
        if pub.id not in hcas:
            continue
        for rid in pub.roster_ids():
            if rid in counts:
                counts[rid] += 1
    return counts


def rank_eligible_fields(
    corpus: Corpus,
    fss_results: Mapping[str, FssResult],
    coverage_threshold: float = 0.5,
    min_years: int = 3,
    ts_percentile: float = 95.0,
) -> dict[str, FieldRanking]:
    """Rank every eligible field over its eligible researchers."""
    fields = eligible_fields(corpus, coverage_threshold)
    eligible = eligible_researchers(corpus, min_years, fields)
    rankings: dict[str, FieldRanking] = {}
    for field_id in sorted(fields):
        members = [r for r in corpus.researchers_by_field[field_id] if r.id in eligible]
        if not members:
            continue
        rankings[field_id] = rank_field(
            field_id, [fss_results[r.id] for r in members], ts_percentile
        )
    return rankings
