"""Citation normalization baselines, fractional author weights, and the FSS indicator.

FSS (fractional scientific strength) is a yearly productivity proxy: the sum,
over a researcher's publications, of citation impact normalized to the mean of
cited publications of the same year and subject category, weighted by the
researcher's fractional contribution, divided by the years of activity.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .corpus import AuthorSlot, Corpus, Publication, Researcher


class BaselineLookupError(Exception):
    """A cited publication has no usable baseline in any of its categories."""


@dataclass(frozen=True)
class BaselineTable:
    """Mean citations of *cited* publications per (year, subject category).

    Means are strictly positive because uncited publications are excluded
    from the average; pairs with no cited publications are absent.
    """

    means: dict[tuple[int, str], float]
    counts: dict[tuple[int, str], int]

    def get(self, year: int, category: str) -> float | None:
        return self.means.get((year, category))

    def items(self):
        return sorted(self.means.items())

    def to_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["year", "category", "mean_citations", "n_cited"])
            for (year, category), mean in self.items():
                writer.writerow([year, category, repr(mean), self.counts[(year, category)]])

    @classmethod
    def from_csv(cls, path: str | Path) -> "BaselineTable":
        means: dict[tuple[int, str], float] = {}
        counts: dict[tuple[int, str], int] = {}
        with Path(path).open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                key = (int(row["year"]), row["category"])
                means[key] = float(row["mean_citations"])
                counts[key] = int(row.get("n_cited") or 0)
        return cls(means, counts)


@dataclass(frozen=True)
class WeightScheme:
    """Byline weighting parameters.

    ``equal_fraction`` gives every co-author 1/n.  ``byline_weighted`` applies
    position-dependent shares for bylines of four or more authors: when first
    and last author share an organization they take ``end_share_same_org``
    each and the middle authors split ``middle_pool_same_org``; otherwise the
    ends take ``end_share_diff_org`` each, the second and second-to-last take
    ``inner_share_diff_org`` each, and the remaining authors split
    ``middle_pool_diff_org``.
    """

    scheme_id: str
    end_share_same_org: float = 0.40
    middle_pool_same_org: float = 0.20
    end_share_diff_org: float = 0.30
    inner_share_diff_org: float = 0.15
    middle_pool_diff_org: float = 0.10


EQUAL_FRACTION = WeightScheme("equal_fraction")
BYLINE_WEIGHTED = WeightScheme("byline_weighted")

_SCHEMES = {s.scheme_id: s for s in (EQUAL_FRACTION, BYLINE_WEIGHTED)}


def scheme_by_id(scheme_id: str) -> WeightScheme:
    try:
        return _SCHEMES[scheme_id]
    except KeyError:
        raise ValueError(f"unknown weighting scheme {scheme_id!r}") from None


@dataclass(frozen=True)
class FssResult:
    """Yearly productivity of one researcher, with diagnostic counts."""

    researcher_id: str
    fss: float
    n_publications: int
    active_years: int


def compute_baselines(corpus: Corpus) -> BaselineTable:
    """Mean citations of cited publications for every (year, category) pair.

    Publications with zero citations do not enter the mean; a pair whose
    publications are all uncited is absent from the table.
    """
    sums: dict[tuple[int, str], int] = {}
    counts: dict[tuple[int, str], int] = {}
    for pub in corpus.publications:
        if pub.citations < 1:
            continue
        for category in pub.subject_categories:
            key = (pub.year, category)
            sums[key] = sums.get(key, 0) + pub.citations
            counts[key] = counts.get(key, 0) + 1
    means = {key: sums[key] / counts[key] for key in sums}
    return BaselineTable(means, counts)


def normalized_impact(pub: Publication, baselines: BaselineTable) -> float:
    """Citations divided by the publication's baseline.

    Multi-category publications use the arithmetic mean of the per-category
    baselines; categories absent from the table (possible only with an
    externally supplied table) are skipped.  Zero-cited publications score 0
    regardless of baselines.
    """
    if pub.citations == 0:
        return 0.0
    available = [baselines.get(pub.year, c) for c in pub.subject_categories]
    present = [b for b in available if b is not None]
    if not present:
        raise BaselineLookupError(
            f"publication {pub.id}: no baseline for any of {pub.subject_categories} in {pub.year}"
        )
    baseline = sum(present) / len(present)
    return pub.citations / baseline


def fractional_weights(byline: tuple[AuthorSlot, ...], scheme: WeightScheme) -> list[float]:
    """Per-slot contribution weights, in byline order, summing to 1.

    The position-weighted scheme is defined for bylines of four or more
    authors and falls back to equal fractions below that.  The branch is
    chosen by comparing the first and last slots' organizations.
    """
    n = len(byline)
    if n == 0:
        raise ValueError("byline is empty")
    if scheme.scheme_id == "equal_fraction" or n <= 3:
        return [1.0 / n] * n
    if scheme.scheme_id != "byline_weighted":
        raise ValueError(f"unknown weighting scheme {scheme.scheme_id!r}")

    if byline[0].organization_id == byline[-1].organization_id:
        end = scheme.end_share_same_org
        middle_each = scheme.middle_pool_same_org / (n - 2)
        return [end] + [middle_each] * (n - 2) + [end]

    end = scheme.end_share_diff_org
    inner = scheme.inner_share_diff_org
    pool = scheme.middle_pool_diff_org
    if n == 4:
        # No middle authors to absorb the residual pool: rescale the four
        # named shares so the weights still partition the publication.
        scale = 1.0 / (2 * end + 2 * inner)
        return [end * scale, inner * scale, inner * scale, end * scale]
    middle_each = pool / (n - 4)
    return [end, inner] + [middle_each] * (n - 4) + [inner, end]


def researcher_weight(pub: Publication, researcher_id: str, scheme: WeightScheme) -> float:
    """The fractional weight of one roster researcher within a byline."""
    weights = fractional_weights(pub.byline, scheme)
    for slot, weight in zip(pub.byline, weights):
        if slot.researcher_id == researcher_id:
            return weight
    raise ValueError(f"researcher {researcher_id} is not in the byline of {pub.id}")


def compute_fss(researcher: Researcher, corpus: Corpus, baselines: BaselineTable) -> FssResult:
    """FSS of one researcher over their publications in the corpus.

    Each publication contributes its normalized impact times the researcher's
    fractional weight; the sum is divided by the researcher's active years.
    The weighting scheme comes from the corpus discipline policy.
    """
    scheme = scheme_by_id(corpus.scheme_for_discipline(researcher.discipline_id))
    pubs = corpus.publications_by_researcher.get(researcher.id, ())
    total = 0.0
    for pub in pubs:
        impact = normalized_impact(pub, baselines)
        if impact == 0.0:
            continue
        total += impact * researcher_weight(pub, researcher.id, scheme)
    return FssResult(
        researcher_id=researcher.id,
        fss=total / researcher.active_years,
        n_publications=len(pubs),
        active_years=researcher.active_years,
    )


def compute_all_fss(corpus: Corpus, baselines: BaselineTable) -> dict[str, FssResult]:
    """FSS for every researcher in the corpus, keyed by researcher id."""
    return {r.id: compute_fss(r, corpus, baselines) for r in corpus.researchers}
