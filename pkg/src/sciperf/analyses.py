"""Convergence analyses between top-productivity scientists and highly cited articles.

Four analyses over a corpus plus its field rankings and highly-cited-article
set: authorship overlap, producer counts, per-field point-biserial
correlation, authorship distribution across productivity bins, and
rank-stratified case-control odds ratios.

The analysis population is the ranked researchers (members of the supplied
field rankings); roster authors outside it are ignored, mirroring the
eligibility filters.  Shares are kept as exact rationals and rounded only
when a report table is built.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .corpus import Corpus
from .excellence import FieldRanking, HcaSet, percentiles_from_values
from .report import Table, percentages_1dp, round1
from .stats import (
    ContingencyTable,
    DegenerateStratumError,
    HomogeneityResult,
    OddsRatioResult,
    UndefinedCorrelationError,
    bin_by_percentile,
    homogeneity_test,
    odds_ratio,
    point_biserial,
)

TOTAL_ROW_ID = "TOTAL"


# --- shared helpers ----------------------------------------------------------


def _ranked_ids(rankings: Iterable[FieldRanking]) -> set[str]:
    ids: set[str] = set()
    for ranking in rankings:
        ids.update(e.researcher_id for e in ranking.entries)
    return ids


def _ts_ids(rankings: Iterable[FieldRanking]) -> set[str]:
    ids: set[str] = set()
    for ranking in rankings:
        ids.update(ranking.top_scientists)
    return ids


def _hca_producers(corpus: Corpus, hcas: HcaSet, ranked: set[str]) -> set[str]:
    producers: set[str] = set()
    for pub in corpus.publications:
        if pub.id in hcas:
            producers.update(rid for rid in pub.roster_ids() if rid in ranked)
    return producers


def _share(num: int, den: int) -> Fraction:
    return Fraction(num, den) if den else Fraction(0)


# --- RQ1: who authors the highly cited articles ------------------------------


@dataclass(frozen=True)
class OverlapRow:
    discipline_id: str
    n_hca: int
    n_output: int
    n_ts_only: int
    n_mixed: int
    n_nonts_only: int

    @property
    def hca_share_of_output(self) -> Fraction:
        return _share(self.n_hca, self.n_output)

    @property
    def share_with_ts(self) -> Fraction:
        return _share(self.n_ts_only + self.n_mixed, self.n_hca)

    @property
    def share_ts_only(self) -> Fraction:
        return _share(self.n_ts_only, self.n_hca)

    @property
    def share_with_nonts(self) -> Fraction:
        return _share(self.n_nonts_only + self.n_mixed, self.n_hca)

    @property
    def share_nonts_only(self) -> Fraction:
        return _share(self.n_nonts_only, self.n_hca)


def overlap_analysis(
    corpus: Corpus, rankings: Iterable[FieldRanking], hcas: HcaSet
) -> list[OverlapRow]:
    """Per-discipline highly-cited-article counts and TS/non-TS authorship mix.

    An article counts toward a discipline when at least one ranked author
    belongs to it; the classification (all-TS, mixed, no-TS) is a property of
    the article's full ranked author set.  The final TOTAL row deduplicates
    articles attributed to several disciplines.
    """
    rankings = list(rankings)
    ranked = _ranked_ids(rankings)
    ts = _ts_ids(rankings)
    disciplines = sorted({corpus.researcher_by_id[r].discipline_id for r in ranked})

    pubs_of: dict[str, set[str]] = {d: set() for d in disciplines}
    hcas_of: dict[str, set[str]] = {d: set() for d in disciplines}
    all_pubs: set[str] = set()
    all_hcas: set[str] = set()
    hca_class: dict[str, str] = {}

    for pub in corpus.publications:
        authors = {rid for rid in pub.roster_ids() if rid in ranked}
        if not authors:
            continue
        pub_disciplines = {corpus.researcher_by_id[rid].discipline_id for rid in authors}
        all_pubs.add(pub.id)
        for d in pub_disciplines:
            pubs_of[d].add(pub.id)
        if pub.id in hcas:
            all_hcas.add(pub.id)
            n_ts = sum(1 for rid in authors if rid in ts)
            if n_ts == len(authors):
                hca_class[pub.id] = "ts_only"
            elif n_ts == 0:
                hca_class[pub.id] = "nonts_only"
            else:
                hca_class[pub.id] = "mixed"
            for d in pub_disciplines:
                hcas_of[d].add(pub.id)

    def build(discipline_id: str, pub_ids: set[str], hca_ids: set[str]) -> OverlapRow:
        counts = Counter(hca_class[h] for h in hca_ids)
        return OverlapRow(
            discipline_id=discipline_id,
            n_hca=len(hca_ids),
            n_output=len(pub_ids),
            n_ts_only=counts["ts_only"],
            n_mixed=counts["mixed"],
            n_nonts_only=counts["nonts_only"],
        )

    rows = [build(d, pubs_of[d], hcas_of[d]) for d in disciplines]
    rows.append(build(TOTAL_ROW_ID, all_pubs, all_hcas))
    return rows


def overlap_table(rows: list[OverlapRow]) -> Table:
    table = Table(
        "overlap",
        [
            "discipline_id",
            "n_hca",
            "n_output",
            "hca_share_of_output_pct",
            "with_ts_pct",
            "ts_only_pct",
            "with_nonts_pct",
            "nonts_only_pct",
        ],
    )
    for row in rows:
        table.append(
            row.discipline_id,
            row.n_hca,
            row.n_output,
            round1(100 * float(row.hca_share_of_output)),
            round1(100 * float(row.share_with_ts)),
            round1(100 * float(row.share_ts_only)),
            round1(100 * float(row.share_with_nonts)),
            round1(100 * float(row.share_nonts_only)),
        )
    return table


# --- RQ1b: producer counts ----------------------------------------------------


@dataclass(frozen=True)
class ProducerRow:
    discipline_id: str
    n_ts: int
    n_ts_with_hca: int
    n_nonts: int
    n_nonts_with_hca: int


def producer_analysis(
    corpus: Corpus, rankings: Iterable[FieldRanking], hcas: HcaSet
) -> list[ProducerRow]:
    """Counts of top scientists and others who authored at least one HCA."""
    rankings = list(rankings)
    ranked = _ranked_ids(rankings)
    ts = _ts_ids(rankings)
    producers = _hca_producers(corpus, hcas, ranked)

    members: dict[str, set[str]] = {}
    for rid in ranked:
        members.setdefault(corpus.researcher_by_id[rid].discipline_id, set()).add(rid)

    rows = []
    for discipline_id in sorted(members):
        group = members[discipline_id]
        group_ts = group & ts
        group_nonts = group - ts
        rows.append(
            ProducerRow(
                discipline_id=discipline_id,
                n_ts=len(group_ts),
                n_ts_with_hca=len(group_ts & producers),
                n_nonts=len(group_nonts),
                n_nonts_with_hca=len(group_nonts & producers),
            )
        )
    rows.append(
        ProducerRow(
            TOTAL_ROW_ID,
            sum(r.n_ts for r in rows),
            sum(r.n_ts_with_hca for r in rows),
            sum(r.n_nonts for r in rows),
            sum(r.n_nonts_with_hca for r in rows),
        )
    )
    return rows


def producer_table(rows: list[ProducerRow]) -> Table:
    table = Table(
        "producers",
        ["discipline_id", "n_ts", "n_ts_with_hca", "pct_ts_with_hca", "n_nonts", "n_nonts_with_hca", "pct_nonts_with_hca"],
    )
    for row in rows:
        table.append(
            row.discipline_id,
            row.n_ts,
            row.n_ts_with_hca,
            round1(100 * float(_share(row.n_ts_with_hca, row.n_ts))),
            row.n_nonts,
            row.n_nonts_with_hca,
            round1(100 * float(_share(row.n_nonts_with_hca, row.n_nonts))),
        )
    return table


# --- RQ2: productivity vs HCA production correlation --------------------------


@dataclass(frozen=True)
class FieldCorrelation:
    field_id: str
    discipline_id: str
    n: int
    n_producers: int
    r: float | None
    note: str = ""


@dataclass(frozen=True)
class CorrelationSummaryRow:
    discipline_id: str
    n_fields: int
    n_excluded: int
    n_weak: int
    n_strong: int
    min_r: float | None
    min_field: str
    max_r: float | None
    max_field: str


@dataclass(frozen=True)
class CorrelationResult:
    per_field: list[FieldCorrelation]
    summary: list[CorrelationSummaryRow]


def correlation_analysis(
    corpus: Corpus,
    rankings: Iterable[FieldRanking],
    hcas: HcaSet,
    weak_cutoff: float = 0.3,
    strong_cutoff: float = 0.6,
) -> CorrelationResult:
    """Per-field point-biserial correlation between FSS and HCA production.

    The dummy is 1 for researchers who authored at least one highly cited
    article.  Fields where the correlation is undefined (single dummy class
    or zero FSS variance) are reported but excluded from the per-discipline
    weak/strong counts and extrema.
    """
    rankings = sorted(rankings, key=lambda rk: rk.field_id)
    ranked = _ranked_ids(rankings)
    producers = _hca_producers(corpus, hcas, ranked)

    per_field: list[FieldCorrelation] = []
    for ranking in rankings:
        values = [e.fss for e in ranking.entries]
        dummies = [1 if e.researcher_id in producers else 0 for e in ranking.entries]
        discipline_id = corpus.field_discipline.get(ranking.field_id, "")
        try:
            r = point_biserial(values, dummies)
            note = ""
        except (UndefinedCorrelationError, ValueError) as exc:
            r = None
            note = str(exc)
        per_field.append(
            FieldCorrelation(ranking.field_id, discipline_id, len(values), sum(dummies), r, note)
        )

    summary: list[CorrelationSummaryRow] = []
    for discipline_id in sorted({fc.discipline_id for fc in per_field}):
        group = [fc for fc in per_field if fc.discipline_id == discipline_id]
        defined = [fc for fc in group if fc.r is not None]
        if defined:
            lo = min(defined, key=lambda fc: fc.r)
            hi = max(defined, key=lambda fc: fc.r)
            min_r, min_field, max_r, max_field = lo.r, lo.field_id, hi.r, hi.field_id
        else:
            min_r = max_r = None
            min_field = max_field = ""
        summary.append(
            CorrelationSummaryRow(
                discipline_id=discipline_id,
                n_fields=len(defined),
                n_excluded=len(group) - len(defined),
                n_weak=sum(1 for fc in defined if fc.r <= weak_cutoff),
                n_strong=sum(1 for fc in defined if fc.r >= strong_cutoff),
                min_r=min_r,
                min_field=min_field,
                max_r=max_r,
                max_field=max_field,
            )
        )
    return CorrelationResult(per_field, summary)


def correlation_table(result: CorrelationResult) -> Table:
    table = Table(
        "correlation",
        ["discipline_id", "n_fields", "n_excluded", "n_weak", "n_strong", "min_r", "min_field", "max_r", "max_field"],
    )
    for row in result.summary:
        table.append(
            row.discipline_id,
            row.n_fields,
            row.n_excluded,
            row.n_weak,
            row.n_strong,
            "" if row.min_r is None else f"{row.min_r:.3f}",
            row.min_field,
            "" if row.max_r is None else f"{row.max_r:.3f}",
            row.max_field,
        )
    return table


# --- RQ3: authorship distribution across productivity bins --------------------


@dataclass(frozen=True)
class AuthorshipDistribution:
    discipline_id: str
    k: int
    n_hcas: int
    frequencies: tuple[int, ...]  # bottom bin first

    @property
    def total_authorships(self) -> int:
        return sum(self.frequencies)

    @property
    def relative(self) -> tuple[Fraction, ...]:
        total = self.total_authorships
        return tuple(_share(f, total) for f in self.frequencies)

    @property
    def cumulative(self) -> tuple[Fraction, ...]:
        acc = Fraction(0)
        out = []
        for share in self.relative:
            acc += share
            out.append(acc)
        return tuple(out)


def authorship_distribution(
    corpus: Corpus,
    rankings: Iterable[FieldRanking],
    hcas: HcaSet,
    k: int,
    per_author: bool = False,
) -> list[AuthorshipDistribution]:
    """HCA authorship frequencies per within-discipline productivity bin.

    Researchers of each discipline are percentile-ranked by FSS (pooled over
    the discipline's fields) and split into k bins, bottom bin first.  Each
    highly cited article adds one count to every bin holding at least one of
    its ranked authors in the discipline; ``per_author`` switches to one
    count per author instead.  A pooled TOTAL row sums the per-discipline
    frequencies.
    """
    rankings = list(rankings)
    fss_by_discipline: dict[str, dict[str, float]] = {}
    for ranking in rankings:
        for entry in ranking.entries:
            discipline_id = corpus.researcher_by_id[entry.researcher_id].discipline_id
            fss_by_discipline.setdefault(discipline_id, {})[entry.researcher_id] = entry.fss

    out: list[AuthorshipDistribution] = []
    for discipline_id in sorted(fss_by_discipline):
        fss_map = fss_by_discipline[discipline_id]
        bins = bin_by_percentile(percentiles_from_values(fss_map), k)
        freq = [0] * k
        n_hcas = 0
        for pub in corpus.publications:
            if pub.id not in hcas:
                continue
            authors = [rid for rid in pub.roster_ids() if rid in bins]
            if not authors:
                continue
            n_hcas += 1
            if per_author:
                for rid in authors:
                    freq[bins[rid] - 1] += 1
            else:
                for b in {bins[rid] for rid in authors}:
                    freq[b - 1] += 1
        out.append(AuthorshipDistribution(discipline_id, k, n_hcas, tuple(freq)))

    out.append(
        AuthorshipDistribution(
            TOTAL_ROW_ID,
            k,
            sum(d.n_hcas for d in out),
            tuple(sum(d.frequencies[i] for d in out) for i in range(k)),
        )
    )
    return out


def bin_label(j: int, k: int) -> str:
    lo = (j - 1) * 100 // k if (j - 1) * 100 % k == 0 else (j - 1) * 100 / k
    hi = j * 100 // k if j * 100 % k == 0 else j * 100 / k
    open_bracket = "[" if j == 1 else "]"
    return f"{open_bracket}{lo}-{hi}]"


def distribution_table(distributions: list[AuthorshipDistribution]) -> Table:
    table = Table(
        "distribution",
        ["discipline_id", "bin", "bin_range", "frequency", "relative_pct", "cumulative_pct"],
    )
    for dist in distributions:
        relative_pct = percentages_1dp([float(s) for s in dist.relative])
        for j in range(1, dist.k + 1):
            table.append(
                dist.discipline_id,
                j,
                bin_label(j, dist.k),
                dist.frequencies[j - 1],
                relative_pct[j - 1],
                round1(100 * float(dist.cumulative[j - 1])),
            )
    return table


# --- RQ4: rank-stratified case-control odds ratios ----------------------------


@dataclass(frozen=True)
class CaseControlRow:
    discipline_id: str
    rank: str
    table: ContingencyTable | None
    or_result: OddsRatioResult | None
    degenerate: bool
    note: str = ""


@dataclass(frozen=True)
class CaseControlResult:
    rows: list[CaseControlRow]
    homogeneity: HomogeneityResult | None


def rank_stratified_case_control(
    corpus: Corpus, rankings: Iterable[FieldRanking], hcas: HcaSet, rank: str
) -> CaseControlResult:
    """Per-discipline odds of HCA authorship for top scientists of one rank.

    Cases are researchers of the rank who authored at least one highly cited
    article, controls those who authored none; exposure is top-scientist
    status.  Degenerate strata (an empty margin or no researchers of the
    rank) are carried in the output but skipped by the cross-discipline
    homogeneity test.
    """
    rankings = list(rankings)
    ranked = _ranked_ids(rankings)
    ts = _ts_ids(rankings)
    producers = _hca_producers(corpus, hcas, ranked)

    members: dict[str, set[str]] = {}
    for rid in ranked:
        researcher = corpus.researcher_by_id[rid]
        if researcher.rank != rank:
            continue
        members.setdefault(researcher.discipline_id, set()).add(rid)

    rows: list[CaseControlRow] = []
    tables_for_test: list[ContingencyTable] = []
    for discipline_id in sorted({corpus.researcher_by_id[r].discipline_id for r in ranked}):
        group = members.get(discipline_id, set())
        if not group:
            rows.append(CaseControlRow(discipline_id, rank, None, None, True, "no researchers of this rank"))
            continue
        table = ContingencyTable(
            a=len(group & ts & producers),
            b=len((group - ts) & producers),
            c=len((group & ts) - producers),
            d=len((group - ts) - producers),
        )
        try:
            result = odds_ratio(table)
        except DegenerateStratumError as exc:
            rows.append(CaseControlRow(discipline_id, rank, table, None, True, str(exc)))
            continue
        rows.append(CaseControlRow(discipline_id, rank, table, result, False))
        tables_for_test.append(table)

    homogeneity = homogeneity_test(tables_for_test) if len(tables_for_test) >= 2 else None
    return CaseControlResult(rows, homogeneity)


def case_control_table(result: CaseControlResult) -> Table:
    table = Table(
        "case_control",
        [
            "row_type",
            "discipline_id",
            "rank",
            "ts_cases",
            "nonts_cases",
            "ts_controls",
            "nonts_controls",
            "odds_ratio",
            "ci_low",
            "ci_high",
            "method",
            "chi_square",
            "df",
            "p_value",
            "note",
        ],
    )
    for row in result.rows:
        cells = ["", "", "", ""] if row.table is None else [row.table.a, row.table.b, row.table.c, row.table.d]
        if row.or_result is None:
            or_cells = ["", "", "", ""]
        else:
            or_cells = [
                round1(row.or_result.or_value),
                round1(row.or_result.ci_low),
                round1(row.or_result.ci_high),
                row.or_result.method,
            ]
        table.append("stratum", row.discipline_id, row.rank, *cells, *or_cells, "", "", "", row.note)
    if result.homogeneity is not None:
        h = result.homogeneity
        table.append(
            "homogeneity", "", result.rows[0].rank if result.rows else "", "", "", "", "", "", "", "", "",
            f"{h.chi_square:.2f}", h.degrees_of_freedom, f"{h.p_value:.3f}", "",
        )
    return table
