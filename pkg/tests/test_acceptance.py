"""Acceptance suite: one test per release criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion alongside the pytest pass/fail markers.
"""
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from sciperf.analyses import authorship_distribution, distribution_table
from sciperf.excellence import identify_hcas, rank_eligible_fields, rank_field
from sciperf.indicators import (
    BYLINE_WEIGHTED,
    EQUAL_FRACTION,
    FssResult,
    compute_all_fss,
    compute_baselines,
    compute_fss,
    fractional_weights,
)
from sciperf.stats import ContingencyTable, homogeneity_test, odds_ratio, point_biserial
from sciperf.syngen import GenConfig, generate_corpus

REPO_ROOT = Path(__file__).resolve().parent.parent

CONVERGENCE_FIXTURE = dict(
    seed=99,
    n_disciplines=2,
    fields_per_discipline=2,
    researchers_per_field=(100, 100),
    n_publications=5000,
    low_coverage_field_share=0.0,
    citation_sigma=0.4,
    team_size_ranges=((1, 4), (1, 4)),
    external_coauthor_share=0.45,
)


def verdict(name):
    print(f"\nACCEPTANCE {name}: PASS")


def test_table8_contingency_reproduces_published_odds_ratio():
    table = ContingencyTable(a=51, b=571, c=12, d=3963)
    result = odds_ratio(table)
    assert abs(result.or_value - 29.5) <= 0.05

    repeats = 200
    start = time.perf_counter()
    for _ in range(repeats):
        odds_ratio(table)
    per_call = (time.perf_counter() - start) / repeats
    assert per_call < 1e-3, f"odds_ratio took {per_call * 1e3:.3f} ms per call"
    verdict("table8-odds-ratio")


def test_point_biserial_equals_pearson_on_1000_instances():
    rng = random.Random(424242)
    for _ in range(1000):
        n = rng.randint(4, 500)
        values = [rng.gauss(0.0, 2.5) for _ in range(n)]
        dummies = [1 if rng.random() < 0.35 else 0 for _ in range(n)]
        if sum(dummies) == 0:
            dummies[0] = 1
        if sum(dummies) == n:
            dummies[0] = 0
        ours = point_biserial(values, dummies)
        pearson = float(np.corrcoef(values, dummies)[0, 1])
        assert abs(ours - pearson) < 1e-12
    verdict("point-biserial-pearson-oracle")


def test_fractional_weights_partition_and_footnote_shares():
    from sciperf.corpus import AuthorSlot

    for n in range(1, 51):
        for scheme in (EQUAL_FRACTION, BYLINE_WEIGHTED):
            for last_org in ("U1", "U2"):
                byline = tuple(
                    AuthorSlot(i + 1, "U1" if i == 0 else (last_org if i == n - 1 else f"M{i}"), None)
                    for i in range(n)
                )
                weights = fractional_weights(byline, scheme)
                assert abs(sum(weights) - 1.0) < 1e-12

    same_univ_five = tuple(
        AuthorSlot(i + 1, "U1" if i in (0, 4) else f"M{i}", None) for i in range(5)
    )
    assert fractional_weights(same_univ_five, BYLINE_WEIGHTED) == [0.40, 0.2 / 3, 0.2 / 3, 0.2 / 3, 0.40]
    verdict("fractional-weight-partition")


def test_hand_corpus_fss_is_exactly_three_eighths(hand_corpus):
    baselines = compute_baselines(hand_corpus)
    result = compute_fss(hand_corpus.researcher_by_id["R1"], hand_corpus, baselines)
    oracle = (Fraction(4, 4) * Fraction(1, 2) + Fraction(0) + Fraction(9, 3) * Fraction(1, 3)) / 4
    assert oracle == Fraction(3, 8)
    assert result.fss == float(oracle) == 0.375
    verdict("fss-hand-corpus")


def test_top_scientist_cardinality_on_distinct_and_tied_fields():
    for n in (20, 21, 100, 101):
        ranking = rank_field("F1", [FssResult(f"R{i}", float(i + 1), 1, 5) for i in range(n)])
        expected = math.floor(0.05 * n)
        assert abs(len(ranking.top_scientists) - expected) <= 1, f"n={n}"
    tied = rank_field("F1", [FssResult(f"R{i}", 1.0, 1, 5) for i in range(50)])
    assert len(tied.top_scientists) == 0
    verdict("ts-cardinality")


def test_hca_share_on_distinct_citation_fixture():
    config = GenConfig(
        seed=314159,
        n_disciplines=4,
        fields_per_discipline=5,
        researchers_per_field=(100, 100),
        n_publications=10_000,
        distinct_citations=True,
        multi_category_share=0.0,
        low_coverage_field_share=0.0,
    )
    corpus, _ = generate_corpus(config)
    groups = {}
    for pub in corpus.publications:
        groups.setdefault((pub.year, pub.subject_categories[0]), []).append(pub.citations)
    assert all(len(cs) >= 100 for cs in groups.values())
    assert all(len(cs) == len(set(cs)) for cs in groups.values())
    hcas = identify_hcas(corpus, 0.05)
    share = len(hcas.publication_ids) / len(corpus.publications)
    assert 0.045 <= share <= 0.050, f"share={share:.4f}"
    verdict("hca-rate")


def test_homogeneity_null_and_reorder_stability():
    stratum = ContingencyTable(18, 82, 7, 93)
    for k in range(2, 10):
        result = homogeneity_test([stratum] * k)
        assert result.chi_square < 1e-9
        assert result.p_value > 0.999
        assert result.degrees_of_freedom == k - 1
    mixed = [
        ContingencyTable(20, 80, 10, 90),
        ContingencyTable(40, 60, 5, 95),
        ContingencyTable(9, 41, 4, 66),
        ContingencyTable(33, 17, 21, 52),
    ]
    base = homogeneity_test(mixed).chi_square
    rng = random.Random(8)
    for _ in range(10):
        shuffled = mixed[:]
        rng.shuffle(shuffled)
        assert abs(homogeneity_test(shuffled).chi_square - base) < 1e-12
    verdict("homogeneity-null")


def test_distribution_reports_partition_at_report_precision():
    config = GenConfig(**{**CONVERGENCE_FIXTURE, "seed": 1234})
    corpus, _ = generate_corpus(config)
    fss = compute_all_fss(corpus, compute_baselines(corpus))
    rankings = list(rank_eligible_fields(corpus, fss).values())
    hcas = identify_hcas(corpus)
    for k in (4, 10):
        table = distribution_table(authorship_distribution(corpus, rankings, hcas, k))
        disciplines = {row[0] for row in table.rows}
        for d in disciplines:
            rows = [r for r in table.rows if r[0] == d]
            rel = [r[4] for r in rows]
            cum = [r[5] for r in rows]
            assert abs(sum(rel) - 100.0) <= 0.05
            assert cum == sorted(cum)
            assert cum[-1] == 100.0
    verdict("distribution-partition")


def top_decile_share(hca_boost: float, rate_boost: float) -> float:
    config = GenConfig(**CONVERGENCE_FIXTURE, hca_propensity_boost=hca_boost, star_rate_boost=rate_boost)
    corpus, _ = generate_corpus(config)
    fss = compute_all_fss(corpus, compute_baselines(corpus))
    rankings = list(rank_eligible_fields(corpus, fss).values())
    hcas = identify_hcas(corpus)
    total = authorship_distribution(corpus, rankings, hcas, 10)[-1]
    return float(total.relative[-1])


def test_planted_convergence_recovery():
    boosted = top_decile_share(10.0, 5.0)
    assert boosted > 0.5, f"boosted top-decile share {boosted:.3f}"
    null = top_decile_share(1.0, 1.0)
    assert null < 0.2, f"null top-decile share {null:.3f}"
    verdict("planted-convergence")


def run_cli(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "sciperf.cli", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, f"{args} failed:\n{proc.stdout}\n{proc.stderr}"
    return proc


def test_end_to_end_demo_under_budget_with_identical_reruns(tmp_path):
    corpus_dir = tmp_path / "corpus"
    out_dir = tmp_path / "out"
    run_config = tmp_path / "run.json"
    run_config.write_text(
        json.dumps(
            {
                "researchers": str(corpus_dir / "researchers.csv"),
                "publications": str(corpus_dir / "publications.csv"),
                "window": [2004, 2008],
                "discipline_policy": {"D01": "byline_weighted", "D02": "byline_weighted"},
                "out_dir": str(out_dir),
            }
        )
    )

    def run_chain():
        run_cli(
            ["generate", "--config", str(REPO_ROOT / "configs" / "demo_gen.json"), "--out", str(corpus_dir)],
            tmp_path,
        )
        run_cli(["validate", "--config", str(run_config)], tmp_path)
        run_cli(["compute", "--config", str(run_config)], tmp_path)
        run_cli(["analyze", "--config", str(run_config), "--which", "all"], tmp_path)
        return {
            path.name: path.read_bytes()
            for path in sorted([*corpus_dir.iterdir(), *out_dir.iterdir()])
        }

    started = time.perf_counter()
    first = run_chain()
    elapsed = time.perf_counter() - started
    second = run_chain()

    assert first["researchers.csv"].decode().count("\n") - 1 == 2000
    assert first["publications.csv"].decode().count("\n") - 1 == 10_000
    assert first.keys() == second.keys()
    for name in first:
        assert first[name] == second[name], f"{name} differs between reruns"
    assert elapsed < 60.0, f"end-to-end took {elapsed:.1f}s"
    verdict("end-to-end")
