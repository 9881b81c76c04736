import csv
import json

import pytest

from sciperf.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from sciperf.corpus import dump_corpus, make_corpus

from conftest import WINDOW, publication, researcher


def write_run_config(tmp_path, corpus_dir, out_dir, **extra):
    payload = {
        "researchers": str(corpus_dir / "researchers.csv"),
        "publications": str(corpus_dir / "publications.csv"),
        "window": list(WINDOW),
        "out_dir": str(out_dir),
        **extra,
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload))
    return path


@pytest.fixture
def hand_corpus_dir(tmp_path, hand_corpus):
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    dump_corpus(hand_corpus, corpus_dir / "researchers.csv", corpus_dir / "publications.csv")
    return corpus_dir


def test_validate_clean_corpus_exits_zero(tmp_path, hand_corpus_dir, capsys):
    config = write_run_config(tmp_path, hand_corpus_dir, tmp_path / "out")
    assert main(["validate", "--config", str(config)]) == EXIT_OK
    assert "no violations" in capsys.readouterr().out


def test_validate_broken_reference_exits_one(tmp_path, hand_corpus_dir, capsys):
    pubs = hand_corpus_dir / "publications.csv"
    pubs.write_text(pubs.read_text().replace("1|R1|U1;2|-|U2", "1|X9|U1;2|-|U2", 1))
    config = write_run_config(tmp_path, hand_corpus_dir, tmp_path / "out")
    assert main(["validate", "--config", str(config)]) == EXIT_VALIDATION
    assert "X9" in capsys.readouterr().out


def test_validate_is_deterministic(tmp_path, hand_corpus_dir, capsys):
    config = write_run_config(tmp_path, hand_corpus_dir, tmp_path / "out")
    main(["validate", "--config", str(config)])
    first = capsys.readouterr().out
    main(["validate", "--config", str(config)])
    assert capsys.readouterr().out == first


def test_missing_input_exits_data_error(tmp_path, capsys):
    config = write_run_config(tmp_path, tmp_path / "nope", tmp_path / "out")
    assert main(["validate", "--config", str(config)]) == EXIT_DATA


def test_compute_writes_hand_fss(tmp_path, hand_corpus_dir):
    out = tmp_path / "out"
    config = write_run_config(tmp_path, hand_corpus_dir, out)
    assert main(["compute", "--config", str(config)]) == EXIT_OK
    with (out / "metrics.csv").open() as fh:
        rows = {row["researcher_id"]: row for row in csv.DictReader(fh)}
    assert rows["R1"]["fss"] == "0.375"
    assert (out / "manifest.json").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "compute"
    assert set(manifest["artifacts"]) == {"baselines", "metrics", "rankings", "hcas", "hca_thresholds"}


def test_compute_reruns_byte_identical(tmp_path, hand_corpus_dir):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    config_a = write_run_config(tmp_path, hand_corpus_dir, out_a)
    main(["compute", "--config", str(config_a)])
    main(["compute", "--config", str(config_a), "--out", str(out_b)])
    names = sorted(p.name for p in out_a.iterdir())
    assert names == sorted(p.name for p in out_b.iterdir())
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_compute_uses_external_baselines(tmp_path):
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    corpus = make_corpus([researcher("R1", active_years=1)], [publication("P1", 8, ["R1"])], WINDOW)
    dump_corpus(corpus, corpus_dir / "researchers.csv", corpus_dir / "publications.csv")
    baselines = tmp_path / "baselines.csv"
    baselines.write_text("year,category,mean_citations,n_cited\n2005,CA,4.0,7\n")
    out = tmp_path / "out"
    config = write_run_config(
        tmp_path, corpus_dir, out, external_baselines=str(baselines), min_active_years=1
    )
    assert main(["compute", "--config", str(config)]) == EXIT_OK
    with (out / "metrics.csv").open() as fh:
        row = next(csv.DictReader(fh))
    assert row["fss"] == "2.0"  # 8 citations / external baseline 4.0, t = 1


def test_analyze_all_emits_five_reports(tmp_path, hand_corpus_dir):
    out = tmp_path / "out"
    config = write_run_config(tmp_path, hand_corpus_dir, out)
    main(["compute", "--config", str(config)])
    assert main(["analyze", "--config", str(config), "--which", "all"]) == EXIT_OK
    reports = {p.name for p in out.iterdir()} - {
        "baselines.csv", "metrics.csv", "rankings.csv", "hcas.csv", "hca_thresholds.csv", "manifest.json",
    }
    assert reports == {"overlap.csv", "producers.csv", "correlation.csv", "distribution.csv", "case_control.csv"}


def test_analyze_without_compute_names_the_missing_step(tmp_path, hand_corpus_dir, capsys):
    config = write_run_config(tmp_path, hand_corpus_dir, tmp_path / "out")
    assert main(["analyze", "--config", str(config)]) == EXIT_DATA
    assert "compute" in capsys.readouterr().err


def test_analyze_unknown_analysis_is_usage_error(tmp_path, hand_corpus_dir, capsys):
    config = write_run_config(tmp_path, hand_corpus_dir, tmp_path / "out")
    assert main(["analyze", "--config", str(config), "--which", "sorcery"]) == EXIT_USAGE


def test_bad_threshold_config_is_usage_error(tmp_path, hand_corpus_dir):
    config = write_run_config(tmp_path, hand_corpus_dir, tmp_path / "out", ts_percentile=250)
    assert main(["compute", "--config", str(config)]) == EXIT_USAGE


def test_case_control_micro_fixture_shows_published_odds_ratio(tmp_path):
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    groups = {
        "TC": (51, True, True),
        "NC": (571, False, True),
        "TX": (12, True, False),
        "NX": (3963, False, False),
    }
    researchers_, pubs, ranking_rows, hca_ids = [], [], [], []
    for prefix, (count, is_ts, is_case) in groups.items():
        for i in range(count):
            rid = f"{prefix}{i:04d}"
            researchers_.append(researcher(rid, rank="assistant"))
            ranking_rows.append(["F1", rid, str(float(count - i)), "0.0", str(is_ts)])
            if is_case:
                pid = f"H-{rid}"
                pubs.append(publication(pid, 9, [rid]))
                hca_ids.append(pid)
    corpus = make_corpus(researchers_, pubs, WINDOW)
    dump_corpus(corpus, corpus_dir / "researchers.csv", corpus_dir / "publications.csv")

    out = tmp_path / "out"
    out.mkdir()
    with (out / "rankings.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["field_id", "researcher_id", "fss", "percentile", "is_ts"])
        writer.writerows(ranking_rows)
    with (out / "hcas.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["publication_id"])
        writer.writerows([[pid] for pid in hca_ids])
    (out / "hca_thresholds.csv").write_text("year,category,min_citations_inclusive\n2005,CA,9\n")
    (out / "manifest.json").write_text(
        json.dumps(
            {
                "tool": "sciperf",
                "command": "compute",
                "format": "csv",
                "artifacts": {
                    "rankings": "rankings.csv",
                    "hcas": "hcas.csv",
                    "hca_thresholds": "hca_thresholds.csv",
                },
            }
        )
    )
    config = write_run_config(tmp_path, corpus_dir, out)
    assert main(["analyze", "--config", str(config), "--which", "case_control", "--rank", "assistant"]) == EXIT_OK
    with (out / "case_control.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    stratum = next(r for r in rows if r["row_type"] == "stratum")
    assert stratum["odds_ratio"] == "29.5"
    assert (stratum["ts_cases"], stratum["nonts_cases"]) == ("51", "571")


def test_markdown_format_runs_end_to_end(tmp_path, hand_corpus_dir):
    out = tmp_path / "out"
    config = write_run_config(tmp_path, hand_corpus_dir, out, format="markdown")
    assert main(["compute", "--config", str(config)]) == EXIT_OK
    assert main(["analyze", "--config", str(config), "--which", "overlap"]) == EXIT_OK
    text = (out / "overlap.md").read_text()
    assert text.startswith("| discipline_id |")


def test_generate_then_validate_round_trip(tmp_path):
    gen_config = tmp_path / "gen.json"
    gen_config.write_text(
        json.dumps(
            {
                "seed": 31,
                "n_disciplines": 2,
                "fields_per_discipline": 2,
                "researchers_per_field": [30, 40],
                "n_publications": 600,
            }
        )
    )
    corpus_dir = tmp_path / "corpus"
    assert main(["generate", "--config", str(gen_config), "--out", str(corpus_dir)]) == EXIT_OK
    config = write_run_config(tmp_path, corpus_dir, tmp_path / "out")
    assert main(["validate", "--config", str(config)]) == EXIT_OK


def test_generate_seed_override_changes_bytes(tmp_path):
    gen_config = tmp_path / "gen.json"
    gen_config.write_text(json.dumps({"seed": 31, "n_publications": 400, "researchers_per_field": [20, 30], "n_disciplines": 2, "fields_per_discipline": 2}))
    main(["generate", "--config", str(gen_config), "--out", str(tmp_path / "a")])
    main(["generate", "--config", str(gen_config), "--out", str(tmp_path / "b"), "--seed", "32"])
    a = (tmp_path / "a" / "publications.csv").read_bytes()
    b = (tmp_path / "b" / "publications.csv").read_bytes()
    assert a != b


def test_generate_invalid_config_is_usage_error(tmp_path, capsys):
    gen_config = tmp_path / "gen.json"
    gen_config.write_text(json.dumps({"seed": 1, "star_share": 3.0}))
    assert main(["generate", "--config", str(gen_config), "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert "star_share" in capsys.readouterr().err


def test_distribution_report_partitions(tmp_path):
    gen_config = tmp_path / "gen.json"
    gen_config.write_text(
        json.dumps(
            {
                "seed": 77,
                "n_disciplines": 2,
                "fields_per_discipline": 2,
                "researchers_per_field": [50, 60],
                "n_publications": 1500,
            }
        )
    )
    corpus_dir = tmp_path / "corpus"
    main(["generate", "--config", str(gen_config), "--out", str(corpus_dir)])
    out = tmp_path / "out"
    config = write_run_config(tmp_path, corpus_dir, out, distribution_k=10)
    main(["compute", "--config", str(config)])
    main(["analyze", "--config", str(config), "--which", "distribution"])
    with (out / "distribution.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    disciplines = {r["discipline_id"] for r in rows}
    for d in disciplines:
        rel = [float(r["relative_pct"]) for r in rows if r["discipline_id"] == d]
        assert len(rel) == 10
        assert abs(sum(rel) - 100.0) <= 0.05
