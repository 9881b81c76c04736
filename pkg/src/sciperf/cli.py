"""Command-line surface: validate | compute | analyze | generate.

Each command is deterministic given its inputs and configuration; compute
persists its artifacts as plain tables plus a manifest, and analyze consumes
those artifacts, so every stage can be inspected and rerun independently.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .analyses import (
    authorship_distribution,
    case_control_table,
    correlation_analysis,
    correlation_table,
    distribution_table,
    overlap_analysis,
    overlap_table,
    producer_analysis,
    producer_table,
    rank_stratified_case_control,
)
from .corpus import Corpus, CorpusLoadError, IngestConfig, load_corpus, validate_corpus
from .excellence import (
    FieldRanking,
    HcaSet,
    RankedResearcher,
    hca_author_counts,
    identify_hcas,
    load_threshold_table,
    rank_eligible_fields,
)
from .indicators import BaselineTable, compute_all_fss, compute_baselines
from .report import Table, read_table, sha256_of_json, write_manifest, write_table
from .syngen import GenConfig, GenConfigError, generate_corpus, write_generated

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_DATA = 3

ANALYSES = ("overlap", "producers", "correlation", "distribution", "case_control")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RunConfig:
    researchers: Path
    publications: Path
    window: tuple[int, int]
    discipline_policy: dict = field(default_factory=dict)
    default_scheme: str = "equal_fraction"
    ts_percentile: float = 95.0
    hca_top_fraction: float = 0.05
    coverage_threshold: float = 0.5
    min_active_years: int = 3
    distribution_k: int = 10
    out_dir: Path = Path("out")
    format: str = "csv"
    external_baselines: Path | None = None
    external_thresholds: Path | None = None

    def validate(self) -> None:
        if not 0 < self.ts_percentile < 100:
            raise UsageError(f"ts_percentile {self.ts_percentile} outside (0, 100)")
        if not 0 < self.hca_top_fraction < 1:
            raise UsageError(f"hca_top_fraction {self.hca_top_fraction} outside (0, 1)")
        if not 0 < self.coverage_threshold <= 1:
            raise UsageError(f"coverage_threshold {self.coverage_threshold} outside (0, 1]")
        if self.min_active_years < 1:
            raise UsageError("min_active_years must be >= 1")
        if self.distribution_k < 2:
            raise UsageError("distribution_k must be >= 2")
        if self.format not in ("csv", "json", "markdown"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.window[1] < self.window[0]:
            raise UsageError(f"window {self.window} ends before it starts")

    @classmethod
    def from_json(cls, path: Path) -> "RunConfig":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UsageError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON: {exc}") from exc
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"{path}: unknown config keys: {sorted(unknown)}")
        for key in ("researchers", "publications", "window"):
            if key not in data:
                raise UsageError(f"{path}: missing required key {key!r}")
        base = path.parent
        kwargs = dict(data)
        for key in ("researchers", "publications", "out_dir", "external_baselines", "external_thresholds"):
            if kwargs.get(key) is not None:
                kwargs[key] = _resolve(base, kwargs[key])
        kwargs["window"] = tuple(int(y) for y in data["window"])
        config = cls(**kwargs)
        config.validate()
        return config

    def payload(self) -> dict:
        data = {
            "researchers": str(self.researchers),
            "publications": str(self.publications),
            "window": list(self.window),
            "discipline_policy": dict(self.discipline_policy),
            "default_scheme": self.default_scheme,
            "ts_percentile": self.ts_percentile,
            "hca_top_fraction": self.hca_top_fraction,
            "coverage_threshold": self.coverage_threshold,
            "min_active_years": self.min_active_years,
            "distribution_k": self.distribution_k,
            "format": self.format,
            "external_baselines": str(self.external_baselines) if self.external_baselines else None,
            "external_thresholds": str(self.external_thresholds) if self.external_thresholds else None,
        }
        return data

    def ingest_config(self) -> IngestConfig:
        return IngestConfig(self.window, self.discipline_policy, self.default_scheme)


def _resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else base / p


def _load(config: RunConfig) -> Corpus:
    for path in (config.researchers, config.publications):
        if not Path(path).exists():
            raise DataError(f"input file not found: {path}")
    return load_corpus(config.researchers, config.publications, config.ingest_config())


# --- commands -----------------------------------------------------------------


def cmd_validate(config: RunConfig) -> int:
    try:
        corpus = _load(config)
    except CorpusLoadError as exc:
        for problem in exc.problems:
            print(problem)
        print(f"{len(exc.problems)} violation(s)")
        return EXIT_VALIDATION
    report = validate_corpus(corpus)
    print(report)
    print(f"{len(corpus.researchers)} researchers, {len(corpus.publications)} publications")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def _compute_artifacts(config: RunConfig, corpus: Corpus):
    if config.external_baselines:
        if not config.external_baselines.exists():
            raise DataError(f"external baseline table not found: {config.external_baselines}")
        baselines = BaselineTable.from_csv(config.external_baselines)
    else:
        baselines = compute_baselines(corpus)

    fss = compute_all_fss(corpus, baselines)
    rankings = rank_eligible_fields(
        corpus, fss, config.coverage_threshold, config.min_active_years, config.ts_percentile
    )
    if not rankings:
        raise DataError("degenerate corpus: no eligible fields to rank")

    external = None
    if config.external_thresholds:
        if not config.external_thresholds.exists():
            raise DataError(f"external threshold table not found: {config.external_thresholds}")
        external = load_threshold_table(config.external_thresholds)
    hcas = identify_hcas(corpus, config.hca_top_fraction, external)
    return baselines, fss, rankings, hcas


def cmd_compute(config: RunConfig) -> int:
    corpus = _load(config)
    baselines, fss, rankings, hcas = _compute_artifacts(config, corpus)
    hca_counts = hca_author_counts(corpus, hcas)

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    baseline_table = Table("baselines", ["year", "category", "mean_citations", "n_cited"])
    for (year, category), mean in baselines.items():
        baseline_table.append(year, category, mean, baselines.counts[(year, category)])

    metrics = Table(
        "metrics",
        ["researcher_id", "field_id", "discipline_id", "rank", "active_years", "n_publications", "fss", "n_hca_authorships"],
    )
    for researcher in corpus.researchers:
        result = fss[researcher.id]
        metrics.append(
            researcher.id,
            researcher.field_id,
            researcher.discipline_id,
            researcher.rank,
            researcher.active_years,
            result.n_publications,
            result.fss,
            hca_counts[researcher.id],
        )

    ranking_table = Table("rankings", ["field_id", "researcher_id", "fss", "percentile", "is_ts"])
    for field_id in sorted(rankings):
        for entry in rankings[field_id].entries:
            ranking_table.append(field_id, entry.researcher_id, entry.fss, entry.percentile, entry.is_top_scientist)

    hca_table = Table("hcas", ["publication_id"])
    for pid in sorted(hcas.publication_ids):
        hca_table.append(pid)

    threshold_table = Table("hca_thresholds", ["year", "category", "min_citations_inclusive"])
    for (year, category), threshold in sorted(hcas.thresholds.items()):
        threshold_table.append(year, category, threshold)

    artifacts = {}
    for table in (baseline_table, metrics, ranking_table, hca_table, threshold_table):
        path = write_table(table, out, config.format)
        artifacts[table.name] = path.name
    write_manifest(
        out,
        {
            "tool": "sciperf",
            "version": __version__,
            "command": "compute",
            "format": config.format,
            "config_sha256": sha256_of_json(config.payload()),
            "artifacts": artifacts,
        },
    )
    print(f"wrote {len(artifacts)} artifact(s) + manifest to {out}")
    return EXIT_OK


def _read_artifacts(config: RunConfig) -> tuple[list[FieldRanking], HcaSet, str]:
    out = Path(config.out_dir)
    manifest_path = out / "manifest.json"
    if not manifest_path.exists():
        raise DataError(f"no compute artifacts in {out}: run `sciperf compute` first")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    fmt = manifest.get("format", "csv")

    def load(name: str) -> Table:
        path = out / manifest["artifacts"][name]
        if not path.exists():
            raise DataError(f"artifact {path} is missing: run `sciperf compute` first")
        return read_table(path)

    by_field: dict[str, list[RankedResearcher]] = {}
    for record in load("rankings").as_records():
        by_field.setdefault(record["field_id"], []).append(
            RankedResearcher(
                record["researcher_id"],
                float(record["fss"]),
                float(record["percentile"]),
                str(record["is_ts"]).lower() in ("true", "1"),
            )
        )
    rankings = []
    for field_id in sorted(by_field):
        entries = sorted(by_field[field_id], key=lambda e: (-e.fss, e.researcher_id))
        rankings.append(FieldRanking(field_id, tuple(entries)))

    ids = frozenset(record["publication_id"] for record in load("hcas").as_records())
    thresholds = {
        (int(r["year"]), r["category"]): int(r["min_citations_inclusive"])
        for r in load("hca_thresholds").as_records()
    }
    return rankings, HcaSet(ids, thresholds), fmt


def cmd_analyze(config: RunConfig, which: Sequence[str], rank: str) -> int:
    corpus = _load(config)
    rankings, hcas, _ = _read_artifacts(config)
    out = Path(config.out_dir)

    written = []
    for analysis in which:
        if analysis == "overlap":
            table = overlap_table(overlap_analysis(corpus, rankings, hcas))
        elif analysis == "producers":
            table = producer_table(producer_analysis(corpus, rankings, hcas))
        elif analysis == "correlation":
            table = correlation_table(correlation_analysis(corpus, rankings, hcas))
        elif analysis == "distribution":
            table = distribution_table(authorship_distribution(corpus, rankings, hcas, config.distribution_k))
        elif analysis == "case_control":
            table = case_control_table(rank_stratified_case_control(corpus, rankings, hcas, rank))
        else:  # pragma: no cover - guarded by the argument parser
            raise UsageError(f"unknown analysis {analysis!r}")
        written.append(write_table(table, out, config.format))
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_generate(config_path: Path, out_dir: Path, seed: int | None) -> int:
    try:
        gen_config = GenConfig.from_json(config_path)
        if seed is not None:
            gen_config = GenConfig.from_dict({**_gen_dict(gen_config), "seed": seed})
        corpus, truth = generate_corpus(gen_config)
    except GenConfigError as exc:
        print(f"invalid generator config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError:
        print(f"generator config not found: {config_path}", file=sys.stderr)
        return EXIT_USAGE
    paths = write_generated(corpus, truth, out_dir)
    print(f"{len(corpus.researchers)} researchers, {len(corpus.publications)} publications")
    for name, path in sorted(paths.items()):
        print(f"wrote {path}")
    return EXIT_OK


def _gen_dict(config: GenConfig) -> dict:
    from dataclasses import asdict

    data = asdict(config)
    return data


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sciperf",
        description="Research-performance analytics: productivity indicators and excellence convergence analyses.",
    )
    parser.add_argument("--version", action="version", version=f"sciperf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p):
        p.add_argument("--config", required=True, type=Path, help="run configuration (JSON)")
        p.add_argument("--format", choices=("csv", "json", "markdown"), help="override output format")
        p.add_argument("--out", type=Path, help="override output directory")

    p_validate = sub.add_parser("validate", help="load the corpus and report invariant violations")
    p_validate.add_argument("--config", required=True, type=Path)

    p_compute = sub.add_parser("compute", help="compute baselines, FSS, rankings, and the HCA set")
    add_run_args(p_compute)

    p_analyze = sub.add_parser("analyze", help="run analyses over compute artifacts")
    add_run_args(p_analyze)
    p_analyze.add_argument(
        "--which",
        default="all",
        help="comma-separated subset of: " + ",".join(ANALYSES) + " (default: all)",
    )
    p_analyze.add_argument("--rank", choices=("assistant", "associate", "full"), default="assistant")

    p_generate = sub.add_parser("generate", help="emit a synthetic corpus with ground truth")
    p_generate.add_argument("--config", required=True, type=Path, help="generator configuration (JSON)")
    p_generate.add_argument("--out", required=True, type=Path)
    p_generate.add_argument("--seed", type=int, help="override the configured seed")

    return parser


def _parse_which(raw: str) -> list[str]:
    if raw.strip() == "all":
        return list(ANALYSES)
    names = [w.strip() for w in raw.split(",") if w.strip()]
    unknown = [w for w in names if w not in ANALYSES]
    if unknown:
        raise UsageError(f"unknown analyses: {unknown} (choose from {','.join(ANALYSES)})")
    if not names:
        raise UsageError("empty --which")
    return names


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        if args.command == "generate":
            return cmd_generate(args.config, args.out, args.seed)
        config = RunConfig.from_json(args.config)
        if getattr(args, "format", None):
            config.format = args.format
        if getattr(args, "out", None):
            config.out_dir = args.out
        config.validate()
        if args.command == "validate":
            return cmd_validate(config)
        if args.command == "compute":
            return cmd_compute(config)
        if args.command == "analyze":
            return cmd_analyze(config, _parse_which(args.which), args.rank)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CorpusLoadError as exc:
        for problem in exc.problems:
            print(problem, file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
