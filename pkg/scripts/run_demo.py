#!/usr/bin/env python3
"""End-to-end demo: generate a synthetic corpus, compute indicators, run all analyses.

Equivalent to the CLI chain

    sciperf generate --config configs/demo_gen.json --out demo/corpus
    sciperf validate --config configs/demo_run.json
    sciperf compute  --config configs/demo_run.json
    sciperf analyze  --config configs/demo_run.json --which all

then prints the headline numbers from each report.
"""
import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

from sciperf.cli import main as cli_main  # noqa: E402
from sciperf.report import read_table  # noqa: E402


def run(args):
    code = cli_main(args)
    if code != 0:
        sys.exit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=ROOT / "demo", help="demo working directory")
    parser.add_argument("--seed", type=int, default=None, help="override the bundled generator seed")
    args = parser.parse_args()

    corpus_dir = args.out / "corpus"
    out_dir = args.out / "out"
    gen = ["generate", "--config", str(ROOT / "configs" / "demo_gen.json"), "--out", str(corpus_dir)]
    if args.seed is not None:
        gen += ["--seed", str(args.seed)]
    run(gen)

    run_config = args.out / "run.json"
    run_config.write_text(
        """{
  "researchers": "corpus/researchers.csv",
  "publications": "corpus/publications.csv",
  "window": [2004, 2008],
  "discipline_policy": {"D01": "byline_weighted", "D02": "byline_weighted"},
  "out_dir": "out"
}
"""
    )
    run(["validate", "--config", str(run_config)])
    run(["compute", "--config", str(run_config)])
    run(["analyze", "--config", str(run_config), "--which", "all"])

    print("\n--- headline numbers ---")
    overlap = read_table(out_dir / "overlap.csv")
    total = next(r for r in overlap.as_records() if r["discipline_id"] == "TOTAL")
    print(
        f"HCAs: {total['n_hca']} of {total['n_output']} publications "
        f"({total['hca_share_of_output_pct']}%); "
        f"TS-only {total['ts_only_pct']}%, non-TS-only {total['nonts_only_pct']}%"
    )
    producers = read_table(out_dir / "producers.csv")
    ptotal = next(r for r in producers.as_records() if r["discipline_id"] == "TOTAL")
    print(
        f"top scientists with at least one HCA: {ptotal['n_ts_with_hca']}/{ptotal['n_ts']} "
        f"({ptotal['pct_ts_with_hca']}%); others: {ptotal['pct_nonts_with_hca']}%"
    )
    distribution = read_table(out_dir / "distribution.csv")
    top = [
        r for r in distribution.as_records()
        if r["discipline_id"] == "TOTAL" and r["bin"] == "10"
    ]
    if top:
        print(f"top-decile share of HCA authorships: {top[0]['relative_pct']}%")
    print(f"reports in {out_dir}")


if __name__ == "__main__":
    main()
