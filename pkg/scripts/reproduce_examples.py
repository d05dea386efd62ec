"""Run both shipped examples through the CLI pipeline and summarise the reports.

    python3 scripts/reproduce_examples.py [--out DIR]
"""

import argparse
import csv
from pathlib import Path

from tsunamilab.config import parse_config, with_overrides
from tsunamilab.experiments import run_experiment

HERE = Path(__file__).parent


def summary(report: Path) -> dict:
    with open(report, newline="") as fh:
        return {r["key"]: r["value"] for r in csv.DictReader(fh) if r["section"] == "blowup"}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out")
    args = ap.parse_args()
    for name in ("example1", "example2"):
        cfg = parse_config(HERE / "configs" / f"{name}.cfg")
        cfg = with_overrides(cfg, out=str(Path(args.out) / name))
        run_experiment(cfg)
        s = summary(Path(cfg.out) / "report.csv")
        print(
            f"{name}: detected={s['detected']} t*={float(s['t_star']):.4f} "
            f"(+-{float(s['t_star_uncertainty']):.4f}) x*={float(s['x_star']):+.4f} "
            f"x_label={float(s['x_label']):+.4f} T_paper={float(s['t_paper']):.4f} "
            f"T_sharp={float(s['t_sharp']):.4f}"
        )


if __name__ == "__main__":
    main()
