"""Shared helpers for the experiment scripts."""

import argparse
from pathlib import Path

from pslr.bench import rows_to_csv, rows_to_markdown


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", default="results", help="directory for CSV/Markdown output")
    p.add_argument("--seed", type=int, default=0)
    return p


def save(rows, out_dir, stem, timings=True):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.csv").write_text(rows_to_csv(rows, timings))
    md = rows_to_markdown(rows, timings)
    (out / f"{stem}.md").write_text(md)
    print(md)
