"""Check-report output: delimited rows on disk plus summary figures.

Suites produce flat :class:`CaseRow` streams; this module writes them as
CSV and renders small matplotlib summaries (per-suite pass/fail bars, a
per-law breakdown, the faithfulness agreement heatmap) next to the CSV
when a report directory is requested.  Matplotlib is imported lazily and
pinned to the Agg backend so the CLI works headless; figure metadata is
stripped so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = ["CaseRow", "write_csv", "suite_summary", "render_figures"]


@dataclass(frozen=True)
class CaseRow:
    """One check outcome: which suite, which case, and the verdict."""

    suite: str
    case: str
    verdict: str
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def write_csv(path: str | Path, rows: Sequence[CaseRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["suite", "case", "verdict", "witness"])
        for r in rows:
            w.writerow([r.suite, r.case, r.verdict, r.witness])


def suite_summary(rows: Iterable[CaseRow]) -> dict[str, tuple[int, int]]:
    """Per-suite ``(passed, failed)`` counts, suites in first-seen order."""
    out: dict[str, tuple[int, int]] = {}
    for r in rows:
        p, f = out.get(r.suite, (0, 0))
        out[r.suite] = (p + r.passed, f + (not r.passed))
    return out


def _agg():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=110, metadata={"Software": None})
    import matplotlib.pyplot as plt

    plt.close(fig)


def _suite_figure(plt, rows: Sequence[CaseRow], path: Path) -> None:
    summary = suite_summary(rows)
    names = list(summary)
    passed = np.array([summary[n][0] for n in names])
    failed = np.array([summary[n][1] for n in names])
    fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(names)), 3.2))
    xs = np.arange(len(names))
    ax.bar(xs, passed, color="#2a8f5c", label="pass")
    ax.bar(xs, failed, bottom=passed, color="#c23b3b", label="fail")
    ax.set_xticks(xs)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("cases")
    ax.set_title("check cases per suite")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def _law_figure(plt, rows: Sequence[CaseRow], path: Path) -> None:
    """Instantiation counts per law, split by verdict; cases are 'name:hash'."""
    per_law: Counter[tuple[str, str]] = Counter()
    for r in rows:
        law = r.case.split(":", 1)[0]
        per_law[(law, r.verdict)] += 1
    laws = sorted({k[0] for k in per_law})
    passed = np.array([per_law[(l, "PASS")] for l in laws])
    failed = np.array([per_law[(l, "FAIL")] for l in laws])
    fig, ax = plt.subplots(figsize=(max(4.0, 0.55 * len(laws)), 3.2))
    xs = np.arange(len(laws))
    ax.bar(xs, passed, color="#2a8f5c", label="pass")
    ax.bar(xs, failed, bottom=passed, color="#c23b3b", label="fail")
    ax.set_xticks(xs)
    ax.set_xticklabels(laws, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("instantiations")
    ax.set_title("law instances by verdict")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def _agreement_figure(plt, matrix: np.ndarray, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(3.6, 3.2))
    im = ax.imshow(matrix, cmap="Blues", vmin=0)
    for (i, j), v in np.ndenumerate(matrix):
        ax.text(j, i, str(int(v)), ha="center", va="center", fontsize=11)
    ax.set_xticks([0, 1])
    ax.set_xticklabels(["F equal", "F differ"], fontsize=9)
    ax.set_yticks([0, 1])
    ax.set_yticklabels(["behav equal", "behav differ"], fontsize=9)
    ax.set_title("faithfulness agreement")
    fig.colorbar(im, shrink=0.8)
    fig.tight_layout()
    _save(fig, path)


def render_figures(
    report_dir: str | Path,
    rows: Sequence[CaseRow],
    agreement: np.ndarray | None = None,
) -> list[str]:
    """Write ``report.csv`` plus figures into ``report_dir``; returns names.

    A law figure appears when any row's suite is ``laws``; the agreement
    heatmap when a 2x2 matrix is supplied.
    """
    out = Path(report_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    write_csv(out / "report.csv", rows)
    written.append("report.csv")
    plt = _agg()
    if rows:
        _suite_figure(plt, rows, out / "suites.png")
        written.append("suites.png")
    law_rows = [r for r in rows if r.suite == "laws"]
    if law_rows:
        _law_figure(plt, law_rows, out / "laws.png")
        written.append("laws.png")
    if agreement is not None:
        _agreement_figure(plt, np.asarray(agreement), out / "faithful.png")
        written.append("faithful.png")
    return written
