"""Soundness reports on disk: JSON, CSV and a bar chart of pass rates."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COLUMNS = ("group", "rule", "model", "kind", "instances", "passes", "failures",
           "trivial", "skipped")
GROUP_COLORS = {"primary": "#4c72b0", "combined": "#dd8452", "imp": "#55a868"}


def rows(reports: dict) -> list:
    out = []
    for group, reps in reports.items():
        for r in reps:
            out.append({"group": group, "rule": r.rule, "model": r.model, "kind": r.kind,
                        "instances": r.instances, "passes": r.passes, "failures": r.failures,
                        "trivial": r.trivial, "skipped": r.skipped})
    return out


def write_report(reports: dict, summary: dict, outdir, stem: str = "soundness") -> dict:
    """Write <stem>.json, <stem>.csv and <stem>.png under outdir; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {"json": outdir / f"{stem}.json", "csv": outdir / f"{stem}.csv",
             "png": outdir / f"{stem}.png"}
    doc = {"summary": summary,
           "reports": {g: [r.to_json() for r in reps] for g, reps in reports.items()}}
    paths["json"].write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    table = rows(reports)
    with paths["csv"].open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        w.writerows(table)
    plot_pass_rates(table, paths["png"])
    return {k: str(v) for k, v in paths.items()}


def plot_pass_rates(table: list, path):
    groups = [g for g in GROUP_COLORS if any(r["group"] == g for r in table)]
    fig, axes = plt.subplots(len(groups), 1, figsize=(11, 2.6 * len(groups)), squeeze=False)
    for ax, group in zip(axes[:, 0], groups):
        sub = [r for r in table if r["group"] == group]
        rates = [r["passes"] / r["instances"] if r["instances"] else 0.0 for r in sub]
        colors = [GROUP_COLORS[group] if r["failures"] == 0 else "#c44e52" for r in sub]
        xs = range(len(sub))
        ax.bar(xs, rates, color=colors, width=0.7)
        ax.set_xticks(list(xs))
        ax.set_xticklabels([r["rule"] for r in sub], rotation=45, ha="right", fontsize=8)
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("pass rate")
        ax.set_title(f"{group} ({sub[0]['model'] if group != 'primary' else 'own model'})",
                     fontsize=10, loc="left")
        ax.axhline(1.0, color="grey", lw=0.5, ls=":")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
