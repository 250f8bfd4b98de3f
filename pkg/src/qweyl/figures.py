"""Figure and CSV rendering for verification runs.

Everything here is presentation only: pass/fail verdicts, exit codes, and the
JSON report stream never depend on it.  Rendering is opt-in from the command
line, writes into a caller-chosen directory, and uses the non-interactive
matplotlib backend so it works headless.
"""

from __future__ import annotations

import csv
import json
import os

STATUS_COLORS = {"pass": "#2e7d32", "fail": "#c62828", "skip": "#9e9e9e"}


def write_csv(reports, path):
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "citation", "status", "millis", "seed", "params"])
        for r in sorted(reports, key=lambda r: r.sort_key()):
            w.writerow([r.check, r.citation, r.status, round(r.millis, 3),
                        r.seed, json.dumps(r.params, sort_keys=True, default=str)])
    return path


def render_figures(reports, outdir):
    """Write reports.csv plus two overview charts; returns the file paths."""
    os.makedirs(outdir, exist_ok=True)
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = [write_csv(reports, os.path.join(outdir, "reports.csv"))]

    # stacked status counts per check family
    families = sorted({r.check for r in reports})
    counts = {s: [sum(1 for r in reports if r.check == f and r.status == s)
                  for f in families]
              for s in STATUS_COLORS}
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.35 * len(families) + 1)))
    left = [0] * len(families)
    for status, color in STATUS_COLORS.items():
        ax.barh(families, counts[status], left=left, color=color, label=status)
        left = [a + b for a, b in zip(left, counts[status])]
    ax.set_xlabel("checks")
    ax.set_title("verification status by check family")
    ax.legend(loc="lower right", fontsize=8)
    ax.invert_yaxis()
    fig.tight_layout()
    status_path = os.path.join(outdir, "suite_status.png")
    fig.savefig(status_path, dpi=110)
    plt.close(fig)
    written.append(status_path)

    # slowest individual checks
    top = sorted(reports, key=lambda r: -r.millis)[:25]
    labels = ["%s #%d" % (r.check, k + 1) for k, r in enumerate(top)]
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.3 * len(top) + 1)))
    ax.barh(labels, [r.millis for r in top],
            color=[STATUS_COLORS[r.status] for r in top])
    ax.set_xlabel("milliseconds")
    ax.set_title("slowest checks")
    ax.invert_yaxis()
    fig.tight_layout()
    timing_path = os.path.join(outdir, "check_timings.png")
    fig.savefig(timing_path, dpi=110)
    plt.close(fig)
    written.append(timing_path)
    return written
