#!/usr/bin/env python3
"""Figures from fault-campaign CSV files.

Reads the harness CSV schema by header name and renders one of three
figure kinds:

  norm    l2 scatter against a global bit index,
          target_offset + coeff * word_width + bit
  delta   per-bit aggregate l2, one overlaid series per delta_log2
  hist    grouped bars of category shares per group value

The script only touches the documented CSV columns; it never imports
the pipeline package. render() returns the numeric series behind the
figure so orderings can be checked programmatically. PNG output is
byte-stable for identical input (image metadata is suppressed).

Usage:
  plots.py --in results.csv --kind norm --filter target=c0 --out fig.png
"""

import argparse
import csv
import os
import statistics
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

REQUIRED_COLUMNS = ("mode", "N", "q0_bits", "L", "delta_log2", "slots",
                    "stage", "target", "limb", "coeff", "bit", "wrapped",
                    "scheme_seed", "input_seed", "l2", "mse", "frac_correct",
                    "category")
CATEGORIES = ("robust", "app_dependent", "catastrophic")
TARGET_ORDER = ("plaintext", "c0", "c1")
KINDS = ("norm", "delta", "hist")
SCALES = ("linear", "semilog-y", "symlog-y")


class SchemaError(Exception):
    pass


class NoDataError(Exception):
    pass


@dataclass
class PlotSpec:
    kind: str
    filters: list = field(default_factory=list)
    scale: str = ""
    group_by: str = "delta_log2"
    out: str = "figure.png"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("kind must be one of %s" % (KINDS,))
        if not self.scale:
            self.scale = {"norm": "symlog-y", "delta": "semilog-y",
                          "hist": "linear"}[self.kind]
        if self.scale not in SCALES:
            raise ValueError("scale must be one of %s" % (SCALES,))
        for column, _ in self.filters:
            if column not in REQUIRED_COLUMNS:
                raise SchemaError("unknown filter column %r" % column)


def load_rows(paths, filters=(), keep_golden=False):
    """Read one or more campaign CSVs into dict rows, applying filters.

    Filter values compare as text against the stored field, so numeric
    columns match their canonical formatting (e.g. delta_log2=40).
    """
    rows = []
    for path in paths:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise SchemaError("%s lacks columns: %s"
                                  % (path, ", ".join(missing)))
            stem = os.path.splitext(os.path.basename(path))[0]
            for row in reader:
                if not keep_golden and row["stage"] == "golden":
                    continue
                if all(row[k] == v for k, v in filters):
                    row["source"] = stem
                    rows.append(row)
    if not rows:
        raise NoDataError("no data rows survive the filters")
    return rows


def _word_width(rows):
    modes = {row["mode"] for row in rows}
    if modes <= {"vanilla"}:
        return max(int(row["bit"]) for row in rows) + 1
    return 64


def _sort_key(value):
    try:
        return (0, float(value))
    except ValueError:
        return (1, value)


def series_norm(rows):
    """Per-target (x, y) scatter arrays on the global bit index."""
    width = _word_width(rows)
    n = max(int(row["N"]) for row in rows)
    span = n * width
    out = {}
    for row in rows:
        target = row["target"]
        offset = (TARGET_ORDER.index(target) * span
                  if target in TARGET_ORDER else 0)
        x = offset + int(row["coeff"]) * width + int(row["bit"])
        out.setdefault(target, ([], []))
        out[target][0].append(x)
        out[target][1].append(float(row["l2"]))
    return out


def series_delta(rows):
    """Median l2 per bit, one series per delta_log2 value."""
    grouped = {}
    for row in rows:
        key = row["delta_log2"]
        grouped.setdefault(key, {}).setdefault(int(row["bit"]), []).append(
            float(row["l2"]))
    out = {}
    for key in sorted(grouped, key=_sort_key):
        bits = sorted(grouped[key])
        out[key] = (bits, [statistics.median(grouped[key][b]) for b in bits])
    return out


def series_hist(rows, group_by):
    """Category share per group value."""
    if group_by != "source" and group_by not in REQUIRED_COLUMNS:
        raise SchemaError("unknown group column %r" % group_by)
    counts = {}
    for row in rows:
        counts.setdefault(row[group_by], []).append(row["category"])
    out = {}
    for key in sorted(counts, key=_sort_key):
        cats = counts[key]
        out[key] = {c: cats.count(c) / len(cats) for c in CATEGORIES}
    return out


def _apply_scale(ax, scale):
    if scale == "semilog-y":
        ax.set_yscale("log")
    elif scale == "symlog-y":
        ax.set_yscale("symlog", linthresh=1e-12)


def render(paths, spec: PlotSpec):
    """Render one figure from CSV paths and return its series data.

    The scatter kind keeps golden baseline rows (plotted left of bit
    zero at their residual l2); aggregate kinds use fault rows only.
    """
    rows = load_rows(paths, spec.filters, keep_golden=(spec.kind == "norm"))
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    if spec.kind == "norm":
        series = series_norm(rows)
        for target in sorted(series):
            x, y = series[target]
            ax.plot(x, y, ".", markersize=3, label=target)
        ax.set_xlabel("global bit index")
        ax.set_ylabel("l2 disturbance")
        ax.legend(title="target", loc="upper left")
    elif spec.kind == "delta":
        series = series_delta(rows)
        for key, (bits, med) in series.items():
            ax.plot(bits, med, marker="o", markersize=3,
                    label="delta_log2=%s" % key)
        ax.set_xlabel("bit position")
        ax.set_ylabel("median l2 disturbance")
        ax.legend(loc="upper left")
    else:
        series = series_hist(rows, spec.group_by)
        groups = list(series)
        width = 0.8 / len(CATEGORIES)
        for ci, cat in enumerate(CATEGORIES):
            xs = [gi + (ci - 1) * width for gi in range(len(groups))]
            ax.bar(xs, [series[g][cat] for g in groups], width=width,
                   label=cat)
        ax.set_xticks(range(len(groups)))
        ax.set_xticklabels(["%s=%s" % (spec.group_by, g) for g in groups])
        ax.set_ylabel("share of trials")
        ax.legend()
    _apply_scale(ax, spec.scale)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    metadata = ({"Software": None} if spec.out.endswith(".png")
                else {"Date": None})
    fig.savefig(spec.out, dpi=120, metadata=metadata)
    plt.close(fig)
    return series


def parse_filters(items):
    filters = []
    for item in items or []:
        if "=" not in item:
            raise SchemaError("filter %r is not of the form column=value"
                              % item)
        column, value = item.split("=", 1)
        filters.append((column, value))
    return filters


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Render figures from fault-campaign CSV files.")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="one or more campaign CSV files")
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--filter", action="append", metavar="COL=VALUE",
                        help="keep rows whose column equals the text value")
    parser.add_argument("--group-by", default="delta_log2",
                        help="hist grouping column, or 'source' for the "
                             "input file name (default delta_log2)")
    parser.add_argument("--scale", choices=SCALES, default="",
                        help="override the kind's default axis scale")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec(kind=args.kind, filters=parse_filters(args.filter),
                        scale=args.scale, group_by=args.group_by,
                        out=args.out)
        series = render(args.inputs, spec)
    except (SchemaError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except NoDataError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    print("wrote %s (%d series)" % (args.out, len(series)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
