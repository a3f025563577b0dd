"""Line figures from secrecy-sweep CSV files.

Input is the sweep CSV written by the simulation harness (header:
scenario,sweep_param,sweep_value,scheme,mean_secrecy_rate,mean_eve_rate,
mean_cross_corr,trials,master_seed).  Output is a PNG with one series per
scheme.  The input file is never modified and rendering the same CSV twice
produces identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

__version__ = "0.1.0"

EXPECTED_COLUMNS = (
    "scenario",
    "sweep_param",
    "sweep_value",
    "scheme",
    "mean_secrecy_rate",
    "mean_eve_rate",
    "mean_cross_corr",
    "trials",
    "master_seed",
)

METRIC_COLUMNS = {
    "secrecy": "mean_secrecy_rate",
    "eve": "mean_eve_rate",
    "xcorr": "mean_cross_corr",
}

METRIC_LABELS = {
    "secrecy": "Mean secrecy rate (bps/Hz)",
    "eve": "Mean eavesdropper rate (bps/Hz)",
    "xcorr": "Mean channel cross-correlation",
}

X_LABELS = {
    "snr": "SNR (dB)",
    "antennas": "Number of transmit antennas",
    "csi-error": "Normalized channel error variance",
    "multi-eve": "Number of eavesdropper antennas",
}

SCHEME_STYLES = {
    "Proposed": dict(marker="o", linestyle="-", color="tab:red"),
    "MRT": dict(marker="s", linestyle="--", color="tab:green"),
    "FPA": dict(marker="^", linestyle="-.", color="tab:blue"),
    "Upper bound": dict(marker="d", linestyle=":", color="black"),
}


class RenderError(ValueError):
    """Bad input: schema mismatch, scenario mismatch, or empty data."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    scenario: str
    out_path: str
    metric: str = "secrecy"


def _read_rows(spec: FigureSpec):
    with open(spec.csv_path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in EXPECTED_COLUMNS if col not in header]
        if missing:
            raise RenderError(f"missing column: {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise RenderError("CSV has a header but no data rows")
    bad = {row["scenario"] for row in rows if row["scenario"] != spec.scenario}
    if bad:
        raise RenderError(
            f"scenario mismatch: expected {spec.scenario!r}, CSV contains {sorted(bad)}"
        )
    return rows


def render(spec: FigureSpec) -> str:
    """Render one figure and return the output path.

    Raises RenderError before any file is written when the CSV does not
    conform to the schema, belongs to a different scenario, or is empty.
    """
    if spec.metric not in METRIC_COLUMNS:
        raise RenderError(
            f"unknown metric {spec.metric!r}; choose from {sorted(METRIC_COLUMNS)}"
        )
    rows = _read_rows(spec)
    column = METRIC_COLUMNS[spec.metric]

    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        try:
            x = float(row["sweep_value"])
            y = float(row[column])
        except (TypeError, ValueError) as exc:
            raise RenderError(f"non-numeric cell in {column!r}: {exc}") from exc
        series.setdefault(row["scheme"], []).append((x, y))

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    try:
        for scheme, style in SCHEME_STYLES.items():
            if scheme not in series:
                continue
            points = sorted(series[scheme])
            ax.plot(
                [p[0] for p in points],
                [p[1] for p in points],
                label=scheme,
                markersize=5,
                linewidth=1.4,
                **style,
            )
        # schemes outside the canonical four still get plotted, after them
        for scheme in sorted(set(series) - set(SCHEME_STYLES)):
            points = sorted(series[scheme])
            ax.plot([p[0] for p in points], [p[1] for p in points], label=scheme)
        ax.set_xlabel(X_LABELS.get(spec.scenario, rows[0]["sweep_param"]))
        ax.set_ylabel(METRIC_LABELS[spec.metric])
        ax.grid(True, alpha=0.35)
        ax.legend()
        fig.tight_layout()
        fig.savefig(spec.out_path, dpi=160, metadata={"Software": "figplots"})
    finally:
        plt.close(fig)
    return spec.out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figs",
        description="Render a sweep CSV into a line figure (one series per scheme)",
    )
    parser.add_argument("csv_path", help="input sweep CSV")
    parser.add_argument("scenario", help="scenario name recorded in the CSV")
    parser.add_argument("out_path", help="output image path (PNG)")
    parser.add_argument(
        "--metric",
        choices=sorted(METRIC_COLUMNS),
        default="secrecy",
        help="which mean column to plot (default: secrecy)",
    )
    args = parser.parse_args(argv)
    spec = FigureSpec(args.csv_path, args.scenario, args.out_path, args.metric)
    try:
        render(spec)
    except (RenderError, OSError) as exc:
        print(f"render_figs: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {spec.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
