"""Report emission: atomic file writes, CSV serialization, SVG calibration
figures (mean prediction +/- stdev per true label). No plotting dependency;
the SVG is emitted as text so reports stay reviewable and deterministic.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile

import numpy as np

from .evaluate import BinaryReport, CalibrationCurve, MetricsReport


def atomic_write_text(path, text: str) -> None:
    """Temp file in the target directory + rename, so readers never see a
    partial file."""
    path = str(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    atomic_write_text(path, buf.getvalue())


def fmt(value) -> str:
    """Full-precision, deterministic float formatting for report files."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def metrics_rows(report, fold_reports):
    """Rows for metrics.csv: pooled metrics first, then per-fold ones."""
    rows = []
    if isinstance(report, MetricsReport):
        header = ["scope", "rmse", "spearman_rho", "n"]
        rows.append(["pooled", fmt(report.rmse), fmt(report.spearman_rho), report.n])
        for i, fr in enumerate(fold_reports):
            if fr is None:
                rows.append([f"fold_{i}", "", "", ""])
            else:
                rows.append([f"fold_{i}", fmt(fr.rmse), fmt(fr.spearman_rho), fr.n])
    else:
        header = ["scope", "auc_macro", "f1_weighted", "f1_class0", "f1_class1", "threshold"]
        rows.append(
            ["pooled", fmt(report.auc_macro), fmt(report.f1_weighted),
             fmt(report.f1_class0), fmt(report.f1_class1), fmt(report.threshold)]
        )
        for i, fr in enumerate(fold_reports):
            if fr is None:
                rows.append([f"fold_{i}", "", "", "", "", ""])
            else:
                rows.append(
                    [f"fold_{i}", fmt(fr.auc_macro), fmt(fr.f1_weighted),
                     fmt(fr.f1_class0), fmt(fr.f1_class1), fmt(fr.threshold)]
                )
    return header, rows


def report_summary(report) -> str:
    if isinstance(report, MetricsReport):
        return (
            f"RMSE          {report.rmse:.4f}\n"
            f"Spearman rho  {report.spearman_rho:.4f}\n"
            f"n             {report.n}\n"
        )
    assert isinstance(report, BinaryReport)
    return (
        f"AUC (macro)   {report.auc_macro:.4f}\n"
        f"F1 weighted   {report.f1_weighted:.4f}\n"
        f"F1 class 0    {report.f1_class0:.4f}\n"
        f"F1 class 1    {report.f1_class1:.4f}\n"
        f"threshold     {report.threshold:.2f}\n"
    )


def calibration_rows(curve: CalibrationCurve):
    header = ["label", "mean_pred", "stdev_pred", "count"]
    rows = [
        [fmt(b.label), fmt(b.mean_pred), fmt(b.stdev_pred), b.count] for b in curve.buckets
    ]
    return header, rows


def svg_figure(curve: CalibrationCurve, title: str) -> str:
    """Scatter of mean predicted label per true label with stdev error bars
    and the y=x reference line."""
    width, height = 640, 480
    ml, mr, mt, mb = 64, 24, 48, 56
    plot_w = width - ml - mr
    plot_h = height - mt - mb
    labels = [b.label for b in curve.buckets]
    x_lo = min(1.0, min(labels)) if labels else 1.0
    x_hi = max(7.0, max(labels)) if labels else 7.0
    y_values = [b.mean_pred + b.stdev_pred for b in curve.buckets] + [
        b.mean_pred - b.stdev_pred for b in curve.buckets
    ]
    y_lo = min(0.0, min(y_values)) if y_values else 0.0
    y_hi = max(x_hi, max(y_values)) if y_values else x_hi

    def sx(v):
        return ml + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v):
        return mt + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{title}</text>',
        f'<rect x="{ml}" y="{mt}" width="{plot_w}" height="{plot_h}" fill="none" '
        f'stroke="black"/>',
        f'<line x1="{sx(max(x_lo, y_lo)):.2f}" y1="{sy(max(x_lo, y_lo)):.2f}" '
        f'x2="{sx(min(x_hi, y_hi)):.2f}" y2="{sy(min(x_hi, y_hi)):.2f}" '
        f'stroke="#bbbbbb" stroke-dasharray="4 3"/>',
    ]
    tick = x_lo
    while tick <= x_hi + 1e-9:
        parts.append(
            f'<line x1="{sx(tick):.2f}" y1="{mt + plot_h}" x2="{sx(tick):.2f}" '
            f'y2="{mt + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{sx(tick):.2f}" y="{mt + plot_h + 20}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif">{tick:g}</text>'
        )
        tick += 1.0
    n_yticks = 5
    for i in range(n_yticks + 1):
        v = y_lo + (y_hi - y_lo) * i / n_yticks
        parts.append(
            f'<line x1="{ml - 5}" y1="{sy(v):.2f}" x2="{ml}" y2="{sy(v):.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{ml - 9}" y="{sy(v) + 4:.2f}" text-anchor="end" font-size="12" '
            f'font-family="sans-serif">{v:.1f}</text>'
        )
    parts.append(
        f'<text x="{ml + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">true urgency label</text>'
    )
    parts.append(
        f'<text x="18" y="{mt + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {mt + plot_h / 2:.1f})">'
        "mean predicted label &#177; stdev</text>"
    )
    for b in curve.buckets:
        x = sx(b.label)
        y1 = sy(b.mean_pred - b.stdev_pred)
        y0 = sy(b.mean_pred + b.stdev_pred)
        parts.append(
            f'<line x1="{x:.2f}" y1="{y0:.2f}" x2="{x:.2f}" y2="{y1:.2f}" '
            f'stroke="#2060c0" stroke-width="1.5"/>'
        )
        for yend in (y0, y1):
            parts.append(
                f'<line x1="{x - 5:.2f}" y1="{yend:.2f}" x2="{x + 5:.2f}" y2="{yend:.2f}" '
                f'stroke="#2060c0" stroke-width="1.5"/>'
            )
        parts.append(
            f'<circle cx="{x:.2f}" cy="{sy(b.mean_pred):.2f}" r="4" fill="#2060c0"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
