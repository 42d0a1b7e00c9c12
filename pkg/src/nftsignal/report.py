"""Render pipeline results as Markdown and CSV tables.

The Granger table lists both null hypotheses (A: tweets do not cause price,
B: price does not cause tweets) with F and p per lag order, bolding entries
significant at the 0.05 level and printing "-" where the data could not
support the lag.  The metrics table reports Acc / F1 / MAE as mean +/- std
over the training runs; the overlap table reports vocabulary sharing in the
fixed buckets {all, 15-18, 10-14, 6-9, 2-5, 1}.
"""

from __future__ import annotations

import csv
import io

from .granger import ALPHA, Direction, GrangerCell
from .importance import ImportanceScore, top_bottom
from .model import Metrics
from .textfeat import OVERLAP_BUCKETS, OverlapDistribution

ABSENT = "-"


def _fmt_p(p: float) -> str:
    # tiny p-values display as the conventional floor; CSVs keep full precision
    return f"{max(p, 0.001):.3f}"


def _fmt_stat(stat) -> str:
    return f"{stat.mean:.3f} ± {stat.std:.3f}"


def granger_cells_to_csv(cells: list[GrangerCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["direction", "lags", "f_stat", "p_value", "df_num", "df_den", "rejected_at_0_05"])
    for cell in cells:
        if cell.result is None:
            writer.writerow([cell.direction.value, cell.lags, ABSENT, ABSENT, ABSENT, ABSENT, ABSENT])
        else:
            r = cell.result
            writer.writerow(
                [cell.direction.value, cell.lags, repr(r.f_stat), repr(r.p_value), r.df_num, r.df_den, r.rejected_at_0_05]
            )
    return buf.getvalue()


def granger_cells_from_csv(text: str) -> list[GrangerCell]:
    from .granger import GrangerResult

    cells = []
    for row in csv.DictReader(io.StringIO(text)):
        direction = Direction(row["direction"])
        lags = int(row["lags"])
        if row["f_stat"] == ABSENT:
            cells.append(GrangerCell(direction, lags, None))
        else:
            cells.append(
                GrangerCell(
                    direction,
                    lags,
                    GrangerResult(
                        direction=direction,
                        lags=lags,
                        f_stat=float(row["f_stat"]),
                        p_value=float(row["p_value"]),
                        df_num=int(row["df_num"]),
                        df_den=int(row["df_den"]),
                        rejected_at_0_05=row["rejected_at_0_05"] == "True",
                    ),
                )
            )
    return cells


def render_granger_table(results: dict[str, list[GrangerCell]], lags: list[int]) -> str:
    """Markdown table: one A row and one B row per project, F and p per lag."""
    header = ["Project", "NH"]
    for lag in lags:
        header += [f"F (lag {lag})", f"p (lag {lag})"]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for project in sorted(results):
        by_key = {(c.direction, c.lags): c for c in results[project]}
        for direction in (Direction.TWEETS_TO_PRICE, Direction.PRICE_TO_TWEETS):
            row = [project if direction is Direction.TWEETS_TO_PRICE else "", direction.value]
            for lag in lags:
                cell = by_key.get((direction, lag))
                if cell is None or cell.result is None:
                    row += [ABSENT, ABSENT]
                else:
                    r = cell.result
                    f_txt, p_txt = f"{r.f_stat:.3f}", _fmt_p(r.p_value)
                    if r.p_value < ALPHA:
                        f_txt, p_txt = f"**{f_txt}**", f"**{p_txt}**"
                    row += [f_txt, p_txt]
            lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def granger_summary_csv(results: dict[str, list[GrangerCell]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["project", "direction", "lags", "f_stat", "p_value", "significant_at_0_05"])
    for project in sorted(results):
        for cell in results[project]:
            if cell.result is None:
                writer.writerow([project, cell.direction.value, cell.lags, ABSENT, ABSENT, ABSENT])
            else:
                r = cell.result
                writer.writerow(
                    [project, cell.direction.value, cell.lags, repr(r.f_stat), repr(r.p_value), r.rejected_at_0_05]
                )
    return buf.getvalue()


def metrics_to_csv(metrics: Metrics, markov_window: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["n_train", "n_test", "markov_window", "runs",
         "acc_mean", "acc_std", "f1_mean", "f1_std", "mae_mean", "mae_std"]
    )
    writer.writerow(
        [metrics.n_train, metrics.n_test, markov_window, metrics.runs,
         repr(metrics.accuracy.mean), repr(metrics.accuracy.std),
         repr(metrics.f1.mean), repr(metrics.f1.std),
         repr(metrics.mae.mean), repr(metrics.mae.std)]
    )
    return buf.getvalue()


def metrics_from_csv(text: str) -> tuple[Metrics, int]:
    from .model import Stat

    row = next(csv.DictReader(io.StringIO(text)))
    metrics = Metrics(
        mae=Stat(float(row["mae_mean"]), float(row["mae_std"])),
        accuracy=Stat(float(row["acc_mean"]), float(row["acc_std"])),
        f1=Stat(float(row["f1_mean"]), float(row["f1_std"])),
        n_train=int(row["n_train"]),
        n_test=int(row["n_test"]),
        runs=int(row["runs"]),
    )
    return metrics, int(row["markov_window"])


def render_metrics_table(rows: dict[str, tuple[Metrics, int]]) -> str:
    """Markdown table with Train/Test sizes, window length and mean +/- std metrics."""
    lines = [
        "| Project | Train | Test | n | Acc | F1 | MAE |",
        "|---|---|---|---|---|---|---|",
    ]
    for project in sorted(rows):
        metrics, window = rows[project]
        lines.append(
            f"| {project} | {metrics.n_train} | {metrics.n_test} | {window} "
            f"| {_fmt_stat(metrics.accuracy)} | {_fmt_stat(metrics.f1)} | {_fmt_stat(metrics.mae)} |"
        )
    return "\n".join(lines) + "\n"


def metrics_summary_csv(rows: dict[str, tuple[Metrics, int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["project", "n_train", "n_test", "markov_window",
         "acc_mean", "acc_std", "f1_mean", "f1_std", "mae_mean", "mae_std"]
    )
    for project in sorted(rows):
        m, window = rows[project]
        writer.writerow(
            [project, m.n_train, m.n_test, window,
             repr(m.accuracy.mean), repr(m.accuracy.std),
             repr(m.f1.mean), repr(m.f1.std), repr(m.mae.mean), repr(m.mae.std)]
        )
    return buf.getvalue()


def overlap_to_csv(dist: OverlapDistribution) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bucket", "words", "share"])
    for bucket in OVERLAP_BUCKETS:
        writer.writerow([bucket, dist.bucket_counts[bucket], repr(dist.bucket_shares[bucket])])
    return buf.getvalue()


def render_overlap_table(dist: OverlapDistribution) -> str:
    lines = [
        "| Projects containing word | Words | Share of union |",
        "|---|---|---|",
    ]
    for bucket in OVERLAP_BUCKETS:
        share = dist.bucket_shares[bucket]
        lines.append(f"| {bucket} | {dist.bucket_counts[bucket]} | {share * 100:.1f}% |")
    return "\n".join(lines) + "\n"


def importance_to_csv(scores: list[ImportanceScore], k: int = 20) -> str:
    """``word,mean,variance`` rows: top-k by mean descending, then bottom-k ascending."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "mean", "variance"])
    if scores:
        top, bottom = top_bottom(scores, k)
        for s in top + bottom:
            writer.writerow([s.word, repr(s.mean), repr(s.variance)])
    return buf.getvalue()


def render_importance_table(scores: list[ImportanceScore], k: int = 20) -> str:
    if not scores:
        return "no features\n"
    top, bottom = top_bottom(scores, k)
    lines = ["| Rank | Word | Mean | Variance |", "|---|---|---|---|"]
    for rank, s in enumerate(top, start=1):
        lines.append(f"| top {rank} | {s.word} | {s.mean:.4f} | {s.variance:.6f} |")
    for rank, s in enumerate(bottom, start=1):
        lines.append(f"| bottom {rank} | {s.word} | {s.mean:.4f} | {s.variance:.6f} |")
    return "\n".join(lines) + "\n"


def densities_to_csv(profiles) -> str:
    """Long-form ``word,frame_index,density`` rows for the plotted words."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "frame_index", "density"])
    for profile in profiles:
        for fi, d in zip(profile.grid, profile.density):
            writer.writerow([profile.word, fi, repr(d)])
    return buf.getvalue()
