"""Fixed-length timeframe bucketing and trailing-window price normalization.

Tweets and transactions are partitioned into consecutive frames of
``frame_len_days`` starting at the first event's UTC midnight.  Each frame
carries the tweet count and the average sale price (transfers excluded).
Prices are normalized by dividing each frame's average price by the mean of
its previous ``markov_window`` frames, which removes multi-month trends and
leaves a move ratio around 1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from datetime import date, timedelta
from decimal import Decimal

from .ingest import Transaction, Tweet


class TimeseriesError(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    index: int
    start: date
    tweet_count: int
    avg_price: float | None  # mean over sales only; None when n_sales == 0
    n_sales: int


@dataclass(frozen=True)
class TimeframeSeries:
    frame_len_days: int
    frames: tuple[Frame, ...]

    def __len__(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class NormalizedTarget:
    """Move ratios keyed by original frame position.

    The first ``markov_window`` positions have no trailing window and are
    absent; every ratio is positive.
    """

    markov_window: int
    values: tuple[tuple[int, float], ...]

    def __len__(self) -> int:
        return len(self.values)

    def ratios(self) -> list[float]:
        return [y for _, y in self.values]

    def indices(self) -> list[int]:
        return [i for i, _ in self.values]


def frame_index_of(ts, origin: date, frame_len_days: int) -> int:
    """Index of the frame containing an aware UTC timestamp."""
    return (ts.date() - origin).days // frame_len_days


def bucketize(
    tweets: list[Tweet],
    transactions: list[Transaction],
    frame_len_days: int,
) -> TimeframeSeries:
    """Partition events into consecutive frames covering min..max timestamp.

    Every tweet and transaction lands in exactly one frame.  Transfers
    (value 0) count toward neither n_sales nor avg_price.  Empty inputs give
    an empty series.
    """
    if frame_len_days < 1:
        raise TimeseriesError("frame_len_days must be >= 1")
    stamps = [t.timestamp for t in tweets] + [t.timestamp for t in transactions]
    if not stamps:
        return TimeframeSeries(frame_len_days, ())
    origin = min(stamps).date()
    n_frames = (max(stamps).date() - origin).days // frame_len_days + 1

    tweet_counts = [0] * n_frames
    sale_sums = [Decimal(0)] * n_frames
    sale_counts = [0] * n_frames
    for tw in tweets:
        tweet_counts[frame_index_of(tw.timestamp, origin, frame_len_days)] += 1
    for tx in transactions:
        if tx.is_sale:
            i = frame_index_of(tx.timestamp, origin, frame_len_days)
            sale_sums[i] += tx.value_eth
            sale_counts[i] += 1

    frames = []
    for i in range(n_frames):
        avg = float(sale_sums[i] / sale_counts[i]) if sale_counts[i] else None
        frames.append(
            Frame(
                index=i,
                start=origin + timedelta(days=i * frame_len_days),
                tweet_count=tweet_counts[i],
                avg_price=avg,
                n_sales=sale_counts[i],
            )
        )
    return TimeframeSeries(frame_len_days, tuple(frames))


def drop_frames_without_sales(series: TimeframeSeries) -> TimeframeSeries:
    """Keep only frames with at least one sale, reindexed densely.

    Original start dates are retained on the surviving frames.
    """
    kept = [f for f in series.frames if f.n_sales > 0]
    return TimeframeSeries(
        series.frame_len_days,
        tuple(replace(f, index=i) for i, f in enumerate(kept)),
    )


def paired_series(series: TimeframeSeries) -> tuple[list[float], list[float]]:
    """(tweet_counts, avg_prices) over frames that have sales, for causality tests."""
    counts, prices = [], []
    for f in series.frames:
        if f.n_sales > 0:
            counts.append(float(f.tweet_count))
            prices.append(f.avg_price)
    return counts, prices


def markov_normalize(prices, markov_window: int) -> NormalizedTarget:
    """Divide each price by the mean of its previous ``markov_window`` prices.

    The window excludes the current frame, so a ratio of 1.12 means the frame
    sits 12% above the mean of the ``markov_window`` frames before it.  The
    first ``markov_window`` entries are dropped.  All prices must be positive.
    """
    n = markov_window
    if n < 1:
        raise TimeseriesError("markov_window must be >= 1")
    prices = [float(p) for p in prices]
    if len(prices) <= n:
        raise TimeseriesError(
            f"series of length {len(prices)} too short for window {n}; need at least {n + 1}"
        )
    for i, p in enumerate(prices):
        if p <= 0:
            raise TimeseriesError(f"non-positive price {p} at position {i}; window mean would be unusable")
    values = []
    for i in range(n, len(prices)):
        window_mean = sum(prices[i - n : i]) / n
        values.append((i, prices[i] / window_mean))
    return NormalizedTarget(n, tuple(values))


def to_binary_label(target: NormalizedTarget) -> list[int]:
    """1 for an up-move (ratio > 1), else 0; a ratio of exactly 1 maps to 0."""
    return [1 if y > 1.0 else 0 for _, y in target.values]


def series_to_csv(series: TimeframeSeries) -> str:
    """Serialize as ``index,start_date,tweet_count,avg_price,n_sales``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "start_date", "tweet_count", "avg_price", "n_sales"])
    for f in series.frames:
        writer.writerow(
            [f.index, f.start.isoformat(), f.tweet_count, "" if f.avg_price is None else repr(f.avg_price), f.n_sales]
        )
    return buf.getvalue()


def target_to_csv(target: NormalizedTarget) -> str:
    """Serialize as ``frame_index,y_norm`` with the window on a comment-free header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["frame_index", "y_norm", "markov_window"])
    for i, y in target.values:
        writer.writerow([i, repr(y), target.markov_window])
    return buf.getvalue()


def target_from_csv(text: str) -> NormalizedTarget:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise TimeseriesError("empty target CSV")
    return NormalizedTarget(
        markov_window=int(rows[0]["markov_window"]),
        values=tuple((int(r["frame_index"]), float(r["y_norm"])) for r in rows),
    )


def series_from_csv(text: str, frame_len_days: int) -> TimeframeSeries:
    frames = []
    for row in csv.DictReader(io.StringIO(text)):
        frames.append(
            Frame(
                index=int(row["index"]),
                start=date.fromisoformat(row["start_date"]),
                tweet_count=int(row["tweet_count"]),
                avg_price=float(row["avg_price"]) if row["avg_price"] else None,
                n_sales=int(row["n_sales"]),
            )
        )
    return TimeframeSeries(frame_len_days, tuple(frames))
