"""File-based loading of tweet archives and NFT trade transaction logs.

Tweets arrive as JSONL (one object per line with ``id``, ``created_at``,
``text``, ``like_count``); transactions as CSV with header
``address_from,address_to,token_id,transaction_hash,value_eth,block_timestamp``.
Everything is validated up front, normalized to UTC, and returned as
immutable records sorted by timestamp, so downstream stages can assume a
canonical, deterministic stream.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, replace
from datetime import date, datetime, timezone
from decimal import Decimal, InvalidOperation

log = logging.getLogger(__name__)

ORIGINALITY_AUTHENTIC = "authentic"
ORIGINALITY_COPYCAT = "copycat"

# like-count floors used when a manifest does not set one explicitly
_DEFAULT_LIKE_THRESHOLD = {ORIGINALITY_AUTHENTIC: 5, ORIGINALITY_COPYCAT: 1}

TRANSACTION_FIELDS = (
    "address_from",
    "address_to",
    "token_id",
    "transaction_hash",
    "value_eth",
    "block_timestamp",
)


class IngestError(ValueError):
    """Malformed or invariant-violating input record."""


@dataclass(frozen=True)
class Tweet:
    id: str
    timestamp: datetime  # aware, UTC, second precision
    text: str
    like_count: int


@dataclass(frozen=True)
class Transaction:
    from_address: str
    to_address: str
    token_id: str
    tx_hash: str
    value_eth: Decimal
    timestamp: datetime

    @property
    def is_sale(self) -> bool:
        """Value 0 marks a transfer; anything positive is a sale."""
        return self.value_eth > 0


@dataclass(frozen=True)
class ProjectManifest:
    """Per-project configuration for loading and bucketing.

    ``like_threshold`` defaults to 5 for authentic projects and 1 for
    copycats when left unset.  ``window_start``/``window_end`` optionally
    restrict loading to a date range (inclusive).
    """

    name: str
    contract_address: str = ""
    twitter_handle: str = ""
    originality: str = ORIGINALITY_AUTHENTIC
    like_threshold: int | None = None
    frame_len_days: int = 3
    markov_window: int = 3
    window_start: date | None = None
    window_end: date | None = None

    def __post_init__(self):
        if self.originality not in _DEFAULT_LIKE_THRESHOLD:
            raise IngestError(
                f"originality must be one of {sorted(_DEFAULT_LIKE_THRESHOLD)}, "
                f"got {self.originality!r}"
            )
        if self.like_threshold is None:
            object.__setattr__(
                self, "like_threshold", _DEFAULT_LIKE_THRESHOLD[self.originality]
            )
        if self.like_threshold < 0:
            raise IngestError("like_threshold must be non-negative")
        if not 1 <= self.frame_len_days <= 4:
            raise IngestError("frame_len_days must be between 1 and 4")
        if self.markov_window < 1:
            raise IngestError("markov_window must be positive")

    def in_window(self, ts: datetime) -> bool:
        d = ts.date()
        if self.window_start is not None and d < self.window_start:
            return False
        if self.window_end is not None and d > self.window_end:
            return False
        return True


def parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 timestamp to an aware UTC datetime, second precision."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def load_tweets(path, manifest: ProjectManifest) -> list[Tweet]:
    """Load a JSONL tweet archive, keeping tweets with enough likes.

    Records with like_count below ``manifest.like_threshold`` (or outside the
    manifest's date window, if one is set) are dropped.  The result is sorted
    ascending by timestamp.  Any malformed line raises IngestError citing the
    line number; an empty result only logs a warning.
    """
    tweets: list[Tweet] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise IngestError(f"{path}: line {lineno}: expected a JSON object")
            try:
                tweet = Tweet(
                    id=str(obj["id"]),
                    timestamp=parse_timestamp(str(obj["created_at"])),
                    text=str(obj["text"]),
                    like_count=int(obj["like_count"]),
                )
            except KeyError as exc:
                raise IngestError(f"{path}: line {lineno}: missing key {exc.args[0]!r}") from exc
            except (TypeError, ValueError) as exc:
                raise IngestError(f"{path}: line {lineno}: {exc}") from exc
            if tweet.like_count < 0:
                raise IngestError(f"{path}: line {lineno}: negative like_count")
            if not manifest.in_window(tweet.timestamp):
                continue
            if tweet.like_count >= manifest.like_threshold:
                tweets.append(tweet)
    tweets.sort(key=lambda t: t.timestamp)
    if not tweets:
        log.warning("%s: no tweets retained (threshold %d)", path, manifest.like_threshold)
    return tweets


def load_transactions(path, manifest: ProjectManifest | None = None) -> list[Transaction]:
    """Load a transaction CSV, validating values and rejecting duplicates.

    Values are parsed as exact decimals; negative values and duplicate
    (transaction_hash, token_id) pairs raise IngestError naming the row.
    The result is sorted ascending by timestamp.
    """
    txs: list[Transaction] = []
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [f for f in TRANSACTION_FIELDS if f not in header]
        if missing:
            raise IngestError(f"{path}: missing columns {missing}")
        for row in reader:
            rowno = reader.line_num
            try:
                value = Decimal(row["value_eth"].strip())
            except (InvalidOperation, AttributeError) as exc:
                raise IngestError(f"{path}: row {rowno}: bad value_eth {row.get('value_eth')!r}") from exc
            if value < 0:
                raise IngestError(f"{path}: row {rowno}: negative value_eth {value}")
            try:
                ts = parse_timestamp(row["block_timestamp"])
            except ValueError as exc:
                raise IngestError(f"{path}: row {rowno}: {exc}") from exc
            tx = Transaction(
                from_address=row["address_from"].strip(),
                to_address=row["address_to"].strip(),
                token_id=row["token_id"].strip(),
                tx_hash=row["transaction_hash"].strip(),
                value_eth=value,
                timestamp=ts,
            )
            key = (tx.tx_hash, tx.token_id)
            if key in seen:
                raise IngestError(f"{path}: row {rowno}: duplicate (transaction_hash, token_id) {key}")
            seen.add(key)
            if manifest is not None and not manifest.in_window(ts):
                continue
            txs.append(tx)
    txs.sort(key=lambda t: t.timestamp)
    return txs


def tweets_to_jsonl(tweets: list[Tweet]) -> str:
    """Canonical JSONL form, re-loadable by :func:`load_tweets`."""
    lines = []
    for t in tweets:
        lines.append(
            json.dumps(
                {
                    "id": t.id,
                    "created_at": t.timestamp.isoformat(),
                    "text": t.text,
                    "like_count": t.like_count,
                },
                sort_keys=True,
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def transactions_to_csv(transactions: list[Transaction]) -> str:
    """Canonical CSV form, re-loadable by :func:`load_transactions`."""
    lines = [",".join(TRANSACTION_FIELDS)]
    for t in transactions:
        lines.append(
            f"{t.from_address},{t.to_address},{t.token_id},{t.tx_hash},"
            f"{t.value_eth},{t.timestamp.isoformat()}"
        )
    return "\n".join(lines) + "\n"


def split_multi_nft_values(transactions: list[Transaction]) -> list[Transaction]:
    """Spread each transaction's total value equally over its token transfers.

    All records sharing a transaction hash are treated as one k-token
    exchange: each comes out carrying total/k, so value per hash is conserved.
    Input order is preserved.
    """
    totals: dict[str, Decimal] = {}
    counts: dict[str, int] = {}
    for tx in transactions:
        totals[tx.tx_hash] = totals.get(tx.tx_hash, Decimal(0)) + tx.value_eth
        counts[tx.tx_hash] = counts.get(tx.tx_hash, 0) + 1
    out = []
    for tx in transactions:
        k = counts[tx.tx_hash]
        if k == 1:
            out.append(tx)
        else:
            out.append(replace(tx, value_eth=totals[tx.tx_hash] / k))
    return out
