"""Canonical record types and line-delimited stream ingestion.

A stream is a UTF-8 file with one JSON record per line, ordered by
timestamp. Records mirror the fields of :class:`Tweet`; unknown extra
fields are ignored for forward compatibility.
"""

import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional

from .errors import IoFailure, MalformedRecord, OrderViolation, SchemaViolation

HASHTAG_RE = re.compile(r"#(\w+)", re.UNICODE)
MENTION_RE = re.compile(r"@(\w+)", re.UNICODE)
URL_RE = re.compile(r"https?://\S+")

_REQUIRED = ("id", "timestamp", "text", "author_id", "followers_count", "retweets_count")


@dataclass(frozen=True)
class Tweet:
    """One ingested social-text record. Immutable after construction."""

    id: str
    timestamp: int
    text: str
    author_id: str
    followers_count: int
    retweets_count: int
    profile_location: Optional[str] = None
    hashtags: tuple[str, ...] = ()
    mentions: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()
    label: Optional[bool] = None


@dataclass
class StreamBatch:
    """All valid tweets of one stream file, in file order."""

    tweets: list[Tweet] = field(default_factory=list)
    source_path: str = ""
    rejected: int = 0


def _dedup(items: Iterable[str]) -> tuple[str, ...]:
    seen = set()
    out = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return tuple(out)


def scan_hashtags(text: str) -> tuple[str, ...]:
    """Hashtag bodies found in text, first-occurrence order, deduplicated."""
    return _dedup(HASHTAG_RE.findall(text))


def scan_mentions(text: str) -> tuple[str, ...]:
    """Mention handles found in text, first-occurrence order, deduplicated."""
    return _dedup(MENTION_RE.findall(text))


def scan_urls(text: str) -> tuple[str, ...]:
    """http(s) URLs found in text, first-occurrence order, deduplicated."""
    return _dedup(URL_RE.findall(text))


def _require_str(record: dict, key: str) -> str:
    value = record[key]
    if not isinstance(value, str):
        raise SchemaViolation(f"field '{key}' must be a string")
    return value


def _require_int(record: dict, key: str, nonneg: bool = False) -> int:
    value = record[key]
    # bool is an int subclass; a boolean counter is still a schema error
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaViolation(f"field '{key}' must be an integer")
    if nonneg and value < 0:
        raise SchemaViolation(f"field '{key}' must be non-negative")
    return value


def _optional_str_list(record: dict, key: str, sigil: str = "") -> Optional[tuple[str, ...]]:
    if key not in record or record[key] is None:
        return None
    value = record[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaViolation(f"field '{key}' must be a list of strings")
    if sigil:
        value = [v.lstrip(sigil) for v in value]
    return tuple(value)


def parse_tweet(line: "bytes | str") -> Tweet:
    """Parse one stream line into a Tweet.

    Hashtags/mentions/urls are taken from the record when the field is
    present (sigils stripped), otherwise extracted from the text by
    pattern scan.

    Raises MalformedRecord for unparseable input and SchemaViolation for
    records that break the Tweet invariants.
    """
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecord(f"not valid UTF-8: {exc}") from exc
    try:
        record = json.loads(line)
    except ValueError as exc:
        raise MalformedRecord(f"not valid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise MalformedRecord("record is not a JSON object")

    missing = [k for k in _REQUIRED if k not in record]
    if missing:
        raise SchemaViolation(f"missing required field(s): {', '.join(missing)}")

    tweet_id = _require_str(record, "id")
    if not tweet_id:
        raise SchemaViolation("field 'id' must be non-empty")
    text = _require_str(record, "text")

    profile_location = None
    if record.get("profile_location") is not None:
        profile_location = _require_str(record, "profile_location")

    label = record.get("label")
    if label is not None and not isinstance(label, bool):
        raise SchemaViolation("field 'label' must be a boolean")

    hashtags = _optional_str_list(record, "hashtags", sigil="#")
    mentions = _optional_str_list(record, "mentions", sigil="@")
    urls = _optional_str_list(record, "urls")

    return Tweet(
        id=tweet_id,
        timestamp=_require_int(record, "timestamp"),
        text=text,
        author_id=_require_str(record, "author_id"),
        followers_count=_require_int(record, "followers_count", nonneg=True),
        retweets_count=_require_int(record, "retweets_count", nonneg=True),
        profile_location=profile_location,
        hashtags=scan_hashtags(text) if hashtags is None else _dedup(hashtags),
        mentions=scan_mentions(text) if mentions is None else _dedup(mentions),
        urls=scan_urls(text) if urls is None else _dedup(urls),
        label=label,
    )


def serialize_tweet(tweet: Tweet) -> str:
    """One-line JSON for a Tweet; parse_tweet(serialize_tweet(t)) == t."""
    record = {
        "id": tweet.id,
        "timestamp": tweet.timestamp,
        "text": tweet.text,
        "author_id": tweet.author_id,
        "followers_count": tweet.followers_count,
        "retweets_count": tweet.retweets_count,
        # always emitted so re-parsing never falls back to pattern scan
        "hashtags": list(tweet.hashtags),
        "mentions": list(tweet.mentions),
        "urls": list(tweet.urls),
    }
    if tweet.profile_location is not None:
        record["profile_location"] = tweet.profile_location
    if tweet.label is not None:
        record["label"] = tweet.label
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def write_stream(batch: StreamBatch, path: str) -> None:
    """Write a batch back to the line-delimited record format."""
    with open(path, "w", encoding="utf-8") as fp:
        for tweet in batch.tweets:
            fp.write(serialize_tweet(tweet) + "\n")


def read_stream(path: str, order_slack: int = 0, diagnostics: Optional[IO[str]] = None) -> StreamBatch:
    """Read all valid records of a stream file, in file order.

    Invalid lines are rejected and counted; one `line_no<TAB>error_kind`
    line per rejection goes to `diagnostics` when given. Timestamps must
    never decrease by more than `order_slack` (default 0: strict
    nondecreasing), else OrderViolation. Duplicate ids within the stream
    are schema violations and rejected.
    """
    batch = StreamBatch(source_path=path)
    seen_ids: set[str] = set()
    prev_ts: Optional[int] = None
    try:
        fp = open(path, "rb")
    except OSError as exc:
        raise IoFailure(f"cannot open stream '{path}': {exc}") from exc
    with fp:
        for line_no, raw in enumerate(fp, start=1):
            raw = raw.rstrip(b"\r\n")
            if not raw:
                continue
            try:
                tweet = parse_tweet(raw)
                if tweet.id in seen_ids:
                    raise SchemaViolation(f"duplicate id '{tweet.id}'")
            except (MalformedRecord, SchemaViolation) as exc:
                batch.rejected += 1
                if diagnostics is not None:
                    diagnostics.write(f"{line_no}\t{type(exc).__name__}\n")
                continue
            if prev_ts is not None and prev_ts - tweet.timestamp > order_slack:
                raise OrderViolation(
                    f"line {line_no}: timestamp {tweet.timestamp} after {prev_ts} "
                    f"(allowed slack {order_slack})"
                )
            prev_ts = max(prev_ts, tweet.timestamp) if prev_ts is not None else tweet.timestamp
            seen_ids.add(tweet.id)
            batch.tweets.append(tweet)
    return batch
