"""Text filtering ahead of clustering: URL removal, mention filtering, tokenization."""

import enum
import re
import unicodedata
from dataclasses import dataclass
from typing import Optional

from .errors import IoFailure
from .stream import Tweet

URL_RE = re.compile(r"https?://\S+")
TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

NORMALIZATION_FORMS = ("NFC", "NFD", "NFKC", "NFKD", "none")


@dataclass(frozen=True)
class TokenizerConfig:
    stopwords: frozenset = frozenset()
    normalization: str = "NFC"

    def __post_init__(self):
        if self.normalization not in NORMALIZATION_FORMS:
            raise ValueError(f"unknown normalization form '{self.normalization}'")
        # stopwords are matched against normalized tokens
        object.__setattr__(
            self,
            "stopwords",
            frozenset(normalize_token(w, self.normalization) for w in self.stopwords),
        )


def load_tokenizer_config(stopword_path: Optional[str], normalization: str = "NFC") -> TokenizerConfig:
    """Build a TokenizerConfig from a stopword file (one token per line, UTF-8)."""
    words: set[str] = set()
    if stopword_path:
        try:
            with open(stopword_path, encoding="utf-8") as fp:
                for line in fp:
                    word = line.strip()
                    if word:
                        words.add(word)
        except OSError as exc:
            raise IoFailure(f"cannot read stopword file '{stopword_path}': {exc}") from exc
    return TokenizerConfig(stopwords=frozenset(words), normalization=normalization)


def normalize_token(token: str, form: str = "NFC") -> str:
    if form != "none":
        token = unicodedata.normalize(form, token)
    return token.casefold()


class FilterReason(enum.Enum):
    KEPT = "kept"
    DROPPED_MENTION = "dropped_mention"


@dataclass(frozen=True)
class FilterDecision:
    kept: bool
    reason: FilterReason


@dataclass(frozen=True)
class PreprocessedTweet:
    tweet: Tweet
    clean_text: str
    tokens: tuple[str, ...]


def strip_urls(text: str) -> str:
    """Remove every http(s) URL (a scheme-anchored run up to whitespace/end).

    Whitespace around removals collapses to single spaces and the result is
    trimmed; text without URLs is returned unchanged, which also makes the
    function idempotent.
    """
    if not URL_RE.search(text):
        return text
    stripped = URL_RE.sub("", text)
    return re.sub(r"\s+", " ", stripped).strip()


def filter_mentions(tweet: Tweet) -> FilterDecision:
    """Drop tweets that mention other users; the decision depends only on the mentions field."""
    if tweet.mentions:
        return FilterDecision(kept=False, reason=FilterReason.DROPPED_MENTION)
    return FilterDecision(kept=True, reason=FilterReason.KEPT)


def tokenize(clean_text: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """Split URL-stripped text into normalized, case-folded tokens.

    Segmentation is on runs of Unicode letters/digits, so hashtag bodies
    tokenize like ordinary words. Configured stopwords are removed.
    """
    if config.normalization != "none":
        clean_text = unicodedata.normalize(config.normalization, clean_text)
    clean_text = clean_text.casefold()
    return [t for t in TOKEN_RE.findall(clean_text) if t not in config.stopwords]


def preprocess(tweet: Tweet, config: TokenizerConfig = TokenizerConfig()) -> PreprocessedTweet:
    """URL-strip and tokenize one tweet (mention filtering is the caller's step)."""
    clean = strip_urls(tweet.text)
    return PreprocessedTweet(tweet=tweet, clean_text=clean, tokens=tuple(tokenize(clean, config)))
