"""Information-gain feature weighting and min-max normalization.

The relative weights of the followers and retweets counters come from
their information gain against an event/non-event label, computed over
equal-frequency bins; the learned weights and the sample's value bounds
travel together in a FeatureWeights file.
"""

import enum
import json
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateSample, InvalidBounds, IoFailure, SchemaViolation
from .stream import Tweet

logger = logging.getLogger(__name__)

DEFAULT_BINS = 10


class Feature(enum.Enum):
    FOLLOWERS = "followers"
    RETWEETS = "retweets"


@dataclass(frozen=True)
class LabeledSample:
    """Rows of (followers_count, retweets_count, event-label)."""

    rows: tuple

    def __post_init__(self):
        if not self.rows:
            raise ValueError("labeled sample must be non-empty")
        object.__setattr__(self, "rows", tuple((int(f), int(r), bool(l)) for f, r, l in self.rows))

    @classmethod
    def from_tweets(cls, tweets: Iterable[Tweet]) -> "LabeledSample":
        rows = []
        for tweet in tweets:
            if tweet.label is None:
                raise SchemaViolation(f"tweet '{tweet.id}' has no label; training data requires one")
            rows.append((tweet.followers_count, tweet.retweets_count, tweet.label))
        return cls(rows=tuple(rows))

    def feature_values(self, feature: Feature) -> np.ndarray:
        idx = 0 if feature is Feature.FOLLOWERS else 1
        return np.array([row[idx] for row in self.rows], dtype=np.int64)

    def labels(self) -> np.ndarray:
        return np.array([row[2] for row in self.rows], dtype=bool)


@dataclass(frozen=True)
class FeatureWeights:
    w_followers: float
    w_retweets: float
    followers_min: int
    followers_max: int
    retweets_min: int
    retweets_max: int
    bins: int = DEFAULT_BINS
    training_rows: int = 0

    def __post_init__(self):
        if self.followers_min > self.followers_max or self.retweets_min > self.retweets_max:
            raise InvalidBounds("normalization bounds require min <= max")

    def normalized_followers(self, value: int) -> float:
        return min_max_normalize(value, self.followers_min, self.followers_max)

    def normalized_retweets(self, value: int) -> float:
        return min_max_normalize(value, self.retweets_min, self.retweets_max)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            json.dump(
                {
                    "w_followers": self.w_followers,
                    "w_retweets": self.w_retweets,
                    "followers_min": self.followers_min,
                    "followers_max": self.followers_max,
                    "retweets_min": self.retweets_min,
                    "retweets_max": self.retweets_max,
                    "bins": self.bins,
                    "training_rows": self.training_rows,
                },
                fp,
                indent=2,
            )
            fp.write("\n")

    @classmethod
    def load(cls, path: str) -> "FeatureWeights":
        try:
            with open(path, encoding="utf-8") as fp:
                record = json.load(fp)
        except OSError as exc:
            raise IoFailure(f"cannot read weights file '{path}': {exc}") from exc
        except ValueError as exc:
            raise IoFailure(f"weights file '{path}' is not valid JSON: {exc}") from exc
        try:
            return cls(**record)
        except TypeError as exc:
            raise IoFailure(f"weights file '{path}' has wrong fields: {exc}") from exc


def equal_frequency_bins(values: Sequence[int], bins: int) -> np.ndarray:
    """Assign each value a bin id, targeting equal-population bins.

    Runs of identical values are never split across bins, so the partition
    depends only on the ordering of values.
    """
    if bins < 1:
        raise ValueError("bins must be positive")
    values = np.asarray(values)
    n = len(values)
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]

    cuts = []
    for i in range(1, bins):
        cut = round(i * n / bins)
        while 0 < cut < n and sorted_values[cut] == sorted_values[cut - 1]:
            cut += 1
        if 0 < cut < n and (not cuts or cut > cuts[-1]):
            cuts.append(cut)

    bin_ids = np.zeros(n, dtype=np.int64)
    start = 0
    for b, cut in enumerate(cuts + [n]):
        bin_ids[order[start:cut]] = b
        start = cut
    return bin_ids


def _entropy_bits(labels: np.ndarray) -> float:
    if len(labels) == 0:
        return 0.0
    p = np.count_nonzero(labels) / len(labels)
    h = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            h -= q * np.log2(q)
    return h


def information_gain(sample: LabeledSample, feature: Feature, bins: int = DEFAULT_BINS) -> float:
    """Reduction of label entropy (bits) from conditioning on the binned feature.

    Raises DegenerateSample when only one label class is present (the
    label entropy is zero and the gain undefined).
    """
    labels = sample.labels()
    if labels.all() or not labels.any():
        raise DegenerateSample("sample contains a single label class")
    values = sample.feature_values(feature)
    bin_ids = equal_frequency_bins(values, bins)

    total = _entropy_bits(labels)
    conditional = 0.0
    for b in np.unique(bin_ids):
        mask = bin_ids == b
        conditional += (np.count_nonzero(mask) / len(labels)) * _entropy_bits(labels[mask])
    # clip the tiny negative residue floating-point subtraction can leave
    return max(0.0, total - conditional)


def normalize_gains(gain_followers: float, gain_retweets: float) -> tuple[float, float]:
    """Turn two gains into weights summing to 1; an all-zero pair splits evenly."""
    total = gain_followers + gain_retweets
    if total == 0.0:
        logger.warning("both information gains are zero; defaulting to equal weights")
        return 0.5, 0.5
    return gain_followers / total, gain_retweets / total


def learn_weights(sample: LabeledSample, bins: int = DEFAULT_BINS) -> FeatureWeights:
    """Learn follower/retweet weights and normalization bounds from a labeled sample."""
    gain_f = information_gain(sample, Feature.FOLLOWERS, bins)
    gain_r = information_gain(sample, Feature.RETWEETS, bins)
    w_f, w_r = normalize_gains(gain_f, gain_r)
    followers = sample.feature_values(Feature.FOLLOWERS)
    retweets = sample.feature_values(Feature.RETWEETS)
    return FeatureWeights(
        w_followers=w_f,
        w_retweets=w_r,
        followers_min=int(followers.min()),
        followers_max=int(followers.max()),
        retweets_min=int(retweets.min()),
        retweets_max=int(retweets.max()),
        bins=bins,
        training_rows=len(sample.rows),
    )


def min_max_normalize(value: float, lo: float, hi: float) -> float:
    """Map value into [0,1] over [lo,hi], clamping outliers; degenerate ranges map to 0."""
    if lo > hi:
        raise InvalidBounds(f"min {lo} exceeds max {hi}")
    if hi == lo:
        return 0.0
    return min(1.0, max(0.0, (value - lo) / (hi - lo)))
