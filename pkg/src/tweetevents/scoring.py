"""Cluster-level event decisions and keyword summaries."""

import json
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .clustering import Cluster
from .errors import MissingWeights
from .weighting import FeatureWeights


@dataclass(frozen=True)
class ScoringConfig:
    score_threshold: float = 1.0
    keyword_count: int = 5

    def __post_init__(self):
        if self.score_threshold < 0.0:
            raise ValueError("score_threshold must be non-negative")
        if self.keyword_count < 1:
            raise ValueError("keyword_count must be positive")


@dataclass(frozen=True)
class EventReport:
    cluster_id: int
    score: float
    keywords: tuple  # ((token, count), ...) by descending count, ties lexicographic
    member_count: int
    start: int
    end: int

    def keyword_tokens(self) -> set[str]:
        return {token for token, _ in self.keywords}

    def to_record(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "score": self.score,
            "keywords": [{"token": t, "count": c} for t, c in self.keywords],
            "member_count": self.member_count,
            "start": self.start,
            "end": self.end,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False, separators=(",", ":"))


def cluster_score(cluster: Cluster, weights: Optional[FeatureWeights]) -> float:
    """Sum over members of weighted normalized followers/retweets plus the
    member's cached location-correlation score."""
    if weights is None:
        raise MissingWeights("cluster scoring requires trained feature weights")
    total = 0.0
    for member in cluster.members:
        tweet = member.pt.tweet
        total += (
            weights.w_followers * weights.normalized_followers(tweet.followers_count)
            + weights.w_retweets * weights.normalized_retweets(tweet.retweets_count)
            + member.loc_score
        )
    return total


def is_event(cluster: Cluster, weights: Optional[FeatureWeights], config: ScoringConfig) -> bool:
    """A cluster is an event when its score strictly exceeds the threshold."""
    return cluster_score(cluster, weights) > config.score_threshold


def extract_keywords(cluster: Cluster, k: int) -> list[tuple[str, int]]:
    """Top-k most frequent tokens over all member tweets; ties break lexicographically."""
    counts = Counter()
    for member in cluster.members:
        counts.update(member.pt.tokens)
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:k]


def make_report(cluster: Cluster, score: float, config: ScoringConfig) -> EventReport:
    return EventReport(
        cluster_id=cluster.id,
        score=score,
        keywords=tuple(extract_keywords(cluster, config.keyword_count)),
        member_count=len(cluster.members),
        start=cluster.first_arrival,
        end=cluster.last_arrival,
    )
