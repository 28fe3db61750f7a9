"""End-to-end stream processing: ingest order in, event reports out.

Two modes share the clustering core. The suggested mode runs the full
chain (URL stripping, mention filtering, location scoring, weighted
cluster scoring); the base mode skips the filters and declares events by
member count alone, which is the comparison baseline.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .clustering import Cluster, ClusterConfig, ClusterEngine
from .errors import MissingWeights
from .geo import (
    CHANNEL_BOTH,
    CHANNEL_HASHTAG,
    CHANNEL_TEXT,
    Gazetteer,
    LocScoringConfig,
    extract_text_locations,
    loc_correlate_score,
    resolve_profile_location,
)
from .preprocess import PreprocessedTweet, TokenizerConfig, filter_mentions, preprocess, tokenize
from .scoring import EventReport, ScoringConfig, cluster_score, make_report
from .stream import Tweet
from .weighting import FeatureWeights

MODE_BASE = "base"
MODE_SUGGESTED = "suggested"


@dataclass(frozen=True)
class PipelineConfig:
    mode: str = MODE_SUGGESTED
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    location: LocScoringConfig = field(default_factory=LocScoringConfig)
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)

    def __post_init__(self):
        if self.mode not in (MODE_BASE, MODE_SUGGESTED):
            raise ValueError(f"unknown mode '{self.mode}'")


@dataclass
class PipelineCounters:
    ingested: int = 0
    dropped_mentions: int = 0
    dropped_empty: int = 0
    clusters_created: int = 0
    clusters_deactivated: int = 0
    clusters_scored: int = 0
    events_detected: int = 0
    compression_calls: int = 0
    loc_hits_text: int = 0
    loc_hits_hashtag: int = 0
    loc_hits_both: int = 0

    def mention_ratio(self) -> float:
        """Share of ingested tweets dropped for containing mentions."""
        return self.dropped_mentions / self.ingested if self.ingested else 0.0

    def location_channel_stats(self) -> dict[str, float]:
        """Percentage of location hits seen only in text, only in hashtags, or in both."""
        total = self.loc_hits_text + self.loc_hits_hashtag + self.loc_hits_both
        if total == 0:
            return {CHANNEL_TEXT: 0.0, CHANNEL_HASHTAG: 0.0, CHANNEL_BOTH: 0.0}
        return {
            CHANNEL_TEXT: 100.0 * self.loc_hits_text / total,
            CHANNEL_HASHTAG: 100.0 * self.loc_hits_hashtag / total,
            CHANNEL_BOTH: 100.0 * self.loc_hits_both / total,
        }

    def as_dict(self) -> dict[str, int]:
        return {
            "ingested": self.ingested,
            "dropped_mentions": self.dropped_mentions,
            "dropped_empty": self.dropped_empty,
            "clusters_created": self.clusters_created,
            "clusters_deactivated": self.clusters_deactivated,
            "clusters_scored": self.clusters_scored,
            "events_detected": self.events_detected,
            "compression_calls": self.compression_calls,
            "loc_hits_text": self.loc_hits_text,
            "loc_hits_hashtag": self.loc_hits_hashtag,
            "loc_hits_both": self.loc_hits_both,
        }


@dataclass
class PipelineResult:
    reports: list[EventReport]
    counters: PipelineCounters
    engine: ClusterEngine


def run_stream(
    tweets: Iterable[Tweet],
    config: PipelineConfig = PipelineConfig(),
    gazetteer: Optional[Gazetteer] = None,
    weights: Optional[FeatureWeights] = None,
) -> PipelineResult:
    """Process a timestamp-ordered tweet sequence and emit event reports.

    Every cluster is scored exactly once: when the activity model retires
    it, or at end of stream for clusters still active. The suggested mode
    needs a gazetteer and trained weights.
    """
    suggested = config.mode == MODE_SUGGESTED
    if suggested and weights is None:
        raise MissingWeights("suggested mode requires trained feature weights")
    if suggested and gazetteer is None:
        raise ValueError("suggested mode requires a gazetteer")

    engine = ClusterEngine(config.cluster)
    counters = PipelineCounters()
    reports: list[EventReport] = []

    def score_and_report(cluster: Cluster) -> None:
        counters.clusters_scored += 1
        if suggested:
            score = cluster_score(cluster, weights)
        else:
            score = float(len(cluster.members))
        if score > config.scoring.score_threshold:
            counters.events_detected += 1
            reports.append(make_report(cluster, score, config.scoring))

    for tweet in tweets:
        counters.ingested += 1

        if suggested:
            if not filter_mentions(tweet).kept:
                counters.dropped_mentions += 1
                continue
            pt = preprocess(tweet, config.tokenizer)
        else:
            # base mode: URLs stay in the text, mentions are processed
            pt = preprocess_base(tweet, config.tokenizer)

        if not pt.clean_text.strip():
            counters.dropped_empty += 1
            continue

        loc_score = 0.0
        if suggested:
            hits = extract_text_locations(pt.tokens, tweet.hashtags, gazetteer)
            for hit in hits:
                if hit.channel == CHANNEL_TEXT:
                    counters.loc_hits_text += 1
                elif hit.channel == CHANNEL_HASHTAG:
                    counters.loc_hits_hashtag += 1
                else:
                    counters.loc_hits_both += 1
            user = resolve_profile_location(tweet.profile_location, gazetteer)
            loc_score = loc_correlate_score(user, [h.hierarchy for h in hits], config.location)

        for cid in engine.update_activity(tweet.timestamp):
            score_and_report(engine.clusters[cid])
        engine.assign(pt, loc_score)

    for cid in engine.flush():
        score_and_report(engine.clusters[cid])

    counters.clusters_created = engine.clusters_created
    counters.clusters_deactivated = engine.clusters_deactivated
    counters.compression_calls = engine.compression_calls
    return PipelineResult(reports=reports, counters=counters, engine=engine)


def preprocess_base(tweet: Tweet, tokenizer: TokenizerConfig) -> PreprocessedTweet:
    """Base-mode preprocessing: tokenize only, keep URLs in the clustered text."""
    return PreprocessedTweet(
        tweet=tweet, clean_text=tweet.text, tokens=tuple(tokenize(tweet.text, tokenizer))
    )
