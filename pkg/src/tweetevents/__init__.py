"""Streaming event detection for short social-text streams.

A single-pass pipeline: ingest ordered records, filter noise, score the
author-location correlation, cluster by compression distance with a
Poisson activity model, then declare events from weighted cluster scores.
"""

from .clustering import ClusterConfig, ClusterEngine, compressed_size, ncd
from .errors import (
    DegenerateSample,
    EmptyDocument,
    InvalidBounds,
    IoFailure,
    MalformedGazetteerRow,
    MalformedRecord,
    MissingWeights,
    NoDetections,
    OrderViolation,
    SchemaViolation,
    SpecViolation,
    TweetEventsError,
)
from .evaluation import (
    EvalRun,
    GroundTruth,
    TruthEvent,
    best_run,
    match_event,
    precision,
    run_pipeline,
    sweep_thresholds,
)
from .geo import (
    Gazetteer,
    LocScoringConfig,
    LocationHierarchy,
    LocationHit,
    extract_text_locations,
    load_gazetteer,
    loc_correlate_score,
    resolve_profile_location,
)
from .pipeline import MODE_BASE, MODE_SUGGESTED, PipelineConfig, PipelineResult, run_stream
from .preprocess import (
    FilterDecision,
    FilterReason,
    PreprocessedTweet,
    TokenizerConfig,
    filter_mentions,
    load_tokenizer_config,
    preprocess,
    strip_urls,
    tokenize,
)
from .scoring import EventReport, ScoringConfig, cluster_score, extract_keywords, is_event
from .stream import StreamBatch, Tweet, parse_tweet, read_stream, serialize_tweet, write_stream
from .synth import GeneratorSpec, PlantedEvent, generate
from .weighting import (
    Feature,
    FeatureWeights,
    LabeledSample,
    information_gain,
    learn_weights,
    min_max_normalize,
)

__version__ = "0.1.0"
