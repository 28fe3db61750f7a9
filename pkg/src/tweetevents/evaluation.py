"""Evaluation harness: ground-truth matching, precision, mode comparison, sweeps."""

import dataclasses
import json
import time
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence

from .errors import IoFailure, NoDetections
from .geo import Gazetteer
from .pipeline import PipelineConfig, PipelineCounters, run_stream
from .scoring import EventReport
from .stream import Tweet
from .weighting import FeatureWeights


@dataclass(frozen=True)
class TruthEvent:
    event_id: str
    keywords: frozenset
    description: str = ""

    def __post_init__(self):
        if not self.keywords:
            raise ValueError(f"truth event '{self.event_id}' has an empty keyword set")
        object.__setattr__(self, "keywords", frozenset(k.casefold() for k in self.keywords))


@dataclass
class GroundTruth:
    events: list = field(default_factory=list)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            for event in self.events:
                fp.write(
                    json.dumps(
                        {
                            "event_id": event.event_id,
                            "keywords": sorted(event.keywords),
                            "description": event.description,
                        },
                        ensure_ascii=False,
                        separators=(",", ":"),
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, path: str) -> "GroundTruth":
        events = []
        try:
            fp = open(path, encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot open ground truth '{path}': {exc}") from exc
        with fp:
            for line_no, line in enumerate(fp, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    events.append(
                        TruthEvent(
                            event_id=str(record["event_id"]),
                            keywords=frozenset(record["keywords"]),
                            description=record.get("description", ""),
                        )
                    )
                except (ValueError, KeyError, TypeError) as exc:
                    raise IoFailure(f"ground truth '{path}' line {line_no}: {exc}") from exc
        return cls(events=events)


def match_event(report: EventReport, truth: GroundTruth) -> Optional[str]:
    """The truth event sharing the most keywords with the report, if any.

    At least one shared token is required; ties go to the first-listed
    truth event.
    """
    report_tokens = {t.casefold() for t in report.keyword_tokens()}
    best_id, best_overlap = None, 0
    for event in truth.events:
        overlap = len(report_tokens & event.keywords)
        if overlap > best_overlap:
            best_id, best_overlap = event.event_id, overlap
    return best_id


def precision(tp: int, fp: int) -> float:
    """TP / (TP + FP); raising NoDetections rather than faking a 0 when empty."""
    if tp < 0 or fp < 0:
        raise ValueError("tp and fp must be non-negative")
    if tp + fp == 0:
        raise NoDetections("precision is undefined without detections")
    return tp / (tp + fp)


@dataclass
class EvalRun:
    """One full pipeline run with its matching outcome and counters."""

    mode: str
    distance_threshold: float
    score_threshold: float
    reports: list
    matches: list  # (EventReport, event_id | None)
    tp: int
    fp: int
    precision: Optional[float]  # None when nothing was detected
    recall: Optional[float]  # beyond the reference methodology: vs planted truth
    runtime_ms: int
    counters: PipelineCounters
    config: dict

    @property
    def detected(self) -> int:
        return self.tp + self.fp

    def matched_event_ids(self) -> set:
        return {event_id for _, event_id in self.matches if event_id is not None}


def _config_snapshot(config: PipelineConfig) -> dict:
    return {
        "mode": config.mode,
        "cluster": dataclasses.asdict(config.cluster),
        "scoring": dataclasses.asdict(config.scoring),
        "location": dataclasses.asdict(config.location),
        "tokenizer": {
            "stopwords": sorted(config.tokenizer.stopwords),
            "normalization": config.tokenizer.normalization,
        },
    }


def run_pipeline(
    tweets: Sequence[Tweet],
    config: PipelineConfig,
    gazetteer: Optional[Gazetteer] = None,
    weights: Optional[FeatureWeights] = None,
    truth: Optional[GroundTruth] = None,
) -> EvalRun:
    """Run one mode over the stream, match reports against truth, time it."""
    started = time.perf_counter()
    result = run_stream(tweets, config, gazetteer=gazetteer, weights=weights)
    runtime_ms = int((time.perf_counter() - started) * 1000)

    matches = []
    tp = fp = 0
    recall: Optional[float] = None
    if truth is not None:
        for report in result.reports:
            event_id = match_event(report, truth)
            matches.append((report, event_id))
            if event_id is None:
                fp += 1
            else:
                tp += 1
        matched = {event_id for _, event_id in matches if event_id is not None}
        recall = len(matched) / len(truth.events) if truth.events else None

    return EvalRun(
        mode=config.mode,
        distance_threshold=config.cluster.distance_threshold,
        score_threshold=config.scoring.score_threshold,
        reports=result.reports,
        matches=matches,
        tp=tp,
        fp=fp,
        precision=(tp / (tp + fp)) if tp + fp else None,
        recall=recall,
        runtime_ms=runtime_ms,
        counters=result.counters,
        config=_config_snapshot(config),
    )


def sweep_thresholds(
    tweets: Sequence[Tweet],
    truth: GroundTruth,
    config: PipelineConfig,
    distance_grid: Iterable[float],
    score_grid: Iterable[float],
    gazetteer: Optional[Gazetteer] = None,
    weights: Optional[FeatureWeights] = None,
) -> list[EvalRun]:
    """One full run per (distance_threshold, score_threshold) grid point.

    Rows come back in grid order: distance outer, score inner.
    """
    distance_grid = list(distance_grid)
    score_grid = list(score_grid)
    if not distance_grid or not score_grid:
        raise ValueError("threshold grid must be non-empty")
    runs = []
    for d_t in distance_grid:
        for s_t in score_grid:
            point = dataclasses.replace(
                config,
                cluster=dataclasses.replace(config.cluster, distance_threshold=d_t),
                scoring=dataclasses.replace(config.scoring, score_threshold=s_t),
            )
            runs.append(run_pipeline(tweets, point, gazetteer, weights, truth))
    return runs


def best_run(runs: Sequence[EvalRun]) -> EvalRun:
    """The swept-best run: detect as many planted events as possible, then
    maximize precision; earlier grid rows win ties."""
    if not runs:
        raise ValueError("no runs to choose from")
    def key(run: EvalRun):
        return (
            run.recall if run.recall is not None else -1.0,
            run.precision if run.precision is not None else -1.0,
        )
    best = runs[0]
    for run in runs[1:]:
        if key(run) > key(best):
            best = run
    return best


TSV_HEADER = "mode\tD_t\tscore_t\ttp\tfp\tprecision\truntime_ms\tcompression_calls"


def tsv_row(run: EvalRun) -> str:
    prec = "NA" if run.precision is None else f"{run.precision:.6f}"
    return (
        f"{run.mode}\t{run.distance_threshold:g}\t{run.score_threshold:g}\t"
        f"{run.tp}\t{run.fp}\t{prec}\t{run.runtime_ms}\t{run.counters.compression_calls}"
    )


def write_tsv(runs: Iterable[EvalRun], fp: IO[str]) -> None:
    fp.write(TSV_HEADER + "\n")
    for run in runs:
        fp.write(tsv_row(run) + "\n")


def format_report(runs: Sequence[EvalRun]) -> str:
    """Human-readable comparison of the swept runs."""
    lines = []
    for run in runs:
        c = run.counters
        prec = "undefined (no detections)" if run.precision is None else f"{run.precision:.4f}"
        rec = "n/a" if run.recall is None else f"{run.recall:.4f}"
        stats = c.location_channel_stats()
        lines.append(
            f"mode={run.mode} D_t={run.distance_threshold:g} score_t={run.score_threshold:g}\n"
            f"  detections: {run.detected} (tp={run.tp} fp={run.fp})"
            f" precision={prec} recall={rec} (recall is extra, vs planted truth)\n"
            f"  counters: ingested={c.ingested} dropped_mentions={c.dropped_mentions}"
            f" ({100 * c.mention_ratio():.1f}%) dropped_empty={c.dropped_empty}"
            f" clusters={c.clusters_created} deactivated={c.clusters_deactivated}"
            f" compression_calls={c.compression_calls}\n"
            f"  location channels: text-only={stats['text']:.2f}%"
            f" hashtag-only={stats['hashtag']:.2f}% both={stats['both']:.2f}%\n"
            f"  runtime_ms={run.runtime_ms}"
        )
    return "\n".join(lines)
