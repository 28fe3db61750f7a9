"""Command-line front end: detect, train-weights, eval, generate."""

import argparse
import json
import sys
from typing import Optional

from . import pipeline, synth
from .clustering import ClusterConfig
from .errors import IoFailure, TweetEventsError
from .evaluation import GroundTruth, best_run, format_report, sweep_thresholds, write_tsv
from .geo import LocScoringConfig, load_gazetteer
from .preprocess import load_tokenizer_config
from .scoring import ScoringConfig
from .stream import read_stream, write_stream
from .weighting import DEFAULT_BINS, FeatureWeights, LabeledSample, learn_weights

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 (argparse's default would be 2, which we reserve
    # for data errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _DataError(Exception):
    """A typed pipeline error, already tagged with the stage that raised it."""

    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {type(exc).__name__}: {exc}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--stream", help="input stream file (one JSON record per line)")
    parser.add_argument("--mode", choices=("base", "suggested"), help="pipeline variant to run")
    parser.add_argument("--gazetteer", help="gazetteer TSV (needed in suggested mode)")
    parser.add_argument("--weights", help="trained feature-weights file (needed in suggested mode)")
    parser.add_argument("--stopwords", help="stopword list, one token per line")
    parser.add_argument("--normalization", choices=("NFC", "NFD", "NFKC", "NFKD", "none"),
                        help="Unicode normalization applied before tokenizing (default NFC)")
    parser.add_argument("--order-slack", type=int, help="tolerated timestamp decrease in seconds (default 0)")
    parser.add_argument("--distance-threshold", type=float, help="max compression distance to join a cluster")
    parser.add_argument("--compare-window", type=int, help="recent members compared per cluster")
    parser.add_argument("--inactivity-probability", type=float,
                        help="no-arrival probability below which a cluster goes inactive")
    parser.add_argument("--grace-window", type=int, help="seconds a single-tweet cluster stays active")
    parser.add_argument("--compressor-level", type=int, help="DEFLATE level used for distances")
    parser.add_argument("--score-threshold", type=float,
                        help="cluster score (member count in base mode) above which an event is declared")
    parser.add_argument("--keyword-count", type=int, help="keywords per event report")
    parser.add_argument("--alphas", help="four comma-separated location level weights, coarse to fine")


def build_parser() -> _Parser:
    parser = _Parser(prog="tweetevents", description="Event detection over short social-text streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", parents=[], help="run the detection pipeline over a stream")
    _add_common_flags(detect)
    detect.add_argument("--out", help="event reports output file (JSON lines)")
    detect.add_argument("--clusters-out", help="optional cluster snapshot output file")

    ev = sub.add_parser("eval", help="compare modes against ground truth, optionally over a threshold grid")
    _add_common_flags(ev)
    ev.add_argument("--truth", help="ground-truth events file (JSON lines)")
    ev.add_argument("--modes", choices=("base", "suggested", "both"), help="which modes to evaluate (default both)")
    ev.add_argument("--dt-grid", help="comma-separated distance thresholds to sweep")
    ev.add_argument("--score-grid", help="comma-separated score thresholds to sweep")
    ev.add_argument("--tsv-out", help="write one TSV row per run to this file")
    ev.add_argument("--report-out", help="write the text report here instead of stdout")

    train = sub.add_parser("train-weights", help="learn feature weights from a labeled stream")
    train.add_argument("--config", help="JSON config file; flags override its values")
    train.add_argument("--labeled", help="labeled stream file (label field required)")
    train.add_argument("--bins", type=int, help=f"equal-frequency bins for the gain estimate (default {DEFAULT_BINS})")
    train.add_argument("--out", help="weights output file")

    gen = sub.add_parser("generate", help="produce a synthetic stream with planted events")
    gen.add_argument("--config", help="JSON config file; flags override its values")
    gen.add_argument("--spec", help="generator spec file (JSON)")
    gen.add_argument("--out", help="stream output file")
    gen.add_argument("--truth-out", help="ground-truth output file (default: <out>.truth)")

    return parser


def _load_config_file(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fp:
            config = json.load(fp)
    except OSError as exc:
        raise _DataError("cli", IoFailure(f"cannot read config '{path}': {exc}"))
    except ValueError as exc:
        raise _DataError("cli", IoFailure(f"config '{path}' is not valid JSON: {exc}"))
    if not isinstance(config, dict):
        raise _DataError("cli", IoFailure(f"config '{path}' must be a JSON object"))
    return config


class _Settings:
    """Flag value if given, else config-file value, else default."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self.args = vars(args)
        self.config = config

    def get(self, key: str, default=None):
        flag = self.args.get(key)
        if flag is not None:
            return flag
        if key in self.config:
            return self.config[key]
        return default

    def require(self, key: str, flag_name: str):
        value = self.get(key)
        if value is None:
            raise _UsageError(f"missing required option --{flag_name}")
        return value


class _UsageError(Exception):
    pass


def _parse_alphas(raw) -> LocScoringConfig:
    if raw is None:
        return LocScoringConfig()
    if isinstance(raw, (list, tuple)):
        parts = [float(v) for v in raw]
    else:
        parts = [float(v) for v in str(raw).split(",")]
    if len(parts) != 4:
        raise _UsageError("--alphas needs exactly four comma-separated values")
    return LocScoringConfig(*parts)


def _parse_grid(raw, fallback: float) -> list[float]:
    if raw is None:
        return [fallback]
    if isinstance(raw, (list, tuple)):
        return [float(v) for v in raw]
    values = [float(v) for v in str(raw).split(",") if v.strip()]
    if not values:
        raise _UsageError("an empty threshold grid makes no sense")
    return values


def _pipeline_config(settings: _Settings, mode: str) -> pipeline.PipelineConfig:
    try:
        cluster = ClusterConfig(
            distance_threshold=float(settings.get("distance_threshold", 0.5)),
            compare_window=int(settings.get("compare_window", 10)),
            inactivity_probability=float(settings.get("inactivity_probability", 0.01)),
            compressor_level=int(settings.get("compressor_level", 6)),
            grace_window=int(settings.get("grace_window", 3600)),
        )
        scoring = ScoringConfig(
            score_threshold=float(settings.get("score_threshold", 1.0)),
            keyword_count=int(settings.get("keyword_count", 5)),
        )
        tokenizer = load_tokenizer_config(
            settings.get("stopwords"), settings.get("normalization", "NFC")
        )
        location = _parse_alphas(settings.get("alphas"))
        return pipeline.PipelineConfig(
            mode=mode, cluster=cluster, scoring=scoring, location=location, tokenizer=tokenizer
        )
    except IoFailure as exc:
        raise _DataError("preprocess", exc)
    except ValueError as exc:
        raise _UsageError(str(exc))


def _load_stream(settings: _Settings):
    path = settings.require("stream", "stream")
    try:
        batch = read_stream(path, order_slack=int(settings.get("order_slack", 0)), diagnostics=sys.stderr)
    except TweetEventsError as exc:
        raise _DataError("stream", exc)
    if batch.rejected:
        print(f"stream: rejected {batch.rejected} line(s)", file=sys.stderr)
    return batch


def _load_mode_resources(settings: _Settings, mode: str):
    gazetteer = weights = None
    if mode == "suggested":
        gaz_path = settings.get("gazetteer")
        if gaz_path is None:
            raise _DataError("geo", IoFailure("no gazetteer configured for suggested mode"))
        try:
            gazetteer = load_gazetteer(gaz_path)
        except TweetEventsError as exc:
            raise _DataError("geo", exc)
        weights_path = settings.get("weights")
        if weights_path is None:
            raise _DataError("weighting", IoFailure("no weights file configured for suggested mode"))
        try:
            weights = FeatureWeights.load(weights_path)
        except TweetEventsError as exc:
            raise _DataError("weighting", exc)
    return gazetteer, weights


def _cmd_detect(settings: _Settings) -> int:
    mode = settings.get("mode", "suggested")
    out_path = settings.require("out", "out")
    config = _pipeline_config(settings, mode)
    batch = _load_stream(settings)
    gazetteer, weights = _load_mode_resources(settings, mode)
    try:
        result = pipeline.run_stream(batch.tweets, config, gazetteer=gazetteer, weights=weights)
    except TweetEventsError as exc:
        raise _DataError("pipeline", exc)
    with open(out_path, "w", encoding="utf-8") as fp:
        for report in result.reports:
            fp.write(report.to_json_line() + "\n")
    clusters_out = settings.get("clusters_out")
    if clusters_out:
        with open(clusters_out, "w", encoding="utf-8") as fp:
            result.engine.export_snapshot(fp)
    c = result.counters
    print(
        f"detect[{mode}]: ingested={c.ingested} dropped_mentions={c.dropped_mentions}"
        f" dropped_empty={c.dropped_empty} clusters={c.clusters_created}"
        f" events={c.events_detected} compression_calls={c.compression_calls}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_eval(settings: _Settings) -> int:
    truth_path = settings.require("truth", "truth")
    try:
        truth = GroundTruth.load(truth_path)
    except TweetEventsError as exc:
        raise _DataError("eval", exc)
    batch = _load_stream(settings)

    mode_choice = settings.get("modes", "both")
    modes = ("base", "suggested") if mode_choice == "both" else (mode_choice,)
    d_grid = _parse_grid(settings.get("dt_grid"), float(settings.get("distance_threshold", 0.5)))
    s_grid = _parse_grid(settings.get("score_grid"), float(settings.get("score_threshold", 1.0)))

    runs = []
    for mode in modes:
        config = _pipeline_config(settings, mode)
        gazetteer, weights = _load_mode_resources(settings, mode)
        try:
            runs.extend(
                sweep_thresholds(batch.tweets, truth, config, d_grid, s_grid, gazetteer, weights)
            )
        except TweetEventsError as exc:
            raise _DataError("eval", exc)

    tsv_out = settings.get("tsv_out")
    if tsv_out:
        with open(tsv_out, "w", encoding="utf-8") as fp:
            write_tsv(runs, fp)
    report = format_report(runs)
    for mode in modes:
        mode_runs = [r for r in runs if r.mode == mode]
        best = best_run(mode_runs)
        report += (
            f"\nbest[{mode}]: D_t={best.distance_threshold:g} score_t={best.score_threshold:g}"
            f" tp={best.tp} fp={best.fp}"
            f" precision={'NA' if best.precision is None else f'{best.precision:.4f}'}"
            f" recall={'NA' if best.recall is None else f'{best.recall:.4f}'}"
        )
    report_out = settings.get("report_out")
    if report_out:
        with open(report_out, "w", encoding="utf-8") as fp:
            fp.write(report + "\n")
    else:
        print(report)
    return EXIT_OK


def _cmd_train_weights(settings: _Settings) -> int:
    labeled_path = settings.require("labeled", "labeled")
    out_path = settings.require("out", "out")
    bins = int(settings.get("bins", DEFAULT_BINS))
    try:
        batch = read_stream(labeled_path, diagnostics=sys.stderr)
    except TweetEventsError as exc:
        raise _DataError("stream", exc)
    try:
        sample = LabeledSample.from_tweets(batch.tweets)
        weights = learn_weights(sample, bins=bins)
    except (TweetEventsError, ValueError) as exc:
        raise _DataError("weighting", exc)
    weights.save(out_path)
    print(
        f"train-weights: rows={weights.training_rows} w_followers={weights.w_followers:.6f}"
        f" w_retweets={weights.w_retweets:.6f} -> {out_path}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_generate(settings: _Settings) -> int:
    spec_path = settings.require("spec", "spec")
    out_path = settings.require("out", "out")
    truth_out = settings.get("truth_out") or f"{out_path}.truth"
    try:
        spec = synth.GeneratorSpec.from_file(spec_path)
        batch, truth = synth.generate(spec)
    except TweetEventsError as exc:
        raise _DataError("synth", exc)
    except (KeyError, TypeError, ValueError) as exc:
        raise _DataError("synth", IoFailure(f"bad generator spec: {exc}"))
    write_stream(batch, out_path)
    truth.save(truth_out)
    print(
        f"generate: tweets={len(batch.tweets)} events={len(truth.events)}"
        f" -> {out_path}, {truth_out}",
        file=sys.stderr,
    )
    return EXIT_OK


_COMMANDS = {
    "detect": _cmd_detect,
    "eval": _cmd_eval,
    "train-weights": _cmd_train_weights,
    "generate": _cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = _load_config_file(getattr(args, "config", None))
        settings = _Settings(args, config)
        return _COMMANDS[args.command](settings)
    except _UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DataError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort guard for exit-code contract
        print(f"internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
