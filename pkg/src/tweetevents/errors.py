"""Typed errors raised across the pipeline."""


class TweetEventsError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRecord(TweetEventsError):
    """A stream line could not be parsed at all."""


class SchemaViolation(TweetEventsError):
    """A parsed record is missing required fields or breaks an invariant."""


class IoFailure(TweetEventsError):
    """An input file could not be read."""


class OrderViolation(TweetEventsError):
    """Stream timestamps decreased beyond the allowed slack."""


class MalformedGazetteerRow(TweetEventsError):
    """A gazetteer row has the wrong shape or an incoherent hierarchy."""


class EmptyDocument(TweetEventsError):
    """Compression distance is undefined for empty documents."""


class DegenerateSample(TweetEventsError):
    """A labeled sample contains only one label class; IG is undefined."""


class InvalidBounds(TweetEventsError):
    """Normalization bounds with min > max."""


class MissingWeights(TweetEventsError):
    """Cluster scoring was requested without trained feature weights."""


class NoDetections(TweetEventsError):
    """Precision is undefined when there are no detections at all."""


class SpecViolation(TweetEventsError):
    """A synthetic-stream spec is internally inconsistent."""
