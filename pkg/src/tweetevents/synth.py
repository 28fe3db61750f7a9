"""Deterministic synthetic streams with planted events.

Event tweets repeat their keyword set (plus a little noise), which makes
them mutually compressible; background tweets sample a noise vocabulary.
Mention noise reuses spammy templates so that, unfiltered, it clusters.
"""

import json
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import IoFailure, SpecViolation
from .evaluation import GroundTruth, TruthEvent
from .stream import StreamBatch, Tweet

# measured on the reference corpus: mention tweets are 3.4% of a day's
# traffic and event-related mention tweets only 0.2%, so by default just
# 0.2/3.4 of injected mention noise lands on event tweets
DEFAULT_MENTION_FRACTION = 0.034
EVENT_SHARE_OF_MENTIONS = 0.2 / 3.4

SPAM_TEMPLATES = (
    "follow {handle} today for daily prize draws and free giveaways everyone wins",
    "check {handle} right now trending deals discount codes limited offer inside",
    "join {handle} crew like share repost to unlock exclusive rewards tonight",
)

DEFAULT_NOISE_VOCABULARY = tuple(
    """
    morning coffee traffic lunch weather weekend movie music playlist running
    gym dinner recipe garden puppy kitten sunset beach homework deadline
    meeting office commute train ticket holiday birthday cake photo camera
    laptop phone battery update game match score team season episode series
    book chapter artist album concert market groceries cooking cleaning
    laundry neighbor street park bicycle repair budget savings invoice
    project sketch paint guitar piano lesson class exam notes library
    museum gallery river hiking trail camping tent firewood marshmallow
    breakfast smoothie yoga stretch podcast headline quote dream nap
    """.split()
)


@dataclass(frozen=True)
class PlantedEvent:
    keywords: tuple
    volume: int
    follower_boost: float = 1.0
    retweet_boost: float = 1.0
    location_name: Optional[str] = None
    window: tuple = (0, 0)

    def __post_init__(self):
        if self.volume < 1:
            raise SpecViolation("planted event volume must be >= 1")
        if self.window[0] > self.window[1]:
            raise SpecViolation("planted event window must be well-ordered")
        if self.follower_boost < 1.0 or self.retweet_boost < 1.0:
            raise SpecViolation("boosts must be >= 1")
        object.__setattr__(self, "keywords", tuple(self.keywords))


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    total_tweets: int
    events: tuple = ()
    mention_fraction: float = DEFAULT_MENTION_FRACTION
    url_fraction: float = 0.0
    noise_vocabulary: tuple = DEFAULT_NOISE_VOCABULARY

    def __post_init__(self):
        if self.total_tweets < 0:
            raise SpecViolation("total_tweets must be non-negative")
        for name, frac in (("mention_fraction", self.mention_fraction), ("url_fraction", self.url_fraction)):
            if not 0.0 <= frac <= 1.0:
                raise SpecViolation(f"{name} must lie in [0,1]")
        if not self.noise_vocabulary:
            raise SpecViolation("noise vocabulary must be non-empty")
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "noise_vocabulary", tuple(self.noise_vocabulary))

    @classmethod
    def from_file(cls, path: str) -> "GeneratorSpec":
        try:
            with open(path, encoding="utf-8") as fp:
                record = json.load(fp)
        except OSError as exc:
            raise IoFailure(f"cannot read generator spec '{path}': {exc}") from exc
        except ValueError as exc:
            raise IoFailure(f"generator spec '{path}' is not valid JSON: {exc}") from exc
        events = tuple(
            PlantedEvent(
                keywords=tuple(e["keywords"]),
                volume=e["volume"],
                follower_boost=e.get("follower_boost", 1.0),
                retweet_boost=e.get("retweet_boost", 1.0),
                location_name=e.get("location_name"),
                window=tuple(e.get("window", (0, 0))),
            )
            for e in record.get("events", ())
        )
        return cls(
            seed=record["seed"],
            total_tweets=record["total_tweets"],
            events=events,
            mention_fraction=record.get("mention_fraction", DEFAULT_MENTION_FRACTION),
            url_fraction=record.get("url_fraction", 0.0),
            noise_vocabulary=tuple(record.get("noise_vocabulary", DEFAULT_NOISE_VOCABULARY)),
        )


@dataclass
class _Draft:
    timestamp: int
    text: str
    followers: int
    retweets: int
    label: bool
    profile_location: Optional[str] = None
    hashtags: tuple = ()
    mentions: tuple = ()
    urls: tuple = ()


def generate(spec: GeneratorSpec) -> tuple[StreamBatch, GroundTruth]:
    """Produce a timestamp-sorted synthetic stream and its planted ground truth.

    Deterministic in the seed: identical specs serialize byte-identically.
    """
    event_volume = sum(e.volume for e in spec.events)
    if event_volume > spec.total_tweets:
        raise SpecViolation(
            f"planted volumes ({event_volume}) exceed total_tweets ({spec.total_tweets})"
        )
    rng = random.Random(spec.seed)
    horizon = max([spec.total_tweets] + [e.window[1] for e in spec.events])

    drafts: list[_Draft] = []
    event_indices: list[int] = []
    truth_events: list[TruthEvent] = []

    for i, event in enumerate(spec.events):
        truth_events.append(
            TruthEvent(
                event_id=f"event-{i + 1:02d}",
                keywords=frozenset(k.casefold() for k in event.keywords),
                description=" ".join(event.keywords),
            )
        )
        for _ in range(event.volume):
            tokens = list(event.keywords)
            tokens += [rng.choice(spec.noise_vocabulary) for _ in range(rng.randint(2, 4))]
            draft = _Draft(
                timestamp=rng.randint(event.window[0], event.window[1]),
                text=" ".join(tokens),
                followers=round(rng.randint(20, 2000) * event.follower_boost),
                retweets=round(rng.randint(0, 5) * event.retweet_boost),
                label=True,
            )
            if event.location_name:
                draft.profile_location = event.location_name
                roll = rng.random()
                if roll < 0.60:  # place named in the text
                    draft.text += f" {event.location_name}"
                elif roll < 0.85:  # only in a hashtag
                    draft.hashtags = (event.location_name.replace(" ", "_"),)
                else:  # both channels
                    draft.text += f" {event.location_name}"
                    draft.hashtags = (event.location_name.replace(" ", "_"),)
            event_indices.append(len(drafts))
            drafts.append(draft)

    background_indices = []
    for _ in range(spec.total_tweets - event_volume):
        tokens = [rng.choice(spec.noise_vocabulary) for _ in range(rng.randint(6, 10))]
        background_indices.append(len(drafts))
        drafts.append(
            _Draft(
                timestamp=rng.randint(0, horizon),
                text=" ".join(tokens),
                followers=rng.randint(20, 2000),
                retweets=rng.randint(0, 5),
                label=False,
            )
        )

    _inject_mentions(spec, rng, drafts, event_indices, background_indices)
    _inject_urls(spec, rng, drafts)

    order = sorted(range(len(drafts)), key=lambda i: (drafts[i].timestamp, i))
    tweets = []
    for seq, idx in enumerate(order):
        d = drafts[idx]
        tweets.append(
            Tweet(
                id=f"t{seq:06d}",
                timestamp=d.timestamp,
                text=d.text,
                author_id=f"u{seq:06d}",
                followers_count=d.followers,
                retweets_count=d.retweets,
                profile_location=d.profile_location,
                hashtags=d.hashtags,
                mentions=d.mentions,
                urls=d.urls,
                label=d.label,
            )
        )
    batch = StreamBatch(tweets=tweets, source_path=f"synthetic:seed={spec.seed}")
    return batch, GroundTruth(events=truth_events)


def _inject_mentions(spec, rng, drafts, event_indices, background_indices) -> None:
    n_mentions = round(spec.mention_fraction * spec.total_tweets)
    n_event = min(round(n_mentions * EVENT_SHARE_OF_MENTIONS), len(event_indices))
    n_background = min(n_mentions - n_event, len(background_indices))

    for idx in rng.sample(event_indices, n_event) if n_event else []:
        handle = f"user{rng.randrange(10000):04d}"
        drafts[idx].text += f" @{handle}"
        drafts[idx].mentions = (handle,)
    for idx in rng.sample(background_indices, n_background) if n_background else []:
        handle = f"promo{rng.randrange(100):02d}"
        # spammy template: unfiltered mention noise is mutually compressible
        drafts[idx].text = rng.choice(SPAM_TEMPLATES).format(handle=f"@{handle}")
        drafts[idx].mentions = (handle,)
        drafts[idx].label = False


def _inject_urls(spec, rng, drafts) -> None:
    n_urls = round(spec.url_fraction * len(drafts))
    if not n_urls:
        return
    alphabet = "abcdefghij0123456789"
    for idx in rng.sample(range(len(drafts)), min(n_urls, len(drafts))):
        url = "https://t.co/" + "".join(rng.choice(alphabet) for _ in range(10))
        drafts[idx].text += f" {url}"
        drafts[idx].urls = (url,)


def write_ground_truth(truth: GroundTruth, path: str) -> None:
    truth.save(path)
