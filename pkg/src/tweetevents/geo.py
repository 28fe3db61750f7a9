"""Gazetteer loading, location extraction and the location-correlation score.

Location extraction is gazetteer dictionary matching over tokens, token
bigrams and hashtag bodies. It is the pluggable stand-in for a trained
place-name recognizer: anything producing LocationHit values can be
swapped in without touching the scoring below.
"""

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import IoFailure, MalformedGazetteerRow
from .preprocess import TOKEN_RE

LEVELS = ("continent", "country", "state", "city")

CHANNEL_TEXT = "text"
CHANNEL_HASHTAG = "hashtag"
CHANNEL_BOTH = "both"


@dataclass(frozen=True)
class LocationHierarchy:
    """A (continent, country, state, city) tuple; at least one level present."""

    continent: Optional[str] = None
    country: Optional[str] = None
    state: Optional[str] = None
    city: Optional[str] = None

    def __post_init__(self):
        if not (self.continent or self.country or self.state or self.city):
            raise ValueError("a location hierarchy needs at least one level")

    @property
    def depth(self) -> int:
        """Granularity of the finest filled level: continent=1 .. city=4."""
        for depth, level in ((4, self.city), (3, self.state), (2, self.country), (1, self.continent)):
            if level:
                return depth
        raise AssertionError("unreachable: empty hierarchy")


@dataclass(frozen=True)
class LocationHit:
    hierarchy: LocationHierarchy
    channel: str  # CHANNEL_TEXT, CHANNEL_HASHTAG or CHANNEL_BOTH


@dataclass(frozen=True)
class LocScoringConfig:
    """Per-level agreement weights; each in [0,1], summing to at most 1."""

    alpha1: float = 0.25  # continent
    alpha2: float = 0.25  # country
    alpha3: float = 0.25  # state
    alpha4: float = 0.25  # city

    def __post_init__(self):
        alphas = (self.alpha1, self.alpha2, self.alpha3, self.alpha4)
        if any(a < 0.0 or a > 1.0 for a in alphas):
            raise ValueError("location weights must lie in [0,1]")
        if sum(alphas) > 1.0 + 1e-12:
            raise ValueError("location weights must sum to at most 1")


def normalize_name(name: str) -> str:
    """The key normalization shared by gazetteer entries and probes."""
    name = unicodedata.normalize("NFC", name).casefold()
    return re.sub(r"\s+", " ", name).strip()


@dataclass
class Gazetteer:
    entries: dict = field(default_factory=dict)  # normalized name -> [LocationHierarchy]

    def add(self, name: str, hierarchy: LocationHierarchy) -> None:
        key = normalize_name(name)
        if not key:
            return
        self.entries.setdefault(key, []).append(hierarchy)

    def lookup(self, name: str) -> list[LocationHierarchy]:
        return self.entries.get(normalize_name(name), [])

    def __len__(self) -> int:
        return len(self.entries)


def load_gazetteer(path: str) -> Gazetteer:
    """Load a TSV gazetteer.

    Columns: name, level, continent, country, state, city, aliases
    (semicolon-separated). level is one of continent/country/state/city;
    every level coarser than `level` must be filled (a city row knows its
    state, country and continent). Lines starting with '#' are comments.
    """
    gazetteer = Gazetteer()
    try:
        fp = open(path, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot open gazetteer '{path}': {exc}") from exc
    with fp:
        for line_no, line in enumerate(fp, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 7:
                raise MalformedGazetteerRow(f"line {line_no}: expected 7 columns, got {len(cols)}")
            name, level = cols[0].strip(), cols[1].strip().lower()
            if not name:
                raise MalformedGazetteerRow(f"line {line_no}: empty name")
            if level not in LEVELS:
                raise MalformedGazetteerRow(f"line {line_no}: unknown level '{level}'")
            depth = LEVELS.index(level) + 1
            values = [c.strip() or None for c in cols[2:6]]
            if any(values[i] is None for i in range(depth)):
                raise MalformedGazetteerRow(
                    f"line {line_no}: {level} row must fill all levels down to {level}"
                )
            # levels finer than the named one are not part of this entry
            for i in range(depth, 4):
                values[i] = None
            hierarchy = LocationHierarchy(*values)
            gazetteer.add(name, hierarchy)
            for alias in cols[6].split(";"):
                if alias.strip():
                    gazetteer.add(alias, hierarchy)
    return gazetteer


def _probe_tokens(text: str) -> list[str]:
    return [t.casefold() for t in TOKEN_RE.findall(unicodedata.normalize("NFC", text))]


def resolve_profile_location(profile_location: Optional[str], gazetteer: Gazetteer) -> Optional[LocationHierarchy]:
    """Resolve a free-text profile location to its most specific gazetteer hit.

    Probes comma-separated segments first, then individual tokens; misses
    return None.
    """
    if not profile_location or not profile_location.strip():
        return None
    probes = [seg for seg in (s.strip() for s in profile_location.split(",")) if seg]
    probes.extend(_probe_tokens(profile_location))
    best: Optional[LocationHierarchy] = None
    for probe in probes:
        for candidate in gazetteer.lookup(probe):
            if best is None or candidate.depth > best.depth:
                best = candidate
    return best


def extract_text_locations(
    tokens: Sequence[str], hashtags: Iterable[str], gazetteer: Gazetteer
) -> list[LocationHit]:
    """Find gazetteer locations mentioned in a tweet.

    The text channel probes each token and each adjacent 2-token window
    (two-word place names); the hashtag channel probes hashtag bodies with
    underscores read as spaces. Duplicates collapse to one hit whose
    channel records where the place was seen.
    """
    channels: dict[LocationHierarchy, set[str]] = {}

    def note(probe: str, channel: str) -> None:
        for candidate in gazetteer.lookup(probe):
            channels.setdefault(candidate, set()).add(channel)

    tokens = list(tokens)
    for i, token in enumerate(tokens):
        note(token, CHANNEL_TEXT)
        if i + 1 < len(tokens):
            note(f"{token} {tokens[i + 1]}", CHANNEL_TEXT)
    for tag in hashtags:
        note(tag.replace("_", " "), CHANNEL_HASHTAG)

    hits = []
    for hierarchy, seen in channels.items():  # insertion order: first-found
        channel = CHANNEL_BOTH if len(seen) == 2 else next(iter(seen))
        hits.append(LocationHit(hierarchy=hierarchy, channel=channel))
    return hits


def _level_match(a: Optional[str], b: Optional[str]) -> float:
    # absent levels never match; comparison is case-insensitive
    if a is None or b is None:
        return 0.0
    return 1.0 if a.casefold() == b.casefold() else 0.0


def loc_correlate_score(
    user: Optional[LocationHierarchy],
    event_locs: Sequence[LocationHierarchy],
    config: LocScoringConfig = LocScoringConfig(),
) -> float:
    """Weighted level-by-level agreement between the author's location and
    the locations a tweet mentions; the best-matching mentioned location
    wins. 0 when either side is absent.
    """
    if user is None or not event_locs:
        return 0.0
    best = 0.0
    for loc in event_locs:
        score = (
            config.alpha1 * _level_match(user.continent, loc.continent)
            + config.alpha2 * _level_match(user.country, loc.country)
            + config.alpha3 * _level_match(user.state, loc.state)
            + config.alpha4 * _level_match(user.city, loc.city)
        )
        best = max(best, score)
    return best
