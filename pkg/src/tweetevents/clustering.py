"""Single-pass incremental clustering by compression distance.

Each arriving tweet is compared against the active clusters once and
either joins the nearest cluster below the distance threshold or founds a
new one; clusters go inactive when the probability of their observed
silence under the estimated arrival rate drops below a floor.
"""

import json
import math
import zlib
from dataclasses import dataclass, field
from typing import IO, Optional

from .errors import EmptyDocument
from .preprocess import PreprocessedTweet

DEFAULT_COMPRESSOR_LEVEL = 6


def _as_bytes(data: "bytes | str") -> bytes:
    return data.encode("utf-8") if isinstance(data, str) else data


def compressed_size(data: "bytes | str", level: int = DEFAULT_COMPRESSOR_LEVEL) -> int:
    """Size in bytes of the raw-DEFLATE compression of `data`.

    Deterministic: a fixed level and window always yield the same stream.
    """
    compressor = zlib.compressobj(level, zlib.DEFLATED, -zlib.MAX_WBITS)
    return len(compressor.compress(_as_bytes(data)) + compressor.flush())


def ncd(x: "bytes | str", y: "bytes | str", level: int = DEFAULT_COMPRESSOR_LEVEL) -> float:
    """Compression distance C(xy) / (C(x) + C(y)).

    The concatenation order is canonical (lexicographically smaller byte
    string first) so the distance is exactly symmetric.
    """
    bx, by = _as_bytes(x), _as_bytes(y)
    if not bx or not by:
        raise EmptyDocument("compression distance needs non-empty documents")
    a, b = (bx, by) if bx <= by else (by, bx)
    return compressed_size(a + b, level) / (compressed_size(bx, level) + compressed_size(by, level))


@dataclass(frozen=True)
class ClusterConfig:
    distance_threshold: float = 0.5
    compare_window: int = 10
    inactivity_probability: float = 0.01
    compressor_level: int = DEFAULT_COMPRESSOR_LEVEL
    grace_window: int = 3600  # seconds a lone tweet keeps its cluster alive

    def __post_init__(self):
        if not 0.0 < self.distance_threshold < 1.0:
            raise ValueError("distance_threshold must lie in (0,1)")
        if self.compare_window < 1:
            raise ValueError("compare_window must be positive")
        if not 0.0 < self.inactivity_probability < 1.0:
            raise ValueError("inactivity_probability must lie in (0,1)")
        if self.grace_window < 0:
            raise ValueError("grace_window must be non-negative")


@dataclass
class ClusterMember:
    pt: PreprocessedTweet
    loc_score: float
    data: bytes
    csize: int

    @property
    def timestamp(self) -> int:
        return self.pt.tweet.timestamp


@dataclass
class Cluster:
    id: int
    members: list[ClusterMember]
    active: bool
    created_at: int
    last_arrival: int

    @property
    def arrival_times(self) -> list[int]:
        return [m.timestamp for m in self.members]

    @property
    def first_arrival(self) -> int:
        return self.members[0].timestamp

    def member_ids(self) -> list[str]:
        return [m.pt.tweet.id for m in self.members]


class ClusterEngine:
    """Single-writer engine state: call assign/update_activity in stream order."""

    def __init__(self, config: ClusterConfig = ClusterConfig()):
        self.config = config
        self.clusters: dict[int, Cluster] = {}
        self.next_id = 0
        self.now: Optional[int] = None
        self.compression_calls = 0  # pairwise distance evaluations
        self.clusters_created = 0
        self.clusters_deactivated = 0

    def active_clusters(self) -> list[Cluster]:
        return [c for c in self.clusters.values() if c.active]

    def _distance(self, data: bytes, csize: int, cluster: Cluster) -> float:
        """Min compression distance to the last `compare_window` members.

        Member compressed sizes are cached, so each comparison costs one
        compression of the concatenated pair; the result is identical to
        calling ncd() pairwise.
        """
        level = self.config.compressor_level
        best = math.inf
        for member in cluster.members[-self.config.compare_window:]:
            self.compression_calls += 1
            a, b = (data, member.data) if data <= member.data else (member.data, data)
            d = compressed_size(a + b, level) / (csize + member.csize)
            if d < best:
                best = d
        return best

    def cluster_distance(self, pt: PreprocessedTweet, cluster: Cluster) -> float:
        data = pt.clean_text.encode("utf-8")
        if not data:
            raise EmptyDocument("cannot cluster an empty document")
        return self._distance(data, compressed_size(data, self.config.compressor_level), cluster)

    def assign(self, pt: PreprocessedTweet, loc_score: float = 0.0) -> int:
        """Route one tweet: join the nearest active cluster below the
        distance threshold (ties to the lowest cluster id) or found a new
        cluster. Returns the cluster id.
        """
        data = pt.clean_text.encode("utf-8")
        if not data:
            raise EmptyDocument("cannot cluster an empty document")
        csize = compressed_size(data, self.config.compressor_level)
        ts = pt.tweet.timestamp

        best_id, best_distance = None, math.inf
        for cluster in self.clusters.values():  # ascending id: ties keep the lowest
            if not cluster.active:
                continue
            d = self._distance(data, csize, cluster)
            if d < best_distance:
                best_id, best_distance = cluster.id, d

        member = ClusterMember(pt=pt, loc_score=loc_score, data=data, csize=csize)
        if best_id is not None and best_distance < self.config.distance_threshold:
            cluster = self.clusters[best_id]
            cluster.members.append(member)
            cluster.last_arrival = max(cluster.last_arrival, ts)
            assigned = best_id
        else:
            assigned = self.next_id
            self.next_id += 1
            self.clusters[assigned] = Cluster(
                id=assigned, members=[member], active=True, created_at=ts, last_arrival=ts
            )
            self.clusters_created += 1
        self.now = ts if self.now is None else max(self.now, ts)
        return assigned

    def update_activity(self, now: int) -> list[int]:
        """Deactivate clusters whose silence has become too improbable.

        For clusters with >= 2 arrivals the rate is the maximum-likelihood
        estimate (n-1)/(last-first); the cluster goes inactive when the
        no-arrival probability exp(-rate * silence) falls below the
        configured floor. Single-arrival clusters (and bursts with zero
        time span, where the rate estimate degenerates) instead use the
        fixed grace window.
        """
        p_floor = self.config.inactivity_probability
        max_silence = math.log(1.0 / p_floor)  # exp(-rate*s) < p  <=>  rate*s > ln(1/p)
        deactivated = []
        for cluster in self.clusters.values():
            if not cluster.active:
                continue
            silence = now - cluster.last_arrival
            if silence <= 0:
                continue
            span = cluster.last_arrival - cluster.first_arrival
            if len(cluster.members) >= 2 and span > 0:
                rate = (len(cluster.members) - 1) / span
                inactive = rate * silence > max_silence
            else:
                inactive = silence > self.config.grace_window
            if inactive:
                cluster.active = False
                deactivated.append(cluster.id)
                self.clusters_deactivated += 1
        self.now = now if self.now is None else max(self.now, now)
        return deactivated

    def flush(self) -> list[int]:
        """End of stream: deactivate every remaining active cluster."""
        remaining = []
        for cluster in self.clusters.values():
            if cluster.active:
                cluster.active = False
                remaining.append(cluster.id)
                self.clusters_deactivated += 1
        return remaining

    def export_snapshot(self, fp: IO[str]) -> None:
        """One JSON line per cluster: id, activity, member ids, time span."""
        for cluster in self.clusters.values():
            fp.write(
                json.dumps(
                    {
                        "cluster_id": cluster.id,
                        "active": cluster.active,
                        "member_ids": cluster.member_ids(),
                        "created_at": cluster.created_at,
                        "last_arrival": cluster.last_arrival,
                    },
                    separators=(",", ":"),
                )
                + "\n"
            )
