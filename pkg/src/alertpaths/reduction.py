"""Merge runs of consecutive similar alerts into weighted super-alerts.

Alerts are grouped by destination host and each group is processed in
chronological order (ties broken by ingest id).  A run keeps absorbing the
next alert while all three conditions hold:

1. it shares the run's source address (or both lack one),
2. it starts within ``window`` of the previous member,
3. its msg is at least ``threshold``-similar to the run's first member
   (the representative), which prevents drift across a long run.

Any failed condition closes the run and starts a new one, so two similar
alerts separated by a dissimilar one end up in different super-alerts.
The merge is lossless: member ids partition the input ids.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timedelta

from .alerts import AttackStage, RawAlert
from .embedding import HashingEmbedder, MsgVector, similarity


class EmptyInput(ValueError):
    """Compression rate is undefined for an empty input set."""


@dataclass(frozen=True)
class SuperAlert:
    """A merged run of similar alerts against one destination host.

    The representative is the earliest member; ``repeat_count`` equals the
    number of merged alerts and serves as the super-alert's weight.
    ``stage`` is None until classification assigns one.
    """

    representative: RawAlert
    repeat_count: int
    member_ids: tuple[int, ...]
    start_time: datetime
    end_time: datetime
    stage: AttackStage | None = None

    @property
    def id(self) -> int:
        return self.representative.id

    @property
    def src_ip(self) -> str | None:
        return self.representative.src_ip

    @property
    def dst_ip(self) -> str:
        return self.representative.dst_ip

    @property
    def msg(self) -> str:
        return self.representative.msg


def _as_timedelta(window: timedelta | float | int) -> timedelta:
    if isinstance(window, timedelta):
        return window
    return timedelta(seconds=float(window))


def reduce(
    alerts: list[RawAlert],
    threshold: float = 0.7,
    window: timedelta | float | int = 120.0,
    embedder: HashingEmbedder | None = None,
) -> list[SuperAlert]:
    """Reduce raw alerts to super-alerts.  Output is sorted by
    (start_time, representative id), so per-host chronological order is
    preserved.  Empty input yields empty output."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    window_td = _as_timedelta(window)
    if window_td <= timedelta(0):
        raise ValueError(f"window must be positive, got {window_td}")
    if embedder is None:
        embedder = HashingEmbedder()

    vectors: dict[str, MsgVector] = {}

    def vector_of(msg: str) -> MsgVector:
        vec = vectors.get(msg)
        if vec is None:
            vec = vectors[msg] = embedder.embed(msg)
        return vec

    by_dst: dict[str, list[RawAlert]] = defaultdict(list)
    for alert in alerts:
        by_dst[alert.dst_ip].append(alert)

    out: list[SuperAlert] = []
    for group in by_dst.values():
        group.sort(key=lambda a: (a.timestamp, a.id))
        run: list[RawAlert] = []
        rep_vec: MsgVector | None = None
        for alert in group:
            if run:
                same_src = alert.src_ip == run[0].src_ip
                in_window = alert.timestamp - run[-1].timestamp <= window_td
                similar = (
                    same_src
                    and in_window
                    and similarity(vector_of(alert.msg), rep_vec) >= threshold
                )
                if similar:
                    run.append(alert)
                    continue
                out.append(_close_run(run))
            run = [alert]
            rep_vec = vector_of(alert.msg)
        if run:
            out.append(_close_run(run))

    out.sort(key=lambda sa: (sa.start_time, sa.id))
    return out


def _close_run(run: list[RawAlert]) -> SuperAlert:
    return SuperAlert(
        representative=run[0],
        repeat_count=len(run),
        member_ids=tuple(a.id for a in run),
        start_time=run[0].timestamp,
        end_time=run[-1].timestamp,
    )


def compression_rate(input_count: int, output_count: int) -> float:
    """Fraction of raw alerts eliminated by reduction: 1 - output/input."""
    if input_count == 0:
        raise EmptyInput("no input alerts")
    if not 0 <= output_count <= input_count:
        raise ValueError(
            f"expected 0 <= output <= input, got output={output_count} input={input_count}"
        )
    return 1.0 - output_count / input_count
