"""Event timelines and the half-open time slices they cut a span into."""

from __future__ import annotations

import bisect
import logging
import re
from dataclasses import dataclass
from datetime import date, datetime, timezone
from importlib import resources

log = logging.getLogger(__name__)

_LINE_RE = re.compile(r"^(\S+)\s+(.*\S)\s*$")


class TimelineError(ValueError):
    pass


def _utc(d: date) -> datetime:
    return datetime(d.year, d.month, d.day, tzinfo=timezone.utc)


# Default analysis span per preset, [start, end).
PRESET_SPANS = {
    "webkit-figures": (_utc(date(2006, 9, 1)), _utc(date(2013, 4, 3))),
    "table-1": (_utc(date(2006, 9, 1)), _utc(date(2013, 4, 3))),
}


@dataclass(frozen=True)
class EventTimeline:
    events: tuple[tuple[datetime, str], ...] = ()

    def __post_init__(self):
        for (a, _), (b, _) in zip(self.events, self.events[1:]):
            if not a < b:
                raise TimelineError(f"event dates not strictly increasing: {a:%Y-%m-%d} then {b:%Y-%m-%d}")
        if any(not label for _, label in self.events):
            raise TimelineError("event label is empty")


@dataclass(frozen=True)
class Slice:
    index: int
    start: datetime
    end: datetime
    label: str

    def __post_init__(self):
        if not self.start < self.end:
            raise TimelineError(f"empty slice [{self.start}, {self.end})")

    def __contains__(self, t: datetime) -> bool:
        return self.start <= t < self.end


def load_timeline(text: str) -> EventTimeline:
    """Parse ``YYYY-MM-DD  label`` lines; ``#`` starts a comment."""
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise TimelineError(f"line {lineno}: expected 'YYYY-MM-DD  label'")
        try:
            d = date.fromisoformat(m.group(1))
        except ValueError:
            raise TimelineError(f"line {lineno}: unparseable date {m.group(1)!r}") from None
        events.append((_utc(d), m.group(2)))
    return EventTimeline(tuple(events))


def preset_timeline(name: str) -> EventTimeline:
    if name not in PRESET_SPANS:
        raise TimelineError(f"unknown timeline preset {name!r}; choose from {sorted(PRESET_SPANS)}")
    path = resources.files("coeditnet").joinpath(f"data/timelines/{name}.txt")
    return load_timeline(path.read_text("utf-8"))


def build_slices(timeline: EventTimeline, span_start: datetime, span_end: datetime) -> list[Slice]:
    """Cut ``[span_start, span_end)`` at every event strictly inside it.

    Each slice is labelled with the event that opens it; the first slice is
    labelled ``"span start"``.
    """
    if not span_start < span_end:
        raise TimelineError(f"inverted span [{span_start}, {span_end})")
    cuts = []
    for when, label in timeline.events:
        if span_start < when < span_end:
            cuts.append((when, label))
        else:
            log.warning("event %s (%s) outside span, dropped", f"{when:%Y-%m-%d}", label)
    bounds = [(span_start, "span start"), *cuts, (span_end, None)]
    return [
        Slice(i, start, end, label)
        for i, ((start, label), (end, _)) in enumerate(zip(bounds, bounds[1:]))
    ]


def assign_slice(t: datetime, slices: list[Slice]) -> int:
    if not slices or not slices[0].start <= t < slices[-1].end:
        raise TimelineError(f"{t} lies outside the sliced span")
    starts = [s.start for s in slices]
    return bisect.bisect_right(starts, t) - 1
