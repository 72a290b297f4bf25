"""Streaming parsers for GNU/WebKit ChangeLogs and tab-separated commit logs.

A ChangeLog entry starts with an unindented header line::

    2013-04-03  Alice Dev  <alice@apple.com>

followed by indented prose and file bullets (``* Source/WebCore/page/Frame.cpp:``).
Every (header, file bullet) pair becomes one :class:`Contribution`.

The commit-log format is one change per LF-terminated line with three
tab-separated fields: ISO-8601 timestamp, email, repository-relative path.
"""

from __future__ import annotations

import io
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from typing import BinaryIO

from .affiliation import AffiliationError, canonicalize_email

TS_MIN = datetime(1970, 1, 1, tzinfo=timezone.utc)
TS_MAX = datetime(2100, 1, 1, tzinfo=timezone.utc)

_HEADER_RE = re.compile(r"^(\d{4}-\d{2}-\d{2})\s+(?:(.*?)\s+)?<([^<>]*)>\s*$")
_BULLET_RE = re.compile(r"^\s+\*\s*(.*)$")
_PATH_RE = re.compile(r"[^\s:]+")


class ParseError(ValueError):
    """Raised in strict mode on the first rejected entry."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Contribution:
    """One developer touching one file at one instant.

    ``name`` and ``source_line`` are provenance only and do not take part in
    equality, so a contribution survives a round trip through the commit-log
    format unchanged.
    """

    email: str
    timestamp: datetime
    file_path: str
    name: str | None = field(default=None, compare=False)
    source_line: int = field(default=1, compare=False)

    def __post_init__(self):
        if not self.email or self.email != self.email.lower() or self.email.count("@") != 1:
            raise ValueError(f"email not canonical: {self.email!r}")
        if not self.file_path or any(c in self.file_path for c in "\t\r\n"):
            raise ValueError(f"bad file path: {self.file_path!r}")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")
        ts = self.timestamp.astimezone(timezone.utc).replace(microsecond=0)
        object.__setattr__(self, "timestamp", ts)
        if self.source_line < 1:
            raise ValueError("source_line must be positive")

    @property
    def key(self) -> tuple[str, datetime, str]:
        return (self.email, self.timestamp, self.file_path)


@dataclass(frozen=True)
class ParseReport:
    """``accepted`` counts contributions emitted; ``rejected`` counts rejected
    entries (ChangeLog), lines (commit log) or flagged records (validation).

    ``diagnostics`` may also carry non-rejecting notes such as replaced bytes.
    """

    accepted: int = 0
    rejected: int = 0
    diagnostics: tuple[tuple[int, str], ...] = ()


def in_range(ts: datetime) -> bool:
    return TS_MIN <= ts < TS_MAX


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 date or date-time into an aware UTC datetime.

    Date-only values resolve to midnight UTC and naive times are taken as UTC.
    """
    text = text.strip()
    if len(text) == 10:
        d = date.fromisoformat(text)
        return datetime(d.year, d.month, d.day, tzinfo=timezone.utc)
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _lines(stream: BinaryIO | bytes, diagnostics: list) -> Iterator[tuple[int, str]]:
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    for lineno, raw in enumerate(stream, 1):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            text = raw.decode("utf-8", errors="replace")
            diagnostics.append((lineno, "invalid UTF-8 bytes replaced"))
        yield lineno, text.rstrip("\r\n")


def parse_changelog(
    stream: BinaryIO | bytes, strict: bool = False
) -> tuple[list[Contribution], ParseReport]:
    contribs: list[Contribution] = []
    diagnostics: list[tuple[int, str]] = []
    rejected = 0
    # (email, name, timestamp) of the open entry; None outside a valid entry
    entry: tuple[str, str | None, datetime] | None = None

    for lineno, line in _lines(stream, diagnostics):
        if not line.strip():
            continue
        if not line[0].isspace():
            entry = None
            reason = _parse_header(line)
            if isinstance(reason, str):
                rejected += 1
                diagnostics.append((lineno, reason))
                if strict:
                    raise ParseError(lineno, reason)
            else:
                entry = reason
            continue
        m = _BULLET_RE.match(line)
        if m is None or entry is None:
            continue
        path = _PATH_RE.match(m.group(1))
        if path is None:
            diagnostics.append((lineno, "file bullet without a path"))
            continue
        email, name, ts = entry
        contribs.append(Contribution(email, ts, path.group(0), name, lineno))

    return contribs, ParseReport(len(contribs), rejected, tuple(diagnostics))


def _parse_header(line: str):
    m = _HEADER_RE.match(line)
    if m is None:
        return "unparseable entry header"
    try:
        ts = parse_timestamp(m.group(1))
    except ValueError:
        return f"invalid date {m.group(1)!r}"
    if not in_range(ts):
        return "timestamp out of range"
    try:
        email = canonicalize_email(m.group(3))
    except AffiliationError:
        return f"invalid email {m.group(3)!r}"
    return email, (m.group(2) or None), ts


def parse_commitlog(stream: BinaryIO | bytes) -> tuple[list[Contribution], ParseReport]:
    contribs: list[Contribution] = []
    diagnostics: list[tuple[int, str]] = []
    rejected = 0
    for lineno, line in _lines(stream, diagnostics):
        if not line:
            continue
        reason = None
        fields = line.split("\t")
        if len(fields) != 3:
            reason = "field count"
        else:
            ts_text, email_text, path = fields
            try:
                ts = parse_timestamp(ts_text)
            except ValueError:
                reason = f"invalid timestamp {ts_text!r}"
            else:
                if not in_range(ts):
                    reason = "timestamp out of range"
            if reason is None:
                try:
                    email = canonicalize_email(email_text)
                except AffiliationError:
                    reason = f"invalid email {email_text!r}"
            if reason is None and not path:
                reason = "empty file path"
        if reason is not None:
            rejected += 1
            diagnostics.append((lineno, reason))
            continue
        contribs.append(Contribution(email, ts, path, None, lineno))
    return contribs, ParseReport(len(contribs), rejected, tuple(diagnostics))


def format_commitlog(contribs: Iterable[Contribution]) -> bytes:
    """Serialize to the commit-log format, one LF-terminated line each."""
    out = io.StringIO()
    for c in contribs:
        out.write(f"{format_timestamp(c.timestamp)}\t{c.email}\t{c.file_path}\n")
    return out.getvalue().encode("utf-8")


def validate_contributions(contribs: Iterable[Contribution]) -> ParseReport:
    """Flag repeated (email, timestamp, file) triples and out-of-range
    timestamps. The input is left untouched."""
    seen: set[tuple] = set()
    diagnostics: list[tuple[int, str]] = []
    total = flagged = 0
    for c in contribs:
        total += 1
        bad = False
        if c.key in seen:
            diagnostics.append((c.source_line, "duplicate contribution"))
            bad = True
        seen.add(c.key)
        if not in_range(c.timestamp):
            diagnostics.append((c.source_line, "timestamp out of range"))
            bad = True
        flagged += bad
    return ParseReport(total - flagged, flagged, tuple(diagnostics))
