"""Deterministic synthetic inputs for fixtures, scale checks and benchmarks."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import numpy as np

from .changelog import format_timestamp

SPAN = (datetime(2006, 9, 1, tzinfo=timezone.utc), datetime(2013, 4, 3, tzinfo=timezone.utc))

_DOMAINS = [
    "apple.com", "apple.com", "apple.com", "google.com", "chromium.org", "nokia.com",
    "rim.com", "igalia.com", "intel.com", "samsung.com", "inf.u-szeged.hu", "adobe.com",
    "torchmobile.com", "webkit.org", "kde.org", "gmail.com", "example.net",
]
_DIRS = [
    "Source/WebCore/page", "Source/WebCore/dom", "Source/WebCore/css",
    "Source/WebCore/rendering", "Source/JavaScriptCore/runtime", "Source/WebKit/qt",
    "Source/WebKit2/UIProcess", "Tools/Scripts", "LayoutTests/fast/dom",
]
_STEMS = ["Frame", "Node", "Element", "Document", "RenderBlock", "CSSParser", "JSObject",
          "Page", "Settings", "WebView", "Range", "Editor"]


def _partition(total: int, parts: int, rng: random.Random) -> list[int]:
    """Random composition of ``total`` into ``parts`` positive integers."""
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    return [b - a for a, b in zip([0, *cuts], [*cuts, total])]


def synthetic_changelog(entries: int = 200, bullets: int = 517, seed: int = 7) -> bytes:
    """A WebKit-style ChangeLog with exactly ``entries`` headers and
    ``bullets`` file bullets, newest entry first, dated inside ``SPAN``."""
    if bullets < entries:
        raise ValueError("every entry needs at least one file bullet")
    rng = random.Random(seed)
    people = []
    for i in range(40):
        first, last = f"Dev{i:02d}", rng.choice(["Smith", "Kim", "Nagy", "Virtanen", "Lee", "Garcia"])
        people.append((f"{first} {last}", f"{first.lower()}.{last.lower()}@{rng.choice(_DOMAINS)}"))
    files = [f"{d}/{s}.{ext}" for d in _DIRS for s in rng.sample(_STEMS, 5) for ext in ("cpp", "h")]
    files += [f"{d}/ChangeLog" for d in ("Source/WebCore", "Tools")]

    span_days = (SPAN[1] - SPAN[0]).days
    days = sorted(rng.sample(range(span_days), entries), reverse=True)
    out = []
    for day, count in zip(days, _partition(bullets, entries, rng)):
        name, email = rng.choice(people)
        # mixed-case address exercises canonicalization
        if rng.random() < 0.2:
            email = email.title()
        when = SPAN[0] + timedelta(days=day)
        out.append(f"{when:%Y-%m-%d}  {name}  <{email}>\n\n")
        out.append(f"        {rng.choice(['Fix crash on reload.', 'Refactor layout code.', 'Add test.'])}\n")
        out.append(f"        https://bugs.webkit.org/show_bug.cgi?id={rng.randrange(10000, 99999)}\n\n")
        out.append(f"        Reviewed by {rng.choice(people)[0]}.\n\n")
        for path in rng.sample(files, count):
            style = rng.random()
            if style < 0.5:
                out.append(f"        * {path}:\n")
            elif style < 0.8:
                out.append(f"        * {path}: Tweak.\n")
            else:
                out.append(f"        * {path}:\n        (WebCore::{rng.choice(_STEMS)}::update):\n")
        out.append("\n")
    return "".join(out).encode("utf-8")


def synthetic_commitlog(contributions: int = 100_000, developers: int = 2_000,
                        files: int = 20_000, modules: int = 200, seed: int = 7,
                        span: tuple[datetime, datetime] = SPAN) -> bytes:
    """A commit log where each developer mostly works inside a home module.

    Developer activity is heavy-tailed, like real projects, and timestamps are
    uniform over ``span``.
    """
    rng = np.random.default_rng(seed)
    activity = 1.0 / np.arange(1, developers + 1) ** 0.8
    dev = rng.choice(developers, size=contributions, p=activity / activity.sum())
    home = rng.integers(0, modules, size=developers)
    per_module = files // modules
    local = rng.random(contributions) < 0.85
    module = np.where(local, home[dev], rng.integers(0, modules, size=contributions))
    file_ = module * per_module + rng.integers(0, per_module, size=contributions)
    seconds = int((span[1] - span[0]).total_seconds())
    offsets = np.sort(rng.integers(0, seconds, size=contributions))
    domains = np.array(_DOMAINS)[rng.integers(0, len(_DOMAINS), size=developers)]
    lines = [
        f"{format_timestamp(span[0] + timedelta(seconds=int(off)))}\tdev{d}@{domains[d]}\t"
        f"Source/mod{f // per_module:03d}/File{f:05d}.cpp\n"
        for off, d, f in zip(offsets, dev, file_)
    ]
    return "".join(lines).encode("utf-8")
