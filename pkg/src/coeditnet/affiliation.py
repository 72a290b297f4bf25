"""Email canonicalization and domain-based organization lookup."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

OTHER = "other"

_ANGLE_RE = re.compile(r"<([^<>]*)>")


class AffiliationError(ValueError):
    """Malformed email address or affiliation table."""


def canonicalize_email(raw: str) -> str:
    """Reduce ``raw`` to a lowercase ``local@domain`` string.

    Accepts bare addresses, ``<addr>`` and ``Display Name <addr>`` forms.
    """
    text = raw.strip()
    m = _ANGLE_RE.search(text)
    if m:
        text = m.group(1).strip()
    text = text.strip("<> \t").lower()
    if text.count("@") != 1:
        raise AffiliationError(f"not an email address: {raw!r}")
    local, domain = text.split("@")
    if not local or not domain or any(c.isspace() for c in text):
        raise AffiliationError(f"not an email address: {raw!r}")
    return text


@dataclass(frozen=True)
class AffiliationTable:
    rules: tuple[tuple[str, str], ...] = ()
    fallback: str = OTHER

    def __post_init__(self):
        for pattern, org in self.rules:
            if not pattern or "@" in pattern or pattern != pattern.lower():
                raise AffiliationError(f"bad domain pattern {pattern!r}")
            if not org:
                raise AffiliationError(f"empty organization for {pattern!r}")

    @property
    def organizations(self) -> list[str]:
        """Distinct rule targets in first-appearance order."""
        return list(dict.fromkeys(org for _, org in self.rules))

    def resolve(self, email: str) -> str:
        return resolve_affiliation(email, self)


@dataclass(frozen=True)
class Developer:
    id: int
    email: str
    affiliation: str


def resolve_affiliation(email: str, table: AffiliationTable) -> str:
    """Organization of the first rule whose pattern is a dot-boundary suffix
    of the email's domain, else the fallback."""
    domain = email.rpartition("@")[2]
    for pattern, org in table.rules:
        if domain == pattern or domain.endswith("." + pattern):
            return org
    return table.fallback


def load_affiliation_table(text: str) -> AffiliationTable:
    rules: list[tuple[str, str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise AffiliationError(f"line {lineno}: expected 'pattern = Organization'")
        pattern, org = (part.strip() for part in line.split("=", 1))
        pattern = pattern.lower().lstrip(".")
        if not org:
            raise AffiliationError(f"line {lineno}: empty organization name")
        if not pattern or "@" in pattern:
            raise AffiliationError(f"line {lineno}: bad domain pattern {pattern!r}")
        if pattern in seen:
            raise AffiliationError(f"line {lineno}: duplicate pattern {pattern!r}")
        seen.add(pattern)
        rules.append((pattern, org))
    return AffiliationTable(tuple(rules))


def default_affiliation_table() -> AffiliationTable:
    """The ten most active WebKit organizations with their public domains."""
    text = resources.files("coeditnet").joinpath("data/affiliations.txt").read_text("utf-8")
    return load_affiliation_table(text)
