"""Regenerate the bundled fixtures: python tests/fixtures/make_fixtures.py"""

from pathlib import Path

from coeditnet.synthetic import synthetic_changelog

HERE = Path(__file__).parent

if __name__ == "__main__":
    (HERE / "ChangeLog").write_bytes(synthetic_changelog(entries=200, bullets=517, seed=7))
