import pytest
from hypothesis import given
from hypothesis import strategies as st

from coeditnet.affiliation import (OTHER, AffiliationError, AffiliationTable, canonicalize_email,
                                   default_affiliation_table, load_affiliation_table, resolve_affiliation)


@pytest.mark.parametrize("raw, expected", [
    ("Alice Dev <ALICE@Apple.COM>", "alice@apple.com"),
    ("bob@webkit.org", "bob@webkit.org"),
    ("  <Carol@Nokia.com>  ", "carol@nokia.com"),
])
def test_canonicalize(raw, expected):
    assert canonicalize_email(raw) == expected


@pytest.mark.parametrize("raw", ["no-at-sign", "@apple.com", "alice@", "a@b@c", "Name <>", "a b@c.d"])
def test_canonicalize_rejects(raw):
    with pytest.raises(AffiliationError):
        canonicalize_email(raw)


@given(st.from_regex(r"([A-Za-z ]{0,10}<)?[A-Za-z0-9.+]{1,10}@[A-Za-z0-9.]{1,10}>?", fullmatch=True))
def test_canonicalize_idempotent(raw):
    try:
        once = canonicalize_email(raw)
    except AffiliationError:
        return
    assert canonicalize_email(once) == once


def test_default_table_lists_ten_organizations():
    table = default_affiliation_table()
    assert table.organizations == [
        "Apple", "Google", "Nokia", "RIM", "Igalia", "Intel", "Samsung", "Univ. Szeged", "Adobe",
        "Torch Mobile",
    ]


@pytest.mark.parametrize("email, org", [
    ("x@apple.com", "Apple"),
    ("y@unknown.example", OTHER),
    ("z@mail.google.com", "Google"),
    ("w@chromium.org", "Google"),
    ("v@inf.u-szeged.hu", "Univ. Szeged"),
    ("u@notapple.com", OTHER),
    ("t@webkit.org", OTHER),
    ("s@kde.org", OTHER),
])
def test_resolve_default(email, org):
    assert resolve_affiliation(email, default_affiliation_table()) == org


def test_first_rule_wins():
    table = load_affiliation_table("corp.example = Parent\nsub.corp.example = Child\n")
    assert resolve_affiliation("a@sub.corp.example", table) == "Parent"
    table = load_affiliation_table("sub.corp.example = Child\ncorp.example = Parent\n")
    assert resolve_affiliation("a@sub.corp.example", table) == "Child"


def test_empty_table_falls_back():
    table = load_affiliation_table("# nothing here\n\n")
    assert table.rules == ()
    assert resolve_affiliation("a@apple.com", table) == OTHER


def test_load_preserves_order_and_lowercases():
    table = load_affiliation_table("B.example = Bee  # trailing comment\na.example = Ay\n")
    assert table.rules == (("b.example", "Bee"), ("a.example", "Ay"))


@pytest.mark.parametrize("text", [
    "apple.com = Apple\napple.com = Apple Again\n",
    "apple.com =   \n",
    "apple.com Apple\n",
    "me@apple.com = Apple\n",
])
def test_load_errors(text):
    with pytest.raises(AffiliationError):
        load_affiliation_table(text)


def test_table_invariants():
    with pytest.raises(AffiliationError):
        AffiliationTable((("Apple.com", "Apple"),))


@given(st.from_regex(r"[a-z]{1,6}@([a-z]{1,6}\.){1,3}(com|org|hu)", fullmatch=True))
def test_resolve_total_and_deterministic(email):
    table = default_affiliation_table()
    org = resolve_affiliation(email, table)
    assert org in table.organizations + [OTHER]
    assert resolve_affiliation(email, table) == org
