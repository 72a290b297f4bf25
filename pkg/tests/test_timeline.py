from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coeditnet.timeline import (PRESET_SPANS, EventTimeline, Slice, TimelineError, assign_slice,
                                build_slices, load_timeline, preset_timeline)


def utc(*a):
    return datetime(*a, tzinfo=timezone.utc)


A, B = utc(2006, 9, 1), utc(2013, 4, 3)


def test_webkit_figures_preset():
    tl = preset_timeline("webkit-figures")
    assert [d for d, _ in tl.events] == [utc(2007, 6, 29), utc(2008, 9, 30), utc(2011, 2, 3)]
    slices = build_slices(tl, *PRESET_SPANS["webkit-figures"])
    assert [(s.start, s.end) for s in slices] == [
        (A, utc(2007, 6, 29)),
        (utc(2007, 6, 29), utc(2008, 9, 30)),
        (utc(2008, 9, 30), utc(2011, 2, 3)),
        (utc(2011, 2, 3), B),
    ]


def test_table1_preset():
    tl = preset_timeline("table-1")
    assert [d.strftime("%Y-%m") for d, _ in tl.events] == [
        "2006-09", "2007-06", "2008-09", "2009-06", "2011-02", "2012-07", "2013-04"]
    # the first and last events coincide with the span ends and are dropped
    assert len(build_slices(tl, *PRESET_SPANS["table-1"])) == 6


def test_unknown_preset():
    with pytest.raises(TimelineError):
        preset_timeline("nope")


def test_empty_config():
    assert load_timeline("# only a comment\n\n").events == ()


def test_out_of_order_config():
    with pytest.raises(TimelineError):
        load_timeline("2011-02-03  later\n2008-09-30  earlier\n")


def test_bad_date():
    with pytest.raises(TimelineError):
        load_timeline("2011-02-30  impossible\n")


def test_zero_events_single_slice():
    assert build_slices(EventTimeline(), A, B) == [Slice(0, A, B, "span start")]


def test_two_cuts_three_slices():
    tl = load_timeline("2007-06-29  iPhone\n2008-09-30  Android\n")
    slices = build_slices(tl, A, B)
    assert len(slices) == 3
    assert slices[1].label == "iPhone"


def test_events_outside_span_dropped(caplog):
    tl = load_timeline("2001-06-01  start\n2008-09-30  mid\n2020-01-01  late\n")
    assert len(build_slices(tl, A, B)) == 2
    assert "outside span" in caplog.text


def test_inverted_span():
    with pytest.raises(TimelineError):
        build_slices(EventTimeline(), B, A)


def test_assign_slice_boundaries():
    slices = build_slices(preset_timeline("webkit-figures"), A, B)
    assert assign_slice(slices[1].start, slices) == 1
    assert assign_slice(B - timedelta(seconds=1), slices) == 3
    assert assign_slice(A, slices) == 0
    with pytest.raises(TimelineError):
        assign_slice(A - timedelta(seconds=1), slices)
    with pytest.raises(TimelineError):
        assign_slice(B, slices)


cut_days = st.lists(st.integers(1, 2400), unique=True, max_size=8).map(sorted)


@given(cut_days, st.integers(0, 2405 * 86400 - 1))
def test_partition_property(days, offset):
    tl = EventTimeline(tuple((A + timedelta(days=d), f"e{d}") for d in days))
    end = A + timedelta(days=2405)
    slices = build_slices(tl, A, end)
    assert len(slices) == len(days) + 1
    assert all(a.end == b.start for a, b in zip(slices, slices[1:]))
    t = A + timedelta(seconds=offset)
    holders = [s.index for s in slices if t in s]
    assert holders == [assign_slice(t, slices)]


@given(cut_days, st.integers(1, 2400), st.lists(st.integers(0, 2404), min_size=2, max_size=10))
def test_refinement(days, extra, points):
    end = A + timedelta(days=2405)
    coarse = build_slices(EventTimeline(tuple((A + timedelta(days=d), "e") for d in days)), A, end)
    finer_days = sorted(set(days) | {extra})
    fine = build_slices(EventTimeline(tuple((A + timedelta(days=d), "e") for d in finer_days)), A, end)
    new_cut = A + timedelta(days=extra)
    ts = [A + timedelta(days=p) for p in points]
    for s, t in zip(ts, ts[1:]):
        # a pair not separated by the new cut is grouped the same way in both
        if (s < new_cut) == (t < new_cut):
            same_coarse = assign_slice(s, coarse) == assign_slice(t, coarse)
            same_fine = assign_slice(s, fine) == assign_slice(t, fine)
            assert same_coarse == same_fine
