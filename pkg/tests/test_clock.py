import pytest
from hypothesis import given
from hypothesis import strategies as st

from aptbot.clock import ClockParseError, format_clock, parse_clock


def test_parse_evening_time():
    assert parse_clock("9:56pm") == 21 * 60 + 56


def test_parse_midnight_and_noon():
    assert parse_clock("12:00am") == 0
    assert parse_clock("12:00pm") == 720
    assert parse_clock("12:30am") == 30


def test_parse_is_case_and_space_tolerant():
    assert parse_clock("9:56PM") == parse_clock("9:56pm")
    assert parse_clock("9:56 pm") == parse_clock("9:56pm")
    assert parse_clock("  9:56pm  ") == parse_clock("9:56pm")


def test_format_has_no_leading_zero_and_pads_minutes():
    assert format_clock(1316) == "9:56pm"
    assert format_clock(0) == "12:00am"
    assert format_clock(720) == "12:00pm"
    assert format_clock(65) == "1:05am"


@pytest.mark.parametrize(
    "bad",
    ["", "956pm", "9:56", "9:5pm", "13:00pm", "0:30am", "9:60pm", "nine:56pm", "9:56xm"],
)
def test_parse_rejects_malformed_text(bad):
    with pytest.raises(ClockParseError):
        parse_clock(bad)


def test_format_rejects_out_of_range():
    with pytest.raises(ValueError):
        format_clock(1440)
    with pytest.raises(ValueError):
        format_clock(-1)


@given(st.integers(min_value=0, max_value=1439))
def test_round_trip_every_minute(minutes):
    assert parse_clock(format_clock(minutes)) == minutes
