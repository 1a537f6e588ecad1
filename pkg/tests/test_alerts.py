import random
from dataclasses import replace
from datetime import datetime, timedelta, timezone

import pytest

from alertpaths import (
    MalformedLine,
    RawAlert,
    UnknownField,
    UnsupportedFormat,
    format_record_line,
    ingest,
    parse_fast_line,
    parse_record_line,
)

FAST_LINE = "01/07-12:00:01.000000 [**] [1:384:5] ICMP PING [**] {ICMP} 202.77.162.213 -> 172.16.115.20"


def test_parse_fast_line_basic_fields():
    alert = parse_fast_line(FAST_LINE)
    assert alert.msg == "ICMP PING"
    assert alert.proto == "ICMP"
    assert alert.src_ip == "202.77.162.213"
    assert alert.dst_ip == "172.16.115.20"
    assert alert.src_port is None
    assert alert.dst_port is None
    assert alert.timestamp == datetime(2000, 1, 7, 12, 0, 1, tzinfo=timezone.utc)


def test_parse_fast_line_with_ports():
    line = "01/07-12:00:01.500000 [**] [1:100:1] SHELL attempt [**] {TCP} 10.0.0.1:4444 -> 10.0.0.2:111"
    alert = parse_fast_line(line)
    assert alert.src_port == 4444
    assert alert.dst_port == 111


def test_parse_fast_line_optional_classification_priority():
    line = ("01/07-12:00:01.000000 [**] [1:384:5] ICMP PING [**] "
            "[Classification: Misc activity] [Priority: 3] {ICMP} 1.2.3.4 -> 5.6.7.8")
    alert = parse_fast_line(line)
    assert alert.msg == "ICMP PING"
    assert alert.dst_ip == "5.6.7.8"


def test_parse_fast_line_missing_arrow_is_malformed():
    with pytest.raises(MalformedLine):
        parse_fast_line("01/07-12:00:01.000000 [**] [1:384:5] ICMP PING [**] {ICMP} 1.2.3.4 5.6.7.8")


def test_parse_fast_line_bad_date_is_malformed():
    with pytest.raises(MalformedLine):
        parse_fast_line(FAST_LINE.replace("01/07", "02/30"))


def test_parse_fast_line_base_year():
    alert = parse_fast_line(FAST_LINE, base_year=1999)
    assert alert.timestamp.year == 1999


def test_parse_record_line_host_based_minimal():
    alert = parse_record_line('ts=2000-03-07T08:00:00+00:00\tmsg="disk policy event"\tdip=10.0.0.5')
    assert alert.src_ip is None
    assert alert.src_port is None
    assert alert.dst_ip == "10.0.0.5"
    assert alert.msg == "disk policy event"


def test_parse_record_line_all_fields():
    line = ('ts=2000-03-07T08:00:00.000123+00:00\tmsg="SQL injection attempt"\tsip=10.1.1.1\t'
            "sport=5000\tdip=10.2.2.2\tdport=80\tproto=TCP\tdgmlen=512\tsensor=edr-7")
    alert = parse_record_line(line)
    assert alert.src_port == 5000
    assert alert.dst_port == 80
    assert alert.dgmlen == 512
    assert alert.sensor == "edr-7"
    assert alert.timestamp.microsecond == 123


def test_parse_record_line_empty_msg_is_malformed():
    with pytest.raises(MalformedLine):
        parse_record_line('ts=2000-03-07T08:00:00+00:00\tmsg="   "\tdip=10.0.0.5')


def test_parse_record_line_unknown_field():
    with pytest.raises(UnknownField):
        parse_record_line('ts=2000-03-07T08:00:00+00:00\tmsg="x y"\tdip=10.0.0.5\tcolor=red')


def test_parse_record_line_sport_without_sip():
    with pytest.raises(MalformedLine):
        parse_record_line('ts=2000-03-07T08:00:00+00:00\tmsg="x y"\tsport=80\tdip=10.0.0.5')


def test_parse_record_line_port_range():
    with pytest.raises(MalformedLine):
        parse_record_line('ts=2000-03-07T08:00:00+00:00\tmsg="x"\tsip=1.1.1.1\tsport=70000\tdip=10.0.0.5')


def test_record_round_trip_random_alerts():
    rng = random.Random(99)
    base = datetime(2000, 3, 7, tzinfo=timezone.utc)
    msgs = ['quote " inside', "back\\slash", "tab\there", "plain msg", "newline\nmsg"]
    for i in range(200):
        alert = RawAlert(
            id=0,
            timestamp=base + timedelta(seconds=rng.randint(0, 10**6), microseconds=rng.randint(0, 999999)),
            msg=rng.choice(msgs),
            dst_ip=f"10.0.{rng.randint(0, 255)}.{rng.randint(1, 254)}",
            src_ip=None if rng.random() < 0.3 else f"192.168.1.{rng.randint(1, 254)}",
            dst_port=None if rng.random() < 0.5 else rng.randint(0, 65535),
            proto=rng.choice(["TCP", "UDP", "ICMP", ""]),
            dgmlen=None if rng.random() < 0.5 else rng.randint(20, 1500),
            sensor=rng.choice(["", "ids-1", "edr"]),
        )
        if alert.src_ip is None:
            alert = replace(alert, src_port=None)
        elif rng.random() < 0.5:
            alert = replace(alert, src_port=rng.randint(0, 65535))
        assert parse_record_line(format_record_line(alert)) == alert


def test_ingest_empty_stream():
    result = ingest([], "fast")
    assert result.alerts == []
    assert result.diagnostics == []


def test_ingest_preserves_order_and_assigns_increasing_ids():
    lines = [FAST_LINE.replace("12:00:01", f"12:00:{s:02d}") for s in range(5)]
    result = ingest(lines, "fast")
    assert [a.id for a in result.alerts] == [1, 2, 3, 4, 5]
    assert [a.timestamp for a in result.alerts] == sorted(a.timestamp for a in result.alerts)


def test_ingest_1268_well_formed_lines():
    lines = [FAST_LINE.replace("12:00:01", f"{12 + s // 3600:02d}:{(s // 60) % 60:02d}:{s % 60:02d}")
             for s in range(1268)]
    result = ingest(lines, "fast")
    assert len(result.alerts) == 1268
    assert not result.diagnostics


def test_ingest_partial_failure():
    lines = [FAST_LINE, "garbage line", FAST_LINE, FAST_LINE]
    result = ingest(lines, "fast")
    assert len(result.alerts) == 3
    assert len(result.diagnostics) == 1
    assert result.diagnostics[0].line_no == 2


def test_ingest_skips_blank_lines_silently():
    result = ingest([FAST_LINE, "", "   ", FAST_LINE], "fast")
    assert len(result.alerts) == 2
    assert not result.diagnostics


def test_ingest_unsupported_format():
    with pytest.raises(UnsupportedFormat):
        ingest([FAST_LINE], "csv")


def test_ingest_records_format():
    lines = [format_record_line(parse_fast_line(FAST_LINE))]
    result = ingest(lines, "records")
    assert len(result.alerts) == 1
    assert result.alerts[0].msg == "ICMP PING"
    assert result.alerts[0].id == 1
