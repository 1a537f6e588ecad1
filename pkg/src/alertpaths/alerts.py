"""Alert record types and parsers for the two supported input formats.

Supported formats:

* ``fast`` -- classic one-line IDS "fast" alert output::

      MM/DD-HH:MM:SS.ffffff [**] [gid:sid:rev] MSG [**] \
          [Classification: ...] [Priority: N] {PROTO} SRC[:SPORT] -> DST[:DPORT]

  The Classification and Priority bracket groups are optional, as are the
  ports.  The format carries no year, so parsing takes a base year
  (default 2000).  All timestamps are interpreted as UTC.

* ``records`` -- normalized line-delimited records: tab-separated
  ``key=value`` pairs with keys exactly ``ts, msg, sip, sport, dip, dport,
  proto, dgmlen, sensor``.  Absent optional fields are omitted; the msg
  value is double-quoted and backslash-escaped.  Host-based alerts simply
  omit ``sip``/``sport``.
"""

from __future__ import annotations

import ipaddress
import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import IntEnum
from typing import Iterable


class MalformedLine(ValueError):
    """Input line violates the alert grammar."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class UnknownField(MalformedLine):
    """Normalized record contains a key outside the documented set."""

    def __init__(self, name: str):
        super().__init__(f"unknown field: {name!r}")
        self.name = name


class UnsupportedFormat(ValueError):
    """No parser is registered for the requested input format."""


class AttackStage(IntEnum):
    """Four-phase attack taxonomy.  The integer value is the stage base score."""

    SCAN = 1
    EXPLOIT = 2
    GET_ACCESS_PRIVILEGE = 3
    POST_ATTACK = 4

    @property
    def score(self) -> int:
        return int(self)

    @property
    def short_name(self) -> str:
        return _STAGE_SHORT[self]

    @classmethod
    def from_name(cls, name: str) -> "AttackStage":
        try:
            return _STAGE_BY_NAME[name.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown attack stage name: {name!r}") from None


_STAGE_SHORT = {
    AttackStage.SCAN: "scan",
    AttackStage.EXPLOIT: "exploit",
    AttackStage.GET_ACCESS_PRIVILEGE: "gap",
    AttackStage.POST_ATTACK: "post",
}
_STAGE_BY_NAME = {short: stage for stage, short in _STAGE_SHORT.items()}


@dataclass(frozen=True)
class RawAlert:
    """One sensor alert.

    ``dst_ip`` is always present.  Host-based alerts (EDR, host IDS) carry no
    source address: ``src_ip``/``src_port`` are None.  ``id`` is assigned at
    ingest, unique and strictly increasing in ingest order; alerts built
    directly by a parser carry id 0 until ingest assigns one.
    """

    id: int
    timestamp: datetime
    msg: str
    dst_ip: str
    src_ip: str | None = None
    src_port: int | None = None
    dst_port: int | None = None
    proto: str = ""
    dgmlen: int | None = None
    sensor: str = ""


@dataclass(frozen=True)
class IngestDiagnostic:
    """One skipped input line: 1-based line number plus the parser's reason."""

    line_no: int
    reason: str


@dataclass
class IngestResult:
    alerts: list[RawAlert]
    diagnostics: list[IngestDiagnostic]


_FAST_RE = re.compile(
    r"^(?P<mon>\d{2})/(?P<day>\d{2})-(?P<hh>\d{2}):(?P<mm>\d{2}):(?P<ss>\d{2})\.(?P<us>\d{6})"
    r"\s+\[\*\*\]\s+\[\d+:\d+:\d+\]\s+(?P<msg>.*?)\s+\[\*\*\]"
    r"(?:\s+\[Classification:[^\]]*\])?"
    r"(?:\s+\[Priority:\s*\d+\])?"
    r"\s+\{(?P<proto>[^}]+)\}\s+(?P<src>\S+)\s+->\s+(?P<dst>\S+)\s*$"
)


def _split_endpoint(text: str) -> tuple[str, int | None]:
    """Split ``ADDR`` or ``ADDR:PORT`` into a canonical IP string and port.

    A bare IPv6 address is accepted whole; a trailing ``:digits`` is only
    treated as a port when the remainder parses as an address.
    """
    try:
        return str(ipaddress.ip_address(text)), None
    except ValueError:
        pass
    host, sep, port_text = text.rpartition(":")
    if not sep or not port_text.isdigit():
        raise MalformedLine(f"bad address {text!r}")
    try:
        ip = str(ipaddress.ip_address(host))
    except ValueError:
        raise MalformedLine(f"bad address {text!r}") from None
    port = int(port_text)
    if not 0 <= port <= 65535:
        raise MalformedLine(f"port out of range: {port}")
    return ip, port


def parse_fast_line(line: str, base_year: int = 2000, sensor: str = "") -> RawAlert:
    """Parse one fast-format alert line into a RawAlert (id 0).

    Raises MalformedLine for any grammar violation; fields are never
    silently dropped or defaulted to zero.
    """
    m = _FAST_RE.match(line.strip())
    if m is None:
        raise MalformedLine("line does not match fast-alert grammar")
    msg = m.group("msg").strip()
    if not msg:
        raise MalformedLine("empty msg")
    try:
        ts = datetime(
            base_year,
            int(m.group("mon")),
            int(m.group("day")),
            int(m.group("hh")),
            int(m.group("mm")),
            int(m.group("ss")),
            int(m.group("us")),
            tzinfo=timezone.utc,
        )
    except ValueError as exc:
        raise MalformedLine(f"bad timestamp: {exc}") from None
    src_ip, src_port = _split_endpoint(m.group("src"))
    dst_ip, dst_port = _split_endpoint(m.group("dst"))
    return RawAlert(
        id=0,
        timestamp=ts,
        msg=msg,
        dst_ip=dst_ip,
        src_ip=src_ip,
        src_port=src_port,
        dst_port=dst_port,
        proto=m.group("proto"),
        sensor=sensor,
    )


_RECORD_KEYS = ("ts", "msg", "sip", "sport", "dip", "dport", "proto", "dgmlen", "sensor")
_MSG_ESCAPES = {"\\": "\\\\", '"': '\\"', "\t": "\\t", "\n": "\\n"}
_MSG_UNESCAPES = {"\\": "\\", '"': '"', "t": "\t", "n": "\n"}


def _escape_msg(msg: str) -> str:
    out = []
    for ch in msg:
        out.append(_MSG_ESCAPES.get(ch, ch))
    return '"' + "".join(out) + '"'


def _unescape_msg(value: str) -> str:
    if len(value) < 2 or not (value.startswith('"') and value.endswith('"')):
        raise MalformedLine("msg value must be double-quoted")
    body = value[1:-1]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == '"':
            raise MalformedLine("unescaped quote inside msg")
        if ch == "\\":
            i += 1
            if i >= len(body) or body[i] not in _MSG_UNESCAPES:
                raise MalformedLine("bad escape sequence in msg")
            out.append(_MSG_UNESCAPES[body[i]])
        else:
            out.append(ch)
        i += 1
    return "".join(out)


def _parse_port(value: str, key: str) -> int:
    if not value.isdigit():
        raise MalformedLine(f"{key} must be an integer: {value!r}")
    port = int(value)
    if not 0 <= port <= 65535:
        raise MalformedLine(f"{key} out of range: {port}")
    return port


def parse_record_line(line: str) -> RawAlert:
    """Parse one normalized record line into a RawAlert (id 0)."""
    fields: dict[str, str] = {}
    for chunk in line.rstrip("\n").split("\t"):
        key, sep, value = chunk.partition("=")
        if not sep:
            raise MalformedLine(f"field without '=': {chunk!r}")
        if key not in _RECORD_KEYS:
            raise UnknownField(key)
        if key in fields:
            raise MalformedLine(f"duplicate field: {key!r}")
        fields[key] = value

    for required in ("ts", "msg", "dip"):
        if required not in fields:
            raise MalformedLine(f"missing required field: {required!r}")

    msg = _unescape_msg(fields["msg"]).strip()
    if not msg:
        raise MalformedLine("empty msg")
    try:
        ts = datetime.fromisoformat(fields["ts"])
    except ValueError:
        raise MalformedLine(f"bad ts: {fields['ts']!r}") from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)

    try:
        dst_ip = str(ipaddress.ip_address(fields["dip"]))
        src_ip = str(ipaddress.ip_address(fields["sip"])) if "sip" in fields else None
    except ValueError as exc:
        raise MalformedLine(f"bad address: {exc}") from None

    src_port = _parse_port(fields["sport"], "sport") if "sport" in fields else None
    dst_port = _parse_port(fields["dport"], "dport") if "dport" in fields else None
    if src_port is not None and src_ip is None:
        raise MalformedLine("sport given without sip")

    dgmlen: int | None = None
    if "dgmlen" in fields:
        if not fields["dgmlen"].isdigit():
            raise MalformedLine(f"dgmlen must be an integer: {fields['dgmlen']!r}")
        dgmlen = int(fields["dgmlen"])

    return RawAlert(
        id=0,
        timestamp=ts,
        msg=msg,
        dst_ip=dst_ip,
        src_ip=src_ip,
        src_port=src_port,
        dst_port=dst_port,
        proto=fields.get("proto", ""),
        dgmlen=dgmlen,
        sensor=fields.get("sensor", ""),
    )


def format_record_line(alert: RawAlert) -> str:
    """Serialize to the normalized record format.  Round-trips through
    parse_record_line for every field except id (not part of the format)."""
    parts = [f"ts={alert.timestamp.isoformat()}", f"msg={_escape_msg(alert.msg)}"]
    if alert.src_ip is not None:
        parts.append(f"sip={alert.src_ip}")
    if alert.src_port is not None:
        parts.append(f"sport={alert.src_port}")
    parts.append(f"dip={alert.dst_ip}")
    if alert.dst_port is not None:
        parts.append(f"dport={alert.dst_port}")
    if alert.proto:
        parts.append(f"proto={alert.proto}")
    if alert.dgmlen is not None:
        parts.append(f"dgmlen={alert.dgmlen}")
    if alert.sensor:
        parts.append(f"sensor={alert.sensor}")
    return "\t".join(parts)


FORMATS = ("fast", "records")


def ingest(
    lines: Iterable[str],
    fmt: str,
    base_year: int = 2000,
    sensor: str = "",
    start_id: int = 1,
)-> IngestResult:
    """Parse a stream of lines, assigning sequential ids in file order.

    Malformed lines become diagnostics with their 1-based line number and
    are skipped; they never abort the ingest.  Blank lines are ignored.
    """
    if fmt == "fast":
        def parse(line: str) -> RawAlert:
            return parse_fast_line(line, base_year=base_year, sensor=sensor)
    elif fmt == "records":
        parse = parse_record_line
    else:
        raise UnsupportedFormat(f"unsupported format: {fmt!r} (expected one of {FORMATS})")

    alerts: list[RawAlert] = []
    diagnostics: list[IngestDiagnostic] = []
    next_id = start_id
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            alert = parse(line)
        except MalformedLine as exc:
            diagnostics.append(IngestDiagnostic(line_no, exc.reason))
            continue
        alerts.append(replace(alert, id=next_id))
        next_id += 1
    return IngestResult(alerts, diagnostics)
