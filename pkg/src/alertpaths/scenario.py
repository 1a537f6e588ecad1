"""Synthetic multi-step intrusion scenario plus path-quality metrics.

The generator emits a fast-format alert corpus modeling one external
attacker who sweeps the network with ICMP echo requests, fires repeated
remote-root exploit attempts at a handful of service hosts, gains root on
three of them, uploads a DDoS kit, then drives it through one master host
that commands the other two agents into flooding an external target.
Benign background noise is layered on top at a configurable rate.

Everything is deterministic per seed: two runs with the same seed and
profile produce byte-identical corpora and ground truth.  The default
profile is calibrated to the reference magnitudes the rest of the test
suite pins (1268 raw alerts reducing to 184 super-alerts).

Metrics: detect rate is the fraction of true attack paths that some
reported path covers; false path rate is the fraction of reported paths
covering no true path.  A reported path covers a true path when the true
(host, stage) step sequence appears in order among the reported nodes'
(destination host, stage) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from random import Random
from typing import Iterable, Sequence

from .alerts import AttackStage
from .paths import AttackPath


class EmptyTruth(ValueError):
    """Detect rate is undefined without any true paths."""


class InvalidProfile(ValueError):
    """Scenario profile fails validation."""


ATTACKER = "202.77.162.213"
MASTER = "172.16.115.20"
AGENT_A = "172.16.112.50"
AGENT_B = "172.16.112.10"
FLOOD_TARGET = "131.84.1.31"
VICTIMS = (MASTER, AGENT_A, AGENT_B)

_BASE_TIME = datetime(2000, 3, 7, 8, 0, 0, tzinfo=timezone.utc)

# Attack signatures.  One msg per phase; storms repeat the identical msg so
# reduction folds each storm into a single super-alert regardless of the
# similarity threshold in force.
PING_MSG = "ICMP PING"
EXPLOIT_MSG = "RPC sadmind query with root credentials attempt UDP"
GAP_MSG = "RSERVICES rsh root"
INSTALL_MSG = "POLICY suspicious file transfer - DDoS tool upload"
C2_MSG = "DDOS mstream client to handler"
LATERAL_MSG = "DDOS mstream handler to agent"
FLOOD_MSG = "DDOS mstream agent-to-target flood"

# Benign background chatter.  Every msg here matches a non-privilege rule in
# the default rule set, so noise can never mint cross-host anchors.
NOISE_MSGS = (
    "ICMP PING NMAP",
    "SCAN Squid Proxy attempt",
    "WEB-MISC http directory traversal attempt",
    "SQL injection attempt",
    "MISC large UDP packet transfer",
    "ICMP PING speedera",
    "WEB-CGI formmail access attempt",
    "SCAN UPnP service discover attempt",
)

_SIDS = {
    PING_MSG: (384, 5),
    EXPLOIT_MSG: (585, 3),
    GAP_MSG: (609, 2),
    INSTALL_MSG: (1287, 1),
    C2_MSG: (247, 3),
    LATERAL_MSG: (248, 3),
    FLOOD_MSG: (250, 2),
    NOISE_MSGS[0]: (469, 4),
    NOISE_MSGS[1]: (618, 2),
    NOISE_MSGS[2]: (1113, 1),
    NOISE_MSGS[3]: (1061, 1),
    NOISE_MSGS[4]: (521, 1),
    NOISE_MSGS[5]: (480, 3),
    NOISE_MSGS[6]: (884, 2),
    NOISE_MSGS[7]: (1384, 2),
}

# Narrative step indices used in alert labels.
STEP_SCAN = 0
STEP_EXPLOIT = 1
STEP_PRIVILEGE = 2
STEP_INSTALL = 3
STEP_COMMAND = 4
STEP_LATERAL = 5
STEP_FLOOD = 6
STEP_NOISE = -1


@dataclass(frozen=True)
class ScenarioProfile:
    """Generator knobs.

    ``hosts`` is the number of internal hosts the attacker sweeps,
    ``storm_size`` the ping repeat count per host, ``exploit_attempts`` the
    exploit repeat count per service host, and ``noise_rate`` the target
    fraction of noise lines in the corpus.
    """

    hosts: int = 128
    noise_rate: float = 0.2405
    storm_size: int = 7
    exploit_attempts: int = 6

    def validate(self) -> None:
        if not 8 <= self.hosts <= 500:
            raise InvalidProfile(f"hosts must be in [8, 500], got {self.hosts}")
        if not 0.0 <= self.noise_rate < 1.0:
            raise InvalidProfile(f"noise_rate must be in [0, 1), got {self.noise_rate}")
        if self.storm_size < 1:
            raise InvalidProfile(f"storm_size must be >= 1, got {self.storm_size}")
        if self.exploit_attempts < 1:
            raise InvalidProfile(f"exploit_attempts must be >= 1, got {self.exploit_attempts}")


@dataclass(frozen=True)
class TruePath:
    """One labeled attack path: per-step destination host and stage."""

    hosts: tuple[str, ...]
    stages: tuple[AttackStage, ...]


@dataclass(frozen=True)
class AlertLabel:
    attack_related: bool
    step: int


@dataclass
class ScenarioGroundTruth:
    true_paths: list[TruePath]
    alert_labels: dict[int, AlertLabel] = field(default_factory=dict)


@dataclass(frozen=True)
class _Event:
    time: datetime
    msg: str
    src: str
    dst: str
    proto: str
    src_port: int | None
    dst_port: int | None
    step: int


def _internal_hosts(count: int) -> list[str]:
    """The attacker-visible internal hosts: the three victims plus
    bystanders filled in from adjacent address space."""
    hosts = list(VICTIMS)
    octet3, octet4 = 112, 0
    while len(hosts) < count:
        octet4 += 1
        if octet4 > 254:
            octet3, octet4 = octet3 + 1, 1
        candidate = f"172.16.{octet3}.{octet4}"
        if candidate not in VICTIMS:
            hosts.append(candidate)
    return hosts


def _fast_line(time: datetime, msg: str, proto: str, src: str, sport: int | None,
               dst: str, dport: int | None) -> str:
    sid, rev = _SIDS[msg]
    src_part = src if sport is None else f"{src}:{sport}"
    dst_part = dst if dport is None else f"{dst}:{dport}"
    stamp = f"{time:%m/%d-%H:%M:%S}.{time.microsecond:06d}"
    return f"{stamp} [**] [1:{sid}:{rev}] {msg} [**] {{{proto}}} {src_part} -> {dst_part}"


def generate_scenario(
    seed: int, profile: ScenarioProfile | None = None
) -> tuple[list[str], ScenarioGroundTruth]:
    """Build the corpus (fast-format lines, chronological) and its ground
    truth.  Label keys are the ids a single-file ingest assigns (1-based
    line positions)."""
    if profile is None:
        profile = ScenarioProfile()
    profile.validate()
    rng = Random(seed)

    hosts = _internal_hosts(profile.hosts)
    bystanders = [h for h in hosts if h not in VICTIMS]
    sweep_order = sorted(hosts, key=lambda ip: tuple(int(p) for p in ip.split(".")))
    service_hosts = [MASTER, AGENT_A, AGENT_B, bystanders[0], bystanders[1]]

    events: list[_Event] = []

    def burst(start: datetime, count: int, spacing: float, msg: str, src: str, dst: str,
              proto: str, sport: int | None, dport: int | None, step: int) -> None:
        for i in range(count):
            events.append(_Event(start + timedelta(seconds=spacing * i), msg, src, dst,
                                 proto, sport, dport, step))

    # 1. ICMP sweep of every internal host.
    for i, host in enumerate(sweep_order):
        burst(_BASE_TIME + timedelta(seconds=10 * i), profile.storm_size, 1.0,
              PING_MSG, ATTACKER, host, "ICMP", None, None, STEP_SCAN)
    sweep_end = _BASE_TIME + timedelta(seconds=10 * (len(sweep_order) - 1) + profile.storm_size)

    # 2. Repeated remote-root exploit attempts against the service hosts.
    exploit_start = sweep_end + timedelta(seconds=600)
    for j, target in enumerate(service_hosts):
        burst(exploit_start + timedelta(seconds=60 * j), profile.exploit_attempts, 2.0,
              EXPLOIT_MSG, ATTACKER, target, "UDP", 32000 + j, 32773, STEP_EXPLOIT)

    # 3. Root shell on the three compromised hosts.
    gap_start = exploit_start + timedelta(seconds=60 * len(service_hosts) + 600)
    gap_times = {}
    for j, victim in enumerate(VICTIMS):
        start = gap_start + timedelta(seconds=150 * j)
        gap_times[victim] = start
        burst(start, 2, 2.0, GAP_MSG, ATTACKER, victim, "TCP", 1023, 514, STEP_PRIVILEGE)

    # 4. DDoS kit upload to each compromised host, then command traffic to
    #    the master, which relays to the two agents.
    install_start = gap_start + timedelta(seconds=150 * 3 + 600)
    for j, victim in enumerate(VICTIMS):
        burst(install_start + timedelta(seconds=150 * j), 3, 2.0,
              INSTALL_MSG, ATTACKER, victim, "TCP", 2200 + j, 23, STEP_INSTALL)
    c2_start = install_start + timedelta(seconds=150 * 3 + 600)
    burst(c2_start, 4, 2.0, C2_MSG, ATTACKER, MASTER, "TCP", 3000, 6723, STEP_COMMAND)
    lateral_start = c2_start + timedelta(seconds=300)
    burst(lateral_start, 3, 2.0, LATERAL_MSG, MASTER, AGENT_A, "UDP", 6723, 7983, STEP_LATERAL)
    burst(lateral_start + timedelta(seconds=150), 3, 2.0,
          LATERAL_MSG, MASTER, AGENT_B, "UDP", 6723, 7983, STEP_LATERAL)

    # 5. The agents flood the external target.
    flood_start = lateral_start + timedelta(seconds=600)
    burst(flood_start, 6, 3.0, FLOOD_MSG, AGENT_A, FLOOD_TARGET, "UDP", 9325, 80, STEP_FLOOD)
    burst(flood_start + timedelta(seconds=300), 6, 3.0,
          FLOOD_MSG, AGENT_B, FLOOD_TARGET, "UDP", 9325, 80, STEP_FLOOD)
    attack_end = flood_start + timedelta(seconds=300 + 18)

    # 6. Background noise, sized to hit the configured rate.
    attack_raw = len(events)
    noise_target = round(attack_raw * profile.noise_rate / (1.0 - profile.noise_rate))
    _add_noise(events, rng, bystanders, noise_target, attack_end + timedelta(seconds=900))

    events.sort(key=lambda e: e.time)
    lines = [
        _fast_line(e.time, e.msg, e.proto, e.src, e.src_port, e.dst, e.dst_port)
        for e in events
    ]
    labels = {
        line_id: AlertLabel(e.step != STEP_NOISE, e.step)
        for line_id, e in enumerate(events, start=1)
    }
    truth = ScenarioGroundTruth(
        true_paths=[
            TruePath(
                (MASTER, MASTER, MASTER, MASTER),
                (AttackStage.SCAN, AttackStage.EXPLOIT,
                 AttackStage.GET_ACCESS_PRIVILEGE, AttackStage.POST_ATTACK),
            ),
            TruePath(
                (MASTER, AGENT_A, AGENT_B),
                (AttackStage.GET_ACCESS_PRIVILEGE, AttackStage.POST_ATTACK,
                 AttackStage.POST_ATTACK),
            ),
            TruePath(
                (AGENT_B, AGENT_B, AGENT_B, FLOOD_TARGET),
                (AttackStage.SCAN, AttackStage.EXPLOIT,
                 AttackStage.GET_ACCESS_PRIVILEGE, AttackStage.POST_ATTACK),
            ),
        ],
        alert_labels=labels,
    )
    return lines, truth


def _add_noise(events: list[_Event], rng: Random, bystanders: Sequence[str],
               noise_target: int, noise_start: datetime) -> None:
    """Append background bursts totalling ``noise_target`` raw alerts.

    Noise sources are external addresses distinct from the attacker and
    never equal to a compromised host, so noise cannot extend an attack
    chain; destinations are bystanders, at most two noise events per host,
    so noise never raises a bystander's profile to victim levels.
    """
    if noise_target <= 0:
        return
    n_events = max(1, round(noise_target / 7.6))
    three_chain_sources = (3 * n_events) // 20
    pair_sources = n_events // 8
    while 3 * three_chain_sources + 2 * pair_sources > n_events:
        if pair_sources > 0:
            pair_sources -= 1
        else:
            three_chain_sources -= 1
    single_sources = n_events - 3 * three_chain_sources - 2 * pair_sources

    src_pools = ("202.77.163.%d", "194.27.251.%d", "196.37.75.%d")
    source_plan = (
        [3] * three_chain_sources + [2] * pair_sources + [1] * single_sources
    )

    sizes = [rng.randint(5, 9) for _ in range(n_events)]
    diff = noise_target - sum(sizes)
    idx = 0
    while diff > 0:
        sizes[idx % n_events] += 1
        idx, diff = idx + 1, diff - 1
    while diff < 0:
        if sizes[idx % n_events] > 1:
            sizes[idx % n_events] -= 1
            diff += 1
        idx += 1

    dst_load = {b: 0 for b in bystanders}
    micro = 0
    event_idx = 0
    for k, n_for_source in enumerate(source_plan):
        src = src_pools[k % len(src_pools)] % (10 + k)
        candidates = [b for b in bystanders if dst_load[b] < 2]
        dsts = rng.sample(candidates, n_for_source)
        for e, dst in enumerate(dsts):
            dst_load[dst] += 1
            msg = NOISE_MSGS[rng.randrange(len(NOISE_MSGS))]
            proto = "ICMP" if msg.startswith("ICMP") else ("UDP" if "UDP" in msg or "UPnP" in msg else "TCP")
            sport = None if proto == "ICMP" else rng.randint(1025, 65000)
            dport = None if proto == "ICMP" else rng.randint(1, 1024)
            start = noise_start + timedelta(seconds=53 * k + 617 * e)
            for i in range(sizes[event_idx]):
                micro += 1
                events.append(_Event(
                    start + timedelta(seconds=2 * i, microseconds=micro),
                    msg, src, dst, proto, sport, dport, STEP_NOISE,
                ))
            event_idx += 1


def path_matches(reported: AttackPath, true_path: TruePath) -> bool:
    """True when the true (host, stage) steps appear in order among the
    reported nodes' (destination, stage) pairs."""
    idx = 0
    for sa in reported.nodes:
        if idx == len(true_path.hosts):
            break
        if sa.dst_ip == true_path.hosts[idx] and sa.stage is true_path.stages[idx]:
            idx += 1
    return idx == len(true_path.hosts)


def detect_rate(reported: Sequence[AttackPath], truth: ScenarioGroundTruth) -> float:
    """Fraction of true paths covered by at least one reported path."""
    if not truth.true_paths:
        raise EmptyTruth("ground truth contains no paths")
    matched = sum(
        1 for tp in truth.true_paths if any(path_matches(rp, tp) for rp in reported)
    )
    return matched / len(truth.true_paths)


def false_path_rate(
    reported_top_k: Sequence[AttackPath], truth: ScenarioGroundTruth
) -> float:
    """1 - correct/reported over the given (already truncated) path list.
    An empty report has no wrong paths, so the rate is 0."""
    if not reported_top_k:
        return 0.0
    correct = sum(
        1
        for rp in reported_top_k
        if any(path_matches(rp, tp) for tp in truth.true_paths)
    )
    return 1.0 - correct / len(reported_top_k)


def format_truth_lines(truth: ScenarioGroundTruth) -> list[str]:
    """Serialize true paths: ``path=<host,...> stages=<s,...>`` per line."""
    return [
        "path=" + ",".join(tp.hosts) + " stages=" + ",".join(s.short_name for s in tp.stages)
        for tp in truth.true_paths
    ]


def parse_truth_lines(lines: Iterable[str]) -> ScenarioGroundTruth:
    """Parse a ground-truth file (true paths only; labels stay empty)."""
    paths = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = dict(part.split("=", 1) for part in stripped.split() if "=" in part)
        if "path" not in fields or "stages" not in fields:
            raise ValueError(f"truth line {line_no}: expected 'path=... stages=...'")
        hosts = tuple(fields["path"].split(","))
        stages = tuple(AttackStage.from_name(name) for name in fields["stages"].split(","))
        if len(hosts) != len(stages):
            raise ValueError(f"truth line {line_no}: {len(hosts)} hosts vs {len(stages)} stages")
        paths.append(TruePath(hosts, stages))
    return ScenarioGroundTruth(true_paths=paths)
