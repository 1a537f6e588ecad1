"""Attack-stage assignment: ordered keyword rules with a centroid fallback.

Rules are matched against the lowercased msg, first match wins.  A
single-word pattern must match a whole word (so ``rsh`` does not fire on
"harsh"); multi-word patterns match as substrings.  Msgs matching no rule
fall back to the stage whose rule-pattern centroid vector is most similar
to the msg embedding, so classification is total.

An optional override file replaces the built-in rules: one rule per line,
``stage<TAB>pattern`` with stages named scan|exploit|gap|post.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .alerts import AttackStage, RawAlert
from .embedding import HashingEmbedder, MsgVector, similarity


@dataclass(frozen=True)
class StageRule:
    pattern: str
    stage: AttackStage


# Ordering matters: specific exploitation keywords come before the
# access-privilege block (so "shellcode" never reads as a shell login),
# and the generic "attempt" keyword comes last so that signatures like
# "sadmind query with root credentials attempt" classify as exploitation
# rather than falling through to the centroid.
_DEFAULT_PATTERNS: tuple[tuple[str, AttackStage], ...] = (
    ("scan", AttackStage.SCAN),
    ("portscan", AttackStage.SCAN),
    ("ping", AttackStage.SCAN),
    ("sweep", AttackStage.SCAN),
    ("probe", AttackStage.SCAN),
    ("version", AttackStage.SCAN),
    ("vulnerability", AttackStage.SCAN),
    ("social engineering", AttackStage.SCAN),
    ("reconnaissance", AttackStage.SCAN),
    ("exploit", AttackStage.EXPLOIT),
    ("overflow", AttackStage.EXPLOIT),
    ("injection", AttackStage.EXPLOIT),
    ("malicious", AttackStage.EXPLOIT),
    ("shellcode", AttackStage.EXPLOIT),
    ("login", AttackStage.GET_ACCESS_PRIVILEGE),
    ("rsh", AttackStage.GET_ACCESS_PRIVILEGE),
    ("ssh", AttackStage.GET_ACCESS_PRIVILEGE),
    ("rdp", AttackStage.GET_ACCESS_PRIVILEGE),
    ("shell connect", AttackStage.GET_ACCESS_PRIVILEGE),
    ("shell", AttackStage.GET_ACCESS_PRIVILEGE),
    ("root-access", AttackStage.GET_ACCESS_PRIVILEGE),
    ("root access", AttackStage.GET_ACCESS_PRIVILEGE),
    ("transfer", AttackStage.POST_ATTACK),
    ("exfiltration", AttackStage.POST_ATTACK),
    ("command&control", AttackStage.POST_ATTACK),
    ("command and control", AttackStage.POST_ATTACK),
    ("ddos", AttackStage.POST_ATTACK),
    ("handler", AttackStage.POST_ATTACK),
    ("attempt", AttackStage.EXPLOIT),
)

_WORDISH_RE = re.compile(r"^[a-z0-9]+$")


def _compile_matcher(pattern: str) -> re.Pattern[str]:
    lowered = pattern.lower()
    if _WORDISH_RE.match(lowered):
        return re.compile(r"(?<![a-z0-9])" + re.escape(lowered) + r"(?![a-z0-9])")
    return re.compile(re.escape(lowered))


class StageRuleSet:
    """Ordered stage rules plus one embedding centroid per stage.

    Immutable after construction; every stage must be covered by at least
    one rule so the centroid fallback is always defined.
    """

    def __init__(self, rules: Sequence[StageRule], embedder: HashingEmbedder | None = None):
        self.rules: tuple[StageRule, ...] = tuple(rules)
        self.embedder = embedder if embedder is not None else HashingEmbedder()
        covered = {rule.stage for rule in self.rules}
        missing = [stage.short_name for stage in AttackStage if stage not in covered]
        if missing:
            raise ValueError(f"no rule for stage(s): {', '.join(missing)}")
        self._matchers = [(_compile_matcher(rule.pattern), rule.stage) for rule in self.rules]
        self.centroids: dict[AttackStage, MsgVector] = self._build_centroids()

    def _build_centroids(self) -> dict[AttackStage, MsgVector]:
        centroids = {}
        for stage in AttackStage:
            vectors = [
                self.embedder.embed(rule.pattern).values
                for rule in self.rules
                if rule.stage == stage
            ]
            mean = np.mean(vectors, axis=0)
            centroids[stage] = MsgVector(mean, float(np.linalg.norm(mean)))
        return centroids

    def stage_of(self, msg: str) -> AttackStage:
        lowered = msg.lower()
        for matcher, stage in self._matchers:
            if matcher.search(lowered):
                return stage
        # no rule matched: nearest centroid, ties broken by stage order
        vec = self.embedder.embed(msg)
        best_stage = AttackStage.SCAN
        best_sim = -2.0
        for stage in AttackStage:
            sim = similarity(vec, self.centroids[stage])
            if sim > best_sim:
                best_stage, best_sim = stage, sim
        return best_stage


def default_rules(embedder: HashingEmbedder | None = None) -> StageRuleSet:
    """The built-in taxonomy rule set."""
    return StageRuleSet([StageRule(p, s) for p, s in _DEFAULT_PATTERNS], embedder)


def load_rules(lines: Iterable[str], embedder: HashingEmbedder | None = None) -> StageRuleSet:
    """Load an override rule file: ``stage<TAB>pattern`` per line.

    Blank lines and lines starting with ``#`` are skipped.  Every stage
    must end up with at least one rule.
    """
    rules = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        stage_name, sep, pattern = line.rstrip("\n").partition("\t")
        if not sep or not pattern.strip():
            raise ValueError(f"rule line {line_no}: expected 'stage<TAB>pattern'")
        rules.append(StageRule(pattern.strip(), AttackStage.from_name(stage_name)))
    return StageRuleSet(rules, embedder)


def classify(alert: RawAlert, rules: StageRuleSet) -> AttackStage:
    """Stage of the first matching rule, else the nearest-centroid stage."""
    return rules.stage_of(alert.msg)


def classify_super_alerts(super_alerts: Sequence, rules: StageRuleSet) -> list:
    """Return copies of the given super-alerts with ``stage`` filled in from
    each one's representative msg."""
    return [replace(sa, stage=rules.stage_of(sa.representative.msg)) for sa in super_alerts]
