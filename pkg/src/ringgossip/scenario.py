"""Declarative scenario files: network shape plus a schedule of events.

A scenario is JSON with a top-level schema version. Events are applied
at the start of their round, after the previous round's messages have
been delivered. Validation happens before round 0 and reports the
offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from ringgossip.gossip import FINGER_CYCLE, FINGER_STRATEGIES
from ringgossip.ring import RingConfig

SCHEMA_VERSION = 1

SPLIT = "split"
HEAL = "heal"
PUBLISH = "publish"
LOOKUP = "lookup"
KILL = "kill"
REVIVE = "revive"
TOPOLOGY_KINDS = {SPLIT, HEAL, KILL, REVIVE}
EVENT_KINDS = TOPOLOGY_KINDS | {PUBLISH, LOOKUP}

ID_MODES = ("dense", "hashed")


class ScenarioError(ValueError):
    """Scenario failed validation; message names the offending field."""

    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


@dataclass(frozen=True)
class ScheduledEvent:
    round: int
    kind: str
    fragments: Optional[list[list[int]]] = None
    partitions: Any = None  # list of partition ids, or "all"
    node: Optional[int] = None
    origin: Optional[int] = None
    name: Optional[str] = None
    ip: Optional[str] = None
    ttl: Optional[int] = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"round": self.round, "kind": self.kind}
        if self.fragments is not None:
            out["fragments"] = self.fragments
        if self.partitions is not None:
            out["partitions"] = self.partitions
        for key in ("node", "origin", "name", "ip", "ttl"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


@dataclass
class Scenario:
    n: int
    cfg: RingConfig
    id_mode: str = "dense"
    max_rounds: int = 200
    events: list[ScheduledEvent] = field(default_factory=list)
    baseline_fanout: Optional[int] = None
    finger_strategy: str = FINGER_CYCLE
    stop_when_converged: bool = True
    log_messages: bool = False

    @classmethod
    def build(
        cls,
        n: int,
        seed: int = 0,
        m: Optional[int] = None,
        id_mode: str = "dense",
        **kwargs: Any,
    ) -> "Scenario":
        """Convenience constructor; m defaults large enough for n ids.

        Dense mode packs ids 0..n-1, so the natural width is ceil(log2 n):
        the smallest ring where finger distances keep their exponential
        spacing. Hashed mode needs slack against collisions and defaults
        to 16 bits.
        """
        if m is None:
            m = max(2, (n - 1).bit_length()) if id_mode == "dense" else 16
        sc = cls(n=n, cfg=RingConfig(m=m, seed=seed), id_mode=id_mode, **kwargs)
        sc.validate()
        return sc

    def validate(self) -> None:
        if self.n < 1:
            raise ScenarioError("n", f"need at least one node, got {self.n}")
        if self.id_mode not in ID_MODES:
            raise ScenarioError("id_mode", f"must be one of {ID_MODES}")
        if self.id_mode == "dense" and self.n > self.cfg.size:
            raise ScenarioError("m", f"2^{self.cfg.m} ring cannot hold {self.n} dense ids")
        if self.max_rounds < 0:
            raise ScenarioError("max_rounds", "must be >= 0")
        if self.baseline_fanout is not None and self.baseline_fanout < 1:
            raise ScenarioError("baseline.fanout", "fanout must be >= 1")
        if self.finger_strategy not in FINGER_STRATEGIES:
            raise ScenarioError(
                "gossip.finger_strategy", f"must be one of {FINGER_STRATEGIES}"
            )
        last_round = 0
        for i, ev in enumerate(self.events):
            path = f"events[{i}]"
            if ev.kind not in EVENT_KINDS:
                raise ScenarioError(f"{path}.kind", f"unknown kind {ev.kind!r}")
            if ev.round < 1:
                raise ScenarioError(f"{path}.round", "events start at round 1")
            if ev.round < last_round:
                raise ScenarioError(f"{path}.round", "events must be sorted by round")
            last_round = ev.round
            if ev.kind == SPLIT:
                self._validate_split(ev, path)
            elif ev.kind == HEAL:
                if ev.partitions != "all" and not (
                    isinstance(ev.partitions, list)
                    and len(ev.partitions) >= 2
                    and all(isinstance(p, int) for p in ev.partitions)
                ):
                    raise ScenarioError(
                        f"{path}.partitions", 'must be "all" or a list of >= 2 partition ids'
                    )
            elif ev.kind == PUBLISH:
                for fld in ("node", "name", "ip", "ttl"):
                    if getattr(ev, fld) is None:
                        raise ScenarioError(f"{path}.{fld}", "required for publish")
                if ev.ttl is not None and ev.ttl < 1:
                    raise ScenarioError(f"{path}.ttl", "must be >= 1")
                if not ev.name:
                    raise ScenarioError(f"{path}.name", "must be non-empty")
            elif ev.kind == LOOKUP:
                for fld in ("origin", "name"):
                    if getattr(ev, fld) is None:
                        raise ScenarioError(f"{path}.{fld}", "required for lookup")
            elif ev.kind in (KILL, REVIVE):
                if ev.node is None:
                    raise ScenarioError(f"{path}.node", f"required for {ev.kind}")

    def _validate_split(self, ev: ScheduledEvent, path: str) -> None:
        if not ev.fragments or not isinstance(ev.fragments, list):
            raise ScenarioError(f"{path}.fragments", "split needs a list of fragments")
        if len(ev.fragments) < 2:
            raise ScenarioError(f"{path}.fragments", "split needs at least 2 fragments")
        seen: set[int] = set()
        for j, frag in enumerate(ev.fragments):
            if not frag:
                raise ScenarioError(f"{path}.fragments[{j}]", "fragment is empty")
            for node in frag:
                if not isinstance(node, int) or node < 0:
                    raise ScenarioError(
                        f"{path}.fragments[{j}]", f"bad node id {node!r}"
                    )
                if node in seen:
                    raise ScenarioError(
                        f"{path}.fragments[{j}]", f"fragments overlap at node {node}"
                    )
                seen.add(node)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "m": self.cfg.m,
            "seed": self.cfg.seed,
            "id_mode": self.id_mode,
            "max_rounds": self.max_rounds,
            "stop_when_converged": self.stop_when_converged,
            "events": [ev.to_json() for ev in self.events],
        }
        if self.baseline_fanout is not None:
            out["baseline"] = {"fanout": self.baseline_fanout}
        if self.finger_strategy != FINGER_CYCLE:
            out["gossip"] = {"finger_strategy": self.finger_strategy}
        if self.log_messages:
            out["log_messages"] = True
        return out

    @classmethod
    def from_json(cls, data: dict, seed_override: Optional[int] = None) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("$", "scenario must be a JSON object")
        schema = data.get("schema")
        if schema != SCHEMA_VERSION:
            raise ScenarioError("schema", f"expected {SCHEMA_VERSION}, got {schema!r}")
        n = _expect_int(data, "n", minimum=1)
        seed = seed_override if seed_override is not None else data.get("seed", 0)
        if not isinstance(seed, int):
            raise ScenarioError("seed", "must be an integer")
        id_mode = data.get("id_mode", "dense")
        m = data.get("m")
        if m is not None and not isinstance(m, int):
            raise ScenarioError("m", "must be an integer")
        events = [_parse_event(raw, i) for i, raw in enumerate(data.get("events", []))]
        baseline = data.get("baseline")
        fanout = None
        if baseline is not None:
            if not isinstance(baseline, dict) or "fanout" not in baseline:
                raise ScenarioError("baseline", 'must be an object like {"fanout": 3}')
            fanout = baseline["fanout"]
            if not isinstance(fanout, int):
                raise ScenarioError("baseline.fanout", "must be an integer")
        gossip = data.get("gossip", {})
        strategy = gossip.get("finger_strategy", FINGER_CYCLE) if isinstance(gossip, dict) else None
        if strategy is None:
            raise ScenarioError("gossip", "must be an object")
        return cls.build(
            n=n,
            seed=seed,
            m=m,
            id_mode=id_mode,
            max_rounds=data.get("max_rounds", 200),
            events=events,
            baseline_fanout=fanout,
            finger_strategy=strategy,
            stop_when_converged=data.get("stop_when_converged", True),
            log_messages=data.get("log_messages", False),
        )

    @classmethod
    def from_file(cls, path: str, seed_override: Optional[int] = None) -> "Scenario":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError("$", f"invalid JSON: {exc}") from exc
        return cls.from_json(data, seed_override=seed_override)


def _expect_int(data: dict, key: str, minimum: Optional[int] = None) -> int:
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioError(key, f"must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(key, f"must be >= {minimum}, got {value}")
    return value


def _parse_event(raw: Any, index: int) -> ScheduledEvent:
    path = f"events[{index}]"
    if not isinstance(raw, dict):
        raise ScenarioError(path, "event must be an object")
    kind = raw.get("kind")
    if kind not in EVENT_KINDS:
        raise ScenarioError(f"{path}.kind", f"unknown kind {kind!r}")
    rnd = raw.get("round")
    if not isinstance(rnd, int):
        raise ScenarioError(f"{path}.round", "must be an integer")
    known = {"round", "kind", "fragments", "partitions", "node", "origin", "name", "ip", "ttl"}
    for key in raw:
        if key not in known:
            raise ScenarioError(f"{path}.{key}", "unknown field")
    return ScheduledEvent(
        round=rnd,
        kind=kind,
        fragments=raw.get("fragments"),
        partitions=raw.get("partitions"),
        node=raw.get("node"),
        origin=raw.get("origin"),
        name=raw.get("name"),
        ip=raw.get("ip"),
        ttl=raw.get("ttl"),
    )
