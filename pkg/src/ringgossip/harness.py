"""Round-based deterministic scheduler, invariant checker, and metrics.

Each round runs a fixed phase order:

1. deliver messages sent last round (seeded shuffle of delivery order)
2. apply scheduled events (splits, heals, kills, revives, writes, lookups)
3. stabilize successors/predecessors and repair fingers
4. select gossip targets and emit messages (plus record anti-entropy)
5. detect cross-partition structure links
6. merger step (adopt minimum visible partition id)
7. decay record ttls
8. metrics, convergence flags, invariant checks

Identical (scenario, seed) pairs replay to byte-identical event logs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ringgossip import dns as dns_ops
from ringgossip import scenario as sc
from ringgossip.faults import FaultModel, GodView
from ringgossip.gossip import (
    GossipMessage,
    detect_cross_partition,
    make_message,
    receive_gossip,
    select_targets,
)
from ringgossip.idset import IdSet
from ringgossip.merger import assign_fragment_ids, merger_step, partitions_converged
from ringgossip.node import (
    NodeState,
    build_initial_state,
    repair_fingers,
    stabilize,
)
from ringgossip.ring import NodeId, RingConfig, fnv1a_64, hash_name
from ringgossip.scenario import Scenario, ScenarioError, ScheduledEvent

GOSSIP_KIND = "gossip"
RECORD_KIND = "records"

VV_MONOTONIC = "vv_monotonic"
PARTITION_MIN = "partition_min"
RING_CYCLE = "ring_cycle"
FINGER_VALID = "finger_valid"

FINGER_GRACE_ROUNDS = 2
CONVERGED_STREAK_TO_STOP = 3


@dataclass(frozen=True)
class Violation:
    round: int
    invariant: str
    node: Optional[NodeId]
    detail: str

    def to_json(self) -> dict:
        return {
            "type": "violation",
            "round": self.round,
            "invariant": self.invariant,
            "node": self.node,
            "detail": self.detail,
        }


@dataclass
class RoundMetrics:
    round: int
    gossip_msgs_sent: int = 0
    record_msgs_sent: int = 0
    baseline_msgs_sent: int = 0
    components: int = 0
    converged_components: Dict[int, bool] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)
    merge_decisions: int = 0

    @property
    def all_converged(self) -> bool:
        return all(self.converged_components.values()) if self.converged_components else False

    def csv_row(self) -> str:
        return ",".join(
            str(v)
            for v in (
                self.round,
                self.gossip_msgs_sent,
                self.record_msgs_sent,
                self.baseline_msgs_sent,
                self.components,
                "true" if self.all_converged else "false",
                len(self.violations),
            )
        )


METRICS_CSV_HEADER = "round,gossip_sent,record_sent,baseline_sent,components,converged,violations"


def metrics_to_csv(series: List[RoundMetrics]) -> str:
    return "\n".join([METRICS_CSV_HEADER] + [row.csv_row() for row in series]) + "\n"


def log_line(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


class InvariantChecker:
    """Evaluates the four protocol invariants every round.

    Version-vector monotonicity and finger validity are checked always
    (fingers with a short grace window for post-merge churn); partition
    minimality and the single successor cycle only make sense once a
    component has settled, so they are gated on two consecutive rounds
    of convergence.
    """

    def __init__(self, states: Dict[NodeId, NodeState], fault: FaultModel):
        self.prev_vv: Dict[NodeId, Dict[NodeId, int]] = {
            n: dict(st.vv.entries) for n, st in states.items()
        }
        self.finger_stale_age: Dict[Tuple[NodeId, int], int] = {}
        self.expected_min_pid: Dict[int, int] = {}
        self.snapshot_epoch(states, fault)

    def snapshot_epoch(self, states: Dict[NodeId, NodeState], fault: FaultModel) -> None:
        """Record, per component, the minimum partition id present now.

        Called at start and after every topology event: the minimum of
        the ids present when a component forms is exactly where the
        merge rule must take every member.
        """
        self.expected_min_pid = {}
        for comp in fault.components():
            members = comp.to_sorted_list()
            self.expected_min_pid[comp.bits] = min(
                states[n].partition_id for n in members
            )
        self.finger_stale_age = {}

    def check_round(
        self,
        round_no: int,
        states: Dict[NodeId, NodeState],
        fault: FaultModel,
        view: GodView,
        components: List[IdSet],
        converged_now: Dict[int, bool],
        converged_prev: Dict[int, bool],
        churn: bool = False,
    ) -> List[Violation]:
        violations: List[Violation] = []
        self._check_vv(round_no, states, violations)
        self._check_fingers(round_no, states, fault, view, violations, churn)
        for comp in components:
            label = min(comp)
            if converged_now.get(label) and converged_prev.get(label):
                self._check_partition_min(round_no, states, comp, violations)
                self._check_ring_cycle(round_no, states, comp, violations)
        self.prev_vv = {n: dict(st.vv.entries) for n, st in states.items()}
        return violations

    def _check_vv(
        self, round_no: int, states: Dict[NodeId, NodeState], violations: List[Violation]
    ) -> None:
        for node_id, st in states.items():
            before = self.prev_vv.get(node_id, {})
            for peer, counter in before.items():
                if st.vv.get(peer) < counter:
                    violations.append(
                        Violation(
                            round_no,
                            VV_MONOTONIC,
                            node_id,
                            f"vv[{peer}] fell {counter} -> {st.vv.get(peer)}",
                        )
                    )

    def _check_fingers(
        self,
        round_no: int,
        states: Dict[NodeId, NodeState],
        fault: FaultModel,
        view: GodView,
        violations: List[Violation],
        churn: bool,
    ) -> None:
        """Fingers must point at reachable same-partition peers.

        Rounds where merge decisions fired anywhere are churn: partition
        adoption is still cascading and repairs chase it, so the
        staleness clock pauses. Once merging quiesces a finger gets the
        short grace window to repair before it is reported.
        """
        still_bad: Dict[Tuple[NodeId, int], int] = {}
        for node_id, st in states.items():
            if not st.active:
                continue
            for entry in st.fingers:
                t = entry.target
                if t is None or t == node_id:
                    continue
                ok = (
                    fault.is_active(t)
                    and fault.reachable(node_id, t)
                    and view.partition_of(t) == st.partition_id
                )
                if ok:
                    continue
                key = (node_id, entry.k)
                age = self.finger_stale_age.get(key, 0)
                if not churn:
                    age += 1
                still_bad[key] = age
                if age > FINGER_GRACE_ROUNDS:
                    violations.append(
                        Violation(
                            round_no,
                            FINGER_VALID,
                            node_id,
                            f"finger k={entry.k} -> {t} stale {age} quiet rounds",
                        )
                    )
        self.finger_stale_age = still_bad

    def _check_partition_min(
        self,
        round_no: int,
        states: Dict[NodeId, NodeState],
        comp: IdSet,
        violations: List[Violation],
    ) -> None:
        expected = self.expected_min_pid.get(comp.bits)
        if expected is None:
            return
        label = min(comp)
        actual = states[label].partition_id
        if actual != expected:
            violations.append(
                Violation(
                    round_no,
                    PARTITION_MIN,
                    label,
                    f"component settled on {actual}, expected {expected}",
                )
            )

    def _check_ring_cycle(
        self,
        round_no: int,
        states: Dict[NodeId, NodeState],
        comp: IdSet,
        violations: List[Violation],
    ) -> None:
        members = comp.to_sorted_list()
        start = members[0]
        seen = set()
        current = start
        for _ in range(len(members)):
            if current in seen or current not in comp:
                break
            seen.add(current)
            current = states[current].successor
        if current != start or len(seen) != len(members):
            violations.append(
                Violation(
                    round_no,
                    RING_CYCLE,
                    start,
                    f"successor links cover {len(seen)}/{len(members)} members",
                )
            )


def check_invariants(
    states: Dict[NodeId, NodeState],
    fault: FaultModel,
    checker: InvariantChecker,
    round_no: int = 0,
) -> List[Violation]:
    """One-shot invariant evaluation against a checker's history."""
    view = GodView(states, fault)
    components = fault.components()
    converged = partitions_converged(states, components)
    return checker.check_round(
        round_no, states, fault, view, components, converged, converged
    )


class Simulation:
    """Deterministic round-loop over one network.

    Drives scheduled scenario events and, through the same entry points,
    commands injected live (the control API): both paths share this code
    so CLI runs and API-driven runs replay identically.
    """

    def __init__(
        self,
        scn: Scenario,
        baseline: bool = False,
        delivery_salt: int = 0,
        duplicate_delivery: bool = False,
    ):
        scn.validate()
        if baseline and not scn.baseline_fanout:
            raise ScenarioError("baseline.fanout", "baseline run needs a fanout")
        self.scenario = scn
        self.cfg: RingConfig = scn.cfg
        self.baseline = baseline
        self.duplicate_delivery = duplicate_delivery

        self.ids = self._assign_ids(scn)
        self.states: Dict[NodeId, NodeState] = {
            i: build_initial_state(i, self.ids, self.cfg) for i in self.ids
        }
        self.fault = FaultModel(self.ids)
        self.view = GodView(self.states, self.fault)

        seed_base = scn.cfg.seed * 1_000_003
        self._rng_delivery = random.Random(seed_base + 17 + delivery_salt)
        self._rng_baseline = random.Random(seed_base + 29)

        self.round = 0
        self.last_topology_round = 0
        self.in_flight: List[Tuple[str, NodeId, Any]] = []
        self._events_by_round: Dict[int, List[ScheduledEvent]] = {}
        for ev in scn.events:
            self._events_by_round.setdefault(ev.round, []).append(ev)
        self._injected: List[ScheduledEvent] = []

        self.event_log: List[dict] = []
        self.metrics: List[RoundMetrics] = []
        self.total_violations = 0
        self.total_merges = 0
        self.stopped_early = False

        self.checker = InvariantChecker(self.states, self.fault)
        self._prev_converged: Dict[int, bool] = {}
        self._log(
            {
                "type": "network",
                "round": 0,
                "n": scn.n,
                "m": self.cfg.m,
                "id_mode": scn.id_mode,
                "seed": scn.cfg.seed,
                "mode": "baseline" if baseline else "structured",
            }
        )
        self._record_metrics(RoundMetrics(round=0))

    @staticmethod
    def _assign_ids(scn: Scenario) -> List[NodeId]:
        if scn.n > scn.cfg.size:
            raise ScenarioError("n", f"2^{scn.cfg.m} ring cannot hold {scn.n} nodes")
        if scn.id_mode == "dense":
            return list(range(scn.n))
        ids: set[int] = set()
        for i in range(scn.n):
            salt = 0
            value = fnv1a_64(f"node-{i}".encode()) & scn.cfg.mask
            while value in ids:
                salt += 1
                value = fnv1a_64(f"node-{i}#{salt}".encode()) & scn.cfg.mask
            ids.add(value)
        return sorted(ids)

    # -- public driving --------------------------------------------------

    def run(self) -> "RunResult":
        while self.round < self.scenario.max_rounds:
            self.step_round()
            if self._should_stop():
                self.stopped_early = True
                self._log({"type": "stop", "round": self.round, "reason": "converged"})
                break
        else:
            if self.scenario.max_rounds > 0:
                self._log({"type": "stop", "round": self.round, "reason": "max_rounds"})
        return RunResult(self)

    def inject(self, ev: ScheduledEvent) -> None:
        """Queue a live command; it applies within the next stepped round."""
        self._injected.append(ev)

    def lookup_now(self, origin: NodeId, name: str) -> dict:
        """Resolve a name against the current settled state (read-only)."""
        ev = ScheduledEvent(round=self.round, kind=sc.LOOKUP, origin=origin, name=name)
        return self._apply_lookup(ev, self.round)

    def step_round(self) -> RoundMetrics:
        self.round += 1
        r = self.round

        self._deliver()

        for ev in self._events_by_round.pop(r, []):
            self._apply_event(ev, r)
        injected, self._injected = self._injected, []
        for ev in injected:
            self._apply_event(ev, r)

        live = [i for i in self.ids if self.fault.is_active(i)]
        for i in live:
            st = self.states[i]
            mask = self.fault.reachable_mask(i)
            stabilize(st, self.view, self.cfg, mask)
            repair_fingers(st, self.view, self.cfg, mask)

        gossip_sent, record_sent, baseline_sent = self._send_phase(live, r)

        for i in live:
            detect_cross_partition(self.states[i], self.view)

        merges = 0
        for i in live:
            decision = merger_step(self.states[i], self.view, r)
            if decision is not None:
                merges += 1
                self.total_merges += 1
                self._log(decision.to_json())

        for i in live:
            dns_ops.decay_records(self.states[i])

        components = self.fault.components()
        converged = partitions_converged(self.states, components)
        violations = self.checker.check_round(
            r, self.states, self.fault, self.view, components,
            converged, self._prev_converged, churn=merges > 0,
        )
        for v in violations:
            self._log(v.to_json())
        self.total_violations += len(violations)
        for label, flag in converged.items():
            if flag and not self._prev_converged.get(label, False):
                self._log({"type": "converged", "round": r, "component": label})
        self._prev_converged = converged

        row = RoundMetrics(
            round=r,
            gossip_msgs_sent=gossip_sent,
            record_msgs_sent=record_sent,
            baseline_msgs_sent=baseline_sent,
            components=len(components),
            converged_components=converged,
            violations=violations,
            merge_decisions=merges,
        )
        self._record_metrics(row)
        return row

    # -- phases ----------------------------------------------------------

    def _deliver(self) -> None:
        messages, self.in_flight = self.in_flight, []
        if not messages:
            return
        if self.duplicate_delivery:
            messages = messages + messages
        self._rng_delivery.shuffle(messages)
        partition_masks = self.view.partition_masks()
        for kind, target, payload in messages:
            st = self.states[target]
            if not st.active:
                continue
            if kind == GOSSIP_KIND:
                mask = partition_masks.get(st.partition_id, 0)
                receive_gossip(st, payload, mask, self.round)
            else:
                dns_ops.anti_entropy_records(st, payload)

    def _apply_event(self, ev: ScheduledEvent, r: int) -> dict:
        if ev.kind == sc.SPLIT:
            return self._apply_split(ev, r)
        if ev.kind == sc.HEAL:
            return self._apply_heal(ev, r)
        if ev.kind == sc.KILL:
            return self._apply_kill(ev, r)
        if ev.kind == sc.REVIVE:
            return self._apply_revive(ev, r)
        if ev.kind == sc.PUBLISH:
            return self._apply_publish(ev, r)
        if ev.kind == sc.LOOKUP:
            return self._apply_lookup(ev, r)
        raise ScenarioError("events", f"unknown kind {ev.kind!r}")

    def _apply_split(self, ev: ScheduledEvent, r: int) -> dict:
        assert ev.fragments is not None
        live = {i for i in self.ids if self.fault.is_active(i)}
        listed = [n for frag in ev.fragments for n in frag]
        listed_set = set(listed)
        unknown = listed_set - set(self.ids)
        if unknown:
            raise ScenarioError("split.fragments", f"unknown nodes {sorted(unknown)}")
        if listed_set != live:
            missing = sorted(live - listed_set)
            extra = sorted(listed_set - live)
            raise ScenarioError(
                "split.fragments",
                f"fragments must cover the live node set exactly"
                f" (missing {missing}, not live {extra})",
            )
        try:
            assignment = assign_fragment_ids([list(frag) for frag in ev.fragments])
        except ValueError as exc:
            raise ScenarioError("split.fragments", str(exc)) from exc
        self.fault.split(assignment)
        for node, pid in assignment.items():
            st = self.states[node]
            if st.partition_id != pid:
                st.partition_id = pid
                st.partition_version += 1
        self._mark_topology(r)
        partition_ids = sorted({assignment[n] for n in assignment})
        record = {
            "type": "split",
            "round": r,
            "fragments": [sorted(frag) for frag in ev.fragments],
            "partition_ids": partition_ids,
        }
        self._log(record)
        return record

    def _apply_heal(self, ev: ScheduledEvent, r: int) -> dict:
        labels = self.fault.fragment_labels()
        if ev.partitions == "all":
            chosen = labels
        else:
            chosen = list(ev.partitions)
            unknown = [p for p in chosen if p not in labels]
            if unknown:
                raise ScenarioError(
                    "heal.partitions", f"no such fragments {unknown}; have {labels}"
                )
        if len(chosen) >= 2:
            self.fault.heal(chosen)
        self._mark_topology(r)
        record = {"type": "heal", "round": r, "partitions": sorted(chosen)}
        self._log(record)
        return record

    def _apply_kill(self, ev: ScheduledEvent, r: int) -> dict:
        assert ev.node is not None
        if ev.node not in self.states:
            raise ScenarioError("kill.node", f"unknown node {ev.node}")
        self.fault.kill(ev.node)
        self.states[ev.node].active = False
        self._mark_topology(r)
        record = {"type": "kill", "round": r, "node": ev.node}
        self._log(record)
        return record

    def _apply_revive(self, ev: ScheduledEvent, r: int) -> dict:
        assert ev.node is not None
        if ev.node not in self.states:
            raise ScenarioError("revive.node", f"unknown node {ev.node}")
        self.fault.revive(ev.node)
        self.states[ev.node].active = True
        self._mark_topology(r)
        record = {"type": "revive", "round": r, "node": ev.node}
        self._log(record)
        return record

    def _apply_publish(self, ev: ScheduledEvent, r: int) -> dict:
        assert ev.node is not None and ev.name and ev.ip and ev.ttl is not None
        record: dict[str, Any] = {
            "type": "publish",
            "round": r,
            "origin": ev.node,
            "name": ev.name,
            "ip": ev.ip,
            "ttl": ev.ttl,
        }
        if ev.node not in self.states:
            raise ScenarioError("publish.node", f"unknown node {ev.node}")
        if not self.fault.is_active(ev.node):
            record.update(outcome=dns_ops.UNREACHABLE)
        else:
            key = hash_name(ev.name, self.cfg)
            owner, path = dns_ops.route_to_owner(
                ev.node, key, self.states, self.view, self.cfg
            )
            if owner is None:
                record.update(outcome=dns_ops.UNREACHABLE, path=path)
            else:
                stored = dns_ops.publish(self.states[owner], ev.name, ev.ip, ev.ttl)
                record.update(
                    outcome="STORED",
                    stored_at=owner,
                    version=[stored.origin, stored.counter],
                )
        self._log(record)
        return record

    def _apply_lookup(self, ev: ScheduledEvent, r: int) -> dict:
        assert ev.origin is not None and ev.name
        if ev.origin not in self.states:
            raise ScenarioError("lookup.origin", f"unknown node {ev.origin}")
        result = dns_ops.lookup(ev.origin, ev.name, self.states, self.view, self.cfg)
        record = {
            "type": "lookup",
            "origin": ev.origin,
            "name": ev.name,
            "outcome": result.outcome,
            "hops": result.hops,
            "path": result.path,
            "round": r,
        }
        if result.record is not None:
            record["record"] = result.record.to_json()
        self._log(record)
        return record

    def _send_phase(self, live: List[NodeId], r: int) -> Tuple[int, int, int]:
        gossip_sent = record_sent = baseline_sent = 0
        for i in live:
            st = self.states[i]
            if self.baseline:
                targets = self._baseline_targets(st)
                baseline_sent += len(targets)
            else:
                sel = select_targets(
                    st, self.view, self.cfg, round_no=r,
                    strategy=self.scenario.finger_strategy,
                )
                targets = sel.distinct()
                gossip_sent += len(targets)
            if not targets:
                continue
            msg = make_message(st)
            records = tuple(st.dns_records.values()) if st.dns_records else None
            for t in targets:
                self.in_flight.append((GOSSIP_KIND, t, msg))
                if self.scenario.log_messages:
                    entry = {"type": "gossip", "round": r, "to": t}
                    entry.update(msg.to_json())
                    self._log(entry)
                if records is not None:
                    self.in_flight.append((RECORD_KIND, t, records))
                    record_sent += 1
        return gossip_sent, record_sent, baseline_sent

    def _baseline_targets(self, st: NodeState) -> List[NodeId]:
        mask = self.fault.reachable_mask(st.id) & ~(1 << st.id)
        peers = [
            p
            for p in IdSet.from_bits(mask)
            if self.states[p].partition_id == st.partition_id
        ]
        k = self.scenario.baseline_fanout or 1
        if len(peers) <= k:
            return peers
        return self._rng_baseline.sample(peers, k)

    # -- bookkeeping -----------------------------------------------------

    def _mark_topology(self, r: int) -> None:
        self.last_topology_round = r
        self.checker.snapshot_epoch(self.states, self.fault)
        self._prev_converged = {}

    def _should_stop(self) -> bool:
        if not self.scenario.stop_when_converged:
            return False
        if self._events_by_round or self._injected:
            return False
        if len(self.metrics) < CONVERGED_STREAK_TO_STOP:
            return False
        tail = self.metrics[-CONVERGED_STREAK_TO_STOP:]
        return all(row.all_converged for row in tail)

    def _record_metrics(self, row: RoundMetrics) -> None:
        if row.round == 0:
            components = self.fault.components()
            row.components = len(components)
            row.converged_components = partitions_converged(self.states, components)
            self._prev_converged = dict(row.converged_components)
            for label, flag in row.converged_components.items():
                if flag:
                    self._log({"type": "converged", "round": 0, "component": label})
        self.metrics.append(row)

    def _log(self, record: dict) -> None:
        self.event_log.append(record)

    # -- reporting -------------------------------------------------------

    def event_log_text(self) -> str:
        return "\n".join(log_line(r) for r in self.event_log) + "\n"

    def convergence_rounds(self) -> Dict[int, Optional[int]]:
        return convergence_round(self.metrics, self.last_topology_round)

    def summary(self) -> dict:
        rounds = self.convergence_rounds()
        return {
            "schema": 1,
            "n": self.scenario.n,
            "seed": self.cfg.seed,
            "mode": "baseline" if self.baseline else "structured",
            "rounds_run": self.round,
            "stopped_early": self.stopped_early,
            "converged": all(r is not None for r in rounds.values()),
            "convergence_rounds": {str(k): rounds[k] for k in sorted(rounds)},
            "final_partitions": self._final_partitions(),
            "totals": {
                "gossip_sent": sum(m.gossip_msgs_sent for m in self.metrics),
                "record_sent": sum(m.record_msgs_sent for m in self.metrics),
                "baseline_sent": sum(m.baseline_msgs_sent for m in self.metrics),
                "merge_decisions": self.total_merges,
            },
            "violations": self.total_violations,
        }

    def _final_partitions(self) -> Dict[str, List[int]]:
        groups: Dict[int, List[int]] = {}
        for node_id in self.ids:
            if self.fault.is_active(node_id):
                groups.setdefault(self.states[node_id].partition_id, []).append(node_id)
        return {str(pid): sorted(members) for pid, members in sorted(groups.items())}


@dataclass
class RunResult:
    sim: Simulation

    @property
    def event_log(self) -> List[dict]:
        return self.sim.event_log

    @property
    def metrics(self) -> List[RoundMetrics]:
        return self.sim.metrics

    @property
    def states(self) -> Dict[NodeId, NodeState]:
        return self.sim.states

    @property
    def violations(self) -> int:
        return self.sim.total_violations

    def summary(self) -> dict:
        return self.sim.summary()


def run(
    scn: Scenario, delivery_salt: int = 0, duplicate_delivery: bool = False
) -> RunResult:
    return Simulation(
        scn, delivery_salt=delivery_salt, duplicate_delivery=duplicate_delivery
    ).run()


def run_baseline(scn: Scenario, fanout: Optional[int] = None) -> RunResult:
    """Unstructured comparison run: k uniform random same-partition peers."""
    k = fanout if fanout is not None else scn.baseline_fanout
    if k is None or k < 1:
        raise ScenarioError("baseline.fanout", f"fanout must be >= 1, got {k}")
    base = Scenario(
        n=scn.n,
        cfg=scn.cfg,
        id_mode=scn.id_mode,
        max_rounds=scn.max_rounds,
        events=scn.events,
        baseline_fanout=k,
        finger_strategy=scn.finger_strategy,
        stop_when_converged=scn.stop_when_converged,
        log_messages=False,
    )
    return Simulation(base, baseline=True).run()


def convergence_round(
    series: List[RoundMetrics], last_topology_round: int = 0
) -> Dict[int, Optional[int]]:
    """Per final component: first round at/after the last topology event
    where it reports converged and stays converged to the end of the run.
    """
    if not series:
        return {}
    final_labels = series[-1].converged_components.keys()
    out: Dict[int, Optional[int]] = {}
    for label in final_labels:
        settled: Optional[int] = None
        for row in series:
            if row.round < last_topology_round:
                continue
            if row.converged_components.get(label):
                if settled is None:
                    settled = row.round
            else:
                settled = None
        out[label] = settled
    return out
