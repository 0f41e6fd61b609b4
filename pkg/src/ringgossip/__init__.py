"""Deterministic simulator for a partition-tolerant ring overlay.

Nodes sit on an m-bit identifier ring, gossip along their structure links
(successor plus one finger per round), detect partitions of the underlying
network, and merge them back without coordination: partition ids converge
by minimum, version vectors by element-wise max, and knowledge sets by
union. A round-based harness drives scenarios (splits, heals, kills,
publishes, lookups), checks protocol invariants every round, and records
metrics and an event log suitable for golden-file testing.
"""

from ringgossip.ring import RingConfig, clockwise_distance, hash_name, in_interval
from ringgossip.idset import IdSet
from ringgossip.node import (
    FingerEntry,
    NodeState,
    VersionVector,
    build_initial_state,
    repair_fingers,
    responsible_node,
    stabilize,
)
from ringgossip.gossip import (
    GossipMessage,
    GossipTargets,
    detect_cross_partition,
    make_message,
    receive_gossip,
    select_targets,
)
from ringgossip.merger import (
    MergeDecision,
    assign_fragment_ids,
    merger_step,
    partitions_converged,
)
from ringgossip.dns import (
    DnsRecord,
    LookupResult,
    anti_entropy_records,
    lookup,
    lookup_key,
    merge_records,
    publish,
)
from ringgossip.scenario import Scenario, ScenarioError, ScheduledEvent
from ringgossip.harness import RoundMetrics, Simulation, convergence_round, run, run_baseline

__all__ = [
    "RingConfig",
    "clockwise_distance",
    "in_interval",
    "hash_name",
    "IdSet",
    "FingerEntry",
    "NodeState",
    "VersionVector",
    "build_initial_state",
    "responsible_node",
    "stabilize",
    "repair_fingers",
    "GossipMessage",
    "GossipTargets",
    "select_targets",
    "make_message",
    "detect_cross_partition",
    "receive_gossip",
    "MergeDecision",
    "merger_step",
    "assign_fragment_ids",
    "partitions_converged",
    "DnsRecord",
    "LookupResult",
    "publish",
    "lookup",
    "lookup_key",
    "anti_entropy_records",
    "merge_records",
    "Scenario",
    "ScheduledEvent",
    "ScenarioError",
    "Simulation",
    "RoundMetrics",
    "run",
    "run_baseline",
    "convergence_round",
]
