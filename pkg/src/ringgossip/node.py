"""Per-node protocol state and local structural operations.

A node keeps three kinds of state: hard state (name records and its
version vector), soft state reconstructable from gossip (successor,
predecessor, finger table), and partition state (its partition id,
version counter, known partitions, and detected cross-partition links).

Structure repair is passive: each round a node recomputes successor,
predecessor, and fingers from the reachable members of its knowledge
set. No acknowledgments, no blocking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, Optional, Protocol

from ringgossip.idset import IdSet
from ringgossip.ring import NodeId, RingConfig, clockwise_distance

if TYPE_CHECKING:
    from ringgossip.dns import DnsRecord

PartitionId = int

STABILIZED = "ok"
ISOLATED = "isolated"


class PeerView(Protocol):
    """Reachability and peer-label oracle supplied by the harness.

    Mirrors a failure-detection substrate: a node can tell whether a
    peer is reachable right now and read its advertised partition id.
    """

    def reachable(self, a: NodeId, b: NodeId) -> bool: ...

    def is_active(self, node: NodeId) -> bool: ...

    def partition_of(self, node: NodeId) -> PartitionId: ...


@dataclass
class VersionVector:
    """Map node id -> latest update counter from that node.

    Zero counters are never stored (absent entry means 0), so vectors in
    runs without writes stay empty. Merge is element-wise max; entries
    only ever grow.
    """

    entries: Dict[NodeId, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(v <= 0 for v in self.entries.values()):
            self.entries = {k: v for k, v in self.entries.items() if v > 0}

    def get(self, node: NodeId) -> int:
        return self.entries.get(node, 0)

    def bump(self, node: NodeId) -> int:
        value = self.entries.get(node, 0) + 1
        self.entries[node] = value
        return value

    def merge_from(self, other: "VersionVector | Dict[NodeId, int]") -> None:
        items = other.entries if isinstance(other, VersionVector) else other
        mine = self.entries
        for node, counter in items.items():
            if counter > mine.get(node, 0):
                mine[node] = counter

    def merge(self, other: "VersionVector") -> "VersionVector":
        merged = VersionVector(dict(self.entries))
        merged.merge_from(other)
        return merged

    def copy(self) -> "VersionVector":
        return VersionVector(dict(self.entries))

    def digest(self) -> Dict[str, int]:
        return {
            "entries": len(self.entries),
            "max": max(self.entries.values(), default=0),
        }

    def to_json(self) -> Dict[str, int]:
        return {str(node): self.entries[node] for node in sorted(self.entries)}


@dataclass
class FingerEntry:
    """One routing shortcut: the node believed responsible for start.

    target None marks the entry invalid; invalid entries are never used
    for routing or gossip target selection.
    """

    k: int
    start: NodeId
    target: Optional[NodeId]

    @property
    def valid(self) -> bool:
        return self.target is not None


@dataclass
class NodeState:
    id: NodeId
    successor: NodeId
    predecessor: Optional[NodeId]
    fingers: list[FingerEntry]
    vv: VersionVector
    known_nodes: IdSet
    partition_id: PartitionId
    partition_version: int = 0
    known_partitions: set[PartitionId] = field(default_factory=set)
    cross_partition_links: set[NodeId] = field(default_factory=set)
    last_update: int = 0
    dns_records: Dict[str, "DnsRecord"] = field(default_factory=dict)
    active: bool = True

    def structure_links(self) -> set[NodeId]:
        """Targets of successor, predecessor, and all valid fingers."""
        links = {f.target for f in self.fingers if f.target is not None}
        links.add(self.successor)
        if self.predecessor is not None:
            links.add(self.predecessor)
        links.discard(self.id)
        return links


def finger_starts(id: NodeId, cfg: RingConfig) -> list[NodeId]:
    return [(id + (1 << k)) & cfg.mask for k in range(cfg.m)]


def responsible_node(key: NodeId, members: Iterable[NodeId], cfg: RingConfig) -> NodeId:
    """First member clockwise from key, inclusive."""
    if isinstance(members, IdSet):
        found = members.next_clockwise(key)
        if found is None:
            raise ValueError("members must be non-empty")
        return found
    best = None
    best_d = None
    for m in members:
        d = clockwise_distance(key, m, cfg)
        if best_d is None or d < best_d:
            best, best_d = m, d
    if best is None:
        raise ValueError("members must be non-empty")
    return best


def build_initial_state(
    id: NodeId, all_nodes: list[NodeId], cfg: RingConfig, partition_id: Optional[PartitionId] = None
) -> NodeState:
    """Construct a node's state for a fully-known starting membership.

    Successor/predecessor are the ring neighbors in all_nodes; finger k
    targets the first node at or after id + 2^k. Knowledge starts as
    self plus neighbors plus finger targets.
    """
    members = IdSet(all_nodes)
    if id not in members:
        raise ValueError(f"node {id} not in membership list")
    succ = members.next_clockwise((id + 1) & cfg.mask)
    assert succ is not None
    pred = members.prev_clockwise((id - 1) & cfg.mask)
    assert pred is not None
    fingers = [
        FingerEntry(k=k, start=start, target=responsible_node(start, members, cfg))
        for k, start in enumerate(finger_starts(id, cfg))
    ]
    known = IdSet([id, succ, pred])
    known.update(f.target for f in fingers if f.target is not None)
    if partition_id is None:
        partition_id = min(all_nodes)
    return NodeState(
        id=id,
        successor=succ,
        predecessor=pred,
        fingers=fingers,
        vv=VersionVector(),
        known_nodes=known,
        partition_id=partition_id,
    )


def _reachable_known_bits(node: NodeState, view: PeerView, reachable_mask: int) -> int:
    """Bitmask of known peers reachable right now (self excluded)."""
    return node.known_nodes.bits & reachable_mask & ~(1 << node.id)


def stabilize(node: NodeState, view: PeerView, cfg: RingConfig, reachable_mask: int) -> str:
    """Repoint successor/predecessor at the nearest reachable known peers.

    Purely local and non-blocking: the node scans its own knowledge set,
    keeps whatever is reachable, and never waits for an acknowledgment.
    Returns ISOLATED when no peer is reachable (the node becomes its own
    successor and predecessor).
    """
    candidates = IdSet.from_bits(_reachable_known_bits(node, view, reachable_mask))
    if not candidates:
        node.successor = node.id
        node.predecessor = node.id
        return ISOLATED
    succ = candidates.next_clockwise((node.id + 1) & cfg.mask)
    assert succ is not None
    node.successor = succ
    node.predecessor = candidates.prev_clockwise((node.id - 1) & cfg.mask)
    return STABILIZED


def repair_fingers(node: NodeState, view: PeerView, cfg: RingConfig, reachable_mask: int) -> None:
    """Repoint each finger at the nearest reachable known peer from its start.

    When the node is its own successor (singleton partition) fingers point
    to self so routing stays total; with no candidates at all an entry
    would be invalidated rather than left stale.
    """
    candidates = IdSet.from_bits(_reachable_known_bits(node, view, reachable_mask))
    if not candidates:
        if node.successor == node.id:
            for entry in node.fingers:
                entry.target = node.id
        else:
            for entry in node.fingers:
                entry.target = None
        return
    candidates.add(node.id)
    for entry in node.fingers:
        entry.target = candidates.next_clockwise(entry.start)
