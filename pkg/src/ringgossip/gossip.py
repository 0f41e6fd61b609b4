"""Gossip along structure links: target selection, emission, receipt.

Each round an active node sends its state snapshot to at most two peers:
its successor, plus one finger. Which finger depends on the configured
strategy:

* ``cycle`` (default): step down the distinct finger targets ordered by
  clockwise distance, one level per round. Over consecutive rounds a
  node's pushes land at exponentially spaced distances, which is what
  makes whole-network knowledge spread in O(log n) rounds.
* ``furthest``: always the finger maximizing clockwise distance. Kept as
  an option for comparison; with a fixed push graph its spread is linear
  in n (two fronts moving one step per round), so large networks take
  ~n/4 rounds to converge.

Receipt merges knowledge by set union and version vectors element-wise,
both CRDT operations, so delivery order and duplication never matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from ringgossip.idset import IdSet
from ringgossip.node import NodeState, PartitionId, PeerView
from ringgossip.ring import NodeId, RingConfig, clockwise_distance

FINGER_CYCLE = "cycle"
FINGER_FURTHEST = "furthest"
FINGER_STRATEGIES = (FINGER_CYCLE, FINGER_FURTHEST)


@dataclass(frozen=True)
class GossipMessage:
    """Immutable snapshot of the sender's shareable state at send time."""

    sender: NodeId
    known_nodes: IdSet
    vv: Dict[NodeId, int]
    partition_id: PartitionId
    partition_version: int

    def to_json(self) -> dict:
        return {
            "sender": self.sender,
            "knownNodes": self.known_nodes.to_sorted_list(),
            "vv": {str(k): self.vv[k] for k in sorted(self.vv)},
            "partitionId": self.partition_id,
            "partitionVersion": self.partition_version,
        }


@dataclass(frozen=True)
class GossipTargets:
    successor_target: Optional[NodeId]
    finger_target: Optional[NodeId]

    def distinct(self) -> list[NodeId]:
        """Targets deduplicated: a node never sends twice to one peer."""
        out: list[NodeId] = []
        for t in (self.successor_target, self.finger_target):
            if t is not None and t not in out:
                out.append(t)
        return out


def _eligible(node: NodeState, peer: NodeId, view: PeerView) -> bool:
    return (
        peer != node.id
        and view.is_active(peer)
        and view.reachable(node.id, peer)
        and view.partition_of(peer) == node.partition_id
    )


def select_targets(
    node: NodeState,
    view: PeerView,
    cfg: RingConfig,
    round_no: int = 1,
    strategy: str = FINGER_CYCLE,
) -> GossipTargets:
    """Pick this round's gossip targets: successor plus one finger.

    Both must be active, reachable, and in the node's own partition; an
    isolated node gets no targets at all.
    """
    succ: Optional[NodeId] = None
    if _eligible(node, node.successor, view):
        succ = node.successor

    by_distance: dict[NodeId, int] = {}
    for entry in node.fingers:
        t = entry.target
        if t is None or t in by_distance:
            continue
        if _eligible(node, t, view):
            by_distance[t] = clockwise_distance(node.id, t, cfg)
    if not by_distance:
        return GossipTargets(succ, None)

    ordered = sorted(by_distance, key=lambda t: by_distance[t], reverse=True)
    if strategy == FINGER_FURTHEST:
        finger = ordered[0]
    elif strategy == FINGER_CYCLE:
        finger = ordered[(round_no - 1) % len(ordered)]
    else:
        raise ValueError(f"unknown finger strategy {strategy!r}")
    return GossipTargets(succ, finger)


def make_message(node: NodeState) -> GossipMessage:
    """Snapshot the node's shareable state; later mutation never leaks."""
    return GossipMessage(
        sender=node.id,
        known_nodes=node.known_nodes.copy(),
        vv=dict(node.vv.entries),
        partition_id=node.partition_id,
        partition_version=node.partition_version,
    )


def detect_cross_partition(node: NodeState, view: PeerView) -> None:
    """Flag structure links whose target reports a different partition.

    Only reachable, active targets count: an unreachable peer in another
    partition is a split, not a merge opportunity.
    """
    for peer in node.structure_links():
        if not view.is_active(peer) or not view.reachable(node.id, peer):
            continue
        pid = view.partition_of(peer)
        if pid != node.partition_id:
            node.cross_partition_links.add(peer)
            node.known_partitions.add(pid)


def receive_gossip(
    node: NodeState,
    msg: GossipMessage,
    same_partition_bits: int,
    round_no: int,
) -> None:
    """Apply one received gossip message.

    Same-partition messages merge knowledge (restricted to peers that
    currently share the receiver's partition) and version vectors.
    Cross-partition messages only mark the sender as a merge trigger.
    same_partition_bits is the harness-provided membership bitmask of the
    receiver's current partition.
    """
    if msg.partition_id == node.partition_id:
        incoming = msg.known_nodes.bits & same_partition_bits
        node.known_nodes.bits |= incoming
        if msg.vv:
            node.vv.merge_from(msg.vv)
    else:
        node.cross_partition_links.add(msg.sender)
        node.known_partitions.add(msg.partition_id)
    node.last_update = round_no
