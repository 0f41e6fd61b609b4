"""Coordination-free partition merging.

When a node holds links into other partitions it gathers the partition
ids it can see and adopts the minimum. min is commutative, associative,
and idempotent, so every node of a communicating component lands on the
same id no matter how detection interleaves, with no agreement protocol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional

from ringgossip.idset import IdSet
from ringgossip.node import NodeState, PartitionId, PeerView
from ringgossip.ring import NodeId


@dataclass(frozen=True)
class MergeDecision:
    node: NodeId
    old_partition: PartitionId
    target_partition: PartitionId
    round: int

    def to_json(self) -> dict:
        return {
            "type": "merge",
            "node": self.node,
            "from": self.old_partition,
            "to": self.target_partition,
            "round": self.round,
        }


def merger_step(node: NodeState, view: PeerView, round_no: int) -> Optional[MergeDecision]:
    """Adopt the minimum partition id visible through cross-partition links.

    Links whose target meanwhile shares the node's partition, or is no
    longer reachable, are purged: a stale link must not re-trigger merges
    or leak ids from partitions the node cannot actually talk to.
    """
    if not node.cross_partition_links:
        return None

    live: Dict[NodeId, PartitionId] = {}
    for peer in node.cross_partition_links:
        if view.is_active(peer) and view.reachable(node.id, peer):
            live[peer] = view.partition_of(peer)

    gathered = {node.partition_id}
    gathered.update(live.values())
    node.known_partitions = gathered

    target = min(gathered)
    decision = None
    if target != node.partition_id:
        old = node.partition_id
        node.partition_id = target
        node.partition_version += 1
        decision = MergeDecision(node.id, old, target, round_no)

    node.cross_partition_links = {
        peer for peer, pid in live.items() if pid != node.partition_id
    }
    return decision


def assign_fragment_ids(fragments: list[Iterable[NodeId]]) -> Dict[NodeId, PartitionId]:
    """Give every fragment the id of its minimum member.

    Disjoint fragments therefore get distinct, comparable ids, and the
    eventual merged id of any set of fragments is the minimum node id
    among them.
    """
    assignment: Dict[NodeId, PartitionId] = {}
    for fragment in fragments:
        members = list(fragment)
        if not members:
            raise ValueError("fragments must be non-empty")
        fid = min(members)
        for node in members:
            if node in assignment:
                raise ValueError(f"fragments overlap at node {node}")
            assignment[node] = fid
    return assignment


def partitions_converged(
    states: Dict[NodeId, NodeState],
    components: list[IdSet],
) -> Dict[PartitionId, bool]:
    """Per network component: one shared partition id and full knowledge.

    A component is converged when every live member reports the same
    partition id and each member's knowledge covers the whole component.
    Components are keyed by their minimum member id.
    """
    result: Dict[PartitionId, bool] = {}
    for comp in components:
        members = comp.to_sorted_list()
        if not members:
            continue
        label = members[0]
        first_pid = states[members[0]].partition_id
        ok = True
        for node_id in members:
            st = states[node_id]
            if st.partition_id != first_pid or not st.known_nodes.covers_bits(comp.bits):
                ok = False
                break
        result[label] = ok
    return result
