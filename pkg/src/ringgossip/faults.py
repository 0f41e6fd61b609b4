"""Network-level ground truth: fragments, liveness, reachability.

The fault injector owns which nodes can physically talk: splits carve
the live node set into fragments, heals merge them back, kill/revive
toggles liveness. Protocol state (partition ids) is the nodes' own
business and lags this ground truth; the oracle view here is what the
harness hands to node-local operations in place of timeout-based
failure detection.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Dict, Iterable, List

from ringgossip.idset import IdSet
from ringgossip.ring import NodeId

if TYPE_CHECKING:
    from ringgossip.node import NodeState


class FaultModel:
    def __init__(self, all_ids: Iterable[NodeId]):
        ids = sorted(all_ids)
        if not ids:
            raise ValueError("need at least one node")
        label = min(ids)
        self.fragment_of: Dict[NodeId, int] = {i: label for i in ids}
        self.active: Dict[NodeId, bool] = {i: True for i in ids}
        self._live_masks: Dict[int, int] | None = None

    # -- queries ---------------------------------------------------------

    def is_active(self, node: NodeId) -> bool:
        return self.active[node]

    def reachable(self, a: NodeId, b: NodeId) -> bool:
        return (
            self.active[a]
            and self.active[b]
            and self.fragment_of[a] == self.fragment_of[b]
        )

    def live_fragment_masks(self) -> Dict[int, int]:
        """Fragment label -> bitmask of its live members (cached)."""
        if self._live_masks is None:
            masks: Dict[int, int] = {}
            for node, frag in self.fragment_of.items():
                if self.active[node]:
                    masks[frag] = masks.get(frag, 0) | (1 << node)
            self._live_masks = {f: m for f, m in masks.items() if m}
        return self._live_masks

    def reachable_mask(self, node: NodeId) -> int:
        """Bitmask of live peers the node can reach (including itself)."""
        if not self.active[node]:
            return 0
        return self.live_fragment_masks().get(self.fragment_of[node], 0)

    def components(self) -> List[IdSet]:
        """Live membership of each non-empty fragment, by ascending label."""
        masks = self.live_fragment_masks()
        return [IdSet.from_bits(masks[label]) for label in sorted(masks)]

    def fragment_labels(self) -> List[int]:
        return sorted(self.live_fragment_masks())

    # -- mutations -------------------------------------------------------

    def _dirty(self) -> None:
        self._live_masks = None

    def split(self, assignment: Dict[NodeId, int]) -> None:
        """Re-fragment: live nodes per assignment, dead nodes follow their
        nearest clockwise live neighbor so a later revive lands somewhere.
        """
        live = IdSet(n for n, a in self.active.items() if a)
        for node, frag in assignment.items():
            self.fragment_of[node] = frag
        for node, alive in self.active.items():
            if not alive:
                anchor = live.next_clockwise(node)
                if anchor is None:
                    anchor = next(iter(assignment))
                self.fragment_of[node] = assignment[anchor]
        self._dirty()

    def heal(self, labels: Iterable[int]) -> int:
        labels = sorted(set(labels))
        target = labels[0]
        members = set(labels)
        for node, frag in self.fragment_of.items():
            if frag in members:
                self.fragment_of[node] = target
        self._dirty()
        return target

    def kill(self, node: NodeId) -> None:
        self.active[node] = False
        self._dirty()

    def revive(self, node: NodeId) -> None:
        self.active[node] = True
        self._dirty()


class GodView:
    """Oracle handed to node-local operations: reachability plus the
    current partition label of any peer, read straight from global state.
    """

    __slots__ = ("_states", "_fault")

    def __init__(self, states: Dict[NodeId, "NodeState"], fault: FaultModel):
        self._states = states
        self._fault = fault

    def reachable(self, a: NodeId, b: NodeId) -> bool:
        return self._fault.reachable(a, b)

    def is_active(self, node: NodeId) -> bool:
        return self._fault.is_active(node)

    def partition_of(self, node: NodeId) -> int:
        return self._states[node].partition_id

    def partition_masks(self) -> Dict[int, int]:
        """Partition id -> bitmask of all nodes currently labeled with it."""
        masks: Dict[int, int] = {}
        for node_id, st in self._states.items():
            masks[st.partition_id] = masks.get(st.partition_id, 0) | (1 << node_id)
        return masks
