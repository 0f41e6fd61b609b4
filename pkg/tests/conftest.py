from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Set

from ringgossip.idset import mask_of


@dataclass
class FakeView:
    """Hand-built oracle for node-local unit tests.

    partition maps node -> protocol partition id; fragment maps node ->
    physical network fragment (defaults to the partition map, i.e. a
    settled network); dead nodes are unreachable everywhere.
    """

    partition: Dict[int, int]
    fragment: Dict[int, int] | None = None
    dead: Set[int] = field(default_factory=set)

    def __post_init__(self):
        if self.fragment is None:
            self.fragment = dict(self.partition)

    def reachable(self, a: int, b: int) -> bool:
        return (
            a not in self.dead
            and b not in self.dead
            and self.fragment[a] == self.fragment[b]
        )

    def is_active(self, node: int) -> bool:
        return node not in self.dead

    def partition_of(self, node: int) -> int:
        return self.partition[node]

    def reachable_mask(self, node: int) -> int:
        if node in self.dead:
            return 0
        frag = self.fragment[node]
        return mask_of(
            peer
            for peer, f in self.fragment.items()
            if f == frag and peer not in self.dead
        )


def whole_network_view(ids, partition_id: int | None = None) -> FakeView:
    ids = list(ids)
    if partition_id is None:
        partition_id = min(ids)
    return FakeView(partition={i: partition_id for i in ids})
