"""Name records, greedy ring routing, and record anti-entropy.

Records are hard state: (name, ip, ttl, version) tuples owned by the
node responsible for hash(name) within its partition. During a split
each partition serves names from its own responsible node (degraded
authority instead of refusal); after partitions merge, record
anti-entropy reconciles replicas with a deterministic last-writer-wins
rule, so every node eventually resolves the same answer.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional

from ringgossip.node import NodeState, PeerView
from ringgossip.ring import NodeId, RingConfig, clockwise_distance, hash_name, in_interval

FOUND = "FOUND"
NOT_FOUND = "NOT_FOUND"
UNREACHABLE = "UNREACHABLE"


@dataclass(frozen=True)
class DnsRecord:
    name: str
    ip: str
    ttl: int
    origin: NodeId
    counter: int

    def version_key(self) -> tuple:
        """Last-writer-wins order: higher counter, ties to lower origin."""
        return (self.counter, -self.origin)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ip": self.ip,
            "ttl": self.ttl,
            "version": [self.origin, self.counter],
        }


@dataclass(frozen=True)
class LookupResult:
    outcome: str
    record: Optional[DnsRecord]
    hops: int
    path: list[NodeId]

    def to_json(self) -> dict:
        out = {
            "outcome": self.outcome,
            "hops": self.hops,
            "path": list(self.path),
        }
        if self.record is not None:
            out["record"] = self.record.to_json()
        return out


def merge_record(a: DnsRecord, b: DnsRecord) -> DnsRecord:
    """Deterministic merge of two replicas of one name.

    The later write wins outright. Copies of the *same* write converge
    to the lowest ttl seen, so expiry keeps ticking globally even while
    fresher-looking echoes of the record circulate. The final ip
    comparison only totalizes the order over arbitrary test inputs.
    """
    ka, kb = a.version_key(), b.version_key()
    if ka != kb:
        return a if ka > kb else b
    if a.ttl != b.ttl:
        return a if a.ttl < b.ttl else b
    return a if a.ip >= b.ip else b


def merge_records(
    mine: Dict[str, DnsRecord], incoming: Iterable[DnsRecord]
) -> Dict[str, DnsRecord]:
    merged = dict(mine)
    for rec in incoming:
        cur = merged.get(rec.name)
        merged[rec.name] = rec if cur is None else merge_record(cur, rec)
    return merged


def anti_entropy_records(node: NodeState, peer_records: Iterable[DnsRecord]) -> None:
    """Fold a peer's record snapshot into this node's store (LWW per name)."""
    node.dns_records = merge_records(node.dns_records, peer_records)


def publish(node: NodeState, name: str, ip: str, ttl: int) -> DnsRecord:
    """Store a record at this node, versioned by its own update counter.

    Callers route to the partition-local responsible node first; the
    stored version is (this node, next counter), which is what makes two
    publishes by one node strictly ordered.
    """
    if ttl < 1:
        raise ValueError("ttl must be >= 1 round")
    counter = node.vv.bump(node.id)
    record = DnsRecord(name=name, ip=ip, ttl=ttl, origin=node.id, counter=counter)
    existing = node.dns_records.get(name)
    node.dns_records[name] = record if existing is None else merge_record(existing, record)
    return record


def decay_records(node: NodeState) -> list[str]:
    """End-of-round ttl decrement; returns names purged at zero."""
    purged = []
    for name, rec in list(node.dns_records.items()):
        nxt = rec.ttl - 1
        if nxt <= 0:
            del node.dns_records[name]
            purged.append(name)
        else:
            node.dns_records[name] = replace(rec, ttl=nxt)
    return purged


def route_to_owner(
    origin: NodeId,
    key: NodeId,
    states: Dict[NodeId, NodeState],
    view: PeerView,
    cfg: RingConfig,
) -> tuple[Optional[NodeId], list[NodeId]]:
    """Greedy ring routing toward the node responsible for key.

    At each step: stop if the current node owns key (key in
    (predecessor, current]), hand over to the successor if key falls in
    (current, successor], otherwise jump to the closest preceding link.
    Candidates are restricted to active, reachable, same-partition peers;
    a dead end returns (None, partial path).
    """
    origin_state = states[origin]
    path = [origin]
    current = origin
    for _ in range(len(states) + 1):
        st = states[current]
        pred = st.predecessor
        if pred is not None and in_interval(key, pred, current, cfg):
            return current, path
        succ = st.successor
        succ_ok = _routable(origin_state, succ, current, view)
        if succ_ok and in_interval(key, current, succ, cfg):
            nxt = succ
        else:
            # closest preceding link: furthest step that does not overshoot key
            dist_key = clockwise_distance(current, key, cfg)
            nxt = None
            best_d = 0
            for cand in _link_targets(st, succ_ok):
                if cand is None or not _routable(origin_state, cand, current, view):
                    continue
                d = clockwise_distance(current, cand, cfg)
                if best_d < d <= dist_key:
                    nxt, best_d = cand, d
            if nxt is None:
                return None, path
        path.append(nxt)
        current = nxt
    return None, path


def _link_targets(st: NodeState, succ_ok: bool):
    if succ_ok:
        yield st.successor
    for entry in st.fingers:
        yield entry.target


def _routable(origin_state: NodeState, peer: NodeId, current: NodeId, view: PeerView) -> bool:
    return (
        peer != current
        and view.is_active(peer)
        and view.reachable(current, peer)
        and view.partition_of(peer) == origin_state.partition_id
    )


def lookup_key(
    origin: NodeId,
    key: NodeId,
    states: Dict[NodeId, NodeState],
    view: PeerView,
    cfg: RingConfig,
    name: Optional[str] = None,
) -> LookupResult:
    owner, path = route_to_owner(origin, key, states, view, cfg)
    hops = len(path) - 1
    if owner is None:
        return LookupResult(UNREACHABLE, None, hops, path)
    record = states[owner].dns_records.get(name) if name is not None else None
    if name is not None and record is not None:
        return LookupResult(FOUND, record, hops, path)
    return LookupResult(NOT_FOUND, None, hops, path)


def lookup(
    origin: NodeId,
    name: str,
    states: Dict[NodeId, NodeState],
    view: PeerView,
    cfg: RingConfig,
) -> LookupResult:
    """Resolve a name from origin within origin's partition."""
    if not view.is_active(origin):
        return LookupResult(UNREACHABLE, None, 0, [origin])
    return lookup_key(origin, hash_name(name, cfg), states, view, cfg, name=name)
