import type { NetworkState, NodeInfo } from "../src/types.js";

export function makeNode(id: number, partition: number, n: number): NodeInfo {
  const succ = (id + 1) % n;
  return {
    id,
    partition,
    partitionVersion: 0,
    active: true,
    successor: succ,
    predecessor: (id + n - 1) % n,
    fingers: [
      { k: 0, start: (id + 1) % n, target: succ, invalid: false },
      { k: 1, start: (id + 2) % n, target: (id + 2) % n, invalid: false },
    ],
    crossPartitionLinks: [],
    knownCount: n,
    vv: { entries: 0, max: 0 },
    records: 0,
  };
}

export function makeState(n: number, partitionOf?: (id: number) => number): NetworkState {
  const nodes = Array.from({ length: n }, (_, id) => makeNode(id, partitionOf?.(id) ?? 0, n));
  const partitions = new Set(nodes.map((node) => node.partition));
  return {
    network_id: 1,
    round: 5,
    n,
    m: Math.ceil(Math.log2(Math.max(n, 2))),
    converged: partitions.size === 1,
    components: partitions.size,
    nodes,
  };
}
