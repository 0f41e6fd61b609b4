// Wire types for the control API. Field names mirror the backend's
// event-log schema exactly.

export interface FingerInfo {
  k: number;
  start: number;
  target: number | null;
  invalid: boolean;
}

export interface NodeInfo {
  id: number;
  partition: number;
  partitionVersion: number;
  active: boolean;
  successor: number;
  predecessor: number | null;
  fingers: FingerInfo[];
  crossPartitionLinks: number[];
  knownCount: number;
  vv: { entries: number; max: number };
  records: number;
}

export interface NetworkState {
  network_id: number;
  round: number;
  n: number;
  m: number;
  converged: boolean;
  components: number;
  nodes: NodeInfo[];
}

export interface StepMetrics {
  round: number;
  gossip_sent: number;
  record_sent: number;
  baseline_sent: number;
  baseline_reference: number;
  components: number;
  converged: boolean;
  violations: number;
  merge_decisions: number;
}

export interface StepResponse {
  round: number;
  metrics: StepMetrics[];
}

export interface LookupRecord {
  name: string;
  ip: string;
  ttl: number;
  version: [number, number];
}

export interface LookupResponse {
  origin: number;
  name: string;
  outcome: "FOUND" | "NOT_FOUND" | "UNREACHABLE";
  hops: number;
  path: number[];
  round: number;
  record?: LookupRecord;
  authoritative?: boolean;
}

export interface ApiErrorBody {
  detail: unknown;
  field?: string;
}
