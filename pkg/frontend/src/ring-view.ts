import type { NetworkState, NodeInfo } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PALETTE = [
  "#2563eb", "#d97706", "#059669", "#dc2626", "#7c3aed",
  "#0891b2", "#db2777", "#65a30d", "#9333ea", "#ea580c",
];
const LABEL_LIMIT = 32;

export interface RingViewOptions {
  size?: number;
  onSelect?: (node: NodeInfo) => void;
}

/** Stable partition color: same id, same color, across renders. */
export function partitionColor(partitionId: number, order: number[]): string {
  const idx = order.indexOf(partitionId);
  return PALETTE[(idx >= 0 ? idx : partitionId) % PALETTE.length];
}

function polar(id: number, ringSize: number, radius: number, cx: number, cy: number) {
  const angle = (id / ringSize) * 2 * Math.PI - Math.PI / 2;
  return { x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) };
}

function el(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

/**
 * Draw the network into the svg element: nodes positioned on the ring
 * by id, colored by partition; successor links solid, finger links
 * faint, detected cross-partition links dashed red. Invalid fingers are
 * omitted. A highlighted path (e.g. a lookup route) draws on top.
 */
export function renderRing(
  svg: SVGSVGElement,
  state: NetworkState,
  opts: RingViewOptions = {},
  highlightPath: number[] = [],
): void {
  const size = opts.size ?? 560;
  const cx = size / 2;
  const cy = size / 2;
  const radius = size * 0.42;
  const ringSize = 2 ** state.m;
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  svg.replaceChildren();

  const partitions = [...new Set(state.nodes.map((n) => n.partition))].sort((a, b) => a - b);
  const pos = new Map(state.nodes.map((n) => [n.id, polar(n.id, ringSize, radius, cx, cy)]));
  const byId = new Map(state.nodes.map((n) => [n.id, n]));

  const links = el("g", { class: "links" });
  const crossLinks = el("g", { class: "cross-links" });
  const nodesLayer = el("g", { class: "nodes" });
  svg.append(links, crossLinks, nodesLayer);

  const line = (a: number, b: number, attrs: Record<string, string>) => {
    const pa = pos.get(a);
    const pb = pos.get(b);
    if (!pa || !pb || (pa.x === pb.x && pa.y === pb.y)) return null;
    return el("line", {
      x1: String(pa.x), y1: String(pa.y), x2: String(pb.x), y2: String(pb.y), ...attrs,
    });
  };

  for (const node of state.nodes) {
    if (!node.active) continue;
    const color = partitionColor(node.partition, partitions);
    // faint finger shortcuts (intra-partition, valid targets only)
    for (const finger of node.fingers) {
      if (finger.invalid || finger.target === null || finger.target === node.id) continue;
      const target = byId.get(finger.target);
      if (!target || target.partition !== node.partition) continue;
      const fl = line(node.id, finger.target, {
        stroke: color, "stroke-opacity": "0.12", "stroke-width": "1", class: "finger-link",
      });
      if (fl) links.append(fl);
    }
    // successor link: the ring itself
    const succ = byId.get(node.successor);
    if (succ && succ.partition === node.partition && node.successor !== node.id) {
      const sl = line(node.id, node.successor, {
        stroke: color, "stroke-opacity": "0.85", "stroke-width": "2", class: "successor-link",
      });
      if (sl) links.append(sl);
    }
    // detected cross-partition links: dashed, distinct
    for (const peer of node.crossPartitionLinks) {
      const cl = line(node.id, peer, {
        stroke: "#ef4444", "stroke-dasharray": "6 4", "stroke-width": "2",
        "stroke-opacity": "0.9", class: "cross-link",
      });
      if (cl) crossLinks.append(cl);
    }
  }

  if (highlightPath.length > 1) {
    for (let i = 0; i + 1 < highlightPath.length; i++) {
      const hl = line(highlightPath[i], highlightPath[i + 1], {
        stroke: "#111827", "stroke-width": "3", "stroke-opacity": "0.9", class: "lookup-hop",
      });
      if (hl) crossLinks.append(hl);
    }
  }

  const nodeRadius = state.n > 64 ? 5 : 9;
  for (const node of state.nodes) {
    const p = pos.get(node.id)!;
    const group = el("g", {
      class: "ring-node",
      "data-node-id": String(node.id),
      "data-partition": String(node.partition),
    });
    const circle = el("circle", {
      cx: String(p.x), cy: String(p.y), r: String(nodeRadius),
      fill: node.active ? partitionColor(node.partition, partitions) : "#9ca3af",
      stroke: node.active ? "#1f2937" : "#6b7280",
      "stroke-width": "1",
      opacity: node.active ? "1" : "0.45",
    });
    group.append(circle);
    if (state.n <= LABEL_LIMIT) {
      const lp = polar(node.id, ringSize, radius + nodeRadius + 10, cx, cy);
      const text = el("text", {
        x: String(lp.x), y: String(lp.y),
        "text-anchor": "middle", "dominant-baseline": "middle",
        "font-size": "11", fill: "#374151", class: "node-label",
      });
      text.textContent = String(node.id);
      group.append(text);
    }
    if (opts.onSelect) {
      group.addEventListener("click", () => opts.onSelect!(node));
      group.setAttribute("cursor", "pointer");
    }
    nodesLayer.append(group);
  }
}

/** One line of per-node detail for the side panel (vv shown as digest). */
export function nodeSummary(node: NodeInfo): string {
  const fingers = node.fingers
    .filter((f) => !f.invalid && f.target !== null)
    .map((f) => f.target)
    .join(",");
  return (
    `node ${node.id} p${node.partition}v${node.partitionVersion} ` +
    `succ=${node.successor} pred=${node.predecessor ?? "?"} ` +
    `fingers=[${fingers}] knows=${node.knownCount} ` +
    `vv(${node.vv.entries} entries, max ${node.vv.max}) records=${node.records}`
  );
}
