import { ApiClient, ApiError } from "./api.js";
import type { LookupResponse, NetworkState, StepMetrics } from "./types.js";

/** Contiguous arcs over the live node ids, largest remainder first. */
export function splitIntoArcs(liveIds: number[], fragments: number[]| number): number[][] {
  const k = typeof fragments === "number" ? fragments : fragments.length;
  const ids = [...liveIds].sort((a, b) => a - b);
  if (k < 2 || k > ids.length) throw new Error(`cannot split ${ids.length} nodes into ${k} arcs`);
  const arcs: number[][] = [];
  let start = 0;
  for (let i = 0; i < k; i++) {
    const len = Math.ceil((ids.length - start) / (k - i));
    arcs.push(ids.slice(start, start + len));
    start += len;
  }
  return arcs;
}

export interface PanelCallbacks {
  refresh: () => Promise<void>;
  onMetrics: (rows: StepMetrics[]) => void;
  onLookup: (result: LookupResponse) => void;
}

/**
 * The steering controls: create network, split into arcs, heal, step,
 * publish, lookup. At most one mutating request is in flight; buttons
 * disable while pending and backend validation errors surface inline.
 */
export class ControlPanel {
  readonly root: HTMLElement;
  private busy = false;
  private error: HTMLElement;

  constructor(
    private api: ApiClient,
    private callbacks: PanelCallbacks,
  ) {
    this.root = document.createElement("div");
    this.root.className = "control-panel";
    this.root.innerHTML = `
      <div class="panel-error" id="panel-error" hidden></div>
      <fieldset class="group" id="group-network">
        <legend>network</legend>
        <label>nodes <input id="net-n" type="number" value="16" min="1" max="512"></label>
        <label>seed <input id="net-seed" type="number" value="7"></label>
        <button id="btn-create">create</button>
      </fieldset>
      <fieldset class="group" id="group-topology">
        <legend>partitions</legend>
        <label>fragments <input id="split-k" type="number" value="2" min="2" max="5"></label>
        <button id="btn-split">split into arcs</button>
        <button id="btn-heal-all">heal all</button>
        <label>heal pair <input id="heal-ids" placeholder="0,6" size="7"></label>
        <button id="btn-heal-pair">heal</button>
      </fieldset>
      <fieldset class="group" id="group-step">
        <legend>time</legend>
        <label>rounds <input id="step-rounds" type="number" value="1" min="1"></label>
        <button id="btn-step">step</button>
      </fieldset>
      <fieldset class="group" id="group-dns">
        <legend>names</legend>
        <label>node <input id="pub-node" type="number" value="0" min="0"></label>
        <label>name <input id="pub-name" value="svc.local" size="10"></label>
        <label>ip <input id="pub-ip" value="10.0.0.1" size="9"></label>
        <label>ttl <input id="pub-ttl" type="number" value="200" min="1"></label>
        <button id="btn-publish">publish</button>
        <br>
        <label>origin <input id="lookup-origin" type="number" value="0" min="0"></label>
        <label>name <input id="lookup-name" value="svc.local" size="10"></label>
        <button id="btn-lookup">lookup</button>
        <div id="lookup-result" class="lookup-result"></div>
      </fieldset>
    `;
    this.error = this.root.querySelector("#panel-error")!;
    this.wire("#btn-create", () => this.createNetwork());
    this.wire("#btn-split", () => this.split());
    this.wire("#btn-heal-all", () => this.healAll());
    this.wire("#btn-heal-pair", () => this.healPair());
    this.wire("#btn-step", () => this.step());
    this.wire("#btn-publish", () => this.publish());
    this.wire("#btn-lookup", () => this.lookup());
  }

  private wire(selector: string, handler: () => Promise<void>) {
    this.root.querySelector<HTMLButtonElement>(selector)!.addEventListener("click", () => {
      void this.guarded(handler);
    });
  }

  private value(selector: string): string {
    return this.root.querySelector<HTMLInputElement>(selector)!.value;
  }

  private async guarded(action: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.setDisabled(true);
    this.showError(null);
    try {
      await action();
      await this.callbacks.refresh();
    } catch (err) {
      this.showError(err instanceof ApiError ? err.detail : String(err));
    } finally {
      this.busy = false;
      this.setDisabled(false);
    }
  }

  private setDisabled(disabled: boolean) {
    for (const b of this.root.querySelectorAll("button")) b.disabled = disabled;
  }

  private showError(message: string | null) {
    this.error.hidden = message === null;
    this.error.textContent = message ?? "";
  }

  private async createNetwork(): Promise<void> {
    const n = Number(this.value("#net-n"));
    const seed = Number(this.value("#net-seed"));
    await this.api.createNetwork(n, seed);
  }

  private async split(): Promise<void> {
    const k = Number(this.value("#split-k"));
    if (!Number.isInteger(k) || k < 2 || k > 5) {
      throw new Error("fragment count must be between 2 and 5");
    }
    const state = await this.api.state();
    const live = state.nodes.filter((n) => n.active).map((n) => n.id);
    await this.api.split(splitIntoArcs(live, k));
  }

  private async healAll(): Promise<void> {
    await this.api.heal("all");
  }

  private async healPair(): Promise<void> {
    const ids = this.value("#heal-ids")
      .split(",")
      .map((s) => Number(s.trim()))
      .filter((x) => Number.isInteger(x));
    if (ids.length < 2) throw new Error("give at least two partition ids, e.g. 0,6");
    await this.api.heal(ids);
  }

  private async step(): Promise<void> {
    const rounds = Number(this.value("#step-rounds"));
    if (!Number.isInteger(rounds) || rounds < 1) {
      throw new Error("rounds must be a positive integer");
    }
    const resp = await this.api.step(rounds);
    this.callbacks.onMetrics(resp.metrics);
  }

  private async publish(): Promise<void> {
    await this.api.publish(
      Number(this.value("#pub-node")),
      this.value("#pub-name"),
      this.value("#pub-ip"),
      Number(this.value("#pub-ttl")),
    );
  }

  private async lookup(): Promise<void> {
    const result = await this.api.lookup(
      Number(this.value("#lookup-origin")),
      this.value("#lookup-name"),
    );
    this.renderLookup(result);
    this.callbacks.onLookup(result);
  }

  renderLookup(result: LookupResponse): void {
    const box = this.root.querySelector<HTMLElement>("#lookup-result")!;
    const cls = result.outcome === "FOUND" ? "found" : "missing";
    const record = result.record
      ? ` → ${result.record.ip} (ttl ${result.record.ttl}, v${result.record.version.join(".")}` +
        `${result.authoritative === false ? ", non-authoritative" : ""})`
      : "";
    box.innerHTML =
      `<span class="outcome ${cls}" data-outcome="${result.outcome}">${result.outcome}</span>` +
      `<span class="hops"> ${result.hops} hops</span>` +
      `<span class="path"> path ${result.path.join(" → ")}</span>` +
      `<span class="record">${record}</span>`;
  }
}

/** Round/convergence/message counters, straight from backend metrics. */
export class MetricsPanel {
  readonly root: HTMLElement;

  constructor() {
    this.root = document.createElement("div");
    this.root.className = "metrics-panel";
    this.root.innerHTML = `
      <span id="metric-round">round 0</span>
      <span id="metric-components">1 component</span>
      <span id="metric-badge" class="badge" data-converged="false">converging…</span>
      <span id="metric-msgs"></span>
    `;
  }

  update(state: NetworkState): void {
    this.root.querySelector("#metric-round")!.textContent = `round ${state.round}`;
    this.root.querySelector("#metric-components")!.textContent =
      `${state.components} component${state.components === 1 ? "" : "s"}`;
    const badge = this.root.querySelector<HTMLElement>("#metric-badge")!;
    badge.dataset.converged = String(state.converged);
    badge.textContent = state.converged ? "converged" : "converging…";
  }

  /** Message counters exactly as the backend reported them. */
  showMetrics(rows: StepMetrics[]): void {
    if (rows.length === 0) return;
    const gossip = rows.reduce((acc, r) => acc + r.gossip_sent, 0);
    const records = rows.reduce((acc, r) => acc + r.record_sent, 0);
    const baseline = rows.reduce((acc, r) => acc + r.baseline_reference, 0);
    this.root.querySelector("#metric-msgs")!.textContent =
      `last step: ${gossip} gossip + ${records} record msgs ` +
      `(fanout-3 baseline would be ${baseline})`;
  }
}
