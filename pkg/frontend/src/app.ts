import { ApiClient } from "./api.js";
import { ControlPanel, MetricsPanel } from "./control-panel.js";
import { EventFeed } from "./event-feed.js";
import { nodeSummary, renderRing } from "./ring-view.js";
import type { LookupResponse, NetworkState } from "./types.js";

const POLL_MS = 1000;

/**
 * Wires the ring view, control panel, metrics, and event feed together.
 * Stateless beyond view preferences: every render derives from GET
 * /state, so a reload reproduces the exact display.
 */
export class App {
  readonly root: HTMLElement;
  private api: ApiClient;
  private svg: SVGSVGElement;
  private banner: HTMLElement;
  private detail: HTMLElement;
  private panel: ControlPanel;
  private metrics: MetricsPanel;
  private feed: EventFeed;
  private lastLookupPath: number[] = [];
  private lastState: NetworkState | null = null;

  constructor(base = "") {
    this.api = new ApiClient(base);
    this.root = document.createElement("div");
    this.root.className = "app";
    this.banner = document.createElement("div");
    this.banner.className = "banner";
    this.banner.hidden = true;
    this.svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.setAttribute("class", "ring");
    this.detail = document.createElement("div");
    this.detail.className = "node-detail";
    this.metrics = new MetricsPanel();
    this.feed = new EventFeed(this.api);
    this.panel = new ControlPanel(this.api, {
      refresh: () => this.refresh(),
      onMetrics: (rows) => this.metrics.showMetrics(rows),
      onLookup: (result: LookupResponse) => {
        this.lastLookupPath = result.path;
        if (this.lastState) this.renderState(this.lastState);
      },
    });

    const main = document.createElement("div");
    main.className = "main";
    main.append(this.svg, this.detail);
    const side = document.createElement("div");
    side.className = "side";
    side.append(this.metrics.root, this.panel.root, this.feed.root);
    this.root.append(this.banner, main, side);
  }

  async refresh(): Promise<void> {
    try {
      const state = await this.api.state();
      this.banner.hidden = true;
      this.renderState(state);
      await this.feed.poll();
    } catch (err) {
      this.banner.hidden = false;
      this.banner.textContent = `backend unreachable (${String(err)}) — retrying…`;
    }
  }

  private renderState(state: NetworkState): void {
    if (this.lastState && this.lastState.network_id !== state.network_id) {
      this.feed.reset();
      this.lastLookupPath = [];
    }
    this.lastState = state;
    renderRing(this.svg, state, {
      onSelect: (node) => {
        this.detail.textContent = nodeSummary(node);
      },
    }, this.lastLookupPath);
    this.metrics.update(state);
  }

  start(): void {
    void this.refresh();
    setInterval(() => void this.refresh(), POLL_MS);
  }
}

export function mount(target: HTMLElement, base = ""): App {
  const app = new App(base);
  target.append(app.root);
  app.start();
  return app;
}
