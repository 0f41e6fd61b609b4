import { ApiClient } from "./api.js";

const FEED_LIMIT = 200;

/** Cursor-based event-log tail; the backend is the source of truth. */
export class EventFeed {
  readonly root: HTMLElement;
  private cursor = 0;

  constructor(private api: ApiClient) {
    this.root = document.createElement("div");
    this.root.className = "event-feed";
    this.root.innerHTML = `<h3>events</h3><ul id="feed-list"></ul>`;
  }

  reset(): void {
    this.cursor = 0;
    this.root.querySelector("#feed-list")!.replaceChildren();
  }

  async poll(): Promise<void> {
    const { events, next } = await this.api.events(this.cursor);
    this.cursor = next;
    if (events.length === 0) return;
    const list = this.root.querySelector<HTMLUListElement>("#feed-list")!;
    for (const event of events) {
      const item = document.createElement("li");
      item.textContent = describe(event as Record<string, unknown>);
      item.dataset.type = String((event as Record<string, unknown>).type);
      list.prepend(item);
    }
    while (list.childElementCount > FEED_LIMIT) list.lastElementChild!.remove();
  }
}

function describe(event: Record<string, unknown>): string {
  switch (event.type) {
    case "network":
      return `r${event.round} network created: n=${event.n}, m=${event.m}, seed=${event.seed}`;
    case "split":
      return `r${event.round} split into partitions ${JSON.stringify(event.partition_ids)}`;
    case "heal":
      return `r${event.round} heal ${JSON.stringify(event.partitions)}`;
    case "merge":
      return `r${event.round} node ${event.node} merged P${event.from} → P${event.to}`;
    case "converged":
      return `r${event.round} component ${event.component} converged`;
    case "publish":
      return `r${event.round} publish ${event.name} (${event.outcome})`;
    case "lookup":
      return `r${event.round} lookup ${event.name} from ${event.origin}: ${event.outcome} in ${event.hops} hops`;
    case "kill":
      return `r${event.round} node ${event.node} killed`;
    case "revive":
      return `r${event.round} node ${event.node} revived`;
    case "violation":
      return `r${event.round} INVARIANT ${event.invariant} at node ${event.node}: ${event.detail}`;
    case "stop":
      return `r${event.round} run stopped (${event.reason})`;
    default:
      return JSON.stringify(event);
  }
}
