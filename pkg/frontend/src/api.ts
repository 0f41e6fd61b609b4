import type { LookupResponse, NetworkState, StepResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`api ${status}: ${detail}`);
  }
}

/** Thin typed client over the control API. One instance per backend. */
export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.base + path, {
      method,
      headers: body !== undefined ? { "content-type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const parsed = await resp.json();
        detail = typeof parsed.detail === "string" ? parsed.detail : JSON.stringify(parsed.detail);
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    if (resp.headers.get("content-type")?.includes("json")) {
      return (await resp.json()) as T;
    }
    return (await resp.text()) as unknown as T;
  }

  createNetwork(n: number, seed: number, m?: number): Promise<{ network_id: number }> {
    return this.request("POST", "/network", { n, seed, ...(m !== undefined ? { m } : {}) });
  }

  state(): Promise<NetworkState> {
    return this.request("GET", "/state");
  }

  split(fragments: number[][]): Promise<{ partition_ids: number[] }> {
    return this.request("POST", "/split", { fragments });
  }

  heal(partitions: number[] | "all"): Promise<{ partitions: number[] }> {
    return this.request("POST", "/heal", { partitions });
  }

  step(rounds: number): Promise<StepResponse> {
    return this.request("POST", "/step", { rounds });
  }

  publish(node: number, name: string, ip: string, ttl: number): Promise<{ queued_for_round: number }> {
    return this.request("POST", "/publish", { node, name, ip, ttl });
  }

  lookup(origin: number, name: string): Promise<LookupResponse> {
    return this.request("POST", "/lookup", { origin, name });
  }

  /** Fetch event-log lines from the cursor; returns parsed objects. */
  async events(since: number): Promise<{ events: object[]; next: number }> {
    const text = await this.request<string>("GET", `/events?since=${since}`);
    const lines = text.split("\n").filter((l) => l.length > 0);
    return { events: lines.map((l) => JSON.parse(l)), next: since + lines.length };
  }
}
