// End-to-end steering flow against the real backend: split into three
// partitions, step, heal everything, step again, and confirm the view
// settles on one partition color with the convergence badge lit; then
// publish a name and watch a lookup resolve with its hop path.
import { beforeAll, describe, expect, it } from "vitest";

import { App } from "../src/app.js";

const BASE = process.env.RINGGOSSIP_API ?? "http://127.0.0.1:18743";

function click(root: HTMLElement, selector: string) {
  root.querySelector<HTMLButtonElement>(selector)!.click();
}

function setValue(root: HTMLElement, selector: string, value: string) {
  root.querySelector<HTMLInputElement>(selector)!.value = value;
}

async function idle(root: HTMLElement) {
  // wait until the panel re-enables its buttons (single in-flight rule)
  const button = root.querySelector<HTMLButtonElement>("#btn-step")!;
  for (let i = 0; i < 400; i++) {
    await new Promise((resolve) => setTimeout(resolve, 25));
    if (!button.disabled) return;
  }
  throw new Error("panel stayed busy");
}

function distinctNodeColors(root: HTMLElement): Set<string> {
  const circles = root.querySelectorAll("svg.ring g.ring-node circle");
  expect(circles.length).toBeGreaterThan(0);
  return new Set([...circles].map((c) => c.getAttribute("fill")!));
}

describe("steering the live backend through the panel", () => {
  let app: App;

  beforeAll(async () => {
    document.body.replaceChildren();
    app = new App(BASE);
    document.body.append(app.root);
    setValue(app.root, "#net-n", "16");
    setValue(app.root, "#net-seed", "7");
    click(app.root, "#btn-create");
    await idle(app.root);
    await app.refresh();
  });

  it("split(3) → step(10) → heal(all) → step(20) ends in one color, converged", async () => {
    setValue(app.root, "#split-k", "3");
    click(app.root, "#btn-split");
    await idle(app.root);

    setValue(app.root, "#step-rounds", "10");
    click(app.root, "#btn-step");
    await idle(app.root);
    await app.refresh();
    // three fragments, three colors; each fragment converges on its own
    expect(distinctNodeColors(app.root).size).toBe(3);
    expect(app.root.querySelector("#metric-components")!.textContent).toBe("3 components");

    click(app.root, "#btn-heal-all");
    await idle(app.root);
    setValue(app.root, "#step-rounds", "20");
    click(app.root, "#btn-step");
    await idle(app.root);
    await app.refresh();

    expect(distinctNodeColors(app.root).size).toBe(1);
    expect(app.root.querySelector("#metric-components")!.textContent).toBe("1 component");
    const badge = app.root.querySelector<HTMLElement>("#metric-badge")!;
    expect(badge.dataset.converged).toBe("true");
    expect(badge.textContent).toBe("converged");
  });

  it("publish → step → lookup shows FOUND with the hop path", async () => {
    setValue(app.root, "#pub-node", "3");
    setValue(app.root, "#pub-name", "printer.local");
    setValue(app.root, "#pub-ip", "10.0.0.9");
    setValue(app.root, "#pub-ttl", "300");
    click(app.root, "#btn-publish");
    await idle(app.root);

    setValue(app.root, "#step-rounds", "2");
    click(app.root, "#btn-step");
    await idle(app.root);

    setValue(app.root, "#lookup-origin", "11");
    setValue(app.root, "#lookup-name", "printer.local");
    click(app.root, "#btn-lookup");
    await idle(app.root);

    const box = app.root.querySelector<HTMLElement>("#lookup-result")!;
    const outcome = box.querySelector<HTMLElement>(".outcome")!;
    expect(outcome.dataset.outcome).toBe("FOUND");
    expect(box.textContent).toContain("10.0.0.9");
    const path = box.querySelector<HTMLElement>(".path")!.textContent!;
    expect(path).toMatch(/path 11( → \d+)*/);
    expect(box.querySelector(".hops")!.textContent).toMatch(/\d+ hops/);
  });

  it("event feed streamed the merge decisions", async () => {
    await app.refresh();
    const items = [...app.root.querySelectorAll(".event-feed li")];
    const types = items.map((li) => (li as HTMLElement).dataset.type);
    expect(types).toContain("merge");
    expect(types).toContain("converged");
    expect(types).toContain("split");
  });
});
