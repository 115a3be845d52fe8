import { describe, expect, it } from "vitest";

import { RevisionGate } from "../src/revision.js";

describe("RevisionGate", () => {
  it("only the newest ticket is current", () => {
    const gate = new RevisionGate();
    const a = gate.take();
    const b = gate.take();
    expect(gate.isCurrent(a)).toBe(false);
    expect(gate.isCurrent(b)).toBe(true);
  });

  it("a slow early response loses to a fast late one", async () => {
    const gate = new RevisionGate();
    const applied: string[] = [];

    async function call(name: string, delay: number): Promise<void> {
      const ticket = gate.take();
      await new Promise((r) => setTimeout(r, delay));
      if (gate.isCurrent(ticket)) applied.push(name);
    }

    await Promise.all([call("slow-first", 25), call("fast-second", 1)]);
    expect(applied).toEqual(["fast-second"]);
  });
});
