import { describe, expect, it } from "vitest";

import { buildFilterLines } from "../src/view/filterLines.js";
import { filterSpec, session, step } from "./fixtures.js";

describe("buildFilterLines", () => {
  it("no filters means no lines", () => {
    const s = session([step({ index: 0, category: "Team" })]);
    expect(buildFilterLines(s).lines).toEqual([]);
  });

  it("one line per direct filter, spanning to the newest step", () => {
    const s = session([
      step({
        index: 0,
        category: "Team",
        filters: [filterSpec({ id: 1, appliedAtStep: 0, label: 'name == "FSU"' })],
      }),
      step({ index: 1, category: "Player" }),
      step({
        index: 2,
        category: "Game",
        filters: [filterSpec({ id: 2, appliedAtStep: 2, label: "week > 3" })],
      }),
    ]);
    const model = buildFilterLines(s);
    expect(model.lines).toHaveLength(2);
    expect(model.lines[0]).toMatchObject({
      filterId: 1,
      label: 'name == "FSU"',
      fromStep: 0,
      toStep: 2,
      effective: true,
    });
    expect(model.lines[1]).toMatchObject({ filterId: 2, fromStep: 2, toStep: 2 });
    expect(model.scopeOn).toBe(true);
  });

  it("scope off renders every line ineffective", () => {
    const s = session(
      [
        step({
          index: 0,
          category: "Team",
          filters: [filterSpec({ id: 1, effective: false })],
        }),
      ],
      { globalScope: false },
    );
    const model = buildFilterLines(s);
    expect(model.scopeOn).toBe(false);
    expect(model.lines[0].effective).toBe(false);
    expect(model.lines[0].active).toBe(true);
  });

  it("a snipped filter keeps its line, marked inactive", () => {
    const s = session([
      step({
        index: 0,
        category: "Team",
        filters: [filterSpec({ id: 1, active: false, effective: false })],
      }),
    ]);
    const line = buildFilterLines(s).lines[0];
    expect(line.active).toBe(false);
    expect(line.effective).toBe(false);
  });
});
