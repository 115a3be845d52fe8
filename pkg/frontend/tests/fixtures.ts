import type {
  ClassifyJson,
  FilterJson,
  HistogramJson,
  SchemaJson,
  SessionJson,
  StepJson,
  ValueMatch,
} from "../src/types.js";

export function footballSchema(): SchemaJson {
  return {
    graphVersion: 1,
    nodeClasses: [
      {
        name: "Team",
        count: 4,
        attributes: [{ key: "name", kind: "text" }],
      },
      {
        name: "Player",
        count: 9,
        attributes: [
          { key: "name", kind: "text" },
          { key: "position", kind: "text" },
        ],
      },
      { name: "Game", count: 3, attributes: [{ key: "week", kind: "integer" }] },
      {
        name: "TeamGameStats",
        count: 6,
        attributes: [
          { key: "outcome", kind: "text" },
          { key: "points", kind: "integer" },
        ],
      },
      { name: "Stadium", count: 2, attributes: [{ key: "name", kind: "text" }] },
    ],
    edgeClasses: [
      { name: "playsFor", count: 9, directedness: "directed", derived: false },
      { name: "playedIn", count: 6, directedness: "undirected", derived: false },
      { name: "homeStadium", count: 2, directedness: "directed", derived: false },
    ],
    connections: {
      Team: [
        { edgeClass: "playsFor", otherClass: "Player", count: 9, reverse: true },
        { edgeClass: "playedIn", otherClass: "Game", count: 6, reverse: false },
        { edgeClass: "homeStadium", otherClass: "Stadium", count: 2, reverse: false },
      ],
      Player: [
        { edgeClass: "playsFor", otherClass: "Team", count: 9, reverse: false },
      ],
      Game: [
        { edgeClass: "playedIn", otherClass: "Team", count: 6, reverse: false },
      ],
      TeamGameStats: [],
      Stadium: [
        { edgeClass: "homeStadium", otherClass: "Team", count: 2, reverse: true },
      ],
    },
  };
}

export function step(partial: Partial<StepJson> & { index: number; category: string }): StepJson {
  return {
    baseSet: [],
    activeSet: [],
    witnessedEdges: [],
    mode: "select",
    modeRequested: null,
    edgeClass: null,
    direction: null,
    warning: null,
    smart: null,
    filters: [],
    ...partial,
  };
}

export function filterSpec(partial: Partial<FilterJson> & { id: number }): FilterJson {
  return {
    kind: "attribute",
    appliedAtStep: 0,
    active: true,
    effective: true,
    label: `f${partial.id}`,
    ...partial,
  };
}

export function session(
  steps: StepJson[],
  opts: { globalScope?: boolean; histogram?: HistogramJson | null } = {},
): SessionJson {
  return {
    id: "s1",
    graphVersion: 1,
    globalScope: opts.globalScope ?? true,
    steps,
    operationLog: [],
    histogram: opts.histogram ?? null,
  };
}

export function classifyReport(partial: Partial<ClassifyJson>): ClassifyJson {
  return {
    class: "Team",
    classification: "PivotsOnly",
    suggestedMode: "fanout",
    rationale: "NotAmbiguous",
    overridable: true,
    priorVisitStep: null,
    interveningFilterSteps: [],
    reappliedFilters: [],
    droppedFilters: [],
    alternatives: [
      { mode: "fanin", description: "keep the earlier filters in force" },
      { mode: "fanout", description: "take every connected node" },
    ],
    note: null,
    ...partial,
  };
}

export function named(id: number, label: string): { id: number; label: string } {
  return { id, label };
}

export function match(cls: string, key: string, value: string): ValueMatch {
  return { nodeId: `${cls}-${value}`, class: cls, key, value, label: value };
}
