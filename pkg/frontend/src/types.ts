// JSON contracts of the pivot service. Field names mirror the wire format.

export type AttributeValue = string | number | boolean | null;

export interface AttributePredicate {
  kind: "attribute";
  key: string;
  op: "==" | "!=" | "<" | "<=" | ">" | ">=" | "contains" | "in";
  literal: AttributeValue | AttributeValue[];
}

export interface DegreePredicate {
  kind: "degree";
  direction: "in" | "out" | "any";
  op: string;
  threshold: number;
}

export type Predicate = AttributePredicate | DegreePredicate;

export interface FilterJson {
  id: number;
  kind: "attribute" | "degree" | "bins";
  appliedAtStep: number;
  active: boolean;
  effective: boolean;
  label: string;
  key?: string;
  op?: string;
  literal?: AttributeValue | AttributeValue[];
  direction?: string;
  threshold?: number;
  binning?: unknown[];
  labels?: string[];
}

export interface StepJson {
  index: number;
  category: string;
  baseSet: string[];
  activeSet: string[];
  witnessedEdges: string[];
  mode: string;
  modeRequested: string | null;
  edgeClass: string | null;
  direction: string | null;
  warning: string | null;
  smart: Record<string, unknown> | null;
  filters: FilterJson[];
}

export interface HistogramBinJson {
  label: string;
  count: number;
  selected: boolean;
}

export interface HistogramJson {
  key: string;
  sort: [string, string];
  binning: unknown[];
  stepIndex: number;
  bins: HistogramBinJson[];
}

export interface SessionJson {
  id: string;
  graphVersion: number;
  globalScope: boolean;
  steps: StepJson[];
  operationLog: Record<string, unknown>[];
  histogram: HistogramJson | null;
}

export interface AttributeInfo {
  key: string;
  kind: string;
}

export interface NodeClassJson {
  name: string;
  count: number;
  attributes: AttributeInfo[];
}

export interface EdgeClassJson {
  name: string;
  count: number;
  directedness: string;
  derived: boolean;
}

export interface ConnectionJson {
  edgeClass: string;
  otherClass: string;
  count: number;
  reverse: boolean;
}

export interface SchemaJson {
  graphVersion: number;
  nodeClasses: NodeClassJson[];
  edgeClasses: EdgeClassJson[];
  connections: Record<string, ConnectionJson[]>;
}

export interface ValueMatch {
  nodeId: string;
  class: string;
  key: string;
  value: AttributeValue;
  label: string;
}

export interface ValuesJson {
  matches: ValueMatch[];
  truncated: boolean;
}

export interface NamedFilterJson {
  id: number;
  label: string;
}

export interface ModeChoiceJson {
  mode: string;
  description: string;
}

export interface ClassifyJson {
  class: string;
  classification: "PivotsOnly" | "FilteredAcyclic" | "FilteredCycle";
  suggestedMode: "fanin" | "fanout";
  rationale: string;
  overridable: boolean;
  priorVisitStep: number | null;
  interveningFilterSteps: number[];
  reappliedFilters: NamedFilterJson[];
  droppedFilters: NamedFilterJson[];
  alternatives: ModeChoiceJson[];
  note: string | null;
}

export interface DescribeRowJson {
  index: number;
  category: string;
  mode: string;
  filters: string[];
  size: number;
}

export interface ProposalJson {
  id: string;
  rewrite: string;
  occurrenceCount: number;
  threshold: number;
  applied: boolean;
  newEdgeClass?: string;
  startClass?: string;
  viaPath?: string[];
  endClass?: string;
  filteredAtEnd?: boolean;
  newNodeClass?: string;
  attributeKey?: string;
}
