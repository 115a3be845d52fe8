import type { SchemaJson, SessionJson } from "../types.js";

export interface BarModel {
  label: string;
  count: number;
  selected: boolean;
  // 0..1 share of the largest bin, for proportional bar lengths
  fraction: number;
}

export interface HistogramModel {
  key: string;
  bars: BarModel[];
  total: number;
}

export function buildHistogram(session: SessionJson): HistogramModel | null {
  const h = session.histogram;
  if (!h) return null;
  const max = h.bins.reduce((m, b) => Math.max(m, b.count), 0);
  const bars = h.bins.map((b) => ({
    label: b.label,
    count: b.count,
    selected: b.selected,
    fraction: max > 0 ? b.count / max : 0,
  }));
  const total = h.bins.reduce((sum, b) => sum + b.count, 0);
  return { key: h.key, bars, total };
}

/** The attribute a class is best described by: "name" when it has one,
 *  else its first text attribute, else its first attribute. */
export function principalKey(schema: SchemaJson, cls: string): string | null {
  const nc = schema.nodeClasses.find((c) => c.name === cls);
  if (!nc || nc.attributes.length === 0) return null;
  if (nc.attributes.some((a) => a.key === "name")) return "name";
  const text = nc.attributes.find((a) => a.kind === "text");
  return (text ?? nc.attributes[0]).key;
}

/** After a bin selection collapses the histogram to a single bin there is
 *  nothing left to distinguish, so the view regroups by the class's
 *  principal attribute. Returns the key to regroup by, or null. */
export function autoSwitchTarget(
  schema: SchemaJson,
  session: SessionJson,
): string | null {
  const h = session.histogram;
  if (!h || h.bins.length !== 1) return null;
  const step = session.steps[session.steps.length - 1];
  if (!step) return null;
  const target = principalKey(schema, step.category);
  if (target === null || target === h.key) return null;
  return target;
}
