import type { SchemaJson, SessionJson, ValueMatch } from "../types.js";

// One search affordance covers both structural moves (pivot to a class)
// and value moves (select or filter by attribute value): classes render
// above a divider, value matches below it.

export interface ClassEntry {
  name: string;
  connectionCount: number;
  // 0..1 share of the strongest connection, for line-thickness rendering
  weight: number;
}

export interface ValueEntry {
  class: string;
  key: string;
  value: ValueMatch["value"];
  label: string;
}

export interface MenuModel {
  classes: ClassEntry[];
  values: ValueEntry[];
}

export function currentCategory(session: SessionJson | null): string | null {
  if (!session || session.steps.length === 0) return null;
  return session.steps[session.steps.length - 1].category;
}

/** Classes reachable from the current step, with total connection counts. */
export function connectedClasses(
  schema: SchemaJson,
  session: SessionJson | null,
): Map<string, number> {
  const out = new Map<string, number>();
  const category = currentCategory(session);
  if (category === null) {
    for (const nc of schema.nodeClasses) out.set(nc.name, nc.count);
    return out;
  }
  for (const conn of schema.connections[category] ?? []) {
    out.set(conn.otherClass, (out.get(conn.otherClass) ?? 0) + conn.count);
  }
  return out;
}

export function buildSearchMenu(
  schema: SchemaJson,
  session: SessionJson | null,
  query: string,
  valueMatches: ValueMatch[],
): MenuModel {
  const needle = query.trim().toLowerCase();
  const connected = connectedClasses(schema, session);

  const entries: ClassEntry[] = [];
  for (const [name, count] of connected) {
    // class-name text matches class entries, so typing "Team" finds the
    // class instead of silently emptying the menu
    if (needle && !name.toLowerCase().includes(needle)) continue;
    entries.push({ name, connectionCount: count, weight: 0 });
  }
  entries.sort((a, b) => b.connectionCount - a.connectionCount || a.name.localeCompare(b.name));
  const max = entries.reduce((m, e) => Math.max(m, e.connectionCount), 0);
  for (const e of entries) e.weight = max > 0 ? e.connectionCount / max : 0;

  // an empty query lists the structural moves only
  const values: ValueEntry[] = needle
    ? valueMatches
        .filter((m) => connected.has(m.class))
        .map((m) => ({ class: m.class, key: m.key, value: m.value, label: m.label }))
    : [];

  return { classes: entries, values };
}
