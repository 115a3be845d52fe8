import type { SessionJson } from "../types.js";

// Every direct filter draws one horizontal line across the top of the
// interface, spanning from the step it was applied at to the newest step.
// Snipped or out-of-scope lines stay visible but dimmed, so the user can
// see what a toggle would restore.

export interface FilterLine {
  filterId: number;
  label: string;
  fromStep: number;
  toStep: number;
  active: boolean;
  effective: boolean;
}

export interface FilterLinesModel {
  lines: FilterLine[];
  scopeOn: boolean;
  stepCount: number;
}

export function buildFilterLines(session: SessionJson): FilterLinesModel {
  const lines: FilterLine[] = [];
  const last = session.steps.length - 1;
  for (const step of session.steps) {
    for (const f of step.filters) {
      lines.push({
        filterId: f.id,
        label: f.label,
        fromStep: f.appliedAtStep,
        toStep: last,
        active: f.active,
        effective: f.effective,
      });
    }
  }
  lines.sort((a, b) => a.filterId - b.filterId);
  return { lines, scopeOn: session.globalScope, stepCount: session.steps.length };
}
