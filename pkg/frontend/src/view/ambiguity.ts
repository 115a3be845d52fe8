import type { ClassifyJson } from "../types.js";

// Pivoting back to an already-filtered class is the one genuinely
// ambiguous move, so that exact case gets a confirmation dialog; every
// other pivot goes straight to the server.

export interface ModeChoice {
  mode: string;
  description: string;
}

export interface DialogModel {
  targetClass: string;
  suggestedMode: string;
  rationale: string;
  /** Labels of filters the suggested mode would re-apply (fanin) or drop. */
  namedFilters: string[];
  alternatives: ModeChoice[];
  note: string | null;
}

export function needsPrompt(report: ClassifyJson): boolean {
  return report.classification === "FilteredCycle";
}

export function buildDialog(report: ClassifyJson): DialogModel {
  const named =
    report.suggestedMode === "fanin" ? report.reappliedFilters : report.droppedFilters;
  const alternatives = report.alternatives.filter(
    (a) => a.mode !== report.suggestedMode,
  );
  return {
    targetClass: report.class,
    suggestedMode: report.suggestedMode,
    rationale: report.rationale,
    namedFilters: named.map((f) => f.label),
    alternatives,
    note: report.note,
  };
}
