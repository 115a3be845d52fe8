import type { SessionJson } from "../types.js";

export interface Crumb {
  index: number;
  category: string;
  mode: string;
  size: number;
  filterBadges: string[];
  warning: string | null;
}

/** One entry per step: category, executed mode, set size, filter badges. */
export function buildBreadcrumbs(session: SessionJson): Crumb[] {
  return session.steps.map((step) => ({
    index: step.index,
    category: step.category,
    mode: step.mode,
    size: step.activeSet.length,
    filterBadges: step.filters.map((f) => f.label),
    warning: step.warning,
  }));
}
