export function needsPrompt(report) {
    return report.classification === "FilteredCycle";
}
export function buildDialog(report) {
    const named = report.suggestedMode === "fanin" ? report.reappliedFilters : report.droppedFilters;
    const alternatives = report.alternatives.filter((a) => a.mode !== report.suggestedMode);
    return {
        targetClass: report.class,
        suggestedMode: report.suggestedMode,
        rationale: report.rationale,
        namedFilters: named.map((f) => f.label),
        alternatives,
        note: report.note,
    };
}
