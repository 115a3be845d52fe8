export function buildFilterLines(session) {
    const lines = [];
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
