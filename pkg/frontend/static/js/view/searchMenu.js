export function currentCategory(session) {
    if (!session || session.steps.length === 0)
        return null;
    return session.steps[session.steps.length - 1].category;
}
/** Classes reachable from the current step, with total connection counts. */
export function connectedClasses(schema, session) {
    const out = new Map();
    const category = currentCategory(session);
    if (category === null) {
        for (const nc of schema.nodeClasses)
            out.set(nc.name, nc.count);
        return out;
    }
    for (const conn of schema.connections[category] ?? []) {
        out.set(conn.otherClass, (out.get(conn.otherClass) ?? 0) + conn.count);
    }
    return out;
}
export function buildSearchMenu(schema, session, query, valueMatches) {
    const needle = query.trim().toLowerCase();
    const connected = connectedClasses(schema, session);
    const entries = [];
    for (const [name, count] of connected) {
        // class-name text matches class entries, so typing "Team" finds the
        // class instead of silently emptying the menu
        if (needle && !name.toLowerCase().includes(needle))
            continue;
        entries.push({ name, connectionCount: count, weight: 0 });
    }
    entries.sort((a, b) => b.connectionCount - a.connectionCount || a.name.localeCompare(b.name));
    const max = entries.reduce((m, e) => Math.max(m, e.connectionCount), 0);
    for (const e of entries)
        e.weight = max > 0 ? e.connectionCount / max : 0;
    // an empty query lists the structural moves only
    const values = needle
        ? valueMatches
            .filter((m) => connected.has(m.class))
            .map((m) => ({ class: m.class, key: m.key, value: m.value, label: m.label }))
        : [];
    return { classes: entries, values };
}
