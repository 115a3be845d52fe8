export class ApiError extends Error {
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function parseError(res) {
    let code = "http_error";
    let message = res.statusText;
    try {
        const body = await res.json();
        // 404s arrive as {detail: {error, message}}, domain errors flat
        const payload = body.detail && typeof body.detail === "object" ? body.detail : body;
        if (typeof payload.error === "string")
            code = payload.error;
        if (typeof payload.message === "string")
            message = payload.message;
        else if (typeof payload.detail === "string")
            message = payload.detail;
    }
    catch {
        // non-JSON body; keep statusText
    }
    return new ApiError(res.status, code, message);
}
export class ApiClient {
    constructor(base = "") {
        this.base = base;
    }
    async request(path, init) {
        const res = await fetch(this.base + path, init);
        if (!res.ok)
            throw await parseError(res);
        return (await res.json());
    }
    post(path, body) {
        return this.request(path, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: body === undefined ? "{}" : JSON.stringify(body),
        });
    }
    schema(sessionId) {
        const q = sessionId ? `?session=${encodeURIComponent(sessionId)}` : "";
        return this.request(`/api/schema${q}`);
    }
    values(q, opts = {}) {
        const params = new URLSearchParams({ q });
        if (opts.cls)
            params.set("cls", opts.cls);
        if (opts.key)
            params.set("key", opts.key);
        if (opts.limit)
            params.set("limit", String(opts.limit));
        if (opts.sessionId)
            params.set("session", opts.sessionId);
        return this.request(`/api/values?${params}`);
    }
    createSession() {
        return this.post("/api/session");
    }
    getSession(id) {
        return this.request(`/api/session/${id}`);
    }
    select(id, cls, predicates) {
        const body = { class: cls };
        if (predicates && predicates.length)
            body.predicates = predicates;
        return this.post(`/api/session/${id}/select`, body);
    }
    pivot(id, cls, opts = {}) {
        const body = { class: cls };
        if (opts.via)
            body.via = opts.via;
        if (opts.mode)
            body.mode = opts.mode;
        if (opts.direction)
            body.direction = opts.direction;
        return this.post(`/api/session/${id}/pivot`, body);
    }
    filter(id, predicate) {
        return this.post(`/api/session/${id}/filter`, predicate);
    }
    group(id, key, opts = {}) {
        const body = { key };
        if (opts.sort)
            body.sort = opts.sort;
        if (opts.bins)
            body.bins = opts.bins;
        return this.post(`/api/session/${id}/group`, body);
    }
    bins(id, labels) {
        return this.post(`/api/session/${id}/bins`, { labels });
    }
    snip(id, filterId) {
        return this.post(`/api/session/${id}/snip/${filterId}`);
    }
    scope(id, on) {
        return this.post(`/api/session/${id}/scope`, on === undefined ? {} : { on });
    }
    undo(id) {
        return this.post(`/api/session/${id}/undo`);
    }
    clear(id) {
        return this.post(`/api/session/${id}/clear`);
    }
    classify(id, cls) {
        return this.request(`/api/session/${id}/classify?class=${encodeURIComponent(cls)}`);
    }
    describe(id) {
        return this.request(`/api/session/${id}/describe`);
    }
    exportUrl(id, format) {
        return `${this.base}/api/session/${id}/export?format=${encodeURIComponent(format)}`;
    }
    proposals() {
        return this.request(`/api/adapt/proposals`);
    }
    applyProposal(proposalId) {
        return this.post(`/api/adapt/apply/${proposalId}`);
    }
}
