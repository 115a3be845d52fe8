import type {
  ClassifyJson,
  DescribeRowJson,
  Predicate,
  ProposalJson,
  SchemaJson,
  SessionJson,
  ValuesJson,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let code = "http_error";
  let message = res.statusText;
  try {
    const body = await res.json();
    // 404s arrive as {detail: {error, message}}, domain errors flat
    const payload = body.detail && typeof body.detail === "object" ? body.detail : body;
    if (typeof payload.error === "string") code = payload.error;
    if (typeof payload.message === "string") message = payload.message;
    else if (typeof payload.detail === "string") message = payload.detail;
  } catch {
    // non-JSON body; keep statusText
  }
  return new ApiError(res.status, code, message);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
  }

  schema(sessionId?: string): Promise<SchemaJson> {
    const q = sessionId ? `?session=${encodeURIComponent(sessionId)}` : "";
    return this.request<SchemaJson>(`/api/schema${q}`);
  }

  values(
    q: string,
    opts: { cls?: string; key?: string; limit?: number; sessionId?: string } = {},
  ): Promise<ValuesJson> {
    const params = new URLSearchParams({ q });
    if (opts.cls) params.set("cls", opts.cls);
    if (opts.key) params.set("key", opts.key);
    if (opts.limit) params.set("limit", String(opts.limit));
    if (opts.sessionId) params.set("session", opts.sessionId);
    return this.request<ValuesJson>(`/api/values?${params}`);
  }

  createSession(): Promise<SessionJson> {
    return this.post<SessionJson>("/api/session");
  }

  getSession(id: string): Promise<SessionJson> {
    return this.request<SessionJson>(`/api/session/${id}`);
  }

  select(id: string, cls: string, predicates?: Predicate[]): Promise<SessionJson> {
    const body: Record<string, unknown> = { class: cls };
    if (predicates && predicates.length) body.predicates = predicates;
    return this.post<SessionJson>(`/api/session/${id}/select`, body);
  }

  pivot(
    id: string,
    cls: string,
    opts: { via?: string; mode?: string; direction?: string } = {},
  ): Promise<SessionJson> {
    const body: Record<string, unknown> = { class: cls };
    if (opts.via) body.via = opts.via;
    if (opts.mode) body.mode = opts.mode;
    if (opts.direction) body.direction = opts.direction;
    return this.post<SessionJson>(`/api/session/${id}/pivot`, body);
  }

  filter(id: string, predicate: Predicate): Promise<SessionJson> {
    return this.post<SessionJson>(`/api/session/${id}/filter`, predicate);
  }

  group(
    id: string,
    key: string,
    opts: { sort?: [string, string]; bins?: number } = {},
  ): Promise<SessionJson> {
    const body: Record<string, unknown> = { key };
    if (opts.sort) body.sort = opts.sort;
    if (opts.bins) body.bins = opts.bins;
    return this.post<SessionJson>(`/api/session/${id}/group`, body);
  }

  bins(id: string, labels: string[]): Promise<SessionJson> {
    return this.post<SessionJson>(`/api/session/${id}/bins`, { labels });
  }

  snip(id: string, filterId: number): Promise<SessionJson> {
    return this.post<SessionJson>(`/api/session/${id}/snip/${filterId}`);
  }

  scope(id: string, on?: boolean): Promise<SessionJson> {
    return this.post<SessionJson>(`/api/session/${id}/scope`, on === undefined ? {} : { on });
  }

  undo(id: string): Promise<SessionJson> {
    return this.post<SessionJson>(`/api/session/${id}/undo`);
  }

  clear(id: string): Promise<SessionJson> {
    return this.post<SessionJson>(`/api/session/${id}/clear`);
  }

  classify(id: string, cls: string): Promise<ClassifyJson> {
    return this.request<ClassifyJson>(
      `/api/session/${id}/classify?class=${encodeURIComponent(cls)}`,
    );
  }

  describe(id: string): Promise<{ id: string; chain: DescribeRowJson[] }> {
    return this.request<{ id: string; chain: DescribeRowJson[] }>(
      `/api/session/${id}/describe`,
    );
  }

  exportUrl(id: string, format: string): string {
    return `${this.base}/api/session/${id}/export?format=${encodeURIComponent(format)}`;
  }

  proposals(): Promise<{ theta: number; graphVersion: number; proposals: ProposalJson[] }> {
    return this.request(`/api/adapt/proposals`);
  }

  applyProposal(proposalId: string): Promise<Record<string, unknown>> {
    return this.post(`/api/adapt/apply/${proposalId}`);
  }
}
