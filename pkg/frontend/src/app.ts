import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { RevisionGate } from "./revision.js";
import type {
  AttributePredicate,
  ClassifyJson,
  SchemaJson,
  SessionJson,
  ValueMatch,
} from "./types.js";
import { buildDialog, needsPrompt, type DialogModel } from "./view/ambiguity.js";
import { buildBreadcrumbs } from "./view/breadcrumbs.js";
import { buildFilterLines } from "./view/filterLines.js";
import { autoSwitchTarget, buildHistogram } from "./view/histogram.js";
import { buildSearchMenu, currentCategory } from "./view/searchMenu.js";

const LINE_HINT =
  "Each line is one filter, spanning the steps it affects. Snip it with ✂, " +
  "or lift every filter at once with the scope button in the search field.";

interface PendingPivot {
  model: DialogModel;
  targetClass: string;
  /** Applied after the pivot resolves (search-driven value pivots). */
  followUp: AttributePredicate | null;
}

export class App {
  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private readonly gate = new RevisionGate();
  private readonly searchGate = new RevisionGate();

  private schema: SchemaJson | null = null;
  private session: SessionJson | null = null;
  private query = "";
  private valueMatches: ValueMatch[] = [];
  private pending: PendingPivot | null = null;
  private error: string | null = null;
  private hintDismissed = false;

  // skeleton regions, built once
  private strip!: HTMLElement;
  private crumbs!: HTMLElement;
  private histogramPane!: HTMLElement;
  private searchInput!: HTMLInputElement;
  private scopeButton!: HTMLButtonElement;
  private menu!: HTMLElement;
  private toolbar!: HTMLElement;
  private dialogHost!: HTMLElement;
  private status!: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
  }

  async start(): Promise<void> {
    this.buildSkeleton();
    this.schema = await this.api.schema();
    this.session = await this.api.createSession();
    this.render();
  }

  get sessionId(): string {
    if (!this.session) throw new Error("no session yet");
    return this.session.id;
  }

  // -- state transitions -------------------------------------------------

  private async mutate(call: Promise<SessionJson>): Promise<void> {
    const ticket = this.gate.take();
    try {
      const next = await call;
      if (!this.gate.isCurrent(ticket)) return;
      this.session = next;
      this.error = null;
    } catch (err) {
      if (!this.gate.isCurrent(ticket)) return;
      this.error = err instanceof ApiError ? err.message : String(err);
    }
    this.render();
  }

  private async refreshValues(): Promise<void> {
    const ticket = this.searchGate.take();
    if (!this.query.trim()) {
      this.valueMatches = [];
      this.renderMenu();
      return;
    }
    try {
      const res = await this.api.values(this.query.trim(), {
        limit: 25,
        sessionId: this.session?.id,
      });
      if (!this.searchGate.isCurrent(ticket)) return;
      this.valueMatches = res.matches;
    } catch {
      if (!this.searchGate.isCurrent(ticket)) return;
      this.valueMatches = [];
    }
    this.renderMenu();
  }

  /** Picking from the menu consumes the query, like any completion box. */
  private resetSearch(): void {
    this.query = "";
    this.valueMatches = [];
    this.searchInput.value = "";
  }

  private async chooseClass(cls: string): Promise<void> {
    if (!this.session) return;
    this.resetSearch();
    if (this.session.steps.length === 0) {
      await this.mutate(this.api.select(this.sessionId, cls));
      return;
    }
    await this.pivotWithPrompt(cls, null);
  }

  private async chooseValue(entry: {
    class: string;
    key: string;
    value: ValueMatch["value"];
  }): Promise<void> {
    if (!this.session) return;
    this.resetSearch();
    const predicate: AttributePredicate = {
      kind: "attribute",
      key: entry.key,
      op: "==",
      literal: entry.value,
    };
    if (this.session.steps.length === 0) {
      await this.mutate(this.api.select(this.sessionId, entry.class, [predicate]));
    } else if (entry.class === currentCategory(this.session)) {
      await this.mutate(this.api.filter(this.sessionId, predicate));
    } else {
      await this.pivotWithPrompt(entry.class, predicate);
    }
  }

  /** The ambiguity gate: ask the server how the pivot reads, prompt only
   *  on a filtered cycle, otherwise send the request directly. */
  private async pivotWithPrompt(
    cls: string,
    followUp: AttributePredicate | null,
  ): Promise<void> {
    let report: ClassifyJson;
    try {
      report = await this.api.classify(this.sessionId, cls);
    } catch (err) {
      this.error = err instanceof ApiError ? err.message : String(err);
      this.render();
      return;
    }
    if (needsPrompt(report)) {
      this.pending = { model: buildDialog(report), targetClass: cls, followUp };
      this.renderDialog();
      return;
    }
    await this.executePivot(cls, undefined, followUp);
  }

  private async executePivot(
    cls: string,
    mode: string | undefined,
    followUp: AttributePredicate | null,
  ): Promise<void> {
    await this.mutate(this.api.pivot(this.sessionId, cls, mode ? { mode } : {}));
    if (followUp && !this.error) {
      await this.mutate(this.api.filter(this.sessionId, followUp));
    }
  }

  private async resolveDialog(mode: string | null): Promise<void> {
    const pending = this.pending;
    this.pending = null;
    this.renderDialog();
    if (!pending || mode === null) return;
    await this.executePivot(pending.targetClass, mode, pending.followUp);
  }

  private async selectBin(label: string): Promise<void> {
    await this.mutate(this.api.bins(this.sessionId, [label]));
    if (this.error || !this.schema || !this.session) return;
    const target = autoSwitchTarget(this.schema, this.session);
    if (target !== null) {
      await this.mutate(this.api.group(this.sessionId, target));
    }
  }

  // -- rendering ----------------------------------------------------------

  private buildSkeleton(): void {
    this.strip = el("div", { class: "filter-strip" });
    this.crumbs = el("nav", { class: "crumbs" });
    this.histogramPane = el("div", { class: "histogram" });

    this.searchInput = el("input", {
      class: "search-input",
      type: "search",
      placeholder: "search classes and values",
      oninput: () => {
        this.query = this.searchInput.value;
        this.renderMenu();
        void this.refreshValues();
      },
    });
    this.scopeButton = el("button", {
      class: "scope-button",
      title: "toggle every filter on or off",
      onclick: () => {
        this.hintDismissed = true;
        void this.mutate(this.api.scope(this.sessionId));
      },
    });
    this.menu = el("div", { class: "menu" });
    this.toolbar = el("div", { class: "toolbar" });
    this.dialogHost = el("div", { class: "dialog-host" });
    this.status = el("div", { class: "status", role: "alert" });

    const search = el(
      "div",
      { class: "search" },
      el("div", { class: "search-field" }, this.searchInput, this.scopeButton),
      this.menu,
    );
    const workbench = el("div", { class: "workbench" }, this.histogramPane, search);
    clear(this.root);
    this.root.append(
      this.strip,
      this.crumbs,
      workbench,
      this.toolbar,
      this.dialogHost,
      this.status,
    );
  }

  private render(): void {
    this.renderStrip();
    this.renderCrumbs();
    this.renderHistogram();
    this.renderMenu();
    this.renderToolbar();
    this.renderDialog();
    this.status.textContent = this.error ?? "";
  }

  private renderStrip(): void {
    clear(this.strip);
    if (!this.session) return;
    const model = buildFilterLines(this.session);
    this.scopeButton.textContent = model.scopeOn ? "scope: on" : "scope: off";
    this.scopeButton.setAttribute("data-on", String(model.scopeOn));
    for (const line of model.lines) {
      const width =
        model.stepCount > 1
          ? ((line.toStep - line.fromStep + 1) / model.stepCount) * 100
          : 100;
      const lineEl = el(
        "div",
        {
          class: `filter-line${line.effective ? "" : " dimmed"}`,
          "data-filter-id": line.filterId,
          "data-effective": String(line.effective),
          style: `width:${width.toFixed(1)}%`,
          title: LINE_HINT,
        },
        el("span", { class: "filter-label" }, line.label),
        el("button", {
          class: "snip",
          title: line.active ? "snip this filter" : "restore this filter",
          onclick: () => {
            this.hintDismissed = true;
            void this.mutate(this.api.snip(this.sessionId, line.filterId));
          },
        }, "✂"),
      );
      this.strip.append(lineEl);
    }
    if (model.lines.length > 0 && !this.hintDismissed) {
      this.strip.append(el("div", { class: "hint" }, LINE_HINT));
    }
  }

  private renderCrumbs(): void {
    clear(this.crumbs);
    if (!this.session) return;
    for (const crumb of buildBreadcrumbs(this.session)) {
      this.crumbs.append(
        el(
          "span",
          { class: "crumb", "data-index": crumb.index },
          el("span", { class: "crumb-category" }, crumb.category),
          el("span", { class: "crumb-mode" }, crumb.mode),
          el("span", { class: "crumb-size" }, String(crumb.size)),
          ...crumb.filterBadges.map((b) => el("span", { class: "crumb-filter" }, b)),
        ),
      );
    }
  }

  private renderHistogram(): void {
    clear(this.histogramPane);
    if (!this.session || !this.schema) return;
    const category = currentCategory(this.session);
    if (category === null) return;

    const nc = this.schema.nodeClasses.find((c) => c.name === category);
    const keyPicker = el("select", {
      class: "group-key",
      onchange: () => {
        void this.mutate(this.api.group(this.sessionId, keyPicker.value));
      },
    });
    keyPicker.append(el("option", { value: "" }, "group by…"));
    for (const attr of nc?.attributes ?? []) {
      keyPicker.append(el("option", { value: attr.key }, attr.key));
    }

    const model = buildHistogram(this.session);
    const head = el("div", { class: "histogram-head" }, keyPicker);
    if (model) {
      keyPicker.value = model.key;
      head.append(
        el("button", {
          class: "sort-toggle",
          title: "cycle sort order",
          onclick: () => {
            const sort = this.session?.histogram?.sort;
            const next: [string, string] =
              sort && sort[0] === "label" ? ["count", "desc"] : ["label", "asc"];
            void this.mutate(
              this.api.group(this.sessionId, model.key, { sort: next }),
            );
          },
        }, "sort"),
        el("span", { class: "bar-total" }, `${model.total} nodes`),
      );
    }
    this.histogramPane.append(head);
    if (!model) return;

    for (const bar of model.bars) {
      this.histogramPane.append(
        el(
          "div",
          {
            class: `bar${bar.selected ? " selected" : ""}`,
            "data-label": bar.label,
            onclick: () => void this.selectBin(bar.label),
          },
          el("span", {
            class: "bar-fill",
            style: `width:${(bar.fraction * 100).toFixed(1)}%`,
          }),
          el("span", { class: "bar-text" }, `${bar.label} (${bar.count})`),
        ),
      );
    }
  }

  private renderMenu(): void {
    clear(this.menu);
    if (!this.schema) return;
    const model = buildSearchMenu(this.schema, this.session, this.query, this.valueMatches);
    for (const entry of model.classes) {
      this.menu.append(
        el(
          "div",
          {
            class: "menu-class",
            "data-class": entry.name,
            onclick: () => void this.chooseClass(entry.name),
          },
          el("span", {
            class: "connection-weight",
            style: `height:${(1 + entry.weight * 5).toFixed(1)}px`,
            "data-weight": entry.weight.toFixed(3),
          }),
          el("span", { class: "menu-class-name" }, entry.name),
          el("span", { class: "menu-class-count" }, String(entry.connectionCount)),
        ),
      );
    }
    this.menu.append(el("hr", { class: "menu-divider" }));
    for (const v of model.values) {
      this.menu.append(
        el(
          "div",
          {
            class: "menu-value",
            "data-class": v.class,
            "data-key": v.key,
            "data-label": v.label,
            onclick: () => void this.chooseValue(v),
          },
          el("span", { class: "menu-value-label" }, v.label),
          el("span", { class: "menu-value-where" }, `${v.class}.${v.key}`),
        ),
      );
    }
  }

  private renderToolbar(): void {
    clear(this.toolbar);
    if (!this.session) return;
    this.toolbar.append(
      el("button", {
        class: "undo",
        onclick: () => void this.mutate(this.api.undo(this.sessionId)),
      }, "undo"),
      el("button", {
        class: "clear",
        onclick: () => void this.mutate(this.api.clear(this.sessionId)),
      }, "clear"),
      el("a", {
        class: "export-json",
        href: this.api.exportUrl(this.sessionId, "json-nodelink"),
        download: true,
      }, "export json"),
      el("a", {
        class: "export-graphml",
        href: this.api.exportUrl(this.sessionId, "graphml-subset"),
        download: true,
      }, "export graphml"),
    );
  }

  private renderDialog(): void {
    clear(this.dialogHost);
    if (!this.pending) return;
    const m = this.pending.model;
    const dialog = el(
      "div",
      { class: "dialog", role: "dialog", "data-target": m.targetClass },
      el("p", { class: "dialog-title" }, `Pivot back to ${m.targetClass}?`),
      el("p", { class: "dialog-rationale" }, m.rationale),
      el(
        "ul",
        { class: "dialog-filters" },
        ...m.namedFilters.map((f) => el("li", { class: "dialog-filter" }, f)),
      ),
      m.note ? el("p", { class: "dialog-note" }, m.note) : null,
      el("button", {
        class: "dialog-accept",
        "data-mode": m.suggestedMode,
        onclick: () => void this.resolveDialog(m.suggestedMode),
      }, `use ${m.suggestedMode}`),
      ...m.alternatives.map((alt) =>
        el("button", {
          class: "dialog-mode",
          "data-mode": alt.mode,
          title: alt.description,
          onclick: () => void this.resolveDialog(alt.mode),
        }, `use ${alt.mode}`),
      ),
      el("button", {
        class: "dialog-cancel",
        onclick: () => void this.resolveDialog(null),
      }, "cancel"),
    );
    this.dialogHost.append(dialog);
  }
}
