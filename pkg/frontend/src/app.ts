// DOM wiring: hash routing, event handling, and server round trips.

import { ApiClient, ApiRequestError } from "./api.js";
import {
  applyServerError,
  buildFormState,
  clearErrors,
  missingRequired,
  toCreatePayload,
  type FormState,
} from "./forms.js";
import {
  buildQueryState,
  compoundPayload,
  toQuestionPayload,
  type QueryState,
  type SavedQuestion,
} from "./querybuilder.js";
import {
  renderExecutionResult,
  renderExplorer,
  renderForm,
  renderHistory,
  renderMindMap,
  renderOfflineBanner,
  renderQueryBuilder,
  renderStartingPoints,
  renderStatementRow,
  esc,
} from "./views.js";

const NAV = `
<nav>
  <a href="#/">Start</a>
  <a href="#/browse">Browse</a>
  <a href="#/query">Query</a>
</nav>`;

export class App {
  private api: ApiClient;
  private root: HTMLElement;
  private formState: FormState | null = null;
  private queryState: QueryState | null = null;
  private savedQuestions: SavedQuestion[] = [];

  constructor(root: HTMLElement, api = new ApiClient()) {
    this.root = root;
    this.api = api;
  }

  start(): void {
    window.addEventListener("hashchange", () => void this.route());
    void this.route();
  }

  private async route(): Promise<void> {
    const hash = window.location.hash || "#/";
    const [, page, argument] = hash.split("/");
    try {
      if (page === "" || page === undefined) {
        await this.entryView();
      } else if (page === "create" && argument) {
        await this.editorView(decodeURIComponent(argument));
      } else if (page === "unit" && argument) {
        await this.unitView(decodeURIComponent(argument));
      } else if (page === "browse") {
        await this.browseView();
      } else if (page === "query") {
        await this.queryView();
      } else {
        this.root.innerHTML = `${NAV}<p class="empty">Unknown page.</p>`;
      }
    } catch (error) {
      this.root.innerHTML = NAV + renderOfflineBanner(String(error));
    }
  }

  private async entryView(): Promise<void> {
    const spec = await this.api.spec();
    this.root.innerHTML = `${NAV}
<h1>${esc(spec.application)}</h1>
<p>Add data starting from one of the declared entry points.</p>
${renderStartingPoints(spec.starting_points)}`;
  }

  private async editorView(instance: string): Promise<void> {
    const descriptor = await this.api.form(instance);
    this.formState = buildFormState(descriptor);
    this.renderEditor();
  }

  private renderEditor(): void {
    if (!this.formState) {
      return;
    }
    this.root.innerHTML = `${NAV}
${renderForm(this.formState)}
<button id="submit-unit">Save</button>
<div id="editor-result"></div>`;
    this.root.querySelectorAll<HTMLInputElement>("input").forEach((input) => {
      input.addEventListener("change", () => this.captureInputs());
    });
    this.root
      .querySelector("#submit-unit")
      ?.addEventListener("click", () => void this.submitUnit());
  }

  private captureInputs(): void {
    if (!this.formState) {
      return;
    }
    const read = (name: string): string =>
      this.root.querySelector<HTMLInputElement>(`input[name="${name}"]`)?.value.trim() ?? "";
    const fill = (state: FormState, prefix: string) => {
      const raw = read(`${prefix}subject`);
      if (raw.startsWith("urn:") || raw.startsWith("r:")) {
        state.subject.value = raw;
        state.subject.newLabel = "";
      } else {
        state.subject.newLabel = raw;
        state.subject.value = "";
      }
      for (const fs of state.fields) {
        fs.value = read(prefix + fs.field.position);
      }
      for (const cascade of state.cascades) {
        if (cascade.form) {
          fill(cascade.form, `${prefix}${cascade.entry.target}.`);
        }
      }
    };
    fill(this.formState, "");
  }

  private async submitUnit(): Promise<void> {
    if (!this.formState) {
      return;
    }
    this.captureInputs();
    clearErrors(this.formState);
    const missing = missingRequired(this.formState);
    if (missing.length > 0) {
      for (const fs of this.formState.fields) {
        if (fs.field.required && !fs.value) {
          fs.error = "this field is required";
        }
      }
      this.formState.error = `Missing required input: ${missing.join(", ")}`;
      this.renderEditor();
      return;
    }
    try {
      const created = await this.api.createUnit(toCreatePayload(this.formState));
      const label = await this.api.label(created.upri).catch(() => null);
      const result = this.root.querySelector("#editor-result");
      if (result) {
        result.innerHTML = `<div class="banner ok">Saved.</div>
<ul>${renderStatementRow(created.upri, label?.label ?? created.upri)}</ul>`;
      }
      window.location.hash = `#/unit/${encodeURIComponent(created.upri)}`;
    } catch (error) {
      if (error instanceof ApiRequestError) {
        applyServerError(this.formState, error.code, error.message);
        this.renderEditor();
      } else {
        throw error;
      }
    }
  }

  private async unitView(upri: string): Promise<void> {
    const unit = await this.api.unit(upri);
    const label = await this.api.label(upri).catch(() => null);
    let body: string;
    if (unit.kind === "compound") {
      body = renderExplorer(await this.api.display(upri));
    } else {
      body = `<ul>${renderStatementRow(upri, label?.label ?? upri)}</ul>`;
    }
    this.root.innerHTML = `${NAV}
<article class="unit-page" data-upri="${esc(upri)}">
  <h1>${esc(label?.label ?? unit.record.meta.label)}</h1>
  <div class="tabs">
    <button id="tab-display">Display</button>
    <button id="tab-mindmap">Mind map</button>
    <button id="tab-history">History</button>
  </div>
  <div id="unit-body">${body}</div>
</article>`;
    this.root.querySelector("#tab-display")?.addEventListener("click", () => void this.unitView(upri));
    this.root.querySelector("#tab-mindmap")?.addEventListener("click", async () => {
      const body = this.root.querySelector("#unit-body");
      if (body) {
        body.innerHTML = renderMindMap(await this.api.mindmap(upri));
      }
    });
    this.root.querySelector("#tab-history")?.addEventListener("click", async () => {
      const body = this.root.querySelector("#unit-body");
      if (body) {
        body.innerHTML = renderHistory(await this.api.history(upri));
      }
    });
  }

  private async browseView(): Promise<void> {
    const listing = await this.api.listUnits();
    const rows = await Promise.all(
      listing.units.map(async (entry) => {
        const label = await this.api.label(entry.upri).catch(() => null);
        return renderStatementRow(entry.upri, label?.label ?? entry.label);
      }),
    );
    this.root.innerHTML = `${NAV}<h1>Units</h1><ul class="unit-list">${rows.join("")}</ul>`;
  }

  private async queryView(): Promise<void> {
    const spec = await this.api.spec();
    const statements = spec.starting_points.filter((p) => p.kind === "statement");
    const instance = statements[0]?.id ?? spec.instances[0]?.id;
    if (!instance) {
      this.root.innerHTML = `${NAV}<p class="empty">No statement KGBBs to ask about.</p>`;
      return;
    }
    const descriptor = await this.api.form(instance);
    this.queryState = buildQueryState(descriptor);
    this.renderQuery();
  }

  private renderQuery(): void {
    if (!this.queryState) {
      return;
    }
    const saved = this.savedQuestions
      .map(
        (q, i) => `
  <li><label><input type="checkbox" data-saved="${i}" /> ${esc(q.label)}</label></li>`,
      )
      .join("");
    this.root.innerHTML = `${NAV}
${renderQueryBuilder(this.queryState)}
<button id="run-query">Ask</button>
<div id="query-result"></div>
<section class="saved-questions">
  <h3>Saved questions</h3>
  <ul>${saved}</ul>
  <button id="combine-and">AND</button>
  <button id="combine-or">OR</button>
</section>`;
    this.root.querySelector("#run-query")?.addEventListener("click", () => void this.runQuery());
    this.root
      .querySelector("#combine-and")
      ?.addEventListener("click", () => void this.combine("AND"));
    this.root
      .querySelector("#combine-or")
      ?.addEventListener("click", () => void this.combine("OR"));
  }

  private captureQuery(): void {
    if (!this.queryState) {
      return;
    }
    const value = (name: string) =>
      this.root.querySelector<HTMLInputElement>(`input[name="${name}"]`)?.value.trim() ?? "";
    const mode = (name: string) =>
      this.root.querySelector<HTMLSelectElement>(`select[name="${name}"]`)?.value ?? "any";
    this.queryState.subjectMode = mode("subject-mode") as QueryState["subjectMode"];
    const subjectRaw = value("subject-value");
    if (this.queryState.subjectMode === "exact") {
      this.queryState.subjectValue = subjectRaw;
    } else if (subjectRaw) {
      this.queryState.subjectClass = subjectRaw;
    }
    for (const qf of this.queryState.fields) {
      qf.mode = mode(`${qf.field.position}-mode`) as QueryState["subjectMode"];
      const raw = value(`${qf.field.position}-value`);
      if (qf.mode === "exact") {
        qf.value = raw;
      } else if (raw) {
        qf.classValue = raw;
      }
    }
  }

  private async runQuery(): Promise<void> {
    if (!this.queryState) {
      return;
    }
    this.captureQuery();
    const question = await this.api.createQuestion(toQuestionPayload(this.queryState));
    this.savedQuestions.push(question);
    const result = await this.api.execute(question.upri);
    this.renderQuery();
    const target = this.root.querySelector("#query-result");
    if (target) {
      target.innerHTML = `<h3>${esc(question.label)}</h3>${renderExecutionResult(result)}`;
    }
  }

  private async combine(op: "AND" | "OR"): Promise<void> {
    const chosen = [...this.root.querySelectorAll<HTMLInputElement>("input[data-saved]")]
      .filter((box) => box.checked)
      .map((box) => this.savedQuestions[Number(box.dataset.saved)].upri);
    if (chosen.length < 2) {
      return;
    }
    const compound = await this.api.createCompoundQuestion(compoundPayload(op, chosen));
    const result = await this.api.execute(compound.upri);
    const target = this.root.querySelector("#query-result");
    if (target) {
      target.innerHTML = `<h3>${esc(op)} of ${chosen.length} questions</h3>${renderExecutionResult(result)}`;
    }
  }
}
