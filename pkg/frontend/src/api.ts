// Thin typed client over the REST API. All state is authoritative from the
// server; nothing here interprets schema or renders labels of its own.

import type {
  DisplayDocument,
  ExecutionResult,
  FormDescriptor,
  HistoryView,
  LabelView,
  MindMap,
  QuestionCreated,
  SpecView,
  UnitCreated,
  UnitListEntry,
  UnitView,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private base: string = "",
    private user: string = "urn:kgbb:user:browser",
  ) {}

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const headers: Record<string, string> = {
      ...(init.headers as Record<string, string> | undefined),
    };
    if (init.method && init.method !== "GET") {
      headers["X-KGBB-User"] = this.user;
      headers["Content-Type"] = "application/json";
    }
    const response = await fetch(this.base + path, { ...init, headers });
    if (!response.ok) {
      let code = `http-${response.status}`;
      let detail = response.statusText;
      try {
        const body = await response.json();
        code = body.error ?? code;
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
      } catch {
        /* non-JSON error body */
      }
      throw new ApiRequestError(response.status, code, detail);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  spec(): Promise<SpecView> {
    return this.request("/spec");
  }

  form(instance: string): Promise<FormDescriptor> {
    return this.request(`/kgbbs/${encodeURIComponent(instance)}/form`);
  }

  createUnit(payload: unknown): Promise<UnitCreated> {
    return this.request("/units", { method: "POST", body: JSON.stringify(payload) });
  }

  listUnits(instance?: string): Promise<{ units: UnitListEntry[] }> {
    const query = instance ? `?kgbb_instance=${encodeURIComponent(instance)}` : "";
    return this.request(`/units${query}`);
  }

  unit(upri: string): Promise<UnitView> {
    return this.request(`/units/${encodeURIComponent(upri)}`);
  }

  label(upri: string, version?: string): Promise<LabelView> {
    const extra = version ? `&version=${encodeURIComponent(version)}` : "";
    return this.request(`/units/${encodeURIComponent(upri)}?view=label${extra}`);
  }

  mindmap(upri: string): Promise<MindMap> {
    return this.request(`/units/${encodeURIComponent(upri)}?view=mindmap`);
  }

  display(upri: string): Promise<DisplayDocument> {
    return this.request(`/units/${encodeURIComponent(upri)}?view=display`);
  }

  history(upri: string): Promise<HistoryView> {
    return this.request(`/units/${encodeURIComponent(upri)}/history`);
  }

  createQuestion(payload: unknown): Promise<QuestionCreated> {
    return this.request("/questions", { method: "POST", body: JSON.stringify(payload) });
  }

  createCompoundQuestion(payload: unknown): Promise<QuestionCreated> {
    return this.request("/questions/compound", { method: "POST", body: JSON.stringify(payload) });
  }

  execute(questionUpri: string): Promise<ExecutionResult> {
    return this.request(`/questions/${encodeURIComponent(questionUpri)}/execute`, {
      method: "POST",
      body: "{}",
    });
  }
}
