/** Typed REST client. All domain state lives on the server; this client only
 * shapes requests, attaches the pseudonymous annotator header, and surfaces
 * structured error bodies (409 conflicts trigger the reload-and-merge flow). */

import type {
  ClassificationEntryData,
  EditData,
  ErrorBody,
  SubmitResponse,
  TaskSummary,
  TaskView,
  TypologyData,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(`${body.error ?? "HTTP " + status}: ${body.message ?? ""}`);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }

  get violations() {
    return this.body.violations ?? [];
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    readonly annotator: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = {
      method,
      headers: {
        "X-Annotator": this.annotator,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
    };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : null;
    if (!response.ok) {
      throw new ApiRequestError(response.status, (parsed ?? {}) as ErrorBody);
    }
    return parsed as T;
  }

  getTypology(): Promise<TypologyData> {
    return this.request("GET", "/typology");
  }

  getTasks(): Promise<TaskSummary[]> {
    return this.request("GET", `/tasks?annotator=${encodeURIComponent(this.annotator)}`);
  }

  getTask(pairId: string): Promise<TaskView> {
    return this.request("GET", `/tasks/${encodeURIComponent(pairId)}`);
  }

  assign(pairId: string, stage: string, annotators: string[]): Promise<TaskView> {
    return this.request("POST", `/tasks/${encodeURIComponent(pairId)}/assignment`, {
      stage,
      annotators,
    });
  }

  submitSelection(pairId: string, revision: number, edits: EditData[]): Promise<SubmitResponse> {
    return this.request("POST", `/tasks/${encodeURIComponent(pairId)}/selection`, {
      revision,
      edits,
    });
  }

  submitAdjudication(pairId: string, revision: number, edits: EditData[]): Promise<SubmitResponse> {
    return this.request("POST", `/tasks/${encodeURIComponent(pairId)}/adjudication`, {
      revision,
      edits,
    });
  }

  submitClassification(
    pairId: string,
    revision: number,
    classifications: ClassificationEntryData[],
  ): Promise<SubmitResponse> {
    return this.request("POST", `/tasks/${encodeURIComponent(pairId)}/classification`, {
      revision,
      classifications,
    });
  }

  exportDataset(): Promise<unknown> {
    return this.request("GET", "/export/dataset");
  }
}
