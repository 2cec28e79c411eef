// Thin typed client for the pipeline service. Every call resolves to a
// discriminated result instead of throwing, and network-level failures are
// marked retryable so the UI can offer a retry without losing state.

import type { CatalogPayload } from "./catalog.js";
import type { ReportJson } from "./model.js";

export interface ApiError {
  readonly kind: "network" | "http";
  readonly status?: number;
  readonly message: string;
  readonly retryable: boolean;
}

export type ApiResult<T> = { readonly ok: true; readonly value: T } | { readonly ok: false; readonly error: ApiError };

export interface ValueJson {
  readonly kind: "single" | "vector" | "matrix" | "model";
  readonly value?: number | string | boolean;
  readonly values?: readonly number[];
  readonly length?: number;
  readonly rows?: number;
  readonly cols?: number;
  readonly algorithm?: string;
  readonly [extra: string]: unknown;
}

export interface RunResultJson {
  readonly status: string;
  readonly pipeline: string;
  readonly bindings: Readonly<Record<string, ValueJson>>;
  readonly artifacts: readonly string[];
  readonly failed_task?: string | null;
  readonly error?: string | null;
}

export interface PlotJson {
  readonly filename: string;
  readonly kind: string;
  readonly canvas: string;
  readonly row: number;
  readonly col: number;
  readonly svg?: string;
  readonly url?: string;
}

export interface RunResponseJson {
  readonly report: ReportJson;
  readonly result: RunResultJson;
  readonly plots: readonly PlotJson[];
}

export interface RunFailureJson {
  readonly error: string;
  readonly failed_task: string | null;
  readonly report: ReportJson;
  readonly result: RunResultJson | null;
}

export type RunOutcome =
  | { readonly status: "success"; readonly run: RunResponseJson }
  | { readonly status: "invalid"; readonly report: ReportJson }
  | { readonly status: "failed"; readonly failure: RunFailureJson }
  | { readonly status: "error"; readonly error: ApiError };

export interface RecommendationJson {
  readonly task: string;
  readonly method: string;
  readonly reason: string;
}

async function request(base: string, path: string, init?: RequestInit): Promise<Response> {
  return fetch(base + path, init);
}

function networkError(exc: unknown): ApiError {
  return {
    kind: "network",
    message: exc instanceof Error ? exc.message : String(exc),
    retryable: true,
  };
}

async function httpError(response: Response): Promise<ApiError> {
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    // Non-JSON error bodies keep the status line message.
  }
  return {
    kind: "http",
    status: response.status,
    message,
    retryable: response.status >= 500,
  };
}

async function getJson<T>(base: string, path: string): Promise<ApiResult<T>> {
  let response: Response;
  try {
    response = await request(base, path);
  } catch (exc) {
    return { ok: false, error: networkError(exc) };
  }
  if (!response.ok) return { ok: false, error: await httpError(response) };
  return { ok: true, value: (await response.json()) as T };
}

async function postJson<T>(base: string, path: string, body: unknown): Promise<ApiResult<T>> {
  let response: Response;
  try {
    response = await request(base, path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  } catch (exc) {
    return { ok: false, error: networkError(exc) };
  }
  if (!response.ok) return { ok: false, error: await httpError(response) };
  return { ok: true, value: (await response.json()) as T };
}

export function fetchCatalog(base: string): Promise<ApiResult<CatalogPayload>> {
  return getJson(base, "/catalog");
}

export function postValidate(base: string, turtle: string): Promise<ApiResult<ReportJson>> {
  return postJson(base, "/validate", { turtle });
}

export interface RunRequest {
  readonly turtle: string;
  readonly dataset_csv?: string;
  readonly seed?: number;
}

// /run distinguishes three bodies: 200 carries the full response, 422 carries
// the validation report itself, 500 carries the execution failure.
export async function postRun(base: string, body: RunRequest): Promise<RunOutcome> {
  let response: Response;
  try {
    response = await request(base, "/run", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  } catch (exc) {
    return { status: "error", error: networkError(exc) };
  }
  if (response.status === 200) {
    return { status: "success", run: (await response.json()) as RunResponseJson };
  }
  if (response.status === 422) {
    return { status: "invalid", report: (await response.json()) as ReportJson };
  }
  if (response.status === 500) {
    const body500 = (await response.json()) as RunFailureJson;
    if (body500 && typeof body500.error === "string" && body500.report) {
      return { status: "failed", failure: body500 };
    }
  }
  return { status: "error", error: await httpError(response) };
}

export interface RecommendRequest {
  readonly columns: readonly { readonly name: string; readonly type: "numeric" | "string" }[];
  readonly label_column?: string;
}

export function postRecommend(base: string, body: RecommendRequest): Promise<ApiResult<RecommendationJson>> {
  return postJson(base, "/recommend", body);
}
