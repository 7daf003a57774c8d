// Typed client for the scoring service. The meter talks only to
// POST /v1/score and GET /v1/model.

export interface ScoreResponse {
  label: "strong" | "weak";
  probability?: number;
  features: Record<string, number>;
  rule_label: "strong" | "weak";
  failed_rules: string[];
}

export interface ValidationError {
  error: string;
  rule: string;
}

export interface ModelInfo {
  format_version: number;
  model_kind: string;
  hyperparams: Record<string, unknown>;
  training_metadata: Record<string, unknown>;
}

export type ScoreResult =
  | { kind: "ok"; body: ScoreResponse }
  | { kind: "invalid"; body: ValidationError };

export function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return (fromQuery ?? "http://127.0.0.1:8787").replace(/\/+$/, "");
}

export async function scorePassword(
  base: string,
  password: string,
  signal?: AbortSignal,
): Promise<ScoreResult> {
  const res = await fetch(`${base}/v1/score`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ password }),
    signal,
  });
  if (res.status === 200) {
    return { kind: "ok", body: (await res.json()) as ScoreResponse };
  }
  if (res.status === 422) {
    return { kind: "invalid", body: (await res.json()) as ValidationError };
  }
  throw new Error(`scoring service answered ${res.status}`);
}

export async function modelInfo(base: string): Promise<ModelInfo> {
  const res = await fetch(`${base}/v1/model`);
  if (!res.ok) {
    throw new Error(`scoring service answered ${res.status}`);
  }
  return (await res.json()) as ModelInfo;
}
