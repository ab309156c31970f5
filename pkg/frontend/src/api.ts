/**
 * Thin typed client for the prediction service.
 *
 * Endpoints: GET /api/v1/schema, GET /api/v1/health, POST /api/v1/predict.
 * Service errors arrive as {code, message, detail}; network and parsing
 * failures are normalized into the same ApiError shape so the UI has one
 * error path.
 */

export interface FeatureDef {
  id: string;
  display_name: string;
}

export interface DataClassDef {
  id: string;
  display_name: string;
  features: FeatureDef[];
}

export interface SchemaDoc {
  version: string;
  classes: DataClassDef[];
}

export interface PredictionResponse {
  label: "incident" | "serious_incident";
  score: number;
  model_family: string;
  model_version: string;
}

export interface HealthResponse {
  status: string;
  model_version: string;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status?: number,
    readonly detail?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(
  fetchImpl: FetchLike,
  url: string,
  init?: RequestInit,
): Promise<T> {
  let res: Response;
  try {
    res = await fetchImpl(url, init);
  } catch (err) {
    throw new ApiError(
      "network",
      `cannot reach the prediction service (${String(err)})`,
    );
  }
  let body: unknown = null;
  try {
    body = await res.json();
  } catch {
    body = null;
  }
  if (!res.ok) {
    const envelope = body as Partial<{ code: string; message: string; detail: unknown }> | null;
    throw new ApiError(
      envelope?.code ?? "http_error",
      envelope?.message ?? `service returned HTTP ${res.status}`,
      res.status,
      envelope?.detail,
    );
  }
  if (body === null) {
    throw new ApiError("bad_response", "service returned a non-JSON body", res.status);
  }
  return body as T;
}

export async function fetchSchema(
  baseUrl: string,
  fetchImpl: FetchLike = fetch,
): Promise<SchemaDoc> {
  const doc = await request<SchemaDoc>(fetchImpl, `${baseUrl}/api/v1/schema`);
  if (!Array.isArray(doc.classes) || typeof doc.version !== "string") {
    throw new ApiError("bad_response", "schema document has an unexpected shape");
  }
  return doc;
}

export async function fetchHealth(
  baseUrl: string,
  fetchImpl: FetchLike = fetch,
): Promise<HealthResponse> {
  return request<HealthResponse>(fetchImpl, `${baseUrl}/api/v1/health`);
}

export async function postPredict(
  baseUrl: string,
  selectedFeatures: string[],
  fetchImpl: FetchLike = fetch,
): Promise<PredictionResponse> {
  return request<PredictionResponse>(fetchImpl, `${baseUrl}/api/v1/predict`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ selected_features: selectedFeatures }),
  });
}
