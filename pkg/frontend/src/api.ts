import type { DrugRef, PredictedRecord, TreatmentAnalysis, TreatmentRequest } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class BackendError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin typed client over the exploration endpoints; no business logic. */
export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const query = new URLSearchParams(params).toString();
    const response = await this.fetchImpl(`${this.baseUrl}${path}?${query}`);
    if (!response.ok) {
      throw new BackendError(response.status, `GET ${path} failed (${response.status})`);
    }
    return (await response.json()) as T;
  }

  /** Case-insensitive prefix search; empty for fewer than 2 characters. */
  async searchDrugs(prefix: string): Promise<DrugRef[]> {
    if (prefix.trim().length < 2) return [];
    const body = await this.get<{ drugs: DrugRef[] }>("/drugs", { prefix: prefix.trim() });
    return body.drugs;
  }

  async analyzeTreatment(request: TreatmentRequest): Promise<TreatmentAnalysis> {
    const response = await this.fetchImpl(`${this.baseUrl}/treatment/analyze`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      throw new BackendError(response.status, `analyze failed (${response.status})`);
    }
    return (await response.json()) as TreatmentAnalysis;
  }

  async predictedOverlay(cuis: string[]): Promise<PredictedRecord[]> {
    if (cuis.length === 0) return [];
    const body = await this.get<{ interactions: PredictedRecord[] }>("/ddi-predicted", {
      cuis: cuis.join(","),
      target: "DDIPS",
    });
    return body.interactions;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
