import type { FetchLike } from "../src/api.js";
import type { PredictedRecord, TreatmentAnalysis } from "../src/types.js";

export function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as Response;
}

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

/** Routes requests by path prefix and records every call for assertions. */
export function routedFetch(
  routes: Record<string, (call: RecordedCall) => Response | Promise<Response>>,
  calls: RecordedCall[] = [],
): { fetch: FetchLike; calls: RecordedCall[] } {
  const fetchImpl: FetchLike = async (url, init) => {
    const call = { url, init };
    calls.push(call);
    const path = new URL(url).pathname;
    const handler = routes[path];
    if (!handler) throw new Error(`no route for ${path}`);
    return handler(call);
  };
  return { fetch: fetchImpl, calls };
}

export function analysisFixture(cuis: string[], treatmentId = "adhoc"): TreatmentAnalysis {
  const interactions = [];
  for (let i = 0; i + 1 < cuis.length; i++) {
    interactions.push({
      effectorDrugCui: cuis[i],
      effectorDrugLabel: cuis[i],
      affectdDrugCui: cuis[i + 1],
      affectdDrugLabel: cuis[i + 1],
      effectLabel: "serum_concentration",
      impactLabel: "increase",
      provenance: i % 2 === 0 ? "extensional" : "deduced",
    });
  }
  return {
    treatment_id: treatmentId,
    interactions,
    deduced_count: interactions.filter((e) => e.provenance === "deduced").length,
    ranking: cuis.map((cui, i) => ({
      cui,
      label: cui,
      frequency: cuis.length - i - 1,
      tied: false,
    })),
    wedge_count: Math.max(0, interactions.length - 1),
    deduced_ddi_percentage: 0,
    reductions: Object.fromEntries(cuis.map((cui) => [cui, 50.0])),
  };
}

export function predictedFixture(a: string, b: string, confidence: number): PredictedRecord {
  return {
    effectorDrugCui: a,
    effectorDrugLabel: a,
    affectdDrugCui: b,
    affectdDrugLabel: b,
    confidence,
    provenance: "predicted",
  };
}
