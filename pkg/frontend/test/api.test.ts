import { describe, expect, it } from "vitest";
import { ApiClient, BackendError } from "../src/api.js";
import { analysisFixture, jsonResponse, routedFetch } from "./helpers.js";

const BASE = "http://backend.test";

describe("ApiClient.searchDrugs", () => {
  it("returns [] for fewer than 2 characters without issuing a request", async () => {
    const { fetch, calls } = routedFetch({});
    const api = new ApiClient(BASE, fetch);
    expect(await api.searchDrugs("")).toEqual([]);
    expect(await api.searchDrugs("a")).toEqual([]);
    expect(await api.searchDrugs("  a  ")).toEqual([]);
    expect(calls).toHaveLength(0);
  });

  it("queries the prefix endpoint for 2+ characters", async () => {
    const drugs = [{ cui: "C0020336", label: "hydroxychloroquine" }];
    const { fetch, calls } = routedFetch({
      "/drugs": () => jsonResponse({ drugs }),
    });
    const api = new ApiClient(BASE, fetch);
    expect(await api.searchDrugs("hy")).toEqual(drugs);
    expect(calls[0].url).toContain("prefix=hy");
  });
});

describe("ApiClient error handling", () => {
  it("raises BackendError with the HTTP status on failure", async () => {
    const { fetch } = routedFetch({
      "/treatment/analyze": () => jsonResponse({ detail: "bad" }, 422),
    });
    const api = new ApiClient(BASE, fetch);
    await expect(
      api.analyzeTreatment({ covid_drugs: [], comorbidity_drugs: [] }),
    ).rejects.toThrowError(BackendError);
  });

  it("health() is false when the backend is unreachable", async () => {
    const api = new ApiClient(BASE, async () => {
      throw new TypeError("connection refused");
    });
    expect(await api.health()).toBe(false);
  });
});

describe("ApiClient.predictedOverlay", () => {
  it("requests pairwise predicted interactions for the given drugs", async () => {
    const { fetch, calls } = routedFetch({
      "/ddi-predicted": () => jsonResponse({ interactions: [], warnings: [] }),
    });
    const api = new ApiClient(BASE, fetch);
    expect(await api.predictedOverlay(["C1", "C2"])).toEqual([]);
    const url = new URL(calls[0].url);
    expect(url.searchParams.get("target")).toBe("DDIPS");
    expect(url.searchParams.get("cuis")).toBe("C1,C2");
  });

  it("skips the request entirely for an empty selection", async () => {
    const { fetch, calls } = routedFetch({});
    const api = new ApiClient(BASE, fetch);
    expect(await api.predictedOverlay([])).toEqual([]);
    expect(calls).toHaveLength(0);
  });
});

describe("ApiClient.analyzeTreatment", () => {
  it("posts both partitions as JSON", async () => {
    const analysis = analysisFixture(["C1", "C2"]);
    const { fetch, calls } = routedFetch({
      "/treatment/analyze": () => jsonResponse(analysis),
    });
    const api = new ApiClient(BASE, fetch);
    const result = await api.analyzeTreatment({
      covid_drugs: ["C1"],
      comorbidity_drugs: ["C2"],
    });
    expect(result).toEqual(analysis);
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({
      covid_drugs: ["C1"],
      comorbidity_drugs: ["C2"],
    });
  });
});
