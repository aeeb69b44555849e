import type { ApiClient } from "./api.js";
import type { DrugRef, PredictedRecord, TreatmentAnalysis } from "./types.js";

export type Partition = "covid" | "comorbidity";

export interface ExplorerState {
  covidDrugs: DrugRef[];
  comorbidityDrugs: DrugRef[];
  analysis: TreatmentAnalysis | null;
  /** Drugs hypothetically withdrawn (always a subset of the selected drugs). */
  removed: string[];
  /** Predicted-DDI overlay: only scores strictly above this filter are drawn. */
  confidenceFilter: number;
  predicted: PredictedRecord[];
  banner: string | null;
  error: string | null;
}

export function initialState(): ExplorerState {
  return {
    covidDrugs: [],
    comorbidityDrugs: [],
    analysis: null,
    removed: [],
    confidenceFilter: 0.5,
    predicted: [],
    banner: null,
    error: null,
  };
}

function deepCopy<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function selectedCuis(state: ExplorerState): string[] {
  return [...state.covidDrugs, ...state.comorbidityDrugs].map((d) => d.cui);
}

export function activeCuis(state: ExplorerState): { covid: string[]; comorbidity: string[] } {
  const gone = new Set(state.removed);
  return {
    covid: state.covidDrugs.filter((d) => !gone.has(d.cui)).map((d) => d.cui),
    comorbidity: state.comorbidityDrugs.filter((d) => !gone.has(d.cui)).map((d) => d.cui),
  };
}

/** Predicted records passing the strict confidence filter. */
export function visiblePredicted(state: ExplorerState): PredictedRecord[] {
  return state.predicted.filter((p) => p.confidence > state.confidenceFilter);
}

/**
 * Drives the explorer: one in-flight analysis at a time, stale responses
 * discarded by sequence number, failed requests keep the previous state.
 */
export class Explorer {
  state: ExplorerState = initialState();
  private seq = 0;
  private history: ExplorerState[] = [];

  constructor(private api: ApiClient) {}

  addDrug(drug: DrugRef, partition: Partition): void {
    if (selectedCuis(this.state).includes(drug.cui)) return;
    const key = partition === "covid" ? "covidDrugs" : "comorbidityDrugs";
    this.state = { ...this.state, [key]: [...this.state[key], drug] };
  }

  removeDrugFromSelection(cui: string): void {
    this.state = {
      ...this.state,
      covidDrugs: this.state.covidDrugs.filter((d) => d.cui !== cui),
      comorbidityDrugs: this.state.comorbidityDrugs.filter((d) => d.cui !== cui),
      removed: this.state.removed.filter((c) => c !== cui),
    };
  }

  setConfidenceFilter(value: number): void {
    this.state = { ...this.state, confidenceFilter: value };
  }

  /** Re-posts the current (possibly reduced) treatment for analysis. */
  async refresh(): Promise<void> {
    const { covid, comorbidity } = activeCuis(this.state);
    if (covid.length + comorbidity.length === 0) {
      this.state = { ...this.state, analysis: null, predicted: [], error: null };
      return;
    }
    const mySeq = ++this.seq;
    const previous = this.state;
    try {
      const analysis = await this.api.analyzeTreatment({
        covid_drugs: covid,
        comorbidity_drugs: comorbidity,
      });
      const predicted = await this.api.predictedOverlay([...covid, ...comorbidity]);
      if (mySeq !== this.seq) return; // a newer request already landed
      this.state = { ...this.state, analysis, predicted, error: null };
    } catch (err) {
      if (mySeq !== this.seq) return;
      this.state = { ...previous, error: String(err) }; // previous state retained
    }
  }

  /**
   * Hypothetically withdraw a selected drug: snapshots the state for undo,
   * re-posts the reduced treatment, and reports the eliminated percentage
   * comparing edge counts before and after.
   */
  async whatIfRemove(cui: string): Promise<void> {
    if (!selectedCuis(this.state).includes(cui) || this.state.removed.includes(cui)) {
      return;
    }
    const before = deepCopy(this.state);
    const edgesBefore = this.state.analysis?.interactions.length ?? 0;
    this.state = { ...this.state, removed: [...this.state.removed, cui] };
    await this.refresh();
    if (this.state.error !== null) {
      this.state = before; // request failure: restore as if nothing happened
      return;
    }
    this.history.push(before);
    const edgesAfter = this.state.analysis?.interactions.length ?? 0;
    const pct = edgesBefore === 0 ? 0 : (100 * (edgesBefore - edgesAfter)) / edgesBefore;
    this.state = { ...this.state, banner: `${pct.toFixed(1)}% of DDIs eliminated` };
  }

  /** Restores the exact pre-removal state (deep equality). */
  undo(): void {
    const previous = this.history.pop();
    if (previous) this.state = previous;
  }

  get canUndo(): boolean {
    return this.history.length > 0;
  }
}
