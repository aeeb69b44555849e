/** Payload shapes of the interaction service (mirrored, never recomputed). */

export interface DrugRef {
  cui: string;
  label: string;
}

export interface InteractionRecord {
  effectorDrugCui: string;
  effectorDrugLabel: string;
  affectdDrugCui: string;
  affectdDrugLabel: string;
  effectLabel: string;
  impactLabel: string;
  provenance: string; // "extensional" | "deduced"
}

export interface PredictedRecord {
  effectorDrugCui: string;
  effectorDrugLabel: string;
  affectdDrugCui: string;
  affectdDrugLabel: string;
  confidence: number;
  provenance: string;
}

export interface RankingEntry {
  cui: string;
  label: string;
  frequency: number;
  tied: boolean;
}

export interface TreatmentAnalysis {
  treatment_id: string;
  interactions: InteractionRecord[];
  deduced_count: number;
  ranking: RankingEntry[];
  wedge_count: number;
  deduced_ddi_percentage: number;
  reductions: Record<string, number | null>;
}

export interface TreatmentRequest {
  covid_drugs: string[];
  comorbidity_drugs: string[];
  treatment_id?: string;
}
