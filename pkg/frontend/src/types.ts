// Payload types mirroring the campaign server's JSON schemas bit-for-bit.
// The UI never derives verdicts or metrics from these; it displays what the
// server sent.

export type Verdict = "HOLDS" | "VIOLATED" | "ERROR";
export type VerdictFilter = Verdict | "ALL";

export type AtomOp = "ge" | "le" | "eq";

export interface Atom {
  readonly feature: string;
  readonly op: AtomOp;
  readonly value: number | boolean;
}

export interface TrialRecord {
  readonly trial_id: string;
  readonly sut_id: string;
  readonly mutant_id: string | null;
  readonly mr_id: string;
  readonly param_binding: Record<string, number>;
  readonly source_input: number[] | number;
  readonly followup_input: number[] | number | null;
  readonly source_output: number | null;
  readonly followup_output: number | null;
  readonly verdict: Verdict;
  readonly error_detail: string | null;
  readonly seed_path: number[];
}

export interface TrialsPage {
  readonly total: number;
  readonly offset: number;
  readonly limit: number;
  readonly trials: TrialRecord[];
}

export interface FeatureRow {
  readonly trial_id: string;
  readonly verdict: Verdict;
  readonly features: Record<string, number | boolean | null>;
}

export interface FeaturesPayload {
  readonly sut: string;
  readonly mr: string;
  readonly numeric_features: string[];
  readonly flag_features: string[];
  readonly rows: FeatureRow[];
}

export interface CampaignSummary {
  readonly id: string;
  readonly dir: string;
  readonly parent_id: string | null;
  readonly started_at: string | null;
  readonly trial_count: number | null;
  readonly suts: string[] | null;
  readonly has: { dataset: boolean; trials: boolean; constraints: boolean; mutation: boolean };
}

export interface VerdictEntry {
  readonly sut: string;
  readonly mr: string;
  readonly status: "APPLICABLE" | "CONDITIONAL" | "INAPPLICABLE" | "UNDETERMINED";
  readonly constraint: { atoms: Atom[] } | null;
  readonly metrics: { support: number; precision: number; coverage: number } | null;
}

export interface CampaignDetail extends CampaignSummary {
  readonly manifest: Record<string, unknown>;
  readonly constraints?: { verdicts: VerdictEntry[] };
}

export interface ConstraintMetrics {
  readonly support: number;
  readonly precision: number;
  readonly coverage: number;
  readonly in_region_trial_ids: string[];
  readonly errors_excluded: number;
  readonly sut: string;
  readonly mr: string;
  readonly atoms: Atom[];
}

export interface RerunResponse {
  readonly child_id: string;
  readonly parent_id: string;
  readonly generated: number;
  readonly requested: number;
  readonly draws: number;
  readonly partial: boolean;
}
