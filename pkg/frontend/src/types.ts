// Wire types matching the exported bundle JSON exactly (snake_case fields).

export interface SelectorPath {
  css: string;
  strategy: string;
}

export type RecordStatus =
  | "PLAN"
  | "ACCEPT_ONLY"
  | "NO_NOTICE"
  | "DEDICATED_PAGE"
  | "ERROR";

export interface EnforcementStep {
  view_index: number;
  tag_rendered: string;
  selector: SelectorPath;
  expected_state_before: "selected" | "not selected" | null;
  delay_after_ms: number;
}

export interface EnforcementRecord {
  schema_version: number;
  domain: string;
  region: string;
  generated_at: string;
  status: RecordStatus;
  notice_selector: SelectorPath | null;
  steps: EnforcementStep[];
  serialized_notice: string;
  plan_text: string;
  error_stage: string | null;
}

export interface BundleManifest {
  schema_version: number;
  record_count: number;
  generated_at: string;
  content_hash: string;
}

export interface Bundle {
  manifest: BundleManifest;
  records: EnforcementRecord[];
}

export type EnforcementResult =
  | "ENFORCED"
  | "NOTICE_ABSENT"
  | "SELECTOR_STALE"
  | "PARTIAL"
  | "UNSUPPORTED_DOMAIN";

export type EnforcementMode = "AUTO" | "MANUAL";

export interface EnforcementOutcome {
  domain: string;
  mode: EnforcementMode;
  result: EnforcementResult;
  steps_executed: number;
}

export interface Settings {
  autoEnforce: boolean;
  bundleUrl: string;
  syncCadenceHours: number;
}

export const DEFAULT_SETTINGS: Settings = {
  autoEnforce: false,
  bundleUrl: "",
  syncCadenceHours: 24,
};
