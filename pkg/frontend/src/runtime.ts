// Shared wiring used by the content script and popup: settings access,
// bundle lookup, and one enforcement pass with outcome bookkeeping.

import { findRecord, type StoredBundle } from "./bundle.js";
import { enforce } from "./enforcer.js";
import {
  KEY_BUNDLE,
  KEY_OUTCOMES,
  KEY_SETTINGS,
  type KV,
} from "./storage.js";
import {
  DEFAULT_SETTINGS,
  type EnforcementMode,
  type EnforcementOutcome,
  type EnforcementRecord,
  type Settings,
} from "./types.js";

export async function loadSettings(kv: KV): Promise<Settings> {
  const stored = await kv.get<Partial<Settings>>(KEY_SETTINGS);
  return { ...DEFAULT_SETTINGS, ...(stored ?? {}) };
}

export async function saveSettings(kv: KV, settings: Settings): Promise<void> {
  await kv.set(KEY_SETTINGS, settings);
}

export async function recordForHost(
  kv: KV,
  hostname: string,
): Promise<EnforcementRecord | null> {
  const stored = await kv.get<StoredBundle>(KEY_BUNDLE);
  if (stored === null) {
    return null;
  }
  return findRecord(stored.bundle, hostname);
}

export async function rememberOutcome(
  kv: KV,
  outcome: EnforcementOutcome,
): Promise<void> {
  const outcomes = (await kv.get<Record<string, EnforcementOutcome>>(KEY_OUTCOMES)) ?? {};
  outcomes[outcome.domain] = outcome;
  await kv.set(KEY_OUTCOMES, outcomes);
}

export async function lastOutcome(
  kv: KV,
  domain: string,
): Promise<EnforcementOutcome | null> {
  const outcomes = (await kv.get<Record<string, EnforcementOutcome>>(KEY_OUTCOMES)) ?? {};
  return outcomes[domain] ?? null;
}

export function shouldAutoEnforce(
  settings: Settings,
  record: EnforcementRecord | null,
): boolean {
  return settings.autoEnforce && record !== null && record.status === "PLAN";
}

export async function enforceOnPage(
  kv: KV,
  hostname: string,
  mode: EnforcementMode,
  doc: Document,
): Promise<EnforcementOutcome> {
  const record = await recordForHost(kv, hostname);
  if (record === null) {
    const outcome: EnforcementOutcome = {
      domain: hostname.toLowerCase(),
      mode,
      result: "UNSUPPORTED_DOMAIN",
      steps_executed: 0,
    };
    await rememberOutcome(kv, outcome);
    return outcome;
  }
  const outcome = await enforce(record, mode, { doc });
  await rememberOutcome(kv, outcome);
  return outcome;
}
