// Bundle parsing, hash verification, and sync with atomic swap semantics.

import { contentHash } from "./hash.js";
import type { Bundle, EnforcementRecord } from "./types.js";

export class BundleVerificationError extends Error {}

export async function parseAndVerifyBundle(text: string): Promise<Bundle> {
  let parsed: Bundle;
  try {
    parsed = JSON.parse(text) as Bundle;
  } catch (err) {
    throw new BundleVerificationError(`bundle is not JSON: ${String(err)}`);
  }
  if (!parsed || !parsed.manifest || !Array.isArray(parsed.records)) {
    throw new BundleVerificationError("bundle structure is wrong");
  }
  if (parsed.manifest.record_count !== parsed.records.length) {
    throw new BundleVerificationError("record_count does not match records");
  }
  const digest = await contentHash(parsed.records as unknown[]);
  if (digest !== parsed.manifest.content_hash) {
    throw new BundleVerificationError("content hash mismatch");
  }
  return parsed;
}

export function findRecord(
  bundle: Bundle,
  hostname: string,
): EnforcementRecord | null {
  const host = hostname.toLowerCase().replace(/^www\./, "");
  for (const record of bundle.records) {
    if (record.domain === host || record.domain === hostname.toLowerCase()) {
      return record;
    }
  }
  return null;
}

export interface StoredBundle {
  bundle: Bundle;
  fetchedAt: number; // epoch ms
}

export interface BundleStore {
  get(): Promise<StoredBundle | null>;
  set(value: StoredBundle): Promise<void>;
}

// Whole-bundle sync only: the fetch never carries the visited URL, so
// browsing history stays on this side of the wire.
export async function syncBundle(
  url: string,
  store: BundleStore,
  fetchFn: typeof fetch = fetch,
  now: () => number = Date.now,
): Promise<StoredBundle> {
  const prior = await store.get();
  try {
    const response = await fetchFn(url);
    if (!response.ok) {
      throw new BundleVerificationError(`bundle fetch failed: ${response.status}`);
    }
    const bundle = await parseAndVerifyBundle(await response.text());
    const stored = { bundle, fetchedAt: now() };
    await store.set(stored); // single write: the swap is atomic
    return stored;
  } catch (err) {
    if (prior !== null) {
      return prior; // keep the previous verified bundle on any failure
    }
    throw err;
  }
}

export function needsSync(
  stored: StoredBundle | null,
  cadenceHours: number,
  now: () => number = Date.now,
): boolean {
  if (stored === null) {
    return true;
  }
  return now() - stored.fetchedAt >= cadenceHours * 3600 * 1000;
}
