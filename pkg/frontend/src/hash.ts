// Canonical record hashing, mirroring the backend byte-for-byte: compact
// JSON with recursively sorted keys, raw UTF-8, SHA-256 hex.

function sortKeysDeep(value: unknown): unknown {
  if (Array.isArray(value)) {
    return value.map(sortKeysDeep);
  }
  if (value !== null && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(value as Record<string, unknown>).sort()) {
      out[key] = sortKeysDeep((value as Record<string, unknown>)[key]);
    }
    return out;
  }
  return value;
}

export function canonicalRecords(records: unknown[]): string {
  return JSON.stringify(sortKeysDeep(records));
}

export async function contentHash(records: unknown[]): Promise<string> {
  const bytes = new TextEncoder().encode(canonicalRecords(records));
  const digest = await crypto.subtle.digest("SHA-256", bytes);
  return Array.from(new Uint8Array(digest))
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}
