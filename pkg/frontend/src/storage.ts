// Thin key-value layer: chrome.storage.local in the extension, an in-memory
// map in tests.

export interface KV {
  get<T>(key: string): Promise<T | null>;
  set<T>(key: string, value: T): Promise<void>;
}

export class MemoryKV implements KV {
  private data = new Map<string, unknown>();

  async get<T>(key: string): Promise<T | null> {
    return this.data.has(key) ? (this.data.get(key) as T) : null;
  }

  async set<T>(key: string, value: T): Promise<void> {
    this.data.set(key, value);
  }
}

export function chromeKV(): KV {
  return {
    async get<T>(key: string): Promise<T | null> {
      const found = await chrome.storage.local.get(key);
      return key in found ? (found[key] as T) : null;
    },
    async set<T>(key: string, value: T): Promise<void> {
      await chrome.storage.local.set({ [key]: value });
    },
  };
}

export const KEY_BUNDLE = "bundle";
export const KEY_SETTINGS = "settings";
export const KEY_OUTCOMES = "outcomes"; // per-domain last EnforcementOutcome
