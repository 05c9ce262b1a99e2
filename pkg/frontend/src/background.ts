// Service worker: periodic whole-bundle sync (never per-visit requests).

import { needsSync, syncBundle, type StoredBundle } from "./bundle.js";
import { chromeKV, KEY_BUNDLE } from "./storage.js";
import { loadSettings } from "./runtime.js";

const ALARM_NAME = "bundle-sync";

async function runSync(): Promise<void> {
  const kv = chromeKV();
  const settings = await loadSettings(kv);
  if (!settings.bundleUrl) {
    return;
  }
  const store = {
    get: () => kv.get<StoredBundle>(KEY_BUNDLE),
    set: (value: StoredBundle) => kv.set(KEY_BUNDLE, value),
  };
  const stored = await store.get();
  if (!needsSync(stored, settings.syncCadenceHours)) {
    return;
  }
  try {
    await syncBundle(settings.bundleUrl, store);
    await chrome.action.setBadgeText({ text: "" });
  } catch (err) {
    // keep the old bundle; surface the failure on the badge
    console.warn("bundle sync failed", err);
    await chrome.action.setBadgeText({ text: "!" });
  }
}

if (typeof chrome !== "undefined" && chrome.runtime?.onInstalled) {
  chrome.runtime.onInstalled.addListener(() => {
    void chrome.alarms.create(ALARM_NAME, { periodInMinutes: 60 });
    void runSync();
  });
  chrome.alarms.onAlarm.addListener((alarm) => {
    if (alarm.name === ALARM_NAME) {
      void runSync();
    }
  });
  chrome.runtime.onMessage.addListener((message, _sender, sendResponse) => {
    if (message?.type === "sync-now") {
      runSync().then(() => sendResponse({ ok: true }));
      return true;
    }
    return false;
  });
}
