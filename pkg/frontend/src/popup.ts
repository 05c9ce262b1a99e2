// Popup: one switch (auto-enforce) and one button (Enforce Cookies),
// enabled only when the current domain is supported and its notice is
// visible. Shows the last outcome for the domain.

import { chromeKV } from "./storage.js";
import { lastOutcome, loadSettings, saveSettings } from "./runtime.js";
import type { EnforcementOutcome } from "./types.js";

export function describeOutcome(outcome: EnforcementOutcome | null): string {
  if (outcome === null) {
    return "no enforcement yet";
  }
  const step = outcome.steps_executed === 1 ? "step" : "steps";
  return `${outcome.result} (${outcome.steps_executed} ${step}, ${outcome.mode.toLowerCase()})`;
}

async function activeTab(): Promise<chrome.tabs.Tab | null> {
  const tabs = await chrome.tabs.query({ active: true, currentWindow: true });
  return tabs[0] ?? null;
}

async function init(): Promise<void> {
  const kv = chromeKV();
  const toggle = document.getElementById("auto-toggle") as HTMLInputElement;
  const button = document.getElementById("enforce-button") as HTMLButtonElement;
  const status = document.getElementById("status") as HTMLElement;

  const settings = await loadSettings(kv);
  toggle.checked = settings.autoEnforce;
  toggle.addEventListener("change", () => {
    void saveSettings(kv, { ...settings, autoEnforce: toggle.checked });
  });

  const tab = await activeTab();
  if (tab?.id === undefined || !tab.url) {
    button.disabled = true;
    status.textContent = "no active page";
    return;
  }
  const hostname = new URL(tab.url).hostname;
  status.textContent = describeOutcome(await lastOutcome(kv, hostname.toLowerCase()));

  const notice = await chrome.tabs
    .sendMessage(tab.id, { type: "notice-status" })
    .catch(() => null);
  button.disabled = !(notice?.supported && notice?.present);

  button.addEventListener("click", () => {
    void (async () => {
      button.disabled = true;
      const outcome = (await chrome.tabs
        .sendMessage(tab.id as number, { type: "enforce" })
        .catch(() => null)) as EnforcementOutcome | null;
      status.textContent = describeOutcome(outcome);
    })();
  });
}

if (typeof chrome !== "undefined" && typeof document !== "undefined" && chrome.tabs) {
  void init();
}
