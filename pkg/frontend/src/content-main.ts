// Content script body (dynamically imported by content-loader). Runs in
// every frame so frame-local selectors resolve in their own documents.

import { checkNoticePresence } from "./enforcer.js";
import { chromeKV } from "./storage.js";
import {
  enforceOnPage,
  loadSettings,
  recordForHost,
  shouldAutoEnforce,
} from "./runtime.js";

const NOTICE_POLL_MS = 500;
const NOTICE_POLL_LIMIT = 12; // notices can trail the load event by seconds

async function waitForNotice(kv: ReturnType<typeof chromeKV>): Promise<boolean> {
  const record = await recordForHost(kv, location.hostname);
  if (record === null) {
    return false;
  }
  for (let attempt = 0; attempt < NOTICE_POLL_LIMIT; attempt += 1) {
    if (checkNoticePresence(record, document)) {
      return true;
    }
    await new Promise((resolve) => setTimeout(resolve, NOTICE_POLL_MS));
  }
  return false;
}

async function autoRun(): Promise<void> {
  const kv = chromeKV();
  const settings = await loadSettings(kv);
  const record = await recordForHost(kv, location.hostname);
  if (!shouldAutoEnforce(settings, record)) {
    return;
  }
  if (await waitForNotice(kv)) {
    await enforceOnPage(kv, location.hostname, "AUTO", document);
  }
}

if (typeof chrome !== "undefined" && chrome.runtime?.onMessage) {
  chrome.runtime.onMessage.addListener((message, _sender, sendResponse) => {
    const kv = chromeKV();
    if (message?.type === "enforce") {
      enforceOnPage(kv, location.hostname, "MANUAL", document).then(sendResponse);
      return true;
    }
    if (message?.type === "notice-status") {
      recordForHost(kv, location.hostname).then((record) => {
        sendResponse({
          supported: record !== null && record.status === "PLAN",
          present: record !== null && checkNoticePresence(record, document),
        });
      });
      return true;
    }
    return false;
  });
  void autoRun();
}
