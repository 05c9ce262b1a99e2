// Executes a stored click plan against the live document.
//
// Failures never fall back to clicking accept: a partial or stale run just
// leaves the notice on screen for the user.

import type {
  EnforcementMode,
  EnforcementOutcome,
  EnforcementRecord,
} from "./types.js";

export interface EnforceOptions {
  doc?: Document;
  sleep?: (ms: number) => Promise<void>;
}

function realSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export function isVisible(el: Element): boolean {
  const view = el.ownerDocument?.defaultView;
  let node: Element | null = el;
  while (node !== null && node.nodeType === 1) {
    if ((node as HTMLElement).hidden) {
      return false;
    }
    let display = "";
    let visibility = "";
    if (view) {
      const style = view.getComputedStyle(node);
      display = style.display;
      visibility = style.visibility;
    } else {
      const style = (node as HTMLElement).style;
      display = style?.display ?? "";
      visibility = style?.visibility ?? "";
    }
    if (display === "none" || visibility === "hidden") {
      return false;
    }
    node = node.parentElement;
  }
  return true;
}

export type NoticePresence = "present" | "absent" | "stale";

export function noticePresence(
  record: EnforcementRecord,
  doc: Document,
): NoticePresence {
  if (!record.notice_selector) {
    return "stale";
  }
  let el: Element | null;
  try {
    el = doc.querySelector(record.notice_selector.css);
  } catch {
    return "stale";
  }
  if (el === null) {
    return "stale"; // markup changed under us
  }
  return isVisible(el) ? "present" : "absent";
}

export function checkNoticePresence(
  record: EnforcementRecord,
  doc: Document,
): boolean {
  return noticePresence(record, doc) === "present";
}

function currentToggleState(el: Element): "selected" | "not selected" | null {
  const input = el as HTMLInputElement;
  if (el.tagName === "INPUT" && (input.type === "checkbox" || input.type === "radio")) {
    return input.checked ? "selected" : "not selected";
  }
  const aria = el.getAttribute("aria-checked");
  if (aria !== null) {
    return aria === "true" ? "selected" : "not selected";
  }
  return null;
}

export async function enforce(
  record: EnforcementRecord,
  mode: EnforcementMode,
  options: EnforceOptions = {},
): Promise<EnforcementOutcome> {
  const doc = options.doc ?? document;
  const sleep = options.sleep ?? realSleep;
  const outcome = (result: EnforcementOutcome["result"], executed: number) => ({
    domain: record.domain,
    mode,
    result,
    steps_executed: executed,
  });

  const presence = noticePresence(record, doc);
  if (presence === "stale") {
    return outcome("SELECTOR_STALE", 0);
  }
  if (presence === "absent") {
    return outcome("NOTICE_ABSENT", 0);
  }
  if (record.status !== "PLAN" || record.steps.length === 0) {
    // Nothing safe to do; leave the notice for the user.
    return outcome("NOTICE_ABSENT", 0);
  }

  let executed = 0;
  for (const step of record.steps) {
    let el: Element | null;
    try {
      el = doc.querySelector(step.selector.css);
    } catch {
      el = null;
    }
    if (el === null) {
      return outcome("PARTIAL", executed);
    }
    if (step.expected_state_before !== null) {
      const current = currentToggleState(el);
      if (current !== null && current !== step.expected_state_before) {
        // Toggle already sits in its target state; the click is not needed.
        executed += 1;
        continue;
      }
    }
    (el as HTMLElement).click();
    await sleep(step.delay_after_ms);
    executed += 1;
  }
  return outcome("ENFORCED", executed);
}
