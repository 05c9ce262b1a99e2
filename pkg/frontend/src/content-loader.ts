// Classic content script stub: Chrome cannot load module content scripts
// directly, so the real module is imported dynamically from the extension
// package (listed under web_accessible_resources).

void import(chrome.runtime.getURL("dist/content-main.js"));
