"""Scripted fixture corpus: simulated pages, a WebDriver wire server over
them, and an HTML renderer that emits the same pages for the browser
extension's test corpus."""

from .sim import SimDocument, SimNode, SimSession, load_site, corpus_dir, load_corpus

__all__ = [
    "SimDocument",
    "SimNode",
    "SimSession",
    "load_site",
    "load_corpus",
    "corpus_dir",
]
