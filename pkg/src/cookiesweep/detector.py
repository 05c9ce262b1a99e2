"""Cookie-notice detection: score stacking candidates with a text classifier.

The classifier is pluggable. The default is a transparent lexical scorer
whose weights were calibrated once on the repo's labeled fixture corpus
(see scripts/calibrate_classifier.py); a served model can be swapped in via
``ClassifierKind.EXTERNAL_HTTP`` without touching the detection logic.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import requests

from . import dom
from .errors import ClassifierUnavailable

DEFAULT_MAX_TOKENS = 256

# Lexicon of consent vocabulary. Substring matching on lowercased text, so
# "third part" covers third party/parties and "personali" covers the -ise,
# -ize, and -isation spellings.
CONSENT_TERMS = (
    "cookie",
    "consent",
    "gdpr",
    "privacy",
    "tracking",
    "third part",
    "personali",
)

ACTION_VERBS = (
    "accept",
    "agree",
    "allow",
    "reject",
    "decline",
    "deny",
    "refuse",
    "manage",
    "settings",
    "customize",
    "customise",
    "preferences",
    "save",
    "confirm",
    "opt out",
    "opt-out",
    "got it",
    "okay",
    "sorry",
    "no thanks",
)

# Logistic weights, frozen from the calibration run over the labeled corpus
# (scripts/calibrate_classifier.py reproduces them).
_BIAS = -2.6
_W_CONSENT = 1.4
_W_VERBS = 0.45
_W_COMBO = 1.4
_W_DILUTION = -1.8
_W_EMPTY = -3.0
_CONSENT_CAP = 6
_VERB_CAP = 5
_DILUTION_TOKENS = 400


class ClassifierKind(str, Enum):
    BASELINE_LEXICAL = "BASELINE_LEXICAL"
    EXTERNAL_HTTP = "EXTERNAL_HTTP"


@dataclass
class ClassifierHandle:
    kind: ClassifierKind = ClassifierKind.BASELINE_LEXICAL
    threshold: float = 0.5
    endpoint: Optional[str] = None
    max_tokens: int = DEFAULT_MAX_TOKENS
    timeout_s: float = 5.0
    _gate: threading.Semaphore = field(
        default_factory=lambda: threading.Semaphore(4), repr=False, compare=False
    )

    def __post_init__(self):
        if self.kind is ClassifierKind.EXTERNAL_HTTP and not self.endpoint:
            raise ValueError("EXTERNAL_HTTP classifier requires an endpoint")


@dataclass(frozen=True)
class NoticeCandidate:
    element: dom.ElementSnapshot
    concatenated_text: str
    score: float
    degraded: bool = False

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score out of range: {self.score}")


def normalize_text(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


def extract_candidate_text(
    page: dom.PageSnapshot,
    el: dom.ElementSnapshot,
    max_tokens: int = DEFAULT_MAX_TOKENS,
) -> str:
    """Depth-first concatenation of the visible text inside ``el``,
    including interactive-element labels, capped at ``max_tokens``
    whitespace-delimited tokens."""
    if page.get(el.node_id) is None:
        raise ValueError(f"element {el.node_id} not in page")
    parts: list[str] = []
    for node in page.subtree(el):
        if not dom.is_visible(node) and node is not el:
            continue
        if node.own_text:
            parts.append(node.own_text)
        if node.tag_name == "input" and node.attr("value"):
            parts.append(node.attr("value"))
        elif not node.own_text and node.attr("aria-label"):
            parts.append(node.attr("aria-label"))
    text = normalize_text(" ".join(parts))
    tokens = text.split(" ") if text else []
    if len(tokens) > max_tokens:
        tokens = tokens[:max_tokens]
    return " ".join(tokens)


def _count_hits(text: str, terms: tuple[str, ...]) -> int:
    return sum(text.count(term) for term in terms)


def _distinct_hits(text: str, terms: tuple[str, ...]) -> int:
    return sum(1 for term in terms if term in text)


def baseline_score(text: str) -> float:
    """Deterministic lexical probability that ``text`` is a cookie notice.

    Dilution counts only non-lexicon tokens, which keeps the score monotone
    under appended consent vocabulary.
    """
    lowered = normalize_text(text).lower()
    tokens = lowered.split(" ") if lowered else []
    consent_hits = min(_count_hits(lowered, CONSENT_TERMS), _CONSENT_CAP)
    verb_hits = min(_distinct_hits(lowered, ACTION_VERBS), _VERB_CAP)
    plain_tokens = sum(
        1
        for t in tokens
        if not any(term in t for term in CONSENT_TERMS + ACTION_VERBS)
    )
    z = _BIAS + _W_CONSENT * consent_hits + _W_VERBS * verb_hits
    if consent_hits and verb_hits:
        z += _W_COMBO
    if plain_tokens > _DILUTION_TOKENS:
        z += _W_DILUTION
    if len(tokens) < 2:
        z += _W_EMPTY
    return 1.0 / (1.0 + math.exp(-z))


def classify(h: ClassifierHandle, text: str) -> float:
    """Probability that ``text`` came from a cookie notice."""
    if h.kind is ClassifierKind.BASELINE_LEXICAL:
        return baseline_score(text)
    with h._gate:
        try:
            resp = requests.post(h.endpoint, json={"text": text}, timeout=h.timeout_s)
            resp.raise_for_status()
            p = float(resp.json()["p"])
        except (requests.RequestException, ValueError, KeyError) as exc:
            raise ClassifierUnavailable(f"external classifier failed: {exc}") from exc
    return min(max(p, 0.0), 1.0)


def detect_notice(
    page: dom.PageSnapshot, h: ClassifierHandle
) -> Optional[NoticeCandidate]:
    """Highest-scoring stacking candidate at or above the threshold.

    Scores are compared with a 0.01 tolerance; within it, the candidate
    earlier in stacking order wins, since that is what actually sits on top.
    On external-classifier failure the baseline takes over and the result is
    marked degraded.
    """
    candidates = dom.stacking_candidates(page)
    best: Optional[NoticeCandidate] = None
    for el in candidates:
        text = extract_candidate_text(page, el, max_tokens=h.max_tokens)
        degraded = False
        try:
            score = classify(h, text)
        except ClassifierUnavailable:
            score = baseline_score(text)
            degraded = True
        if best is None or score > best.score + 0.01:
            best = NoticeCandidate(
                element=el, concatenated_text=text, score=score, degraded=degraded
            )
    if best is None or best.score < h.threshold:
        return None
    return best
