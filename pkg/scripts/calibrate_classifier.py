#!/usr/bin/env python3
"""Calibrate the lexical notice classifier against the labeled fixture corpus.

Builds the labeled candidate set the same way the acceptance suite does (at
most two top stacking candidates per fixture page, labeled against the
hand-marked notice element), reports precision/recall/F1 for the weights
currently frozen in cookiesweep.detector, and optionally grid-searches the
two weights that matter most. When the search finds a better combination,
copy the printed values into detector.py; the weights there are the single
source of truth.

Usage:
    python scripts/calibrate_classifier.py [--grid]
"""

import argparse
import itertools
import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cookiesweep import detector, dom  # noqa: E402
from cookiesweep.fixtures import load_corpus  # noqa: E402
from cookiesweep.fixtures.sim import SimSession  # noqa: E402


def labeled_candidates():
    samples = []
    for domain, site in load_corpus().items():
        sess = SimSession({domain: site})
        sess.navigate(f"http://{domain}/")
        delays = [n.appear_after_ms for n in sess.doc.nodes.values()]
        if any(delays):
            time.sleep(max(delays) / 1000.0 + 0.02)
        page = dom.annotate_selectors(dom.PageSnapshot.from_json(sess.snapshot()))
        for cand in dom.stacking_candidates(page)[:2]:
            text = detector.extract_candidate_text(page, cand)
            samples.append((text, site.notice_node == cand.node_id, domain))
    return samples


def evaluate(samples, score_fn, threshold=0.5):
    tp = fp = fn = tn = 0
    misses = []
    for text, actual, domain in samples:
        predicted = score_fn(text) >= threshold
        if predicted and actual:
            tp += 1
        elif predicted and not actual:
            fp += 1
            misses.append(("FP", domain, text[:60]))
        elif actual and not predicted:
            fn += 1
            misses.append(("FN", domain, text[:60]))
        else:
            tn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"tp": tp, "fp": fp, "fn": fn, "tn": tn,
            "precision": precision, "recall": recall, "f1": f1, "misses": misses}


def scorer(bias, w_consent, w_verbs, w_combo):
    def score(text):
        lowered = detector.normalize_text(text).lower()
        tokens = lowered.split(" ") if lowered else []
        consent = min(detector._count_hits(lowered, detector.CONSENT_TERMS), detector._CONSENT_CAP)
        verbs = min(detector._distinct_hits(lowered, detector.ACTION_VERBS), detector._VERB_CAP)
        plain = sum(
            1 for t in tokens
            if not any(term in t for term in detector.CONSENT_TERMS + detector.ACTION_VERBS)
        )
        z = bias + w_consent * consent + w_verbs * verbs
        if consent and verbs:
            z += w_combo
        if plain > detector._DILUTION_TOKENS:
            z += detector._W_DILUTION
        if len(tokens) < 2:
            z += detector._W_EMPTY
        return 1.0 / (1.0 + math.exp(-z))

    return score


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", action="store_true", help="grid-search bias and consent weight")
    args = parser.parse_args()

    samples = labeled_candidates()
    positives = sum(1 for _, actual, _ in samples if actual)
    print(f"{len(samples)} labeled candidates ({positives} positive)")

    current = evaluate(samples, detector.baseline_score)
    print(
        f"frozen weights: F1={current['f1']:.3f} "
        f"P={current['precision']:.3f} R={current['recall']:.3f} "
        f"(tp={current['tp']} fp={current['fp']} fn={current['fn']} tn={current['tn']})"
    )
    for kind, domain, text in current["misses"]:
        print(f"  {kind} {domain}: {text!r}")

    if args.grid:
        best = None
        for bias, w_consent, w_verbs, w_combo in itertools.product(
            [-3.4, -3.0, -2.6, -2.2],
            [1.0, 1.2, 1.4, 1.6],
            [0.3, 0.45, 0.6],
            [1.0, 1.4, 1.8],
        ):
            result = evaluate(samples, scorer(bias, w_consent, w_verbs, w_combo))
            key = (result["f1"], result["precision"])
            if best is None or key > best[0]:
                best = (key, (bias, w_consent, w_verbs, w_combo), result)
        (f1, precision), weights, result = best
        print(
            f"grid best: F1={f1:.3f} P={precision:.3f} R={result['recall']:.3f} "
            f"at bias={weights[0]} w_consent={weights[1]} w_verbs={weights[2]} w_combo={weights[3]}"
        )

    return 0 if current["f1"] >= 0.9 else 1


if __name__ == "__main__":
    sys.exit(main())
