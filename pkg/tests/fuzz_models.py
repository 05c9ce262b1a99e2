"""Seeded random serialized-notice generator for grammar fuzzing."""

import random

from cookiesweep.decision import Entry, SerializedNotice
from cookiesweep.notice import ElementTag, TagKind

_WORDS = [
    "cookies", "analytics", "advertising", "preferences", "tracking",
    "essential", "marketing", "statistics", "zebra", "quartz", "umbrella",
    "社", "partners", "vendor", "legitimate", "interests", "basic", "ads",
]
_BUTTON_PHRASES = [
    "accept all", "reject", "save settings", "manage options", "close",
    "confirm my choices", "only allow necessary cookies", "learn more",
    "got it", "decline everything", "do not sell my data", "cancel",
    "open the cookie jar", "show purposes",
]


def _label(rng: random.Random) -> str:
    if rng.random() < 0.5:
        return rng.choice(_BUTTON_PHRASES)
    n = rng.randint(1, 5)
    return " ".join(rng.choice(_WORDS) for _ in range(n))


def random_serialized_notice(rng: random.Random) -> SerializedNotice:
    views = []
    index = 0
    for _ in range(rng.randint(1, 3)):
        entries = []
        for _ in range(rng.randint(1, 6)):
            index += rng.randint(1, 3)  # gaps are normal (filtered elements)
            if rng.random() < 0.4:
                tag = ElementTag(kind=TagKind.SWITCH, index=index)
                entries.append(Entry(tag=tag, label=_label(rng), selected=rng.random() < 0.5))
            else:
                tag = ElementTag(kind=TagKind.BUTTON, index=index)
                entries.append(Entry(tag=tag, label=_label(rng)))
        views.append(entries)
    text = " ** ".join(" || ".join(e.render() for e in entries) for entries in views)
    return SerializedNotice(text=f"{text} <end>", entry_views=views, model_ref=None)
