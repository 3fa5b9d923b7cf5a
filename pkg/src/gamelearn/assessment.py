"""Cognitive-core assessment: a 14-item forced-choice instrument scored by
majority per dichotomy, composing the two poles into one of ST, SF, NT, NF.

Each dichotomy block has an odd item count, so a strict majority always
exists and ties are structurally impossible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from importlib import resources
from typing import Mapping, Sequence

import yaml

from .errors import ValidationError


class Dichotomy(str, Enum):
    PERCEPTION = "perception"
    JUDGEMENT = "judgement"


class CognitiveCore(str, Enum):
    ST = "ST"
    SF = "SF"
    NT = "NT"
    NF = "NF"


# pole pair -> core; perception pole first
_CORE_BY_POLES = {
    ("S", "T"): CognitiveCore.ST,
    ("S", "F"): CognitiveCore.SF,
    ("N", "T"): CognitiveCore.NT,
    ("N", "F"): CognitiveCore.NF,
}

_POLES_BY_DICHOTOMY = {
    Dichotomy.PERCEPTION: {"S", "N"},
    Dichotomy.JUDGEMENT: {"F", "T"},
}


@dataclass(frozen=True)
class DichotomyItem:
    item_id: int
    dichotomy: Dichotomy
    text: str
    option_a: str
    option_b: str
    # option key ("A"/"B") -> pole letter; kept in data so instruments can re-key
    poles: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class AssessmentResponse:
    learner_id: str
    answers: Mapping[int, str]  # item_id -> "A" | "B"
    completed_at: datetime | None = None


@dataclass(frozen=True)
class Instrument:
    items: Sequence[DichotomyItem]

    def items_for(self, dichotomy: Dichotomy) -> list[DichotomyItem]:
        return [item for item in self.items if item.dichotomy == dichotomy]


def load_instrument(path=None) -> Instrument:
    """Load an instrument definition; defaults to the shipped 14-item file."""
    if path is None:
        text = resources.files("gamelearn.data").joinpath("mbti_instrument.yaml").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = yaml.safe_load(text)
    items = [
        DichotomyItem(
            item_id=int(entry["item_id"]),
            dichotomy=Dichotomy(entry["dichotomy"]),
            text=entry["text"],
            option_a=entry["option_a"],
            option_b=entry["option_b"],
            poles=dict(entry["poles"]),
        )
        for entry in raw["items"]
    ]
    errors = validate_instrument(items)
    if errors:
        raise ValidationError("; ".join(errors))
    return Instrument(items=items)


def validate_instrument(items: Sequence[DichotomyItem]) -> list[str]:
    """Return the list of structural problems; empty means the instrument is usable."""
    errors: list[str] = []
    if not items:
        return ["instrument has no items"]
    seen_ids = Counter(item.item_id for item in items)
    dupes = [item_id for item_id, n in seen_ids.items() if n > 1]
    if dupes:
        errors.append(f"duplicate item ids: {sorted(dupes)}")
    for dichotomy in Dichotomy:
        block = [item for item in items if item.dichotomy == dichotomy]
        if not block:
            errors.append(f"{dichotomy.value} block is empty")
            continue
        if len(block) % 2 == 0:
            errors.append(
                f"{dichotomy.value} block has {len(block)} items: tie possible, need an odd count"
            )
        expected = _POLES_BY_DICHOTOMY[dichotomy]
        for item in block:
            if set(item.poles.keys()) != {"A", "B"} or set(item.poles.values()) != expected:
                errors.append(
                    f"item {item.item_id}: options must key exactly to poles {sorted(expected)}"
                )
    return errors


def score_dichotomy(answers: Sequence[str], dichotomy: Dichotomy) -> str:
    """Majority pole for one dichotomy block under the default A/B keying
    (perception: A->S, B->N; judgement: A->F, B->T)."""
    if len(answers) != 7:
        raise ValidationError(f"expected 7 answers for {dichotomy.value}, got {len(answers)}")
    a_key, b_key = (
        ("S", "N") if dichotomy is Dichotomy.PERCEPTION else ("F", "T")
    )
    counts = Counter()
    for answer in answers:
        if answer not in ("A", "B"):
            raise ValidationError(f"invalid answer {answer!r}, expected 'A' or 'B'")
        counts[a_key if answer == "A" else b_key] += 1
    return max((a_key, b_key), key=lambda pole: counts[pole])


def determine_cognitive_core(
    response: AssessmentResponse, instrument: Instrument | None = None
) -> CognitiveCore:
    """Score both dichotomy blocks of a complete response and compose the core."""
    instrument = instrument or default_instrument()
    expected_ids = {item.item_id for item in instrument.items}
    answered_ids = set(response.answers.keys())
    if answered_ids != expected_ids:
        missing = sorted(expected_ids - answered_ids)
        extra = sorted(answered_ids - expected_ids)
        raise ValidationError(
            f"incomplete response: missing items {missing}, unexpected items {extra}"
        )

    poles = {}
    for dichotomy in Dichotomy:
        block = instrument.items_for(dichotomy)
        if len(block) % 2 == 0:
            raise ValidationError(f"{dichotomy.value} block has an even item count")
        counts = Counter()
        for item in block:
            answer = response.answers[item.item_id]
            if answer not in item.poles:
                raise ValidationError(f"invalid answer {answer!r} for item {item.item_id}")
            counts[item.poles[answer]] += 1
        poles[dichotomy] = counts.most_common(1)[0][0]
    return _CORE_BY_POLES[(poles[Dichotomy.PERCEPTION], poles[Dichotomy.JUDGEMENT])]


_DEFAULT_INSTRUMENT: Instrument | None = None


def default_instrument() -> Instrument:
    global _DEFAULT_INSTRUMENT
    if _DEFAULT_INSTRUMENT is None:
        _DEFAULT_INSTRUMENT = load_instrument()
    return _DEFAULT_INSTRUMENT
