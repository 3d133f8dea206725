"""Templated dialogue suite construction.

Expands six dialogue template families over a data manifest into English
source instances whose adjective positions ("slots") are annotated with the
gender condition of their referent. Families T3/T4/T5 come in matched
determined/ambiguous pairs so that downstream metrics can measure how a
translation system reacts when the referent's gender stops being resolvable.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import InconsistentBinding, MissingBinding, QuotaInfeasible


class TemplateFamily(Enum):
    T1_ONE_PERSON_KNOWN = "T1"
    T2_TWO_PERSON_KNOWN = "T2"
    T3_ONE_PERSON_PARTIAL = "T3"
    T4_TWO_PERSON_PARTIAL = "T4"
    T5_CHAR_STEREOTYPE = "T5"
    T7_ADVERB_STEREOTYPE = "T7"

    @property
    def tag(self) -> str:
        return self.value


class GenderKind(Enum):
    DETERMINED_MASCULINE = "determined_masculine"
    DETERMINED_FEMININE = "determined_feminine"
    AMBIGUOUS = "ambiguous"


class AmbiguityKind(Enum):
    NONE = "none"
    OMISSION = "omission"
    ACTIVE = "active"


class Referent(Enum):
    SPEAKER = "speaker"
    LISTENER = "listener"


class StereotypeKind(Enum):
    NONE = "none"
    MASCULINE = "masculine"
    FEMININE = "feminine"


@dataclass(frozen=True)
class GenderCondition:
    kind: GenderKind
    ambiguity: AmbiguityKind = AmbiguityKind.NONE

    def __post_init__(self):
        determined = self.kind is not GenderKind.AMBIGUOUS
        if determined != (self.ambiguity is AmbiguityKind.NONE):
            raise ValueError("ambiguity kind must be set iff the condition is ambiguous")

    @property
    def is_ambiguous(self) -> bool:
        return self.kind is GenderKind.AMBIGUOUS

    @staticmethod
    def determined(gender: str) -> "GenderCondition":
        kind = GenderKind.DETERMINED_FEMININE if gender == "f" else GenderKind.DETERMINED_MASCULINE
        return GenderCondition(kind)


AMBIGUOUS_OMISSION = GenderCondition(GenderKind.AMBIGUOUS, AmbiguityKind.OMISSION)
AMBIGUOUS_ACTIVE = GenderCondition(GenderKind.AMBIGUOUS, AmbiguityKind.ACTIVE)


@dataclass(frozen=True)
class StereotypeCondition:
    kind: StereotypeKind = StereotypeKind.NONE
    cue: str = ""

    def __post_init__(self):
        if self.kind is StereotypeKind.NONE and self.cue:
            raise ValueError("a cue requires a stereotype kind")


NO_STEREOTYPE = StereotypeCondition()


@dataclass(frozen=True)
class AdjectiveSlot:
    slot_index: int
    lemma: str
    referent: Referent
    gender: GenderCondition
    stereotype: StereotypeCondition = NO_STEREOTYPE


@dataclass(frozen=True)
class TestInstance:
    id: str
    family: TemplateFamily
    source_text: str
    slots: tuple[AdjectiveSlot, ...]
    pair_id: str | None = None
    bindings: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DescriptorPair:
    """Stereotype-matched character descriptors, one per coded gender."""

    masculine: str
    feminine: str


# Quota keys name a (family, condition) subset; T7 is keyed by its stereotype
# condition because all its slots share one gender condition.
QUOTA_KEYS = (
    "T1-Det",
    "T2-Det",
    "T3-Det",
    "T3-Amb",
    "T4-Det",
    "T4-Amb",
    "T5-Det",
    "T5-Amb",
    "T7-None",
    "T7-StereoM",
    "T7-StereoF",
)


@dataclass
class SuiteManifest:
    adjectives: list[str]
    descriptor_pairs: list[DescriptorPair] = field(default_factory=list)
    adverbs_masculine: list[str] = field(default_factory=list)
    adverbs_feminine: list[str] = field(default_factory=list)
    quotas: dict[str, int] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        for key, value in self.quotas.items():
            if key not in QUOTA_KEYS:
                raise ValueError(f"unknown quota key {key!r}; expected one of {', '.join(QUOTA_KEYS)}")
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"quota {key} must be a non-negative integer, got {value!r}")

    def quota(self, key: str) -> int:
        return self.quotas.get(key, 0)

    @classmethod
    def from_dict(cls, data: Mapping) -> "SuiteManifest":
        pairs = [DescriptorPair(p["masculine"], p["feminine"]) for p in data.get("descriptor_pairs", [])]
        return cls(
            adjectives=list(data.get("adjectives", [])),
            descriptor_pairs=pairs,
            adverbs_masculine=list(data.get("adverbs_masculine", [])),
            adverbs_feminine=list(data.get("adverbs_feminine", [])),
            quotas={k: int(v) for k, v in data.get("quotas", {}).items()},
            seed=int(data.get("seed", 0)),
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "adjectives": list(self.adjectives),
            "descriptor_pairs": [
                {"masculine": p.masculine, "feminine": p.feminine} for p in self.descriptor_pairs
            ],
            "adverbs_masculine": list(self.adverbs_masculine),
            "adverbs_feminine": list(self.adverbs_feminine),
            "quotas": dict(self.quotas),
        }

    @classmethod
    def load(cls, path: str | Path) -> "SuiteManifest":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")


def quota_key_for_slot(family: TemplateFamily, slot: AdjectiveSlot) -> str:
    """Map a slot to the quota key that counts it."""
    if family is TemplateFamily.T7_ADVERB_STEREOTYPE:
        suffix = {
            StereotypeKind.NONE: "None",
            StereotypeKind.MASCULINE: "StereoM",
            StereotypeKind.FEMININE: "StereoF",
        }[slot.stereotype.kind]
    else:
        suffix = "Amb" if slot.gender.is_ambiguous else "Det"
    return f"{family.tag}-{suffix}"


# --- template expansion ----------------------------------------------------

_PRONOUN = {"f": "she", "m": "he"}
_NOUN = {"f": "woman", "m": "man"}
_OPPOSITE = {"f": "m", "m": "f"}


def _require(bindings: Mapping, key: str, family: TemplateFamily):
    if key not in bindings or bindings[key] is None:
        raise MissingBinding(f"{family.tag} expansion requires binding {key!r}")
    return bindings[key]


def _require_gender(bindings: Mapping, key: str, family: TemplateFamily) -> str:
    value = _require(bindings, key, family)
    if value not in ("f", "m"):
        raise InconsistentBinding(f"{family.tag} binding {key!r} must be 'f' or 'm', got {value!r}")
    return value


def _two_turn_text(
    opener_subject: str,
    first_pronoun: str,
    second_subject: str,
    second_pronoun: str,
    dialogue: str,
    bracket: bool,
    a1: str,
    a2: str,
) -> str:
    """Render the shared two-turn shape of the one-referent templates."""
    if dialogue == "self":
        first_line = f'"I think I\'m {a1},"'
        reply = f'"No, you\'re not {a1}, but you are {a2},"' if bracket else f'"No, you are {a2},"'
    else:
        first_line = f'"I think you\'re {a1},"'
        reply = f'"No, I\'m not {a1}, but I am {a2},"' if bracket else f'"No, I am {a2},"'
    return (
        f"{opener_subject} smiled. {first_line} {first_pronoun} said. "
        f"{second_subject} laughed back. {reply} {second_pronoun} replied."
    )


def _one_referent_slots(dialogue: str, a1: str, a2: str, condition: GenderCondition) -> tuple[AdjectiveSlot, ...]:
    # Both adjectives describe the same person: the opener's speaker when the
    # dialogue is self-referential, otherwise the opener's listener.
    if dialogue == "self":
        roles = (Referent.SPEAKER, Referent.LISTENER)
    else:
        roles = (Referent.LISTENER, Referent.SPEAKER)
    return (
        AdjectiveSlot(0, a1, roles[0], condition),
        AdjectiveSlot(1, a2, roles[1], condition),
    )


def _check_dialogue(value, family: TemplateFamily) -> str:
    if value not in ("self", "listener"):
        raise InconsistentBinding(f"{family.tag} binding 'dialogue' must be 'self' or 'listener', got {value!r}")
    return value


def _expand_t1(bindings: Mapping, family: TemplateFamily) -> tuple[str, tuple[AdjectiveSlot, ...]]:
    g1 = _require_gender(bindings, "char_gender", family)
    dialogue = _check_dialogue(_require(bindings, "dialogue", family), family)
    bracket = bool(_require(bindings, "bracket", family))
    a1 = _require(bindings, "A1", family)
    a2 = _require(bindings, "A2", family)
    g2 = _OPPOSITE[g1]
    text = _two_turn_text(
        f"The {_NOUN[g1]}", _PRONOUN[g1], _PRONOUN[g2].capitalize(), _PRONOUN[g2],
        dialogue, bracket, a1, a2,
    )
    referent_gender = g1 if dialogue == "self" else g2
    return text, _one_referent_slots(dialogue, a1, a2, GenderCondition.determined(referent_gender))


def _expand_t3(bindings: Mapping, family: TemplateFamily) -> tuple[str, tuple[AdjectiveSlot, ...]]:
    named = _require_gender(bindings, "named_gender", family)
    first_person = _require(bindings, "first_person", family)
    if first_person not in (1, 2):
        raise InconsistentBinding(f"T3/T4 binding 'first_person' must be 1 or 2, got {first_person!r}")
    dialogue = _check_dialogue(_require(bindings, "dialogue", family), family)
    bracket = bool(_require(bindings, "bracket", family))
    a1 = _require(bindings, "A1", family)
    a2 = _require(bindings, "A2", family)
    if first_person == 1:
        text = _two_turn_text("I", "I", _PRONOUN[named].capitalize(), _PRONOUN[named], dialogue, bracket, a1, a2)
    else:
        text = _two_turn_text(f"The {_NOUN[named]}", _PRONOUN[named], "I", "I", dialogue, bracket, a1, a2)
    referent_char = 1 if dialogue == "self" else 2
    if referent_char == first_person:
        condition = AMBIGUOUS_OMISSION
    else:
        condition = GenderCondition.determined(named)
    return text, _one_referent_slots(dialogue, a1, a2, condition)


def _four_slot_text(opener_subject: str, p1: str, second_subject: str, p2: str, a: tuple[str, str, str, str]) -> str:
    return (
        f"{opener_subject} smiled. \"I think I'm {a[0]} and you're {a[1]},\" {p1} said. "
        f"{second_subject} laughed back. \"No, you're {a[2]}, but I'm {a[3]},\" {p2} replied."
    )


def _four_slots(a: tuple[str, str, str, str], char1: GenderCondition, char2: GenderCondition) -> tuple[AdjectiveSlot, ...]:
    # A1/A3 describe the opener's speaker, A2/A4 the replying character.
    return (
        AdjectiveSlot(0, a[0], Referent.SPEAKER, char1),
        AdjectiveSlot(1, a[1], Referent.LISTENER, char2),
        AdjectiveSlot(2, a[2], Referent.LISTENER, char1),
        AdjectiveSlot(3, a[3], Referent.SPEAKER, char2),
    )


def _expand_t2(bindings: Mapping, family: TemplateFamily) -> tuple[str, tuple[AdjectiveSlot, ...]]:
    g1 = _require_gender(bindings, "char_gender", family)
    a = tuple(_require(bindings, key, family) for key in ("A1", "A2", "A3", "A4"))
    g2 = _OPPOSITE[g1]
    text = _four_slot_text(f"The {_NOUN[g1]}", _PRONOUN[g1], _PRONOUN[g2].capitalize(), _PRONOUN[g2], a)
    return text, _four_slots(a, GenderCondition.determined(g1), GenderCondition.determined(g2))


def _expand_t4(bindings: Mapping, family: TemplateFamily) -> tuple[str, tuple[AdjectiveSlot, ...]]:
    named = _require_gender(bindings, "named_gender", family)
    first_person = _require(bindings, "first_person", family)
    if first_person not in (1, 2):
        raise InconsistentBinding(f"T3/T4 binding 'first_person' must be 1 or 2, got {first_person!r}")
    a = tuple(_require(bindings, key, family) for key in ("A1", "A2", "A3", "A4"))
    if first_person == 1:
        text = _four_slot_text("I", "I", _PRONOUN[named].capitalize(), _PRONOUN[named], a)
        char1, char2 = AMBIGUOUS_OMISSION, GenderCondition.determined(named)
    else:
        text = _four_slot_text(f"The {_NOUN[named]}", _PRONOUN[named], "I", "I", a)
        char1, char2 = GenderCondition.determined(named), AMBIGUOUS_OMISSION
    return text, _four_slots(a, char1, char2)


def _expand_t5(bindings: Mapping, family: TemplateFamily) -> tuple[str, tuple[AdjectiveSlot, ...]]:
    c_g = _require(bindings, "C_g", family)
    c_gbar = _require(bindings, "C_gbar", family)
    cue_gender = _require(bindings, "C_g_stereotype", family)
    if cue_gender not in ("f", "m"):
        raise InconsistentBinding(f"T5 binding 'C_g_stereotype' must be 'f' or 'm', got {cue_gender!r}")
    pronoun = _require(bindings, "pronoun", family)
    if pronoun not in ("he", "she", "they"):
        raise InconsistentBinding(f"T5 binding 'pronoun' must be one of he/she/they, got {pronoun!r}")
    adjective = _require(bindings, "A", family)
    text = f"The {c_g} smiled. \"I think I'm {adjective},\" {pronoun} said to the {c_gbar}."
    if pronoun == "they":
        condition = AMBIGUOUS_ACTIVE
    else:
        condition = GenderCondition.determined("f" if pronoun == "she" else "m")
    stereotype = StereotypeCondition(
        StereotypeKind.FEMININE if cue_gender == "f" else StereotypeKind.MASCULINE, c_g
    )
    return text, (AdjectiveSlot(0, adjective, Referent.SPEAKER, condition, stereotype),)


def _expand_t7(bindings: Mapping, family: TemplateFamily) -> tuple[str, tuple[AdjectiveSlot, ...]]:
    adjective = _require(bindings, "A", family)
    adverb = bindings.get("adverb")
    if adverb:
        coded = _require(bindings, "adverb_stereotype", family)
        if coded not in ("f", "m"):
            raise InconsistentBinding(f"T7 binding 'adverb_stereotype' must be 'f' or 'm', got {coded!r}")
        text = f"\"I think I'm {adjective},\" I said {adverb}."
        stereotype = StereotypeCondition(
            StereotypeKind.FEMININE if coded == "f" else StereotypeKind.MASCULINE, adverb
        )
    else:
        text = f"\"I think I'm {adjective},\" I said."
        stereotype = NO_STEREOTYPE
    return text, (AdjectiveSlot(0, adjective, Referent.SPEAKER, AMBIGUOUS_OMISSION, stereotype),)


_EXPANDERS = {
    TemplateFamily.T1_ONE_PERSON_KNOWN: _expand_t1,
    TemplateFamily.T2_TWO_PERSON_KNOWN: _expand_t2,
    TemplateFamily.T3_ONE_PERSON_PARTIAL: _expand_t3,
    TemplateFamily.T4_TWO_PERSON_PARTIAL: _expand_t4,
    TemplateFamily.T5_CHAR_STEREOTYPE: _expand_t5,
    TemplateFamily.T7_ADVERB_STEREOTYPE: _expand_t7,
}


def expand_template(
    family: TemplateFamily,
    bindings: Mapping,
    instance_id: str = "",
    pair_id: str | None = None,
) -> TestInstance:
    """Expand one template family over a variable map.

    Raises MissingBinding when a required variable is absent and
    InconsistentBinding when a variable value contradicts the family
    (e.g. a T5 speech-tag pronoun outside he/she/they).
    """
    text, slots = _EXPANDERS[family](bindings, family)
    instance = TestInstance(
        id=instance_id,
        family=family,
        source_text=text,
        slots=slots,
        pair_id=pair_id,
        bindings=dict(bindings),
    )
    for slot in slots:
        if slot.lemma not in text:
            raise InconsistentBinding(f"adjective {slot.lemma!r} did not surface in the expanded text")
    return instance


# --- suite generation -------------------------------------------------------

# Fixed cycles over the variant dimensions, ordered so that every prefix is
# balanced within one item on every dimension (gender alternates strictly).
_T1_CYCLE = (
    ("f", "self", True),
    ("m", "listener", False),
    ("f", "listener", True),
    ("m", "self", False),
    ("f", "self", False),
    ("m", "listener", True),
    ("f", "listener", False),
    ("m", "self", True),
)

_T3_CYCLE = (
    ("f", 1, True),
    ("m", 2, False),
    ("f", 2, True),
    ("m", 1, False),
    ("f", 1, False),
    ("m", 2, True),
    ("f", 2, False),
    ("m", 1, True),
)


def _adjective_stream(adjectives: list[str], width: int, family: str) -> Iterator[tuple[str, ...]]:
    if len(adjectives) < width:
        raise QuotaInfeasible(
            f"{family} instances need {width} distinct adjectives per instance; "
            f"manifest list 'adjectives' has only {len(adjectives)}"
        )
    n = len(adjectives)
    i = 0
    while True:
        yield tuple(adjectives[(i + j) % n] for j in range(width))
        i = (i + width) % n


def _check_even(value: int, key: str, per_instance: int) -> int:
    if value % per_instance:
        raise QuotaInfeasible(
            f"quota {key}={value} is not a multiple of {per_instance} (slots per instance)"
        )
    return value // per_instance


def _generate_t1(manifest: SuiteManifest) -> list[TestInstance]:
    count = _check_even(manifest.quota("T1-Det"), "T1-Det", 2)
    if not count:
        return []
    adjectives = _adjective_stream(manifest.adjectives, 2, "T1")
    out = []
    for i in range(count):
        referent_gender, dialogue, bracket = _T1_CYCLE[i % len(_T1_CYCLE)]
        a1, a2 = next(adjectives)
        char_gender = referent_gender if dialogue == "self" else _OPPOSITE[referent_gender]
        bindings = {"char_gender": char_gender, "dialogue": dialogue, "bracket": bracket, "A1": a1, "A2": a2}
        out.append(expand_template(TemplateFamily.T1_ONE_PERSON_KNOWN, bindings, f"T1-{i:06d}d"))
    return out


def _generate_t2(manifest: SuiteManifest) -> list[TestInstance]:
    count = _check_even(manifest.quota("T2-Det"), "T2-Det", 4)
    if not count:
        return []
    adjectives = _adjective_stream(manifest.adjectives, 4, "T2")
    out = []
    for i in range(count):
        a1, a2, a3, a4 = next(adjectives)
        bindings = {"char_gender": ("f", "m")[i % 2], "A1": a1, "A2": a2, "A3": a3, "A4": a4}
        out.append(expand_template(TemplateFamily.T2_TWO_PERSON_KNOWN, bindings, f"T2-{i:06d}d"))
    return out


def _generate_t3(manifest: SuiteManifest) -> list[TestInstance]:
    det, amb = manifest.quota("T3-Det"), manifest.quota("T3-Amb")
    if det != amb:
        raise QuotaInfeasible(f"T3 is generated in matched pairs; T3-Det ({det}) must equal T3-Amb ({amb})")
    pairs = _check_even(det, "T3-Det", 2)
    if not pairs:
        return []
    adjectives = _adjective_stream(manifest.adjectives, 2, "T3")
    out = []
    for p in range(pairs):
        named_gender, first_person, bracket = _T3_CYCLE[p % len(_T3_CYCLE)]
        a1, a2 = next(adjectives)
        stem = f"T3-{p:06d}"
        base = {"named_gender": named_gender, "first_person": first_person, "bracket": bracket, "A1": a1, "A2": a2}
        # The minimal perturbation is the I'm/you're flip: pointing the
        # dialogue at the named character keeps gender determined, pointing it
        # at the first-person character makes it ambiguous by omission.
        det_dialogue = "self" if first_person == 2 else "listener"
        amb_dialogue = "self" if first_person == 1 else "listener"
        out.append(expand_template(
            TemplateFamily.T3_ONE_PERSON_PARTIAL, {**base, "dialogue": det_dialogue}, stem + "d", stem))
        out.append(expand_template(
            TemplateFamily.T3_ONE_PERSON_PARTIAL, {**base, "dialogue": amb_dialogue}, stem + "a", stem))
    return out


def _generate_t4(manifest: SuiteManifest) -> list[TestInstance]:
    det, amb = manifest.quota("T4-Det"), manifest.quota("T4-Amb")
    if det != amb:
        raise QuotaInfeasible(f"T4 instances mix conditions evenly; T4-Det ({det}) must equal T4-Amb ({amb})")
    pairs = _check_even(det, "T4-Det", 4)
    if not pairs:
        return []
    adjectives = _adjective_stream(manifest.adjectives, 4, "T4")
    out = []
    for p in range(pairs):
        named_gender = ("f", "m")[p % 2]
        a1, a2, a3, a4 = next(adjectives)
        stem = f"T4-{p:06d}"
        base = {"named_gender": named_gender, "A1": a1, "A2": a2, "A3": a3, "A4": a4}
        # The perturbation swaps which character speaks in first person; the
        # 'd' member resolves the opener's speaker, the 'a' member does not.
        out.append(expand_template(
            TemplateFamily.T4_TWO_PERSON_PARTIAL, {**base, "first_person": 2}, stem + "d", stem))
        out.append(expand_template(
            TemplateFamily.T4_TWO_PERSON_PARTIAL, {**base, "first_person": 1}, stem + "a", stem))
    return out


def _generate_t5(manifest: SuiteManifest) -> list[TestInstance]:
    det, amb = manifest.quota("T5-Det"), manifest.quota("T5-Amb")
    if det != 2 * amb:
        raise QuotaInfeasible(
            f"T5 emits one he + one she instance per they instance; T5-Det ({det}) must equal 2 x T5-Amb ({amb})"
        )
    if not amb:
        return []
    if not manifest.descriptor_pairs:
        raise QuotaInfeasible("T5 quotas need at least one entry in manifest list 'descriptor_pairs'")
    adjectives = _adjective_stream(manifest.adjectives, 1, "T5")
    out = []
    for t in range(amb):
        cue_gender = ("m", "f")[t % 2]
        pair = manifest.descriptor_pairs[(t // 2) % len(manifest.descriptor_pairs)]
        if cue_gender == "m":
            c_g, c_gbar = pair.masculine, pair.feminine
        else:
            c_g, c_gbar = pair.feminine, pair.masculine
        (adjective,) = next(adjectives)
        stem = f"T5-{t:06d}"
        base = {"C_g": c_g, "C_gbar": c_gbar, "C_g_stereotype": cue_gender, "A": adjective}
        for pronoun, suffix in (("he", "d1"), ("she", "d2"), ("they", "a")):
            out.append(expand_template(
                TemplateFamily.T5_CHAR_STEREOTYPE, {**base, "pronoun": pronoun}, stem + suffix, stem))
    return out


def _generate_t7(manifest: SuiteManifest) -> list[TestInstance]:
    plan = (
        ("T7-None", None, None),
        ("T7-StereoM", manifest.adverbs_masculine, "m"),
        ("T7-StereoF", manifest.adverbs_feminine, "f"),
    )
    out = []
    seq = 0
    adjectives = _adjective_stream(manifest.adjectives, 1, "T7") if any(
        manifest.quota(key) for key, _, _ in plan
    ) else None
    for key, adverbs, coded in plan:
        count = manifest.quota(key)
        if not count:
            continue
        if coded and not adverbs:
            source = "adverbs_masculine" if coded == "m" else "adverbs_feminine"
            raise QuotaInfeasible(f"quota {key} needs at least one entry in manifest list {source!r}")
        for i in range(count):
            (adjective,) = next(adjectives)
            bindings: dict = {"A": adjective}
            if coded:
                bindings["adverb"] = adverbs[i % len(adverbs)]
                bindings["adverb_stereotype"] = coded
            out.append(expand_template(TemplateFamily.T7_ADVERB_STEREOTYPE, bindings, f"T7-{seq:06d}a"))
            seq += 1
    return out


def generate_suite(manifest: SuiteManifest, seed: int | None = None) -> list[TestInstance]:
    """Expand the manifest into a full suite.

    Slot counts per (family, condition) equal the quotas exactly; binary
    gender, first-person position and stereotype cues are balanced by
    construction. Instance ids depend only on the manifest lists, so they are
    stable across seeds; the seed controls the final instance ordering.
    """
    instances: list[TestInstance] = []
    instances += _generate_t1(manifest)
    instances += _generate_t2(manifest)
    instances += _generate_t3(manifest)
    instances += _generate_t4(manifest)
    instances += _generate_t5(manifest)
    instances += _generate_t7(manifest)
    rng = random.Random(manifest.seed if seed is None else seed)
    rng.shuffle(instances)
    return instances


# --- balance validation ------------------------------------------------------

_GENDERED_PRONOUNS = frozenset({"he", "she", "him", "her", "his", "hers"})
_WORD_RE = re.compile(r"[a-zA-Z']+")


@dataclass
class BalanceDiagnostics:
    slot_counts: dict[str, int]
    det_gender_split: dict[str, tuple[int, int]]
    speaker_position_split: dict[str, tuple[int, int]]
    pronoun_counts: dict[str, int]
    cue_split_by_pronoun: dict[str, tuple[int, int]]
    violations: list[str]
    warnings: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def _split_check(
    label: str, a: int, b: int, violations: list[str], warnings: list[str], unit: int = 1
) -> None:
    """Flag a split: beyond `unit` it is a violation, within it a warning.

    `unit` is the smallest imbalance a quota can force on the generator, e.g.
    2 for T1/T3 determined gender (two same-gender slots per instance) and 4
    for T4 (four per instance pair).
    """
    diff = abs(a - b)
    if diff > unit:
        violations.append(f"imbalance: {label} split {a}/{b}")
    elif diff:
        warnings.append(f"odd split: {label} {a}/{b} (off by one unit)")


def validate_balance(suite: Iterable[TestInstance], quotas: Mapping[str, int] | None = None) -> BalanceDiagnostics:
    """Re-check the generator's postconditions on an arbitrary suite.

    Pure diagnostic: counts per condition, binary-gender and speaker-position
    splits, stereotype balance, pair integrity and pronoun leakage. When
    `quotas` is given, slot counts are also compared against it.
    """
    instances = list(suite)
    by_id = {inst.id: inst for inst in instances}
    violations: list[str] = []
    warnings: list[str] = []

    slot_counts: dict[str, int] = {}
    det_f: dict[str, int] = {}
    det_m: dict[str, int] = {}
    fp_counts: dict[str, dict[int, int]] = {}
    pronoun_counts: dict[str, int] = {"he": 0, "she": 0, "they": 0}
    cue_by_pronoun: dict[str, dict[str, int]] = {p: {"m": 0, "f": 0} for p in ("he", "she", "they")}
    pair_groups: dict[str, str] = {}

    for inst in instances:
        family = inst.family.tag
        for slot in inst.slots:
            key = quota_key_for_slot(inst.family, slot)
            slot_counts[key] = slot_counts.get(key, 0) + 1
            if slot.gender.kind is GenderKind.DETERMINED_FEMININE:
                det_f[family] = det_f.get(family, 0) + 1
            elif slot.gender.kind is GenderKind.DETERMINED_MASCULINE:
                det_m[family] = det_m.get(family, 0) + 1
            if slot.lemma not in inst.source_text:
                violations.append(f"text: {inst.id} slot {slot.slot_index} lemma {slot.lemma!r} absent from source")

        if family in ("T3", "T4"):
            fp = inst.bindings.get("first_person")
            if fp in (1, 2):
                fp_counts.setdefault(family, {1: 0, 2: 0})[fp] += 1

        if family == "T5":
            pronoun = inst.bindings.get("pronoun", "")
            cue = inst.bindings.get("C_g_stereotype", "")
            if pronoun in pronoun_counts:
                pronoun_counts[pronoun] += 1
                if cue in ("m", "f"):
                    cue_by_pronoun[pronoun][cue] += 1
            ambiguous = any(slot.gender.is_ambiguous for slot in inst.slots)
            if ambiguous:
                words = {w.lower() for w in _WORD_RE.findall(inst.source_text)}
                leaked = sorted(words & _GENDERED_PRONOUNS)
                if leaked:
                    violations.append(f"leakage: {inst.id} is ambiguous but contains {', '.join(leaked)}")

        if inst.pair_id is not None:
            pair_groups.setdefault(inst.pair_id, family)

    for pair_id, family in pair_groups.items():
        expected = {"T3": ("d", "a"), "T4": ("d", "a"), "T5": ("d1", "d2", "a")}.get(family)
        if not expected:
            continue
        partners = [pair_id + suffix for suffix in expected]
        missing = [pid for pid in partners if pid not in by_id]
        if missing:
            violations.append(f"pairing: group {pair_id} incomplete, missing {', '.join(missing)}")
        else:
            lemma_lists = {tuple(s.lemma for s in by_id[pid].slots) for pid in partners}
            if len(lemma_lists) != 1:
                violations.append(f"pairing: group {pair_id} members disagree on adjectives")

    if quotas is not None:
        for key in QUOTA_KEYS:
            expected = quotas.get(key, 0)
            found = slot_counts.get(key, 0)
            if expected != found:
                violations.append(f"count-mismatch: {key} expected {expected}, found {found}")

    # paired families must keep their construction ratios even without quotas
    if slot_counts.get("T3-Det", 0) != slot_counts.get("T3-Amb", 0):
        violations.append(
            f"count-mismatch: T3-Det ({slot_counts.get('T3-Det', 0)}) != T3-Amb ({slot_counts.get('T3-Amb', 0)})"
        )
    if slot_counts.get("T4-Det", 0) != slot_counts.get("T4-Amb", 0):
        violations.append(
            f"count-mismatch: T4-Det ({slot_counts.get('T4-Det', 0)}) != T4-Amb ({slot_counts.get('T4-Amb', 0)})"
        )
    if slot_counts.get("T5-Det", 0) != 2 * slot_counts.get("T5-Amb", 0):
        violations.append(
            f"count-mismatch: T5-Det ({slot_counts.get('T5-Det', 0)}) != 2 x T5-Amb ({slot_counts.get('T5-Amb', 0)})"
        )

    gender_units = {"T1": 2, "T2": 0, "T3": 2, "T4": 4, "T5": 0}
    det_gender_split = {}
    for family in sorted(set(det_f) | set(det_m)):
        f_count, m_count = det_f.get(family, 0), det_m.get(family, 0)
        det_gender_split[family] = (f_count, m_count)
        _split_check(
            f"{family} determined gender", f_count, m_count, violations, warnings,
            unit=gender_units.get(family, 1),
        )

    position_units = {"T3": 2, "T4": 0}
    speaker_position_split = {}
    for family, counts in sorted(fp_counts.items()):
        speaker_position_split[family] = (counts[1], counts[2])
        _split_check(
            f"{family} first-person position", counts[1], counts[2], violations, warnings,
            unit=position_units.get(family, 1),
        )

    active = {p: c for p, c in pronoun_counts.items() if c}
    if active:
        # every generated triplet carries all three pronouns, so any spread
        # means the suite was edited by hand
        if max(pronoun_counts.values()) - min(pronoun_counts.values()) > 0:
            violations.append(
                "imbalance: T5 pronouns he/she/they split "
                f"{pronoun_counts['he']}/{pronoun_counts['she']}/{pronoun_counts['they']}"
            )
        for pronoun, cues in cue_by_pronoun.items():
            if cues["m"] or cues["f"]:
                _split_check(f"T5 {pronoun!r} stereotype cues", cues["m"], cues["f"], violations, warnings)

    return BalanceDiagnostics(
        slot_counts=slot_counts,
        det_gender_split=det_gender_split,
        speaker_position_split=speaker_position_split,
        pronoun_counts=pronoun_counts,
        cue_split_by_pronoun={p: (c["m"], c["f"]) for p, c in cue_by_pronoun.items()},
        violations=violations,
        warnings=warnings,
    )
