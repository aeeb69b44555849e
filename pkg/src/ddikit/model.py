"""Core vocabulary for pharmacokinetic drug-drug interaction facts.

A fine-grained DDI is the 4-tuple ddi(precipitant, effect, impact, object):
the precipitant drug generates an effect (e.g. on metabolism) with an
impact (increase or decrease) on the object drug.  Effects are either one
of four closed pharmacokinetic kinds or an open pharmacodynamic phrase.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from importlib import resources

INCREASE = "increase"
DECREASE = "decrease"
IMPACTS = (INCREASE, DECREASE)

ABSORPTION = "absorption"
EXCRETION = "excretion"
METABOLISM = "metabolism"
SERUM = "serum"
CLOSED_EFFECTS = (ABSORPTION, EXCRETION, METABOLISM, SERUM)

PROVENANCES = ("extracted", "curated", "deduced", "predicted")

_CUI_RE = re.compile(r"^C\d{7}$")


class ValidationError(ValueError):
    """Raised when a core value violates a model invariant."""


def is_pharmacokinetic(effect: str) -> bool:
    """True for the four closed effect kinds; anything else is a
    pharmacodynamic phenotype phrase."""
    return effect in CLOSED_EFFECTS


@dataclass(frozen=True)
class DrugId:
    """A drug keyed by its UMLS CUI; equality and hashing ignore the label."""

    cui: str
    label: str

    def __post_init__(self):
        if not _CUI_RE.match(self.cui):
            raise ValidationError(f"malformed CUI: {self.cui!r}")
        if not self.label:
            raise ValidationError(f"empty label for CUI {self.cui}")

    def __eq__(self, other):
        if not isinstance(other, DrugId):
            return NotImplemented
        return self.cui == other.cui

    def __hash__(self):
        return hash(self.cui)


@dataclass(frozen=True)
class PkDdi:
    """One interaction fact: the precipitant alters effect/impact of the object."""

    precipitant: DrugId
    effect: str
    impact: str
    object: DrugId
    provenance: str = "extracted"

    def __post_init__(self):
        if self.precipitant == self.object:
            raise ValidationError(
                f"self-interaction for {self.precipitant.cui} is not a DDI"
            )
        if self.impact not in IMPACTS:
            raise ValidationError(f"unknown impact: {self.impact!r}")
        if not self.effect:
            raise ValidationError("empty effect")
        if self.provenance not in PROVENANCES:
            raise ValidationError(f"unknown provenance: {self.provenance!r}")


@dataclass(frozen=True)
class Treatment:
    """A named drug set split into COVID-19 drugs and comorbidity drugs."""

    id: str
    covid_drugs: frozenset[DrugId]
    comorbidity_drugs: frozenset[DrugId]
    comorbidities: frozenset[str] = field(default_factory=frozenset)

    @property
    def drugs(self) -> frozenset[DrugId]:
        return self.covid_drugs | self.comorbidity_drugs

    def is_member(self, drug: DrugId) -> bool:
        return drug in self.covid_drugs or drug in self.comorbidity_drugs


@dataclass(frozen=True)
class RuleFact:
    """Ground (effect, impact) combination driving toxicity (rule1) or
    effectiveness (rule2) consequences."""

    kind: str  # "rule1" | "rule2"
    effect: str
    impact: str

    def __post_init__(self):
        if self.kind not in ("rule1", "rule2"):
            raise ValidationError(f"unknown rule kind: {self.kind!r}")
        if self.effect not in CLOSED_EFFECTS:
            raise ValidationError(f"rule facts only cover closed effects, got {self.effect!r}")
        if self.impact not in IMPACTS:
            raise ValidationError(f"unknown impact: {self.impact!r}")


# (effect, impact) combinations that increase toxicity of the object drug.
_RULE1 = ((SERUM, INCREASE), (METABOLISM, DECREASE), (ABSORPTION, INCREASE), (EXCRETION, DECREASE))
# ...and the complementary ones that decrease its effectiveness.
_RULE2 = ((SERUM, DECREASE), (METABOLISM, INCREASE), (ABSORPTION, DECREASE), (EXCRETION, INCREASE))


def ground_rule_facts() -> frozenset[RuleFact]:
    """The eight ground rule facts: for each closed effect, one impact
    raises toxicity and the complementary one lowers effectiveness."""
    facts = [RuleFact("rule1", e, i) for e, i in _RULE1]
    facts += [RuleFact("rule2", e, i) for e, i in _RULE2]
    return frozenset(facts)


RULE1_PAIRS = frozenset(_RULE1)
RULE2_PAIRS = frozenset(_RULE2)


def load_effect_lexicon(path=None) -> dict[str, str]:
    """Load the surface-phrase -> canonical-effect table.

    Two-column CSV ``surface_phrase,canonical``.  Defaults to the table
    shipped with the package.
    """
    if path is None:
        ref = resources.files("ddikit.data").joinpath("effect_lexicon.csv")
        with ref.open(newline="", encoding="utf-8") as fh:
            return _read_lexicon(fh)
    with open(path, newline="", encoding="utf-8") as fh:
        return _read_lexicon(fh)


def _read_lexicon(fh) -> dict[str, str]:
    table = {}
    for row in csv.reader(fh):
        if not row or row[0].startswith("#"):
            continue
        surface, canonical = row[0].strip().lower(), row[1].strip()
        if canonical not in CLOSED_EFFECTS:
            raise ValidationError(f"lexicon maps {surface!r} to unknown effect {canonical!r}")
        table[surface] = canonical
    return table


_DEFAULT_LEXICON: dict[str, str] | None = None


def normalize_effect(raw_phrase: str, lexicon: dict[str, str] | None = None) -> str:
    """Map a surface effect phrase to a closed effect kind, or keep it as a
    lowercased pharmacodynamic phrase when no mapping exists."""
    global _DEFAULT_LEXICON
    if not raw_phrase or not raw_phrase.strip():
        raise ValidationError("empty effect phrase")
    if lexicon is None:
        if _DEFAULT_LEXICON is None:
            _DEFAULT_LEXICON = load_effect_lexicon()
        lexicon = _DEFAULT_LEXICON
    phrase = raw_phrase.strip().lower()
    return lexicon.get(phrase, phrase)


def validate_treatment(covid, comorbidity, id: str) -> Treatment:
    """Build a deduplicated treatment, rejecting overlap and emptiness."""
    covid = frozenset(covid)
    comorbidity = frozenset(comorbidity)
    overlap = covid & comorbidity
    if overlap:
        names = ", ".join(sorted(d.label for d in overlap))
        raise ValidationError(f"drug in both partitions: {names}")
    if not covid and not comorbidity:
        raise ValidationError(f"empty treatment: {id}")
    return Treatment(id=id, covid_drugs=covid, comorbidity_drugs=comorbidity)
