"""Semi-naive bottom-up evaluation of the treatment-interaction rules.

Intensional relations over a treatment T:

    ddi(A,E,I,B), treatment(T), member(A,T), member(B,T) -> ddi(A,E,I,B,T)
    ddi(A,E,I,B,T), rule1(E,I)                 -> toxicity(A,increase,B,T)
    toxicity(A,B,T), toxicity(B,C,T)           -> toxicity(A,C,T)
    toxicity(A,B,T), ddi(B,E,I,C,T)            -> ddi(A,E,I,C,T)
    ddi(A,E,I,B,T), rule2(E,I)                 -> effectiveness(A,decrease,B,T)
    effectiveness(A,B,T), effectiveness(B,C,T) -> effectiveness(A,C,T)

The program is negation-free, so a single stratum saturates to the minimal
model.  Localized facts carry their treatment id; rule1/rule2 only fire on
the four closed pharmacokinetic effects, and the ddi premise of the
propagation rule is likewise pharmacokinetic (the ddi predicate describes
pharmacokinetic interactions; pharmacodynamic facts only localize).
Conclusions relating a drug to itself are dropped: a drug cannot be its
own interaction partner.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

from .model import (
    DrugId,
    PkDdi,
    RULE1_PAIRS,
    RULE2_PAIRS,
    Treatment,
    is_pharmacokinetic,
)


class Ddi5(NamedTuple):
    """ddi(A,E,I,B,T): a DDI localized to a treatment."""

    precipitant: str  # CUI
    effect: str
    impact: str
    object: str  # CUI
    treatment: str


class Toxicity(NamedTuple):
    precipitant: str
    object: str
    treatment: str


class Effectiveness(NamedTuple):
    precipitant: str
    object: str
    treatment: str


@dataclass(frozen=True)
class ExtensionalDb:
    ddis: frozenset[PkDdi]
    treatments: frozenset[Treatment]

    def treatment(self, treatment_id: str) -> Treatment:
        for t in self.treatments:
            if t.id == treatment_id:
                return t
        raise KeyError(f"unknown treatment: {treatment_id}")

    def drug(self, cui: str) -> DrugId:
        for d in self.ddis:
            if d.precipitant.cui == cui:
                return d.precipitant
            if d.object.cui == cui:
                return d.object
        for t in self.treatments:
            for d in t.drugs:
                if d.cui == cui:
                    return d
        raise KeyError(f"unknown drug: {cui}")


@dataclass
class DeducedModel:
    localized: set[Ddi5] = field(default_factory=set)
    deduced_ddis: set[Ddi5] = field(default_factory=set)
    toxicity: set[Toxicity] = field(default_factory=set)
    effectiveness: set[Effectiveness] = field(default_factory=set)
    trace: dict = field(default_factory=dict)
    iterations: int = 0
    treatment_ids: frozenset[str] = frozenset()

    @property
    def all_ddis(self) -> set[Ddi5]:
        return self.localized | self.deduced_ddis

    @property
    def new_facts(self) -> set:
        """Everything deduced beyond plain localization."""
        return set(self.deduced_ddis) | set(self.toxicity) | set(self.effectiveness)

    def ddis_of(self, treatment_id: str) -> set[Ddi5]:
        return {f for f in self.all_ddis if f.treatment == treatment_id}


class NotDerivedError(KeyError):
    """Queried fact is not an intensional fact of the model."""


def localize(edb: ExtensionalDb) -> set[Ddi5]:
    """ddi/4 facts whose both drugs are members of a treatment, per treatment."""
    out = set()
    for t in sorted(edb.treatments, key=lambda t: t.id):
        members = {d.cui for d in t.drugs}
        for ddi in edb.ddis:
            if ddi.precipitant.cui in members and ddi.object.cui in members:
                out.add(Ddi5(ddi.precipitant.cui, ddi.effect, ddi.impact, ddi.object.cui, t.id))
    return out


def fixpoint(edb: ExtensionalDb) -> DeducedModel:
    """Saturate all rules with semi-naive iteration and record one
    deterministic (first-found) derivation per intensional fact."""
    model = DeducedModel()
    model.treatment_ids = frozenset(t.id for t in edb.treatments)
    model.localized = localize(edb)
    for fact in sorted(model.localized):
        model.trace.setdefault(
            fact, ("localize", (("ddi4", fact.precipitant, fact.effect, fact.impact, fact.object),))
        )

    ddis: set[Ddi5] = set(model.localized)
    tox: set[Toxicity] = set()
    eff: set[Effectiveness] = set()
    # toxicity premises indexed by precipitant for the propagation rule;
    # pharmacokinetic ddis indexed by precipitant for rule joins.
    delta_ddis = set(ddis)
    delta_tox: set[Toxicity] = set()
    delta_eff: set[Effectiveness] = set()

    def pk(facts):
        return (f for f in facts if is_pharmacokinetic(f.effect))

    while delta_ddis or delta_tox or delta_eff:
        model.iterations += 1
        new_ddis: set[Ddi5] = set()
        new_tox: set[Toxicity] = set()
        new_eff: set[Effectiveness] = set()

        # ddi(A,E,I,B,T), rule1(E,I) -> toxicity ;  rule2(E,I) -> effectiveness
        for f in sorted(delta_ddis):
            if (f.effect, f.impact) in RULE1_PAIRS:
                t = Toxicity(f.precipitant, f.object, f.treatment)
                if t not in tox:
                    new_tox.add(t)
                    model.trace.setdefault(t, ("rule1", (f,)))
            if (f.effect, f.impact) in RULE2_PAIRS:
                e = Effectiveness(f.precipitant, f.object, f.treatment)
                if e not in eff:
                    new_eff.add(e)
                    model.trace.setdefault(e, ("rule2", (f,)))

        # toxicity transitivity: join deltas against the full relation
        def transitive(relation, delta, cls, rule_name, sink, known):
            by_prec: dict[tuple[str, str], list] = {}
            by_obj: dict[tuple[str, str], list] = {}
            for f in relation | delta:
                by_prec.setdefault((f.precipitant, f.treatment), []).append(f)
                by_obj.setdefault((f.object, f.treatment), []).append(f)
            for left in sorted(delta):
                for right in sorted(by_prec.get((left.object, left.treatment), [])):
                    if left.precipitant == right.object:
                        continue
                    fact = cls(left.precipitant, right.object, left.treatment)
                    if fact not in known and fact not in sink:
                        sink.add(fact)
                        model.trace.setdefault(fact, (rule_name, (left, right)))
                for left2 in sorted(by_obj.get((left.precipitant, left.treatment), [])):
                    if left2 in delta:
                        continue  # already joined above
                    if left2.precipitant == left.object:
                        continue
                    fact = cls(left2.precipitant, left.object, left.treatment)
                    if fact not in known and fact not in sink:
                        sink.add(fact)
                        model.trace.setdefault(fact, (rule_name, (left2, left)))

        transitive(tox, delta_tox, Toxicity, "toxicity-transitive", new_tox, tox)
        transitive(eff, delta_eff, Effectiveness, "effectiveness-transitive", new_eff, eff)

        # toxicity(A,B,T), ddi(B,E,I,C,T) -> ddi(A,E,I,C,T)   (pharmacokinetic ddis)
        ddis_by_prec: dict[tuple[str, str], list[Ddi5]] = {}
        for f in pk(ddis):
            ddis_by_prec.setdefault((f.precipitant, f.treatment), []).append(f)
        for t in sorted(delta_tox):
            for f in sorted(ddis_by_prec.get((t.object, t.treatment), [])):
                if t.precipitant == f.object:
                    continue
                fact = Ddi5(t.precipitant, f.effect, f.impact, f.object, f.treatment)
                if fact not in ddis and fact not in new_ddis:
                    new_ddis.add(fact)
                    model.trace.setdefault(fact, ("toxicity-propagation", (t, f)))
        tox_by_obj: dict[tuple[str, str], list[Toxicity]] = {}
        for t in tox:  # pair old toxicity with new ddis
            tox_by_obj.setdefault((t.object, t.treatment), []).append(t)
        for f in sorted(pk(delta_ddis)):
            for t in sorted(tox_by_obj.get((f.precipitant, f.treatment), [])):
                if t.precipitant == f.object:
                    continue
                fact = Ddi5(t.precipitant, f.effect, f.impact, f.object, f.treatment)
                if fact not in ddis and fact not in new_ddis:
                    new_ddis.add(fact)
                    model.trace.setdefault(fact, ("toxicity-propagation", (t, f)))

        tox |= delta_tox
        eff |= delta_eff
        ddis |= delta_ddis
        delta_ddis, delta_tox, delta_eff = new_ddis, new_tox, new_eff

    model.deduced_ddis = ddis - model.localized
    model.toxicity = tox
    model.effectiveness = eff
    return model


def explain(model: DeducedModel, fact) -> dict:
    """Derivation tree for an intensional fact: leaves are extensional facts,
    internal nodes name the applied rule."""
    if isinstance(fact, Ddi5) and fact in model.localized:
        rule, premises = model.trace[fact]
        return {"fact": fact, "rule": rule, "premises": [{"fact": p, "rule": None} for p in premises]}
    if fact not in model.trace or not isinstance(fact, (Ddi5, Toxicity, Effectiveness)):
        raise NotDerivedError(f"not an intensional fact of the model: {fact!r}")
    rule, premises = model.trace[fact]
    children = []
    for p in premises:
        if isinstance(p, (Ddi5, Toxicity, Effectiveness)) and p in model.trace:
            children.append(explain(model, p))
        else:
            children.append({"fact": p, "rule": None})
    return {"fact": fact, "rule": rule, "premises": children}


def depth(tree: dict) -> int:
    kids = [c for c in tree.get("premises", []) if c.get("rule") is not None]
    return 1 + (max(map(depth, kids)) if kids else 0)


def load_ddis_csv(path, drugs: dict[str, DrugId]) -> frozenset[PkDdi]:
    """Read extensional facts from ``precipitant_cui,effect,impact,object_cui``."""
    facts = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            facts.add(
                PkDdi(
                    precipitant=drugs[row["precipitant_cui"]],
                    effect=row["effect"].strip().lower(),
                    impact=row["impact"].strip().lower(),
                    object=drugs[row["object_cui"]],
                    provenance=row.get("provenance", "extracted") or "extracted",
                )
            )
    return frozenset(facts)


def load_treatments_csv(path, drugs: dict[str, DrugId]) -> frozenset[Treatment]:
    """Read treatments from ``treatment_id,drug_cui,role`` rows
    (role: covid | comorbidity)."""
    from .model import validate_treatment

    covid: dict[str, list[DrugId]] = {}
    como: dict[str, list[DrugId]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            tid = row["treatment_id"]
            bucket = covid if row["role"].strip() == "covid" else como
            bucket.setdefault(tid, []).append(drugs[row["drug_cui"]])
    ids = sorted(set(covid) | set(como))
    return frozenset(
        validate_treatment(covid.get(tid, []), como.get(tid, []), tid) for tid in ids
    )


def export_model_csv(model: DeducedModel, directory) -> None:
    """Write one CSV per relation (ddi5, toxicity, effectiveness)."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "ddi5.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["precipitant_cui", "effect", "impact", "object_cui", "treatment", "provenance"])
        for f in sorted(model.localized):
            w.writerow([f.precipitant, f.effect, f.impact, f.object, f.treatment, "extensional"])
        for f in sorted(model.deduced_ddis):
            w.writerow([f.precipitant, f.effect, f.impact, f.object, f.treatment, "deduced"])
    for name, rel in (("toxicity", model.toxicity), ("effectiveness", model.effectiveness)):
        with open(directory / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["precipitant_cui", "impact", "object_cui", "treatment"])
            impact = "increase" if name == "toxicity" else "decrease"
            for f in sorted(rel):
                w.writerow([f.precipitant, impact, f.object, f.treatment])
