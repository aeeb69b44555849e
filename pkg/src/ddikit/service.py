"""HTTP exploration API over the materialized interaction store.

The store is loaded once at startup and never mutated; every endpoint is a
pure function of the store and the request.  Interaction records use the
effector/affected field naming of the store's query vocabulary
(effectorDrugLabel, affectdDrugLabel, effectLabel, impactLabel).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from .deduction import ExtensionalDb, fixpoint, load_ddis_csv
from .extraction import Lexicon
from .model import DrugId, PkDdi, ValidationError, validate_treatment
from .wedges import build_graph, ddi_reduction, wedge_frequencies


@dataclass(frozen=True)
class Publication:
    pub_id: str
    title: str
    year: int
    journal: str
    url: str


@dataclass(frozen=True)
class Prediction:
    cui_a: str
    cui_b: str
    confidence: float
    method: str


@dataclass
class Store:
    """Immutable fact store backing the API."""

    drugs: dict[str, DrugId] = field(default_factory=dict)
    lexicon: Lexicon | None = None
    ddis: frozenset[PkDdi] = frozenset()
    publications: list[Publication] = field(default_factory=list)
    annotations: dict[str, frozenset[str]] = field(default_factory=dict)  # pub_id -> CUIs
    predictions: list[Prediction] = field(default_factory=list)

    def label(self, cui: str) -> str:
        drug = self.drugs.get(cui)
        return drug.label if drug else cui

    def drug(self, cui: str) -> DrugId:
        return self.drugs.get(cui) or DrugId(cui, cui)


def load_store(data_dir) -> Store:
    """Load the fact store from a directory of CSV exports."""
    data_dir = Path(data_dir)
    lexicon = Lexicon.from_csv(data_dir / "lexicon.csv")
    drugs: dict[str, DrugId] = {d.cui: d for d in lexicon.drugs()}
    with open(data_dir / "drugs.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            drugs.setdefault(row["cui"], DrugId(row["cui"], row["label"]))
    ddis = load_ddis_csv(data_dir / "ddis.csv", drugs)

    publications = []
    with open(data_dir / "publications.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            publications.append(
                Publication(row["pub_id"], row["title"], int(row["year"]),
                            row["journal"], row["url"])
            )
    annotations: dict[str, set[str]] = {}
    with open(data_dir / "annotations.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            annotations.setdefault(row["pub_id"], set()).add(row["cui"])

    predictions = []
    with open(data_dir / "predictions.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            predictions.append(
                Prediction(row["cui_a"], row["cui_b"], float(row["confidence"]),
                           row["method"])
            )
    return Store(
        drugs=drugs,
        lexicon=lexicon,
        ddis=ddis,
        publications=publications,
        annotations={k: frozenset(v) for k, v in annotations.items()},
        predictions=predictions,
    )


class TreatmentRequest(BaseModel):
    covid_drugs: list[str]
    comorbidity_drugs: list[str] = []
    treatment_id: str = "adhoc"


def _parse_cuis(cuis: str) -> list[str]:
    parsed = [c.strip() for c in cuis.split(",") if c.strip()]
    if not parsed:
        raise HTTPException(status_code=422, detail="at least one CUI is required")
    return parsed


def _ddi_record(store: Store, fact: PkDdi) -> dict:
    return {
        "effectorDrugCui": fact.precipitant.cui,
        "effectorDrugLabel": fact.precipitant.label,
        "affectdDrugCui": fact.object.cui,
        "affectdDrugLabel": fact.object.label,
        "effectLabel": fact.effect,
        "impactLabel": fact.impact,
        "provenance": fact.provenance,
    }


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="ddikit interaction service")

    def warnings_for(requested: list[str]) -> list[str]:
        return [f"unknown CUI: {c}" for c in requested if c not in store.drugs]

    @app.get("/health")
    def health():
        return {"status": "ok", "drugs": len(store.drugs), "ddis": len(store.ddis)}

    @app.get("/drugs")
    def drugs(prefix: str = Query(..., min_length=2)):
        hits = store.lexicon.search(prefix) if store.lexicon else []
        return {"drugs": [{"cui": d.cui, "label": d.label} for d in hits]}

    @app.get("/ddi")
    def get_ddis(cuis: str, target: str = Query(...)):
        requested = _parse_cuis(cuis)
        if target not in ("DDI", "DDIS"):
            raise HTTPException(status_code=422, detail=f"invalid target {target!r}")
        wanted = set(requested)
        if target == "DDI":
            facts = [f for f in store.ddis
                     if f.precipitant.cui in wanted or f.object.cui in wanted]
        else:
            facts = [f for f in store.ddis
                     if f.precipitant.cui in wanted and f.object.cui in wanted]
        facts.sort(key=lambda f: (f.precipitant.cui, f.object.cui, f.effect, f.impact))
        return {
            "interactions": [_ddi_record(store, f) for f in facts],
            "warnings": warnings_for(requested),
        }

    @app.get("/ddi-predicted")
    def get_predicted(cuis: str, target: str = Query(...)):
        requested = _parse_cuis(cuis)
        if target not in ("DDIP", "DDIPS"):
            raise HTTPException(status_code=422, detail=f"invalid target {target!r}")
        wanted = set(requested)
        records = []
        for p in store.predictions:
            if p.confidence <= 0:
                continue
            pair = {p.cui_a, p.cui_b}
            hit = bool(pair & wanted) if target == "DDIP" else pair <= wanted
            if hit:
                records.append({
                    "effectorDrugCui": p.cui_a,
                    "effectorDrugLabel": store.label(p.cui_a),
                    "affectdDrugCui": p.cui_b,
                    "affectdDrugLabel": store.label(p.cui_b),
                    "confidence": p.confidence,
                    "provenance": p.method,
                })
        records.sort(key=lambda r: (r["effectorDrugCui"], r["affectdDrugCui"]))
        return {"interactions": records, "warnings": warnings_for(requested)}

    @app.get("/publications")
    def get_publications(cuis: str):
        requested = _parse_cuis(cuis)
        wanted = set(requested)
        hits = [
            p for p in store.publications
            if wanted <= store.annotations.get(p.pub_id, frozenset())
        ]
        return {
            "publications": [
                {"title": p.title, "year": p.year, "journal": p.journal, "url": p.url}
                for p in sorted(hits, key=lambda p: p.pub_id)
            ],
            "warnings": warnings_for(requested),
        }

    @app.post("/treatment/analyze")
    def analyze(request: TreatmentRequest):
        try:
            treatment = validate_treatment(
                [store.drug(c) for c in request.covid_drugs],
                [store.drug(c) for c in request.comorbidity_drugs],
                request.treatment_id,
            )
        except ValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        edb = ExtensionalDb(ddis=store.ddis, treatments=frozenset([treatment]))
        model = fixpoint(edb)
        graph = build_graph(treatment, model)
        report = wedge_frequencies(graph)
        reductions = {
            cui: ddi_reduction(graph, store.drug(cui), edb)
            for cui in sorted(graph.nodes)
        }
        deduced = sorted(model.deduced_ddis)
        return {
            "treatment_id": treatment.id,
            "interactions": [
                {
                    "effectorDrugCui": e.precipitant,
                    "effectorDrugLabel": store.label(e.precipitant),
                    "affectdDrugCui": e.object,
                    "affectdDrugLabel": store.label(e.object),
                    "effectLabel": e.effect,
                    "impactLabel": e.impact,
                    "provenance": e.provenance,
                }
                for e in sorted(graph.edges,
                                key=lambda e: (e.precipitant, e.object, e.effect))
            ],
            "deduced_count": len(deduced),
            "toxicity": [
                {"effectorDrugCui": t.precipitant, "affectdDrugCui": t.object,
                 "impactLabel": "increase"}
                for t in sorted(model.toxicity)
            ],
            "effectiveness": [
                {"effectorDrugCui": e.precipitant, "affectdDrugCui": e.object,
                 "impactLabel": "decrease"}
                for e in sorted(model.effectiveness)
            ],
            "ranking": [
                {"cui": cui, "label": store.label(cui), "frequency": f, "tied": tied}
                for cui, f, tied in report.ranking
            ],
            "wedge_count": report.wedge_count,
            "deduced_ddi_percentage": report.deduced_ddi_percentage,
            "reductions": reductions,
        }

    return app
