"""Wedge analysis of a treatment's interaction graph.

A wedge is a path of two directed edges A -> B -> C with A != C; its middle
vertex B is the object of one interaction and the precipitant of the other,
so a drug that is the middle vertex of N wedges takes part in 2*N
interactions.  Parallel edges with distinct labels are distinct DDIs and
are counted separately.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field

from .deduction import DeducedModel, ExtensionalDb, fixpoint
from .model import DrugId, Treatment, validate_treatment


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    precipitant: str  # CUI
    effect: str
    impact: str
    object: str  # CUI
    provenance: str  # "extensional" | "deduced"


@dataclass
class InteractionGraph:
    treatment_id: str
    nodes: frozenset[str]  # CUIs
    edges: frozenset[Edge]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass
class WedgeReport:
    frequencies: dict[str, int]
    wedge_count: int
    deduced_ddi_percentage: float
    ranking: list[tuple[str, int, bool]]  # (cui, F, tied-at-rank-1)


def build_graph(
    treatment: Treatment, model: DeducedModel, include_deduced: bool = True
) -> InteractionGraph:
    """One edge per ddi/5 fact of the treatment; deduced facts are labeled."""
    if treatment.id not in model.treatment_ids:
        raise AnalysisError(f"model was not computed for treatment {treatment.id!r}")
    facts = model.ddis_of(treatment.id)
    edges = set()
    for f in sorted(facts):
        deduced = f in model.deduced_ddis
        if deduced and not include_deduced:
            continue
        edges.add(
            Edge(f.precipitant, f.effect, f.impact, f.object,
                 "deduced" if deduced else "extensional")
        )
    return InteractionGraph(
        treatment_id=treatment.id,
        nodes=frozenset(d.cui for d in treatment.drugs),
        edges=frozenset(edges),
    )


def wedge_frequencies(graph: InteractionGraph) -> WedgeReport:
    """Count, per drug, the ordered multigraph edge pairs (A->B, B->C), A != C."""
    in_by_node: Counter = Counter()
    out_by_node: Counter = Counter()
    pair_in: Counter = Counter()  # (middle, other) -> #edges other->middle
    pair_out: Counter = Counter()  # (middle, other) -> #edges middle->other
    for e in graph.edges:
        in_by_node[e.object] += 1
        out_by_node[e.precipitant] += 1
        pair_in[(e.object, e.precipitant)] += 1
        pair_out[(e.precipitant, e.object)] += 1

    freqs = {}
    for node in graph.nodes:
        total = in_by_node[node] * out_by_node[node]
        # subtract back-and-forth pairs A -> B -> A, which are not paths
        back = sum(
            pair_in[(node, other)] * pair_out[(node, other)]
            for other in graph.nodes
            if other != node
        )
        freqs[node] = total - back

    deduced = sum(1 for e in graph.edges if e.provenance == "deduced")
    pct = 100.0 * deduced / len(graph.edges) if graph.edges else 0.0
    report = WedgeReport(
        frequencies=freqs,
        wedge_count=sum(freqs.values()),
        deduced_ddi_percentage=pct,
        ranking=[],
    )
    report.ranking = rank_drugs(report)
    return report


def rank_drugs(report: WedgeReport) -> list[tuple[str, int, bool]]:
    """Descending by frequency, ties broken lexicographically by CUI and
    flagged so a clinician can make the withdrawal call."""
    if not report.frequencies:
        return []
    ordered = sorted(report.frequencies.items(), key=lambda kv: (-kv[1], kv[0]))
    top = ordered[0][1]
    top_tied = top > 0 and sum(1 for _, f in ordered if f == top) > 1
    return [(cui, f, top_tied and f == top) for cui, f in ordered]


def ddi_reduction(
    graph: InteractionGraph,
    drug: DrugId,
    edb: ExtensionalDb,
    include_deduced: bool = True,
) -> float | None:
    """Percentage of the treatment's DDIs eliminated by withdrawing a drug.

    The deductive closure is recomputed on the reduced drug set, so deduced
    interactions premised on the removed drug disappear as well.  Returns
    None when the treatment has no interactions to begin with.
    """
    if drug.cui not in graph.nodes:
        raise AnalysisError(f"{drug.cui} is not part of treatment {graph.treatment_id}")
    total = graph.edge_count
    if total == 0:
        return None
    treatment = edb.treatment(graph.treatment_id)
    remaining_covid = [d for d in treatment.covid_drugs if d != drug]
    remaining_como = [d for d in treatment.comorbidity_drugs if d != drug]
    if not remaining_covid and not remaining_como:
        return 100.0
    reduced = validate_treatment(remaining_covid, remaining_como, treatment.id)
    reduced_edb = ExtensionalDb(ddis=edb.ddis, treatments=frozenset([reduced]))
    reduced_model = fixpoint(reduced_edb)
    reduced_graph = build_graph(reduced, reduced_model, include_deduced=include_deduced)
    return 100.0 * (total - reduced_graph.edge_count) / total


def export_report_csv(report: WedgeReport, reductions: dict[str, float | None],
                      labels: dict[str, str], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["drug_cui", "label", "F", "reduction_percent"])
        for cui, f, _tied in report.ranking:
            red = reductions.get(cui)
            w.writerow([cui, labels.get(cui, ""), f, "" if red is None else f"{red:.1f}"])


def export_graph_dot(graph: InteractionGraph, labels: dict[str, str], path) -> None:
    """DOT-compatible edge list for visualization."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"digraph \"{graph.treatment_id}\" {{\n")
        for node in sorted(graph.nodes):
            fh.write(f'  "{labels.get(node, node)}";\n')
        for e in sorted(graph.edges, key=lambda e: (e.precipitant, e.object, e.effect)):
            style = ' style=dashed color=red' if e.provenance == "deduced" else ""
            fh.write(
                f'  "{labels.get(e.precipitant, e.precipitant)}" -> '
                f'"{labels.get(e.object, e.object)}" '
                f'[label="{e.effect}/{e.impact}"{style}];\n'
            )
        fh.write("}\n")
