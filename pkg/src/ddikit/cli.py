"""Operator CLI driving the pipeline stages.

Every subcommand reads a single YAML config file naming the input files
(catalog, lexicon, mapping doc, literature graph, gold pairs, ...) plus a
handful of per-command flags.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import yaml

from .deduction import (
    ExtensionalDb,
    export_model_csv,
    fixpoint,
    load_ddis_csv,
    load_treatments_csv,
)
from .extraction import Lexicon, extract_corpus, load_catalog
from .mapping import MaterializeReport, TripleStore, materialize, parse_mapping_doc
from .prediction import (
    build_dataset,
    evaluate_cv,
    export_predictions_csv,
    load_gold_pairs,
    train_random_forest,
    LiteratureGraph,
)
from .service import create_app, load_store


def _load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        config = yaml.safe_load(fh) or {}
    if not isinstance(config, dict):
        raise click.ClickException(f"config {path} must be a mapping")
    return config


def _cfg_path(config: dict, key: str) -> Path:
    try:
        return Path(config[key])
    except KeyError:
        raise click.ClickException(f"config is missing required key {key!r}") from None


def _out_dir(config: dict) -> Path:
    out = Path(config.get("output_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


@click.group()
@click.option("--config", "-c", "config_path", default="config.yaml",
              show_default=True, type=click.Path(), help="Pipeline config file.")
@click.pass_context
def main(ctx, config_path):
    """Treatment-interaction analysis pipeline."""
    ctx.obj = {"config_path": config_path}


def _config(ctx) -> dict:
    return _load_config(ctx.obj["config_path"])


@main.command()
@click.pass_context
def extract(ctx):
    """Extract DDI facts from the corpus using the pattern catalog."""
    config = _config(ctx)
    catalog = load_catalog(_cfg_path(config, "catalog"))
    lexicon = Lexicon.from_csv(_cfg_path(config, "lexicon"))
    corpus_path = _cfg_path(config, "corpus")
    with open(corpus_path, encoding="utf-8") as fh:
        result = extract_corpus(fh, catalog, lexicon)
    out = _out_dir(config) / "extracted_ddis.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("precipitant_cui,effect,impact,object_cui,provenance\n")
        for f in result.ddis:
            fh.write(f"{f.precipitant.cui},{f.effect},{f.impact},{f.object.cui},{f.provenance}\n")
    click.echo(json.dumps({**result.counts, "partial": result.partial, "output": str(out)}))


@main.command()
@click.pass_context
def build(ctx):
    """Materialize the mapping document into a triple store export."""
    config = _config(ctx)
    maps = parse_mapping_doc(_cfg_path(config, "mapping_doc"))
    report = MaterializeReport()
    store = TripleStore()
    materialize(maps, _cfg_path(config, "data_dir"), report, store)
    out = _out_dir(config) / "store.nt"
    store.export(out)
    click.echo(json.dumps({"triples": len(store), "maps": len(maps), "output": str(out)}))


def _load_edb(config: dict) -> ExtensionalDb:
    data_dir = _cfg_path(config, "data_dir")
    lexicon = Lexicon.from_csv(_cfg_path(config, "lexicon"))
    drugs = {d.cui: d for d in lexicon.drugs()}
    ddis = load_ddis_csv(data_dir / "ddis.csv", drugs)
    treatments = load_treatments_csv(data_dir / "treatments.csv", drugs)
    return ExtensionalDb(ddis=ddis, treatments=treatments)


@main.command()
@click.pass_context
def deduce(ctx):
    """Run the deduction fixpoint and export the derived relations."""
    config = _config(ctx)
    model = fixpoint(_load_edb(config))
    out = _out_dir(config) / "deduced"
    export_model_csv(model, out)
    click.echo(json.dumps({
        "localized": len(model.localized),
        "deduced_ddis": len(model.deduced_ddis),
        "toxicity": len(model.toxicity),
        "effectiveness": len(model.effectiveness),
        "iterations": model.iterations,
        "output": str(out),
    }))


@main.command()
@click.option("--treatment", "-t", required=True, help="Treatment id to analyze.")
@click.pass_context
def analyze(ctx, treatment):
    """Wedge analysis of one treatment: ranking, reductions, graph export."""
    from .wedges import build_graph, ddi_reduction, export_graph_dot, export_report_csv, wedge_frequencies

    config = _config(ctx)
    edb = _load_edb(config)
    model = fixpoint(edb)
    t = edb.treatment(treatment)
    graph = build_graph(t, model)
    report = wedge_frequencies(graph)
    reductions = {cui: ddi_reduction(graph, edb.drug(cui), edb) for cui in graph.nodes}
    labels = {d.cui: d.label for d in t.drugs}
    out = _out_dir(config)
    export_report_csv(report, reductions, labels, out / f"{treatment}_report.csv")
    export_graph_dot(graph, labels, out / f"{treatment}_graph.dot")
    click.echo(json.dumps({
        "treatment": treatment,
        "edges": graph.edge_count,
        "ranking": [{"cui": c, "F": f, "tied": tied} for c, f, tied in report.ranking],
        "reductions": reductions,
    }))


def _load_pair_dataset(config: dict, n: int):
    graph = LiteratureGraph.from_csv(_cfg_path(config, "graph"))
    gold = load_gold_pairs(_cfg_path(config, "gold_pairs"))
    lexicon = Lexicon.from_csv(_cfg_path(config, "lexicon"))
    drugs = sorted(d.cui for d in lexicon.drugs() if d.cui in graph.nodes)
    pairs = [(a, b) for i, a in enumerate(drugs) for b in drugs[i + 1:]]
    X, y, kept = build_dataset(graph, pairs, gold, n)
    return X, y, kept


@main.command()
@click.option("--max-path-len", "-n", default=3, show_default=True)
@click.option("--trees", default=100, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.pass_context
def predict(ctx, max_path_len, trees, seed):
    """Train the pair classifier and export confidence scores per drug pair."""
    config = _config(ctx)
    X, y, pairs = _load_pair_dataset(config, max_path_len)
    forest = train_random_forest(X, y, trees=trees, seed=seed)
    records = [
        (a, b, forest.predict_confidence(x), "path-feature-forest")
        for (a, b), x in zip(pairs, X)
    ]
    out = _out_dir(config) / "predictions.csv"
    export_predictions_csv(records, out)
    click.echo(json.dumps({"pairs": len(records), "output": str(out)}))


@main.command(name="eval")
@click.option("--max-path-len", "-n", default=3, show_default=True)
@click.option("--folds", "-k", default=2, show_default=True)
@click.option("--trees", default=50, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.pass_context
def eval_cmd(ctx, max_path_len, folds, trees, seed):
    """Cross-validate the pair classifier on the configured gold pairs."""
    config = _config(ctx)
    X, y, _ = _load_pair_dataset(config, max_path_len)
    metrics = evaluate_cv(X, y, k=folds, trees=trees, seed=seed)
    click.echo(json.dumps({
        "roc_auc": metrics.roc_auc,
        "precision": metrics.precision,
        "recall": metrics.recall,
        "f1": metrics.f1,
        "folds": folds,
    }))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.pass_context
def serve(ctx, host, port):
    """Serve the exploration API over the configured data directory."""
    import uvicorn

    config = _config(ctx)
    app = create_app(load_store(_cfg_path(config, "data_dir")))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
