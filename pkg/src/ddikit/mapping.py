"""Declarative triples maps over CSV/JSON sources, materialized with
duplicate-eliminating indexes.

The mapping document is line-oriented:

    MAP <id>
    SOURCE <path> <csv|json-records> [<iterator>]
    SUBJECT <template> CLASS <class-iri>
    PO <predicate-iri> REF <attr>
    PO <predicate-iri> TEMPLATE <tpl>
    PO <predicate-iri> CONST <value>
    PO <predicate-iri> JOIN <map-id> <child-attr> <parent-attr>
"""

from __future__ import annotations

import csv
import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

RDF_TYPE = "rdf:type"

_TEMPLATE_ATTR_RE = re.compile(r"\{([^{}]+)\}")
_IRI_RE = re.compile(r"^[A-Za-z][\w.+-]*:\S+$")


class MappingError(ValueError):
    """Malformed mapping document or unexecutable map."""


@dataclass(frozen=True)
class ObjectSpec:
    kind: str  # "ref" | "template" | "const" | "join"
    value: str
    child_attr: str | None = None
    parent_attr: str | None = None


@dataclass(frozen=True)
class PredicateObjectMap:
    predicate: str
    object_spec: ObjectSpec


@dataclass(frozen=True)
class LogicalSource:
    path: str
    format: str  # "csv" | "json-records"
    iterator: str | None = None


@dataclass(frozen=True)
class TriplesMap:
    map_id: str
    logical_source: LogicalSource
    subject_template: str
    subject_class: str
    predicate_object_maps: tuple[PredicateObjectMap, ...]

    @property
    def join_parents(self) -> set[str]:
        return {
            po.object_spec.value
            for po in self.predicate_object_maps
            if po.object_spec.kind == "join"
        }


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str
    object_kind: str  # "iri" | "literal"


class TripleStore:
    """Set-semantics assertion store with per-predicate and per-class indexes."""

    def __init__(self):
        self._by_predicate: dict[str, set[tuple[str, str, str]]] = {}
        self._by_class: dict[str, set[str]] = {}
        self._size = 0

    def __len__(self):
        return self._size

    def add(self, triple: Triple) -> bool:
        """Insert a triple; returns False when it was already present."""
        bucket = self._by_predicate.setdefault(triple.predicate, set())
        key = (triple.subject, triple.object, triple.object_kind)
        if key in bucket:
            return False
        bucket.add(key)
        self._size += 1
        if triple.predicate == RDF_TYPE:
            self._by_class.setdefault(triple.object, set()).add(triple.subject)
        return True

    def __contains__(self, triple: Triple) -> bool:
        bucket = self._by_predicate.get(triple.predicate)
        return bucket is not None and (triple.subject, triple.object, triple.object_kind) in bucket

    def triples(self):
        for predicate, bucket in self._by_predicate.items():
            for subject, obj, kind in bucket:
                yield Triple(subject, predicate, obj, kind)

    def by_predicate(self, predicate: str) -> list[Triple]:
        bucket = self._by_predicate.get(predicate, set())
        return [Triple(s, predicate, o, k) for s, o, k in bucket]

    def subjects_of_class(self, class_iri: str) -> set[str]:
        return set(self._by_class.get(class_iri, set()))

    def object_of(self, subject: str, predicate: str) -> str | None:
        for t in self._by_predicate.get(predicate, set()):
            if t[0] == subject:
                return t[1]
        return None

    def as_set(self) -> set[tuple[str, str, str, str]]:
        return {(t.subject, t.predicate, t.object, t.object_kind) for t in self.triples()}

    def export(self, path) -> None:
        """One assertion per line: IRIs in angle brackets, literals quoted."""
        with open(path, "w", encoding="utf-8") as fh:
            for t in sorted(self.as_set()):
                subject, predicate, obj, kind = t
                rendered = f"<{obj}>" if kind == "iri" else json.dumps(obj)
                fh.write(f"<{subject}> <{predicate}> {rendered} .\n")


def parse_mapping_doc(path) -> list[TriplesMap]:
    maps: list[TriplesMap] = []
    current: dict | None = None

    def finish():
        nonlocal current
        if current is None:
            return
        for key in ("source", "subject"):
            if key not in current:
                raise MappingError(f"map {current['id']}: missing {key.upper()} line")
        maps.append(
            TriplesMap(
                map_id=current["id"],
                logical_source=current["source"],
                subject_template=current["subject"][0],
                subject_class=current["subject"][1],
                predicate_object_maps=tuple(current["pos"]),
            )
        )
        current = None

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            keyword = tokens[0].upper()
            if keyword == "MAP":
                finish()
                if len(tokens) != 2:
                    raise MappingError(f"line {lineno}: MAP takes one identifier")
                current = {"id": tokens[1], "pos": []}
                continue
            if current is None:
                raise MappingError(f"line {lineno}: {keyword} before any MAP")
            if keyword == "SOURCE":
                if len(tokens) not in (3, 4):
                    raise MappingError(f"line {lineno}: SOURCE <path> <format> [<iterator>]")
                fmt = tokens[2]
                if fmt not in ("csv", "json-records"):
                    raise MappingError(f"line {lineno}: unknown source format {fmt!r}")
                current["source"] = LogicalSource(
                    tokens[1], fmt, tokens[3] if len(tokens) == 4 else None
                )
            elif keyword == "SUBJECT":
                if len(tokens) != 4 or tokens[2].upper() != "CLASS":
                    raise MappingError(f"line {lineno}: SUBJECT <template> CLASS <class-iri>")
                current["subject"] = (tokens[1], tokens[3])
            elif keyword == "PO":
                if len(tokens) < 4:
                    raise MappingError(f"line {lineno}: incomplete PO line")
                predicate, kind = tokens[1], tokens[2].upper()
                if kind in ("REF", "TEMPLATE", "CONST"):
                    spec = ObjectSpec(kind.lower(), " ".join(tokens[3:]))
                elif kind == "JOIN":
                    if len(tokens) != 6:
                        raise MappingError(
                            f"line {lineno}: PO <pred> JOIN <map-id> <child-attr> <parent-attr>"
                        )
                    spec = ObjectSpec("join", tokens[3], tokens[4], tokens[5])
                else:
                    raise MappingError(f"line {lineno}: unknown object spec kind {kind!r}")
                current["pos"].append(PredicateObjectMap(predicate, spec))
            else:
                raise MappingError(f"line {lineno}: unknown keyword {keyword!r}")
    finish()

    ids = [m.map_id for m in maps]
    if len(set(ids)) != len(ids):
        raise MappingError("duplicate map ids in document")
    known = set(ids)
    for m in maps:
        for parent in m.join_parents:
            if parent not in known:
                raise MappingError(f"map {m.map_id}: join refers to unknown map {parent!r}")
    return maps


def load_source(source: LogicalSource, data_dir) -> list[dict]:
    path = Path(data_dir) / source.path
    if not path.exists():
        raise MappingError(f"unreadable source path: {path}")
    if source.format == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if source.iterator:
        for part in source.iterator.split("."):
            doc = doc[part]
    if not isinstance(doc, list):
        raise MappingError(f"{path}: json-records source must yield a list of records")
    return doc


def _instantiate(template: str, row: dict) -> str | None:
    """Substitute {attr} references; None when any referenced value is missing."""
    out = template
    for attr in _TEMPLATE_ATTR_RE.findall(template):
        value = row.get(attr)
        if value is None or value == "":
            return None
        out = out.replace("{" + attr + "}", str(value))
    return out


def _check_attrs(template: str, header, map_id: str, where: str):
    for attr in _TEMPLATE_ATTR_RE.findall(template):
        if attr not in header:
            raise MappingError(f"map {map_id}: {where} references unknown attribute {attr!r}")


def execute_triples_map(
    tmap: TriplesMap,
    rows: list[dict],
    store: TripleStore,
    parent_index: dict[str, dict[str, dict[str, list[str]]]] | None = None,
) -> int:
    """Run one map over its resolved rows; returns the number of triples added."""
    header = set(rows[0].keys()) if rows else None
    if header is not None:
        _check_attrs(tmap.subject_template, header, tmap.map_id, "subject template")
        for po in tmap.predicate_object_maps:
            spec = po.object_spec
            if spec.kind == "template":
                _check_attrs(spec.value, header, tmap.map_id, f"object template of {po.predicate}")
            elif spec.kind == "ref" and spec.value not in header:
                raise MappingError(
                    f"map {tmap.map_id}: REF references unknown attribute {spec.value!r}"
                )
            elif spec.kind == "join" and spec.child_attr not in header:
                raise MappingError(
                    f"map {tmap.map_id}: join child attribute {spec.child_attr!r} not in source"
                )

    added = 0
    for row in rows:
        subject = _instantiate(tmap.subject_template, row)
        if subject is None:
            continue
        added += store.add(Triple(subject, RDF_TYPE, tmap.subject_class, "iri"))
        for po in tmap.predicate_object_maps:
            spec = po.object_spec
            if spec.kind == "ref":
                value = row.get(spec.value)
                if value is None or value == "":
                    continue
                added += store.add(Triple(subject, po.predicate, str(value), "literal"))
            elif spec.kind == "template":
                value = _instantiate(spec.value, row)
                if value is None:
                    continue
                added += store.add(Triple(subject, po.predicate, value, "iri"))
            elif spec.kind == "const":
                kind = "iri" if _IRI_RE.match(spec.value) else "literal"
                added += store.add(Triple(subject, po.predicate, spec.value, kind))
            else:  # join
                child_value = row.get(spec.child_attr)
                if child_value is None or child_value == "":
                    continue
                index = (parent_index or {}).get(spec.value, {}).get(spec.parent_attr, {})
                for parent_subject in index.get(str(child_value), []):
                    added += store.add(Triple(subject, po.predicate, parent_subject, "iri"))
    return added


def _dependency_order(maps: list[TriplesMap]) -> list[TriplesMap]:
    by_id = {m.map_id: m for m in maps}
    order: list[TriplesMap] = []
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def visit(mid: str, stack: list[str]):
        if state.get(mid) == 1:
            return
        if state.get(mid) == 0:
            cycle = stack[stack.index(mid):] + [mid]
            raise MappingError("cyclic parent-join dependency: " + " -> ".join(cycle))
        state[mid] = 0
        for parent in sorted(by_id[mid].join_parents):
            visit(parent, stack + [mid])
        state[mid] = 1
        order.append(by_id[mid])

    for m in maps:
        visit(m.map_id, [])
    return order


@dataclass
class MaterializeReport:
    per_map_counts: dict[str, int] = field(default_factory=dict)
    wall_time_s: float = 0.0


def materialize(maps: list[TriplesMap], data_dir, report: MaterializeReport | None = None,
                store: TripleStore | None = None) -> TripleStore:
    """Execute all maps, parents before joins, into a duplicate-free store."""
    start = time.perf_counter()
    store = store if store is not None else TripleStore()
    ordered = _dependency_order(maps)
    rows_cache: dict[tuple, list[dict]] = {}
    parent_index: dict[str, dict[str, dict[str, list[str]]]] = {}
    for tmap in ordered:
        src_key = (tmap.logical_source.path, tmap.logical_source.format,
                   tmap.logical_source.iterator)
        rows = rows_cache.get(src_key)
        if rows is None:
            rows = load_source(tmap.logical_source, data_dir)
            rows_cache[src_key] = rows
        added = execute_triples_map(tmap, rows, store, parent_index)
        if report is not None:
            report.per_map_counts[tmap.map_id] = added
        # index this map's subjects by every attribute other maps may join on
        needed_attrs = {
            po.object_spec.parent_attr
            for m in maps
            for po in m.predicate_object_maps
            if po.object_spec.kind == "join" and po.object_spec.value == tmap.map_id
        }
        if needed_attrs:
            index: dict[str, dict[str, list[str]]] = {attr: {} for attr in needed_attrs}
            for row in rows:
                subject = _instantiate(tmap.subject_template, row)
                if subject is None:
                    continue
                for attr in needed_attrs:
                    value = row.get(attr)
                    if value is None or value == "":
                        continue
                    index[attr].setdefault(str(value), []).append(subject)
            parent_index[tmap.map_id] = index
    if report is not None:
        report.wall_time_s = time.perf_counter() - start
    return store
