import json

import pytest

from ddikit.mapping import (
    MappingError,
    MaterializeReport,
    Triple,
    TripleStore,
    materialize,
    parse_mapping_doc,
)

from .oracles import nested_loop_materialize


@pytest.fixture(scope="module")
def maps(fixtures_dir):
    return parse_mapping_doc(fixtures_dir / "mapping.map")


class TestParser:
    def test_fixture_doc_parses(self, maps):
        assert len(maps) == 8
        by_id = {m.map_id: m for m in maps}
        assert by_id["TreatmentMap"].join_parents == {"DrugMap"}

    def test_dangling_join_rejected(self, tmp_path):
        doc = tmp_path / "bad.map"
        doc.write_text(
            "MAP M1\nSOURCE drugs.csv csv\nSUBJECT k4e:{cui} CLASS c:Drug\n"
            "PO c:link JOIN Ghost cui cui\n"
        )
        with pytest.raises(MappingError, match="Ghost"):
            parse_mapping_doc(doc)

    def test_duplicate_map_id_rejected(self, tmp_path):
        doc = tmp_path / "bad.map"
        doc.write_text(
            "MAP M1\nSOURCE a.csv csv\nSUBJECT k4e:{cui} CLASS c:Drug\n"
            "MAP M1\nSOURCE b.csv csv\nSUBJECT k4e:{cui} CLASS c:Drug\n"
        )
        with pytest.raises(MappingError, match="duplicate"):
            parse_mapping_doc(doc)

    def test_cycle_rejected(self, tmp_path):
        doc = tmp_path / "cycle.map"
        doc.write_text(
            "MAP M1\nSOURCE a.csv csv\nSUBJECT k4e:{id} CLASS c:A\nPO c:p JOIN M2 id id\n"
            "MAP M2\nSOURCE b.csv csv\nSUBJECT k4e:{id} CLASS c:B\nPO c:p JOIN M1 id id\n"
        )
        maps = parse_mapping_doc(doc)
        (tmp_path / "a.csv").write_text("id\n1\n")
        (tmp_path / "b.csv").write_text("id\n1\n")
        with pytest.raises(MappingError, match="cyclic"):
            materialize(maps, tmp_path)


class TestTripleStore:
    def test_duplicate_elimination(self):
        store = TripleStore()
        t = Triple("s", "p", "o", "iri")
        assert store.add(t) is True
        assert store.add(t) is False
        assert len(store) == 1
        assert t in store

    def test_indexes(self):
        store = TripleStore()
        store.add(Triple("s1", "rdf:type", "c:Drug", "iri"))
        store.add(Triple("s1", "c:label", "Aspirin", "literal"))
        assert store.subjects_of_class("c:Drug") == {"s1"}
        assert store.object_of("s1", "c:label") == "Aspirin"
        assert len(store.by_predicate("c:label")) == 1


class TestMaterialize:
    def test_equals_nested_loop_oracle(self, maps, fixtures_dir):
        store = TripleStore()
        materialize(maps, fixtures_dir, MaterializeReport(), store)
        assert store.as_set() == nested_loop_materialize(maps, fixtures_dir)

    def test_idempotent(self, maps, fixtures_dir):
        store = TripleStore()
        materialize(maps, fixtures_dir, MaterializeReport(), store)
        before = len(store)
        report = MaterializeReport()
        materialize(maps, fixtures_dir, report, store)
        assert len(store) == before

    def test_monotone_in_rows(self, maps, fixtures_dir, tmp_path):
        import shutil

        small = tmp_path / "small"
        shutil.copytree(fixtures_dir, small)
        drugs = (small / "drugs.csv").read_text().splitlines()
        (small / "drugs.csv").write_text("\n".join(drugs[:-2]) + "\n")
        store_small, store_full = TripleStore(), TripleStore()
        materialize(maps, small, MaterializeReport(), store_small)
        materialize(maps, fixtures_dir, MaterializeReport(), store_full)
        assert store_small.as_set() <= store_full.as_set()

    def test_missing_value_suppresses_assertion_only(self, tmp_path):
        doc = tmp_path / "m.map"
        doc.write_text(
            "MAP M1\nSOURCE rows.csv csv\nSUBJECT k4e:{id} CLASS c:Thing\n"
            "PO c:name REF name\nPO c:kind CONST c:Fixed\n"
        )
        (tmp_path / "rows.csv").write_text("id,name\n1,Alpha\n2,\n")
        store = TripleStore()
        materialize(parse_mapping_doc(doc), tmp_path, MaterializeReport(), store)
        assert ("k4e:2", "c:name") not in {
            (t.subject, t.predicate) for t in store.by_predicate("c:name")
        }
        assert len(store.subjects_of_class("c:Thing")) == 2

    def test_unknown_attribute_fails_before_rows(self, tmp_path):
        doc = tmp_path / "m.map"
        doc.write_text(
            "MAP M1\nSOURCE rows.csv csv\nSUBJECT k4e:{missing} CLASS c:Thing\n"
        )
        (tmp_path / "rows.csv").write_text("id\n1\n")
        with pytest.raises(MappingError, match="missing"):
            materialize(parse_mapping_doc(doc), tmp_path)

    def test_unreadable_source_fails(self, tmp_path):
        doc = tmp_path / "m.map"
        doc.write_text("MAP M1\nSOURCE nope.csv csv\nSUBJECT k4e:{id} CLASS c:T\n")
        with pytest.raises(MappingError, match="unreadable|nope"):
            materialize(parse_mapping_doc(doc), tmp_path)

    def test_join_counts_brute_force(self, tmp_path):
        doc = tmp_path / "m.map"
        doc.write_text(
            "MAP Parent\nSOURCE parent.csv csv\nSUBJECT k4e:p{key} CLASS c:P\n"
            "MAP Child\nSOURCE child.csv csv\nSUBJECT k4e:c{id} CLASS c:C\n"
            "PO c:parent JOIN Parent key key\n"
        )
        (tmp_path / "parent.csv").write_text("key\nk1\nk2\n")
        (tmp_path / "child.csv").write_text("id,key\n1,k1\n2,k2\n3,zz\n")
        store = TripleStore()
        materialize(parse_mapping_doc(doc), tmp_path, MaterializeReport(), store)
        assert len(store.by_predicate("c:parent")) == 2

    def test_json_records_source(self, tmp_path):
        doc = tmp_path / "m.map"
        doc.write_text(
            "MAP M1\nSOURCE rows.json json-records data.items\n"
            "SUBJECT k4e:{id} CLASS c:Thing\nPO c:name REF name\n"
        )
        (tmp_path / "rows.json").write_text(
            json.dumps({"data": {"items": [{"id": "1", "name": "Alpha"}]}})
        )
        store = TripleStore()
        materialize(parse_mapping_doc(doc), tmp_path, MaterializeReport(), store)
        assert store.object_of("k4e:1", "c:name") == "Alpha"

    def test_export_round_trip_lines(self, maps, fixtures_dir, tmp_path):
        store = TripleStore()
        materialize(maps, fixtures_dir, MaterializeReport(), store)
        out = tmp_path / "store.nt"
        store.export(out)
        lines = [l for l in out.read_text().splitlines() if l.strip()]
        assert len(lines) == len(store)
