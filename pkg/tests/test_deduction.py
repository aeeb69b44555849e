import random

import pytest
from hypothesis import given, settings, strategies as st

from ddikit.deduction import (
    Ddi5,
    Effectiveness,
    ExtensionalDb,
    NotDerivedError,
    Toxicity,
    depth,
    explain,
    fixpoint,
    localize,
)
from ddikit.model import DrugId, PkDdi, Treatment, is_pharmacokinetic

from .conftest import AZI, DOX, LOVA, MONT
from .oracles import naive_saturation, random_edb

A = DrugId("C0000001", "DrugA")
B = DrugId("C0000002", "DrugB")
C = DrugId("C0000003", "DrugC")


def edb_of(ddis, *treatments):
    return ExtensionalDb(ddis=frozenset(ddis), treatments=frozenset(treatments))


class TestLocalize:
    def test_direct_instantiation(self):
        edb = edb_of([PkDdi(A, "serum", "increase", B)],
                     Treatment("T1", frozenset([A]), frozenset([B])))
        assert localize(edb) == {Ddi5(A.cui, "serum", "increase", B.cui, "T1")}

    def test_non_member_excluded(self):
        edb = edb_of([PkDdi(A, "serum", "increase", B)],
                     Treatment("T1", frozenset([A]), frozenset([C])))
        assert localize(edb) == set()

    def test_multiple_treatments_brute_force(self):
        ddis = [
            PkDdi(A, "serum", "increase", B),
            PkDdi(B, "metabolism", "decrease", C),
            PkDdi(C, "absorption", "increase", A),
        ]
        t1 = Treatment("T1", frozenset([A, B]), frozenset())
        t2 = Treatment("T2", frozenset([A]), frozenset([B, C]))
        edb = edb_of(ddis, t1, t2)
        expected = set()
        for t in (t1, t2):
            members = {d.cui for d in t.drugs}
            for f in ddis:
                if f.precipitant.cui in members and f.object.cui in members:
                    expected.add(Ddi5(f.precipitant.cui, f.effect, f.impact, f.object.cui, t.id))
        assert localize(edb) == expected


class TestFixpointRules:
    def test_rule2_effectiveness(self):
        edb = edb_of([PkDdi(A, "metabolism", "increase", B)],
                     Treatment("T1", frozenset([A, B]), frozenset()))
        model = fixpoint(edb)
        assert Effectiveness(A.cui, B.cui, "T1") in model.effectiveness
        assert not model.toxicity

    def test_rule1_toxicity(self):
        edb = edb_of([PkDdi(A, "excretion", "decrease", B)],
                     Treatment("T1", frozenset([A, B]), frozenset()))
        model = fixpoint(edb)
        assert Toxicity(A.cui, B.cui, "T1") in model.toxicity

    def test_pharmacodynamic_facts_localize_but_never_fire_rules(self):
        edb = edb_of([PkDdi(A, "qt prolongation", "increase", B)],
                     Treatment("T1", frozenset([A, B]), frozenset()))
        model = fixpoint(edb)
        assert len(model.localized) == 1
        assert not model.new_facts

    def test_toxicity_propagates_over_pharmacokinetic_ddi(self):
        edb = edb_of(
            [PkDdi(A, "serum", "increase", B), PkDdi(B, "metabolism", "decrease", C)],
            Treatment("T1", frozenset([A, B, C]), frozenset()),
        )
        model = fixpoint(edb)
        assert Ddi5(A.cui, "metabolism", "decrease", C.cui, "T1") in model.deduced_ddis
        assert Toxicity(A.cui, C.cui, "T1") in model.toxicity  # transitivity

    def test_no_self_interaction_conclusions(self):
        edb = edb_of(
            [PkDdi(A, "serum", "increase", B), PkDdi(B, "serum", "increase", A)],
            Treatment("T1", frozenset([A, B]), frozenset()),
        )
        model = fixpoint(edb)
        for f in model.all_ddis:
            assert f.precipitant != f.object
        for f in model.toxicity | model.effectiveness:
            assert f.precipitant != f.object

    def test_worked_example_fixture(self, model):
        t1_new = {f for f in model.new_facts if f.treatment == "T1"}
        assert Ddi5(DOX, "metabolism", "decrease", MONT, "T1") in t1_new
        assert Toxicity(DOX, MONT, "T1") in t1_new
        assert Toxicity(AZI, MONT, "T1") in t1_new
        assert Effectiveness(LOVA, AZI, "T1") in t1_new
        assert len(t1_new) == 5


class TestOracleEquivalence:
    def test_random_edbs_match_naive_saturation(self):
        rng = random.Random(20260823)
        for _ in range(100):
            edb = random_edb(rng)
            model = fixpoint(edb)
            localized, deduced, tox, eff = naive_saturation(edb)
            assert model.localized == localized
            assert model.deduced_ddis == deduced
            assert model.toxicity == tox
            assert model.effectiveness == eff

    def test_monotonicity_under_fact_addition(self):
        rng = random.Random(7)
        for _ in range(25):
            edb = random_edb(rng, max_drugs=5, max_ddis=6)
            drugs = sorted({d for t in edb.treatments for d in t.drugs},
                           key=lambda d: d.cui)
            if len(drugs) < 2:
                continue
            extra = PkDdi(drugs[0], "serum", "increase", drugs[1])
            bigger = ExtensionalDb(ddis=edb.ddis | {extra}, treatments=edb.treatments)
            small, big = fixpoint(edb), fixpoint(bigger)
            assert small.all_ddis <= big.all_ddis
            assert small.toxicity <= big.toxicity
            assert small.effectiveness <= big.effectiveness

    def test_idempotence_feeding_deduced_facts_back(self, edb, model, drugs):
        projected = {
            PkDdi(drugs[f.precipitant], f.effect, f.impact, drugs[f.object], "deduced")
            for f in model.deduced_ddis
        }
        again = fixpoint(ExtensionalDb(ddis=edb.ddis | projected, treatments=edb.treatments))
        assert again.all_ddis == model.all_ddis
        assert again.toxicity == model.toxicity
        assert again.effectiveness == model.effectiveness

    def test_toxicity_transitively_closed(self):
        rng = random.Random(99)
        for _ in range(50):
            model = fixpoint(random_edb(rng))
            for a in model.toxicity:
                for b in model.toxicity:
                    if a.treatment == b.treatment and a.object == b.precipitant \
                            and a.precipitant != b.object:
                        assert Toxicity(a.precipitant, b.object, a.treatment) in model.toxicity


@st.composite
def small_edbs(draw):
    n = draw(st.integers(min_value=2, max_value=5))
    drugs = [DrugId(f"C{1000000 + i:07d}", f"D{i}") for i in range(n)]
    effects = ["serum", "metabolism", "absorption", "excretion", "qt prolongation"]
    n_ddis = draw(st.integers(min_value=0, max_value=6))
    ddis = set()
    for _ in range(n_ddis):
        i, j = draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))
        if i == j:
            continue
        ddis.add(PkDdi(drugs[i], draw(st.sampled_from(effects)),
                       draw(st.sampled_from(["increase", "decrease"])), drugs[j]))
    members = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
    treatment = Treatment("T1", frozenset(drugs[i] for i in members), frozenset())
    return ExtensionalDb(ddis=frozenset(ddis), treatments=frozenset([treatment]))


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(small_edbs())
    def test_model_closed_under_rules(self, edb):
        model = fixpoint(edb)
        localized, deduced, tox, eff = naive_saturation(edb)
        assert model.all_ddis == localized | deduced
        assert model.toxicity == tox and model.effectiveness == eff

    @settings(max_examples=60, deadline=None)
    @given(small_edbs())
    def test_localized_subset_and_trace_totality(self, edb):
        model = fixpoint(edb)
        assert model.localized <= model.all_ddis
        for fact in model.new_facts:
            assert fact in model.trace

    @settings(max_examples=60, deadline=None)
    @given(small_edbs())
    def test_iterations_bounded_by_herbrand_base(self, edb):
        model = fixpoint(edb)
        drugs = {d.cui for t in edb.treatments for d in t.drugs}
        effects = {f.effect for f in edb.ddis} or {"serum"}
        bound = max(1, len(drugs) ** 2 * len(effects) * 2 * len(edb.treatments)) + 1
        assert model.iterations <= bound


class TestExplain:
    @pytest.fixture()
    def chain_model(self):
        edb = edb_of(
            [PkDdi(A, "serum", "increase", B), PkDdi(B, "serum", "increase", C)],
            Treatment("T1", frozenset([A, B, C]), frozenset()),
        )
        return fixpoint(edb)

    def test_rule1_tree_depth_one_over_localized(self, chain_model):
        tree = explain(chain_model, Toxicity(A.cui, B.cui, "T1"))
        assert tree["rule"] == "rule1"
        assert depth(tree) >= 1

    def test_transitive_toxicity_depth_at_least_two(self, chain_model):
        tree = explain(chain_model, Toxicity(A.cui, C.cui, "T1"))
        assert tree["rule"] == "toxicity-transitive"
        assert depth(tree) >= 2

    def test_leaves_are_extensional(self, chain_model):
        def leaves(tree):
            kids = tree.get("premises", [])
            if not kids:
                yield tree
            for k in kids:
                if k.get("rule") is None:
                    yield k
                else:
                    yield from leaves(k)

        tree = explain(chain_model, Toxicity(A.cui, C.cui, "T1"))
        assert all(leaf["rule"] is None or leaf["rule"] == "localize"
                   for leaf in leaves(tree))

    def test_unknown_fact_raises(self, chain_model):
        with pytest.raises(NotDerivedError):
            explain(chain_model, Toxicity(C.cui, A.cui, "T1"))

    def test_extensional_fact_raises(self, chain_model):
        with pytest.raises(NotDerivedError):
            explain(chain_model, PkDdi(A, "serum", "increase", B))
