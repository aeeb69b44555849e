from pathlib import Path

import pytest

from ddikit.deduction import ExtensionalDb, fixpoint, load_ddis_csv, load_treatments_csv
from ddikit.extraction import Lexicon, load_catalog

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def lexicon():
    return Lexicon.from_csv(FIXTURES / "lexicon.csv")


@pytest.fixture(scope="session")
def drugs(lexicon):
    return {d.cui: d for d in lexicon.drugs()}


@pytest.fixture(scope="session")
def catalog():
    return load_catalog(FIXTURES / "catalog.csv")


@pytest.fixture(scope="session")
def edb(drugs):
    ddis = load_ddis_csv(FIXTURES / "ddis.csv", drugs)
    treatments = load_treatments_csv(FIXTURES / "treatments.csv", drugs)
    return ExtensionalDb(ddis=ddis, treatments=treatments)


@pytest.fixture(scope="session")
def model(edb):
    return fixpoint(edb)


# Worked-example CUIs used across tests.
HCQ = "C0020336"
AZI = "C0052796"
MONT = "C0298130"
LOVA = "C0024027"
DOX = "C0013090"
