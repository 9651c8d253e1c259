"""Shared fixtures: bundled data files and an in-process service client."""

import warnings
from pathlib import Path

import pytest

from pidkit import curves, ingest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def ted_series():
    return ingest.parse_gdp_series(FIXTURES / "us_gdp_ted.csv")


@pytest.fixture(scope="session")
def bea_series():
    return ingest.parse_gdp_series(FIXTURES / "us_gdp_bea.csv")


@pytest.fixture(scope="session")
def us_population():
    return ingest.parse_population_series(FIXTURES / "us_population.csv")


@pytest.fixture(scope="session")
def curve_library():
    lib = {}
    for path in sorted((FIXTURES / "us_curves").glob("*.csv")):
        year = int(path.stem.split("_")[-1])
        lib[year] = curves.parse_curve_csv(path)
    return lib


@pytest.fixture(scope="session")
def client():
    # some starlette builds warn about their own httpx test shim on import
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from pidkit.service import create_app

    with TestClient(create_app(), raise_server_exceptions=False) as c:
        yield c
