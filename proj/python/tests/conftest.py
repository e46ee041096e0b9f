import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def fixtures_dir():
    return pathlib.Path(os.environ.get("STRATKIT_FIXTURES", ROOT / "tests" / "fixtures"))


@pytest.fixture(scope="session")
def corpus(fixtures_dir):
    return json.loads((fixtures_dir / "cli_corpus.json").read_text())


@pytest.fixture(scope="session")
def schema():
    path = pathlib.Path(os.environ.get("STRATKIT_SCHEMA", ROOT / "schemas" / "report.schema.json"))
    return json.loads(path.read_text())
