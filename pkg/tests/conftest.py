from pathlib import Path

import pytest

from ontogeo.nlp import Lexicon, read_data

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.default()


@pytest.fixture(scope="session")
def introducers() -> frozenset[str]:
    return frozenset(
        line.strip() for line in read_data("introducers_fr.txt").split("\n") if line.strip()
    )


@pytest.fixture(scope="session")
def relation_markers() -> list[str]:
    return [
        line.strip() for line in read_data("relation_markers_fr.txt").split("\n") if line.strip()
    ]


@pytest.fixture(scope="session")
def partie_de_markers() -> dict[str, list[str]]:
    words = [
        line.strip()
        for line in read_data("partie_de_markers_fr.txt").split("\n")
        if line.strip()
    ]
    return {"partie_de": words}


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
