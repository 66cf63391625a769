import pathlib

import pytest

from regsync.dsl import SourceDocument, parse_automaton

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig4():
    path = DATA / "fig4.ra"
    return parse_automaton(SourceDocument(path.read_text(), str(path)))
