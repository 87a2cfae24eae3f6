from pathlib import Path

import pytest

from monolog.kb import default_scale, load_bundled_kb
from monolog.polarity import default_lexicon
from monolog.scoring import OfflineScorer
from monolog.search import EngineContext

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def kb():
    return load_bundled_kb()


@pytest.fixture(scope="session")
def scale():
    return default_scale()


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def scorer(kb):
    return OfflineScorer(kb=kb)


@pytest.fixture(scope="session")
def ctx(kb, scale, scorer, lexicon):
    return EngineContext(kb=kb, scale=scale, scorer=scorer, lexicon=lexicon)


@pytest.fixture(scope="session")
def data_dir():
    return DATA
