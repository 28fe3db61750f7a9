import pathlib

import pytest

from tweetevents.geo import load_gazetteer
from tweetevents.stream import Tweet

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def gazetteer_path() -> str:
    return str(DATA_DIR / "gazetteer.tsv")


@pytest.fixture(scope="session")
def stopwords_path() -> str:
    return str(DATA_DIR / "stopwords_en.txt")


@pytest.fixture(scope="session")
def gazetteer(gazetteer_path):
    return load_gazetteer(gazetteer_path)


def make_tweet(**overrides) -> Tweet:
    fields = dict(
        id="t1",
        timestamp=100,
        text="hello world",
        author_id="u1",
        followers_count=10,
        retweets_count=0,
    )
    fields.update(overrides)
    return Tweet(**fields)
