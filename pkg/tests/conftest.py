import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import make_corpus  # noqa: E402


@pytest.fixture(scope="session")
def synth_posts():
    return make_corpus(n_posts=400, n_students=120, seed=11)


@pytest.fixture(scope="session")
def synth_csv(tmp_path_factory, synth_posts):
    from synth import write_corpus_csv

    path = tmp_path_factory.mktemp("data") / "synth.csv"
    write_corpus_csv(path, synth_posts)
    return path
