from pathlib import Path

import pytest

from pparg.corpus import load_featural_map, load_verbnet_dir

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def mini_featural_map():
    return load_featural_map(DATA / "mini_featural.tsv")


@pytest.fixture(scope="session")
def mini_verbnet_dir():
    return DATA / "mini_verbnet"


@pytest.fixture(scope="session")
def mini_inventory(mini_verbnet_dir, mini_featural_map):
    return load_verbnet_dir(mini_verbnet_dir, mini_featural_map)
