import os
import pathlib

import pytest

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def cli():
    path = os.environ.get("PSIDO_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("PSIDO_CLI not set")
    return path
