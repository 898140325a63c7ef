import json

import pytest

from crossview import Dataset

from helpers import golden_bundle_dict


@pytest.fixture
def golden_bundle() -> dict:
    return golden_bundle_dict()


@pytest.fixture
def golden_dataset(golden_bundle) -> Dataset:
    return Dataset.load(golden_bundle)


@pytest.fixture
def golden_bundle_path(tmp_path, golden_bundle) -> str:
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden_bundle), encoding="utf-8")
    return str(path)
