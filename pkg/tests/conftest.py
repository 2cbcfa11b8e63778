import numpy as np
import pytest

from rpclass import ingest


def fake_epilepsy_csv() -> str:
    """Full-size stand-in for the EEG table: 11500 rows, an id column,
    178 integer features, labels 1-5 with 2300 rows per recording type."""
    rng = np.random.default_rng(0)
    features = rng.integers(
        -150, 150, size=(ingest.EPILEPSY_ROWS, ingest.EPILEPSY_FEATURES)
    )
    labels = np.repeat([1, 2, 3, 4, 5], ingest.EPILEPSY_ROWS // 5)
    rng.shuffle(labels)
    header = "," + ",".join(f"X{i + 1}" for i in range(ingest.EPILEPSY_FEATURES)) + ",y"
    lines = [header]
    for i in range(ingest.EPILEPSY_ROWS):
        lines.append(f"X{i}.V1," + ",".join(map(str, features[i])) + f",{labels[i]}")
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def fake_epilepsy_text():
    return fake_epilepsy_csv()
