import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def dialogue_corpus() -> dict[str, str]:
    """Sample household dialogue transcripts in the tag grammar."""
    out = {}
    for path in sorted((DATA_DIR / "dialogues").glob("*.txt")):
        out[path.stem] = path.read_text(encoding="utf-8").strip()
    return out
