import pytest

from fracwalk.variates import RngStream


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep manifests out of the working tree and runs single-threaded."""
    monkeypatch.setenv("FRACWALK_MANIFEST_DIR", str(tmp_path / "runs"))
    monkeypatch.setenv("FRACWALK_THREADS", "1")
    monkeypatch.delenv("FRACWALK_SEED", raising=False)


@pytest.fixture
def stream():
    return RngStream(seed=12345, stream_id=0)
