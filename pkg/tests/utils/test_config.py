import json
import os

import pytest

from readlab.utils.config import env_workers, parse_config, resolve_path


def test_parse_config_records_its_directory(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"name": "x"}))
    config = parse_config(str(path))
    assert config["name"] == "x"
    assert config["config_dir"] == str(tmp_path)


def test_parse_config_missing_file(tmp_path):
    with pytest.raises(AssertionError):
        parse_config(str(tmp_path / "missing.json"))


def test_resolve_path():
    config = {"config_dir": "/data/configs"}
    assert resolve_path(config, "../genomes/a.fa") == os.path.normpath("/data/genomes/a.fa")
    assert resolve_path(config, "/abs/a.fa") == "/abs/a.fa"


def test_env_workers(monkeypatch):
    monkeypatch.delenv("READLAB_WORKERS", raising=False)
    assert env_workers(3) == 3
    monkeypatch.setenv("READLAB_WORKERS", "8")
    assert env_workers(3) == 8
    monkeypatch.setenv("READLAB_WORKERS", "0")
    assert env_workers(3) == 1
    monkeypatch.setenv("READLAB_WORKERS", "many")
    assert env_workers(3) == 3
