"""Fixtures for driving the park-sim command line end to end."""
import json
from dataclasses import dataclass

import pytest
import yaml

from app.cli import main
from app.config import Config


@dataclass
class CliRun:
    code: int
    out: str
    err: str

    @property
    def json(self):
        return json.loads(self.out)


@pytest.fixture(autouse=True)
def quiet_logs(monkeypatch):
    monkeypatch.setattr(Config, "LOG_TO_FILE", False)
    monkeypatch.setattr(Config, "LOG_TO_CONSOLE", False)


@pytest.fixture
def cli(capsys):
    """Run ``park-sim`` in-process and capture its output."""

    def _run(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return CliRun(code, captured.out, captured.err)

    return _run


@pytest.fixture
def config_file(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        return path
    return _write
