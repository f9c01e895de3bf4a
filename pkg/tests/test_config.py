"""Tests for Settings and corpus configuration loading."""

import pytest
from pydantic import ValidationError

from khovanov.config import Settings


def test_defaults_point_into_the_project():
    s = Settings()
    assert s.corpus_path.name == "corpus"
    assert s.threads >= 1


def test_log_level_normalized():
    assert Settings(log_level="debug").log_level == "DEBUG"
    with pytest.raises(ValidationError):
        Settings(log_level="loud")


@pytest.mark.parametrize("field", ["threads", "crossing_limit"])
def test_positive_limits(field):
    with pytest.raises(ValidationError):
        Settings(**{field: 0})


def test_environment_aliases(monkeypatch):
    monkeypatch.setenv("KH_THREADS", "4")
    monkeypatch.setenv("KH_SEED", "11")
    s = Settings()
    assert (s.threads, s.seed) == (4, 11)


def test_relative_corpus_dir_resolves_against_project(tmp_path):
    assert Settings(corpus_dir="corpus").corpus_path.is_absolute()
    assert Settings(corpus_dir=str(tmp_path)).corpus_path == tmp_path


def test_bundled_corpus_config_has_groups():
    groups = Settings().load_corpus_config()["groups"]
    kinds = {g["kind"] for g in groups}
    assert kinds == {"reidemeister", "mirror"}


def test_corpus_config_missing(tmp_path):
    s = Settings(corpus_config_path=str(tmp_path / "none.yaml"))
    with pytest.raises(FileNotFoundError):
        s.load_corpus_config()


def test_corpus_config_without_groups(tmp_path):
    path = tmp_path / "corpus.yaml"
    path.write_text("name: empty\n", encoding="utf-8")
    with pytest.raises(ValueError, match="missing 'groups'"):
        Settings(corpus_config_path=str(path)).load_corpus_config()
