"""Tests for the PD corpus service."""

from pathlib import Path

import pytest
import yaml

from khovanov.config import Settings
from khovanov.exceptions import InputError
from khovanov.services.corpus import CorpusService, parse_entry, split_front_matter
from tests.conftest import CORPUS_DIR, KINK_FILE

GROUPS = {
    "groups": [
        {"name": "unknot", "kind": "reidemeister", "members": ["unknot", "unknot_kink"]},
        {"name": "unknot_mirror", "kind": "mirror", "members": ["unknot", "unknot_kink"]},
    ]
}


def test_front_matter_split():
    meta, body = split_front_matter(KINK_FILE, "kink.pd")
    assert meta["name"] == "unknot_kink"
    assert body == "X(1,2,2,1)"


def test_parse_entry_fills_counts():
    entry = parse_entry(KINK_FILE, "kink.pd")
    assert (entry.crossings, entry.components, entry.circles) == (1, 1, 0)
    assert [(r.i, r.q) for r in entry.expected["even"]] == [(0, -1), (0, 1)]


@pytest.mark.parametrize(
    "text, message",
    [
        ("X(1,2,2,1)", "missing '---'"),
        ("---\nname: a\n", "not closed"),
        ("---\ncrossings: 1\n---\nX(1,2,2,1)", "needs a 'name'"),
        ("---\nname: a\ncrossings: 2\n---\nX(1,2,2,1)", "header says 2 crossings"),
        ("---\nname: a\ncomponents: 2\n---\nX(1,2,2,1)", "header says 2 components"),
        ("---\nname: a\nexpected:\n  bogus: []\n---\nX(1,2,2,1)", "unknown variants"),
        ("---\nname: a\n---\nX(1,2,3)", "a.pd"),
    ],
)
def test_parse_entry_errors(text, message):
    with pytest.raises(InputError, match=message):
        parse_entry(text, "a.pd")


def test_list_entries_sorted(small_corpus):
    names = [e.name for e in CorpusService(small_corpus).list_entries()]
    assert names == ["unknot", "unknot_kink"]


def test_missing_directory(tmp_path):
    with pytest.raises(InputError, match="not found"):
        CorpusService(tmp_path / "nowhere").list_entries()


def test_entry_lookup(small_corpus):
    service = CorpusService(small_corpus)
    assert service.entry("unknot").pd == "circles=1"
    with pytest.raises(InputError, match="no corpus entry"):
        service.entry("5_1")


def test_groups_and_partners(small_corpus):
    service = CorpusService(small_corpus, GROUPS)
    assert service.groups("reidemeister") == [["unknot", "unknot_kink"]]
    assert service.mirror_partner("unknot_kink") == "unknot"
    assert service.mirror_partner("3_1") is None
    assert [d.render() for d in service.equivalents("unknot")] == ["X(1,2,2,1)"]


def test_validate_with_groups(small_corpus):
    results = CorpusService(small_corpus, GROUPS).validate()
    names = [r.name for r in results]
    assert names == ["unknot", "unknot_kink", "mirror:unknot,unknot_kink", "group:unknot,unknot_kink"]
    assert all(r.passed for r in results), [r.details for r in results]


def test_validate_reports_missing_group_member(small_corpus):
    config = {"groups": [{"kind": "reidemeister", "members": ["unknot", "3_1"]}]}
    results = CorpusService(small_corpus, config).validate()
    assert results[-1].passed is False
    assert results[-1].details == ["missing ['3_1']"]


def test_validate_reports_fixture_mismatch(small_corpus):
    wrong = KINK_FILE.replace("name: unknot_kink", "name: wrong").replace("q: 1,", "q: 3,")
    (small_corpus / "wrong.pd").write_text(wrong, encoding="utf-8")
    by_name = {r.name: r for r in CorpusService(small_corpus).validate()}
    assert not by_name["wrong"].passed
    assert "even at (0, 1): expected None, got (1, ())" in by_name["wrong"].details


def test_add_copies_valid_file(small_corpus, tmp_path):
    source = tmp_path / "kink_again.pd"
    source.write_text(KINK_FILE.replace("name: unknot_kink", "name: kink_again"), encoding="utf-8")
    entry = CorpusService(small_corpus).add(source)
    assert entry.name == "kink_again"
    assert (small_corpus / "kink_again.pd").exists()


def test_add_rejects_duplicate_name(small_corpus, tmp_path):
    source = tmp_path / "dup.pd"
    source.write_text(KINK_FILE, encoding="utf-8")
    with pytest.raises(InputError, match="already has an entry"):
        CorpusService(small_corpus).add(source)


def test_add_rejects_fixture_mismatch(small_corpus, tmp_path):
    source = tmp_path / "bad.pd"
    source.write_text(
        KINK_FILE.replace("name: unknot_kink", "name: bad").replace("free: 1}\n---", "free: 2}\n---"),
        encoding="utf-8",
    )
    with pytest.raises(InputError, match="fixture mismatch"):
        CorpusService(small_corpus).add(source)
    assert not (small_corpus / "bad.pd").exists()


def test_bundled_corpus_names_survive_yaml():
    service = CorpusService(CORPUS_DIR, Settings().load_corpus_config())
    entries = service.list_entries()
    assert all(e.name == Path(e.path).stem for e in entries)
    names = {e.name for e in entries}
    assert {"3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"} <= names
    for kind in ("reidemeister", "mirror"):
        for members in service.groups(kind):
            assert set(members) <= names
    assert service.mirror_partner("3_1") == "3_1_left"
    assert len(service.equivalents("3_1")) == 3
    assert len(service.equivalents("4_1")) == 2


def test_unquoted_numeric_name_is_rejected():
    text = KINK_FILE.replace('name: unknot_kink', "name: 3_1")
    with pytest.raises(InputError, match="quoted string"):
        parse_entry(text, "3_1.pd")


def test_unquoted_numeric_group_member_is_rejected(small_corpus):
    config = yaml.safe_load("groups:\n  - {name: t, kind: mirror, members: [3_1, 3_1_left]}\n")
    service = CorpusService(small_corpus, config)
    with pytest.raises(InputError, match="quoted strings"):
        service.mirror_partner("3_1")
