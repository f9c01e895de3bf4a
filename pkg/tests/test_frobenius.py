"""Tests for the tensor algebra, elementary cobordism maps and their relations."""

import pytest

from khovanov.core.coeff import SDeg, X_UNIT, RingElem
from khovanov.core.frobenius import (
    TensorElem,
    TensorMap,
    TensorWord,
    all_words,
    birth,
    chron_deg,
    death,
    elementary_merge,
    elementary_split,
    embed,
    sdeg,
    sdeg_incremental,
    tau_map,
    tau_word,
    transpose,
)
from khovanov.services.verification import relation_checks


@pytest.mark.parametrize("name, ok", relation_checks())
def test_relations_hold(name, ok):
    assert ok, name


def test_word_letters_count_from_the_right():
    w = TensorWord("+--")
    assert w.letter_at(1) == "-"
    assert w.letter_at(3) == "+"
    assert w.flip() == TensorWord("-++")
    assert w.q_weight == -1
    with pytest.raises(IndexError):
        w.letter_at(4)
    with pytest.raises(ValueError):
        TensorWord("+x")


def test_tau_coefficients():
    assert tau_word(TensorWord("+-"), 1) == (RingElem.parse("Z^-1").as_unit(), TensorWord("-+"))
    assert tau_word(TensorWord("-+"), 1) == (RingElem.parse("Z").as_unit(), TensorWord("+-"))
    assert tau_word(TensorWord("++"), 1)[0] == X_UNIT
    assert tau_word(TensorWord("--"), 1)[0] == RingElem.parse("Y").as_unit()
    with pytest.raises(IndexError):
        tau_word(TensorWord("+-"), 2)


def test_tau_is_an_involution():
    for k in (2, 3):
        for p in range(1, k):
            t = tau_map(k, p)
            assert t.compose(t) == TensorMap.identity(k)


def test_sdeg_closed_form_matches_incremental():
    for k in range(5):
        for w in all_words(k):
            assert sdeg(w) == sdeg_incremental(w), str(w)
    assert sdeg(TensorWord("-+")) == SDeg(0, -2)
    assert sdeg(TensorWord("+-")) == SDeg(1, -1)


def test_elementary_map_shifts():
    assert elementary_merge().matrix.sdeg_shift() == SDeg(0, 0)
    assert elementary_split().matrix.sdeg_shift() == SDeg(0, -2)


def test_reversed_orientation_rescales():
    assert elementary_merge(orient_reversed=True).matrix == elementary_merge().matrix.scale(X_UNIT)
    assert elementary_split(orient_reversed=True).matrix == elementary_split().matrix.scale(
        RingElem.parse("Y").as_unit()
    )


def test_birth_and_death():
    assert birth().matrix(TensorWord("")) == TensorElem.basis(TensorWord("+"))
    assert death().matrix(TensorWord("+")) == TensorElem()
    assert death().matrix(TensorWord("-")) == TensorElem.basis(TensorWord(""))


def test_embed_twists_by_left_block():
    m = elementary_merge()
    image = embed(m, 1, 0)(TensorWord("+++"))
    assert image == TensorElem.basis(TensorWord("++"), RingElem.parse("X"))
    # nothing on the left: no twist
    assert embed(m, 0, 1)(TensorWord("+++")) == TensorElem.basis(TensorWord("++"))


def test_transpose_is_an_involution():
    s = elementary_split().matrix
    assert transpose(transpose(s)) == s
    assert transpose(s).source_len == 2


def test_map_rejects_wrong_length():
    with pytest.raises(ValueError):
        elementary_merge().matrix(TensorWord("+"))
    with pytest.raises(ValueError):
        elementary_merge().matrix.compose(elementary_merge().matrix)


GENERATORS = [
    ("merge", elementary_merge()),
    ("merge_reversed", elementary_merge(orient_reversed=True)),
    ("split", elementary_split()),
    ("split_reversed", elementary_split(orient_reversed=True)),
    ("birth", birth()),
    ("death", death()),
]
EMBEDDINGS = [
    (label, f, k, l)
    for label, f in GENERATORS
    for k in range(5)
    for l in range(5)
    if k + l + max(f.dom, f.cod) <= 5
]


@pytest.mark.parametrize(
    "label, f, k, l", EMBEDDINGS, ids=[f"{label}-{k}-{l}" for label, _, k, l in EMBEDDINGS]
)
def test_embedding_is_homogeneous(label, f, k, l):
    m = embed(f, k, l)
    assert m.chron_shift() == f.degree
    # raises when two entries disagree
    assert m.sdeg_shift() is not None
    for w in all_words(k + f.dom + l):
        for out, c in m(w).items():
            assert chron_deg(out) - chron_deg(w) == f.degree, (label, str(w))
            assert c.homogeneous_sdeg() is not None, (label, str(w))
