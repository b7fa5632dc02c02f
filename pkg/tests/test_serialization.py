import json

import pytest

from skernel.complexes import ChainComplex
from skernel.serialization import (
    ParseError,
    chain_complex_to_doc,
    parse_document,
    serialize,
    simplicial_set_to_doc,
)
from skernel.simpab import free_reduced_Z
from skernel.spaces import boundary, chains, sphere

from helpers import random_complex


def test_chain_complex_roundtrip(rng):
    for _ in range(10):
        c = random_complex(rng)
        kind, back = parse_document(serialize(c))
        assert kind == "chain-complex"
        assert back == c


def test_serialize_is_canonical(rng):
    c = random_complex(rng)
    text = serialize(c)
    kind, back = parse_document(text)
    assert serialize(back) == text


def test_chain_complex_rejects_broken_differential():
    doc = {"min": 0, "max": 2, "ranks": {"0": 1, "1": 1, "2": 1},
           "d": {"1": [[1]], "2": [[1]]}}
    with pytest.raises(ParseError, match="d\\(1\\) @ d\\(2\\)"):
        parse_document(json.dumps(doc))


def test_chain_complex_rejects_bad_shape():
    doc = {"min": 0, "max": 1, "ranks": {"0": 2, "1": 1}, "d": {"1": [[1]]}}
    with pytest.raises(ParseError):
        parse_document(json.dumps(doc))


def test_simplicial_set_roundtrip():
    for x in [boundary(2), sphere(1), sphere(2)]:
        kind, back = parse_document(serialize(x))
        assert kind == "simplicial-set"
        assert back.cell_counts() == x.cell_counts()
        assert serialize(back) == serialize(x)


def test_boundary_sample_loads_with_expected_cells():
    text = serialize(boundary(2))
    kind, x = parse_document(text)
    assert (x.n_cells(0), x.n_cells(1)) == (3, 3)


def test_simplicial_set_word_syntax():
    doc = {
        "pointed": True,
        "basepoint": "v",
        "cells": {"0": ["v"], "2": ["c"]},
        "faces": {"c": ["s0 v", "s0 v", "s0 v"]},
    }
    kind, x = parse_document(json.dumps(doc))
    assert x.pointed and x.n_cells(2) == 1
    bad = dict(doc, faces={"c": ["s0 s1 v", "s0 v", "s0 v"]})
    with pytest.raises(ParseError):
        parse_document(json.dumps(bad))


def test_simplicial_set_rejects_identity_violation():
    doc = {
        "pointed": False,
        "cells": {"0": ["a", "b", "c", "z"], "1": ["e", "f", "g"], "2": ["t"]},
        "faces": {
            "e": ["b", "a"], "f": ["c", "b"], "g": ["z", "a"],
            "t": ["f", "g", "e"],
        },
    }
    with pytest.raises(ParseError, match="identity"):
        parse_document(json.dumps(doc))


def test_simplicial_group_roundtrip():
    a = free_reduced_Z(sphere(1), 3)
    kind, back = parse_document(serialize(a))
    assert kind == "simplicial-group"
    assert back == a
    assert serialize(back) == serialize(a)


def test_simplicial_group_rejects_identity_violation():
    doc = {
        "D": 1,
        "ranks": {"0": 1, "1": 1},
        "face": {"1,0": [[1]], "1,1": [[2]]},
        "degen": {"0,0": [[1]]},
    }
    with pytest.raises(ParseError, match="identity"):
        parse_document(json.dumps(doc))


def test_unknown_document_kind():
    with pytest.raises(ParseError):
        parse_document(json.dumps({"foo": 1}))
    with pytest.raises(ParseError):
        parse_document("not json")
