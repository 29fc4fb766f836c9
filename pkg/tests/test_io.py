import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tensorloc import Tensor
from tensorloc.errors import IndexOutOfRange, TensorFormatError, UnsortedKey
from tensorloc.io import FIXTURES, dumps, fixture_path, load_fixture, load_tensor, loads, save_tensor


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip(name, tmp_path):
    t = load_fixture(name)
    path = tmp_path / f"{name}.json"
    save_tensor(t, path)
    assert load_tensor(path) == t
    assert loads(dumps(t)) == t


def test_ex41_is_stored_as_representatives():
    doc = json.loads(fixture_path("ex41").read_text())
    assert doc["symmetric"] is True
    assert len(doc["entries"]) == 15
    assert all(e["index"] == sorted(e["index"]) for e in doc["entries"])


def test_dense_fixtures():
    for name in ("ex51", "ex61"):
        doc = json.loads(fixture_path(name).read_text())
        assert doc["symmetric"] is False and len(doc["entries"]) == 27


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixture_path("ex99")


@pytest.mark.parametrize(
    "text",
    [
        "{bad",
        "[]",
        '{"dim": 2}',
        '{"order": 3, "dim": "2", "entries": []}',
        '{"order": 3, "dim": 2, "symmetric": "yes", "entries": []}',
        '{"order": 3, "dim": 2, "entries": {}}',
        '{"order": 3, "dim": 2, "entries": [{"index": [1, 1, 1]}]}',
        '{"order": 3, "dim": 2, "entries": [{"index": [1, 1], "value": 1}]}',
        '{"order": 3, "dim": 2, "entries": [{"index": [1, 1, 1.5], "value": 1}]}',
        '{"order": 3, "dim": 2, "entries": [{"index": [1, 1, 1], "value": "x"}]}',
        '{"order": 3, "dim": 2, "entries": [{"index": [1, 1, 1], "value": true}]}',
    ],
)
def test_malformed(text):
    with pytest.raises((TensorFormatError, ValueError)):
        loads(text)


def test_index_errors_surface():
    with pytest.raises(IndexOutOfRange):
        loads('{"order": 3, "dim": 2, "entries": [{"index": [1, 1, 3], "value": 1}]}')
    with pytest.raises(UnsortedKey):
        loads('{"order": 3, "dim": 2, "symmetric": true, "entries": [{"index": [2, 1, 1], "value": 1}]}')


def test_missing_file(tmp_path):
    with pytest.raises(TensorFormatError):
        load_tensor(tmp_path / "nope.json")


def test_omitted_entries_are_zero():
    t = loads('{"order": 2, "dim": 3, "entries": [{"index": [2, 3], "value": 4}]}')
    assert t.data.sum() == 4 and t[2, 3] == 4


@given(m=st.integers(2, 4), n=st.integers(2, 3), seed=st.integers(0, 2**32 - 1), sym=st.booleans())
def test_round_trip_random(m, n, seed, sym):
    a = np.random.default_rng(seed).normal(size=(n,) * m)
    if sym:
        import itertools

        a = sum(np.transpose(a, p) for p in itertools.permutations(range(m)))
    t = Tensor(a)
    assert loads(dumps(t)) == t
