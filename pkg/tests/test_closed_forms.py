import json

import pytest
from hypothesis import given, strategies as st

from burrlab.closed_forms import (CriticalTable, closed_prefix, d_value, e_closed, e_recurrence,
                                  recurrence_prefix, table)
from burrlab.params import HypothesisError, Params

P = Params(4, 17)

admissible_u = st.one_of(st.sampled_from([4, 7, 8]), st.integers(11, 300))


@st.composite
def params(draw):
    u = draw(admissible_u)
    return Params(u, draw(st.integers(3 * u + 5, 3 * u + 500)))


@pytest.mark.parametrize("k,expected", [(1, 4), (2, 17), (3, 22), (6, 53)])
def test_e_closed_examples(k, expected):
    assert e_closed(P, k) == expected


@pytest.mark.parametrize("k,expected", [(3, 22), (4, 35), (5, 40)])
def test_e_recurrence_examples(k, expected):
    assert e_recurrence(P, k) == expected


def test_table_examples():
    assert table(P, 6).values() == [4, 17, 22, 35, 40, 53]
    assert table(Params(7, 26), 4).values() == [7, 26, 34, 53]
    assert table(P, 2).values() == [4, 17]
    with pytest.raises(ValueError):
        table(P, 1)


def test_index_validation():
    with pytest.raises(ValueError):
        e_closed(P, 0)
    with pytest.raises(ValueError):
        e_recurrence(P, 0)


@given(params(), st.integers(1, 400))
def test_closed_equals_recurrence(p, k):
    assert e_closed(p, k) == e_recurrence(p, k)


@given(params())
def test_difference_pattern(p):
    e = closed_prefix(p, 40)
    assert e == recurrence_prefix(p, 40)
    for j in range(19):
        assert e[2 * j + 1] - e[2 * j] == p.v - p.u
        assert e[2 * j + 2] - e[2 * j + 1] == p.u + 1
    assert e[2] == p.u + p.v + 1


def test_d_sequence_is_e_sequence():
    for k in range(1, 50):
        assert d_value(P, k) == e_closed(P, k)


def test_table_serialisation():
    t = table(P, 4)
    assert t.to_csv().splitlines() == ["k,e_k,provenance", "1,4,closed", "2,17,closed", "3,22,closed",
                                       "4,35,closed"]
    text = json.dumps(t.to_json())
    assert CriticalTable.from_json(text).entries == t.entries


@pytest.mark.parametrize("u,v,msg", [(3, 20, "u in {3,5,6,9,10} excluded"), (4, 16, "v < 3u+5"),
                                     (2, 30, "u must lie"), (10, 50, "excluded")])
def test_params_rejects_outside_domain(u, v, msg):
    with pytest.raises(HypothesisError, match=msg.replace("{", r"\{").replace("}", r"\}").replace("+", r"\+")):
        Params(u, v)


@pytest.mark.parametrize("K", [1, 2, 3, 7])
def test_prefix_lengths(K):
    assert closed_prefix(P, K) == recurrence_prefix(P, K) == [e_closed(P, k) for k in range(1, K + 1)]
