import json
from fractions import Fraction

import pytest

from prelie_posets import FormalSum, TensorSum, class_key, nap_coproduct
from prelie_posets.io import (
    InputError,
    class_name,
    format_sum,
    loads_structure,
    structure_from_json,
    structure_to_json,
    sum_from_json,
    sum_to_json,
    to_dot,
)

from shapes import BAG2_UNDER_POINT, C2, DIAMOND, DOT, N, W


def test_load_closes_relations():
    t = loads_structure('{"elements": ["a","b","c"], "relations": [["a","b"],["b","c"]]}')
    assert t.leq(0, 2)


def test_cycles_only_as_topology():
    text = '{"elements": ["a","b"], "relations": [["a","b"],["b","a"]]}'
    with pytest.raises(InputError):
        loads_structure(text)
    assert not loads_structure(text, as_topology=True).is_t0


def test_malformed_json_reports_position():
    with pytest.raises(InputError, match="line 1 column"):
        loads_structure('{"elements": [')


def test_bad_shapes():
    with pytest.raises(InputError):
        structure_from_json({"relations": []})
    with pytest.raises(InputError):
        structure_from_json({"elements": ["a"], "relations": [["a"]]})
    with pytest.raises(InputError):
        structure_from_json({"elements": ["a"], "relations": [["a", "q"]]})


def test_structure_json_roundtrip():
    for t in (DIAMOND, BAG2_UNDER_POINT):
        back = structure_from_json(structure_to_json(t), as_topology=True)
        assert back == t


def test_dot_draws_covers_upward():
    dot = to_dot(DIAMOND)
    assert "rankdir=BT" in dot
    edges = {line.strip() for line in dot.splitlines() if "->" in line}
    assert edges == {"n0 -> n1;", "n0 -> n2;", "n1 -> n3;", "n2 -> n3;"}


def test_dot_merges_bags():
    dot = to_dot(BAG2_UNDER_POINT)
    assert 'label="a,b"' in dot
    assert sum("->" in line for line in dot.splitlines()) == 1


def test_sum_json_roundtrip():
    t = nap_coproduct(N)
    data = sum_to_json(t)
    assert data == [{"coeff": "1/2", "factors": [class_key(DOT).hex(), class_key(W).hex()]}]
    assert sum_from_json(json.loads(json.dumps(data))) == t
    x = FormalSum({class_key(C2): Fraction(-3, 2)})
    assert sum_from_json(sum_to_json(x)) == x


def test_names_and_formatting():
    assert class_name(class_key(W)) == "W"
    assert format_sum(nap_coproduct(DIAMOND)) == "1 · [W] ⊗ [•]"
    assert format_sum(TensorSum({})) == "0"
