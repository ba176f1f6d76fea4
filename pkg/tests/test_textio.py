import json

from hypothesis import given, strategies as st

from icubes.icube import generate_random_icube
from icubes.quat import Quat
from icubes.ring import GaussInt, Ring
from icubes.textio import (
    format_elem,
    format_matrix,
    icube_from_json,
    icube_to_json,
    load_matrix,
    matrix_to_json,
    parse_gauss,
    parse_quat,
    quat_from_json,
    quat_to_json,
)

from strategies import gauss


def test_parse_examples():
    assert parse_gauss("i") == GaussInt(0, 1)
    assert parse_gauss(" 3 - i ") == GaussInt(3, -1)
    assert parse_gauss("-2i") == GaussInt(0, -2)
    assert parse_gauss("7") == GaussInt(7, 0)
    assert parse_quat("1-2i+3j-k") == Quat(1, -2, 3, -1)


@given(gauss(10**30))
def test_gauss_text_round_trip(z):
    assert parse_gauss(format_elem(z)) == z


@given(st.builds(Quat, *[st.integers(-10**20, 10**20)] * 4))
def test_quat_round_trip(q):
    assert parse_quat(str(q)) == q
    assert quat_from_json(json.loads(json.dumps(quat_to_json(q)))) == q


@given(st.sampled_from([Ring.Z, Ring.ZI]), st.integers(1, 6), st.integers(0, 1000))
def test_matrix_round_trips(ring, n, seed):
    ic = generate_random_icube(ring, n, seed)
    rows = ic.rows()
    assert load_matrix(format_matrix(rows), ring) == rows
    assert load_matrix(json.dumps(matrix_to_json(rows)), ring) == rows
    assert icube_from_json(json.loads(json.dumps(icube_to_json(ic)))) == ic
