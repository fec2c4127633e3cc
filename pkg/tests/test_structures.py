import json

import pytest

from groupoidlab import (
    InvalidInput,
    automorphism_group,
    build_standard_groupoid,
    cyclic_group,
    decode_groupoid,
    encode_double_cover,
    encode_groupoid,
    morphism_tuple,
    morphisms_between,
    object_closure,
    object_tuple,
    pair_base,
    pair_closure,
    structure_from_json,
    structure_to_json,
    symmetric_group,
)
from groupoidlab.structures import Function, MultiSortedStructure, validate_structure


def test_encode_sizes():
    s = encode_groupoid(build_standard_groupoid(cyclic_group(2), 2))
    assert dict(s.sorts) == {"O": 2, "M": 8}


def test_round_trip_decode():
    g = build_standard_groupoid(cyclic_group(2), 3)
    assert decode_groupoid(encode_groupoid(g)) == g
    cover = encode_double_cover(g)
    assert decode_groupoid(cover) == g


def test_comp_triple_count_s3():
    g = build_standard_groupoid(symmetric_group(3), 3)
    s = encode_groupoid(g)
    # oracle: one triple per composable pair, counted directly
    composable = sum(
        1
        for f in range(g.n_morphisms)
        for h in range(g.n_morphisms)
        if g.ter[f] == g.init[h]
    )
    assert composable == 972
    assert len(s.relation("comp").tuples) == composable


def test_double_cover_shape():
    s = encode_double_cover(build_standard_groupoid(cyclic_group(2), 3))
    assert s.sort_size("I") == 6
    mates = s.relation("mate").tuples
    assert len(mates) == 6  # three classes, both orders
    proj = {row[0]: row[1] for row in s.function("proj").rows}
    for a in range(3):
        assert sorted(i for i in range(6) if proj[i] == a) == [2 * a, 2 * a + 1]


def test_cover_doubles_automorphisms_per_object():
    for n in (2, 3):
        g = build_standard_groupoid(cyclic_group(2), n)
        plain = automorphism_group(encode_groupoid(g))
        cover = automorphism_group(encode_double_cover(g))
        assert cover.order == plain.order * 2 ** n


def test_tuple_helpers():
    g = build_standard_groupoid(cyclic_group(2), 3)
    plain = encode_groupoid(g)
    cover = encode_double_cover(g)
    assert len(object_tuple(plain, 1)) == 1
    assert len(object_tuple(cover, 1)) == 3
    m = morphisms_between(cover, 0, 1)[0]
    assert len(morphism_tuple(cover, m)) == 7
    assert len(morphism_tuple(plain, m)) == 3
    assert len(object_closure(plain, 0)) == 1 + 2
    assert len(object_closure(cover, 0)) == 3 + 2
    assert set(pair_base(plain, 0, 1)) < set(pair_closure(plain, 0, 1))


def test_structure_json_round_trip():
    s = encode_double_cover(build_standard_groupoid(cyclic_group(2), 2))
    again = structure_from_json(json.loads(json.dumps(structure_to_json(s))))
    assert again == s


def test_validate_structure_rejects_partial_function():
    bad = MultiSortedStructure(
        sorts=(("A", 2),),
        functions=(
            Function(name="f", arg_sorts=("A",), result_sort="A", rows=((0, 1),)),
        ),
        relations=(),
    )
    with pytest.raises(InvalidInput):
        validate_structure(bad)
