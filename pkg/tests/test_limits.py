import pytest

from groupoidlab import (
    AxiomViolation,
    Element,
    FunctorialityFailure,
    NotDirected,
    TransitionNotEpi,
    build_standard_groupoid,
    check_pi2_gamma2,
    cyclic_group,
    direct_product,
    encode_double_cover,
    encode_groupoid,
    finite_stage_limit,
    inverse_limit_stage,
    isomorphism_search,
    morphism_tuple,
    morphisms_between,
    object_closure,
    restriction_epimorphism,
    validate_system,
)


def chain_z8():
    z8, z4, z2 = cyclic_group(8), cyclic_group(4), cyclic_group(2)
    return validate_system(
        indices=("z2", "z4", "z8"),
        order_pairs=[("z2", "z4"), ("z4", "z8")],
        groups={"z2": z2, "z4": z4, "z8": z8},
        transitions={
            ("z2", "z4"): [x % 2 for x in range(4)],
            ("z4", "z8"): [x % 4 for x in range(8)],
            ("z2", "z8"): [x % 2 for x in range(8)],
        },
    )


def test_single_group_system():
    sys1 = validate_system(
        indices=("only",),
        order_pairs=[],
        groups={"only": cyclic_group(2)},
        transitions={},
    )
    lim = inverse_limit_stage(sys1, ("only",))
    assert lim.order == 2


def test_chain_validates_and_limits_to_top():
    sys_chain = chain_z8()
    lim = inverse_limit_stage(sys_chain, ("z2", "z4", "z8"))
    assert isomorphism_search(lim, cyclic_group(8)) is not None
    partial = inverse_limit_stage(sys_chain, ("z2", "z4"))
    assert isomorphism_search(partial, cyclic_group(4)) is not None


def test_constant_system_limit():
    z2 = cyclic_group(2)
    sys_const = validate_system(
        indices=("lo", "hi"),
        order_pairs=[("lo", "hi")],
        groups={"lo": z2, "hi": z2},
        transitions={("lo", "hi"): [0, 1]},
    )
    lim = inverse_limit_stage(sys_const, ("lo", "hi"))
    assert isomorphism_search(lim, z2) is not None


def test_incomparable_with_upper_bound():
    z2, z3, z6 = cyclic_group(2), cyclic_group(3), cyclic_group(6)
    sys_v = validate_system(
        indices=("z2", "z3", "z6"),
        order_pairs=[("z2", "z6"), ("z3", "z6")],
        groups={"z2": z2, "z3": z3, "z6": z6},
        transitions={
            ("z2", "z6"): [x % 2 for x in range(6)],
            ("z3", "z6"): [x % 3 for x in range(6)],
        },
    )
    stage = finite_stage_limit(sys_v, ("z2", "z3", "z6"))
    assert isomorphism_search(stage.group, z6) is not None
    for idx in ("z2", "z3", "z6"):
        assert stage.projection_surjective(idx)


def test_transition_must_be_epi():
    z4, z2 = cyclic_group(4), cyclic_group(2)
    with pytest.raises(TransitionNotEpi):
        validate_system(
            indices=("z4", "z2"),
            order_pairs=[("z4", "z2")],
            groups={"z4": z4, "z2": z2},
            transitions={("z4", "z2"): [0, 1]},  # mislabeled direction
        )


def test_functoriality_failure():
    z2 = cyclic_group(2)
    k4 = direct_product(z2, z2)
    first = [x // 2 for x in range(4)]   # projection onto the first factor
    second = [x % 2 for x in range(4)]   # projection onto the second factor
    with pytest.raises(FunctorialityFailure):
        validate_system(
            indices=("bot", "mid", "top"),
            order_pairs=[("bot", "mid"), ("mid", "top")],
            groups={"bot": z2, "mid": k4, "top": k4},
            transitions={
                ("bot", "mid"): first,
                ("mid", "top"): list(range(4)),
                ("bot", "top"): second,
            },
        )


def test_not_directed():
    z2 = cyclic_group(2)
    with pytest.raises(NotDirected):
        validate_system(
            indices=("a", "b"),
            order_pairs=[],
            groups={"a": z2, "b": z2},
            transitions={},
        )


def test_antisymmetry_violation():
    z2 = cyclic_group(2)
    with pytest.raises(AxiomViolation):
        validate_system(
            indices=("a", "b"),
            order_pairs=[("a", "b"), ("b", "a")],
            groups={"a": z2, "b": z2},
            transitions={("a", "b"): [0, 1], ("b", "a"): [0, 1]},
        )


def test_stage_must_be_downward_closed():
    sys_chain = chain_z8()
    with pytest.raises(AxiomViolation):
        finite_stage_limit(sys_chain, ("z8",))
    bottom = finite_stage_limit(sys_chain, ("z2",))
    assert bottom.group.order == 2


def test_restriction_epimorphism_identity():
    s = encode_double_cover(build_standard_groupoid(cyclic_group(2), 4))
    base = object_closure(s, 0)
    full = morphism_tuple(s, min(morphisms_between(s, 0, 1)))
    hom = restriction_epimorphism(s, base, full, full)
    assert hom.is_surjective()
    assert len(hom.kernel()) == 1


def test_restriction_epimorphism_cover():
    s = encode_double_cover(build_standard_groupoid(cyclic_group(2), 4))
    base = object_closure(s, 0)
    m = min(morphisms_between(s, 0, 1))
    hom = restriction_epimorphism(s, base, (Element("M", m),), morphism_tuple(s, m))
    assert hom.source.order == 4
    assert hom.target.order == 2
    assert hom.is_surjective()
    assert len(hom.kernel()) == 2


def test_pi2_gamma2_instances():
    z2 = cyclic_group(2)
    triv = cyclic_group(1)
    instances = [
        ("plain z2", encode_groupoid(build_standard_groupoid(z2, 4)), (0, 1)),
        ("cover z2", encode_double_cover(build_standard_groupoid(z2, 4)), (0, 1)),
        ("plain trivial", encode_groupoid(build_standard_groupoid(triv, 4)), (0, 1)),
    ]
    rep = check_pi2_gamma2(instances)
    assert rep.passed


def test_system_json_round_trip():
    import json

    from groupoidlab.limits import system_from_json, system_to_json

    sys_chain = chain_z8()
    again = system_from_json(json.loads(json.dumps(system_to_json(sys_chain))))
    assert again == sys_chain
