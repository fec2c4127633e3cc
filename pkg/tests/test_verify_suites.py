import pytest

from groupoidlab import (
    InvalidInput,
    build_standard_groupoid,
    check_witness,
    cyclic_group,
    encode_double_cover,
    encode_groupoid,
    standard_witness,
    symmetric_group,
    verify_section2,
    verify_section3,
)


def test_section2_claims_hold_up_to_five_objects():
    z2 = cyclic_group(2)
    for n in (4, 5):
        s = encode_groupoid(build_standard_groupoid(z2, n))
        rep = verify_section2(s, z2)
        assert rep.passed, rep.render_text()


def test_section2_fails_against_wrong_expected_group():
    # negative control: the claims are not vacuous
    s3 = symmetric_group(3)
    z6 = cyclic_group(6)
    s = encode_groupoid(build_standard_groupoid(s3, 2))
    rep = verify_section2(s, z6)
    status = {e.claim_id: e.status for e in rep.entries}
    assert status["morphism-group-is-g"] == "fail"


def test_section2_rejects_cover_structures():
    z2 = cyclic_group(2)
    s = encode_double_cover(build_standard_groupoid(z2, 3))
    with pytest.raises(InvalidInput):
        verify_section2(s, z2)


def test_section3_report_lists_every_claim_once():
    z2 = cyclic_group(2)
    s = encode_double_cover(build_standard_groupoid(z2, 4))
    rep = verify_section3(s)
    ids = [e.claim_id for e in rep.entries]
    assert len(ids) == len(set(ids))
    assert rep.passed


def test_witness_report_is_stable_under_repetition():
    z2 = cyclic_group(2)
    s = encode_double_cover(build_standard_groupoid(z2, 3))
    w = standard_witness(s)
    first = [(e.claim_id, e.status) for e in check_witness(w).entries]
    second = [(e.claim_id, e.status) for e in check_witness(w).entries]
    assert first == second
