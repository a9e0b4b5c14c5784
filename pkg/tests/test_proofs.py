import json

import pytest
from hypothesis import given
from strategies import ired_certs

from irew import fixtures as fx
from irew.errors import FormatError, NotValidated, WrongKind
from irew.proofs import (
    MARKED_ON_CYCLE,
    CertBuilder,
    ProofCert,
    cert_equal,
    cert_fingerprint,
    cert_from_json,
    cert_to_json,
    check_valid,
    embed_ieq,
    forget_marks,
    is_canonical,
    mark_nesting_depth,
)

ALL_FIXTURES = {
    **fx.ired_fixtures(),
    "c_omega_to_a_ibi": (fx.TRS_COLLAPSE, fx.c_omega_to_a("ibi")),
    "c_omega_eq_a": (fx.TRS_COLLAPSE, fx.c_omega_eq_a()),
    "a_eq_b": (fx.TRS_EQ, fx.a_eq_b()),
    "ca_eq_c_omega": (fx.TRS_EQ, fx.ca_eq_c_omega()),
    "a_omega_eq_b_omega": (fx.TRS_SWAP, fx.a_omega_eq_b_omega()),
}


@pytest.mark.parametrize("name", sorted(ALL_FIXTURES))
def test_fixture_is_valid(name):
    trs, cert = ALL_FIXTURES[name]
    verdict = check_valid(cert, trs)
    assert verdict, str(verdict)
    assert cert.validated


@pytest.mark.parametrize("name", sorted(ALL_FIXTURES))
def test_json_roundtrip_preserves_certificate(name):
    trs, cert = ALL_FIXTURES[name]
    again = cert_from_json(json.loads(json.dumps(cert_to_json(cert))))
    assert cert_equal(cert, again)
    assert check_valid(again, trs)


def test_collapse_graph_is_ibi_but_not_ired():
    assert check_valid(fx.c_omega_to_a("ibi"), fx.TRS_COLLAPSE)
    verdict = check_valid(fx.c_omega_to_a("ired"), fx.TRS_COLLAPSE)
    assert not verdict and verdict.clause == "e" and verdict.message == MARKED_ON_CYCLE


def test_unmarked_non_final_lift_rejected_in_ired():
    cert = fx.c_omega_to_a("ibi")
    cert = ProofCert("ired", cert.nodes, cert.root)
    verdict = check_valid(cert, fx.TRS_COLLAPSE)
    assert not verdict and "must be marked" in verdict.message


def test_marks_rejected_outside_ired():
    cert = fx.a_to_c_omega_detour()
    ibi = ProofCert("ibi", cert.nodes, cert.root)
    assert check_valid(ibi, fx.TRS_GROW).clause == "d"


def test_backward_steps_only_in_ieq():
    cert = fx.a_eq_b()
    assert check_valid(cert, fx.TRS_EQ)
    as_ibi = ProofCert("ibi", cert.nodes, cert.root)
    assert check_valid(as_ibi, fx.TRS_EQ).clause == "d"


def test_wrong_rule_instance_is_reported():
    b = CertBuilder("ired", fx.TRS_GROW)
    bad = b.split("a", "C(C(a))", [b.root("a", "C(C(a))", 0), b.identity_lift("C(C(a))")])
    verdict = check_valid(b.build(bad), fx.TRS_GROW)
    assert not verdict and verdict.clause == "a"


def test_unknown_reference_is_a_format_error():
    doc = cert_to_json(fx.a_to_c_omega())
    doc["nodes"]["n0"]["premises"] = ["n99"]
    with pytest.raises(FormatError):
        cert_from_json(doc)


def test_detour_and_nested_variants_are_distinct():
    assert not cert_equal(fx.a_to_c_omega(), fx.a_to_c_omega_detour())
    assert not cert_equal(fx.f_omega_to_g_omega(), fx.f_omega_to_g_omega_nested())


def test_unrolling_a_loop_gives_an_equal_certificate():
    a, b = fx.a_to_c_omega(), fx.a_to_c_omega_unrolled()
    assert cert_equal(a, b)
    assert cert_fingerprint(a) == cert_fingerprint(b)


def test_canonicity():
    for cert, trs in [(fx.a_to_c_omega(), fx.TRS_GROW), (fx.fab_to_d(), fx.TRS_DIAGONAL)]:
        check_valid(cert, trs)
        assert is_canonical(cert)
    cert = fx.id_over_constant()
    check_valid(cert, fx.TRS_GROW)
    assert not is_canonical(cert)


def test_mark_nesting_depth():
    cases = [
        (fx.a_to_c_omega(), fx.TRS_GROW, 0),
        (fx.a_to_c_omega_detour(), fx.TRS_GROW, 1),
        (fx.fab_to_d(), fx.TRS_DIAGONAL, 1),
        (fx.stacked_fab_to_d(), fx.TRS_DIAGONAL, 2),
    ]
    for cert, trs, depth in cases:
        assert check_valid(cert, trs)
        assert mark_nesting_depth(cert) == depth


def test_queries_need_a_validated_certificate():
    with pytest.raises(NotValidated):
        is_canonical(fx.a_to_c_omega())


def test_conversions_check_kind():
    with pytest.raises(WrongKind):
        embed_ieq(fx.a_to_c_omega())
    with pytest.raises(WrongKind):
        forget_marks(fx.c_omega_eq_a())


@given(ired_certs)
def test_inclusion_chain_on_random_certificates(cert):
    assert check_valid(cert, fx.TRS_PERM)
    ibi = forget_marks(cert)
    assert check_valid(ibi, fx.TRS_PERM)
    assert check_valid(embed_ieq(ibi), fx.TRS_PERM)


@given(ired_certs)
def test_random_certificates_roundtrip_through_json(cert):
    assert cert_equal(cert_from_json(cert_to_json(cert)), cert)
