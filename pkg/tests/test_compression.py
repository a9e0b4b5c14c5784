import json

import pytest
from hypothesis import given
from strategies import ired_certs

from irew import fixtures as fx
from irew.compression import (
    OredCert,
    OredNode,
    compress,
    dovetail,
    format_ored,
    linearize,
    ored_equal,
    ored_from_json,
    ored_match_split,
    ored_to_json,
    validate_ored,
)
from irew.errors import NoMatch, NotLeftLinear, NotValidated, ResourceExceeded, WrongKind
from irew.proofs import check_valid
from irew.semantics import seq_is_finite
from irew.terms import truncation_equal
from irew.trs import Step, replay, replay_terms

GROW = fx.TRS_GROW


def compressed(cert, trs):
    assert check_valid(cert, trs)
    return compress(cert, trs)


@pytest.mark.parametrize("build", [fx.a_to_c_omega, fx.a_to_c_omega_unrolled, fx.a_to_c_omega_detour])
def test_grow_proofs_compress_to_one_looping_node(build):
    o = compressed(build(), GROW)
    assert len(o) == 1
    assert format_ored(o, GROW) == "o0: a => rec X . C(X) [[]:0] lift C(o0)"


def test_all_grow_proofs_compress_to_equal_certificates():
    a = compressed(fx.a_to_c_omega(), GROW)
    b = compressed(fx.a_to_c_omega_detour(), GROW)
    assert ored_equal(a, b)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 50])
def test_grow_linearization_matches_target_to_depth(n):
    o = compressed(fx.a_to_c_omega(), GROW)
    end = replay(linearize(o, n), GROW)
    assert truncation_equal(end, GROW.parse(fx.C_OMEGA), n - 1)


def test_nested_f_to_g_proof_reaches_every_depth():
    o = compressed(fx.f_omega_to_g_omega_nested(), fx.TRS_FG)
    terms = replay_terms(linearize(o, 40), fx.TRS_FG)
    for n in range(7):
        assert any(truncation_equal(u, o.target, n) for u in terms)


def test_finite_proof_compresses_to_its_steps():
    cert = fx.two_by_two_lift()
    o = compressed(cert, fx.TRS_PERM)
    red = linearize(o, 100)
    assert len(red) == 4
    assert replay(red, fx.TRS_PERM) == cert.target


def test_non_left_linear_system_is_refused():
    cert = fx.fab_to_d()
    check_valid(cert, fx.TRS_DIAGONAL)
    with pytest.raises(NotLeftLinear):
        compress(cert, fx.TRS_DIAGONAL)


def test_wrong_kind_and_unvalidated_inputs():
    with pytest.raises(NotValidated):
        compress(fx.a_to_c_omega(), GROW)
    cert = fx.c_omega_to_a("ibi")
    check_valid(cert, fx.TRS_COLLAPSE)
    with pytest.raises(WrongKind):
        compress(cert, fx.TRS_COLLAPSE)


def test_node_cap(monkeypatch):
    cert = fx.a_to_c_omega_detour()
    check_valid(cert, GROW)
    with pytest.raises(ResourceExceeded):
        compress(cert, GROW, max_nodes=1)
    monkeypatch.setenv("IREW_MAX_NODES", "1")
    with pytest.raises(ResourceExceeded):
        compress(cert, GROW)


def test_json_roundtrip():
    o = compressed(fx.f_omega_to_g_omega_nested(), fx.TRS_FG)
    again = ored_from_json(json.loads(json.dumps(ored_to_json(o, fx.TRS_FG))), fx.TRS_FG)
    assert validate_ored(again, fx.TRS_FG)
    assert ored_equal(o, again)


def test_validation_rejects_a_broken_prefix():
    a, ca = GROW.parse("a"), GROW.parse("C(a)")
    bad = OredCert({"o0": OredNode(a, ca, (Step((1,), 0),), None)}, "o0")
    verdict = validate_ored(bad, GROW)
    assert not verdict and "replay" in verdict.message
    wrong_end = OredCert({"o0": OredNode(a, GROW.parse("C(C(a))"), (Step((), 0),), None)}, "o0")
    assert not validate_ored(wrong_end, GROW)


def test_match_split_exposes_the_pattern():
    o = compressed(fx.a_to_c_omega(), GROW)
    red, residuals = ored_match_split(o, GROW.parse("C(C(x))"), GROW)
    assert [s.pos for s in red.steps] == [(), (1,)]
    assert set(residuals) == {"x"}
    rest = residuals["x"]
    assert rest.source == GROW.parse("a") and rest.target == GROW.parse(fx.C_OMEGA)


def test_match_split_rejects_non_linear_patterns():
    o = compressed(fx.two_by_two_lift(), fx.TRS_PERM)
    with pytest.raises(NoMatch):
        ored_match_split(o, fx.TRS_PERM.parse("h(x, x)"), fx.TRS_PERM)


@given(ired_certs)
def test_random_certificates_compress_with_same_endpoints(cert):
    o = compress(cert, fx.TRS_PERM)
    assert o.validated
    assert o.source == cert.source and o.target == cert.target


@given(ired_certs)
def test_compressed_sequence_converges_to_the_target(cert):
    o = compress(cert, fx.TRS_PERM)
    finite, count = seq_is_finite(cert)
    red = linearize(o, 60)
    terms = replay_terms(red, fx.TRS_PERM)
    for n in range(4):
        assert any(truncation_equal(u, cert.target, n) for u in terms)
    if finite:
        assert len(red) == count
        assert terms[-1] == cert.target


@given(ired_certs)
def test_dovetail_emits_only_stepful_positions(cert):
    o = compress(cert, fx.TRS_PERM)
    first = [st for _, st in zip(range(10), dovetail(o))]
    assert linearize(o, 10).steps == tuple(first)
