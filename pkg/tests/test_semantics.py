import pytest
from hypothesis import given
from strategies import ired_certs

from irew import fixtures as fx
from irew.errors import NotOmega, NotProductive, NotValidated, WrongKind
from irew.proofs import check_valid
from irew.semantics import canonical_prefix, prefix_agreement, seq_is_finite, steps_at_depth
from irew.trs import replay, replay_terms


def valid(cert, trs):
    assert check_valid(cert, trs)
    return cert


@pytest.fixture
def grow(grow_loop_cert):
    return valid(grow_loop_cert, fx.TRS_GROW)


@pytest.fixture
def diagonal(diagonal_cert):
    return valid(diagonal_cert, fx.TRS_DIAGONAL)


def test_grow_loop_prefix_walks_down_the_spine(grow):
    red = canonical_prefix(grow, 5)
    assert [s.pos for s in red.steps] == [(), (1,), (1, 1), (1, 1, 1), (1, 1, 1, 1)]
    terms = replay_terms(red, fx.TRS_GROW)
    assert [str(t) for t in terms[:3]] == ["a", "C(a)", "C(C(a))"]


def test_round_robin_over_lift_children():
    cert = valid(fx.two_by_two_lift(), fx.TRS_PERM)
    red = canonical_prefix(cert, 10)
    assert [s.pos for s in red.steps] == [(1,), (2,), (1, 1), (2, 1)]
    assert replay(red, fx.TRS_PERM) == cert.target
    assert seq_is_finite(cert) == (True, 4)


def test_diagonal_prefix_interleaves_the_two_arguments(diagonal):
    red = canonical_prefix(diagonal, 3)
    assert [s.pos for s in red.steps] == [(1,), (2,), (1, 1)]
    assert seq_is_finite(diagonal) == (False, None)


def test_diagonal_has_only_the_root_step_at_depth_zero(diagonal):
    assert steps_at_depth(diagonal, 0) == [((), 0)]
    assert len(steps_at_depth(diagonal, 2)) == 1 + 2 * 2


@pytest.mark.parametrize("n", range(9))
def test_grow_loop_has_one_step_per_depth(grow, n):
    assert steps_at_depth(grow, n) == [((1,) * i, 0) for i in range(n + 1)]


@pytest.mark.parametrize("n", range(9))
def test_grow_loop_prefix_agreement(grow, n):
    red, agrees = prefix_agreement(grow, n, fx.TRS_GROW)
    assert agrees and len(red) == n + 1


def test_prefix_agreement_rejects_steps_after_an_infinite_premise(diagonal):
    with pytest.raises(NotOmega):
        prefix_agreement(diagonal, 1, fx.TRS_DIAGONAL)


def test_f_omega_loops_agree_with_target():
    for cert in (fx.f_omega_to_g_omega(), fx.f_omega_to_g_omega_nested()):
        valid(cert, fx.TRS_FG)
        for n in range(5):
            _, agrees = prefix_agreement(cert, n, fx.TRS_FG)
            assert agrees


def test_collapse_graph_is_not_productive():
    cert = valid(fx.c_omega_to_a("ibi"), fx.TRS_COLLAPSE)
    with pytest.raises(NotProductive):
        canonical_prefix(cert, 1)


def test_equational_certificates_have_no_sequence():
    cert = valid(fx.a_eq_b(), fx.TRS_EQ)
    with pytest.raises(WrongKind):
        canonical_prefix(cert, 1)


def test_unvalidated_certificate_is_refused():
    with pytest.raises(NotValidated):
        canonical_prefix(fx.a_to_c_omega(), 1)


def test_identity_proof_denotes_the_empty_sequence():
    cert = valid(fx.id_over_constant(), fx.TRS_GROW)
    assert canonical_prefix(cert, 3).steps == ()
    assert steps_at_depth(cert, 4) == []


@given(ired_certs)
def test_finite_certificates_replay_to_their_target(cert):
    finite, count = seq_is_finite(cert)
    red = canonical_prefix(cert, 50)
    terms = replay_terms(red, fx.TRS_PERM)
    if finite:
        assert len(red) == count
        assert terms[-1] == cert.target


@given(ired_certs)
def test_random_certificates_converge_at_small_depths(cert):
    for n in range(4):
        red, agrees = prefix_agreement(cert, n, fx.TRS_PERM)
        assert agrees
        assert [(s.pos, s.rule) for s in red.steps if len(s.pos) <= n] == steps_at_depth(cert, n)


@given(ired_certs)
def test_depth_bounded_steps_grow_with_depth(cert):
    shallow, deeper = steps_at_depth(cert, 1), steps_at_depth(cert, 2)
    assert [s for s in deeper if len(s[0]) <= 1] == shallow
