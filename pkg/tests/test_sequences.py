import itertools
import random

import pytest
from hypothesis import given
from strategies import ground_terms, seeds

from irew import fixtures as fx
from irew.errors import FormatError, InvalidWitness, ReplayError
from irew.generators import random_sequence
from irew.proofs import cert_fingerprint, check_valid, is_canonical
from irew.semantics import canonical_prefix
from irew.sequences import (
    PermutationWitness,
    RuleApplication,
    canonical_tree_of,
    corresponds_finite,
    enumerate_sequences,
    enumerate_terms,
    interleavings,
    is_interleaving,
    permutation_equiv,
    permutation_equiv_bruteforce,
    permute_prefix,
    project,
    rulapp,
    seq_from_json,
    seq_to_json,
)
from irew.terms import bisimilar
from irew.trs import FiniteReduction, Step, replay

PERM = fx.TRS_PERM


def seq(source, *steps, trs=PERM):
    return FiniteReduction(trs.parse(source), tuple(Step(p, r) for p, r in steps))


def test_projection_drops_the_root_step():
    red = fx.projection_sequence()
    apps = {RuleApplication(0, (1,)), RuleApplication(1, (2,))}
    result = project(red, apps, fx.TRS_PROJ)
    assert [a.rule for a in result.applications] == [0, 0, 1, 1, 0]
    assert result.embedding == (0, 1, 2, 4, 5)


def test_interleavings_of_two_pairs():
    merges = list(interleavings([["x1", "x2"], ["y1", "y2"]]))
    assert len(merges) == 6
    assert all(is_interleaving([v for _, v in m], [["x1", "x2"], ["y1", "y2"]]) for m in merges)
    assert not is_interleaving(["x2", "x1", "y1", "y2"], [["x1", "x2"], ["y1", "y2"]])


def test_parallel_steps_commute():
    s = seq("h(a, b)", ((1,), 1), ((2,), 2))
    t = seq("h(a, b)", ((2,), 2), ((1,), 1))
    assert permutation_equiv(s, t, PERM)
    assert permutation_equiv_bruteforce(s, t, PERM) == PermutationWitness((1, 0))


def test_nested_steps_do_not_commute():
    s = seq("f(a)", ((), 0), ((1,), 1))
    t = seq("f(a)", ((1,), 1), ((), 0))
    assert replay(s, PERM) == replay(t, PERM)
    assert not permutation_equiv(s, t, PERM)
    assert permutation_equiv_bruteforce(s, t, PERM) is None


def test_permute_prefix_follows_the_witness():
    s = seq("h(a, b)", ((1,), 1), ((2,), 2), ((1, 1), 1))
    t = seq("h(a, b)", ((2,), 2), ((1,), 1), ((1, 1), 1))
    w = permutation_equiv_bruteforce(s, t, PERM)
    assert rulapp(permute_prefix(s, t, w, 1)) == [RuleApplication(1, (1,))]
    assert len(permute_prefix(s, t, w, 3)) == 3
    with pytest.raises(InvalidWitness):
        permute_prefix(s, t, PermutationWitness((0, 1, 2)), 1)


def test_invalid_sequence_is_reported():
    with pytest.raises(ReplayError):
        permutation_equiv_bruteforce(seq("a", ((), 0)), seq("a", ((), 1)), PERM)


def test_canonical_tree_is_canonical_and_corresponds():
    red = seq("h(f(a), b)", ((1, 1), 1), ((1,), 0), ((2,), 2))
    cert = canonical_tree_of(red, PERM)
    assert cert.validated and is_canonical(cert)
    assert cert.target == replay(red, PERM)
    assert corresponds_finite(red, cert, PERM)


def test_a_longer_sequence_does_not_correspond_to_a_one_step_tree():
    cert = fx.a_to_c_omega()
    check_valid(cert, fx.TRS_GROW)
    one = canonical_tree_of(seq("a", ((), 0), trs=fx.TRS_GROW), fx.TRS_GROW)
    assert not corresponds_finite(canonical_prefix(cert, 3), one, fx.TRS_GROW)


def test_sequence_json_roundtrip_and_errors():
    red = fx.projection_sequence()
    again = seq_from_json(seq_to_json(red, fx.TRS_PROJ), fx.TRS_PROJ.signature)
    assert again == red
    with pytest.raises(FormatError):
        seq_from_json({"source": "c", "steps": [{"pos": [0], "rule": 0}]}, fx.TRS_PROJ.signature)
    with pytest.raises(FormatError):
        seq_from_json({"source": "c"}, fx.TRS_PROJ.signature)


def test_enumerated_terms_are_distinct_and_small():
    terms = list(enumerate_terms(PERM.signature, 3))
    assert len(terms) == len({t.key() for t in terms})
    assert all(len(t) <= 3 for t in terms)


@pytest.mark.parametrize("max_nodes, length", [(3, 3), (4, 2)])
def test_canonical_oracle_agrees_with_bruteforce(max_nodes, length):
    for source in enumerate_terms(PERM.signature, max_nodes):
        seqs = list(enumerate_sequences(source, PERM, length))
        keys = [cert_fingerprint(canonical_tree_of(r, PERM)) for r in seqs]
        for (i, s), (j, t) in itertools.product(enumerate(seqs), repeat=2):
            brute = permutation_equiv_bruteforce(s, t, PERM) is not None
            assert brute == (keys[i] == keys[j]), (s, t)
            if brute:
                assert bisimilar(replay(s, PERM), replay(t, PERM))


@given(ground_terms, seeds)
def test_sequence_corresponds_to_its_canonical_tree(s, seed):
    red = random_sequence(random.Random(seed), s, PERM, 5)
    cert = canonical_tree_of(red, PERM)
    assert corresponds_finite(red, cert, PERM)
    assert cert.target == replay(red, PERM)


@given(ground_terms, seeds)
def test_canonical_prefix_of_canonical_tree_is_equivalent(s, seed):
    red = random_sequence(random.Random(seed), s, PERM, 5)
    cert = canonical_tree_of(red, PERM)
    again = canonical_prefix(cert, len(red) + 1)
    assert len(again) == len(red)
    assert permutation_equiv(red, again, PERM)
    assert permutation_equiv_bruteforce(red, again, PERM) is not None
