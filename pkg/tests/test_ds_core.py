import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singleface import ds_core
from singleface.ds_core import (
    AlphabetError,
    BudgetExceeded,
    PartitionError,
    collapse,
    ds_report,
    fact1_decompose,
    is_ds,
    is_k_friendly,
    lambda_exact,
    restrict,
)

from oracles import friendly_brute, longest_alternation_dp

words = st.lists(st.sampled_from("abcde"), max_size=30)


def test_collapse_examples():
    assert collapse("abbbbccd").items == tuple("abcd")
    assert collapse("").items == ()
    assert collapse("aaa").items == ("a",)


def test_restrict_examples():
    assert restrict("abca", {"a", "c"}).items == tuple("aca")
    assert restrict("ab", set()).items == ()
    # adjacent repeats may appear after filtering
    assert restrict("abab", {"b"}).items == ("b", "b")


def test_restrict_rejects_foreign_symbol():
    with pytest.raises(AlphabetError):
        restrict("ab", {"z"})


def test_ds_report_examples():
    rep = ds_report("aba")
    assert rep.max_alternation_length == 3
    assert rep.is_ds(2) and not rep.is_ds(1)
    assert ds_report("abab").max_alternation_length == 4


def test_adjacent_repeat_is_never_ds():
    rep = ds_report("abba")
    assert rep.has_adjacent_repeat and rep.first_repeat_index == 2
    assert not is_ds("abba", 10)


def test_witness_indices_alternate():
    items = "acbdabcab"
    rep = ds_report(items)
    a, b = rep.witness_pair
    picked = [items[i] for i in rep.witness_indices]
    assert len(picked) == rep.max_alternation_length
    assert all(x in (a, b) for x in picked)
    assert all(x != y for x, y in zip(picked, picked[1:]))


@pytest.mark.parametrize("seed", range(20))
def test_alternation_matches_pairwise_dp(seed):
    rng = random.Random(seed)
    items = [rng.choice("abcdefg") for _ in range(30)]
    syms = sorted(set(items))
    expected = max((longest_alternation_dp(items, a, b) for i, a in enumerate(syms) for b in syms[i + 1:]),
                   default=min(len(items), 1))
    assert ds_report(items).max_alternation_length == expected
    for (a, b), v in ds_core.pair_alternations(items).items():
        assert v == longest_alternation_dp(items, a, b)


@given(words)
def test_collapse_idempotent(xs):
    once = collapse(xs)
    assert collapse(once).items == once.items
    assert all(x != y for x, y in zip(once.items, once.items[1:]))


@given(words, st.sets(st.sampled_from("abcde")))
def test_restrict_commutes_with_membership(xs, lam):
    lam = lam & set(xs)
    assert restrict(xs, lam).items == tuple(x for x in xs if x in lam)


@given(words)
def test_ds_order_monotone(xs):
    xs = list(collapse(xs).items)
    order = ds_report(xs).max_alternation_length
    assert is_ds(xs, max(order - 1, 1))
    if order >= 3:
        assert not is_ds(xs, order - 2)


def test_friendly_examples():
    S1, S2 = {"l"}, {"r"}
    res = is_k_friendly("lrlr", S1, S2, 3)
    assert not res.ok and res.window == (0, 4)
    assert is_k_friendly("lrlr", S1, S2, 4).ok
    assert is_k_friendly(["l", "r", "q", "l"], {"l"}, {"r", "q"}, 2).ok


def test_friendly_rejects_overlap():
    with pytest.raises(PartitionError):
        is_k_friendly("ab", {"a", "b"}, {"b"}, 2)


@settings(max_examples=200)
@given(st.lists(st.sampled_from(["l1", "l2", "r1", "r2"]), max_size=16), st.integers(1, 5))
def test_friendly_matches_brute_force(xs, k):
    S1, S2 = {"l1", "l2"}, {"r1", "r2"}
    assert is_k_friendly(xs, S1, S2, k).ok == friendly_brute(xs, S1, S2, k)


def test_fact1_examples():
    d = fact1_decompose(["l", "r", "l"], {"l"}, {"r"})
    assert d.L_prime.items == ("l", "l") and d.L.items == ("l",)
    assert d.R_prime.items == d.R.items == ("r",)
    assert (d.delta_L, d.delta_R) == (1, 0)
    assert d.identity_holds(3)
    d = fact1_decompose(["l1", "l2"], {"l1", "l2"}, set())
    assert (d.delta_L, d.delta_R) == (0, 0)


@given(st.lists(st.sampled_from(["l1", "l2", "r1", "r2"]), max_size=20))
def test_fact1_identity_always_holds(xs):
    xs = list(collapse(xs).items)
    d = fact1_decompose(xs, {"l1", "l2"}, {"r1", "r2"})
    assert d.identity_holds(len(xs))
    assert sum(d.charges.values()) == d.delta_L + d.delta_R


def test_fact1_rejects_adjacent_repeat():
    with pytest.raises(ValueError):
        fact1_decompose(["l", "l"], {"l"}, set())


@pytest.mark.parametrize("n,s,expected", [(4, 1, 4), (4, 2, 7), (2, 3, 4), (1, 5, 1), (3, 3, 8)])
def test_lambda_values(n, s, expected):
    assert lambda_exact(n, s) == expected


def test_lambda_budget():
    with pytest.raises(BudgetExceeded, match="budget"):
        lambda_exact(6, 3, budget=10)


def test_lambda_rejects_nonpositive():
    with pytest.raises(ValueError):
        lambda_exact(0, 1)
