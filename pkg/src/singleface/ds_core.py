"""Davenport-Schinzel sequence combinatorics.

Sequences are tuples of hashable, mutually comparable symbol ids.  The
:class:`Sequence` wrapper carries an explicit alphabet so that restriction
can reject symbols that were never allowed; every function here also accepts
a bare iterable and infers the alphabet from its items.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, NamedTuple

Symbol = Hashable


class AlphabetError(ValueError):
    """A symbol set refers to symbols outside the sequence alphabet."""


class PartitionError(ValueError):
    """Two alphabets that must be disjoint (or covering) are not."""


class BudgetExceeded(RuntimeError):
    """Exhaustive search would exceed its node budget."""

    def __init__(self, budget: int, what: str = "search nodes"):
        super().__init__(f"budget of {budget} {what} exceeded")
        self.budget = budget


@dataclass(frozen=True)
class Sequence:
    items: tuple
    alphabet: frozenset = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", frozenset(self.items))
        else:
            object.__setattr__(self, "alphabet", frozenset(self.alphabet))
            stray = set(self.items) - self.alphabet
            if stray:
                raise AlphabetError(f"items outside alphabet: {sorted(stray)!r}")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def to_json(self) -> list:
        return list(self.items)


def as_sequence(x: Any) -> Sequence:
    return x if isinstance(x, Sequence) else Sequence(tuple(x))


def collapse(x) -> Sequence:
    """Replace every maximal run of equal consecutive symbols by one symbol."""
    x = as_sequence(x)
    out = []
    for item in x.items:
        if not out or out[-1] != item:
            out.append(item)
    return Sequence(tuple(out), x.alphabet)


def restrict(x, lam: Iterable) -> Sequence:
    x = as_sequence(x)
    lam = frozenset(lam)
    stray = lam - x.alphabet
    if stray:
        raise AlphabetError(f"symbols not in alphabet: {sorted(stray, key=repr)!r}")
    return Sequence(tuple(i for i in x.items if i in lam), lam)


@dataclass(frozen=True)
class DsOrderReport:
    max_alternation_length: int
    witness_pair: tuple | None
    witness_indices: tuple
    has_adjacent_repeat: bool
    first_repeat_index: int | None = None

    def is_ds(self, s: int) -> bool:
        """True iff the sequence is a DS sequence of order ``s``."""
        return not self.has_adjacent_repeat and self.max_alternation_length <= s + 1

    def to_json(self) -> dict:
        return {
            "max_alternation_length": self.max_alternation_length,
            "witness_pair": list(self.witness_pair) if self.witness_pair else None,
            "witness_indices": list(self.witness_indices),
            "has_adjacent_repeat": self.has_adjacent_repeat,
            "first_repeat_index": self.first_repeat_index,
        }


def alternation_indices(items, a, b) -> list[int]:
    """Indices of a longest alternation between ``a`` and ``b``.

    For a fixed pair the longest alternating subsequence takes one element
    from every run of the pair-restricted sequence; the first of each run is
    used.
    """
    out: list[int] = []
    last = None
    for i, item in enumerate(items):
        if item == a or item == b:
            if item != last:
                out.append(i)
                last = item
    return out


def pair_alternations(x) -> dict[tuple, int]:
    """Longest alternation length for every unordered pair of symbols present."""
    x = as_sequence(x)
    symbols = sorted(set(x.items))
    pos = {sym: i for i, sym in enumerate(symbols)}
    k = len(symbols)
    # last[i][j]: which of the pair was seen last; count[i][j]: runs so far
    last = [[-1] * k for _ in range(k)]
    count = [[0] * k for _ in range(k)]
    for item in x.items:
        c = pos[item]
        for b in range(k):
            if b == c:
                continue
            i, j = (c, b) if c < b else (b, c)
            if last[i][j] != c:
                last[i][j] = c
                count[i][j] += 1
    return {(symbols[i], symbols[j]): count[i][j] for i, j in combinations(range(k), 2)}


def ds_report(x) -> DsOrderReport:
    x = as_sequence(x)
    items = x.items
    repeat = next((i for i in range(1, len(items)) if items[i] == items[i - 1]), None)
    pairs = pair_alternations(x)
    if not pairs:
        length = min(len(items), 1)
        return DsOrderReport(length, None, (0,) if length else (), repeat is not None, repeat)
    # longest first, then the smallest pair for determinism
    best = max(pairs.items(), key=lambda kv: (kv[1], _neg_key(kv[0])))
    (a, b), length = best
    witness = tuple(alternation_indices(items, a, b))
    return DsOrderReport(length, (a, b), witness, repeat is not None, repeat)


class _neg_key:
    # inverts ordering so max() picks the lexicographically smallest pair
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return other.v < self.v

    def __eq__(self, other):
        return self.v == other.v


def is_ds(x, s: int) -> bool:
    return ds_report(x).is_ds(s)


class FriendlyCheck(NamedTuple):
    ok: bool
    window: tuple[int, int] | None  # half-open index range of the first violation

    def __bool__(self) -> bool:
        return self.ok


def _check_partition(items, sigma1: frozenset, sigma2: frozenset) -> None:
    if sigma1 & sigma2:
        raise PartitionError(f"alphabets overlap: {sorted(sigma1 & sigma2, key=repr)!r}")
    stray = set(items) - sigma1 - sigma2
    if stray:
        raise PartitionError(f"symbols in neither alphabet: {sorted(stray, key=repr)!r}")


def is_k_friendly(x, sigma1: Iterable, sigma2: Iterable, k: int) -> FriendlyCheck:
    """No window of ``k + 1`` consecutive items alternates between one symbol
    of ``sigma1`` and one symbol of ``sigma2``."""
    if k < 1:
        raise ValueError("k must be positive")
    items = as_sequence(x).items
    sigma1, sigma2 = frozenset(sigma1), frozenset(sigma2)
    _check_partition(items, sigma1, sigma2)
    run = 1
    for i in range(1, len(items)):
        cross = (items[i] in sigma1) != (items[i - 1] in sigma1)
        if not cross:
            run = 1
        elif run >= 2 and items[i] == items[i - 2]:
            run += 1
        else:
            run = 2
        if run >= k + 1:
            return FriendlyCheck(False, (i - k, i + 1))
    return FriendlyCheck(True, None)


@dataclass(frozen=True)
class Fact1Decomposition:
    L_prime: Sequence
    L: Sequence
    R_prime: Sequence
    R: Sequence
    delta_L: int
    delta_R: int
    # charges[("L", i)] counts collapsed R'-occurrences charged to element i of L
    charges: dict = field(hash=False, compare=False)

    @property
    def max_charge(self) -> int:
        return max(self.charges.values(), default=0)

    def identity_holds(self, total: int) -> bool:
        return total == len(self.L) + len(self.R) + self.delta_L + self.delta_R


def _run_index(items, positions) -> dict[int, int]:
    """Map each position (into ``items``) to the index of its run after collapse."""
    out = {}
    run = -1
    prev = object()
    for p in positions:
        if items[p] != prev:
            run += 1
            prev = items[p]
        out[p] = run
    return out


def _charge(items, own: list[int], other_run: dict[int, int], side: str) -> dict:
    """Charge each collapsed occurrence on ``own`` to an element of the other side.

    ``own`` lists positions of one restriction; a run of equal symbols there is
    ``b, xi_1, b, xi_2, ..., b`` in the full sequence, and each ``b`` but the
    last is charged to an element of the following block ``xi``, preferring one
    that lies in a different collapsed element than the previous charge.
    """
    charges: dict = {}
    prev_target = None
    for idx in range(len(own) - 1):
        p, q = own[idx], own[idx + 1]
        if items[p] != items[q]:
            prev_target = None
            continue
        block = range(p + 1, q)
        target = next((other_run[j] for j in block if other_run[j] != prev_target), None)
        if target is None:
            target = other_run[block[0]]
        key = (side, target)
        charges[key] = charges.get(key, 0) + 1
        prev_target = target
    return charges


def fact1_decompose(x, sigma1: Iterable, sigma2: Iterable) -> Fact1Decomposition:
    x = as_sequence(x)
    items = x.items
    sigma1, sigma2 = frozenset(sigma1), frozenset(sigma2)
    _check_partition(items, sigma1, sigma2)
    rep = ds_report(x)
    if rep.has_adjacent_repeat:
        raise ValueError(f"adjacent repeat at index {rep.first_repeat_index}")
    pos1 = [i for i, it in enumerate(items) if it in sigma1]
    pos2 = [i for i, it in enumerate(items) if it in sigma2]
    Lp = Sequence(tuple(items[i] for i in pos1), sigma1)
    Rp = Sequence(tuple(items[i] for i in pos2), sigma2)
    L, R = collapse(Lp), collapse(Rp)
    charges = _charge(items, pos1, _run_index(items, pos2), "R")
    charges.update(_charge(items, pos2, _run_index(items, pos1), "L"))
    return Fact1Decomposition(Lp, L, Rp, R, len(Lp) - len(L), len(Rp) - len(R), charges)


def lambda_exact(n: int, s: int, budget: int = 5_000_000) -> int:
    """Length of the longest DS(n, s) sequence, by exhaustive search.

    Symbols are introduced in increasing order (canonical form), each pair's
    alternation count is tracked incrementally and a branch dies as soon as a
    pair reaches ``s + 2`` runs.  Search states are memoised; ``budget`` caps
    the number of distinct states expanded.
    """
    if n < 1 or s < 1:
        raise ValueError("n and s must be positive")
    cap = s + 1
    index = {p: i for i, p in enumerate(combinations(range(n), 2))}
    pair_of = [[index[(min(c, b), max(c, b))] if c != b else -1 for b in range(n)] for c in range(n)]
    memo: dict = {}
    expanded = 0

    # state: per pair (runs, last symbol) packed as runs * 2 + (last is the larger id)
    def best(last: int, used: int, pairs: tuple) -> int:
        nonlocal expanded
        key = (last, used, pairs)
        hit = memo.get(key)
        if hit is not None:
            return hit
        expanded += 1
        if expanded > budget:
            raise BudgetExceeded(budget)
        result = 0
        top = used + 1 if used < n else used
        for c in range(top):
            if c == last:
                continue
            new = list(pairs)
            ok = True
            for b in range(used):
                if b == c:
                    continue
                pi = pair_of[c][b]
                runs, hi_last = divmod(new[pi], 2)
                c_is_hi = c > b
                if runs == 0:
                    # b seen, c not yet: restriction so far is just "b"
                    runs = 1
                    hi_last = 0 if c_is_hi else 1
                if hi_last != c_is_hi:
                    runs += 1
                    if runs > cap:
                        ok = False
                        break
                    new[pi] = runs * 2 + int(c_is_hi)
                else:
                    new[pi] = runs * 2 + hi_last
            if not ok:
                continue
            got = 1 + best(c, max(used, c + 1), tuple(new))
            if got > result:
                result = got
        memo[key] = result
        return result

    return best(-1, 0, (0,) * len(index))
