"""Duality for Riemann functions and their weights.

For a function ``f`` that eventually equals a modular ``h``, the K-dual is
``f^K(d) = f(K - d) - h(K - d)``.  The L-dual of a weight is its reflection
``W*_L(d) = W(L - d)``.  With ``L = K + 1`` one has ``m(f^K) = (-1)^n W*_L``
and ``(f^K)^K = f``; both are exposed as pointwise audits over a window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from rrweights.lattice import (
    LatticeFunction,
    WeightTable,
    Window,
    degree,
    mobius_at,
    sub,
)


class MatchingError(ValueError):
    """The table is not a perfect matching (mixed signs or bad row sums)."""


def dual_function(f: LatticeFunction, K: Sequence[int]) -> LatticeFunction:
    """The K-dual ``d -> f(K - d) - h(K - d)``."""
    K = tuple(K)
    h = f.modular_part()
    rule = lambda d: f.rule(sub(K, d)) - h(sub(K, d))
    dK = degree(K)
    a, b = f.initial_zero_degree, f.eventual_degree
    offset = None if f.offset is None else -f.offset - dK
    modular = None if f.offset is not None else (lambda d: -h(sub(K, d)))
    return LatticeFunction(
        f.n,
        rule,
        initial_zero_degree=None if b is None else dK - b,
        eventual_degree=None if a is None else dK - a,
        offset=offset,
        modular=modular,
        name=f"dual({f.name})",
    )


def dual_weight(W: WeightTable, L: Sequence[int]) -> WeightTable:
    """``d -> W(L - d)`` on the reflected window."""
    L = tuple(L)
    return WeightTable(W.n, {sub(L, d): w for d, w in W.entries.items()}, W.window.reflect(L))


@dataclass
class DualityReport:
    identity: str
    window: Window
    holds: bool
    first_violation: Optional[tuple] = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "window": self.window.to_dict(),
            "holds": self.holds,
            "first_violation": None if self.first_violation is None else list(self.first_violation),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def __bool__(self) -> bool:
        return self.holds


def check_dual_weight_identity(
    f: LatticeFunction,
    K: Sequence[int],
    window: Window,
    dual: Optional[Callable] = None,
) -> DualityReport:
    """Audit ``m(f^K)(d) == (-1)^n m(f)(K + 1 - d)`` for every ``d`` in ``window``.

    ``dual`` replaces the computed K-dual, which lets callers audit a
    tampered dual.
    """
    K = tuple(K)
    L = tuple(k + 1 for k in K)
    g = dual if dual is not None else dual_function(f, K)
    sign = -1 if f.n % 2 else 1
    for d in window:
        lhs = mobius_at(g, d)
        rhs = sign * mobius_at(f, sub(L, d))
        if lhs != rhs:
            return DualityReport("dual-weight", window, False, d, {"lhs": lhs, "rhs": rhs})
    return DualityReport("dual-weight", window, True)


def check_double_dual(f: LatticeFunction, K: Sequence[int], window: Window) -> DualityReport:
    """Audit ``(f^K)^K == f`` pointwise on ``window``."""
    ff = dual_function(dual_function(f, K), K)
    for d in window:
        if ff(d) != f(d):
            return DualityReport("double-dual", window, False, d)
    return DualityReport("double-dual", window, True)


def find_self_duality(W: WeightTable) -> Optional[tuple]:
    """Some ``L`` with ``W(L - d) == (-1)^n W(d)`` on the table window, or None.

    Any such ``L`` is a sum of two support points, so those are the only
    candidates.  The identity is checked where both ``d`` and ``L - d``
    lie in the window; that overlap is symmetric, so it suffices to check
    support points inside it.  Among valid candidates the one whose overlap
    holds the most support wins, ties broken by (degree, coords).
    """
    support = W.support()
    if not support:
        return None
    sign = -1 if W.n % 2 else 1
    win = W.window
    candidates = sorted({tuple(x + y for x, y in zip(s, t)) for s in support for t in support},
                        key=lambda p: (sum(p), p))
    best, best_count = None, 0
    for L in candidates:
        count = 0
        ok = True
        for s in support:
            mirror = sub(L, s)
            if mirror not in win:
                continue
            if W.entries.get(mirror, 0) != sign * W.entries[s]:
                ok = False
                break
            count += 1
        if ok and count > best_count:
            best, best_count = L, count
    return best


def is_slowly_growing(f: Callable, window: Window) -> bool:
    """``f(d) <= f(d + e_i) <= f(d) + 1`` for all ``d`` in the window and all i."""
    for d in window:
        v = f(d)
        for i in range(len(d)):
            up = d[:i] + (d[i] + 1,) + d[i + 1 :]
            w = f(up)
            if not v <= w <= v + 1:
                return False
    return True


def is_periodic(f: Callable, p: int, window: Window) -> bool:
    """``f(d + p e_i - p e_j) == f(d)`` for all ``i != j`` and ``d`` in the window."""
    if p < 1:
        raise ValueError("period must be positive")
    for d in window:
        v = f(d)
        n = len(d)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                e = list(d)
                e[i] += p
                e[j] -= p
                if f(tuple(e)) != v:
                    return False
    return True


def restrict(f: LatticeFunction, base: Sequence[int], i: int, j: int) -> LatticeFunction:
    """``(x, y) -> f(base + x e_i + y e_j)``; indices are 1-based."""
    if i == j:
        raise ValueError("restriction needs two distinct axes")
    n = f.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"axes must lie in 1..{n}")
    base = tuple(base)
    db = degree(base)

    def rule(p):
        d = list(base)
        d[i - 1] += p[0]
        d[j - 1] += p[1]
        return f.rule(tuple(d))

    shift = lambda x: None if x is None else x - db
    modular = None
    if f.offset is None and f.modular is not None:
        h = f.modular
        modular = lambda p: h(
            tuple(base[k] + (p[0] if k == i - 1 else 0) + (p[1] if k == j - 1 else 0) for k in range(n))
        )
    return LatticeFunction(
        2,
        rule,
        initial_zero_degree=shift(f.initial_zero_degree),
        eventual_degree=shift(f.eventual_degree),
        offset=None if f.offset is None else db + f.offset,
        modular=modular,
        name=f"restrict({f.name},{i},{j})",
    )


@dataclass(frozen=True)
class MatchingPermutation:
    """``pi`` on a finite range, extended by ``pi(i + r) = pi(i) - r`` when skew-periodic."""

    mapping: dict
    skew_period: Optional[int] = None

    def __call__(self, i: int) -> int:
        if i in self.mapping:
            return self.mapping[i]
        r = self.skew_period
        if r is None:
            raise KeyError(f"{i} lies outside the recorded range and no skew period is known")
        lo = min(self.mapping)
        t, i0 = divmod(i - lo, r)
        return self.mapping[lo + i0] - t * r


def extract_matching(W: WeightTable, rows: range) -> MatchingPermutation:
    """Read off ``pi`` with ``W(i, j) = 1`` iff ``j = pi(i)`` for ``i`` in ``rows``."""
    if W.n != 2:
        raise ValueError("matchings are defined for two-variable weights")
    by_row = {i: [] for i in rows}
    for (x, y), w in W.entries.items():
        if x in by_row:
            if w not in (0, 1):
                raise MatchingError(f"weight {w} at {(x, y)}: not supermodular")
            by_row[x].append(y)
    mapping = {}
    for i in rows:
        cols = by_row[i]
        if len(cols) != 1:
            raise MatchingError(f"row {i} sums to {len(cols)}, expected 1")
        mapping[i] = cols[0]
    if len(set(mapping.values())) != len(mapping):
        raise MatchingError("two rows share a column")
    skew = None
    idx = list(rows)
    for r in range(1, len(idx) // 2 + 1):
        if all(mapping[k + r] == mapping[k] - r for k in idx if k + r in mapping):
            skew = r
            break
    return MatchingPermutation(mapping, skew)
