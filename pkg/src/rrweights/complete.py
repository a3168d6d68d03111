"""Fast Baker-Norine arithmetic on the complete graph K_n.

Two coordinate systems name the Picard classes of K_n:

* the A-representative ``(a_1, ..., a_{n-2}, 0, a_n)`` with each
  ``a_j = (d_j - d_{n-1}) mod n``;
* ``<b, i>`` with ``b = (a_1, ..., a_{n-2})`` and ``i`` the degree, which
  stands for the divisor ``(b_1, ..., b_{n-2}, 0, i - sum(b))``.  In these
  coordinates the group law is ``b`` addition mod n and ``i`` addition.

The rank is ``-1 + #{i in [0, deg] : sum_j ((a_j + i) mod n) <= deg - i}``.
:func:`kn_rank` evaluates this count in O(n) by bucketing the residues
``a_j``; :func:`kn_rank_loop` is the literal loop and serves as its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from rrweights.lattice import DimensionError

# numpy is only used when every intermediate fits comfortably in int64
_NUMPY_MIN_N = 4096
_NUMPY_SAFE = 1 << 40


@dataclass(frozen=True)
class BCoord:
    """The class ``<b, i>`` of ``(b_1, ..., b_{n-2}, 0, i - sum(b))`` on K_n."""

    b: tuple
    i: int

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        n = self.n
        if any(not 0 <= x < n for x in self.b):
            raise ValueError(f"b entries must lie in 0..{n - 1}: {self.b}")

    @property
    def n(self) -> int:
        return len(self.b) + 2

    def __str__(self) -> str:
        return f"<{','.join(map(str, self.b))};{self.i}>"


def _check(n: int, d: Sequence[int]) -> None:
    if n < 2:
        raise ValueError("complete-graph routines need n >= 2")
    if len(d) != n:
        raise DimensionError(f"divisor has {len(d)} entries, expected {n}")


def to_a_rep(n: int, d: Sequence[int]) -> tuple:
    """The unique A-representative of the class of ``d``."""
    _check(n, d)
    ref = d[n - 2]
    head = [(x - ref) % n for x in d[: n - 2]]
    return tuple(head) + (0, sum(d) - sum(head))


def to_b_coord(n: int, d: Sequence[int]) -> BCoord:
    _check(n, d)
    ref = d[n - 2]
    return BCoord(tuple((x - ref) % n for x in d[: n - 2]), sum(d))


def from_b_coord(c: BCoord) -> tuple:
    return c.b + (0, c.i - sum(c.b))


def pic_add(c1: BCoord, c2: BCoord) -> BCoord:
    if c1.n != c2.n:
        raise DimensionError(f"cannot add classes of K_{c1.n} and K_{c2.n}")
    n = c1.n
    return BCoord(tuple((x + y) % n for x, y in zip(c1.b, c2.b)), c1.i + c2.i)


def pic_sub(c1: BCoord, c2: BCoord) -> BCoord:
    if c1.n != c2.n:
        raise DimensionError(f"cannot subtract classes of K_{c1.n} and K_{c2.n}")
    n = c1.n
    return BCoord(tuple((x - y) % n for x, y in zip(c1.b, c2.b)), c1.i - c2.i)


def rank_drop_indicator(a: Sequence[int]) -> int:
    """``r(a) - r(a - e_{n-1})`` for ``a`` an A-representative: 1 iff ``a_n >= 0``."""
    n = len(a)
    return 1 if sum(a[: n - 2]) <= sum(a) else 0


def double_diff_indicator(c: BCoord) -> int:
    """``(1 - t_n)(1 - t_{n-1}) r`` at ``<b, i>``: 1 iff ``sum(b) == i``."""
    return 1 if sum(c.b) == c.i else 0


def kn_rank_loop(n: int, d: Sequence[int]) -> int:
    """Rank on K_n by the direct loop over ``i = 0..deg(d)``."""
    _check(n, d)
    deg = sum(d)
    ref = d[n - 2]
    count = 0
    for i in range(deg + 1):
        if sum((x - ref + i) % n for x in d[: n - 2]) <= deg - i:
            count += 1
    return count - 1


def bucket_terms(n: int, a: Sequence[int], deg: int) -> list:
    """Per-residue contributions ``(k, g(k), count_k)`` of the bucketed rank.

    For ``i = k (mod n)`` the residue sum is ``g(k) = S + k(n-2) - n*m_k``
    where ``m_k`` counts ``a_j >= n - k``; the number of admissible
    ``i = k + n*t`` with ``t >= 0`` is ``max(0, (deg - g(k) - k) // n + 1)``.
    """
    head = a[: n - 2]
    S = sum(head)
    hist = [0] * n
    for x in head:
        hist[x] += 1
    out = []
    m = 0
    for k in range(n):
        if k:
            m += hist[n - k]
        g = S + k * (n - 2) - n * m
        out.append((k, g, max(0, (deg - g - k) // n + 1)))
    return out


def _rank_bucketed_py(n: int, head: list, deg: int) -> int:
    S = sum(head)
    hist = [0] * n
    for x in head:
        hist[x] += 1
    total = 0
    m = 0
    base = S - deg
    for k in range(n):
        if k:
            m += hist[n - k]
        # deg - g(k) - k
        slack = -base - k * (n - 1) + n * m
        if slack >= 0:
            total += slack // n + 1
    return total - 1


def _rank_bucketed_np(n: int, arr: np.ndarray, deg: int) -> int:
    ref = arr[n - 2]
    head = np.mod(arr[: n - 2] - ref, n)
    S = int(head.sum())
    hist = np.bincount(head, minlength=n)
    m = np.zeros(n, dtype=np.int64)
    m[1:] = np.cumsum(hist[::-1][: n - 1])
    k = np.arange(n, dtype=np.int64)
    slack = (deg - S) - k * (n - 1) + n * m
    ok = slack >= 0
    return int((slack[ok] // n + 1).sum()) - 1


def kn_rank(n: int, d: Sequence[int]) -> int:
    """Baker-Norine rank of ``d`` on K_n in O(n) operations."""
    if n < 2:
        raise ValueError("complete-graph routines need n >= 2")
    if isinstance(d, np.ndarray):
        if d.shape != (n,):
            raise DimensionError(f"divisor has shape {d.shape}, expected ({n},)")
        deg = int(d.sum(dtype=object)) if d.dtype == object else int(d.astype(np.int64).sum())
        if deg < 0:
            return -1
        if n >= _NUMPY_MIN_N and abs(deg) < _NUMPY_SAFE and int(np.abs(d).max()) < _NUMPY_SAFE // n:
            return _rank_bucketed_np(n, d.astype(np.int64), deg)
        d = d.tolist()
    _check(n, d)
    deg = sum(d)
    if deg < 0:
        return -1
    if n >= _NUMPY_MIN_N and abs(deg) < _NUMPY_SAFE and max(map(abs, d)) < _NUMPY_SAFE // n:
        return _rank_bucketed_np(n, np.asarray(d, dtype=np.int64), deg)
    ref = d[n - 2]
    return _rank_bucketed_py(n, [(x - ref) % n for x in d[: n - 2]], deg)


def kn_weight(n: int, d: Sequence[int]) -> int:
    """Mobius weight of ``1 + r_BN`` on K_n at ``d``."""
    c = to_b_coord(n, d)
    if any(c.b):
        return 0
    ell, rem = divmod(c.i, n)
    if rem or not 0 <= ell <= n - 2:
        return 0
    return (-1) ** ell * comb(n - 2, ell)


def weight_collapse(g: Callable[[int], int], c: BCoord) -> int:
    """``(1 - t_1)...(1 - t_{n-2}) h`` at ``<b, i>`` for ``h(<b, i>) = g(sum(b) - i)``.

    Subtracting ``e_j`` for ``j <= n-2`` maps ``<b, i>`` to
    ``<b - e_j mod n, i - 1>``, so the difference vanishes unless ``b = 0``,
    where it is ``sum_k (-1)^k C(n-2, k) g(nk - i)``.
    """
    if any(c.b):
        return 0
    n = c.n
    return sum((-1) ** k * comb(n - 2, k) * g(n * k - c.i) for k in range(n - 1))
