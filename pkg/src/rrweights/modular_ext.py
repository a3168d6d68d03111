"""Unique modular extensions from fundamental domains.

A function given on a fundamental domain ``D`` extends uniquely to a
function ``h`` on Z^n with ``m h = 0``.  Three mechanisms are provided:

* the closed form for the coordinate domain (points with some ``d_i = 0``);
* a two-way degree sweep for the strip ``a <= deg(d) <= a + n - 1``;
* a generic engine driven by a cubism, i.e. a positive rank on unit cubes
  ``Cube(t) = {t - 1 <= c <= t}`` such that, processing ranks in order,
  every cube meets exactly one not-yet-known point.  That point's value
  is forced by ``sum_{c in Cube(t)} (-1)^{deg(t - c)} h(c) = 0``.

Extension objects memoize their own values only and evaluate with an
explicit stack, raising :class:`ExtensionBudgetError` when the number of
touched points exceeds a configurable budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from rrweights.lattice import Window, degree, subset_offsets

DEFAULT_BUDGET = 2_000_000


class ExtensionBudgetError(RuntimeError):
    """Evaluation touched more points than the extension's budget allows."""


class CubismError(ValueError):
    """The rank rule is not a cubism near the point being evaluated."""

    def __init__(self, message: str, cube: Optional[tuple] = None):
        super().__init__(message)
        self.cube = cube


# --------------------------------------------------------------------------
# Domains
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoordinateAxes:
    """Points with at least one zero coordinate."""

    n: int

    def contains(self, d) -> bool:
        return any(x == 0 for x in d)

    def rank(self, t) -> int:
        return 1 + sum(max(x - 1, -x) for x in t)


@dataclass(frozen=True)
class Strip:
    """The degree band ``a <= deg(d) <= a + n - 1``."""

    n: int
    a: int

    def contains(self, d) -> bool:
        return self.a <= sum(d) <= self.a + self.n - 1

    def rank(self, t) -> int:
        s = sum(t)
        top = self.a + self.n
        # above the band the new point is t itself, below it is t - 1
        return s - top + 1 if s >= top else top - s


@dataclass(frozen=True)
class CustomDomain:
    """A domain given by a membership test and a cube-rank rule."""

    n: int
    membership: Callable = field(repr=False)
    rank_rule: Callable = field(repr=False)
    name: str = "custom"

    def contains(self, d) -> bool:
        return bool(self.membership(tuple(d)))

    def rank(self, t) -> int:
        return self.rank_rule(tuple(t))


def _fill_time(p) -> int:
    """Stage at which a point enters the staged extension of :func:`strange_domain`."""
    x, y = p
    s = x + y
    if s in (-1, 1) or p == (0, 0):
        return 0
    if s == 0:
        return abs(x)
    if s < 0:
        return _fill_time((-x, -y))
    return (s - 1) + max(abs(j) for j in range(x - s + 1, x))


def _strange_rank(t) -> int:
    x, y = t
    s = x + y
    if s == 1:
        return max(x, 1 - x)
    if s >= 2:
        return _fill_time(t)
    return _fill_time((x - 1, y - 1))


def strange_domain() -> CustomDomain:
    """``{(0,0)}`` together with the two lines of degree 1 and -1 in Z^2.

    The cube rank follows the staged fill: the degree-0 line grows outward
    from the origin one point per stage in each direction, and each line
    of degree ``s`` beyond it fills from its middle once its neighbours
    toward the domain are known.
    """
    return CustomDomain(
        2,
        lambda d: d == (0, 0) or sum(d) in (1, -1),
        _strange_rank,
        "strange",
    )


# --------------------------------------------------------------------------
# Coordinate domain: closed form
# --------------------------------------------------------------------------


def _project(d, I) -> tuple:
    return tuple(x if k in I else 0 for k, x in enumerate(d))


def coord_extend(f: Callable, d: Sequence[int]) -> int:
    """``sum_{I != [n]} (-1)^{n-1-|I|} f(d_I)`` with ``d_I`` zero off ``I``."""
    d = tuple(d)
    n = len(d)
    total = 0
    for size in range(n):
        sign = -1 if (n - 1 - size) % 2 else 1
        for I in itertools.combinations(range(n), size):
            total += sign * f(_project(d, set(I)))
    return total


def coord_decompose(f: Callable, n: int) -> list:
    """``h_1..h_n`` with ``h_i`` ignoring coordinate ``i`` and summing to the extension.

    ``h_i`` collects the subsets ``I`` whose smallest missing index is ``i``.
    """

    def make(i):
        rest = range(i + 1, n)
        groups = []
        for size in range(n - i):
            for extra in itertools.combinations(rest, size):
                I = set(range(i)) | set(extra)
                groups.append((-1 if (n - 1 - len(I)) % 2 else 1, frozenset(I)))

        def h(d):
            d = tuple(d)
            return sum(sign * f(_project(d, I)) for sign, I in groups)

        return h

    return [make(i) for i in range(n)]


# --------------------------------------------------------------------------
# Staged evaluation shared by the strip sweep and the cubism engine
# --------------------------------------------------------------------------


class _Extension:
    def __init__(self, domain, f: Callable, budget: int = DEFAULT_BUDGET):
        self.domain = domain
        self.f = f
        self.budget = budget
        self._memo: dict = {}

    @property
    def n(self) -> int:
        return self.domain.n

    def _terms(self, c: tuple) -> list:
        """``(coef, point)`` pairs with ``h(c) = sum coef * h(point)``."""
        raise NotImplementedError

    def __call__(self, d) -> int:
        d = tuple(d)
        if len(d) != self.n:
            raise ValueError(f"point has {len(d)} coordinates, extension lives in Z^{self.n}")
        memo = self._memo
        if d in memo:
            return memo[d]
        contains = self.domain.contains
        pending: dict = {}
        stack = [d]
        while stack:
            c = stack[-1]
            if c in memo:
                stack.pop()
                continue
            if contains(c):
                memo[c] = self.f(c)
                stack.pop()
                continue
            terms = pending.get(c)
            if terms is None:
                terms = pending[c] = self._terms(c)
            missing = [p for _, p in terms if p not in memo]
            if missing:
                stack.extend(missing)
                if len(memo) + len(pending) > self.budget:
                    raise ExtensionBudgetError(
                        f"extension touched more than {self.budget} points while evaluating {d}"
                    )
                continue
            memo[c] = sum(k * memo[p] for k, p in terms)
            del pending[c]
            stack.pop()
        return memo[d]


class StripExtension(_Extension):
    """Modular extension of a function on the strip ``a <= deg <= a + n - 1``."""

    def __init__(self, f: Callable, n: int, a: int, budget: int = DEFAULT_BUDGET):
        super().__init__(Strip(n, a), f, budget)

    def _terms(self, c):
        n = self.n
        if sum(c) > self.domain.a + n - 1:
            # solve the cube with top c for h(c)
            return [
                (-sign, tuple(x - b for x, b in zip(c, bits)))
                for sign, bits in subset_offsets(n)
                if any(bits)
            ]
        # solve the cube with top c + 1 for h(c)
        top = tuple(x + 1 for x in c)
        lead = -1 if (n + 1) % 2 else 1
        return [
            (lead * sign, tuple(x - b for x, b in zip(top, bits)))
            for sign, bits in subset_offsets(n)
            if not all(bits)
        ]


def strip_extend(f: Callable, a: int, d: Sequence[int]) -> int:
    """One-shot evaluation of the strip extension at ``d``."""
    return StripExtension(f, len(d), a)(d)


class CubismExtension(_Extension):
    """Modular extension driven by the domain's cube-rank rule."""

    def intro(self, c: tuple) -> tuple:
        """``(rank, top)`` of the cube that introduces ``c``; ``(0, None)`` on the domain."""
        if self.domain.contains(c):
            return 0, None
        best, tops = None, []
        for _, bits in subset_offsets(self.n):
            t = tuple(x + b for x, b in zip(c, bits))
            r = self.domain.rank(t)
            if r < 1:
                raise CubismError(f"cube with top {t} has non-positive rank {r}", t)
            if best is None or r < best:
                best, tops = r, [t]
            elif r == best:
                tops.append(t)
        if len(tops) != 1:
            raise CubismError(
                f"{c} is new to {len(tops)} cubes of rank {best}: tops {tops}", tops[0]
            )
        return best, tops[0]

    def _terms(self, c):
        m, t = self.intro(c)
        own = -1 if (degree(t) - degree(c)) % 2 else 1
        terms = []
        for _, bits in subset_offsets(self.n):
            p = tuple(x - b for x, b in zip(t, bits))
            if p == c:
                continue
            r, _ = self.intro(p)
            if r >= m:
                raise CubismError(
                    f"cube with top {t} (rank {m}) meets {c} and {p}, both unknown before rank {m}", t
                )
            sign = -1 if sum(bits) % 2 else 1
            terms.append((-sign * own, p))
        return terms

    def materialize(self, points: Iterable, tie_key: Optional[Callable] = None) -> dict:
        """Stage-by-stage values on ``points`` and everything they depend on.

        Points are filled in ascending introduction rank, ties broken by
        ``tie_key`` (default: degree then coordinates).  Values are
        computed into a fresh table, independent of the lazy cache.
        """
        tie_key = tie_key or (lambda p: (sum(p), p))
        need, seen = [], set()
        stack = [tuple(p) for p in points]
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            need.append(c)
            if not self.domain.contains(c):
                stack.extend(p for _, p in self._terms(c))
            if len(seen) > self.budget:
                raise ExtensionBudgetError(f"materialization touched more than {self.budget} points")
        ranked = sorted(need, key=lambda p: (self.intro(p)[0], tie_key(p)))
        table = {}
        for c in ranked:
            if self.domain.contains(c):
                table[c] = self.f(c)
            else:
                table[c] = sum(k * table[p] for k, p in self._terms(c))
        return table


def cubism_extend(domain, f: Callable, d: Sequence[int]) -> int:
    return CubismExtension(domain, f)(tuple(d))


# --------------------------------------------------------------------------
# Cubism verification
# --------------------------------------------------------------------------


@dataclass
class CubismReport:
    ok: bool
    cubes_checked: int = 0
    violation: str = ""
    cube: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_cubism(domain, region: Window) -> CubismReport:
    """Check the cubism conditions on every cube meeting ``region``.

    A point's introduction rank is 0 on the domain and otherwise the least
    rank of a cube containing it.  Each rank-m cube must contain exactly one
    point of introduction rank m, and no such point may lie in two rank-m
    cubes.
    """
    n = domain.n
    offsets = [bits for _, bits in subset_offsets(n)]
    ranks: dict = {}

    def rank(t):
        r = ranks.get(t)
        if r is None:
            r = ranks[t] = domain.rank(t)
        return r

    def intro(p):
        if domain.contains(p):
            return 0
        return min(rank(tuple(x + b for x, b in zip(p, bits))) for bits in offsets)

    intros: dict = {}
    lo = region.lo
    hi = tuple(x + 1 for x in region.hi)
    checked = 0
    for t in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        cube = [tuple(x - b for x, b in zip(t, bits)) for bits in offsets]
        if not any(p in region for p in cube):
            continue
        checked += 1
        m = rank(t)
        if m < 1:
            return CubismReport(False, checked, f"cube with top {t} has non-positive rank {m}", t)
        fresh = []
        for p in cube:
            if p not in intros:
                intros[p] = intro(p)
            if intros[p] == m:
                fresh.append(p)
        if len(fresh) != 1:
            return CubismReport(
                False, checked, f"cube with top {t} (rank {m}) adds {len(fresh)} new points {fresh}", t
            )
        p = fresh[0]
        others = [
            s for s in (tuple(x + b for x, b in zip(p, bits)) for bits in offsets) if s != t and rank(s) == m
        ]
        if others:
            return CubismReport(
                False, checked, f"cubes with tops {t} and {others[0]} of rank {m} share new point {p}", t
            )
    return CubismReport(True, checked)
