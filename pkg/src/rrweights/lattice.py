"""Exact arithmetic on Z^n: the partial order, shifts, Mobius inversion.

A function on the infinite lattice is a :class:`LatticeFunction`: a pure
evaluation rule plus whatever validity metadata is known about it (below
which degree it vanishes, above which degree it is ``deg + C``).  Anything
that produces a finite table needs an explicit :class:`Window`.

Python integers never wrap, so no overflow checks are needed anywhere.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

Point = tuple


class DimensionError(ValueError):
    """Raised when points or objects of different dimensions are mixed."""


class WindowIncompleteError(ValueError):
    """Raised when a computation needs table entries outside its window."""


class MissingMetadataError(ValueError):
    """Raised when an operation needs metadata a function does not declare."""


def degree(d: Sequence[int]) -> int:
    return sum(d)


def leq(d1: Sequence[int], d2: Sequence[int]) -> bool:
    """Componentwise ``d1 <= d2``."""
    if len(d1) != len(d2):
        raise DimensionError(f"dimension mismatch: {len(d1)} vs {len(d2)}")
    return all(x <= y for x, y in zip(d1, d2))


def e_indicator(n: int, I: Iterable[int] = ()) -> Point:
    """The 0/1 vector with ones on the 1-based index set ``I``."""
    out = [0] * n
    for i in I:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} out of range 1..{n}")
        out[i - 1] = 1
    return tuple(out)


def add(d1: Sequence[int], d2: Sequence[int]) -> Point:
    return tuple(x + y for x, y in zip(d1, d2))


def sub(d1: Sequence[int], d2: Sequence[int]) -> Point:
    return tuple(x - y for x, y in zip(d1, d2))


@lru_cache(maxsize=None)
def subset_offsets(n: int) -> tuple:
    """All ``(sign, e_I)`` pairs for ``I`` a subset of [n], with sign ``(-1)^|I|``."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        out.append((-1 if sum(bits) % 2 else 1, bits))
    return tuple(out)


# --------------------------------------------------------------------------
# Windows
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """A finite box ``lo <= d <= hi``, optionally cut to a degree band.

    Iteration order is lexicographic in ``(degree, coords)``.
    """

    lo: Point
    hi: Point
    min_degree: Optional[int] = None
    max_degree: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(int(x) for x in self.lo))
        object.__setattr__(self, "hi", tuple(int(x) for x in self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise DimensionError("window corners must have equal, positive dimension")
        if not leq(self.lo, self.hi):
            raise ValueError(f"window lo {self.lo} is not <= hi {self.hi}")

    @classmethod
    def box(cls, n: int, lo, hi, min_degree=None, max_degree=None) -> "Window":
        """Build a window; scalar ``lo``/``hi`` are broadcast to all ``n`` axes."""
        lo = (lo,) * n if isinstance(lo, int) else tuple(lo)
        hi = (hi,) * n if isinstance(hi, int) else tuple(hi)
        return cls(lo, hi, min_degree, max_degree)

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def degree_range(self) -> tuple:
        """Effective ``(lowest, highest)`` degree of points in the window."""
        a = degree(self.lo) if self.min_degree is None else max(self.min_degree, degree(self.lo))
        b = degree(self.hi) if self.max_degree is None else min(self.max_degree, degree(self.hi))
        return a, b

    def __contains__(self, d) -> bool:
        if len(d) != self.n:
            return False
        if not all(l <= x <= h for l, x, h in zip(self.lo, d, self.hi)):
            return False
        s = degree(d)
        if self.min_degree is not None and s < self.min_degree:
            return False
        if self.max_degree is not None and s > self.max_degree:
            return False
        return True

    def points(self) -> list:
        lo_deg, hi_deg = self.degree_range
        if lo_deg > hi_deg:
            return []
        pts = [
            p
            for p in itertools.product(*(range(l, h + 1) for l, h in zip(self.lo, self.hi)))
            if lo_deg <= sum(p) <= hi_deg
        ]
        pts.sort(key=lambda p: (sum(p), p))
        return pts

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points())

    def __len__(self) -> int:
        return len(self.points())

    def reflect(self, L: Sequence[int]) -> "Window":
        """The image of this window under ``d -> L - d``."""
        lo = sub(L, self.hi)
        hi = sub(L, self.lo)
        s = degree(L)
        mn = None if self.max_degree is None else s - self.max_degree
        mx = None if self.min_degree is None else s - self.min_degree
        return Window(lo, hi, mn, mx)

    def to_dict(self) -> dict:
        return {
            "lo": list(self.lo),
            "hi": list(self.hi),
            "min_degree": self.min_degree,
            "max_degree": self.max_degree,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Window":
        return cls(tuple(data["lo"]), tuple(data["hi"]), data.get("min_degree"), data.get("max_degree"))


# --------------------------------------------------------------------------
# Functions on Z^n
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeFunction:
    """An evaluation oracle ``Z^n -> Z`` with optional validity metadata.

    ``initial_zero_degree`` (a): value is 0 whenever ``deg(d) <= a``.
    ``eventual_degree`` (b): value equals the modular part once ``deg(d) >= b``.
    ``offset`` (C): the modular part is ``deg(d) + C`` (Riemann case).
    ``modular``: an explicit modular rule, for generalized Riemann functions.
    """

    n: int
    rule: Callable[[Point], int] = field(repr=False)
    initial_zero_degree: Optional[int] = None
    eventual_degree: Optional[int] = None
    offset: Optional[int] = None
    modular: Optional[Callable[[Point], int]] = field(default=None, repr=False)
    name: str = ""

    def __call__(self, d) -> int:
        return self.rule(tuple(d))

    def modular_part(self) -> Callable[[Point], int]:
        """The modular function this one eventually equals."""
        if self.offset is not None:
            C = self.offset
            return lambda d: degree(d) + C
        if self.modular is not None:
            return self.modular
        raise MissingMetadataError(f"{self.name or 'function'} declares neither offset nor modular rule")

    def memoized(self) -> "LatticeFunction":
        """Same function with a private evaluation cache."""
        cached = lru_cache(maxsize=None)(self.rule)
        return LatticeFunction(
            self.n,
            cached,
            self.initial_zero_degree,
            self.eventual_degree,
            self.offset,
            self.modular,
            self.name,
        )


def shift(f: LatticeFunction, i: int) -> LatticeFunction:
    """The downward shift ``g(d) = f(d - e_i)``; ``i`` is 1-based."""
    if not 1 <= i <= f.n:
        raise IndexError(f"axis {i} out of range 1..{f.n}")
    k = i - 1

    def rule(d):
        d = list(d)
        d[k] -= 1
        return f.rule(tuple(d))

    bump = lambda x: None if x is None else x + 1
    modular = None
    if f.modular is not None:
        m = f.modular
        modular = lambda d: m(tuple(x - (j == k) for j, x in enumerate(d)))
    # deg(d - e_i) + C = deg(d) + (C - 1)
    offset = None if f.offset is None else f.offset - 1
    return LatticeFunction(
        f.n,
        rule,
        bump(f.initial_zero_degree),
        bump(f.eventual_degree),
        offset,
        modular,
        f"shift({f.name},{i})",
    )


def mobius_at(f: Callable, d: Sequence[int]) -> int:
    """``sum_I (-1)^|I| f(d - e_I)`` over all subsets I of [n]."""
    d = tuple(d)
    total = 0
    for sign, bits in subset_offsets(len(d)):
        total += sign * f(tuple(x - b for x, b in zip(d, bits)))
    return total


def mobius_factored(f: Callable, d: Sequence[int]) -> int:
    """The same value computed as ``(1 - t_1) ... (1 - t_n) f`` at ``d``."""
    d = tuple(d)
    n = len(d)

    def apply(k: int, p: tuple) -> int:
        if k == n:
            return f(p)
        lower = p[:k] + (p[k] - 1,) + p[k + 1 :]
        return apply(k + 1, p) - apply(k + 1, lower)

    return apply(0, d)


def is_modular_on(h: Callable, window: Window) -> bool:
    return all(mobius_at(h, d) == 0 for d in window)


# --------------------------------------------------------------------------
# Weight tables
# --------------------------------------------------------------------------


@dataclass
class WeightTable:
    """Sparse nonzero values of a weight, complete on ``window``.

    ``zero_through``, when known, is a degree at or below which the weight
    vanishes everywhere (not just inside the window).
    """

    n: int
    entries: dict
    window: Window
    zero_through: Optional[int] = None

    def __post_init__(self):
        if self.window.n != self.n:
            raise DimensionError("window dimension does not match table")
        clean = {}
        for d, w in self.entries.items():
            d = tuple(d)
            if w == 0:
                continue
            if d not in self.window:
                raise ValueError(f"entry {d} lies outside the table window")
            clean[d] = int(w)
        self.entries = clean

    def __getitem__(self, d) -> int:
        d = tuple(d)
        if d not in self.window:
            raise WindowIncompleteError(f"{d} is outside the table window")
        return self.entries.get(d, 0)

    def get(self, d, default: int = 0) -> int:
        return self.entries.get(tuple(d), default)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightTable):
            return NotImplemented
        return self.n == other.n and self.window == other.window and self.entries == other.entries

    def support(self) -> list:
        return sorted(self.entries, key=lambda p: (sum(p), p))

    def scaled(self, k: int) -> "WeightTable":
        return WeightTable(self.n, {d: k * w for d, w in self.entries.items()}, self.window, self.zero_through)

    def restricted(self, window: Window) -> "WeightTable":
        """Entries inside ``window``; the caller vouches that it lies inside ours."""
        return WeightTable(
            self.n,
            {d: w for d, w in self.entries.items() if d in window},
            window,
            self.zero_through,
        )

    def to_json(self) -> str:
        data = {
            "n": self.n,
            "window": self.window.to_dict(),
            "entries": [{"d": list(d), "w": self.entries[d]} for d in self.support()],
        }
        if self.zero_through is not None:
            data["zero_through"] = self.zero_through
        return json.dumps(data, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "WeightTable":
        data = json.loads(text)
        entries = {tuple(e["d"]): e["w"] for e in data["entries"]}
        return cls(data["n"], entries, Window.from_dict(data["window"]), data.get("zero_through"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"d_{i}" for i in range(1, self.n + 1)] + ["w"])
        for d in self.support():
            writer.writerow(list(d) + [self.entries[d]])
        return buf.getvalue()


def weight_table(f: LatticeFunction, window: Window) -> WeightTable:
    """All nonzero values of ``m f`` inside ``window``."""
    a = f.initial_zero_degree
    if a is None:
        raise MissingMetadataError("weight_table needs an initially-zero function (initial_zero_degree)")
    if window.degree_range[0] > a + 1 and window.degree_range[0] <= window.degree_range[1]:
        raise WindowIncompleteError(
            f"window degree band starts at {window.degree_range[0]}, above the initial-zero bound {a}"
        )
    cache = {}

    def value(p):
        if sum(p) <= a:
            return 0
        v = cache.get(p)
        if v is None:
            v = cache[p] = f.rule(p)
        return v

    offsets = subset_offsets(window.n)
    entries = {}
    for d in window:
        w = 0
        for sign, bits in offsets:
            w += sign * value(tuple(x - b for x, b in zip(d, bits)))
        if w:
            entries[d] = w
    return WeightTable(window.n, entries, window, zero_through=a)


def accumulate_at(W: WeightTable, d: Sequence[int]) -> int:
    """``sum_{d' <= d} W(d')``, refusing if the down-cone leaves the window."""
    d = tuple(d)
    if len(d) != W.n:
        raise DimensionError(f"point of dimension {len(d)} for table of dimension {W.n}")
    a = W.zero_through
    if a is None:
        raise MissingMetadataError("accumulate_at needs a table with a known initial-zero degree")
    s = degree(d)
    if s > a:
        # every d' <= d with deg(d') > a has d'_i >= d_i - (s - a - 1)
        slack = s - a - 1
        lo_needed = tuple(x - slack for x in d)
        win = W.window
        band_lo, band_hi = win.min_degree, win.max_degree
        ok = leq(win.lo, lo_needed) and leq(d, win.hi)
        ok = ok and (band_lo is None or band_lo <= a + 1) and (band_hi is None or band_hi >= s)
        if not ok:
            raise WindowIncompleteError(f"down-cone of {d} is not covered by the table window")
    return sum(w for p, w in W.entries.items() if leq(p, d))


# --------------------------------------------------------------------------
# Probing for the Riemann shape
# --------------------------------------------------------------------------


@dataclass
class ProbeResult:
    ok: bool
    initial_zero_degree: Optional[int] = None
    eventual_degree: Optional[int] = None
    offset: Optional[int] = None
    violation: Optional[Point] = None
    reason: str = ""


def probe_riemann(f: Callable, window: Window) -> ProbeResult:
    """Empirically find ``(a, b, C)`` with f = 0 below a and ``deg + C`` above b.

    The window must span at least two degrees where ``f`` is already linear,
    otherwise the offset cannot be confirmed.
    """
    layers = defaultdict(list)
    for d in window:
        layers[sum(d)].append((d, f(d)))
    if not layers:
        return ProbeResult(False, reason="empty probe window")
    degs = sorted(layers)

    a = None
    for t in degs:
        bad = next((d for d, v in layers[t] if v != 0), None)
        if bad is not None:
            if a is None:
                return ProbeResult(False, violation=bad, reason=f"nonzero at lowest probed degree {t}")
            break
        a = t

    top = degs[-1]
    C = layers[top][0][1] - top
    bad = next((d for d, v in layers[top] if v - top != C), None)
    if bad is not None:
        return ProbeResult(False, a, violation=bad, reason=f"not of the form deg+C at top degree {top}")
    b = top
    for t in reversed(degs[:-1]):
        bad = next((d for d, v in layers[t] if v - t != C), None)
        if bad is not None:
            break
        b = t
    if b == top:
        return ProbeResult(
            False, a, violation=bad, reason="f - deg is not constant across the two highest probed degrees"
        )
    return ProbeResult(True, a, b, C)
