"""Baker-Norine theory on connected loopless multigraphs.

Divisor classes are canonicalized by their q-reduced representative with
q the last vertex.  Reduction runs in two phases: non-q vertices in debt
borrow (in batches) until only q may be negative, then Dhar's burning
algorithm finds a legal set to fire, again in batches, until every vertex
burns.  The rank recursion is memoized per graph on reduced forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from rrweights.lattice import DimensionError, LatticeFunction


class GraphError(ValueError):
    """Invalid graph input: loops, asymmetry, negative multiplicities, disconnection."""


@dataclass(frozen=True)
class Multigraph:
    """Multiplicity matrix of a connected loopless multigraph on v_1..v_n."""

    mult: tuple
    name: str = ""

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.mult)
        object.__setattr__(self, "mult", m)
        n = len(m)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        for i, row in enumerate(m):
            if len(row) != n:
                raise GraphError(f"row {i + 1} has length {len(row)}, expected {n}")
            if row[i] != 0:
                raise GraphError(f"self-loop at vertex {i + 1} (edge {i + 1}-{i + 1})")
            for j, x in enumerate(row):
                if x < 0:
                    raise GraphError(f"negative multiplicity on edge {i + 1}-{j + 1}")
                if m[j][i] != x:
                    raise GraphError(f"asymmetric multiplicity on edge {i + 1}-{j + 1}")
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in range(n):
                if m[u][v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise GraphError(
                f"graph is disconnected: vertices {[v + 1 for v in missing]} are not reachable from vertex 1"
            )

    # -- constructors ------------------------------------------------------

    @classmethod
    def complete(cls, n: int, m: int = 1) -> "Multigraph":
        if n < 1:
            raise GraphError("complete graph needs n >= 1")
        return cls(tuple(tuple(0 if i == j else m for j in range(n)) for i in range(n)), f"K_{n}")

    @classmethod
    def dipole(cls, r: int) -> "Multigraph":
        """Two vertices joined by ``r`` parallel edges."""
        if r < 1:
            raise GraphError("dipole needs at least one edge")
        return cls(((0, r), (r, 0)), f"dipole_{r}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], name: str = "") -> "Multigraph":
        """Build from 1-based ``(u, v, multiplicity)`` triples; repeats accumulate."""
        m = [[0] * n for _ in range(n)]
        for u, v, k in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"edge {u}-{v} references a vertex outside 1..{n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u} (edge {u}-{v})")
            if k < 1:
                raise GraphError(f"edge {u}-{v} has multiplicity {k} < 1")
            m[u - 1][v - 1] += k
            m[v - 1][u - 1] += k
        return cls(tuple(map(tuple, m)), name)

    @classmethod
    def parse(cls, text: str, name: str = "") -> "Multigraph":
        """Parse the ``n <count>`` / ``u v m`` edge-list format."""
        n = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if n is None:
                if len(parts) != 2 or parts[0] != "n":
                    raise GraphError(f"line {lineno}: expected 'n <count>', got {line!r}")
                n = int(parts[1])
                continue
            if len(parts) != 3:
                raise GraphError(f"line {lineno}: expected 'u v m', got {line!r}")
            try:
                edges.append(tuple(int(p) for p in parts))
            except ValueError:
                raise GraphError(f"line {lineno}: non-integer field in {line!r}") from None
        if n is None:
            raise GraphError("missing 'n <count>' header")
        return cls.from_edges(n, edges, name)

    # -- invariants --------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.mult)

    @cached_property
    def degrees(self) -> tuple:
        return tuple(sum(row) for row in self.mult)

    @cached_property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    @cached_property
    def neighbors(self) -> tuple:
        return tuple(tuple((j, x) for j, x in enumerate(row) if x) for row in self.mult)

    @cached_property
    def _rank_memo(self) -> dict:
        return {}

    def __repr__(self) -> str:
        return f"Multigraph({self.name or self.mult})"


def laplacian(G: Multigraph) -> list:
    """``D - A`` as a list of integer rows."""
    return [[G.degrees[i] if i == j else -G.mult[i][j] for j in range(G.n)] for i in range(G.n)]


def genus(G: Multigraph) -> int:
    return 1 + G.num_edges - G.n


def canonical_divisor(G: Multigraph) -> tuple:
    return tuple(k - 2 for k in G.degrees)


def _check_dim(G: Multigraph, d) -> list:
    if len(d) != G.n:
        raise DimensionError(f"divisor has {len(d)} entries, graph has {G.n} vertices")
    return [int(x) for x in d]


def _fire(G: Multigraph, d: list, S: Iterable[int], k: int) -> None:
    """Fire every vertex of ``S`` ``k`` times (negative ``k`` borrows)."""
    S = set(S)
    for v in S:
        for u, m in G.neighbors[v]:
            if u not in S:
                d[v] -= k * m
                d[u] += k * m


def _unburnt(G: Multigraph, d: Sequence[int]) -> list:
    """Dhar's burning from q; returns the vertices that never catch fire."""
    q = G.n - 1
    burnt = [False] * G.n
    burnt[q] = True
    heat = [0] * G.n
    frontier = [q]
    while frontier:
        nxt = []
        for u in frontier:
            for v, m in G.neighbors[u]:
                if not burnt[v]:
                    heat[v] += m
                    if heat[v] > d[v]:
                        burnt[v] = True
                        nxt.append(v)
        frontier = nxt
    return [v for v in range(G.n) if not burnt[v]]


def is_reduced(G: Multigraph, d: Sequence[int]) -> bool:
    """True iff ``d`` is q-reduced for q = v_n."""
    if any(x < 0 for x in d[:-1]):
        return False
    return not _unburnt(G, d)


def q_reduce(G: Multigraph, d: Sequence[int]) -> tuple:
    """The q-reduced divisor equivalent to ``d`` (q = last vertex)."""
    d = _check_dim(G, d)
    n = G.n
    q = n - 1
    if n == 1:
        return tuple(d)
    # phase 1: clear debt off q
    while True:
        debtors = [v for v in range(q) if d[v] < 0]
        if not debtors:
            break
        for v in debtors:
            if d[v] < 0:
                k = -(d[v] // G.degrees[v])  # ceil(-d_v / deg v)
                _fire(G, d, (v,), -k)
    # phase 2: Dhar, firing the unburnt set as many times as it stays legal
    while True:
        S = _unburnt(G, d)
        if not S:
            return tuple(d)
        Sset = set(S)
        k = None
        for v in S:
            out = sum(m for u, m in G.neighbors[v] if u not in Sset)
            if out:
                t = d[v] // out
                k = t if k is None else min(k, t)
        _fire(G, d, S, k)


def is_equivalent(G: Multigraph, d1, d2) -> bool:
    if sum(d1) != sum(d2):
        return False
    return q_reduce(G, d1) == q_reduce(G, d2)


def is_winnable(G: Multigraph, d) -> bool:
    if sum(d) < 0:
        return False
    return q_reduce(G, d)[-1] >= 0


def bn_rank(G: Multigraph, d) -> int:
    """Baker-Norine rank: -1 if unwinnable, else 1 + min_i rank(d - e_i)."""
    d = _check_dim(G, d)
    s = sum(d)
    if s < 0:
        return -1
    if s > 4 * G.num_edges:
        return s - genus(G)
    return _rank_reduced(G, q_reduce(G, d))


def _rank_reduced(G: Multigraph, rho: tuple) -> int:
    memo = G._rank_memo
    hit = memo.get(rho)
    if hit is not None:
        return hit
    if rho[-1] < 0:
        memo[rho] = -1
        return -1
    if sum(rho) == 0:
        # the zero divisor is the only effective class of degree 0 reduced here
        memo[rho] = 0
        return 0
    best = None
    for i in range(G.n):
        lower = list(rho)
        lower[i] -= 1
        r = _rank_reduced(G, q_reduce(G, lower))
        if best is None or r < best:
            best = r
            if best < 0:
                break
    memo[rho] = 1 + best
    return 1 + best


def rank_function(G: Multigraph) -> LatticeFunction:
    """``f = 1 + r_BN`` as a Riemann function with offset ``1 - g``."""
    g = genus(G)
    return LatticeFunction(
        G.n,
        lambda d: 1 + bn_rank(G, d),
        initial_zero_degree=-1,
        eventual_degree=2 * G.num_edges - 2 * G.n + 1,
        offset=1 - g,
        name=f"1+r_BN({G.name or 'G'})",
    )


def check_riemann_roch(G: Multigraph, d) -> bool:
    """``r(d) - r(K - d) == deg(d) + 1 - g``."""
    d = _check_dim(G, d)
    K = canonical_divisor(G)
    dual = [k - x for k, x in zip(K, d)]
    return bn_rank(G, d) - bn_rank(G, dual) == sum(d) + 1 - genus(G)


def pic_representatives(G: Multigraph, i: int) -> list:
    """All q-reduced divisors of degree ``i``, one per class."""
    q = G.n - 1
    ranges = [range(G.degrees[j]) for j in range(q)]
    out = []
    for head in itertools.product(*ranges):
        d = head + (i - sum(head),)
        if not _unburnt(G, d):
            out.append(d)
    return out
