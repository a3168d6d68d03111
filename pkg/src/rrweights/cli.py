"""Command-line interface: ``rrweights <command> ...``.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from rrweights.complete import BCoord, double_diff_indicator, kn_rank, kn_weight
from rrweights.graphs import (
    GraphError,
    Multigraph,
    bn_rank,
    canonical_divisor,
    is_equivalent,
    rank_function,
)
from rrweights.lattice import DimensionError, WeightTable, Window, weight_table
from rrweights.modular_ext import (
    CoordinateAxes,
    ExtensionBudgetError,
    StripExtension,
    coord_extend,
)
from rrweights.riemann import (
    check_double_dual,
    check_dual_weight_identity,
    dual_function,
    find_self_duality,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _sizes(text: str) -> list:
    try:
        return [int(float(x)) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated sizes, got {text!r}") from None


# --------------------------------------------------------------------------
# shared option groups
# --------------------------------------------------------------------------


def _add_source(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph", type=Path, help="edge-list file ('n <count>' then 'u v m' lines)")
    g.add_argument("--complete", type=int, metavar="N", help="complete graph K_N")
    g.add_argument("--dipole", type=int, metavar="R", help="two vertices joined by R edges")


def _add_window(p):
    p.add_argument("--lo", help="box lower corner (one integer or a comma list); default -1")
    p.add_argument("--hi", help="box upper corner; default K + 2 (the vertex degrees for canonical K)")
    p.add_argument("--min-degree", type=int, help="default -1")
    p.add_argument("--max-degree", type=int, help="default deg(K) + n + 1")


def _load_graph(args) -> Multigraph:
    if args.graph is not None:
        try:
            text = args.graph.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read graph file: {exc}") from None
        return Multigraph.parse(text, args.graph.stem)
    if args.complete is not None:
        return Multigraph.complete(args.complete)
    return Multigraph.dipole(args.dipole)


def _corner(text, n, default) -> tuple:
    if text is None:
        return tuple(default)
    vals = _ints(text)
    if len(vals) == 1:
        return vals * n
    if len(vals) != n:
        raise UsageError(f"window corner has {len(vals)} entries, expected 1 or {n}")
    return vals


def _window(args, n: int, K) -> Window:
    lo = _corner(args.lo, n, (-1,) * n)
    hi = _corner(args.hi, n, tuple(k + 2 for k in K))
    mn = -1 if args.min_degree is None else args.min_degree
    mx = sum(K) + n + 1 if args.max_degree is None else args.max_degree
    try:
        return Window(lo, hi, mn, mx)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _serialize(W: WeightTable, fmt: str) -> str:
    return W.to_json() if fmt == "json" else W.to_csv()


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_rank(args) -> int:
    G = _load_graph(args)
    d = _ints(args.divisor)
    if len(d) != G.n:
        raise UsageError(f"divisor has {len(d)} entries, graph has {G.n} vertices")
    if args.complete is not None:
        r = kn_rank(G.n, d)
        if args.verify:
            slow = bn_rank(G, d)
            if slow != r:
                print(f"verification failed: fast path {r}, generic engine {slow}", file=sys.stderr)
                return EXIT_VERIFY
    else:
        r = bn_rank(G, d)
    print(r)
    return EXIT_OK


def cmd_weights(args) -> int:
    G = _load_graph(args)
    K = canonical_divisor(G)
    win = _window(args, G.n, K)
    lo_deg, hi_deg = win.degree_range
    need_hi = 2 * G.num_edges - G.n
    if lo_deg <= hi_deg and (lo_deg > 0 or hi_deg < need_hi):
        print(
            f"warning: degree band [{lo_deg},{hi_deg}] does not cover the support band [0,{need_hi}]",
            file=sys.stderr,
        )
    if lo_deg > 0 and lo_deg <= hi_deg:
        raise UsageError("the degree band must start at or below 0 (the rank is -1 below degree 0)")
    W = weight_table(rank_function(G), win)
    if args.complete is not None:
        closed = WeightTable(G.n, {d: kn_weight(G.n, d) for d in win}, win, W.zero_through)
        if closed != W:
            print("verification failed: closed-form K_n weights differ from the generic table", file=sys.stderr)
            return EXIT_VERIFY
    _write(_serialize(W, args.format), args.output)
    return EXIT_OK


def figure1_text(n: int = 4) -> str:
    """Tables of ``(1 - t_n)(1 - t_{n-1}) r`` at ``<b, i>`` for ``i = 0..(n-2)(n-1)``.

    Rows index ``b_1`` and columns ``b_2``; for ``n >= 5`` each table is
    split further by the remaining ``b`` entries.
    """
    if n < 3:
        raise UsageError("figure1 needs n >= 3")
    lines = []
    rest_ranges = [range(n)] * max(0, n - 4)
    for i in range((n - 2) * (n - 1) + 1):
        lines.append(f"i={i}")
        for rest in np.ndindex(*(len(r) for r in rest_ranges)) if rest_ranges else [()]:
            if rest:
                lines.append("b_3..=" + ",".join(map(str, rest)))
            if n == 3:
                lines.append(" ".join(str(double_diff_indicator(BCoord((b1,), i))) for b1 in range(n)))
                continue
            for b1 in range(n):
                row = (double_diff_indicator(BCoord((b1, b2) + tuple(rest), i)) for b2 in range(n))
                lines.append(" ".join(map(str, row)))
        lines.append("")
    return "\n".join(lines)


def cmd_figure1(args) -> int:
    _write(figure1_text(args.n), args.output)
    return EXIT_OK


def cmd_check_duality(args) -> int:
    G = _load_graph(args)
    n = G.n
    K = canonical_divisor(G) if args.K is None else _ints(args.K)
    if len(K) != n:
        raise UsageError(f"K has {len(K)} entries, graph has {n} vertices")
    win = _window(args, n, K)
    f = rank_function(G)
    dual = None
    if args.fault_inject is not None:
        pts = win.points()
        if not pts:
            raise UsageError("cannot inject a fault into an empty window")
        target = pts[len(pts) // 2] if args.fault_inject == "" else _ints(args.fault_inject)
        honest = dual_function(f, K)
        dual = lambda d: honest(d) + (1 if tuple(d) == tuple(target) else 0)
    reports = [check_dual_weight_identity(f, K, win, dual=dual), check_double_dual(f, K, win)]
    # self-duality is a property of the weight itself: compare with canonical K + 1
    canon = canonical_divisor(G)
    L_expected = tuple(k + 1 for k in canon)
    sd_win = _window(args, n, canon)
    W = weight_table(f, sd_win)
    if dual is not None:
        # the table audited for self-duality carries the same fault
        W = WeightTable(n, {d: W.get(d) + (d == tuple(target)) for d in sd_win}, sd_win, W.zero_through)
    L = find_self_duality(W)
    self_dual = {
        "identity": "self-duality",
        "window": sd_win.to_dict(),
        "holds": L is not None and is_equivalent(G, L, L_expected),
        "first_violation": None,
        "L": None if L is None else list(L),
    }
    out = [r.to_dict() for r in reports] + [self_dual]
    _write(json.dumps(out, indent=1), args.output)
    return EXIT_OK if all(r["holds"] for r in out) else EXIT_VERIFY


def bench(sizes, trials: int, seed: int) -> list:
    """Mean seconds per ``kn_rank`` call for each size, on seeded random divisors."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        divisors = [rng.integers(-n, n + 1, size=n).tolist() for _ in range(trials)]
        kn_rank(n, divisors[0])  # warm-up
        t0 = time.perf_counter()
        for d in divisors:
            kn_rank(n, d)
        rows.append((n, (time.perf_counter() - t0) / trials))
    return rows


def cmd_bench(args) -> int:
    sizes = sorted(set(_sizes(args.sizes)))
    if not sizes or sizes[0] < 2:
        raise UsageError("sizes must be integers >= 2")
    top = sizes[-1]
    half = max(2, top // 2)
    rows = bench(sorted(set(sizes) | {half}), args.trials, args.seed)
    times = dict(rows)
    ratio = times[top] / times[half]
    print(f"# bench-kn seed={args.seed} trials={args.trials}")
    print("n\tmean_seconds")
    for n, t in rows:
        print(f"{n}\t{t:.6f}")
    print(f"# doubling ratio t({top})/t({half}) = {ratio:.3f}")
    if ratio >= 3:
        print("verification failed: doubling ratio >= 3", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_rank_kn(args) -> int:
    d = _ints(args.divisor)
    if len(d) != args.n:
        raise UsageError(f"divisor has {len(d)} entries, expected {args.n}")
    print(kn_rank(args.n, d))
    return EXIT_OK


def cmd_weights_kn(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("n must be >= 2")
    lo = _corner(args.lo, n, (-1,) * n)
    hi = _corner(args.hi, n, (n - 1,) * n)
    win = Window(lo, hi, args.min_degree if args.min_degree is not None else -1, args.max_degree)
    W = WeightTable(n, {d: kn_weight(n, d) for d in win}, win, -1)
    _write(_serialize(W, args.format), args.output)
    return EXIT_OK


def _load_values(path: Path, n: int) -> dict:
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read values file: {exc}") from None
    if isinstance(data, dict):
        data = data.get("values", data.get("entries"))
    if not isinstance(data, list):
        raise UsageError("values file must hold a list of (point, value) pairs")
    out = {}
    for item in data:
        if isinstance(item, dict):
            d, v = item.get("d"), item.get("v", item.get("w"))
        else:
            d, v = item
        d = tuple(int(x) for x in d)
        if len(d) != n:
            raise UsageError(f"point {list(d)} has {len(d)} coordinates, expected {n}")
        out[d] = int(v)
    return out


def cmd_extend(args) -> int:
    n = args.n
    d = _ints(args.eval)
    if len(d) != n:
        raise UsageError(f"evaluation point has {len(d)} entries, expected {n}")
    values = _load_values(args.input, n)
    missing = []

    def probe(p):
        if p not in values:
            missing.append(p)
            return 0
        return values[p]

    if args.mode == "coord":
        domain = CoordinateAxes(n)
        bad = [p for p in values if not domain.contains(p)]
        run = lambda f: coord_extend(f, d)
    else:
        if args.a is None:
            raise UsageError("--mode strip needs --a")
        bad = [p for p in values if not args.a <= sum(p) <= args.a + n - 1]
        run = lambda f: StripExtension(f, n, args.a, budget=args.budget)(d)
    if bad:
        raise UsageError(f"input point {list(bad[0])} lies outside the domain")
    run(probe)
    if missing:
        first = min(missing, key=lambda p: (sum(p), p))
        raise UsageError(f"input is missing domain point {list(first)}")
    print(run(values.__getitem__))
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rrweights", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("rank", help="Baker-Norine rank of a divisor")
    _add_source(s)
    s.add_argument("--divisor", required=True)
    s.add_argument("--verify", action="store_true", help="cross-check the K_n fast path")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("weights", help="weight table of 1 + rank")
    _add_source(s)
    _add_window(s)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--output")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("figure1", help="double-difference tables for K_n")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--output")
    s.set_defaults(func=cmd_figure1)

    s = sub.add_parser("check-duality", help="audit duality identities")
    _add_source(s)
    _add_window(s)
    s.add_argument("--K", help="comma list; default canonical divisor")
    s.add_argument(
        "--fault-inject",
        nargs="?",
        const="",
        metavar="POINT",
        help="add 1 to the dual (and the weight table) at POINT, default mid-window",
    )
    s.add_argument("--output")
    s.set_defaults(func=cmd_check_duality)

    s = sub.add_parser("bench-kn", help="time the O(n) K_n rank")
    s.add_argument("--sizes", default="1e3,1e4,1e5,1e6")
    s.add_argument("--trials", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("rank-kn", help="rank on K_n via the fast path")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--divisor", required=True)
    s.set_defaults(func=cmd_rank_kn)

    s = sub.add_parser("weights-kn", help="closed-form K_n weight table")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--min-degree", type=int)
    s.add_argument("--lo")
    s.add_argument("--hi")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--output")
    s.set_defaults(func=cmd_weights_kn)

    s = sub.add_parser("extend", help="evaluate a modular extension")
    s.add_argument("--mode", choices=("coord", "strip"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int)
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--eval", required=True)
    s.add_argument("--budget", type=int, default=1_000_000)
    s.set_defaults(func=cmd_extend)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExtensionBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
