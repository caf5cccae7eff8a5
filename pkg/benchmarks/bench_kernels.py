"""Compiled vs pure-Python kernels: same answers, timings side by side.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import time

from dgdeform import _kernels_py as pure
from dgdeform.fields import F2, F3
from dgdeform.library import keller_base, truncated_polynomial
from dgdeform.mc import MCContext, _scan_terms

try:
    from dgdeform import _kernels as fast
except ImportError:
    fast = None


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def rref_cases(seed=0):
    rng = random.Random(seed)
    for p, n in ((2, 60), (3, 60), (5, 80), (7, 120)):
        rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        yield f"rref {n}x{n} mod {p}", p, rows, n


def scan_cases():
    for F, hi, order in ((F2, 8, 4), (F3, 6, 2), (F3, 8, 3), (F2, 10, 5)):
        B = keller_base(F, hi)
        R = truncated_polynomial(F, order)
        ctx = MCContext(B, R)
        lin, quad = _scan_terms(ctx)
        yield (f"mc_scan k[x]_[0,{hi}]⊗L, k[e]/e^{order + 1}, {F.name}, n={ctx.dim(1)}",
               F.p, ctx.dim(1), ctx.dim(2), lin, quad)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if fast is None:
        print("compiled kernels are not built; only the Python timings are shown")
    print(f"{'case':55s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, p, rows, n in rref_cases():
        tp, rp = _time(lambda: pure.rref_modp([r[:] for r in rows], n, p), args.repeat)
        line = f"{name:55s} {tp * 1e3:9.2f}ms"
        if fast is not None:
            tf, rf = _time(lambda: fast.rref_modp([r[:] for r in rows], n, p), args.repeat)
            assert [list(x) for x in rf[0]] == [list(x) for x in rp[0]] and list(rf[1]) == list(rp[1]), name
            line += f" {tf * 1e3:9.2f}ms {tp / tf:7.1f}x"
        print(line)
    for name, p, n, m, lin, quad in scan_cases():
        tp, rp = _time(lambda: pure.mc_scan(p, n, m, [0] * m, lin, quad), args.repeat)
        line = f"{name:55s} {tp * 1e3:9.2f}ms"
        if fast is not None:
            tf, rf = _time(lambda: fast.mc_scan(p, n, m, [0] * m, lin, quad), args.repeat)
            assert sorted(rf) == sorted(rp), name
            line += f" {tf * 1e3:9.2f}ms {tp / tf:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
