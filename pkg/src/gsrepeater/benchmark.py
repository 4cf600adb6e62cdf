"""Timing comparison between the compiled kernels and the pure fallback.

Run as ``python -m gsrepeater.benchmark``.  Each workload is executed with
both implementations (when the compiled extension is importable), timed
over ``--repeat`` rounds, and checked for agreement on the returned
values.
"""

from __future__ import annotations

import argparse
import time

from ._kernels import reference

try:
    from ._kernels import _core
except ImportError:
    _core = None

TREE = (4, 16, 5)
RGS_ARMS, RGS_B = 32, (24, 7)
MU = 0.12
EPS_SP = 1e-4


def _workloads():
    mus = [0.02 * i for i in range(1, 26)]

    def links(mod):
        return [mod.tree_link(TREE, mu, EPS_SP) for mu in mus]

    def tree_search(mod):
        return mod.tree_best_m(TREE, 1, 1200, 50.0, 1.0, EPS_SP, 1e9, 0.0)

    def rgs_links(mod):
        return [
            (mod.rgs_components(RGS_ARMS, RGS_B, mu), mod.rgs_errors(RGS_B, mu, EPS_SP))
            for mu in mus
        ]

    def rgs_search(mod):
        return mod.rgs_best_m(RGS_ARMS, RGS_B, 1, 1200, 50.0, 1.0, EPS_SP, 1e9, 0.0)

    return [
        ("tree_link x25", links),
        ("tree_best_m", tree_search),
        ("rgs link x25", rgs_links),
        ("rgs_best_m", rgs_search),
    ]


def _flatten(value, out):
    if isinstance(value, (tuple, list)):
        for item in value:
            _flatten(item, out)
    elif value is None:
        out.append(float("nan"))
    else:
        out.append(float(value))


def _max_rel(a, b) -> float:
    fa, fb = [], []
    _flatten(a, fa)
    _flatten(b, fb)
    worst = 0.0
    for x, y in zip(fa, fb):
        if x != x and y != y:  # both undefined counts as agreement
            continue
        scale = max(abs(x), abs(y), 1e-300)
        worst = max(worst, abs(x - y) / scale)
    return worst


def _time(fn, mod, repeat: int) -> tuple[float, object]:
    result = fn(mod)  # warm-up, also the comparison value
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gsrepeater.benchmark")
    parser.add_argument("--repeat", type=int, default=5, help="timing rounds per case")
    args = parser.parse_args(argv)

    print(f"{'workload':<14} {'reference':>12} {'compiled':>12} {'speedup':>8} {'max rel diff':>13}")
    for name, fn in _workloads():
        ref_t, ref_v = _time(fn, reference, args.repeat)
        if _core is None:
            print(f"{name:<14} {ref_t:>10.3e} s {'-':>12} {'-':>8} {'-':>13}")
            continue
        core_t, core_v = _time(fn, _core, args.repeat)
        diff = _max_rel(ref_v, core_v)
        print(
            f"{name:<14} {ref_t:>10.3e} s {core_t:>10.3e} s "
            f"{ref_t / core_t:>7.1f}x {diff:>13.2e}"
        )
    if _core is None:
        print("compiled extension not available; reference timings only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
