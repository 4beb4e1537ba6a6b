"""Compare the compiled matrix kernels against the pure Python fallback.

Times the two hot operations (mod-p matrix product and reduced row
echelon form) on batches of random matrices, then an end-to-end
workload (the full torsion-pair bijection check on the three-vertex
fixture) under each backend.  Run directly:

    python3 benchmarks/bench_kernels.py [--seed N] [--repeat N]

Force the pure backend for the whole process with QUIVERTILT_PURE=1;
this script instead imports both implementations side by side and
spawns a subprocess for the end-to-end comparison so a single run
reports both columns.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from quivertilt.kernels import BACKEND, _pure

try:
    from quivertilt.kernels import _speedups
except ImportError:
    _speedups = None

SHAPES = ((8, 8, 8), (16, 16, 16), (32, 32, 32), (48, 32, 48))
RREF_SHAPES = ((8, 12), (16, 24), (32, 48), (64, 64))


def random_flat(rng: random.Random, p: int, rows: int, cols: int) -> list[int]:
    return [rng.randrange(p) for _ in range(rows * cols)]


def bench_mat_mul(impl, rng: random.Random, p: int, repeat: int) -> float:
    total = 0.0
    for m, n, k in SHAPES:
        a = random_flat(rng, p, m, n)
        b = random_flat(rng, p, n, k)
        start = time.perf_counter()
        for _ in range(repeat):
            impl.mat_mul(p, m, n, k, a, b)
        total += time.perf_counter() - start
    return total


def bench_rref(impl, rng: random.Random, p: int, repeat: int) -> float:
    total = 0.0
    for m, n in RREF_SHAPES:
        a = random_flat(rng, p, m, n)
        start = time.perf_counter()
        for _ in range(repeat):
            impl.rref(p, m, n, list(a))
        total += time.perf_counter() - start
    return total


def end_to_end() -> float:
    """The bijection certificate on the 1 -> 2 -> 3 fixture."""
    from quivertilt.algebras import corner_algebra, path_algebra
    from quivertilt.enumeration import universe
    from quivertilt.giraud import giraud_context, verify_bijection
    from quivertilt.linalg import Field
    from quivertilt.quivers import Quiver

    alg = path_algebra(Field(2), Quiver((1, 2, 3), ((1, 2), (2, 3))))
    corner = corner_algebra(alg, (0, 2))
    ctx = giraud_context(corner)
    start = time.perf_counter()
    report = verify_bijection(ctx, universe(alg, 3),
                              universe(corner.sub, 2))
    assert report.ok
    return time.perf_counter() - start


def end_to_end_subprocess(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["QUIVERTILT_PURE"] = "1"
    else:
        env.pop("QUIVERTILT_PURE", None)
    code = ("import benchmarks.bench_kernels as b; "
            "print(b.end_to_end())")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True,
        text=True, check=True,
        cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    return float(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20240824)
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--p", type=int, default=2)
    args = parser.parse_args()

    print(f"active backend: {BACKEND}")
    impls = [("pure", _pure)]
    if _speedups is not None:
        impls.append(("speedups", _speedups))
    else:
        print("compiled extension not built; timing the fallback only")

    results: dict[str, dict[str, float]] = {}
    for name, impl in impls:
        rng = random.Random(args.seed)
        results[name] = {
            "mat_mul": bench_mat_mul(impl, rng, args.p, args.repeat),
            "rref": bench_rref(impl, rng, args.p, args.repeat),
        }

    print(f"\nmicro-kernels ({args.repeat} repetitions per shape, p={args.p})")
    for op in ("mat_mul", "rref"):
        line = f"  {op:8s}"
        for name, _ in impls:
            line += f"  {name}: {results[name][op]:.3f}s"
        if len(impls) == 2:
            speedup = results["pure"][op] / max(results["speedups"][op], 1e-9)
            line += f"  ({speedup:.1f}x)"
        print(line)

    print("\nend-to-end bijection certificate (subprocess per backend)")
    pure_t = end_to_end_subprocess(pure=True)
    print(f"  pure:      {pure_t:.2f}s")
    if _speedups is not None:
        fast_t = end_to_end_subprocess(pure=False)
        print(f"  speedups:  {fast_t:.2f}s  ({pure_t / max(fast_t, 1e-9):.1f}x)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
