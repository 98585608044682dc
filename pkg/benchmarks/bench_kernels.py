"""Compare the compiled and pure-numpy assembly kernels.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Times the matrix fill on synthetic inputs, then a full V1 solve with each
backend swapped in, and checks that both backends give identical matrices.
"""
import argparse
import timeit

import numpy as np

import descm.solver as solver
from descm import builtin, kernels
from descm.kernels import _pykernels

try:
    from descm.kernels import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled kernel not built; reinstall with Cython available")

    rng = np.random.default_rng(0)
    print(f"{'N':>5} {'size':>5} {'numpy ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for N in (50, 100, 250, 500):
        n = 2 * N + 1
        vt, s, h = rng.normal(size=n), rng.uniform(0.1, 10, size=n), 0.05
        Hp, Ap = _pykernels.assemble(vt, s, h)
        Hc, Ac = _ckernels.assemble(vt, s, h)
        assert np.array_equal(Hp, Hc) and np.array_equal(Ap, Ac)
        tp = _best(lambda: _pykernels.assemble(vt, s, h), args.repeat)
        tc = _best(lambda: _ckernels.assemble(vt, s, h), args.repeat)
        print(f"{N:>5} {n:>5} {tp * 1e3:>10.3f} {tc * 1e3:>12.3f} {tp / tc:>8.2f}")

    p, _ = builtin("V1")
    print(f"\nfull V1 solve (assemble + eigh), backend in use by default: {kernels.BACKEND}")
    print(f"{'N':>5} {'numpy ms':>10} {'compiled ms':>12}")
    original = solver.kernels.assemble
    try:
        for N in (50, 100, 250):
            times = []
            for impl in (_pykernels.assemble, _ckernels.assemble):
                solver.kernels.assemble = impl
                times.append(_best(lambda: solver.spectrum(p, N), max(3, args.repeat // 4)))
            print(f"{N:>5} {times[0] * 1e3:>10.3f} {times[1] * 1e3:>12.3f}")
    finally:
        solver.kernels.assemble = original


if __name__ == "__main__":
    main()
