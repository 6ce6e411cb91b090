"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row reports the best-of-N wall time per call for both backends and the
speedup of the compiled core. Outputs are cross-checked before timing.
"""
import argparse
import timeit

import numpy as np

from cohbound import _kernels


def cases():
    rng = np.random.default_rng(0)
    for count in (1_024, 65_536):
        yield f"gaussians n={count}", lambda mod, c=count: mod.complex_gaussians(42, 7, c)
    for d in (8, 16, 32, 64):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = g + g.conj().T
        tol = 1e-12 * max(1.0, float(np.linalg.norm(h)))
        yield f"jacobi d={d}", lambda mod, h=h, tol=tol: mod.jacobi_eigenvalues(h, tol, 100)


def best_time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = _kernels.BACKENDS
    if "cython" not in backends:
        print("compiled core not built; only the Python backend is available")
    names = sorted(backends)
    print(f"{'case':<20}" + "".join(f"{n:>14}" for n in names) + f"{'speedup':>10}")
    for label, call in cases():
        results = [call(backends[n]) for n in names]
        first = results[0][0] if isinstance(results[0], tuple) else results[0]
        for other in results[1:]:
            other = other[0] if isinstance(other, tuple) else other
            assert np.allclose(np.sort(first.real), np.sort(other.real), atol=1e-10)
        times = {n: best_time(lambda n=n: call(backends[n]), args.repeat) for n in names}
        row = f"{label:<20}" + "".join(f"{times[n] * 1e3:>12.3f}ms" for n in names)
        if len(names) == 2:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
