"""Compare the compiled and pure-numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best time per call for each backend and
the speedup. End-to-end rows time full measure evaluations with the module
level kernel functions swapped.
"""

import argparse
import timeit

import numpy as np

from qdiscord import _kernels_py, kernels
from qdiscord.chains.jw import sector_covariance
from qdiscord.entropy import LINEAR, VON_NEUMANN
from qdiscord.measures import fibonacci_sphere, info_deficit, quantum_discord
from qdiscord.states import bloch_decompose, random_density_matrix

try:
    from qdiscord import _ckernels
except ImportError:
    _ckernels = None

NAMES = ("spectra", "objective_values", "objective_gradient", "pfaffian")


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def _swap(module):
    for name in NAMES:
        setattr(kernels, name, getattr(module, name))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled backend not built; nothing to compare")
        return

    rng = np.random.default_rng(7)
    b = bloch_decompose(random_density_matrix(4, rng))
    dirs = fibonacci_sphere(512)
    k = dirs[3]
    gamma, _ = sector_covariance(50, 1.0, 0.5, 0.3, 1)
    sub = gamma[1:51, 1:51].copy()

    cases = [
        ("spectra (512 dirs)", lambda m: m.spectra(b.r_a, b.r_b, b.J, dirs), 200),
        ("objective_values vN (512 dirs)",
         lambda m: m.objective_values(b.r_a, b.r_b, b.J, dirs, 0, 1.0, 1), 200),
        ("objective_gradient vN",
         lambda m: m.objective_gradient(b.r_a, b.r_b, b.J, k, 0, 1.0, 1), 2000),
        ("pfaffian 50x50", lambda m: m.pfaffian(sub), 500),
    ]
    print(f"{'kernel':36s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for label, fn, number in cases:
        t_py = _best(lambda: fn(_kernels_py), args.repeat, number)
        t_c = _best(lambda: fn(_ckernels), args.repeat, number)
        print(f"{label:36s} {t_py * 1e6:10.1f}us {t_c * 1e6:10.1f}us {t_py / t_c:8.1f}")

    e2e = [
        ("quantum_discord", lambda: quantum_discord(b), 20),
        ("info_deficit linear", lambda: info_deficit(LINEAR, b), 20),
        ("info_deficit vN", lambda: info_deficit(VON_NEUMANN, b), 20),
    ]
    for label, fn, number in e2e:
        _swap(_kernels_py)
        t_py = _best(fn, args.repeat, number)
        _swap(_ckernels)
        t_c = _best(fn, args.repeat, number)
        print(f"{label:36s} {t_py * 1e6:10.1f}us {t_c * 1e6:10.1f}us {t_py / t_c:8.1f}")


if __name__ == "__main__":
    main()
