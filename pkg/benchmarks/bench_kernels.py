"""Compare the compiled and pure-Python kernels.

Kernel timings call both backends in one process through ``_kernels.load``.
The end-to-end timing verifies a batch of generated symplectic instances in
a fresh interpreter per backend, since the backend is fixed at import.

    python3 benchmarks/bench_kernels.py [--sizes 8,16,32] [--repeat 5] [--instances 40]
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from symtorsion import _kernels

END_TO_END = """
import time
from symtorsion import BACKEND
from symtorsion.generators import GenConfig, gen_symplectic
from symtorsion.symplectic import verify_main_theorem
start = time.perf_counter()
for seed in range({count}):
    for n, dim in ((2, 8), (6, 4)):
        verify_main_theorem(gen_symplectic(GenConfig(seed=seed, n=n, max_dim=dim), "mixed"))
print(BACKEND, time.perf_counter() - start)
"""


def grid(rng, rows, cols, bound=10**6):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def bench_kernels(sizes, repeat):
    backends = {"python": _kernels.load("python")}
    try:
        backends["c"] = _kernels.load("c")
    except ImportError:
        print("compiled kernels not built; timing the fallback only")
    rng = random.Random(0)
    print(f"{'kernel':<14}{'size':>6}" + "".join(f"{name + ' ms':>14}" for name in backends) + f"{'speedup':>10}")
    for size in sizes:
        a, b = grid(rng, size, size), grid(rng, size, size)
        cases = {
            "bareiss_det": lambda k: k.bareiss_det([r[:] for r in a]),
            "gauss_jordan": lambda k: k.gauss_jordan([r[:] for r in a], size),
            "matmul": lambda k: k.matmul(a, b),
        }
        for name, fn in cases.items():
            ms = {}
            for label, mod in backends.items():
                ms[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=repeat)) * 1000
            speed = f"{ms['python'] / ms['c']:>9.1f}x" if "c" in ms else ""
            print(f"{name:<14}{size:>6}" + "".join(f"{v:>14.2f}" for v in ms.values()) + speed)


def bench_end_to_end(count):
    code = END_TO_END.format(count=count)
    for forced in (False, True):
        env = dict(os.environ)
        env.pop("SYMTORSION_PURE_PYTHON", None)
        if forced:
            env["SYMTORSION_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        print(f"end-to-end {2 * count} theorem checks, backend {backend}: {float(seconds):.2f} s")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="8,16,32", help="comma-separated square sizes")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--instances", type=int, default=40, help="seeds for the end-to-end run")
    args = parser.parse_args()
    bench_kernels([int(s) for s in args.sizes.split(",")], args.repeat)
    bench_end_to_end(args.instances)


if __name__ == "__main__":
    main()
