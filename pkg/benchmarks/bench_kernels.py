"""Compiled vs NumPy kernels, plus one end-to-end seesaw for scale.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from nppt_lab import _kernels_py
from nppt_lab.linalg import tensor_power
from nppt_lab.states import WernerParams, werner_pt
from nppt_lab.witness import SeesawConfig, seesaw_min

try:
    from nppt_lab import _kernels_c
except ImportError:
    _kernels_c = None


def best(stmt, repeat):
    return min(timeit.repeat(stmt, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    big = rng.standard_normal((729, 729)) + 1j * rng.standard_normal((729, 729))
    big = (big + big.conj().T) / 2
    prev = tensor_power(werner_pt(WernerParams(3, 0.45)), 3).matrix
    dn = np.diag(prev).real.copy()
    m = werner_pt(WernerParams(3, 0.45)).matrix[np.ix_([0, 4, 8], [0, 4, 8])].copy()

    cases = {
        "pinch d=3 n=3 (729x729)": lambda k: k.pinch(big, 3, 3),
        "off_pattern_max d=3 n=3": lambda k: k.off_pattern_max(big, 3, 3),
        "type2_extremes level 4 (729 prev)": lambda k: k.type2_extremes(dn, prev, m),
    }
    print(f"{'kernel':36s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in cases.items():
        t_py = best(lambda: fn(_kernels_py), args.repeat) * 1e3
        if _kernels_c is None:
            print(f"{name:36s} {t_py:10.2f} {'n/a':>10s} {'':>8s}")
            continue
        t_c = best(lambda: fn(_kernels_c), args.repeat) * 1e3
        print(f"{name:36s} {t_py:10.2f} {t_c:10.2f} {t_py / t_c:7.1f}x")

    w2 = tensor_power(werner_pt(WernerParams(3, 0.45)), 2)
    t = best(lambda: seesaw_min(w2, cfg=SeesawConfig(restarts=50), threads=1), 3) * 1e3
    print(f"\nseesaw n=2, 50 restarts (LAPACK-bound, backend-independent): {t:.1f} ms")


if __name__ == "__main__":
    main()
