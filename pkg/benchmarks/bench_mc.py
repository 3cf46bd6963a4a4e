"""Benchmark the Monte-Carlo kernels: compiled extension vs numpy fallback.

Usage:  python benchmarks/bench_mc.py [shots]

Both kernels consume the same pre-sampled arrays, so the comparison is
pure propagation throughput; outputs are checked for equality first.
"""

import sys
import time

import numpy as np

from dsepp import compile_circuit, preset, standard_form, table_713
from dsepp.sim import _op_arrays

try:
    from dsepp import _mc_cython
except ImportError:
    _mc_cython = None
from dsepp import _mc_numpy


def sample_inputs(circ, shots, rng):
    op_t, op_a, op_b, n_h, n_cz = _op_arrays(circ)
    return dict(
        n=circ.n, op_t=op_t, op_a=op_a, op_b=op_b,
        v_s=np.array(circ.v_s, dtype=np.int32),
        v_l=np.array(circ.v_l, dtype=np.int32),
        in_cls=rng.integers(0, 4, size=(shots, circ.n), dtype=np.uint8),
        h_a=rng.integers(0, 4, size=(shots, n_h), dtype=np.uint8),
        h_b=rng.integers(0, 4, size=(shots, n_h), dtype=np.uint8),
        cz_a=rng.integers(0, 16, size=(shots, n_cz), dtype=np.uint8),
        cz_b=rng.integers(0, 16, size=(shots, n_cz), dtype=np.uint8),
    )


def bench(kernel, kw, corr, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = kernel.run_block(kw["n"], kw["op_t"], kw["op_a"], kw["op_b"],
                               kw["v_s"], kw["v_l"], kw["in_cls"],
                               kw["h_a"], kw["h_b"], kw["cz_a"], kw["cz_b"], corr)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    shots = int(sys.argv[1]) if len(sys.argv) > 1 else 1 << 18
    rng = np.random.default_rng(0)
    print(f"{'circuit':<16} {'kernel':<8} {'shots/s':>12}  speedup")
    for name in ("iceberg4", "five_one_three", "steane"):
        circ = compile_circuit(standard_form(preset(name).tableau))
        corr = table_713().dense_class_table() if name == "steane" else None
        kw = sample_inputs(circ, shots, rng)
        t_np, out_np = bench(_mc_numpy, kw, corr)
        print(f"{name:<16} {'numpy':<8} {shots / t_np:>12.3e}")
        if _mc_cython is not None:
            t_cy, out_cy = bench(_mc_cython, kw, corr)
            assert np.array_equal(out_np[0], out_cy[0])
            assert np.array_equal(out_np[1], out_cy[1])
            print(f"{name:<16} {'cython':<8} {shots / t_cy:>12.3e}  "
                  f"{t_np / t_cy:.2f}x")
        else:
            print(f"{name:<16} {'cython':<8} {'not built':>12}")


if __name__ == "__main__":
    main()
