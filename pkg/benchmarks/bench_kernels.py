#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel backends.

The backend is chosen at import time from LLV_LAB_KERNEL, so each
measurement runs in a fresh subprocess. Micro benchmarks exercise the raw
kernel entry points; the macro benchmark runs the full LLV closure and
structure verification on a mid-size surface fixture.

Usage: python benchmarks/bench_kernels.py [--b2 10] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, time
from llv_lab import _kernels as K

out = {"backend": K.BACKEND}
rng = random.Random(0)

n = 600
rows = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(250)]
cand = [rng.randint(-50, 50) for _ in range(n)]
t0 = time.perf_counter()
for rep in range(60):
    r = cand[:]
    for row in rows[:120]:
        K.row_combine(r, row, 3, 2, 0)
        g = K.vec_content(r)
        if g > 1:
            K.vec_divexact(r, g)
out["row_ops_s"] = time.perf_counter() - t0

A = [[rng.randint(-40, 40) for _ in range(24)] for _ in range(24)]
B = [[rng.randint(-40, 40) for _ in range(24)] for _ in range(24)]
t0 = time.perf_counter()
for rep in range(4000):
    K.mat_mul(A, B)
out["mat_mul_s"] = time.perf_counter() - t0

from llv_lab.builders import build_k3, default_form
from llv_lab.llv import analyze_llv
alg = build_k3(default_form(B2))
t0 = time.perf_counter()
res = analyze_llv(alg)
out["llv_closure_s"] = time.perf_counter() - t0
out["llv_dim"] = res.g.dim
out["iso_verified"] = res.report.iso_verified
print(json.dumps(out))
"""


def run_backend(backend: str, b2: int) -> dict:
    env = dict(os.environ, LLV_LAB_KERNEL=backend)
    code = WORKER.replace("B2", str(b2))
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--b2", type=int, default=10,
                    help="second Betti number of the macro fixture")
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()

    results = {}
    for backend in ("c", "pure"):
        try:
            best = None
            for _ in range(args.repeat):
                got = run_backend(backend, args.b2)
                if best is None:
                    best = got
                else:
                    for key in ("row_ops_s", "mat_mul_s", "llv_closure_s"):
                        best[key] = min(best[key], got[key])
            results[backend] = best
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: failed ({exc.stderr.strip().splitlines()[-1]})")
    if not results:
        return 1

    fields = [("row_ops_s", "echelon row ops"),
              ("mat_mul_s", "24x24 mat_mul x4000"),
              ("llv_closure_s", f"LLV closure+verify (b2={args.b2})")]
    print(f"{'benchmark':<34}" + "".join(f"{b:>12}" for b in results))
    for key, label in fields:
        line = f"{label:<34}"
        for backend in results:
            line += f"{results[backend][key]:>11.3f}s"
        print(line)
    if "c" in results and "pure" in results:
        print(f"{'speedup (pure/c)':<34}" + "".join(
            f"{results['pure'][k] / results['c'][k]:>11.1f}x"
            for k, _ in fields))
    dims = {b: r["llv_dim"] for b, r in results.items()}
    assert len(set(dims.values())) == 1, f"backends disagree: {dims}"
    print(f"agreement: dim g_tot = {dims.popitem()[1]} on both backends")
    return 0


if __name__ == "__main__":
    sys.exit(main())
