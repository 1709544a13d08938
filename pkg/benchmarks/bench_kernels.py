"""Compare the numba and numpy kernel backends.

Each backend runs in its own interpreter because the choice is fixed at
import time. Usage::

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, time
import numpy as np
from zeroabel import _kernels
from zeroabel.monodromy import monodromy_data
from zeroabel.poly import ExactPoly

repeat = {repeat}
t0 = time.perf_counter()
_kernels.warmup()
warm = time.perf_counter() - t0

rng = np.random.default_rng(7)
polys = [rng.normal(size=21) + 1j * rng.normal(size=21) for _ in range(50)]
t0 = time.perf_counter()
for _ in range(repeat):
    for c in polys:
        _kernels.aberth(c)
aberth_t = (time.perf_counter() - t0) / repeat

z0 = np.exp(2j * np.pi * np.arange(12) / 12)
a = np.zeros(13, dtype=complex); a[12] = 1
b = np.zeros(13, dtype=complex); b[0] = -1
t0 = time.perf_counter()
for _ in range(repeat):
    for _ in range(20):
        _kernels.track(a, b, 1, 0.0, 1.0, 0.0, 2 * np.pi, z0)
track_t = (time.perf_counter() - t0) / repeat

fs = [ExactPoly([1, -2, 0, 3, 0, -1, 1]), ExactPoly([0, 0, 1, -2, 1]) ** 2,
      ExactPoly([2, 1, 0, 0, -3, 0, 0, 1])]
t0 = time.perf_counter()
for f in fs:
    monodromy_data(f)
mono_t = time.perf_counter() - t0

print(json.dumps({{"backend": _kernels.BACKEND, "warmup_s": warm, "aberth_50xdeg20_s": aberth_t,
                  "track_20_loops_s": track_t, "monodromy_3_polys_s": mono_t}}))
"""


def run_backend(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("ZEROABEL_NO_NUMBA", None)
    if no_numba:
        env["ZEROABEL_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKER.format(repeat=repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = [run_backend(False, args.repeat), run_backend(True, args.repeat)]
    keys = [k for k in rows[0] if k != "backend"]
    print(f"{'measure':<24}" + "".join(f"{r['backend']:>12}" for r in rows) + f"{'speedup':>10}")
    for k in keys:
        nb, np_ = rows[0][k], rows[1][k]
        ratio = f"{np_ / nb:>10.1f}" if k != "warmup_s" and nb > 0 else f"{'':>10}"
        print(f"{k:<24}{nb:>12.4f}{np_:>12.4f}{ratio}")


if __name__ == "__main__":
    main()
