"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times each kernel on random F_p inputs of a few sizes, then one end-to-end
job (the BC table to n = 646 over F_3) with each backend in a subprocess.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from carlitzlab import _fallback

try:
    from carlitzlab import _kernels
except ImportError:
    _kernels = None


def rand_poly(rng, n, p, unit=False):
    c = [rng.randrange(p) for _ in range(n)]
    if unit:
        c[0] = rng.randrange(1, p)
    c[-1] = rng.randrange(1, p)
    return c


def bench(fn, args, repeat):
    t = timeit.Timer(lambda: fn(*[list(a) if isinstance(a, list) else a for a in args]))
    loops, _ = t.autorange()
    return min(t.repeat(repeat, loops)) / loops


END_TO_END = "import time;from carlitzlab import bcnum, make_field;t=time.perf_counter();" \
             "bcnum.BCTable(make_field(3)).value(646);print(time.perf_counter()-t)"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    rng = random.Random(args.seed)
    p = 3
    print(f"{'kernel':<12}{'size':>7}{'python (us)':>14}{'compiled (us)':>15}{'speedup':>9}")
    for n in (16, 128, 1024, 4096):
        a, b = rand_poly(rng, n, p, True), rand_poly(rng, n, p)
        small = rand_poly(rng, max(2, n // 3), p)
        cases = {
            "mul": ((a, b, p),),
            "mullow": ((a, b, n, p),),
            "series_inv": ((a, n, p),),
            "divmod": ((a + b, small, p),),
            "gcd": ((a, b, p),),
        }
        for name, (cargs,) in cases.items():
            key = "divmod_" if name == "divmod" else name
            if name in ("series_inv", "gcd", "divmod") and n > 1024:
                continue
            py = bench(getattr(_fallback, key), cargs, args.repeat)
            cy = bench(getattr(_kernels, key), cargs, args.repeat)
            print(f"{name:<12}{n:>7}{py * 1e6:>14.1f}{cy * 1e6:>15.1f}{py / cy:>9.1f}")
    print()
    for label, env in (("compiled", {}), ("python", {"CARLITZLAB_PURE": "1"})):
        out = subprocess.run([sys.executable, "-c", END_TO_END], capture_output=True, text=True,
                             env=dict(os.environ, **env), check=True)
        print(f"BC table to 646, {label:<9}{float(out.stdout):8.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
