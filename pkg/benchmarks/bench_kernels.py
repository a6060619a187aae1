"""Compare the compiled and pure-Python lift-tree kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Each workload runs on both backends; results are checked for equality
before timings are reported.
"""

import argparse
import json
import random
import sys
import timeit

from mtk import _kernels_py as pure

try:
    from mtk import _kernels as compiled
except ImportError:
    compiled = None


def _random_path(rng, n, bound=4):
    w = [rng.choice((-1, 1)) * rng.randint(1, bound) for _ in range(n)]
    wbar = [rng.choice((-1, 1)) * rng.randint(1, bound) for _ in range(n)]
    return w, wbar


def workloads(seed=0):
    rng = random.Random(seed)
    paths = [_random_path(rng, 5) for _ in range(40)]
    lifts = []
    for w, wbar in paths:
        digits = [rng.randrange(abs(a)) for a in w]
        lifts.append((digits, w, wbar))
    multipliers = [rng.randint(-500, 500) for _ in range(50)]

    def act(mod):
        return [mod.act(d, w, wb, m) for d, w, wb in lifts for m in multipliers]

    def stabiliser(mod):
        return [mod.brute_stabiliser(d, w, wb) for d, w, wb in lifts]

    def whole_paths(mod):
        return [mod.stabilisers_for_path(w, wb) for w, wb in paths]

    return {"act (2000 calls)": act, "brute_stabiliser (40 lifts)": stabiliser,
            "stabilisers_for_path (40 paths, depth 5)": whole_paths}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernels are not built; only the pure-Python backend is available",
              file=sys.stderr)
    rows = []
    for name, fn in workloads(args.seed).items():
        row = {"workload": name}
        backends = {"python": pure} if compiled is None else {"python": pure, "compiled": compiled}
        if compiled is not None and fn(pure) != fn(compiled):
            raise SystemExit(f"backends disagree on {name}")
        for label, mod in backends.items():
            row[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        if "compiled" in row:
            row["speedup"] = row["python"] / row["compiled"]
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'workload':44} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for r in rows:
        c = f"{r['compiled'] * 1e3:8.2f}ms" if "compiled" in r else "       n/a"
        s = f"{r['speedup']:7.1f}x" if "speedup" in r else "     n/a"
        print(f"{r['workload']:44} {r['python'] * 1e3:8.2f}ms {c} {s}")


if __name__ == "__main__":
    main()
