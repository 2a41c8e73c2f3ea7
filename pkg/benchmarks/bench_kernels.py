"""Compare the numba and numpy kernel backends.

Times inference plus constraint checking, the part of an analysis that runs
on the join kernels, on the ECAS fixture and on synthetic models of growing
size. One warm-up run per backend keeps JIT compilation out of the numbers.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 138 276 414 552]
"""

import argparse
import logging
import statistics
import time

from tracereason import Analyzer, build_hierarchy, load_fixture, load_spec, parse_model
from tracereason.synthetic import scale_case


def run(model, core, h, backend):
    a = Analyzer(model, core, h, backend)
    fp, inf = a.infer()
    return len(inf.inferred), a.violations(fp.closure)


def timed(model, core, h, backend, repeat):
    run(model, core, h, backend)
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run(model, core, h, backend)
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[138, 276, 414, 552])
    args = ap.parse_args()
    logging.disable(logging.WARNING)

    cases = []
    core = load_spec(load_fixture("ecas.tarski"))
    cases.append(("ecas", parse_model(load_fixture("ecas.trace")), core))
    for n in args.sizes:
        c = scale_case(seed=0, n_assigned=n)
        cases.append((f"scale-{n}", c.model, load_spec(c.spec_text)))

    print(f"{'case':<12} {'assigned':>8} {'inferred':>8} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for name, model, core in cases:
        h = build_hierarchy(core)
        t_np, r_np = timed(model, core, h, "numpy", args.repeat)
        t_nb, r_nb = timed(model, core, h, "numba", args.repeat)
        assert r_np == r_nb, f"backends disagree on {name}"
        print(f"{name:<12} {len(model.tuples):>8} {r_np[0]:>8} "
              f"{t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>7.2f}x", flush=True)


if __name__ == "__main__":
    main()
