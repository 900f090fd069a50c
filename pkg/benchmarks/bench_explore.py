"""Compare the compiled and pure-Python exploration kernels.

    python benchmarks/bench_explore.py [--repeat N] [--max-k K]

Each workload is run through both kernels on identical dense inputs; the
results are checked for equality before timings are reported.
"""

import argparse
import random
import timeit

from pnpl import _explore
from pnpl.frg import _dense_net
from pnpl.formula import to_config_set
from pnpl.generators import branching_family, random_pnpl
from pnpl.io import load_model
from pnpl.net import effective_pc

try:
    from pnpl._cexplore import explore as compiled
except ImportError:
    compiled = None


def kernel_args(net, fm):
    m0, pre, post = _dense_net(net)
    masks = [to_config_set(effective_pc(net, t), fm).mask for t in net.transition_names]
    return (m0, pre, post, masks, fm.space.full_mask, True, 1_000_000, 10_000,
            list(net.place_names))


def workloads(max_k):
    yield "assembly_line", load_model("assembly_line")
    for k in range(2, max_k + 1):
        yield f"branching k={k} tokens=3", branching_family(k, tokens=3)
    rng = random.Random(0)
    nets = [random_pnpl(rng, max_places=8, max_transitions=8, max_tokens=8) for _ in range(50)]
    yield "50 random nets", nets


def run(max_k=6, repeat=3):
    rows = []
    for name, work in workloads(max_k):
        batch = [kernel_args(*m) for m in (work if isinstance(work, list) else [work])]
        kernels = {"python": _explore.explore}
        if compiled is not None:
            kernels["cython"] = compiled
            for a in batch:
                assert compiled(*a) == _explore.explore(*a), name
        times = {
            label: min(timeit.repeat(lambda k=k: [k(*a) for a in batch], number=1, repeat=repeat))
            for label, k in kernels.items()
        }
        states = sum(len(_explore.explore(*a)[0]) for a in batch)
        rows.append((name, states, times))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-k", type=int, default=6)
    opts = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'workload':28} {'states':>8} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, states, t in run(opts.max_k, opts.repeat):
        py = t["python"] * 1e3
        if "cython" in t:
            cy = t["cython"] * 1e3
            print(f"{name:28} {states:8d} {py:10.2f} {cy:10.2f} {py / cy:7.1f}x")
        else:
            print(f"{name:28} {states:8d} {py:10.2f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
