"""Compiled vs pure-Python kernels on the workloads the VQE loop runs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number 2000]

Prints microseconds per call for each backend and the speedup. Both backends
are checked to agree before anything is timed.
"""
import argparse
import timeit

import numpy as np

from hubbard_ucc import kernels
from hubbard_ucc.hamiltonian import HubbardParams, build_momentum_space
from hubbard_ucc.stateprep import Mode, exact_sequence, prepare, start_vector
from hubbard_ucc.ucc import CompiledSequence
from hubbard_ucc.vqe import VqeConfig, minimize, recipe_problem


def workloads():
    report = prepare(4.0, Mode.EXACT)
    compiled = CompiledSequence(exact_sequence(report.angles).factors)
    psi0 = start_vector()
    h = build_momentum_space(HubbardParams(4.0))
    angles = np.array([f.theta for f in compiled.factors])
    problem = recipe_problem(HubbardParams(4.0))
    return {
        "apply 9-factor sequence": lambda: compiled.apply(psi0, angles),
        "energy expectation": lambda: kernels.expectation(h, report.state),
        "vqe run u=4 (per call)": lambda: minimize(problem, VqeConfig(seed=1)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=2000)
    args = parser.parse_args()

    if "compiled" not in kernels.BACKENDS:
        print("compiled kernels not built; only the python backend is available")
    work = workloads()

    kernels.use_backend("python")
    reference = work["apply 9-factor sequence"]()
    for name in kernels.BACKENDS:
        kernels.use_backend(name)
        assert np.allclose(work["apply 9-factor sequence"](), reference, atol=1e-14)

    print(f"{'workload':28s}" + "".join(f"{b:>14s}" for b in kernels.BACKENDS) + f"{'speedup':>10s}")
    for label, fn in work.items():
        number = max(1, args.number // 200) if label.startswith("vqe") else args.number
        times = {}
        for name in kernels.BACKENDS:
            kernels.use_backend(name)
            times[name] = min(timeit.repeat(fn, repeat=args.repeat, number=number)) / number * 1e6
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:28s}" + "".join(f"{times[b]:12.1f}us" for b in kernels.BACKENDS) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
