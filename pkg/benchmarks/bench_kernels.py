"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--qutrits 8] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from tritassert import _fallback
from tritassert.gates import a_gate_unitary, chrestenson, z_gate

try:
    from tritassert import _kernels
except ImportError:
    _kernels = None


def _random_state(n, rng):
    amps = rng.normal(size=3**n) + 1j * rng.normal(size=3**n)
    return amps / np.linalg.norm(amps)


def cases(n):
    ch1 = chrestenson(1).matrix
    zp1 = z_gate("Z+1").matrix
    a1 = a_gate_unitary("A1").matrix
    mid = n // 2
    qs = np.arange(n, dtype=np.int64)
    draws = np.random.default_rng(1).random((2000, n))
    return {
        "apply_single": lambda k, amps: k.apply_single(amps, n, mid, ch1),
        "apply_controlled": lambda k, amps: k.apply_controlled(amps, n, 0, n - 1, zp1),
        "apply_two": lambda k, amps: k.apply_two(amps, n, 1, n - 2, a1),
        "joint_marginal": lambda k, amps: k.joint_marginal(amps, n, qs),
        "sample_joint(2000 shots)": lambda k, amps: k.sample_joint(
            _fallback.joint_marginal(amps, n, qs), n, draws
        ),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qutrits", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    base = _random_state(args.qutrits, rng)
    backends = [("python", _fallback)] + ([("compiled", _kernels)] if _kernels else [])
    print(f"{args.qutrits} qutrits ({3 ** args.qutrits} amplitudes), best of {args.repeat}")
    print(f"{'kernel':<26}" + "".join(f"{name:>14}" for name, _ in backends) + ("     speedup" if _kernels else ""))
    for label, fn in cases(args.qutrits).items():
        times = []
        for _, mod in backends:
            amps = base.copy()
            times.append(min(timeit.repeat(lambda fn=fn, mod=mod, amps=amps: fn(mod, amps), number=1, repeat=args.repeat)))
        row = f"{label:<26}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)
    if _kernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
