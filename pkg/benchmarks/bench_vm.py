"""Compiled VM vs pure-Python fallback.

Two measurements:
  * kernel: the conversion FB's CHECK algorithm executed in a tight loop
  * end-to-end: one simulated hour of the room controller, each backend in
    its own interpreter so the import-time backend switch applies

    python3 benchmarks/bench_vm.py [--iterations N] [--sim-ms MS]
"""

import argparse
import os
import subprocess
import sys
import timeit

from fbdiag import kernels
from fbdiag.kernels import vm_py
from fbdiag.model import parse_algorithm
from fbdiag.model.compile import compile_statements

CHECK = """
CAND_C := (TEMP_F - 32.0) * 5.0 / 9.0;
IF SW_FAULT AND TEMP_F >= SW_LO_F AND TEMP_F <= SW_HI_F THEN
  CAND_C := CAND_C + SW_OFFSET_C;
END_IF;
HARD_ERR := CAND_C < RANGE_LO_C OR CAND_C > RANGE_HI_C;
OUTLIER := FALSE;
IF NOT HARD_ERR THEN
  IF HAVE_LAST AND (TEMP_F - LAST_F > JUMP_F OR LAST_F - TEMP_F > JUMP_F) THEN
    OUTLIER := TRUE;
    OUTLIER_RUN := OUTLIER_RUN + 1;
  ELSE
    OUTLIER_RUN := 0;
  END_IF;
  LAST_F := TEMP_F;
  HAVE_LAST := TRUE;
END_IF;
"""

VARS = {
    "TEMP_F": ("REAL", 70.0), "CAND_C": ("REAL", 0.0), "SW_FAULT": ("BOOL", False),
    "SW_LO_F": ("REAL", 0.0), "SW_HI_F": ("REAL", 0.0), "SW_OFFSET_C": ("REAL", 0.0),
    "HARD_ERR": ("BOOL", False), "RANGE_LO_C": ("REAL", -50.0), "RANGE_HI_C": ("REAL", 100.0),
    "OUTLIER": ("BOOL", False), "HAVE_LAST": ("BOOL", True), "LAST_F": ("REAL", 69.5),
    "JUMP_F": ("REAL", 9.0), "OUTLIER_RUN": ("INT", 0),
}

SIM = ("import sys, time\n"
       "from fbdiag import kernels\n"
       "from fbdiag.hvac import HvacSim, ROOM_CONTROLLER\n"
       "from fbdiag.model import load_system\n"
       "sim = HvacSim(load_system(ROOM_CONTROLLER), seed=1)\n"
       "sim.run(int(sys.argv[1]))\n"
       "s = sim.stats()\n"
       "print(kernels.BACKEND, s.wall_s, s.per_tick_us, s.events_processed)\n")


def bench_kernel(iterations):
    names = sorted(VARS)
    slot_of = {n: i for i, n in enumerate(names)}
    types = {n: VARS[n][0] for n in names}
    code = compile_statements(parse_algorithm(CHECK), slot_of, types)
    backends = [("python", vm_py.exec_code)]
    if kernels.BACKEND == "cython":
        backends.append(("cython", kernels.exec_code))
    out = {}
    for name, fn in backends:
        buf = kernels.prepare(code.ops, name)
        slots = [VARS[n][1] for n in names]
        t = min(timeit.repeat(lambda: fn(buf, code.consts, slots), number=iterations, repeat=3))
        out[name] = t / iterations * 1e6
    return out


def bench_sim(sim_ms):
    out = {}
    for pure in ("1", ""):
        env = dict(os.environ, FBDIAG_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", SIM, str(sim_ms)], env=env,
                             capture_output=True, text=True, check=True)
        backend, wall, per_tick, events = res.stdout.split()
        out[backend] = (float(wall), float(per_tick), int(events))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iterations", type=int, default=100_000)
    ap.add_argument("--sim-ms", type=int, default=3_600_000)
    args = ap.parse_args()

    kern = bench_kernel(args.iterations)
    print(f"kernel: CHECK algorithm, {args.iterations} executions")
    for name, us in kern.items():
        print(f"  {name:7s} {us:8.3f} us/exec")
    if "cython" in kern:
        print(f"  speedup {kern['python'] / kern['cython']:.1f}x")
    else:
        print("  compiled extension not built; fallback only")

    sim = bench_sim(args.sim_ms)
    print(f"end-to-end: room controller, {args.sim_ms} simulated ms")
    for name, (wall, per_tick, events) in sim.items():
        print(f"  {name:7s} {wall:7.2f} s wall  {per_tick:6.2f} us/tick  {events} events")


if __name__ == "__main__":
    main()
