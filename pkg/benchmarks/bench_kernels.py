"""Wall-clock comparison of the numba and pure-NumPy kernel backends.

The backend is fixed at import time by ``TURNING_FRAME_NO_NUMBA``, so this
script re-launches itself in a subprocess per backend, runs the two hot
workloads, and prints a comparison table:

* series: the displacement-shift pipeline body (phase evolution, both
  expectation routes, variance) over 160 scale samples on a 4096-node grid;
* transform: one position-representation render (8192 momentum nodes onto
  1201 position nodes).

Run:

    python benchmarks/bench_kernels.py
"""

import json
import os
import statistics
import subprocess
import sys
import time

REPEATS = 5


def run_workloads():
    import numpy as np
    import turning_frame as tf

    model = tf.FrameModel(lam=4.0)
    spec = tf.GaussianSpec(q0=4.0, p0=1.25, sigma=1.0)
    state = tf.make_gaussian(spec, tf.MomentumGrid(0.01, 5.0, 4096), model)
    wide = tf.make_gaussian(spec, tf.MomentumGrid(-2.5, 5.5, 8192), model,
                            mode=tf.GaussianMode.RAW)
    taus = np.linspace(-1.0, 16.0, 160)
    q_grid = np.linspace(-2.0, 12.0, 1201)

    # warm-up pass compiles the jitted kernels outside the timed region
    tf.expectation_series(state, taus[:4], model, with_variance=True)
    tf.to_position_representation(wide, q_grid[:64], model)

    series_times, transform_times = [], []
    digest = None
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        series = tf.expectation_series(state, taus, model, with_variance=True)
        series_times.append(time.perf_counter() - t0)
        report = tf.extract_shift_numeric(series, state, model)
        digest = report.delta_q_total

        t0 = time.perf_counter()
        profile = tf.to_position_representation(wide, q_grid, model)
        transform_times.append(time.perf_counter() - t0)
        assert profile.coverage_ok

    return {
        "backend": tf.backend(),
        "series": series_times,
        "transform": transform_times,
        "delta_q_total": digest,
    }


def time_backend(disable_numba):
    env = dict(os.environ)
    env["TURNING_FRAME_NO_NUMBA"] = "1" if disable_numba else ""
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main():
    results = []
    for disable in (True, False):
        label = "numpy (forced)" if disable else "default"
        print(f"[bench] running {label} worker ...")
        results.append(time_backend(disable))

    header = (f"{'Backend':10s} {'Workload':10s} {'Mean(s)':>9s} {'Std(s)':>9s} "
              f"{'delta_q_total':>15s}")
    print()
    print(header)
    print("-" * len(header))
    for res in results:
        for workload in ("series", "transform"):
            times = res[workload]
            print(f"{res['backend']:10s} {workload:10s} "
                  f"{statistics.mean(times):9.4f} "
                  f"{statistics.pstdev(times):9.4f} "
                  f"{res['delta_q_total']:15.9f}")

    if results[0]["backend"] != results[1]["backend"]:
        for workload in ("series", "transform"):
            ratio = statistics.mean(results[0][workload]) / statistics.mean(
                results[1][workload]
            )
            print(f"\n{workload}: numpy / {results[1]['backend']} = {ratio:.2f}x")
        drift = abs(results[0]["delta_q_total"] - results[1]["delta_q_total"])
        print(f"cross-backend delta_q_total drift: {drift:.3e}")
    else:
        print("\nnumba unavailable: both runs used the NumPy path.")


if __name__ == "__main__":
    if "--worker" in sys.argv:
        print(json.dumps(run_workloads()))
    else:
        main()
