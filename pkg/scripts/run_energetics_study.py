"""Energetic smoothness of rank-3 reconstructions and Monte Carlo samples.

Run from the repository root:  python3 scripts/run_energetics_study.py

Part 1 injects band-limited noise into the squat, reconstructs each
segment with k=3, and reports the mean per-step momentum and kinetic
energy changes of both streams at 1 kHz. Part 2 draws 100 random
constant coefficient vectors from the leading squat synergy and reports
the distribution of the same metrics across samples.
"""

import argparse
import time

import numpy as np

from synsculptor import corpus, metrics, synergy, synth, trajio
from synsculptor.kinmodel import integrate_path, load_bundled_model
from synsculptor.segmenter import segment


def rank3_smoothing(model, squat, seed):
    noisy = corpus.with_band_limited_noise(
        squat, model, rel_amplitude=0.1, min_hz=10.0, seed=seed
    )
    v_recon = np.empty_like(noisy.velocities)
    for seg in segment(noisy, model):
        syn = synergy.extract(seg, noisy, k=3)
        V = noisy.velocities[seg.start:seg.end]
        v_recon[seg.start:seg.end] = V @ syn.S @ syn.S.T
    q_recon = integrate_path(model, noisy.positions[0], v_recon, 1.0 / noisy.rate_hz)
    recon = trajio.make_trajectory(
        q_recon, noisy.rate_hz, model.name, velocities=v_recon, source="synthesized"
    )
    for label, traj in (("noisy squat", noisy), ("k=3 reconstruction", recon)):
        dp, dke = metrics.energetics(traj, model)
        print(f"  {label:<22} mean dP {dp:.5f}   mean dKE {dke:.6f} J")
    dp_n, dke_n = metrics.energetics(noisy, model)
    dp_r, dke_r = metrics.energetics(recon, model)
    print(f"  reduction: dP {(1 - dp_r / dp_n):.1%}   dKE {(1 - dke_r / dke_n):.1%}")


def monte_carlo_spread(model, library, n):
    syn = library.find("squat-01").synergy
    t0 = time.perf_counter()
    samples = synth.monte_carlo(model, syn, n=n, duration_s=5.0, rate_hz=100.0, seed=0)
    elapsed = time.perf_counter() - t0
    dps, dkes = [], []
    for traj in samples:
        dp, dke = metrics.energetics(traj, model)
        dps.append(dp)
        dkes.append(dke)
    dps, dkes = np.array(dps), np.array(dkes)
    print(f"  {n} samples in {elapsed:.1f} s")
    print(f"  dP  mean {dps.mean():.5f}  min {dps.min():.5f}  max {dps.max():.5f}")
    print(f"  dKE mean {dkes.mean():.6f}  min {dkes.min():.6f}  max {dkes.max():.6f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--samples", type=int, default=100)
    args = ap.parse_args()

    model = load_bundled_model("humanoid19")
    squat = corpus.squat(model)
    library = synergy.build_library([squat], model, name="squat-only")

    print("rank-3 smoothing of band-limited noise:")
    rank3_smoothing(model, squat, args.seed)
    print("\nMonte Carlo coefficient sampling:")
    monte_carlo_spread(model, library, args.samples)


if __name__ == "__main__":
    main()
