"""Write the synthetic motion corpus and its synergy library to disk.

Run from the repository root:  python3 scripts/build_corpus.py --out corpus/

Emits one CSV (+ JSON sidecar) per motion, an optional noisy squat
variant, and corpus.json holding the k=3 library for all four styles.
"""

import argparse
from pathlib import Path

from synsculptor import corpus, synergy, trajio
from synsculptor.kinmodel import load_bundled_model


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="corpus", help="output directory")
    ap.add_argument("--model", default="humanoid19")
    ap.add_argument("--noise-seed", type=int, default=3,
                    help="seed for the noisy squat variant; negative skips it")
    args = ap.parse_args()

    model = load_bundled_model(args.model)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    motions = corpus.build_corpus(model)
    for name, traj in motions.items():
        path = trajio.save_trajectory(traj, out / f"{name}.csv")
        print(f"wrote {path} ({traj.n_frames} frames, {traj.duration_s:.1f} s)")

    if args.noise_seed >= 0:
        noisy = corpus.with_band_limited_noise(
            motions["squat"], model, rel_amplitude=0.1, min_hz=10.0,
            seed=args.noise_seed, source="external",
        )
        path = trajio.save_trajectory(noisy, out / "squat_noisy.csv")
        print(f"wrote {path} (band-limited noise, seed {args.noise_seed})")

    lib = synergy.build_library(list(motions.values()), model, name="corpus")
    lib_path = synergy.save_library(lib, out / "corpus.json")
    print(f"wrote {lib_path} ({len(lib.entries)} entries)")


if __name__ == "__main__":
    main()
