"""Null-space projection cleanup of a noisy external trajectory.

Run from the repository root:  python3 scripts/run_projection_study.py

Treats a noise-injected squat as an externally generated motion, filters
it through S S^T N_t with a clean-corpus synergy basis and the
upper-torso orientation task, and compares foot sliding and mechanical
power before and after. Also reports the torso-free variant (no
nullspace step) to show what the task protection costs.
"""

from synsculptor import corpus, metrics, synergy, synth
from synsculptor.kinmodel import load_bundled_model


def report(model, label, traj):
    slide = metrics.foot_sliding_ratio(traj, model)
    power = metrics.mechanical_power(traj, model)
    dp, dke = metrics.energetics(traj, model)
    print(f"  {label:<26} slide {slide:>6.4f}   power {power:>7.2f} W   dKE {dke:.6f} J")
    return slide, power


def main():
    model = load_bundled_model("humanoid19")
    squat = corpus.squat(model)
    library = synergy.build_library([squat], model, name="squat-only")
    S = library.find("squat-01").synergy.S

    external = corpus.with_band_limited_noise(
        squat, model, rel_amplitude=0.1, min_hz=10.0, seed=7, source="external"
    )
    projected = synth.project_external(external, S, model)
    plain = synth.project_external(external, S, model, torso_task=None)

    print("clean baseline:")
    report(model, "squat (clean)", squat)
    print("external input and projections:")
    s0, p0 = report(model, "noisy external", external)
    s1, p1 = report(model, "S S^T N_t (torso-safe)", projected)
    report(model, "S S^T only", plain)
    print(f"\n  sliding reduction {(1 - s1 / s0):.1%}   power reduction {(1 - p1 / p0):.1%}")


if __name__ == "__main__":
    main()
