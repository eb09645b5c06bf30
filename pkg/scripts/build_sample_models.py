"""Regenerate the bundled model documents under src/synsculptor/models/.

Run from the repository root:  python3 scripts/build_sample_models.py

The humanoid is a 20-body, 19-joint biped (n_v = 25) with plausible
segment masses totalling about 60 kg, z up, x forward. Leg links are
0.40 m thigh and shank with a pitch-roll ankle, so a crouch of hip=-f,
knee=+2f, ankle=-f keeps the sole flat and the toe pinned. The chain
model is a free base with two revolute links, used by small exact tests.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "synsculptor" / "models"


def box_inertia(mass, lx, ly, lz):
    """Solid box about its COM, principal axes."""
    ixx = mass * (ly**2 + lz**2) / 12.0
    iyy = mass * (lx**2 + lz**2) / 12.0
    izz = mass * (lx**2 + ly**2) / 12.0
    return [round(v, 8) for v in (ixx, 0.0, 0.0, iyy, 0.0, izz)]


def body(name, parent, jtype, axis, xyz, mass, com, inertia_box):
    b = {
        "name": name,
        "parent": parent,
        "joint": {"type": jtype},
        "transform": {"xyz": list(xyz), "rpy": [0.0, 0.0, 0.0]},
        "inertial": {
            "mass": mass,
            "com": list(com),
            "inertia": box_inertia(mass, *inertia_box),
        },
    }
    if jtype != "free6":
        b["joint"]["axis"] = list(axis)
    return b


X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)


def arm(side, sign):
    return [
        body(f"{side}_shoulder", "torso_upper", "revolute", Y,
             (0.0, sign * 0.20, 0.26), 0.8, (0.0, 0.0, 0.0), (0.08, 0.08, 0.08)),
        body(f"{side}_upper_arm", f"{side}_shoulder", "revolute", X,
             (0.0, sign * 0.05, 0.0), 2.0, (0.0, 0.0, -0.12), (0.07, 0.07, 0.28)),
        body(f"{side}_forearm", f"{side}_upper_arm", "revolute", Y,
             (0.0, 0.0, -0.26), 1.3, (0.0, 0.0, -0.11), (0.06, 0.06, 0.25)),
    ]


def leg(side, sign):
    return [
        body(f"{side}_hip", "pelvis", "revolute", Y,
             (0.0, sign * 0.10, 0.0), 0.7, (0.0, 0.0, 0.0), (0.09, 0.09, 0.09)),
        body(f"{side}_thigh", f"{side}_hip", "revolute", X,
             (0.0, 0.0, 0.0), 5.5, (0.0, 0.0, -0.18), (0.12, 0.12, 0.42)),
        body(f"{side}_shank", f"{side}_thigh", "revolute", Y,
             (0.0, 0.0, -0.40), 2.9, (0.0, 0.0, -0.18), (0.09, 0.09, 0.40)),
        body(f"{side}_ankle", f"{side}_shank", "revolute", Y,
             (0.0, 0.0, -0.40), 0.25, (0.0, 0.0, 0.0), (0.05, 0.05, 0.05)),
        body(f"{side}_foot", f"{side}_ankle", "revolute", X,
             (0.0, 0.0, 0.0), 0.9, (0.03, 0.0, -0.03), (0.22, 0.09, 0.06)),
    ]


def humanoid():
    bodies = [
        body("pelvis", None, "free6", None, (0, 0, 0), 9.0, (0.0, 0.0, 0.05),
             (0.25, 0.30, 0.18)),
        body("torso_lower", "pelvis", "revolute", Y, (0.0, 0.0, 0.10), 6.0,
             (0.0, 0.0, 0.06), (0.24, 0.28, 0.16)),
        body("torso_upper", "torso_lower", "revolute", Z, (0.0, 0.0, 0.12), 12.0,
             (0.0, 0.0, 0.14), (0.27, 0.32, 0.30)),
        body("head", "torso_upper", "revolute", Y, (0.0, 0.0, 0.32), 4.2,
             (0.0, 0.0, 0.10), (0.16, 0.16, 0.20)),
    ]
    bodies += arm("l", +1.0) + arm("r", -1.0)
    bodies += leg("l", +1.0) + leg("r", -1.0)
    frames = [
        {"name": "upper_torso", "body": "torso_upper", "offset": [0.0, 0.0, 0.18]},
        {"name": "left_foot", "body": "l_foot", "offset": [0.02, 0.0, -0.06]},
        {"name": "right_foot", "body": "r_foot", "offset": [0.02, 0.0, -0.06]},
        {"name": "left_hand", "body": "l_forearm", "offset": [0.0, 0.0, -0.24]},
        {"name": "right_hand", "body": "r_forearm", "offset": [0.0, 0.0, -0.24]},
    ]
    return {
        "name": "humanoid19",
        "gravity": [0.0, 0.0, -9.81],
        "bodies": bodies,
        "frames": frames,
    }


def chain3():
    bodies = [
        body("base", None, "free6", None, (0, 0, 0), 2.0, (0.0, 0.0, 0.0),
             (0.15, 0.15, 0.15)),
        body("link1", "base", "revolute", Y, (0.0, 0.0, 0.20), 1.0,
             (0.0, 0.0, 0.10), (0.04, 0.04, 0.20)),
        body("link2", "link1", "revolute", Y, (0.0, 0.0, 0.20), 0.8,
             (0.0, 0.0, 0.10), (0.03, 0.03, 0.18)),
    ]
    frames = [{"name": "tip", "body": "link2", "offset": [0.0, 0.0, 0.20]}]
    return {
        "name": "chain3",
        "gravity": [0.0, 0.0, -9.81],
        "bodies": bodies,
        "frames": frames,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for doc in (humanoid(), chain3()):
        path = OUT / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {path} ({len(doc['bodies'])} bodies)")


if __name__ == "__main__":
    main()
