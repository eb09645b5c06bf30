"""Record real server responses as fixtures for the browser editor tests.

Run from the repository root:  python3 scripts/record_ui_fixtures.py

The editor's test suite replays these through a fake transport, so the
frames, metrics, and hashes it asserts against are genuine engine
output. Request bodies here must mirror the TypeScript request builders
field for field; the fake server keys fixtures by re-serializing each
recorded body, which keeps number formatting differences out of the
lookup.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from synsculptor import corpus, synergy
from synsculptor.kinmodel import load_bundled_model
from synsculptor.server import create_app

OUT = Path(__file__).resolve().parents[1] / "frontend" / "test" / "fixtures"

LIB_ID = "squat-only@v1"
LABEL_A = "squat-01"
LABEL_B = "squat-02"
PANEL_DURATION = 0.5
PANEL_RATE = 100.0


def synth_body(label, coeffs, duration_s, rate_hz=PANEL_RATE):
    return {
        "library": LIB_ID,
        "label": label,
        "coeffs": coeffs,
        "duration_s": duration_s,
        "rate_hz": rate_hz,
    }


def main():
    model = load_bundled_model("humanoid19")
    squat = corpus.squat(model)
    lib = synergy.build_library([squat], model, name="squat-only")
    app = create_app(model, [lib])
    client = TestClient(app)
    exchanges = []

    def record(method, path, body=None):
        if method == "GET":
            r = client.get(path)
        else:
            r = client.post(path, json=body)
        exchanges.append(
            {
                "request": {"method": method, "path": path, "body": body},
                "status": r.status_code,
                "response": r.json(),
            }
        )
        return r.json()

    record("GET", "/model")
    lib_doc = record("GET", f"/libraries/{LIB_ID}")["library"]
    entry = next(e for e in lib_doc["entries"] if e["label"] == LABEL_A)
    mean = entry["mean_coeffs"]
    sigma = entry["sigma"]
    native_duration = entry["duration_s"]
    entry_b = next(e for e in lib_doc["entries"] if e["label"] == LABEL_B)

    # coefficient panel: defaults replay the stored series at the native span
    record("POST", "/synthesize", synth_body(LABEL_A, {"mode": "stored"}, native_duration))
    # panel flow at a user-set duration: default, one slider moved, a second
    # move for the stale-response test, and all-zero sliders
    default_at_half = record(
        "POST", "/synthesize", synth_body(LABEL_A, {"mode": "stored"}, PANEL_DURATION)
    )
    changed = [mean[0] + sigma[0], mean[1], mean[2]]
    changed_resp = record(
        "POST",
        "/synthesize",
        synth_body(LABEL_A, {"mode": "const", "values": changed}, PANEL_DURATION),
    )
    second = [mean[0] + 0.5 * sigma[0], mean[1], mean[2]]
    record(
        "POST",
        "/synthesize",
        synth_body(LABEL_A, {"mode": "const", "values": second}, PANEL_DURATION),
    )
    record(
        "POST",
        "/synthesize",
        synth_body(LABEL_A, {"mode": "const", "values": [0.0, 0.0, 0.0]}, PANEL_DURATION),
    )
    # panel counterpart of the one-step timeline below
    record("POST", "/synthesize", synth_body(LABEL_A, {"mode": "stored"}, 0.6))

    # timeline: two steps with a legal blend, the reordered variant, a
    # single-step plan, and a blend-window violation
    step_a = {
        "library": LIB_ID,
        "label": LABEL_A,
        "coeffs": {"mode": "stored"},
        "duration_s": 0.6,
    }
    step_b = {
        "library": LIB_ID,
        "label": LABEL_B,
        "coeffs": {"mode": "stored"},
        "duration_s": 0.8,
    }
    blend = {"kind": "linear-blend", "window_s": 0.3}
    record(
        "POST",
        "/sequence",
        {"rate_hz": PANEL_RATE, "steps": [{**step_a, "transition": blend}, step_b]},
    )
    record("POST", "/sequence", {"rate_hz": PANEL_RATE, "steps": [step_a, step_b]})
    record("POST", "/sequence", {"rate_hz": PANEL_RATE, "steps": [step_b, step_a]})
    record("POST", "/sequence", {"rate_hz": PANEL_RATE, "steps": [step_a]})
    record(
        "POST",
        "/sequence",
        {
            "rate_hz": PANEL_RATE,
            "steps": [
                {**step_a, "transition": {"kind": "linear-blend", "window_s": 5.0}},
                step_b,
            ],
        },
    )

    # metrics panel cross-check: upload the two panel trajectories the UI
    # ratios are built from and record the server's own comparison
    ids = []
    for label, resp in (("base", default_at_half), ("edit", changed_resp)):
        traj = resp["trajectory"]
        up = record(
            "POST",
            "/trajectories",
            {
                "model": traj["model"],
                "rate_hz": traj["rate_hz"],
                "positions": traj["positions"],
                "velocities": traj["velocities"],
            },
        )
        ids.append((up["id"], label))
    record(
        "POST",
        "/metrics",
        {
            "items": [{"trajectory_id": tid, "label": label} for tid, label in ids],
            "baseline_label": "base",
            "eval_rate_hz": 1000.0,
        },
    )

    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / "exchanges.json"
    path.write_text(json.dumps(exchanges) + "\n")
    total = sum(len(json.dumps(e)) for e in exchanges)
    print(f"wrote {path}: {len(exchanges)} exchanges, ~{total // 1024} KiB")


if __name__ == "__main__":
    main()
