"""HTTP service exposing the motion engine to editors and scripts.

One model per process. Uploaded trajectories and libraries are immutable
snapshots held in memory: re-uploading a library name mints a new
monotonically increasing version with a fresh id, and synthesis requests
made against an older id keep resolving to the old snapshot.

Every response carries a content_hash (64-bit FNV-1a over the canonical
JSON of the payload without the hash field) so clients can cache and
detect stale responses. Errors: 400 malformed body, 404 unknown id or
label, 409 model mismatch, 422 degenerate numerics.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import kinmodel as km
from . import metrics as metrics_mod
from . import synergy as synergy_mod
from . import synth as synth_mod
from .canonical import content_hash
from .segmenter import segment as segment_op, segments_to_csv
from .synth import plan_from_dict
from .trajio import JointTrajectory, make_trajectory, TrajectoryError, validate_trajectory


class _Store:
    """Process state: immutable snapshots behind one allocation lock."""

    def __init__(self, model: km.KinematicModel):
        self.model = model
        self.lock = threading.Lock()
        self.trajectories: Dict[str, JointTrajectory] = {}
        self.libraries: Dict[str, synergy_mod.SynergyLibrary] = {}
        self.library_versions: Dict[str, int] = {}
        self.session_plans: Dict[str, dict] = {}
        self._traj_counter = 0

    def add_trajectory(self, traj: JointTrajectory) -> str:
        with self.lock:
            self._traj_counter += 1
            tid = f"traj-{self._traj_counter:04d}"
            self.trajectories[tid] = traj
            return tid

    def add_library(self, lib: synergy_mod.SynergyLibrary) -> tuple:
        with self.lock:
            version = self.library_versions.get(lib.name, 0) + 1
            self.library_versions[lib.name] = version
            lid = f"{lib.name}@v{version}"
            self.libraries[lid] = lib
            return lid, version


class TrajectoryUpload(BaseModel):
    model: str
    rate_hz: float = Field(gt=0)
    positions: List[List[float]]
    velocities: Optional[List[List[float]]] = None
    t0: float = 0.0
    style: Optional[str] = None
    source: Optional[str] = None


class SegmentBody(BaseModel):
    dp_threshold: float = 0.75
    min_duration_s: float = 0.5


class LibraryBuild(BaseModel):
    trajectory_ids: List[str]
    name: str = "library"
    k: int = 3
    dp_threshold: float = 0.75
    min_duration_s: float = 0.5
    include_base: bool = True


class LibraryUpload(BaseModel):
    build: Optional[LibraryBuild] = None
    upload: Optional[dict] = None


class CoeffsBody(BaseModel):
    mode: str = "stored"
    values: Optional[object] = None


class SynthesizeBody(BaseModel):
    library: str
    label: str
    coeffs: CoeffsBody = CoeffsBody()
    duration_s: Optional[float] = None
    rate_hz: float = 100.0
    include_metrics: bool = True


class SequenceStep(BaseModel):
    library: str
    label: str
    coeffs: Optional[CoeffsBody] = None
    duration_s: Optional[float] = None
    transition: Optional[dict] = None


class SequenceBody(BaseModel):
    rate_hz: float = 100.0
    steps: List[SequenceStep]
    include_metrics: bool = True
    session: Optional[str] = None


class MetricsItem(BaseModel):
    trajectory_id: str
    label: str


class MetricsBody(BaseModel):
    items: List[MetricsItem]
    baseline_label: Optional[str] = None
    eval_rate_hz: float = 1000.0


class TorsoTaskBody(BaseModel):
    frame: str = "upper_torso"
    kind: str = "orientation3"


class ProjectBody(BaseModel):
    trajectory_id: str
    library: Optional[str] = None
    label: Optional[str] = None
    S: Optional[List[List[float]]] = None
    torso_task: Optional[TorsoTaskBody] = TorsoTaskBody()
    include_metrics: bool = False


def _traj_doc(traj: JointTrajectory) -> dict:
    return {
        "model": traj.model,
        "rate_hz": traj.rate_hz,
        "style": traj.style,
        "source": traj.source,
        "n_frames": traj.n_frames,
        "duration_s": traj.duration_s,
        "times": traj.times.tolist(),
        "positions": traj.positions.tolist(),
        "velocities": traj.velocities.tolist(),
    }


def _skeleton_doc(model: km.KinematicModel, traj: JointTrajectory) -> dict:
    poses = km.forward_kinematics(model, traj.positions)
    names = list(model.frame_names())
    pts = np.stack([poses.position(name) for name in names], axis=1)
    n_bodies = len(model.bodies)
    edges = [[model.bodies[i].parent, i] for i in range(1, n_bodies)]
    for j, name in enumerate(names[n_bodies:]):
        body_idx, _ = model.frames[name]
        edges.append([body_idx, n_bodies + j])
    return {"names": names, "edges": edges, "positions": pts.tolist()}


def _report_doc(report: metrics_mod.MetricsReport) -> dict:
    return {
        "label": report.label,
        "mean_dP": report.mean_dp,
        "mean_dKE_J": report.mean_dke_j,
        "mean_power_W": report.mean_power_w,
        "power_W_per_kg": report.power_w_per_kg,
        "foot_slide_ratio": report.foot_slide_ratio,
        "rate_hz": report.rate_hz,
    }


def _finalize(payload: dict) -> JSONResponse:
    payload["content_hash"] = content_hash(payload)
    return JSONResponse(payload)


def create_app(
    model: km.KinematicModel,
    libraries: Optional[List[synergy_mod.SynergyLibrary]] = None,
    cors_origin: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="synsculptor", docs_url=None, redoc_url=None)
    store = _Store(model)
    app.state.store = store
    for lib in libraries or []:
        store.add_library(lib)
    foot_frames = tuple(f for f in metrics_mod.FOOT_FRAMES_DEFAULT if f in model.frames)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def _on_schema(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    @app.exception_handler(TrajectoryError)
    async def _on_traj(request: Request, exc: TrajectoryError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(km.RankDeficiencyError)
    async def _on_rank(request: Request, exc: km.RankDeficiencyError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(synergy_mod.DegenerateSegmentError)
    async def _on_degenerate(request: Request, exc: synergy_mod.DegenerateSegmentError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(synth_mod.BlendWindowError)
    async def _on_blend(request: Request, exc: synth_mod.BlendWindowError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(KeyError)
    async def _on_missing(request: Request, exc: KeyError):
        msg = str(exc.args[0]) if exc.args else str(exc)
        return JSONResponse(status_code=404, content={"error": msg})

    @app.exception_handler(ValueError)
    async def _on_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    def _get_traj(tid: str) -> JointTrajectory:
        if tid not in store.trajectories:
            raise KeyError(f"unknown trajectory id {tid!r}")
        return store.trajectories[tid]

    def _get_library(lid: str) -> synergy_mod.SynergyLibrary:
        if lid not in store.libraries:
            raise KeyError(f"unknown library id {lid!r}")
        return store.libraries[lid]

    def _check_model_name(name: str):
        if name != model.name:
            return JSONResponse(
                status_code=409,
                content={"error": f"server runs model {model.name!r}, request names {name!r}"},
            )
        return None

    @app.get("/model")
    def get_model():
        doc = {
            "name": model.name,
            "n_q": model.n_q,
            "n_v": model.n_v,
            "joint_names": list(model.joint_names),
            "frame_names": list(model.frame_names()),
            "total_mass": model.total_mass,
            "gravity": model.gravity.tolist(),
            "document": model.document,
        }
        return _finalize(doc)

    @app.post("/trajectories")
    def post_trajectory(body: TrajectoryUpload):
        mismatch = _check_model_name(body.model)
        if mismatch:
            return mismatch
        velocities = None if body.velocities is None else np.asarray(body.velocities)
        traj = make_trajectory(
            np.asarray(body.positions, dtype=float),
            body.rate_hz,
            body.model,
            velocities=velocities,
            t0=body.t0,
            style=body.style,
            source=body.source,
        )
        validate_trajectory(traj, model)
        tid = store.add_trajectory(traj)
        return _finalize(
            {"id": tid, "n_frames": traj.n_frames, "duration_s": traj.duration_s}
        )

    @app.post("/trajectories/{tid}/segment")
    def post_segment(tid: str, body: SegmentBody):
        traj = _get_traj(tid)
        segs = segment_op(
            traj, model, dp_threshold=body.dp_threshold, min_duration_s=body.min_duration_s
        )
        return _finalize(
            {
                "trajectory_id": tid,
                "segments": [
                    {
                        "start": s.start,
                        "end": s.end,
                        "start_s": s.start_time,
                        "end_s": s.end_time,
                        "peak_dP": s.peak_dp,
                    }
                    for s in segs
                ],
                "csv": segments_to_csv(segs),
            }
        )

    @app.post("/libraries")
    def post_library(body: LibraryUpload):
        if (body.build is None) == (body.upload is None):
            return JSONResponse(
                status_code=400,
                content={"error": "provide exactly one of 'build' or 'upload'"},
            )
        if body.build is not None:
            trajs = [_get_traj(t) for t in body.build.trajectory_ids]
            lib = synergy_mod.build_library(
                trajs,
                model,
                dp_threshold=body.build.dp_threshold,
                k=body.build.k,
                min_duration_s=body.build.min_duration_s,
                name=body.build.name,
                include_base=body.build.include_base,
            )
        else:
            lib = synergy_mod.library_from_dict(body.upload)
            if lib.model != model.name:
                return JSONResponse(
                    status_code=409,
                    content={
                        "error": f"library model {lib.model!r}, server runs {model.name!r}"
                    },
                )
        lid, version = store.add_library(lib)
        return _finalize(
            {
                "id": lid,
                "name": lib.name,
                "version": version,
                "model": lib.model,
                "labels": lib.labels(),
            }
        )

    @app.get("/libraries/{lid}")
    def get_library(lid: str):
        lib = _get_library(lid)
        return _finalize({"id": lid, "library": synergy_mod.library_to_dict(lib)})

    def _synth_response(traj: JointTrajectory, include_metrics: bool, label: str) -> dict:
        payload = {
            "trajectory": _traj_doc(traj),
            "skeleton": _skeleton_doc(model, traj),
        }
        if include_metrics:
            payload["metrics"] = _report_doc(
                metrics_mod.evaluate(traj, model, label, foot_frames=foot_frames)
            )
        return payload

    @app.post("/synthesize")
    def post_synthesize(body: SynthesizeBody):
        lib = _get_library(body.library)
        entry = lib.find(body.label)
        schedule = synth_mod.CoefficientSchedule(mode=body.coeffs.mode, values=body.coeffs.values)
        req = synth_mod.SynthesisRequest(
            synergy=entry.synergy,
            schedule=schedule,
            duration_s=body.duration_s,
            rate_hz=body.rate_hz,
        )
        traj = synth_mod.reconstruct(model, req, style=entry.style)
        return _finalize(_synth_response(traj, body.include_metrics, body.label))

    @app.post("/sequence")
    def post_sequence(body: SequenceBody):
        doc = {
            "rate_hz": body.rate_hz,
            "steps": [
                {k: v for k, v in s.model_dump().items() if v is not None}
                for s in body.steps
            ],
        }
        plan = plan_from_dict(doc, store.libraries)
        traj = synth_mod.sequence(model, plan)
        if body.session:
            with store.lock:
                store.session_plans[body.session] = doc
        return _finalize(_synth_response(traj, body.include_metrics, "sequence"))

    @app.post("/metrics")
    def post_metrics(body: MetricsBody):
        reports = [
            metrics_mod.evaluate(
                _get_traj(item.trajectory_id),
                model,
                item.label,
                body.eval_rate_hz,
                foot_frames=foot_frames,
            )
            for item in body.items
        ]
        payload = {
            "reports": [_report_doc(r) for r in reports],
            "csv": metrics_mod.reports_to_csv(reports),
        }
        if body.baseline_label is not None:
            payload["compare_csv"] = metrics_mod.compare(reports, body.baseline_label)
        return _finalize(payload)

    @app.post("/project")
    def post_project(body: ProjectBody):
        traj = _get_traj(body.trajectory_id)
        if (body.S is None) == (body.library is None):
            return JSONResponse(
                status_code=400,
                content={"error": "provide a basis either as 'S' or as 'library'+'label'"},
            )
        if body.S is not None:
            S = np.asarray(body.S, dtype=float)
        else:
            if body.label is None:
                return JSONResponse(
                    status_code=400, content={"error": "'library' needs a 'label'"}
                )
            S = _get_library(body.library).find(body.label).synergy.S
        task = None
        if body.torso_task is not None:
            task = km.TaskSpec(frame=body.torso_task.frame, kind=body.torso_task.kind)
        out = synth_mod.project_external(traj, S, model, torso_task=task)
        payload = {"trajectory": _traj_doc(out), "skeleton": _skeleton_doc(model, out)}
        if body.include_metrics:
            payload["metrics"] = _report_doc(
                metrics_mod.evaluate(out, model, "projected", foot_frames=foot_frames)
            )
        return _finalize(payload)

    return app


def load_model_arg(spec: str) -> km.KinematicModel:
    """Model CLI argument: a path to a JSON file or a bundled model name."""
    path = Path(spec)
    if path.exists():
        return km.load_model(path)
    return km.load_bundled_model(spec)


def load_library_dir(path) -> List[synergy_mod.SynergyLibrary]:
    libs = []
    for f in sorted(Path(path).glob("*.json")):
        libs.append(synergy_mod.load_library(f))
    return libs
