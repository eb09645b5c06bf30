"""Per-segment joint-velocity synergies and style-conditioned libraries.

A synergy is the uncentered PCA of a segment's velocity data matrix
(n_v rows by T_seg columns): the basis S holds the k leading left
singular vectors, the coefficient series is the projection of each
velocity frame onto S. No mean is subtracted, so S S^T applies directly
to raw velocities. Column signs are fixed by making the largest-magnitude
entry of each basis vector positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .kinmodel import KinematicModel
from .segmenter import MotionSegment, segment as segment_op
from .trajio import JointTrajectory

K_DEFAULT = 3


class DegenerateSegmentError(ValueError):
    """Segment carries no usable velocity signal."""


@dataclass(frozen=True)
class Synergy:
    q0: np.ndarray
    S: np.ndarray
    sigma: np.ndarray
    var_frac: np.ndarray
    total_variance: float
    coeff_series: np.ndarray
    duration_s: float
    segment_ref: Optional[str] = None

    @property
    def k(self) -> int:
        return self.S.shape[1]

    @property
    def n_v(self) -> int:
        return self.S.shape[0]

    @property
    def mean_coeffs(self) -> np.ndarray:
        """Time-mean of each coefficient series: the default constant drive."""
        return self.coeff_series.mean(axis=1)

    @property
    def native_rate_hz(self) -> float:
        return (self.coeff_series.shape[1] - 1) / self.duration_s


@dataclass(frozen=True)
class LibraryEntry:
    synergy: Synergy
    style: str
    label: str


@dataclass(frozen=True)
class SynergyLibrary:
    name: str
    model: str
    entries: tuple
    created: Optional[str] = None

    def find(self, label: str) -> LibraryEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(f"no library entry labeled {label!r}")

    def labels(self) -> List[str]:
        return [e.label for e in self.entries]


def _fix_column_signs(S: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(S), axis=0)
    signs = np.sign(S[idx, np.arange(S.shape[1])])
    signs[signs == 0] = 1.0
    return S * signs


def extract(
    seg: MotionSegment,
    traj: JointTrajectory,
    k: int = K_DEFAULT,
    include_base: bool = True,
) -> Synergy:
    """Uncentered PCA synergy of one segment's velocities.

    With include_base=False the six base rows are excluded from the
    decomposition; the returned basis keeps n_v rows with zeros there.
    """
    V_full = traj.velocities[seg.start : seg.end].T
    n_v, T_seg = V_full.shape
    rows = np.arange(n_v) if include_base else np.arange(6, n_v)
    n_eff = len(rows)
    if not 1 <= k <= n_eff:
        raise ValueError(f"k must be in [1, {n_eff}], got {k}")
    if T_seg < k + 1:
        raise ValueError(f"segment has {T_seg} frames; need at least k+1 = {k + 1}")
    V = V_full[rows]
    if not np.any(V):
        raise DegenerateSegmentError("zero-energy segment")

    U, s, _ = np.linalg.svd(V, full_matrices=False)
    S_rows = _fix_column_signs(U[:, :k])
    S = np.zeros((n_v, k))
    S[rows] = S_rows
    total = float(np.sum(s**2))
    return Synergy(
        q0=traj.positions[seg.start].copy(),
        S=S,
        sigma=s[:k].copy(),
        var_frac=(s[:k] ** 2) / total,
        total_variance=total,
        coeff_series=S.T @ V_full,
        duration_s=(T_seg - 1) / traj.rate_hz,
        segment_ref=(
            f"{seg.traj_ref or 'trajectory'}[{seg.start}:{seg.end}]"
        ),
    )


def variance_explained(syn: Synergy, k_prime: Optional[int] = None) -> float:
    """Cumulative variance fraction of the first k_prime components."""
    if k_prime is None:
        k_prime = syn.k
    if not 1 <= k_prime <= syn.k:
        raise ValueError(f"k_prime must be in [1, {syn.k}], got {k_prime}")
    return float(np.sum(syn.var_frac[:k_prime]))


def build_library(
    trajectories: Sequence[JointTrajectory],
    model: KinematicModel,
    dp_threshold: float = 0.75,
    k: int = K_DEFAULT,
    min_duration_s: float = 0.5,
    name: str = "library",
    include_base: bool = True,
    created: Optional[str] = None,
) -> SynergyLibrary:
    """Segment every trajectory and extract one synergy per segment.

    Entries are labeled "<style>-<index>" with a per-style running index.
    """
    entries = []
    style_counts = {}
    for traj in trajectories:
        if traj.model != model.name:
            raise ValueError(
                f"trajectory references model {traj.model!r}, library uses {model.name!r}"
            )
        style = traj.style or "untagged"
        ref = f"{style}:{traj.n_frames}f"
        for seg in segment_op(traj, model, dp_threshold, min_duration_s, traj_ref=ref):
            idx = style_counts.get(style, 0)
            style_counts[style] = idx + 1
            entries.append(
                LibraryEntry(
                    synergy=extract(seg, traj, k=k, include_base=include_base),
                    style=style,
                    label=f"{style}-{idx:02d}",
                )
            )
    return SynergyLibrary(name=name, model=model.name, entries=tuple(entries), created=created)


def library_to_dict(lib: SynergyLibrary) -> dict:
    doc = {"name": lib.name, "model": lib.model, "entries": []}
    if lib.created is not None:
        doc["created"] = lib.created
    for e in lib.entries:
        s = e.synergy
        doc["entries"].append(
            {
                "style": e.style,
                "label": e.label,
                "q0": s.q0.tolist(),
                "S": s.S.tolist(),
                "sigma": s.sigma.tolist(),
                "mean_coeffs": s.mean_coeffs.tolist(),
                "var_frac": s.var_frac.tolist(),
                "total_variance": s.total_variance,
                "duration_s": s.duration_s,
                "segment_ref": s.segment_ref,
                "coeff_series": s.coeff_series.tolist(),
            }
        )
    return doc


def library_from_dict(doc: dict) -> SynergyLibrary:
    entries = []
    for ed in doc.get("entries", ()):
        syn = Synergy(
            q0=np.asarray(ed["q0"], dtype=float),
            S=np.asarray(ed["S"], dtype=float),
            sigma=np.asarray(ed["sigma"], dtype=float),
            var_frac=np.asarray(ed["var_frac"], dtype=float),
            total_variance=float(ed["total_variance"]),
            coeff_series=np.asarray(ed["coeff_series"], dtype=float),
            duration_s=float(ed["duration_s"]),
            segment_ref=ed.get("segment_ref"),
        )
        entries.append(LibraryEntry(synergy=syn, style=ed["style"], label=ed["label"]))
    return SynergyLibrary(
        name=doc["name"], model=doc["model"], entries=tuple(entries), created=doc.get("created")
    )


def save_library(lib: SynergyLibrary, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(library_to_dict(lib), indent=2) + "\n")
    return path


def load_library(path) -> SynergyLibrary:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"unreadable library file {path}: {exc}") from exc
    return library_from_dict(doc)
