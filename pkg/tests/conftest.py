import copy

import numpy as np
import pytest

from synsculptor import kinmodel as km

PEND_MASS = 1.7
PEND_LEN = 0.45
PEND_EPS_INERTIA = 1e-8

PENDULUM_DOC = {
    "name": "pendulum",
    "gravity": [0.0, 0.0, -9.81],
    "bodies": [
        {
            "name": "base",
            "parent": None,
            "joint": {"type": "free6"},
            "transform": {"xyz": [0, 0, 0], "rpy": [0, 0, 0]},
            "inertial": {"mass": 3.0, "com": [0, 0, 0], "inertia": [0.1, 0, 0, 0.1, 0, 0.1]},
        },
        {
            "name": "bob",
            "parent": "base",
            "joint": {"type": "revolute", "axis": [0, 1, 0]},
            "transform": {"xyz": [0, 0, 0.5], "rpy": [0, 0, 0]},
            "inertial": {
                "mass": PEND_MASS,
                "com": [0, 0, -PEND_LEN],
                "inertia": [PEND_EPS_INERTIA, 0, 0, PEND_EPS_INERTIA, 0, PEND_EPS_INERTIA],
            },
        },
    ],
    "frames": [],
}


@pytest.fixture(scope="session")
def humanoid():
    from importlib import resources

    with resources.as_file(resources.files("synsculptor") / "models" / "humanoid19.json") as p:
        return km.load_model(p)


@pytest.fixture(scope="session")
def chain():
    from importlib import resources

    with resources.as_file(resources.files("synsculptor") / "models" / "chain3.json") as p:
        return km.load_model(p)


@pytest.fixture(scope="session")
def pendulum():
    return km.load_model(copy.deepcopy(PENDULUM_DOC))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def corpus_motions(humanoid):
    from synsculptor import corpus

    return corpus.build_corpus(humanoid)


@pytest.fixture(scope="session")
def squat_library(humanoid, corpus_motions):
    from synsculptor import synergy

    return synergy.build_library([corpus_motions["squat"]], humanoid, name="squat-only")


@pytest.fixture(scope="session")
def corpus_library(humanoid, corpus_motions):
    from synsculptor import synergy

    return synergy.build_library(list(corpus_motions.values()), humanoid, name="corpus")
