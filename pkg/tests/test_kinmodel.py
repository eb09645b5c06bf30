import copy

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from synsculptor import kinmodel as km
from conftest import PEND_EPS_INERTIA, PEND_LEN, PEND_MASS, PENDULUM_DOC


def pend_doc():
    return copy.deepcopy(PENDULUM_DOC)


class TestLoadModel:
    def test_chain_dimensions(self, chain):
        assert chain.n_v == 8
        assert chain.n_q == 9

    def test_humanoid_dimensions(self, humanoid):
        assert humanoid.n_v == 25
        assert humanoid.n_q == 26
        assert len(humanoid.joint_names) == 19

    def test_non_spd_inertia_rejected(self):
        doc = pend_doc()
        doc["bodies"][1]["inertial"]["inertia"] = [-0.1, 0, 0, 0.2, 0, 0.2]
        with pytest.raises(km.ModelError, match="non-SPD inertia.*bob"):
            km.load_model(doc)

    def test_unknown_parent_rejected(self):
        doc = pend_doc()
        doc["bodies"][1]["parent"] = "nowhere"
        with pytest.raises(km.ModelError, match="unknown parent.*bob"):
            km.load_model(doc)

    def test_misordered_bodies_rejected(self):
        doc = pend_doc()
        doc["bodies"][1]["parent"] = "bob"
        with pytest.raises(km.ModelError, match="cycle"):
            km.load_model(doc)

    def test_duplicate_frame_rejected(self):
        doc = pend_doc()
        doc["frames"] = [
            {"name": "tip", "body": "bob", "offset": [0, 0, -PEND_LEN]},
            {"name": "tip", "body": "base", "offset": [0, 0, 0]},
        ]
        with pytest.raises(km.ModelError, match="duplicate frame.*tip"):
            km.load_model(doc)

    def test_frame_shadowing_body_rejected(self):
        doc = pend_doc()
        doc["frames"] = [{"name": "bob", "body": "base", "offset": [0, 0, 0]}]
        with pytest.raises(km.ModelError, match="duplicate frame.*bob"):
            km.load_model(doc)

    def test_nonpositive_mass_rejected(self):
        doc = pend_doc()
        doc["bodies"][1]["inertial"]["mass"] = 0.0
        with pytest.raises(km.ModelError, match="mass.*bob|bob.*mass"):
            km.load_model(doc)

    def test_far_from_unit_axis_rejected(self):
        doc = pend_doc()
        doc["bodies"][1]["joint"]["axis"] = [0, 2, 0]
        with pytest.raises(km.ModelError, match="axis"):
            km.load_model(doc)

    def test_nearly_unit_axis_normalized(self):
        doc = pend_doc()
        doc["bodies"][1]["joint"]["axis"] = [0, 1.0005, 0]
        model = km.load_model(doc)
        assert np.allclose(model.bodies[1].axis, [0, 1, 0])

    def test_body_names_are_frames(self, humanoid):
        assert "pelvis" in humanoid.frames
        assert "upper_torso" in humanoid.frames
        assert "left_foot" in humanoid.frames


class TestForwardKinematics:
    def test_identity_configuration_accumulates_offsets(self, chain):
        q = km.neutral_configuration(chain)
        fk = km.forward_kinematics(chain, q)
        assert np.allclose(fk.position("base"), [0, 0, 0])
        assert np.allclose(fk.position("link1"), [0, 0, 0.2])
        assert np.allclose(fk.position("link2"), [0, 0, 0.4])
        assert np.allclose(fk.position("tip"), [0, 0, 0.6])

    def test_root_pose_equals_base_pose(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        fk = km.forward_kinematics(humanoid, q)
        assert np.allclose(fk.position("pelvis"), q[0:3])
        assert np.allclose(fk.rotation("pelvis"), oracles.wxyz_to_scipy(q[3:7]).as_matrix())

    def test_base_translation_equivariance(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        q2 = q.copy()
        q2[0:3] += [1.0, 0.0, 0.0]
        fk1 = km.forward_kinematics(humanoid, q)
        fk2 = km.forward_kinematics(humanoid, q2)
        for name in humanoid.frame_names():
            assert np.allclose(fk2.position(name) - fk1.position(name), [1, 0, 0], atol=1e-12)

    def test_two_link_trig_formula(self, chain, rng):
        L = 0.2
        for _ in range(10):
            t1, t2 = rng.uniform(-np.pi, np.pi, size=2)
            q = km.neutral_configuration(chain)
            q[7], q[8] = t1, t2
            tip = km.forward_kinematics(chain, q).position("tip")
            expect = np.array(
                [
                    L * np.sin(t1) + L * np.sin(t1 + t2),
                    0.0,
                    L + L * np.cos(t1) + L * np.cos(t1 + t2),
                ]
            )
            assert np.allclose(tip, expect, atol=1e-12)

    def test_matches_independent_fk(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=20)
        fk = km.forward_kinematics(humanoid, q)
        pos, rot = oracles.fk(humanoid, q)
        for i, b in enumerate(humanoid.bodies):
            assert np.allclose(fk.body_positions[:, i], pos[i], atol=1e-10)
            assert np.allclose(fk.body_rotations[:, i], rot[i].as_matrix(), atol=1e-10)
        for name in ("upper_torso", "left_foot", "right_hand"):
            p_o, _ = oracles.frame_pose(humanoid, q, name)
            assert np.allclose(fk.position(name), p_o, atol=1e-10)

    def test_dimension_mismatch(self, chain):
        with pytest.raises(ValueError, match="components"):
            km.forward_kinematics(chain, np.zeros(5))

    def test_non_unit_quaternion_rejected(self, chain):
        q = km.neutral_configuration(chain)
        q[3] = 1.1
        with pytest.raises(ValueError, match="quaternion"):
            km.forward_kinematics(chain, q)


class TestMassMatrix:
    def test_pendulum_joint_inertia(self, pendulum):
        q = km.neutral_configuration(pendulum)
        q[7] = 0.6
        A = km.mass_matrix(pendulum, q)
        expected = PEND_MASS * PEND_LEN**2 + PEND_EPS_INERTIA
        assert abs(A[6, 6] - expected) < 1e-12

    def test_symmetric_positive_definite(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=100)
        A = km.mass_matrix(humanoid, q)
        assert np.max(np.abs(A - np.swapaxes(A, 1, 2))) < 1e-10
        assert np.linalg.eigvalsh(A).min() > 0.0

    def test_energy_matches_per_body_oracle(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=100)
        v = rng.normal(size=(100, humanoid.n_v))
        A = km.mass_matrix(humanoid, q)
        ke = 0.5 * np.einsum("ti,tij,tj->t", v, A, v)
        ke_oracle = oracles.kinetic_energy(humanoid, q, v)
        rel = np.abs(ke - ke_oracle) / np.maximum(np.abs(ke_oracle), 1e-12)
        assert np.max(rel) < 1e-8

    def test_zero_velocity_zero_energy(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        assert km.kinetic_energy(humanoid, q, np.zeros(humanoid.n_v)) == 0.0


class TestBiasAndGravity:
    def test_zero_velocity_zero_bias(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=5)
        b = km.bias_forces(humanoid, q, np.zeros((5, humanoid.n_v)))
        assert np.allclose(b, 0.0, atol=1e-12)

    def test_pendulum_holding_torque(self, pendulum):
        for theta in (0.0, 0.3, 1.2, -0.7):
            q = km.neutral_configuration(pendulum)
            q[7] = theta
            g = km.gravity_vector(pendulum, q)
            assert abs(g[6] - PEND_MASS * 9.81 * PEND_LEN * np.sin(theta)) < 1e-10

    def test_energy_rate_identity(self, humanoid, rng):
        # d(KE)/dt along the flow equals v.(Gamma - g); the bias term does
        # work at rate v.b = 0.5 v.dA/dt.v, which the dA/dt term pays back.
        for _ in range(5):
            q = oracles.random_configuration(humanoid, rng)[0]
            v = rng.normal(scale=0.4, size=humanoid.n_v)
            a = rng.normal(scale=1.0, size=humanoid.n_v)
            tau = km.inverse_dynamics(humanoid, q, v, a)
            g = km.gravity_vector(humanoid, q)
            eps = 1e-5

            def ke_at(s):
                qs = km.integrate_configuration(humanoid, q, v + 0.5 * s * a, s)
                return km.kinetic_energy(humanoid, qs, v + s * a)

            dke = (ke_at(eps) - ke_at(-eps)) / (2 * eps)
            assert abs(dke - v @ (tau - g)) < 1e-4


class TestTaskJacobian:
    def test_base_position_block(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        J = km.task_jacobian(humanoid, q, km.TaskSpec(frame="pelvis", kind="position3"))
        expect = np.zeros((3, humanoid.n_v))
        expect[:, 3:6] = np.eye(3)
        assert np.allclose(J, expect, atol=1e-12)

    def test_revolute_column_is_axis_cross_lever(self, chain):
        q = km.neutral_configuration(chain)
        q[7], q[8] = 0.4, -0.9
        task = km.TaskSpec(frame="tip", kind="position3")
        J = km.task_jacobian(chain, q, task)
        fk = km.forward_kinematics(chain, q)
        x = fk.position("tip")
        for i, joint in ((1, "link1"), (2, "link2")):
            kin = km._kin(chain, q[None])
            a = kin.axw[0, i]
            o = kin.o[0, i]
            assert np.allclose(J[:, 6 + i - 1], np.cross(a, x - o), atol=1e-12)

    def test_matches_finite_differences(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        for frame, kind in (
            ("left_foot", "pose6"),
            ("right_hand", "position3"),
            ("upper_torso", "orientation3"),
            ("head", "pose6"),
        ):
            task = km.TaskSpec(frame=frame, kind=kind, point=(0.01, -0.02, 0.03))
            J = km.task_jacobian(humanoid, q, task)
            for _ in range(3):
                v = rng.normal(size=humanoid.n_v)
                ang, lin = oracles.task_velocity(humanoid, q, task, v)
                pred = J @ v
                if kind == "pose6":
                    assert np.allclose(pred[:3], ang, atol=1e-5)
                    assert np.allclose(pred[3:], lin, atol=1e-5)
                elif kind == "position3":
                    assert np.allclose(pred, lin, atol=1e-5)
                else:
                    assert np.allclose(pred, ang, atol=1e-5)

    def test_orientation_rows_are_pose6_angular_rows(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        t6 = km.TaskSpec(frame="left_foot", kind="pose6")
        t3 = km.TaskSpec(frame="left_foot", kind="orientation3")
        assert np.array_equal(km.task_jacobian(humanoid, q, t6)[:3], km.task_jacobian(humanoid, q, t3))

    def test_unknown_frame(self, humanoid):
        q = km.neutral_configuration(humanoid)
        with pytest.raises(km.UnknownFrameError, match="nope"):
            km.task_jacobian(humanoid, q, km.TaskSpec(frame="nope", kind="pose6"))

    def test_bad_task_kind(self):
        with pytest.raises(ValueError, match="task kind"):
            km.TaskSpec(frame="pelvis", kind="pose7")


class TestDynConsistentInverse:
    def test_identity_task(self, chain, rng):
        q = oracles.random_configuration(chain, rng)[0]
        A = km.mass_matrix(chain, q)
        lam, jbar = km.dyn_consistent_inverse(A, np.eye(chain.n_v))
        assert np.allclose(jbar, np.eye(chain.n_v), atol=1e-9)
        assert np.allclose(lam, A, atol=1e-8)

    def test_random_full_rank(self, chain, rng):
        q = oracles.random_configuration(chain, rng)[0]
        A = km.mass_matrix(chain, q)
        J = rng.normal(size=(3, 8))
        lam, jbar = km.dyn_consistent_inverse(A, J)
        assert np.max(np.abs(J @ jbar - np.eye(3))) < 1e-9
        lam2 = np.linalg.inv(J @ np.linalg.inv(A) @ J.T)
        assert np.allclose(lam, lam2, atol=1e-8)
        assert np.allclose(lam, lam.T, atol=1e-12)

    def test_rank_deficiency_is_an_error(self, chain, rng):
        q = oracles.random_configuration(chain, rng)[0]
        A = km.mass_matrix(chain, q)
        J = rng.normal(size=(2, 8))
        J = np.vstack([J, J[0] + J[1]])
        with pytest.raises(km.RankDeficiencyError, match="rank deficient"):
            km.dyn_consistent_inverse(A, J)

    def test_empty_task(self, chain, rng):
        q = oracles.random_configuration(chain, rng)[0]
        A = km.mass_matrix(chain, q)
        lam, jbar = km.dyn_consistent_inverse(A, np.zeros((0, chain.n_v)))
        assert lam.shape == (0, 0)
        N = km.nullspace(np.zeros((0, chain.n_v)), jbar)
        assert np.allclose(N, np.eye(chain.n_v))


class TestNullspace:
    def test_identity_task_kills_everything(self, chain, rng):
        q = oracles.random_configuration(chain, rng)[0]
        A = km.mass_matrix(chain, q)
        _, jbar = km.dyn_consistent_inverse(A, np.eye(chain.n_v))
        N = km.nullspace(np.eye(chain.n_v), jbar)
        assert np.allclose(N, 0.0, atol=1e-9)

    def test_projector_identities(self, humanoid, rng):
        frames = ("upper_torso", "left_foot", "right_hand", "pelvis", "head")
        kinds = ("orientation3", "position3", "pose6")
        for k in range(25):
            q = oracles.random_configuration(humanoid, rng)[0]
            A = km.mass_matrix(humanoid, q)
            task = km.TaskSpec(frame=frames[k % 5], kind=kinds[k % 3])
            J = km.task_jacobian(humanoid, q, task)
            lam, jbar = km.dyn_consistent_inverse(A, J)
            N = km.nullspace(J, jbar)
            m = J.shape[0]
            assert np.max(np.abs(J @ jbar - np.eye(m))) < 1e-9
            assert np.max(np.abs(J @ N)) < 1e-9
            assert np.max(np.abs(N @ N - N)) < 1e-9


class TestMomentumAndEnergy:
    def test_zero_velocity(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        v = np.zeros(humanoid.n_v)
        assert np.allclose(km.momentum(humanoid, q, v), 0.0)
        assert km.kinetic_energy(humanoid, q, v) == 0.0

    def test_pendulum_momentum(self, pendulum):
        q = km.neutral_configuration(pendulum)
        v = np.zeros(pendulum.n_v)
        v[6] = 2.0
        expected = 2.0 * (PEND_MASS * PEND_LEN**2 + PEND_EPS_INERTIA)
        assert abs(km.momentum(pendulum, q, v)[6] - expected) < 1e-12
        assert abs(km.kinetic_energy(pendulum, q, v) - expected) < 1e-12

    def test_momentum_is_av_and_ke_is_half_vp(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=10)
        v = rng.normal(size=(10, humanoid.n_v))
        p = km.momentum(humanoid, q, v)
        A = km.mass_matrix(humanoid, q)
        assert np.allclose(p, np.einsum("tij,tj->ti", A, v), atol=1e-12)
        ke = km.kinetic_energy(humanoid, q, v)
        assert np.allclose(ke, 0.5 * np.einsum("ti,ti->t", v, p), atol=1e-10)

    def test_base_linear_rows_are_system_momentum(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=5)
        v = rng.normal(size=(5, humanoid.n_v))
        p = km.momentum(humanoid, q, v)
        assert np.allclose(p[:, 3:6], oracles.linear_momentum(humanoid, q, v), atol=1e-7)


class TestInverseDynamics:
    def test_static_equals_gravity(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        z = np.zeros(humanoid.n_v)
        assert np.allclose(
            km.inverse_dynamics(humanoid, q, z, z), km.gravity_vector(humanoid, q), atol=1e-12
        )

    def test_matches_crba_composition(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=20)
        v = rng.normal(size=(20, humanoid.n_v))
        a = rng.normal(size=(20, humanoid.n_v))
        tau = km.inverse_dynamics(humanoid, q, v, a)
        A = km.mass_matrix(humanoid, q)
        comp = np.einsum("tij,tj->ti", A, a) + km.bias_forces(humanoid, q, v) + km.gravity_vector(humanoid, q)
        assert np.max(np.abs(tau - comp)) < 1e-9 * max(1.0, np.max(np.abs(tau)))

    def test_zero_accel_leaves_bias_plus_gravity(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng, T=10)
        v = rng.normal(size=(10, humanoid.n_v))
        tau = km.inverse_dynamics(humanoid, q, v, np.zeros_like(v))
        resid = tau - km.bias_forces(humanoid, q, v) - km.gravity_vector(humanoid, q)
        assert np.max(np.abs(resid)) < 1e-9

    def test_free_fall_needs_no_force(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        v = rng.normal(size=humanoid.n_v)
        A = km.mass_matrix(humanoid, q)
        b = km.bias_forces(humanoid, q, v)
        g = km.gravity_vector(humanoid, q)
        a = -np.linalg.solve(A, b + g)
        assert np.max(np.abs(km.inverse_dynamics(humanoid, q, v, a))) < 1e-8


class TestIntegration:
    def test_quaternion_norm_preserved(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        v = rng.normal(size=humanoid.n_v)
        for _ in range(100):
            q = km.integrate_configuration(humanoid, q, v, 0.01)
        assert abs(np.linalg.norm(q[3:7]) - 1.0) < 1e-12

    def test_matches_oracle_step(self, humanoid, rng):
        q = oracles.random_configuration(humanoid, rng)[0]
        v = rng.normal(size=humanoid.n_v)
        q1 = km.integrate_configuration(humanoid, q, v, 0.02)
        q2 = oracles.step_configuration(humanoid, q, v, 0.02)[0]
        assert np.allclose(q1, q2, atol=1e-12)

    def test_integrate_path_shape_and_start(self, chain, rng):
        q0 = km.neutral_configuration(chain)
        v = rng.normal(size=(40, chain.n_v))
        path = km.integrate_path(chain, q0, v, 0.01)
        assert path.shape == (40, chain.n_q)
        assert np.array_equal(path[0], q0)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_mass_matrix_spd_property(seed):
    from importlib import resources

    with resources.as_file(resources.files("synsculptor") / "models" / "chain3.json") as p:
        model = km.load_model(p)
    rng = np.random.default_rng(seed)
    q = oracles.random_configuration(model, rng)[0]
    A = km.mass_matrix(model, q)
    assert np.max(np.abs(A - A.T)) < 1e-10
    assert np.linalg.eigvalsh(A).min() > 0.0


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_nullspace_property(seed):
    from importlib import resources

    with resources.as_file(resources.files("synsculptor") / "models" / "chain3.json") as p:
        model = km.load_model(p)
    rng = np.random.default_rng(seed)
    q = oracles.random_configuration(model, rng)[0]
    A = km.mass_matrix(model, q)
    J = km.task_jacobian(model, q, km.TaskSpec(frame="tip", kind="position3"))
    lam, jbar = km.dyn_consistent_inverse(A, J)
    N = km.nullspace(J, jbar)
    assert np.max(np.abs(J @ N)) < 1e-9
    assert np.max(np.abs(N @ N - N)) < 1e-9
