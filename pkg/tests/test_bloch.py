import csv

import numpy as np
import pytest

from decohere.bloch import (
    AdmissibilityError,
    AffineMapSpec,
    BlochParams,
    CoherenceVector,
    PolarizationVector,
    apply_affine_map,
    bloch_from_rho,
    bloch_integrate,
    bloch_rhs,
    bloch_trajectory,
    coherence_vector,
    probe_positivity_violation,
    rho_from_bloch,
    rho_from_coherence,
    su_n_generators,
    write_trajectory_csv,
)
from decohere.dynamics import LindbladModel, integrate, propagator
from decohere.hilbert import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    Observable,
    purity,
    random_density_matrix,
)

EPS_RT = 1e-10


class TestBlochStateMap:
    def test_north_pole(self):
        rho = rho_from_bloch([0.0, 0.0, 1.0])
        assert np.allclose(rho.matrix, np.diag([1.0, 0.0]))

    def test_zero_vector_maximally_mixed(self):
        assert np.allclose(rho_from_bloch([0, 0, 0]).matrix, np.eye(2) / 2)

    def test_unit_vector_is_pure(self):
        pi = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
        assert purity(rho_from_bloch(pi)) == pytest.approx(1.0, abs=1e-12)

    def test_purity_identity(self):
        # Trace rho^2 = (1 + |pi|^2)/2, exactly, for every d = 2 state
        rng = np.random.default_rng(0)
        for _ in range(50):
            rho = random_density_matrix(2, rng)
            pi = bloch_from_rho(rho)
            assert purity(rho) == pytest.approx((1 + pi.norm**2) / 2, abs=1e-12)

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            v = rng.standard_normal(3)
            v = v / np.linalg.norm(v) * rng.uniform(0, 1)
            pi = PolarizationVector(v)
            back = bloch_from_rho(rho_from_bloch(pi))
            assert np.max(np.abs(back.pi - v)) < EPS_RT

    def test_mixture_linearity(self):
        rng = np.random.default_rng(2)
        rhos = [random_density_matrix(2, rng) for _ in range(4)]
        weights = rng.dirichlet(np.ones(4))
        mixed = DensityMatrix(sum(w * r.matrix for w, r in zip(weights, rhos)))
        direct = bloch_from_rho(mixed).pi
        averaged = sum(w * bloch_from_rho(r).pi for w, r in zip(weights, rhos))
        assert np.max(np.abs(direct - averaged)) < EPS_RT

    def test_unphysical_rejected(self):
        with pytest.raises(AdmissibilityError):
            PolarizationVector(np.array([1.0, 1.0, 0.0]))


class TestAffineMap:
    def test_identity(self):
        spec = AffineMapSpec(np.zeros(3), np.eye(3))
        pi = apply_affine_map(spec, [0.2, -0.3, 0.5])
        assert np.allclose(pi.pi, [0.2, -0.3, 0.5])
        assert not spec.creates_information
        assert spec.is_idempotent()

    def test_total_contraction(self):
        spec = AffineMapSpec(np.zeros(3), np.zeros((3, 3)))
        assert np.allclose(apply_affine_map(spec, [0.9, 0, 0]).pi, 0.0)
        assert spec.is_idempotent()

    def test_semidiag_equivalent_projection(self):
        spec = AffineMapSpec(np.zeros(3), np.diag([0.0, 0.0, 1.0]))
        once = apply_affine_map(spec, [0.4, 0.5, 0.6])
        twice = apply_affine_map(spec, once)
        assert np.allclose(once.pi, [0, 0, 0.6])
        assert np.allclose(twice.pi, once.pi)
        assert spec.is_idempotent()

    def test_information_creation_flag(self):
        spec = AffineMapSpec(np.array([0.0, 0.0, 0.3]), np.zeros((3, 3)))
        assert spec.creates_information
        # even from the unit matrix: pi = 0 maps to pi0
        assert np.allclose(apply_affine_map(spec, [0, 0, 0]).pi, [0, 0, 0.3])

    def test_non_idempotent_detected(self):
        spec = AffineMapSpec(np.array([0.1, 0, 0]), np.diag([1.0, 0, 0]))
        assert not spec.is_idempotent()  # A pi0 != 0


class TestBlochFlow:
    def test_fixed_point(self):
        params = BlochParams(np.array([0.3, 0.2, 1.0]), np.array([1.0, 2.0, 0.5]),
                             np.array([0.0, 0.0, 0.4]))
        assert np.max(np.abs(bloch_rhs(params, [0.0, 0.0, 0.4]))) == 0.0

    def test_pure_precession_conserves_norm(self):
        params = BlochParams(np.array([0.0, 0.0, 2.0]), np.zeros(3), np.zeros(3))
        out = bloch_integrate(params, [0.6, 0.0, 0.5], 5.0, 2000)
        assert out.norm == pytest.approx(np.linalg.norm([0.6, 0.0, 0.5]), abs=1e-8)

    def test_isotropic_damping_closed_form(self):
        params = BlochParams(np.zeros(3), np.array([2.0, 2.0, 2.0]), np.zeros(3))
        out = bloch_integrate(params, [1.0, 0.0, 0.0], 1.0, 400)
        assert np.max(np.abs(out.pi - [np.exp(-2.0), 0.0, 0.0])) < 1e-6
        assert out.pi[0] == pytest.approx(0.135335, abs=1e-6)

    def test_precession_rotation_matrix_oracle(self):
        w3 = 1.7
        t = 2.3
        params = BlochParams(np.array([0.0, 0.0, w3]), np.zeros(3), np.zeros(3))
        out = bloch_integrate(params, [0.8, 0.0, 0.3], t, 4000)
        c, s = np.cos(w3 * t), np.sin(w3 * t)
        rot = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
        assert np.max(np.abs(out.pi - rot @ np.array([0.8, 0.0, 0.3]))) < 1e-6

    def test_equilibration_to_fixed_point(self):
        pi0 = np.array([0.2, -0.1, 0.5])
        gamma = np.array([0.8, 1.1, 0.6])
        params = BlochParams(np.array([0.4, 0.0, 1.0]), gamma, pi0)
        out = bloch_integrate(params, [0.0, 0.9, -0.3], 20.0 / gamma.min(), 8000)
        assert np.max(np.abs(out.pi - pi0)) < 1e-6

    def test_cross_check_against_lindblad_dephasing(self):
        # L = sqrt(gamma/2) sigma_z <-> Bloch damping (gamma, gamma, 0)
        gamma = 0.8
        omega3 = 1.3
        t = 1.1
        start = np.array([0.5, 0.2, 0.6])
        params = BlochParams(np.array([0.0, 0.0, omega3]),
                             np.array([gamma, gamma, 0.0]), np.zeros(3))
        via_bloch = bloch_integrate(params, start, t, 1000)
        h = Observable(0.5 * omega3 * np.asarray(SIGMA_Z))
        model = LindbladModel(h, (np.sqrt(gamma / 2) * np.asarray(SIGMA_Z),))
        via_lindblad = integrate(model, rho_from_bloch(start), t, 1000)
        assert np.max(np.abs(via_bloch.pi - bloch_from_rho(via_lindblad).pi)) < 1e-6

    def test_ball_respected_for_admissible_params(self):
        # pi0 = 0: damping towards the center plus any precession never
        # leaves the ball, for arbitrary admissible gamma
        rng = np.random.default_rng(3)
        for _ in range(5):
            gamma = rng.uniform(0.1, 2.0, 3)
            params = BlochParams(rng.standard_normal(3), gamma, np.zeros(3))
            out = bloch_integrate(params, [0.0, 0.0, 1.0], 10.0, 4000)
            assert out.norm <= 1.0 + EPS_RT

    def test_admissibility_is_necessary_not_sufficient(self):
        # gamma >= 0 and |pi0| <= 1 pass the admissibility gate, yet a
        # fixed point displaced perpendicular to the precession axis turns
        # the flow into a rotation about a displaced center, which exits
        # the ball; per-instance complete positivity needs the Choi check
        t = probe_positivity_violation(
            omega=[0.0, 0.0, 2.0], gamma=[0.0, 0.0, 0.0], pi0=[0.9, 0.0, 0.0],
            start=[0.0, -1.0, 0.0], t=10.0, steps=5000,
        )
        assert t is not None and t < 1.0


class TestAdmissibility:
    def test_negative_gamma_rejected(self):
        with pytest.raises(AdmissibilityError, match="positivity"):
            BlochParams(np.zeros(3), np.array([-0.1, 0.0, 0.0]), np.zeros(3))

    def test_pi0_outside_ball_rejected(self):
        with pytest.raises(AdmissibilityError, match="positivity"):
            BlochParams(np.zeros(3), np.ones(3), np.array([1.2, 0.0, 0.0]))

    def test_probe_reports_violation_time(self):
        t = probe_positivity_violation(
            omega=[0.0, 0.0, 0.0], gamma=[-0.1, 0.0, 0.0], pi0=[0.0, 0.0, 0.0],
            start=[0.5, 0.0, 0.5], t=50.0, steps=5000,
        )
        assert t is not None
        # pi_x grows as 0.5 e^{0.1 t}: |pi| = 1 near t = 8.7
        assert 5.0 < t < 12.0

    def test_probe_none_for_admissible(self):
        t = probe_positivity_violation(
            omega=[1.0, 0.0, 0.0], gamma=[0.3, 0.3, 0.3], pi0=[0.0, 0.0, 0.0],
            start=[0.0, 0.0, 1.0], t=20.0, steps=2000,
        )
        assert t is None

    def test_choi_check_of_exported_flow(self):
        # admissible Bloch dephasing exports to a CP Lindblad propagator
        model = LindbladModel(Observable(np.zeros((2, 2))),
                              (np.sqrt(0.4) * np.asarray(SIGMA_Z),))
        rep = propagator(model, 0.9, 150)
        assert rep.choi_min_eigenvalue >= -1e-8

    def test_non_orthonormal_basis_rejected(self):
        with pytest.raises(ValueError, match="orthonormal"):
            BlochParams(np.zeros(3), np.ones(3), np.zeros(3),
                        basis=np.array([[1, 0, 0], [1, 0, 0], [0, 0, 1.0]]))


class TestSuN:
    def test_n2_is_pauli(self):
        gens = su_n_generators(2)
        assert len(gens) == 3
        for got, want in zip(gens, (SIGMA_X, SIGMA_Y, SIGMA_Z)):
            assert np.allclose(got, want)

    def test_n3_eightfold_way(self):
        gens = su_n_generators(3)
        assert len(gens) == 8
        diagonal = [g for g in gens if np.allclose(g, np.diag(np.diag(g)))]
        assert len(diagonal) == 2  # n - 1 commuting members
        assert np.max(np.abs(diagonal[0] @ diagonal[1] - diagonal[1] @ diagonal[0])) < 1e-14

    def test_n4_counts(self):
        gens = su_n_generators(4)
        assert len(gens) == 15
        assert sum(np.allclose(g, np.diag(np.diag(g))) for g in gens) == 3

    def test_orthogonality_and_normalization(self):
        for n in (2, 3, 5):
            gens = su_n_generators(n)
            for a, ga in enumerate(gens):
                assert np.max(np.abs(ga - ga.conj().T)) < 1e-14
                assert abs(np.trace(ga)) < 1e-14
                for b, gb in enumerate(gens):
                    hs = np.trace(ga @ gb)
                    assert hs == pytest.approx(2.0 if a == b else 0.0, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            su_n_generators(1)
        with pytest.raises(ValueError):
            su_n_generators(17)


class TestCoherenceVector:
    def test_maximally_mixed_is_zero(self):
        cv = coherence_vector(DensityMatrix(np.eye(3) / 3))
        assert np.max(np.abs(cv.components)) < 1e-14

    def test_n2_reduces_to_polarization(self):
        rng = np.random.default_rng(4)
        rho = random_density_matrix(2, rng)
        cv = coherence_vector(rho)
        assert np.allclose(cv.components, bloch_from_rho(rho).pi, atol=1e-12)

    def test_round_trip_n3(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            rho = random_density_matrix(3, rng)
            back = rho_from_coherence(coherence_vector(rho))
            assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-12

    def test_component_count_validated(self):
        with pytest.raises(ValueError):
            CoherenceVector(np.zeros(7), 3)


class TestTrajectoryOutput:
    def test_csv_columns(self, tmp_path):
        params = BlochParams(np.array([0.0, 0.0, 1.0]), np.array([0.1, 0.1, 0.0]), np.zeros(3))
        path = tmp_path / "traj.csv"
        write_trajectory_csv(str(path), params, [0.6, 0.0, 0.4], 2.0, 20, 10)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "pi1", "pi2", "pi3", "pi_norm"]
        assert len(rows) == 22
        values = np.array([[float(x) for x in row] for row in rows[1:]])
        norms = np.linalg.norm(values[:, 1:4], axis=1)
        assert np.allclose(values[:, 4], norms, atol=1e-12)

    def test_trajectory_times(self):
        params = BlochParams(np.zeros(3), np.zeros(3), np.zeros(3))
        times, pis = bloch_trajectory(params, [0.1, 0.0, 0.0], 1.0, 4)
        assert np.allclose(times, [0, 0.25, 0.5, 0.75, 1.0])
        assert pis.shape == (5, 3)
