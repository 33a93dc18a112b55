import numpy as np
import pytest

from decohere.dynamics import LindbladModel, lindblad_rhs
from decohere.grids import (
    GridState,
    PhaseSpaceGrid,
    cat_state,
    gaussian_packet,
    uniform_coherent_state,
)
from decohere.hilbert import Observable
from decohere.localization import (
    LocalizationParams,
    coherence_length,
    dipole_radiation_probability,
    master_rhs,
    evolve,
    kinetic_hamiltonian,
)

GRID = PhaseSpaceGrid(256, 20.0)


def grid_entropy(state: GridState) -> float:
    probs = np.clip(np.linalg.eigvalsh(state.rho) * state.grid.dx, 0.0, 1.0)
    probs = probs[probs > 1e-14]
    return float(-np.sum(probs * np.log(probs)))


class TestRhs:
    def test_plane_wave_projector_is_stationary_without_dephasing(self):
        # a momentum eigenstate feels no free dispersion: pure unitary limit
        grid = PhaseSpaceGrid(64, 16.0)
        k = grid.momenta_fft_order[5]
        psi = np.exp(1j * k * grid.positions)
        state = GridState.from_wavefunction(psi, grid)
        rhs = master_rhs(LocalizationParams(1.0, 0.0), state)
        assert np.max(np.abs(rhs)) < 1e-10

    def test_kinetic_off_is_pointwise_dephasing(self):
        rng = np.random.default_rng(0)
        g = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
        rho = g @ g.conj().T
        grid = PhaseSpaceGrid(32, 8.0)
        rho = rho / (np.real(np.trace(rho)) * grid.dx)
        state = GridState(rho, grid)
        lam = 0.7
        rhs = master_rhs(LocalizationParams(1.0, lam), state, kinetic=False)
        expected = -lam * grid.min_image_sq_distances() * state.rho
        assert np.max(np.abs(rhs - expected)) == 0.0

    def test_rhs_is_hermiticity_consistent(self):
        state = GridState.from_wavefunction(gaussian_packet(GRID, 0.5, 1.1), GRID)
        rhs = master_rhs(LocalizationParams(2.0, 0.3), state)
        assert np.max(np.abs(rhs - rhs.conj().T)) < 1e-12

    def test_lindblad_position_generator_recovers_equation(self):
        # L = sqrt(2 lambda) x reproduces the grid master equation (checked
        # on a localized state; wrap-around pairs, where the minimum-image
        # weight and the plain coordinate differ, carry exponentially small
        # coherence there)
        grid = PhaseSpaceGrid(16, 16.0)
        lam = 0.35
        mass = 1.4
        state = GridState.from_wavefunction(gaussian_packet(grid, 0.0, 0.7), grid)
        h = Observable(kinetic_hamiltonian(grid, mass))
        model = LindbladModel(h, (np.sqrt(2.0 * lam) * np.diag(grid.positions).astype(complex),))
        via_lindblad = lindblad_rhs(model, state.rho)
        via_grid = master_rhs(LocalizationParams(mass, lam), state)
        assert np.max(np.abs(via_lindblad - via_grid)) < 1e-10


class TestEvolve:
    def test_closed_form_dephasing(self):
        # step count sized so the slowest-converging far-tail elements
        # (lambda t d^2 up to ~40 before the 1e-12 mask cuts off) still meet
        # the 1e-6 relative bar; RK4 error there is ~ steps * (z/steps)^5
        lam, t = 1.0, 0.5
        state = GridState.from_wavefunction(cat_state(GRID, 4.0, 0.7), GRID)
        out = evolve(LocalizationParams(1.0, lam), state, t, 1800, kinetic=False)
        decay = np.exp(-lam * GRID.min_image_sq_distances() * t)
        mask = np.abs(state.rho) > 1e-12
        rel = np.abs(out.rho[mask] - (state.rho * decay)[mask]) / np.abs((state.rho * decay)[mask])
        assert np.max(rel) < 1e-6

    def test_example_ratio(self):
        # lambda = 1, separation 2, t = 0.5: ratio e^{-2} on that element
        grid = PhaseSpaceGrid(128, 16.0)
        state = GridState.from_wavefunction(cat_state(grid, 2.0, 0.4), grid)
        i = int(np.argmin(np.abs(grid.positions - 1.0)))
        j = int(np.argmin(np.abs(grid.positions + 1.0)))
        sep = grid.positions[i] - grid.positions[j]
        out = evolve(LocalizationParams(1.0, 1.0), state, 0.5, 400, kinetic=False)
        ratio = abs(out.rho[i, j]) / abs(state.rho[i, j])
        assert ratio == pytest.approx(np.exp(-(sep**2) * 0.5), rel=1e-6)
        assert np.exp(-2.0) == pytest.approx(0.135335, abs=1e-6)

    def test_unitary_purity_conserved(self):
        state = GridState.from_wavefunction(gaussian_packet(GRID, 0.0, 1.0), GRID)
        out = evolve(LocalizationParams(1.0, 0.0), state, 0.4, 200)
        assert out.purity() == pytest.approx(state.purity(), abs=1e-6)

    def test_trace_conserved_with_kinetic(self):
        state = GridState.from_wavefunction(cat_state(GRID, 4.0, 0.7), GRID)
        out = evolve(LocalizationParams(1.0, 0.5), state, 0.4, 400)
        assert np.real(np.trace(out.rho)) * GRID.dx == pytest.approx(1.0, abs=1e-6)

    def test_dephasing_preserves_diagonal_exactly(self):
        # decoherence without the environment acting on the system:
        # populations untouched, coherences destroyed
        state = GridState.from_wavefunction(cat_state(GRID, 4.0, 0.7), GRID)
        out = evolve(LocalizationParams(1.0, 2.0), state, 0.3, 400, kinetic=False)
        assert np.max(np.abs(out.diagonal - state.diagonal)) < 1e-10
        i = int(np.argmin(np.abs(GRID.positions - 2.0)))
        j = int(np.argmin(np.abs(GRID.positions + 2.0)))
        assert abs(out.rho[i, j]) < 1e-4 * abs(state.rho[i, j])

    def test_entropy_non_decreasing(self):
        state = GridState.from_wavefunction(cat_state(GRID, 3.0, 0.6), GRID)
        entropies = [grid_entropy(state)]
        current = state
        for _ in range(20):
            current = evolve(LocalizationParams(1.0, 0.8), current, 0.02, 40)
            entropies.append(grid_entropy(current))
        assert np.all(np.diff(entropies) >= -1e-9)

    def test_cat_lobes_suppressed_diagonal_persists(self):
        state = GridState.from_wavefunction(cat_state(GRID, 4.0, 0.7), GRID)
        i = int(np.argmin(np.abs(GRID.positions - 2.0)))
        j = int(np.argmin(np.abs(GRID.positions + 2.0)))
        d = GRID.positions[i] - GRID.positions[j]
        lam, t = 1.0, 0.4
        out = evolve(LocalizationParams(1.0, lam), state, t, 500, kinetic=False)
        lobe_ratio = abs(out.rho[i, j]) / abs(state.rho[i, j])
        assert lobe_ratio == pytest.approx(np.exp(-lam * d * d * t), rel=1e-6)
        assert out.rho[i, i].real == pytest.approx(state.rho[i, i].real, abs=1e-10)

    def test_grid_convergence(self):
        # halving dx changes the evolved off-diagonal observable by < 1e-3
        values = []
        for n in (128, 256):
            grid = PhaseSpaceGrid(n, 20.0)
            state = GridState.from_wavefunction(cat_state(grid, 4.0, 0.7), grid)
            out = evolve(LocalizationParams(1.0, 1.0), state, 0.2, 300)
            i = int(np.argmin(np.abs(grid.positions - 2.0)))
            j = int(np.argmin(np.abs(grid.positions + 2.0)))
            # physical observable: coherence mass in a fixed off-diagonal patch
            patch = np.abs(out.rho[i - n // 64: i + n // 64, j - n // 64: j + n // 64])
            values.append(float(patch.sum()) * grid.dx**2)
        assert abs(values[1] - values[0]) < 1e-3

    def test_stability_guard(self):
        state = GridState.from_wavefunction(cat_state(GRID, 4.0, 0.7), GRID)
        with pytest.raises(ValueError, match="stability guard"):
            evolve(LocalizationParams(1.0, 50.0), state, 1.0, 3, kinetic=False)


class TestCoherenceLength:
    def test_uniform_state_dephasing_width(self):
        # exp(-lambda t s^2) profile: full width at 1/e is 2/sqrt(lambda t)
        grid = PhaseSpaceGrid(256, 40.0)
        state = GridState.from_wavefunction(uniform_coherent_state(grid), grid)
        out = evolve(LocalizationParams(1.0, 1.0), state, 1.0, 800, kinetic=False)
        assert coherence_length(out) == pytest.approx(2.0, rel=0.1)

    def test_pure_packet_autocorrelation_width(self):
        # Gaussian packet sigma: slice profile e^{-s^2/(4 sigma^2)}, full
        # width 4 sigma
        grid = PhaseSpaceGrid(256, 40.0)
        sigma = 1.3
        state = GridState.from_wavefunction(gaussian_packet(grid, 0.0, sigma), grid)
        assert coherence_length(state) == pytest.approx(4.0 * sigma, rel=0.1)

    def test_monotone_decrease_in_time(self):
        grid = PhaseSpaceGrid(256, 40.0)
        state = GridState.from_wavefunction(uniform_coherent_state(grid), grid)
        widths = []
        for lam_t in (0.5, 1.0, 2.0):
            out = evolve(LocalizationParams(1.0, 1.0), state, lam_t, int(800 * lam_t) + 200,
                         kinetic=False)
            widths.append(coherence_length(out))
        assert widths[0] > widths[1] > widths[2]

    def test_too_narrow_reported(self):
        grid = PhaseSpaceGrid(64, 40.0)  # dx = 0.625
        state = GridState.from_wavefunction(uniform_coherent_state(grid), grid)
        out = evolve(LocalizationParams(1.0, 4.0), state, 1.0, 4000, kinetic=False)
        # width 2/sqrt(4) = 1.0 < 4 dx = 2.5
        with pytest.raises(ValueError, match="grid"):
            coherence_length(out)


class TestDipoleEstimator:
    def test_unit_scaling(self):
        assert dipole_radiation_probability(1.0, 1, 1.0, 1.0, 1.0) == pytest.approx(1.0)

    def test_fine_structure_value(self):
        got = dipole_radiation_probability(1.0 / 137.036, 1, 0.1, 1.0, 1.0)
        assert got == pytest.approx(7.2974e-6, rel=1e-4)

    def test_quadratic_charge_scaling(self):
        one = dipole_radiation_probability(0.01, 1, 0.3, 2.0, 1.0)
        two = dipole_radiation_probability(0.01, 2, 0.3, 2.0, 1.0)
        assert two == pytest.approx(4.0 * one)

    def test_positive_arguments_required(self):
        with pytest.raises(ValueError):
            dipole_radiation_probability(1.0, 1, -0.1, 1.0, 1.0)


class TestGridStateValidation:
    def test_non_hermitian_rejected(self):
        grid = PhaseSpaceGrid(4, 4.0)
        bad = np.array(np.eye(4), dtype=complex) / 4.0
        bad[0, 1] = 0.3
        with pytest.raises(ValueError, match="hermitian"):
            GridState(bad, grid)

    def test_bad_trace_rejected(self):
        grid = PhaseSpaceGrid(4, 4.0)
        with pytest.raises(ValueError, match="trace"):
            GridState(np.eye(4, dtype=complex), grid)

    def test_negative_state_rejected(self):
        grid = PhaseSpaceGrid(4, 4.0)
        mat = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex) / grid.dx / 1.0
        with pytest.raises(ValueError, match="probability"):
            GridState(mat, grid)

    def test_params_validated(self):
        with pytest.raises(ValueError):
            LocalizationParams(0.0, 1.0)
        with pytest.raises(ValueError):
            LocalizationParams(1.0, -0.1)
