"""POD engine: decomposition methods, energy accounting, truncation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_snapshot_matrix
from podsnap.errors import ArgumentError, DataError, DegenerateSpectrumError
from podsnap.pod import (
    PodSpectrum,
    component_split,
    decompose,
    modes_for_energy,
    normalized_spectrum,
    read_spectrum_csv,
    truncate,
    write_spectrum_csv,
)
from podsnap.snapshots import FieldLayout, SnapshotMatrix, matrix_from_array


def eigh_singular_values(data):
    """Independent sigma oracle via the Gram eigenproblem of the
    smaller dimension (never calls numpy's SVD)."""
    gram = data.T @ data if data.shape[0] >= data.shape[1] else data @ data.T
    lam = np.linalg.eigvalsh(gram)[::-1]
    return np.sqrt(np.clip(lam, 0.0, None))


class TestDecompose:
    def test_rank_one(self):
        a = np.array([3.0, 4.0]) / 5.0
        b = np.array([1.0, 2.0, 2.0]) / 3.0
        m = matrix_from_array(7.0 * np.outer(a, b))
        basis = decompose(m, "direct")
        assert basis.spectrum.sigma[0] == pytest.approx(7.0, rel=1e-13)
        assert np.all(basis.spectrum.sigma[1:] < 1e-12)

    def test_diagonal_sorted(self):
        basis = decompose(matrix_from_array([[3.0, 0.0], [0.0, 4.0]]), "direct")
        assert basis.spectrum.sigma == pytest.approx([4.0, 3.0], rel=1e-14)

    def test_methods_agree_on_jump(self, jump_matrix):
        direct = decompose(jump_matrix, "direct")
        mos = decompose(jump_matrix, "method_of_snapshots")
        np.testing.assert_allclose(
            mos.spectrum.sigma, direct.spectrum.sigma, rtol=1e-8
        )

    def test_sign_convention_aligns_methods(self, jump_matrix):
        direct = decompose(jump_matrix, "direct")
        mos = decompose(jump_matrix, "method_of_snapshots")
        np.testing.assert_allclose(mos.modes[:, :10], direct.modes[:, :10], atol=1e-7)

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(11)
        m = random_snapshot_matrix(rng, 30, 20)
        basis = decompose(m, "direct")
        err = np.linalg.norm(basis.reconstruct() - m.data) / np.linalg.norm(m.data)
        assert err <= 1e-10

    def test_auto_routes_by_aspect_ratio(self):
        rng = np.random.default_rng(5)
        tall = random_snapshot_matrix(rng, 50, 10, rank=5)
        # method of snapshots clamps null directions away: 5 modes survive
        assert decompose(tall, "auto").n_modes == 5
        square_ish = random_snapshot_matrix(rng, 40, 10, rank=5)
        # 40 <= 4 * 10 routes to the direct SVD, which keeps all 10
        assert decompose(square_ish, "auto").n_modes == 10

    def test_unknown_method_rejected(self):
        with pytest.raises(ArgumentError):
            decompose(matrix_from_array(np.eye(3)), "fastest")

    def test_coeffs_are_scaled_right_vectors(self):
        rng = np.random.default_rng(2)
        m = random_snapshot_matrix(rng, 12, 8)
        basis = decompose(m, "direct")
        norms = np.linalg.norm(basis.coeffs, axis=1)
        np.testing.assert_allclose(norms, basis.spectrum.sigma[:8], rtol=1e-12)


class TestNormalizedSpectrum:
    def test_ratio(self):
        norm = normalized_spectrum(PodSpectrum(np.array([4.0, 3.0])))
        assert norm[0] == 1.0
        assert norm[1] == pytest.approx(0.75)

    def test_singleton(self):
        assert normalized_spectrum(PodSpectrum(np.array([5.0])))[0] == 1.0

    def test_zero_spectrum_degenerate(self):
        with pytest.raises(DegenerateSpectrumError):
            normalized_spectrum(PodSpectrum(np.array([0.0, 0.0])))


class TestModesForEnergy:
    def test_single_mode_carries_all(self):
        report = modes_for_energy(PodSpectrum(np.array([1.0, 0.0, 0.0])), 0.9999)
        assert report.modes_needed == 1

    def test_equal_energies(self):
        report = modes_for_energy(PodSpectrum(np.ones(4)), 0.5)
        assert report.modes_needed == 2

    def test_hand_computed_cumulative(self):
        # sigma = [3, 2, 1]: energies 9, 4, 1 of 14
        report = modes_for_energy(PodSpectrum(np.array([3.0, 2.0, 1.0])), 0.9)
        assert report.modes_needed == 2
        np.testing.assert_allclose(report.cumulative, [9 / 14, 13 / 14, 1.0], rtol=1e-15)

    def test_threshold_validation(self):
        s = PodSpectrum(np.array([1.0]))
        for bad in (0.0, -0.5, 1.1):
            with pytest.raises(ArgumentError):
                modes_for_energy(s, bad)

    def test_full_capture_at_one(self):
        report = modes_for_energy(PodSpectrum(np.array([2.0, 1.0, 0.0])), 1.0)
        assert report.modes_needed == 2
        assert report.cumulative[-1] == 1.0

    @given(st.lists(st.floats(0.01, 100.0), min_size=2, max_size=30), st.data())
    def test_monotone_in_threshold(self, values, data):
        sigma = np.sort(np.asarray(values))[::-1]
        s = PodSpectrum(sigma)
        t1 = data.draw(st.floats(0.01, 1.0))
        t2 = data.draw(st.floats(t1, 1.0))
        assert modes_for_energy(s, t1).modes_needed <= modes_for_energy(s, t2).modes_needed


class TestTruncate:
    def test_full_rank_lossless(self):
        rng = np.random.default_rng(4)
        m = random_snapshot_matrix(rng, 15, 10)
        basis = decompose(m, "direct")
        kept = truncate(basis, basis.n_modes)
        err = np.linalg.norm(kept.reconstruct() - m.data) / np.linalg.norm(m.data)
        assert err <= 1e-10

    def test_rank_two_eckart_young(self):
        rng = np.random.default_rng(9)
        m = random_snapshot_matrix(rng, 12, 6, rank=2)
        basis = decompose(m, "direct")
        kept = truncate(basis, 1)
        err_sq = np.linalg.norm(kept.reconstruct() - m.data) ** 2
        assert err_sq == pytest.approx(basis.spectrum.sigma[1] ** 2, rel=1e-8)

    def test_heat_matrix_rank_10(self, heat_matrix):
        basis = decompose(heat_matrix, "direct")
        kept = truncate(basis, 10)
        err = np.linalg.norm(kept.reconstruct() - heat_matrix.data)
        assert err / np.linalg.norm(heat_matrix.data) < 1e-4

    def test_eckart_young_sweep_against_oracle(self):
        rng = np.random.default_rng(21)
        for n_dof, n_snaps in ((40, 25), (64, 64), (17, 30)):
            m = random_snapshot_matrix(rng, n_dof, n_snaps)
            sigma_oracle = eigh_singular_values(m.data)
            basis = decompose(m, "direct")
            total = np.sum(sigma_oracle**2)
            for r in range(1, basis.n_modes + 1, 5):
                err_sq = np.linalg.norm(truncate(basis, r).reconstruct() - m.data) ** 2
                tail_sq = np.sum(sigma_oracle[r:] ** 2)
                assert err_sq == pytest.approx(tail_sq, rel=1e-8, abs=1e-10 * total)

    def test_rank_validation(self):
        basis = decompose(matrix_from_array(np.eye(3)), "direct")
        with pytest.raises(ArgumentError):
            truncate(basis, 0)
        with pytest.raises(ArgumentError):
            truncate(basis, 4)


class TestComponentSplit:
    def test_single_segment_identity(self):
        m = matrix_from_array(np.arange(12.0).reshape(4, 3), name="u")
        parts = component_split(m)
        assert list(parts) == ["u"]
        assert parts["u"] == m

    def test_zero_block_spectrum(self):
        layout = FieldLayout.from_sizes([("u", 4), ("p", 4)])
        data = np.zeros((8, 3))
        data[:4, :] = np.random.default_rng(0).normal(size=(4, 3))
        m = SnapshotMatrix(data, layout, [0.0, 1.0, 2.0])
        parts = component_split(m)
        sigma_p = decompose(parts["p"], "direct").spectrum.sigma
        assert np.all(sigma_p == 0.0)

    def test_stack_reproduces_input(self):
        rng = np.random.default_rng(13)
        layout = FieldLayout.from_sizes([("u", 5), ("v", 4), ("p", 3)])
        m = SnapshotMatrix(rng.normal(size=(12, 7)), layout, np.arange(7.0))
        parts = component_split(m)
        stacked = np.vstack([parts[name].data for name in layout.names])
        assert np.array_equal(stacked, m.data)
        for name in layout.names:
            assert np.array_equal(parts[name].column_labels, m.column_labels)

    def test_leading_sigma_interlacing(self):
        rng = np.random.default_rng(17)
        layout = FieldLayout.from_sizes([("u", 6), ("v", 5), ("p", 4)])
        m = SnapshotMatrix(rng.normal(size=(15, 8)), layout, np.arange(8.0))
        sigma_full = np.linalg.svd(m.data, compute_uv=False)[0]
        for part in component_split(m).values():
            sigma_sub = np.linalg.svd(part.data, compute_uv=False)[0]
            assert sigma_sub <= sigma_full * (1 + 1e-12)


class TestProperties:
    @settings(max_examples=15, deadline=None)
    @given(
        n_dof=st.integers(2, 60),
        n_snaps=st.integers(2, 25),
        seed=st.integers(0, 2**31),
    )
    def test_orthonormal_modes(self, n_dof, n_snaps, seed):
        rng = np.random.default_rng(seed)
        m = random_snapshot_matrix(rng, n_dof, n_snaps)
        for method in ("direct", "method_of_snapshots"):
            basis = decompose(m, method)
            gram = basis.modes.T @ basis.modes
            assert np.linalg.norm(gram - np.eye(basis.n_modes)) <= 1e-10

    @settings(max_examples=10, deadline=None)
    @given(
        n_dof=st.integers(10, 200),
        n_snaps=st.integers(2, 100),
        seed=st.integers(0, 2**31),
    )
    def test_methods_agree_on_random(self, n_dof, n_snaps, seed):
        rng = np.random.default_rng(seed)
        m = random_snapshot_matrix(rng, n_dof, n_snaps)
        direct = decompose(m, "direct").spectrum.sigma
        mos = decompose(m, "method_of_snapshots").spectrum.sigma
        np.testing.assert_allclose(mos, direct, rtol=1e-8, atol=1e-8 * direct[0])

    @settings(max_examples=15, deadline=None)
    @given(
        scale=st.floats(1e-6, 1e6),
        seed=st.integers(0, 2**31),
    )
    def test_scaling_invariance(self, scale, seed):
        rng = np.random.default_rng(seed)
        data = rng.normal(size=(12, 7))
        s1 = decompose(matrix_from_array(data), "direct").spectrum
        s2 = decompose(matrix_from_array(scale * data), "direct").spectrum
        np.testing.assert_allclose(s2.sigma, scale * s1.sigma, rtol=1e-10)
        np.testing.assert_allclose(
            normalized_spectrum(s2), normalized_spectrum(s1), rtol=1e-9, atol=1e-12
        )
        assert (
            modes_for_energy(s1, 0.99).modes_needed
            == modes_for_energy(s2, 0.99).modes_needed
        )


class TestSpectrumCsv:
    def test_round_trip_exact(self, tmp_path):
        sigma = np.array([3.0, 1.0, 1e-7, 2.3e-16])
        path = tmp_path / "s.csv"
        write_spectrum_csv(PodSpectrum(sigma), path)
        back = read_spectrum_csv(path)
        assert np.array_equal(back.sigma, sigma)

    def test_header_and_indexing(self, tmp_path):
        path = tmp_path / "s.csv"
        write_spectrum_csv(PodSpectrum(np.array([2.0, 1.0])), path)
        lines = path.read_text().splitlines()
        assert lines[0] == "index,sigma,sigma_norm,cumulative_energy"
        assert lines[1].startswith("1,2,1,")
        assert lines[2].startswith("2,1,0.5,1")

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("wrong,header\n1,2\n")
        with pytest.raises(DataError):
            read_spectrum_csv(path)
