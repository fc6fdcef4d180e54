"""
Tests for the wavevector truncation, Leray projection and polarization basis
"""

import numpy as np
import pytest

from src.core.exceptions import SpectralDomainError
from .truncation import Truncation, leray_project, polarization_basis, is_representative


class TestTruncation:
    """Test the Euclidean-ball mode set P_N"""

    def test_unit_shell_has_three_representatives(self):
        """Test k_max=1 keeps the six unit vectors as three +/- pairs"""
        truncation = Truncation(1)
        assert truncation.mode_count == 3
        assert truncation.eigenvalue_count == 12
        assert set(map(tuple, truncation.full_modes())) == {
            (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)
        }

    def test_mode_set_closed_under_negation(self):
        """Test the full set contains -k for every k and excludes zero"""
        truncation = Truncation(4)
        full = set(map(tuple, truncation.full_modes()))
        assert (0, 0, 0) not in full
        assert all(tuple(-c for c in k) in full for k in full)
        assert len(full) == 2 * truncation.mode_count

    def test_ball_cutoff_includes_whole_shells(self):
        """Test every lattice point with |k|^2 <= k_max^2 is present"""
        truncation = Truncation(3)
        r = range(-3, 4)
        expected = {(a, b, c) for a in r for b in r for c in r if 0 < a * a + b * b + c * c <= 9}
        assert set(map(tuple, truncation.full_modes())) == expected

    def test_modes_sorted_by_wavenumber(self):
        """Test representatives are ordered by increasing |k|^2"""
        truncation = Truncation(5)
        assert np.all(np.diff(truncation.wavenumber_sq) >= 0)

    def test_locate_returns_conjugate_flag(self):
        """Test locating a partner wavevector flags conjugation"""
        truncation = Truncation(2)
        index, conjugate = truncation.locate((1, 0, 0))
        partner_index, partner_conjugate = truncation.locate((-1, 0, 0))
        assert index == partner_index
        assert conjugate is False and partner_conjugate is True

    def test_locate_outside_truncation_raises(self):
        """Test wavevectors beyond k_max are rejected"""
        with pytest.raises(SpectralDomainError):
            Truncation(2).locate((3, 0, 0))
        with pytest.raises(SpectralDomainError):
            Truncation(2).locate((0, 0, 0))

    def test_invalid_k_max_rejected(self):
        """Test nonpositive k_max is refused"""
        with pytest.raises(SpectralDomainError):
            Truncation(0)

    def test_representative_rule(self):
        """Test exactly one member of each pair is a representative"""
        for k in Truncation(3).full_modes():
            assert is_representative(k) != is_representative(-k)

    def test_shell_index(self):
        """Test integer shells round |k|"""
        truncation = Truncation(3)
        for k, shell in zip(truncation.modes, truncation.shell_index):
            assert shell - 0.5 <= np.linalg.norm(k) < shell + 0.5


class TestLerayProjection:
    """Test the per-mode Leray projector"""

    def test_gradient_mode_annihilated(self):
        """Test c = k projects to zero"""
        k = (1, 2, -1)
        assert np.allclose(leray_project(np.array(k, dtype=complex), k), 0.0)

    def test_solenoidal_vector_unchanged(self):
        """Test c orthogonal to k is left alone"""
        c = np.array([1.0, -1.0, 1.0j])
        k = (1, 1, 0)
        c = c - (np.dot(k, c) / 2.0) * np.array(k)
        assert np.allclose(leray_project(c, k), c)

    def test_direct_formula(self):
        """Test c=(1,0,0), k=(1,1,0) projects to (1/2,-1/2,0)"""
        assert np.allclose(leray_project(np.array([1.0, 0.0, 0.0]), (1, 1, 0)), [0.5, -0.5, 0.0])

    def test_idempotent_and_self_adjoint(self):
        """Test P^2 = P and <Pa, b> = <a, Pb>"""
        rng = np.random.default_rng(7)
        k = (2, -1, 3)
        a, b = rng.standard_normal(3), rng.standard_normal(3)
        pa = leray_project(a, k)
        assert np.allclose(leray_project(pa, k), pa)
        assert np.isclose(pa @ b, a @ leray_project(b, k))

    def test_zero_wavevector_raises(self):
        """Test the projector refuses k = 0"""
        with pytest.raises(SpectralDomainError):
            leray_project(np.ones(3), (0, 0, 0))


class TestPolarizationBasis:
    """Test the solenoidal polarization frame"""

    def test_basis_orthonormal_and_solenoidal(self):
        """Test e1, e2 are unit, mutually orthogonal and orthogonal to k"""
        truncation = Truncation(4)
        basis = truncation.polarizations
        k = truncation.modes.astype(float)
        assert np.allclose(np.linalg.norm(basis, axis=2), 1.0)
        assert np.allclose(np.einsum('mi,mi->m', basis[:, 0], basis[:, 1]), 0.0)
        assert np.allclose(np.einsum('mpi,mi->mp', basis, k), 0.0, atol=1e-14)

    def test_tie_break_uses_lowest_axis(self):
        """Test k=(0,0,1) seeds Gram-Schmidt with the x axis"""
        basis = polarization_basis(np.array([[0, 0, 1]]))
        assert np.allclose(basis[0, 0], [1.0, 0.0, 0.0])
        assert np.allclose(basis[0, 1], [0.0, 1.0, 0.0])

    def test_rotation_stays_in_plane(self):
        """Test a rotated basis is still an orthonormal solenoidal frame"""
        modes = Truncation(3).modes
        rotated = polarization_basis(modes, rotation=0.7)
        assert np.allclose(np.einsum('mpi,mi->mp', rotated, modes.astype(float)), 0.0, atol=1e-14)
        assert np.allclose(np.einsum('mi,mi->m', rotated[:, 0], rotated[:, 1]), 0.0)
