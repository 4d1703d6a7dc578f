"""Effective Dirac operator: discretization, spectrum, and forced evolution."""

import numpy as np
import pytest
from scipy.sparse.linalg import eigsh

from floquet_edge import (
    ConfigurationError,
    ForcingSpec,
    assemble_dirac_operator,
    evolve_dirac,
    g_series,
    slow_grid,
)
from floquet_edge.dirac import DiracOperator


class TestDiscretization:
    def test_bands_match_sparse_matrix(self, dirac_op1):
        m = dirac_op1.matrix().toarray()[:40, :40]
        ab = dirac_op1.bands()
        n = 40
        dense = np.zeros((n, n), dtype=complex)
        for d, row in zip((2, 1, 0, -1, -2), ab):
            if d >= 0:
                dense += np.diag(row[d:d + n - d][: n - d], d) if d else np.diag(row[:n])
            else:
                dense += np.diag(row[: n + d], d)
        assert np.allclose(dense, m)

    def test_hermitian(self, dirac_op1):
        m = dirac_op1.matrix().toarray()[:200, :200]
        assert np.allclose(m, m.conj().T)

    def test_interleave_round_trip(self, dirac_op1):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(2, dirac_op1.n_sites)) + 1j * rng.normal(size=(2, dirac_op1.n_sites))
        assert np.allclose(dirac_op1.deinterleave(dirac_op1.interleave(a)), a)

    def test_coarse_grid_rejected(self, spec1, params1):
        X = slow_grid(50.0, 0.2)
        with pytest.raises(ConfigurationError, match="exceeds"):
            assemble_dirac_operator(params1, spec1.kappa, X)

    def test_slow_grid_excludes_boundary(self):
        X = slow_grid(10.0, 0.1)
        assert X[0] == pytest.approx(-10.0 + 0.1)
        assert X[-1] == pytest.approx(10.0 - 0.1)


class TestSpectrum:
    def test_zero_mode_and_gap_edges(self, dirac_op1):
        # lowest |E| ~ 0 (two-fold with its grid-scale partner), continuum
        # starting near +-theta*kappa_inf ~ +-0.494
        w = eigsh(dirac_op1.matrix(), k=8, sigma=0.0, which="LM",
                  return_eigenvectors=False)
        w = np.sort(np.abs(w))
        assert w[0] < 1e-8
        edge = dirac_op1.gap_half_width
        continuum = w[w > 0.1 * edge]
        assert continuum[0] == pytest.approx(edge, rel=0.05)

    def test_spectral_plus_minus_symmetry(self, spec1, params1):
        X = slow_grid(30.0, 0.05)
        op = DiracOperator(X=X, v_D=params1.v_D, theta_sharp=params1.theta_sharp,
                           kappa_samples=np.asarray(spec1.kappa(X)))
        w = np.linalg.eigvalsh(op.matrix().toarray())
        assert np.allclose(np.sort(w), np.sort(-w), atol=1e-9)


class TestEvolution:
    def test_unforced_zero_mode_is_stationary(self, dirac_op1, alpha_star1):
        tr = evolve_dirac(dirac_op1, ForcingSpec(0.0, 0.6), alpha_star1.components,
                          t_end=10.0, dt=0.01, mode=alpha_star1.components, stride=100)
        assert np.max(np.abs(np.abs(g_series(tr)) - 1.0)) < 1e-5
        assert np.max(np.abs(tr.norms - 1.0)) < 1e-12

    def test_forcing_scale_presets_differ(self, dirac_op1, alpha_star1):
        kw = dict(t_end=5.0, dt=0.01, mode=alpha_star1.components, stride=50)
        f = ForcingSpec(0.05, 0.6)
        tr_phys = evolve_dirac(dirac_op1, f, alpha_star1.components, **kw)
        tr_norm = evolve_dirac(dirac_op1, f, alpha_star1.components,
                               forcing_scale=1.0, **kw)
        assert not np.allclose(tr_phys.projection, tr_norm.projection)
        # physical preset applies the velocity factor
        assert tr_phys.meta["forcing_scale"] == pytest.approx(dirac_op1.v_D)
        assert tr_norm.meta["forcing_scale"] == 1.0

    def test_coarse_dt_rejected(self, dirac_op1, alpha_star1):
        with pytest.raises(ConfigurationError, match="resolve"):
            evolve_dirac(dirac_op1, ForcingSpec(0.01, 0.6), alpha_star1.components,
                         t_end=10.0, dt=1.0)

    def test_g_series_requires_mode(self, dirac_op1, alpha_star1):
        tr = evolve_dirac(dirac_op1, ForcingSpec(0.0, 0.6), alpha_star1.components,
                          t_end=0.1, dt=0.01)
        with pytest.raises(ConfigurationError, match="projection"):
            g_series(tr)
