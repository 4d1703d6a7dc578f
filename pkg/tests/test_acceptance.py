"""Acceptance gate: one test per headline claim, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the criterion lines
as they complete.  The heavy evolutions are marked ``slow`` as well as
``acceptance``; the full gate takes a few hours on one core.
"""

import numpy as np
import pytest

from floquet_edge import (
    ForcingSpec,
    GridSpec,
    assemble_dirac_operator,
    assemble_dw_hamiltonian,
    builtin_potential,
    dirac_parameters,
    dirac_zero_mode_analytic,
    dirac_zero_mode_numeric,
    envelope_from_wavepacket,
    evolve_dirac,
    evolve_schrodinger,
    fit_exponential_decay,
    fit_power_law,
    midgap_mode,
    slow_grid,
)
from floquet_edge.analysis import decay_window, eta_A, golden_rule_rates
from floquet_edge.bloch import dirac_eigenbasis

pytestmark = pytest.mark.acceptance


def _criterion(name: str, ok: bool, detail: str) -> None:
    # the PASS/FAIL lines surface in the test report through the -rP option
    # set in pyproject.toml (captured stdout of passing tests)
    line = f"{'PASS' if ok else 'FAIL'} [{name}] {detail}"
    print(f"\n{line}")
    assert ok, line


def _evolve_family(family, beta, omega, t_end, half_length, snapshot_times=()):
    spec = builtin_potential(family, 0.5)
    params = dirac_parameters(spec)
    ppp = 64 if family == 1 else 80
    grid = GridSpec(half_length=half_length, points_per_period=ppp)
    h = assemble_dw_hamiltonian(spec, grid)
    mode = midgap_mode(h, params.E_D, params.schrodinger_gap_half_width, grid)
    trace = evolve_schrodinger(
        spec, ForcingSpec(beta, omega), grid, mode.psi, t_end,
        dt=0.01, mode=mode.psi, stride=100, snapshot_times=snapshot_times,
    )
    return spec, params, grid, mode, trace


class TestDiracParameters:
    def test_family1(self, params1):
        ok_v = abs(params1.v_D - 2 * np.pi) <= 0.02 * 2 * np.pi
        ok_t = abs(abs(params1.theta_sharp) - 0.5) <= 0.02 * 0.5
        _criterion(
            "dirac-parameters family 1", ok_v and ok_t,
            f"v_D = {params1.v_D:.5f} (target 2*pi, 2%), "
            f"|theta_sharp| = {abs(params1.theta_sharp):.5f} (target 0.5, 2%)",
        )

    def test_family2(self, params2):
        ok_v = abs(params2.v_D - 6.45) <= 0.05 * 6.45
        ok_t = abs(abs(params2.theta_sharp) - 1.03) <= 0.05 * 1.03
        _criterion(
            "dirac-parameters family 2", ok_v and ok_t,
            f"v_D = {params2.v_D:.4f} (target 6.45, 5%), "
            f"|theta_sharp| = {abs(params2.theta_sharp):.4f} (target 1.03, 5%)",
        )


class TestDefectMode:
    def test_single_midgap_mode_with_quadratic_energy_deviation(self, spec1, params1):
        grid = GridSpec(half_length=100.0, points_per_period=64)
        h = assemble_dw_hamiltonian(spec1, grid)
        bound = 0.5 * abs(params1.theta_sharp) * params1.kappa_inf  # eps * theta * kappa
        mode = midgap_mode(h, params1.E_D, bound, grid)
        devs = []
        eps_values = (0.5, 0.35, 0.25)
        for eps in eps_values:
            spec = builtin_potential(1, eps)
            he = assemble_dw_hamiltonian(spec, grid)
            m = midgap_mode(he, params1.E_D, eps * params1.gap_half_width, grid)
            devs.append(abs(m.energy - params1.E_D))
        slope = np.polyfit(np.log(eps_values), np.log(devs), 1)[0]
        ok = (
            len(mode.candidates) == 1
            and abs(mode.energy - params1.E_D) < bound
            and abs(slope - 2.0) <= 0.3
        )
        _criterion(
            "defect-mode", ok,
            f"{len(mode.candidates)} midgap eigenvalue(s), "
            f"|E - E_D| = {abs(mode.energy - params1.E_D):.4f} < {bound:.4f}, "
            f"deviation-vs-eps log-log slope = {slope:.3f} (target 2 +- 0.3)",
        )


@pytest.mark.slow
class TestUnforcedPersistence:
    @pytest.mark.parametrize("family", [1, 2])
    def test_projection_stays_at_one(self, family):
        _, _, _, _, trace = _evolve_family(family, 0.0, 0.6, 100.0, 100.0)
        dev = float(np.max(np.abs(np.abs(trace.projection) - 1.0)))
        _criterion(
            f"unforced-persistence family {family}", dev <= 1e-3,
            f"max | |<psi*,psi>| - 1 | = {dev:.2e} over t <= 100 (tol 1e-3)",
        )


@pytest.mark.slow
class TestForcedDecay:
    def test_exponential_fit_over_long_window(self):
        # Expected red: the projection decays at the golden-rule rate only
        # until it is strongly depleted (|p| ~ 0.2, reached near t ~ 400),
        # then saturates.  The saturation is intrinsic -- a reflection-free
        # Dirac control in a box 4x larger stalls at the same level -- so no
        # box size makes the full [50, 1000] window exponential.
        _, _, _, _, trace = _evolve_family(1, 0.01, 0.6, 1000.0, 1000.0)
        fit = fit_exponential_decay(trace.times, trace.projection, window=(50.0, 1000.0))
        window = decay_window(trace.times, trace.projection, start=50.0)
        early = fit_exponential_decay(trace.times, trace.projection, window=window)
        _criterion(
            "forced-decay family 1", fit.residual_rms < 0.05,
            f"log-residual RMS = {fit.residual_rms:.4f} over t in [50, 1000] "
            f"(tol 0.05); pre-depletion window [{window[0]:g}, {window[1]:g}] "
            f"fits cleanly: rate = {early.rate:.4e} "
            f"(golden rule predicts 4.2e-03), RMS = {early.residual_rms:.4f}",
        )


@pytest.mark.slow
class TestPowerLaw:
    # Geometry keeps the fit windows reflection-free: the radiated wavefront
    # travels at the continuum group velocity v_D * sqrt(1 - (theta/omega)^2)
    # ~ 3.5-3.8, so t_end stays below the boundary round trip 2*L/v_g.  The
    # largest beta per family is capped so the projection does not cross the
    # depletion floor before the minimum fit-window width elapses.
    #
    # Families 2 and 3 use omega = 1.3 rather than a value just above the
    # continuum threshold theta_sharp*kappa_inf ~ 1.03: on the production grid
    # (80 points per period) the discontinuous square wells shift the discrete
    # band edges enough that both transition energies E_def +- eps*omega fall
    # inside the *discrete* spectral gap for omega <= ~1.2, which suppresses
    # the radiation entirely.  At omega = 1.3 both channels are open by
    # ~0.05 in physical energy, comparable to family 1 at omega = 0.6.
    @pytest.mark.parametrize(
        "family,omega,half_length,t_end,betas,lo,hi",
        [
            (1, 0.6, 500.0, 250.0, (0.008, 0.00974, 0.01186, 0.0144), 1.8, 2.3),
            (2, 1.3, 600.0, 300.0, (0.008, 0.0116, 0.0144, 0.02), 1.8, 2.4),
            (3, 1.3, 600.0, 300.0, (0.008, 0.0116, 0.0144, 0.02), 1.8, 2.4),
        ],
    )
    def test_rate_scales_as_beta_squared(
        self, family, omega, half_length, t_end, betas, lo, hi
    ):
        rates = []
        for beta in betas:
            _, _, _, _, trace = _evolve_family(family, beta, omega, t_end, half_length)
            # fit before the projection saturates at strong depletion
            window = decay_window(trace.times, trace.projection, start=25.0)
            fit = fit_exponential_decay(trace.times, trace.projection, window=window)
            rates.append(fit.rate)
        pl = fit_power_law(betas, rates)
        _criterion(
            f"power-law family {family}", lo <= pl.exponent <= hi,
            f"Gamma ~ beta^{pl.exponent:.3f} (target [{lo}, {hi}]), "
            f"rates = {[f'{r:.3e}' for r in rates]}",
        )


@pytest.mark.slow
class TestThresholdEffect:
    def test_subthreshold_frequencies_do_not_decay(self, spec1, params1):
        X = slow_grid(200.0, 0.05)
        op = assemble_dirac_operator(params1, spec1.kappa, X)
        alpha = dirac_zero_mode_analytic(spec1.kappa, params1.theta_sharp, params1.v_D, X)
        finals = {}
        for omega in (0.3, 0.4, 0.6):
            trace = evolve_dirac(
                op, ForcingSpec(0.01, omega), alpha.components, 500.0, 0.01,
                mode=alpha.components, stride=100, forcing_scale=1.0,
            )
            finals[omega] = float(np.abs(trace.projection[-1]))
        ok = finals[0.3] >= 0.99 and finals[0.4] >= 0.99 and finals[0.6] <= 0.9
        _criterion(
            "threshold-effect", ok,
            f"|g(500)| = {finals[0.3]:.4f} (omega 0.3, >= 0.99), "
            f"{finals[0.4]:.4f} (omega 0.4, >= 0.99), "
            f"{finals[0.6]:.4f} (omega 0.6, <= 0.9)",
        )


@pytest.mark.slow
class TestGoldenRuleConsistency:
    def test_rate_prediction_matches_dirac_evolution(self, spec1, params1):
        beta, omega = 0.01, 0.6
        X = slow_grid(4000.0, 0.05)
        op = assemble_dirac_operator(params1, spec1.kappa, X)
        alpha = dirac_zero_mode_analytic(spec1.kappa, params1.theta_sharp, params1.v_D, X)
        g0, _ = golden_rule_rates(op, alpha, omega)
        # box-doubling stability
        X2 = slow_grid(8000.0, 0.05)
        op2 = assemble_dirac_operator(params1, spec1.kappa, X2)
        alpha2 = dirac_zero_mode_analytic(spec1.kappa, params1.theta_sharp, params1.v_D, X2)
        g0_2, _ = golden_rule_rates(op2, alpha2, omega)
        box_dev = abs(g0_2 - g0) / g0
        # fitted rate from a normalized-forcing run; the fit ends before
        # radiation reflected off the box walls returns (~2*200/3.5)
        Xr = slow_grid(200.0, 0.05)
        opr = assemble_dirac_operator(params1, spec1.kappa, Xr)
        ar = dirac_zero_mode_analytic(spec1.kappa, params1.theta_sharp, params1.v_D, Xr)
        trace = evolve_dirac(
            opr, ForcingSpec(beta, omega), ar.components, 100.0, 0.01,
            mode=ar.components, stride=100, forcing_scale=1.0,
        )
        fit = fit_exponential_decay(trace.times, trace.projection, window=(10.0, 100.0))
        predicted = g0 * beta**2
        rel = abs(fit.rate - predicted) / predicted
        ok = rel <= 0.20 and box_dev <= 0.10
        _criterion(
            "golden-rule-consistency", ok,
            f"gamma0*beta^2 = {predicted:.4e} vs fitted {fit.rate:.4e} "
            f"(dev {100 * rel:.1f}%, tol 20%); box-doubling dev "
            f"{100 * box_dev:.1f}% (tol 10%)",
        )


@pytest.mark.slow
class TestEnvelopeValidity:
    """Schroedinger-vs-Dirac envelope discrepancy at matched times.

    beta = 0.002 keeps the forcing within the regime where the leading-order
    envelope description applies over t <= 100.
    """

    EPS = 0.5

    def _discrepancy(self, family, beta):
        omega = 0.6 if family == 1 else 1.1
        spec, params, grid, mode, trace = _evolve_family(
            family, beta, omega, 100.0, 100.0, snapshot_times=(50.0, 100.0))
        ppp = grid.points_per_period
        x_cell = np.arange(ppp) / ppp
        phi1, phi2, _ = dirac_eigenbasis(np.asarray(spec.V(x_cell), dtype=float))
        # matched slow-domain Dirac run (fast L = 100 <-> slow box 50)
        X = slow_grid(50.0, 0.05)
        op = assemble_dirac_operator(params, spec.kappa, X)
        alpha0 = envelope_from_wavepacket(mode.psi, phi1, phi2, self.EPS, grid)
        a0 = np.stack([
            np.interp(X, alpha0.X, alpha0.components[j].real)
            + 1j * np.interp(X, alpha0.X, alpha0.components[j].imag)
            for j in (0, 1)
        ])
        a0 /= np.sqrt(op.dX * np.sum(np.abs(a0) ** 2))
        dtrace = evolve_dirac(
            op, ForcingSpec(beta, omega), a0, 50.0, 0.01,
            stride=100, snapshot_times=(25.0, 50.0), forcing_scale=params.v_D,
        )
        out = {}
        for t_fast, snap, dsnap in zip((50.0, 100.0), trace.snapshots, dtrace.snapshots):
            env = envelope_from_wavepacket(snap, phi1, phi2, self.EPS, grid)
            alpha_t = op.deinterleave(dsnap)
            mag = np.stack([np.interp(env.X, X, np.abs(alpha_t[j])) for j in (0, 1)])
            rel = np.sqrt(
                np.sum((np.abs(env.components) - mag) ** 2) / np.sum(mag**2)
            )
            out[t_fast] = float(rel)
        return out

    @pytest.mark.parametrize("family,beta", [(1, 0.0), (1, 0.002), (2, 0.0), (2, 0.002)])
    def test_envelope_tracks_wavepacket(self, family, beta):
        d = self._discrepancy(family, beta)
        ok = d[50.0] <= 0.10 and d[100.0] <= 0.25
        kind = "forced" if beta else "unforced"
        _criterion(
            f"envelope-validity family {family} {kind}", ok,
            f"relative L2 discrepancy = {100 * d[50.0]:.1f}% at t=50 (tol 10%), "
            f"{100 * d[100.0]:.1f}% at t=100 (tol 25%)",
        )


class TestNumericalInvariants:
    @pytest.mark.slow
    def test_unitarity_over_1e5_steps(self, spec1, params1):
        grid = GridSpec(half_length=20.0, points_per_period=64)
        x = grid.points()
        psi0 = (np.exp(-0.05 * x**2) * np.exp(1.0j * x)).astype(complex)
        psi0 /= np.sqrt(grid.dx * np.vdot(psi0, psi0).real)
        trace = evolve_schrodinger(
            spec1, ForcingSpec(0.05, 0.6), grid, psi0, 1000.0,
            dt=0.01, stride=1000,
        )
        drift = float(np.max(np.abs(trace.norms - 1.0)))
        _criterion(
            "invariant unitarity", drift <= 1e-8,
            f"norm drift = {drift:.2e} over 1e5 steps (tol 1e-8)",
        )

    def test_second_order_time_stepping(self, spec1, params1):
        # generic wavepacket data: the (nearly stationary) zero mode would
        # leave only grid-scale components in the dt error
        X = slow_grid(20.0, 0.1)
        op = assemble_dirac_operator(params1, spec1.kappa, X, max_dX=0.1)
        comps = np.stack([
            np.exp(-0.5 * X**2).astype(complex),
            0.3j * np.exp(-0.5 * (X - 1.0) ** 2),
        ])
        comps /= np.sqrt(op.dX * np.sum(np.abs(comps) ** 2))

        def final(dt):
            tr = evolve_dirac(op, ForcingSpec(0.1, 0.6), comps, 1.0, dt,
                              stride=10**9, snapshot_times=(1.0,))
            return tr.snapshots[-1]

        ref = final(0.00125)
        e = [np.linalg.norm(final(dt) - ref) for dt in (0.02, 0.01, 0.005)]
        orders = np.log2(np.array(e[:-1]) / np.array(e[1:]))
        ok = bool(np.all(np.abs(orders - 2.0) < 0.3))
        _criterion(
            "invariant dt-order", ok,
            f"observed convergence orders {[f'{o:.2f}' for o in orders]} (target 2 +- 0.3)",
        )

    def test_time_reversibility_without_forcing(self, spec1, params1):
        grid = GridSpec(half_length=20.0, points_per_period=64)
        x = grid.points()
        psi0 = (np.exp(-0.05 * x**2) * np.exp(1.0j * x)).astype(complex)
        psi0 /= np.sqrt(grid.dx * np.vdot(psi0, psi0).real)
        fwd = evolve_schrodinger(
            spec1, ForcingSpec(0.0, 0.6), grid, psi0, 5.0, dt=0.01,
            stride=500, snapshot_times=(5.0,),
        )
        back = evolve_schrodinger(
            spec1, ForcingSpec(0.0, 0.6), grid, np.conj(fwd.snapshots[-1]), 5.0,
            dt=0.01, stride=500, snapshot_times=(5.0,),
        )
        err = float(
            np.linalg.norm(np.conj(back.snapshots[-1]) - psi0) * np.sqrt(grid.dx)
        )
        _criterion(
            "invariant reversibility", err <= 1e-10,
            f"L2 error after forward+conjugate+forward round trip = {err:.2e} (tol 1e-10)",
        )

    def test_dirac_spectrum_is_symmetric(self, spec1, params1):
        from scipy.linalg import eigh

        X = slow_grid(20.0, 0.1)
        op = assemble_dirac_operator(params1, spec1.kappa, X, max_dX=0.1)
        w = np.sort(eigh(op.matrix().toarray(), eigvals_only=True))
        asym = float(np.max(np.abs(w + w[::-1])))
        scale = float(np.max(np.abs(w)))
        _criterion(
            "invariant spectral-symmetry", asym <= 1e-10 * scale,
            f"max |E_n + E_(-n)| = {asym:.2e} (tol 1e-10 * {scale:.1f})",
        )

    @pytest.mark.slow
    def test_zero_mode_numeric_matches_analytic(self, spec1, params1):
        # box large enough that the truncated analytic tail is below target
        X = slow_grid(150.0, 0.05)
        op = assemble_dirac_operator(params1, spec1.kappa, X)
        alpha = dirac_zero_mode_analytic(spec1.kappa, params1.theta_sharp, params1.v_D, X)
        num, lam = dirac_zero_mode_numeric(op)
        overlap = num.inner(alpha)
        dist = float(np.sqrt(max(0.0, 2.0 - 2.0 * abs(overlap))))
        _criterion(
            "invariant zero-mode", dist <= 1e-4,
            f"analytic-vs-numeric L2 distance = {dist:.2e} (tol 1e-4), "
            f"eigenvalue = {lam:.1e}",
        )

    def test_phase_integral_vanishes_for_balanced_spinor(self, alpha_star1):
        t = np.linspace(0.0, 100.0, 201)
        vals = np.abs(np.asarray(eta_A(alpha_star1, 0.6, t)))
        peak = float(vals.max())
        _criterion(
            "invariant eta_A", peak <= 1e-12,
            f"max |eta_A(T)| = {peak:.2e} for the (1, i) zero mode (tol 1e-12)",
        )
