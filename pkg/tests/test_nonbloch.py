import numpy as np
import pytest

from squeezenhse.greens import bare_green, solvable_blocks
from squeezenhse.lattice import SolvableParams, bloch_operator, build_lattice
from squeezenhse.nonbloch import (RootCollisionError, asymptotic_rho,
                                  char_roots, char_roots_grid,
                                  cylinder_spectrum, default_ky_grid,
                                  gbz_radius, laurent_coeffs, laurent_energy,
                                  mu_extrema, residue_propagator)

E_UP = 0.85 + 7.59j
E_DOWN = -2.12 - 7.63j


def lattice_ky_grid(l_y):
    return 2.0 * np.pi * np.arange(l_y) / l_y


class TestLaurentCoeffs:
    def test_hand_values_plus_branch(self, sp_b):
        c = laurent_coeffs(sp_b, "plus", 0.0)
        assert c.c_plus == pytest.approx(-2j)
        assert c.c_zero == pytest.approx(6j)
        assert c.c_minus == pytest.approx(6j)

    def test_minus_branch_at_pi(self, sp_b):
        c = laurent_coeffs(sp_b, "minus", np.pi)
        assert c.c_zero == pytest.approx(-6j, abs=1e-12)

    def test_reciprocal_limit(self):
        sp = SolvableParams(1.0, 0.0, 3.0, 2.0)
        for ky in (0.0, 1.0, np.pi):
            c = laurent_coeffs(sp, "plus", ky)
            assert c.c_plus == pytest.approx(c.c_minus)

    def test_invalid_branch(self, sp_b):
        with pytest.raises(ValueError):
            laurent_coeffs(sp_b, "sideways", 0.0)

    def test_bloch_consistency(self, sp_b, rng):
        # on |beta| = 1 the Laurent dispersion reproduces an eigenvalue of
        # the 2x2 momentum-space dynamical matrix
        params = sp_b.to_model_params()
        for _ in range(200):
            kx, ky = rng.uniform(0, 2 * np.pi, 2)
            evals = np.linalg.eigvals(bloch_operator(params, (kx, ky)).m_b_k)
            for branch in ("plus", "minus"):
                e = laurent_energy(sp_b, branch, np.exp(1j * kx), ky)
                assert np.min(np.abs(evals - e)) < 1e-10


class TestCharRoots:
    def test_vieta_product(self, sp_b, rng):
        for _ in range(100):
            e = complex(rng.normal(0, 5), rng.normal(0, 5))
            ky = rng.uniform(0, 2 * np.pi)
            branch = "plus" if rng.random() < 0.5 else "minus"
            pair = char_roots(e, ky, branch, sp_b)
            c = laurent_coeffs(sp_b, branch, ky)
            assert pair.beta1 * pair.beta2 == pytest.approx(
                c.c_minus / c.c_plus, rel=1e-10)
            assert abs(pair.beta1) <= abs(pair.beta2) + 1e-14

    def test_roots_satisfy_dispersion(self, sp_b, rng):
        for _ in range(50):
            e = complex(rng.normal(0, 5), rng.normal(0, 5))
            ky = rng.uniform(0, 2 * np.pi)
            pair = char_roots(e, ky, "plus", sp_b)
            for beta in (pair.beta1, pair.beta2):
                resid = abs(laurent_energy(sp_b, "plus", beta, ky) - e)
                assert resid <= 1e-10 * (1 + abs(e))

    def test_bloch_energy_has_unit_root(self, sp_b, rng):
        for _ in range(20):
            kx, ky = rng.uniform(0, 2 * np.pi, 2)
            e = laurent_energy(sp_b, "plus", np.exp(1j * kx), ky)
            pair = char_roots(e, ky, "plus", sp_b)
            moduli = sorted([abs(pair.beta1), abs(pair.beta2)])
            assert min(abs(m - 1.0) for m in moduli) < 1e-8

    def test_grid_matches_scalar(self, sp_b):
        ky = np.linspace(0, 2 * np.pi, 17, endpoint=False)
        b1, b2 = char_roots_grid(E_UP, ky, "minus", sp_b)
        for i in (0, 5, 11):
            pair = char_roots(E_UP, float(ky[i]), "minus", sp_b)
            assert b1[i] == pytest.approx(pair.beta1)
            assert b2[i] == pytest.approx(pair.beta2)

    def test_degenerate_leading_coeff_rejected(self):
        # t_xy = delta_x makes c_plus vanish at ky = 0 on the plus branch
        sp = SolvableParams(1.0, 2.0, 3.0, 2.0)
        with pytest.raises(ValueError):
            char_roots(E_UP, 0.0, "plus", sp)


class TestGbzRadius:
    def test_hand_value(self, sp_b):
        assert gbz_radius(0.0, "plus", sp_b) == pytest.approx(np.sqrt(3.0))

    def test_reciprocal_limit_unit_circle(self):
        sp = SolvableParams(1.0, 0.0, 3.0, 2.0)
        for ky in np.linspace(0, 2 * np.pi, 7):
            assert gbz_radius(ky, "plus", sp) == pytest.approx(1.0)

    def test_radius_identity(self, sp_b, rng):
        for _ in range(20):
            ky = rng.uniform(0, 2 * np.pi)
            branch = "plus" if rng.random() < 0.5 else "minus"
            c = laurent_coeffs(sp_b, branch, ky)
            r = gbz_radius(ky, branch, sp_b)
            assert r * r * abs(c.c_plus) == pytest.approx(abs(c.c_minus))


class TestCylinderSpectrum:
    def test_matches_chain_diagonalization(self, sp_b):
        # oracle: dense 1D open-chain diagonalization at fixed ky. The raw
        # chain (c_plus forward, c_minus backward) is brutally non-normal,
        # so we diagonalize its diagonal-gauge twin with symmetric hopping
        # sqrt(c_plus c_minus), which shares the exact spectrum.
        l_x = 40
        ky_grid = lattice_ky_grid(16)
        chain_evals = []
        for ky in ky_grid:
            for branch in ("plus", "minus"):
                c = laurent_coeffs(sp_b, branch, float(ky))
                hop = np.sqrt(c.c_plus * c.c_minus)
                chain = np.diag(np.full(l_x, c.c_zero))
                idx = np.arange(l_x - 1)
                chain[idx + 1, idx] = hop
                chain[idx, idx + 1] = hop
                chain_evals.extend(np.linalg.eigvals(chain))
        chain_evals = np.array(chain_evals)
        # every finite-chain eigenvalue lies on the GBZ-circle image ...
        sigma = cylinder_spectrum(sp_b, ky_grid, default_ky_grid(1024))
        d_chain = np.min(np.abs(chain_evals[:, None] - sigma[None, :]), axis=1)
        assert d_chain.max() < 0.05
        # ... and the 40 chain points per (ky, branch) cover the curve to
        # their own half-spacing resolution
        sigma_coarse = cylinder_spectrum(sp_b, ky_grid, default_ky_grid(64))
        d_sigma = np.min(np.abs(sigma_coarse[:, None] - chain_evals[None, :]),
                         axis=1)
        assert d_sigma.max() < 0.5

    def test_reciprocal_limit_is_bloch(self):
        sp = SolvableParams(1.0, 0.0, 3.0, 2.0)
        ky_grid = lattice_ky_grid(8)
        theta = lattice_ky_grid(8)
        sigma = cylinder_spectrum(sp, ky_grid, theta)
        params = sp.to_model_params()
        bloch = []
        for ky in ky_grid:
            for kx in theta:
                bloch.extend(np.linalg.eigvals(
                    bloch_operator(params, (kx, ky)).m_b_k))
        bloch = np.array(bloch)
        assert np.max(np.min(np.abs(sigma[:, None] - bloch[None, :]),
                             axis=1)) < 1e-10

    def test_probe_energies_outside(self, sp_b):
        sigma = cylinder_spectrum(sp_b)
        assert np.min(np.abs(sigma - E_UP)) > 0.5
        assert np.min(np.abs(sigma - E_DOWN)) > 0.5

    def test_empty_grid_rejected(self, sp_b):
        with pytest.raises(ValueError):
            cylinder_spectrum(sp_b, np.array([]), None)


class TestResiduePropagator:
    def test_matches_resolvent_on_cylinder(self, sp_b):
        # with the finite-chain factor and the lattice ky grid the residue
        # form reproduces resolvent elements to rounding
        l_x = l_y = 8
        lat = build_lattice(("rectangle", l_x, l_y), "open", "periodic")
        dec = solvable_blocks(sp_b, lat)
        ky = lattice_ky_grid(l_y)
        r1, r2 = (2, 3), (7, 5)
        for branch, block in (("plus", dec.m_p), ("minus", dec.m_m)):
            for r_to, r_from in ((r2, r1), (r1, r2)):
                direct = bare_green(block, E_UP, lat.index_of(r_to),
                                    lat.index_of(r_from))
                analytic = residue_propagator(E_UP, r_to, r_from, branch,
                                              sp_b, ky_grid=ky, l_x=l_x)
                assert abs(analytic - direct) <= 1e-10 * abs(direct)

    def test_thermodynamic_limit_close_for_decaying_branch(self, sp_b):
        # the decaying propagator is insensitive to the far boundary
        l_x = l_y = 16
        lat = build_lattice(("rectangle", l_x, l_y), "open", "periodic")
        dec = solvable_blocks(sp_b, lat)
        ky = lattice_ky_grid(l_y)
        direct = bare_green(dec.m_m, E_UP, lat.index_of((12, 5)),
                            lat.index_of((4, 5)))
        analytic = residue_propagator(E_UP, (12, 5), (4, 5), "minus", sp_b,
                                      ky_grid=ky)
        assert abs(analytic - direct) <= 0.05 * abs(direct)

    def test_reciprocal_limit_symmetric(self):
        sp = SolvableParams(1.0, 0.0, 3.0, 2.0)
        fwd = residue_propagator(12.0 + 0j, (9, 4), (3, 4), "plus", sp)
        bwd = residue_propagator(12.0 + 0j, (3, 4), (9, 4), "plus", sp)
        assert abs(abs(fwd) - abs(bwd)) < 1e-8 * abs(fwd)

    def test_growth_and_decay_with_separation(self, sp_b):
        # for the probe energy with Im E > 0 the plus-branch propagator
        # grows with separation while the minus branch decays; the
        # transverse offset moves with the separation so the ky phase has
        # a stationary point (a purely longitudinal displacement would
        # dephase both branches into decay)
        mags = {"plus": [], "minus": []}
        for branch in ("plus", "minus"):
            for length in (4, 8, 12):
                g = residue_propagator(E_UP, (1 + length, 1 + length), (1, 1),
                                       branch, sp_b)
                mags[branch].append(abs(g))
        assert mags["plus"][0] < mags["plus"][1] < mags["plus"][2]
        assert mags["minus"][0] > mags["minus"][1] > mags["minus"][2]

    def test_root_collision_detected(self):
        # t_xy = 0 collapses the discriminant at E = c_zero + 2 c_plus
        sp = SolvableParams(1.0, 0.0, 3.0, 2.0)
        with pytest.raises(RootCollisionError):
            residue_propagator(10j, (4, 1), (1, 1), "plus", sp,
                               ky_grid=np.array([0.0, np.pi]))

    def test_calibration_scales_linearly(self, sp_b):
        g1 = residue_propagator(E_UP, (5, 1), (1, 1), "plus", sp_b)
        g2 = residue_propagator(E_UP, (5, 1), (1, 1), "plus", sp_b,
                                calibration=2.5)
        assert g2 == pytest.approx(2.5 * g1)


class TestMuExtrema:
    def test_sign_pattern_positive_im(self, sp_b):
        mu_p = mu_extrema(E_UP, "plus", sp_b)
        mu_m = mu_extrema(E_UP, "minus", sp_b)
        assert mu_p.mu_max_1 > 0 and mu_p.mu_min_2 < 0
        assert mu_m.mu_max_1 < 0 and mu_m.mu_min_2 > 0

    def test_sign_pattern_negative_im(self, sp_b):
        mu_p = mu_extrema(E_DOWN, "plus", sp_b)
        mu_m = mu_extrema(E_DOWN, "minus", sp_b)
        assert mu_p.mu_max_1 < 0 and mu_p.mu_min_2 > 0
        assert mu_m.mu_max_1 > 0 and mu_m.mu_min_2 < 0

    def test_reciprocal_limit_ordering(self):
        # unit-circle limit: outside the Bloch spectrum the interior root
        # sits strictly inside and the exterior strictly outside
        sp = SolvableParams(1.0, 0.0, 3.0, 2.0)
        mu = mu_extrema(12.0 + 0.0j, "plus", sp)
        assert mu.mu_max_1 < 0 < mu.mu_min_2

    def test_extrema_are_grid_extrema(self, sp_b):
        ky = default_ky_grid(64)
        mu = mu_extrema(E_UP, "plus", sp_b, ky)
        b1, b2 = char_roots_grid(E_UP, ky, "plus", sp_b)
        assert mu.mu_max_1 == pytest.approx(np.log(np.abs(b1)).max())
        assert mu.mu_min_2 == pytest.approx(np.log(np.abs(b2)).min())
        assert float(ky[np.argmax(np.log(np.abs(b1)))]) == mu.argmax_ky


class TestAsymptoticRho:
    def test_zero_exponents(self, sp_b):
        mu = mu_extrema(E_UP, "plus", sp_b)
        flat = type(mu)(mu_max_1=0.0, mu_min_2=0.0, argmax_ky=0.0,
                        argmin_ky=0.0, branch="plus")
        assert asymptotic_rho(0.37, 10, flat, flat, +1.0) == pytest.approx(0.37)

    def test_arithmetic(self, sp_b):
        mu = mu_extrema(E_UP, "plus", sp_b)
        ref = type(mu)(mu_max_1=0.2, mu_min_2=-0.2, argmax_ky=0.0,
                       argmin_ky=0.0, branch="plus")
        got = asymptotic_rho(0.01, 40, ref, mu, +1.0)
        assert got == pytest.approx(0.01 * np.exp(4.0))

    def test_log_affine_in_length(self, sp_b):
        mu_p = mu_extrema(E_UP, "plus", sp_b)
        mu_m = mu_extrema(E_UP, "minus", sp_b)
        lengths = np.array([8, 12, 16, 20])
        logs = np.log([asymptotic_rho(0.01, int(l), mu_p, mu_m, +1.0)
                       for l in lengths])
        slopes = np.diff(logs) / np.diff(lengths)
        assert np.allclose(slopes, (mu_p.mu_max_1 - mu_p.mu_min_2) / 4.0)

    def test_invalid_inputs(self, sp_b):
        mu = mu_extrema(E_UP, "plus", sp_b)
        with pytest.raises(ValueError):
            asymptotic_rho(-0.01, 10, mu, mu, +1.0)
        with pytest.raises(ValueError):
            asymptotic_rho(0.01, 0, mu, mu, +1.0)
