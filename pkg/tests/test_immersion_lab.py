import numpy as np
import pytest

from contactcurv.ambient import standard_structure
from contactcurv.errors import ConfigurationError, DomainError
from contactcurv.immersion_lab import (
    CATALOG,
    gauss_residual,
    graph_cylinder,
    intrinsic_riemann_fd,
    linear_immersion,
    point_from_immersion,
    slant_plane,
    sphere_cylinder,
    torus_cylinder,
)
from contactcurv.invariants import induced_curvature
from contactcurv.subpoint import classify, mean_curvature

FLAT = standard_structure(2)


def jet_consistency(spec, u, h=1e-6):
    """Central differences of the position/Jacobian must reproduce J and H."""
    u = np.asarray(u, dtype=float)
    x, J, H = spec.jet(u)
    for i in range(spec.chart_dim):
        e = np.zeros(spec.chart_dim)
        e[i] = h
        xp, Jp, _ = spec.jet(u + e)
        xm, Jm, _ = spec.jet(u - e)
        np.testing.assert_allclose((xp - xm) / (2 * h), J[:, i], atol=1e-8)
        np.testing.assert_allclose((Jp - Jm) / (2 * h), H[:, :, i], atol=1e-8)


class TestCatalogJets:
    def test_sphere(self):
        jet_consistency(sphere_cylinder(1.3), [0.4, -0.7, 0.2])

    def test_torus(self):
        jet_consistency(torus_cylinder(2.0, 0.7), [1.1, 0.3, -0.5])

    def test_graph(self):
        coeffs = [[0.0, 0.0, 0.3], [0.0, -0.2, 0.0], [0.5, 0.1, 0.0]]
        jet_consistency(graph_cylinder(coeffs), [0.6, -0.4, 1.0])

    def test_slant_plane(self):
        jet_consistency(slant_plane(np.pi / 3), [0.1, 0.2, 0.3])

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            sphere_cylinder(-1.0)
        with pytest.raises(DomainError):
            torus_cylinder(1.0, 2.0)
        with pytest.raises(DomainError):
            graph_cylinder(np.zeros((6, 2)))
        with pytest.raises(DomainError):
            linear_immersion(np.eye(4), 5)


class TestPointFromImmersion:
    def test_linear_is_totally_geodesic(self):
        spec = CATALOG["linear_invariant"]["build"](m=2)
        p = point_from_immersion(FLAT, spec, [0.3, -1.0, 2.0])
        assert np.max(np.abs(p.sigma)) == 0.0

    def test_slant_plane_classifies(self):
        theta = np.pi / 3
        p = point_from_immersion(FLAT, slant_plane(theta), [0.0, 0.0, 0.0])
        cls = classify(FLAT, p)
        assert cls.kind == "slant"
        assert cls.slant_angle == pytest.approx(theta, abs=1e-9)

    def test_sphere_mean_curvature_and_tau(self):
        r = 1.4
        p = point_from_immersion(FLAT, sphere_cylinder(r), [0.3, 0.9, 0.0])
        _, h2 = mean_curvature(p)
        assert h2 == pytest.approx((2.0 / (3.0 * r)) ** 2, abs=1e-10)
        IC = induced_curvature(FLAT, p)
        assert IC.tau == pytest.approx(1.0 / r**2, abs=1e-10)

    def test_torus_gauss_curvature(self):
        a, b, v = 2.0, 0.8, 0.6
        p = point_from_immersion(FLAT, torus_cylinder(a, b), [1.2, v, 0.5])
        IC = induced_curvature(FLAT, p)
        expected = np.cos(v) / (b * (a + b * np.cos(v)))
        assert IC.tau == pytest.approx(expected, abs=1e-10)
        # principal curvatures of the torus: cos v / (a + b cos v) and 1/b
        evals = np.sort(np.linalg.eigvalsh(p.sigma.sum(axis=0)))
        nonzero = evals[np.abs(evals) > 1e-9]
        assert sorted(np.abs(nonzero)) == pytest.approx(
            sorted([abs(np.cos(v) / (a + b * np.cos(v))), 1.0 / b]), abs=1e-9
        )

    def test_sigma_symmetric(self):
        coeffs = [[0.0, 0.1, -0.2], [0.4, 0.3, 0.0], [-0.1, 0.0, 0.0]]
        p = point_from_immersion(FLAT, graph_cylinder(coeffs), [0.5, -0.3, 0.0])
        np.testing.assert_allclose(p.sigma, p.sigma.transpose(0, 2, 1), atol=0.0)

    def test_rank_deficient_rejected(self):
        # sphere chart degenerates at the pole
        with pytest.raises(DomainError):
            point_from_immersion(FLAT, sphere_cylinder(1.0), [np.pi / 2, 0.0, 0.0])


class TestOracle:
    def test_linear_flat(self):
        spec = CATALOG["linear_anti_invariant"]["build"](m=2)
        res, R_gauss, R_fd = gauss_residual(FLAT, spec, [0.1, 0.2, 0.3])
        assert res == 0.0
        assert np.max(np.abs(R_gauss)) == 0.0

    def test_sphere_residual(self):
        res, R_gauss, _ = gauss_residual(FLAT, sphere_cylinder(1.0), [0.3, 0.8, 0.1])
        assert res < 5e-4
        # the sphere block carries sectional curvature 1/r^2 = 1
        assert np.max(np.abs(R_gauss)) == pytest.approx(1.0, abs=1e-10)

    def test_torus_residual(self):
        res, _, _ = gauss_residual(FLAT, torus_cylinder(2.0, 0.8), [1.0, 0.4, -0.2])
        assert res < 5e-4

    def test_graph_residual(self):
        coeffs = [[0.0, 0.0, 0.25], [0.0, -0.3, 0.0], [0.5, 0.0, 0.0]]
        res, _, _ = gauss_residual(FLAT, graph_cylinder(coeffs), [0.4, -0.2, 0.0])
        assert res < 5e-4

    def test_second_order_convergence(self):
        # truncation-dominated regime: halving h divides the residual by ~4
        u = [1.0, 0.4, 0.0]
        spec = torus_cylinder(2.0, 0.8)
        r1, _, _ = gauss_residual(FLAT, spec, u, h=4e-2)
        r2, _, _ = gauss_residual(FLAT, spec, u, h=2e-2)
        assert 2.5 < r1 / r2 < 6.0

    def test_fd_tensor_symmetries(self):
        R = intrinsic_riemann_fd(FLAT, sphere_cylinder(1.2), [0.2, 0.5, 0.0])
        scale = max(np.abs(R).max(), 1.0)
        np.testing.assert_allclose(R, -R.transpose(1, 0, 2, 3), atol=1e-6 * scale)
        np.testing.assert_allclose(R, -R.transpose(0, 1, 3, 2), atol=1e-6 * scale)
        np.testing.assert_allclose(R, R.transpose(2, 3, 0, 1), atol=1e-6 * scale)

    def test_small_step_warns(self):
        spec = CATALOG["linear_invariant"]["build"](m=2)
        with pytest.warns(UserWarning, match="finite-difference step"):
            intrinsic_riemann_fd(FLAT, spec, [0.0, 0.0, 0.0], h=1e-8)

    def test_curved_ambient_rejected(self):
        S = standard_structure(2, c=1.0)
        with pytest.raises(ConfigurationError):
            gauss_residual(S, sphere_cylinder(1.0), [0.3, 0.8, 0.1])

    def test_interior_point_sweep(self):
        rng = np.random.default_rng(30)
        spec = sphere_cylinder(1.5)
        for _ in range(5):
            u = [rng.uniform(-1.0, 1.0), rng.uniform(0.0, 2 * np.pi), rng.uniform(-1.0, 1.0)]
            res, _, _ = gauss_residual(FLAT, spec, u)
            assert res < 5e-4
