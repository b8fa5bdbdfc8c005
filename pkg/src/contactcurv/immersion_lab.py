"""Concrete immersions into the flat model R^(2m+1) and an independent
finite-difference intrinsic-curvature oracle.

Catalog immersions carry closed-form jets (position, Jacobian, Hessian); the
oracle differentiates only the induced metric, so truncation error is confined
to one finite-difference layer.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, DomainError
from .invariants import induced_curvature
from .subpoint import SubmanifoldPoint

FD_DEFAULT_STEP = 1e-4


@dataclass(frozen=True)
class ImmersionSpec:
    """A chart immersion u -> x(u) with closed-form derivatives.

    jet(u) returns (x, J, H): position (d,), Jacobian (d, n) with columns
    d x / d u_i, Hessian (d, n, n). The last chart coordinate maps linearly to
    the final ambient coordinate (the z axis), so xi is always tangent.
    """

    name: str
    chart_dim: int
    ambient_dim: int
    jet: callable
    params: dict = field(default_factory=dict)


def linear_immersion(matrix, ambient_dim):
    """Affine subspace immersion u -> A u; A columns must include the z axis."""
    A = np.asarray(matrix, dtype=float)
    if A.shape[0] != ambient_dim:
        raise DomainError("matrix rows must equal the ambient dimension")
    n = A.shape[1]

    def jet(u):
        u = np.asarray(u, dtype=float)
        return A @ u, A.copy(), np.zeros((ambient_dim, n, n))

    return ImmersionSpec(name="linear", chart_dim=n, ambient_dim=ambient_dim, jet=jet)


def slant_plane(theta, m=2):
    """Span of xi, d/dx1 and cos(theta) d/dy1 + sin(theta) d/dx2 in R^(2m+1)."""
    d = 2 * m + 1
    A = np.zeros((d, 3))
    A[-1, 0] = 1.0  # z
    A[0, 1] = 1.0  # x1
    A[m, 2] = np.cos(theta)  # y1
    A[1, 2] = np.sin(theta)  # x2
    spec = linear_immersion(A, d)
    return ImmersionSpec(
        name="slant_plane", chart_dim=3, ambient_dim=d, jet=spec.jet, params={"theta": theta}
    )


def sphere_cylinder(r=1.0, m=2):
    """S^2(r) x R_z in R^(2m+1): sphere in (x1, x2, y1), z factor along xi."""
    if r <= 0:
        raise DomainError("radius must be positive")
    d = 2 * m + 1
    ax = [0, 1, m]  # ambient slots for the three spherical coordinates

    def jet(u):
        th, ph, z = u
        ct, st = np.cos(th), np.sin(th)
        cp, sp = np.cos(ph), np.sin(ph)
        x = np.zeros(d)
        x[ax[0]] = r * ct * cp
        x[ax[1]] = r * ct * sp
        x[ax[2]] = r * st
        x[-1] = z

        J = np.zeros((d, 3))
        J[ax[0], 0] = -r * st * cp
        J[ax[1], 0] = -r * st * sp
        J[ax[2], 0] = r * ct
        J[ax[0], 1] = -r * ct * sp
        J[ax[1], 1] = r * ct * cp
        J[-1, 2] = 1.0

        H = np.zeros((d, 3, 3))
        H[ax[0], 0, 0] = -r * ct * cp
        H[ax[1], 0, 0] = -r * ct * sp
        H[ax[2], 0, 0] = -r * st
        H[ax[0], 0, 1] = H[ax[0], 1, 0] = r * st * sp
        H[ax[1], 0, 1] = H[ax[1], 1, 0] = -r * st * cp
        H[ax[0], 1, 1] = -r * ct * cp
        H[ax[1], 1, 1] = -r * ct * sp
        return x, J, H

    return ImmersionSpec(
        name="sphere_cylinder", chart_dim=3, ambient_dim=d, jet=jet, params={"r": r}
    )


def torus_cylinder(a=2.0, b=1.0, m=2):
    """T^2(a,b) x R_z in R^(2m+1): torus in (x1, x2, y1), z factor along xi."""
    if a <= b or b <= 0:
        raise DomainError("torus needs a > b > 0")
    d = 2 * m + 1
    ax = [0, 1, m]

    def jet(u):
        uu, vv, z = u
        cu, su = np.cos(uu), np.sin(uu)
        cv, sv = np.cos(vv), np.sin(vv)
        w = a + b * cv
        x = np.zeros(d)
        x[ax[0]] = w * cu
        x[ax[1]] = w * su
        x[ax[2]] = b * sv
        x[-1] = z

        J = np.zeros((d, 3))
        J[ax[0], 0] = -w * su
        J[ax[1], 0] = w * cu
        J[ax[0], 1] = -b * sv * cu
        J[ax[1], 1] = -b * sv * su
        J[ax[2], 1] = b * cv
        J[-1, 2] = 1.0

        H = np.zeros((d, 3, 3))
        H[ax[0], 0, 0] = -w * cu
        H[ax[1], 0, 0] = -w * su
        H[ax[0], 0, 1] = H[ax[0], 1, 0] = b * sv * su
        H[ax[1], 0, 1] = H[ax[1], 1, 0] = -b * sv * cu
        H[ax[0], 1, 1] = -b * cv * cu
        H[ax[1], 1, 1] = -b * cv * su
        H[ax[2], 1, 1] = -b * sv
        return x, J, H

    return ImmersionSpec(
        name="torus_cylinder", chart_dim=3, ambient_dim=d, jet=jet, params={"a": a, "b": b}
    )


def graph_cylinder(coeffs, m=2):
    """Graph surface (u, v, p(u,v)) x R_z with a polynomial height p, degree <= 4.

    coeffs[i][j] multiplies u^i v^j; the graph lives in (x1, x2, y1).
    """
    C = np.asarray(coeffs, dtype=float)
    if C.ndim != 2 or C.shape[0] > 5 or C.shape[1] > 5:
        raise DomainError("height polynomial must have degree <= 4 in each variable")
    d = 2 * m + 1
    ax = [0, 1, m]

    def poly(u, v, du=0, dv=0):
        D = np.polynomial.polynomial.polyder
        cc = C
        for _ in range(du):
            cc = D(cc, axis=0) if cc.shape[0] > 1 else np.zeros((1, cc.shape[1]))
        for _ in range(dv):
            cc = D(cc, axis=1) if cc.shape[1] > 1 else np.zeros((cc.shape[0], 1))
        return np.polynomial.polynomial.polyval2d(u, v, cc)

    def jet(w):
        u, v, z = w
        x = np.zeros(d)
        x[ax[0]], x[ax[1]], x[ax[2]], x[-1] = u, v, poly(u, v), z

        J = np.zeros((d, 3))
        J[ax[0], 0] = 1.0
        J[ax[1], 1] = 1.0
        J[ax[2], 0] = poly(u, v, du=1)
        J[ax[2], 1] = poly(u, v, dv=1)
        J[-1, 2] = 1.0

        H = np.zeros((d, 3, 3))
        H[ax[2], 0, 0] = poly(u, v, du=2)
        H[ax[2], 0, 1] = H[ax[2], 1, 0] = poly(u, v, du=1, dv=1)
        H[ax[2], 1, 1] = poly(u, v, dv=2)
        return x, J, H

    return ImmersionSpec(
        name="graph_cylinder", chart_dim=3, ambient_dim=d, jet=jet, params={"degree": C.shape}
    )


CATALOG = {
    "linear_invariant": {
        "build": lambda m=2: _named(
            linear_immersion(_cols(2 * m + 1, [2 * m, 0, m]), 2 * m + 1), "linear_invariant"
        ),
        "params": "m >= 2",
    },
    "linear_anti_invariant": {
        "build": lambda m=2: _named(
            linear_immersion(_cols(2 * m + 1, [2 * m, 0, 1]), 2 * m + 1), "linear_anti_invariant"
        ),
        "params": "m >= 2",
    },
    "slant_plane": {"build": slant_plane, "params": "theta in (0, pi/2), m >= 2"},
    "sphere_cylinder": {"build": sphere_cylinder, "params": "r > 0, m >= 2"},
    "torus_cylinder": {"build": torus_cylinder, "params": "a > b > 0, m >= 2"},
    "graph_cylinder": {"build": graph_cylinder, "params": "coeffs (<=5 x <=5), m >= 2"},
}


def _cols(d, indices):
    A = np.zeros((d, len(indices)))
    for j, i in enumerate(indices):
        A[i, j] = 1.0
    return A


def _named(spec, name):
    return ImmersionSpec(
        name=name,
        chart_dim=spec.chart_dim,
        ambient_dim=spec.ambient_dim,
        jet=spec.jet,
        params=spec.params,
    )


def _frames_and_chart_map(S, spec, u):
    """Orthonormal frames at x(u) (xi first) and the chart-to-frame matrix C
    with E_a = sum_i C[i,a] * (d x / d u_i)."""
    x, J, H = spec.jet(np.asarray(u, dtype=float))
    n = spec.chart_dim
    if np.linalg.matrix_rank(J, tol=1e-10) < n:
        raise DomainError(f"Jacobian of {spec.name} is rank deficient at {u}")

    coeffs, *_ = np.linalg.lstsq(J, S.xi, rcond=None)
    if np.linalg.norm(J @ coeffs - S.xi) > 1e-9:
        raise DomainError(f"xi is not tangent to {spec.name} at {u}")

    frame = [S.xi.copy()]
    chart = [coeffs]
    for i in range(n):
        v = J[:, i].copy()
        c = np.zeros(n)
        c[i] = 1.0
        for e, ce in zip(frame, chart):
            proj = v @ e / (e @ e)
            v -= proj * e
            c = c - proj * ce
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            frame.append(v / norm)
            chart.append(c / norm)
    tangent = np.array(frame)
    C = np.array(chart).T  # (n, n), columns are chart coefficients of E_a
    normal = scipy.linalg.null_space(tangent).T
    for row in normal:
        kmax = np.argmax(np.abs(row))
        if row[kmax] < 0:
            row *= -1.0
    return x, J, H, tangent, normal, C


def point_from_immersion(S, spec, u):
    """SubmanifoldPoint at x(u): frames from first derivatives, sigma from the
    normal projection of the Hessian (flat ambient)."""
    _, _, H, tangent, normal, C = _frames_and_chart_map(S, spec, u)
    # sigma^r_ab = sum_ij C[i,a] C[j,b] <H[:,i,j], N_r>
    hn = np.einsum("dij,rd->rij", H, normal)
    sigma = np.einsum("ia,jb,rij->rab", C, C, hn)
    sigma = 0.5 * (sigma + sigma.transpose(0, 2, 1))
    return SubmanifoldPoint(n=spec.chart_dim, tangent_frame=tangent, normal_frame=normal, sigma=sigma)


def _metric(spec, u):
    _, J, _ = spec.jet(u)
    return J.T @ J


def _christoffel(spec, u, h):
    n = spec.chart_dim
    g = _metric(spec, u)
    ginv = np.linalg.inv(g)
    dg = np.zeros((n, n, n))  # dg[i, j, l] = d g_jl / d u_i
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        dg[i] = (_metric(spec, u + e) - _metric(spec, u - e)) / (2.0 * h)
    # Gamma^k_ij = g^kl (d_i g_jl + d_j g_il - d_l g_ij) / 2
    gamma = 0.5 * np.einsum(
        "kl,ijl->kij", ginv, dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    )
    return gamma


def intrinsic_riemann_fd(S, spec, u, h=FD_DEFAULT_STEP):
    """Finite-difference intrinsic curvature, expressed in the orthonormal frame.

    Independent oracle: differentiates the induced metric only, never touching
    the second fundamental form or the Gauss equation. Accuracy O(h^2).
    """
    if h < 1e-7:
        warnings.warn("finite-difference step below 1e-7: expect cancellation noise")
    u = np.asarray(u, dtype=float)
    n = spec.chart_dim
    g = _metric(spec, u)
    gamma = _christoffel(spec, u, h)
    dgamma = np.zeros((n, n, n, n))  # dgamma[i, k, a, b] = d Gamma^k_ab / d u_i
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        dgamma[i] = (_christoffel(spec, u + e, h) - _christoffel(spec, u - e, h)) / (2.0 * h)

    # R(d_i, d_j) d_k = (d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik) d_l
    Rup = np.zeros((n, n, n, n))  # Rup[i, j, k, l] = coefficient of d_l in R(d_i,d_j)d_k
    for i in range(n):
        for j in range(n):
            for k in range(n):
                Rup[i, j, k, :] = (
                    dgamma[i, :, j, k]
                    - dgamma[j, :, i, k]
                    + gamma[:, i, :] @ gamma[:, j, k]
                    - gamma[:, j, :] @ gamma[:, i, k]
                )
    Rcoord = np.einsum("ijkm,ml->ijkl", Rup, g)  # lower the last index

    _, _, _, _, _, C = _frames_and_chart_map(S, spec, u)
    return np.einsum("ia,jb,kc,ld,ijkl->abcd", C, C, C, C, Rcoord)


def gauss_residual(S, spec, u, h=FD_DEFAULT_STEP):
    """Max abs difference between the Gauss-equation curvature and the
    finite-difference intrinsic curvature; flat ambient only.

    Returns (residual, R_gauss, R_fd).
    """
    if S.c != 0.0 or S.f != 0.0 or S.f_prime != 0.0:
        raise ConfigurationError("the finite-difference oracle requires c = f = f' = 0")
    p = point_from_immersion(S, spec, u)
    R_gauss = induced_curvature(S, p).R
    R_fd = intrinsic_riemann_fd(S, spec, u, h=h)
    return float(np.max(np.abs(R_gauss - R_fd))), R_gauss, R_fd
