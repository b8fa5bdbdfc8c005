"""Ambient (2m+1)-dimensional almost contact metric data and its closed-form
curvature tensor.

The metric is the identity in working coordinates: all ambient data lives in a
g-orthonormal basis, so inner products are plain dot products.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StructuralError
from .util import check_finite

STRUCT_TOL = 1e-12
DERIVED_TOL = 1e-10


@dataclass(frozen=True)
class AmbientStructure:
    """Pointwise almost contact metric structure with curvature scalars.

    m          -- ambient dimension is 2m+1, m >= 2
    phi        -- (2m+1)x(2m+1) matrix of the (1,1) tensor
    xi         -- structure vector, length 2m+1
    eta        -- structure covector, length 2m+1
    c          -- pointwise phi-sectional curvature
    f          -- conformal scalar (the 1-form omega equals f*eta)
    f_prime    -- derivative of f along xi
    """

    m: int
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    c: float
    f: float
    f_prime: float

    @property
    def dim(self):
        return 2 * self.m + 1


def standard_structure(m, c=0.0, f=0.0, f_prime=0.0):
    """Canonical structure on R^(2m+1) with coordinates (x_1..x_m, y_1..y_m, z).

    phi maps d/dx_i -> d/dy_i, d/dy_i -> -d/dx_i, and kills d/dz; xi = d/dz.
    """
    if m < 2:
        raise DomainError("m must be >= 2 (ambient dimension >= 5)")
    d = 2 * m + 1
    phi = np.zeros((d, d))
    for i in range(m):
        phi[m + i, i] = 1.0
        phi[i, m + i] = -1.0
    xi = np.zeros(d)
    xi[-1] = 1.0
    eta = xi.copy()
    return AmbientStructure(m=m, phi=phi, xi=xi, eta=eta, c=float(c), f=float(f), f_prime=float(f_prime))


def validate_structure(S):
    """Check the four structure identities; return [(name, max residual), ...].

    Empty list means the structure is valid to STRUCT_TOL.
    """
    d = 2 * S.m + 1
    phi = np.asarray(S.phi, dtype=float)
    xi = np.asarray(S.xi, dtype=float)
    eta = np.asarray(S.eta, dtype=float)
    if phi.shape != (d, d) or xi.shape != (d,) or eta.shape != (d,):
        raise StructuralError(
            f"dimension mismatch: expected phi {d}x{d}, xi/eta length {d}, "
            f"got {phi.shape}, {xi.shape}, {eta.shape}"
        )
    check_finite("phi", phi)
    check_finite("xi", xi)
    check_finite("eta", eta)

    violations = []

    def record(name, residual):
        if residual > STRUCT_TOL:
            violations.append((name, float(residual)))

    record("phi^2 = -I + eta (x) xi", np.max(np.abs(phi @ phi + np.eye(d) - np.outer(xi, eta))))
    record("eta(xi) = 1", abs(eta @ xi - 1.0))
    record("phi(xi) = 0", np.max(np.abs(phi @ xi)))
    record("eta o phi = 0", np.max(np.abs(eta @ phi)))
    # <X,Y> = <phiX,phiY> + eta(X)eta(Y)  <=>  phi^T phi = I - eta (x) eta
    record("metric compatibility", np.max(np.abs(phi.T @ phi - np.eye(d) + np.outer(eta, eta))))
    record("phi skew-adjoint", np.max(np.abs(phi + phi.T)))
    return violations


def require_valid(S):
    violations = validate_structure(S)
    if violations:
        worst = max(v for _, v in violations)
        names = ", ".join(name for name, _ in violations)
        raise StructuralError(f"invalid ambient structure ({names}); max residual {worst:.3e}")


def ambient_curvature(S, X, Y, Z):
    """Curvature vector R(X,Y)Z of the model space.

    Three-term closed form driven by (c, f, f'); multilinear in X, Y, Z and
    antisymmetric in X <-> Y.
    """
    require_valid(S)
    X = check_finite("X", X)
    Y = check_finite("Y", Y)
    Z = check_finite("Z", Z)
    phi, eta, xi = S.phi, S.eta, S.xi
    a = (S.c - 3.0 * S.f**2) / 4.0
    b = (S.c + S.f**2) / 4.0
    d = b + S.f_prime

    phiX, phiY, phiZ = phi @ X, phi @ Y, phi @ Z
    etaX, etaY, etaZ = eta @ X, eta @ Y, eta @ Z

    out = a * ((Y @ Z) * X - (X @ Z) * Y)
    out += b * (2.0 * (X @ phiY) * phiZ + (X @ phiZ) * phiY - (Y @ phiZ) * phiX)
    out += d * (
        etaX * etaZ * Y
        - etaY * etaZ * X
        + (X @ Z) * etaY * xi
        - (Y @ Z) * etaX * xi
    )
    return out


def phi_section_curvature(S, X):
    """Sectional curvature of the phi-section spanned by X and phi(X).

    X must be unit and orthogonal to xi; the result equals c for every such X.
    """
    require_valid(S)
    X = check_finite("X", X)
    if abs(np.linalg.norm(X) - 1.0) > DERIVED_TOL:
        raise DomainError("X must be a unit vector")
    if abs(S.eta @ X) > DERIVED_TOL:
        raise DomainError("X must be orthogonal to xi (eta(X) = 0)")
    phiX = S.phi @ X
    return float(ambient_curvature(S, X, phiX, phiX) @ X)
