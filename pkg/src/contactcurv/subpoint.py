"""Pointwise submanifold data: frames, second fundamental form, mean curvature,
tangential/normal split of phi, and classification of the submanifold type.

The second fundamental form is accepted as arbitrary symmetric coefficient data
in the orthonormal frames produced here; geometric realizability is the job of
the immersion catalog (immersion_lab).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateClassificationError,
    DomainError,
    HypothesisViolationError,
)
from .util import check_finite, unit_directions

FRAME_TOL = 1e-10
CLUSTER_TOL = 1e-7
SLANT_SAMPLES = 256


@dataclass(frozen=True)
class SubmanifoldPoint:
    """Orthonormal tangent/normal frames at a point with xi tangent.

    tangent_frame -- (n, dim) rows e_1..e_n, e_1 = xi
    normal_frame  -- (dim-n, dim) rows, orthonormal complement
    sigma         -- (dim-n, n, n) coefficients of the second fundamental
                     form in these frames, symmetric in the last two indices
    """

    n: int
    tangent_frame: np.ndarray
    normal_frame: np.ndarray
    sigma: np.ndarray

    @property
    def codim(self):
        return self.normal_frame.shape[0]


@dataclass(frozen=True)
class PhiSplit:
    """Tangential (P) and normal (F) parts of phi restricted to the tangent space."""

    P: np.ndarray
    F: np.ndarray
    norm_P_sq: float


@dataclass(frozen=True)
class Classification:
    """Submanifold type at the point.

    kind is one of "invariant", "anti-invariant", "slant", "cr", "generic".
    slant_angle is set for slant points (0 for invariant, pi/2 for
    anti-invariant); h and dim_d_perp are set for CR points.
    """

    kind: str
    slant_angle: float = None
    h: int = None
    dim_d_perp: int = None
    angle_spread: float = None


def build_point(S, raw_frame, sigma):
    """Orthonormalize a raw tangent frame (xi first) and attach sigma.

    sigma is indexed against the frames this function produces: entry [r,i,j]
    pairs normal direction r with tangent directions i,j.
    """
    raw = check_finite("raw_frame", np.asarray(raw_frame, dtype=float))
    if raw.ndim != 2 or raw.shape[1] != S.dim:
        raise DomainError(f"raw_frame must be (n, {S.dim})")
    n = raw.shape[0]
    if not 2 <= n <= S.dim:
        raise DomainError(f"tangent dimension must be in [2, {S.dim}], got {n}")
    if np.linalg.matrix_rank(raw, tol=1e-10) < n:
        raise DomainError("raw_frame is rank deficient")

    # xi must lie in the span of the raw frame
    coeffs, residual, _, _ = np.linalg.lstsq(raw.T, S.xi, rcond=None)
    resid = np.linalg.norm(raw.T @ coeffs - S.xi)
    if resid > FRAME_TOL:
        raise HypothesisViolationError(
            f"structure vector xi is not tangent (projection residual {resid:.3e})"
        )

    frame = [S.xi / np.linalg.norm(S.xi)]
    for v in raw:
        w = v.copy()
        for e in frame:
            w -= (w @ e) * e
        norm = np.linalg.norm(w)
        if norm > 1e-10:
            frame.append(w / norm)
    if len(frame) != n:
        raise DomainError("raw_frame did not span an n-dimensional space with xi")
    tangent = np.array(frame)

    normal = scipy.linalg.null_space(tangent).T
    # fix signs deterministically: largest-magnitude entry positive
    for row in normal:
        k = np.argmax(np.abs(row))
        if row[k] < 0:
            row *= -1.0

    sig = check_finite("sigma", np.asarray(sigma, dtype=float))
    if sig.shape != (S.dim - n, n, n):
        raise DomainError(f"sigma must have shape ({S.dim - n}, {n}, {n})")
    if np.max(np.abs(sig - sig.transpose(0, 2, 1))) > 1e-12:
        raise DomainError("sigma must be symmetric in its tangent indices")

    return SubmanifoldPoint(n=n, tangent_frame=tangent, normal_frame=normal, sigma=sig)


def mean_curvature(p):
    """Mean curvature vector H (ambient coordinates) and its squared norm."""
    traces = np.trace(p.sigma, axis1=1, axis2=2) / p.n
    H = traces @ p.normal_frame
    return H, float(traces @ traces)


def shape_operator(p, r):
    """Shape operator A_r for the r-th normal direction (0-based)."""
    if not 0 <= r < p.codim:
        raise DomainError(f"normal index {r} out of range [0, {p.codim})")
    return p.sigma[r]


def phi_split(S, p):
    """Split phi restricted to the tangent space into tangential and normal parts."""
    phi_tangent = p.tangent_frame @ S.phi.T  # rows phi(e_j)
    P = p.tangent_frame @ phi_tangent.T  # P[i,j] = <e_i, phi e_j>
    F = p.normal_frame @ phi_tangent.T
    return PhiSplit(P=P, F=F, norm_P_sq=float(np.sum(P**2)))


def sigma_norms(p):
    """Squared norm of sigma and its mean-curvature decomposition.

    Returns (lhs, rhs) where lhs = sum of squared coefficients and rhs is the
    same quantity rebuilt from n^2|H|^2/2 plus the trace/off-diagonal blocks
    singling out the first frame direction; the two agree identically.
    """
    n = p.n
    sig = p.sigma
    lhs = float(np.sum(sig**2))
    _, h2 = mean_curvature(p)
    diag = np.diagonal(sig, axis1=1, axis2=2)  # (codim, n)
    term_trace = 0.5 * np.sum((diag[:, 0] - np.sum(diag[:, 1:], axis=1)) ** 2)
    term_row = 2.0 * np.sum(sig[:, 0, 1:] ** 2)
    term_minor = 0.0
    for r in range(p.codim):
        for i in range(1, n):
            for j in range(i + 1, n):
                term_minor += sig[r, i, i] * sig[r, j, j] - sig[r, i, j] ** 2
    rhs = 0.5 * n**2 * h2 + term_trace + term_row - 2.0 * term_minor
    return lhs, float(rhs)


def relative_null_space(p, tol=1e-8):
    """Orthonormal basis (rows, frame coordinates) of the relative null space.

    X is in the null space iff every shape operator kills it; computed by
    singular-value thresholding of the stacked shape operators.
    """
    stacked = p.sigma.reshape(p.codim * p.n, p.n)
    if stacked.size == 0 or np.max(np.abs(stacked)) == 0.0:
        return np.eye(p.n)
    u, s, vt = np.linalg.svd(stacked)
    null_mask = np.zeros(p.n, dtype=bool)
    null_mask[: len(s)] = s < tol
    null_mask[len(s):] = True
    return vt[null_mask]


def _xi_complement_p(S, p):
    """P restricted to the xi-orthocomplement of the tangent space (frame indices >= 1)."""
    split = phi_split(S, p)
    return split, split.P[1:, 1:]


def classify(S, p, tol_angle=1e-6):
    """Classify the tangent space as invariant / anti-invariant / slant / CR / generic.

    Samples a deterministic net of unit tangent directions orthogonal to xi
    and measures the Wirtinger angle of each; CR detection falls back on the
    eigenstructure of P^T P (eigenvalues clustered at 1 for the invariant
    distribution, 0 for the anti-invariant one).
    """
    if p.n < 2:
        raise DegenerateClassificationError("no tangent direction orthogonal to xi")
    split, P_perp = _xi_complement_p(S, p)

    dirs = unit_directions(p.n - 1, SLANT_SAMPLES)
    # embed: directions live in frame indices 1..n-1 (orthogonal to xi = e_1)
    cos2 = np.sum((dirs @ P_perp.T) ** 2, axis=1)  # |P X|^2, |phi X| = 1 here
    cos_theta = np.sqrt(np.clip(cos2, 0.0, 1.0))
    sin_theta = np.sqrt(np.clip(1.0 - cos2, 0.0, 1.0))
    theta = np.arctan2(sin_theta, cos_theta)
    spread = float(theta.max() - theta.min())

    if np.all(sin_theta < tol_angle):
        return Classification(kind="invariant", slant_angle=0.0, angle_spread=spread)
    if np.all(cos_theta < tol_angle):
        return Classification(kind="anti-invariant", slant_angle=np.pi / 2, angle_spread=spread)
    if spread < tol_angle:
        return Classification(kind="slant", slant_angle=float(theta.mean()), angle_spread=spread)

    # CR: eigenvalues of P^T P on the xi-complement cluster at {1, 0}
    evals = np.linalg.eigvalsh(P_perp.T @ P_perp)
    near_one = np.abs(evals - 1.0) < CLUSTER_TOL
    near_zero = np.abs(evals) < CLUSTER_TOL
    if np.all(near_one | near_zero):
        dim_d = int(np.sum(near_one))
        dim_d_perp = int(np.sum(near_zero))
        if dim_d % 2 == 0 and dim_d > 0 and dim_d_perp > 0:
            return Classification(
                kind="cr", h=dim_d // 2, dim_d_perp=dim_d_perp, angle_spread=spread
            )
    return Classification(kind="generic", angle_spread=spread)


def cr_projectors(S, p, tol=CLUSTER_TOL):
    """Orthogonal projectors (frame coordinates) onto the CR distributions D and D-perp.

    Returns (proj_d, proj_d_perp), each (n, n). Raises if the eigenstructure
    does not cluster at {1, 0}.
    """
    _, P_perp = _xi_complement_p(S, p)
    evals, evecs = np.linalg.eigh(P_perp.T @ P_perp)
    near_one = np.abs(evals - 1.0) < tol
    near_zero = np.abs(evals) < tol
    if not np.all(near_one | near_zero):
        raise DomainError("point is not CR: P^T P spectrum not clustered at {1,0}")

    def embed(cols):
        basis = np.zeros((p.n, cols.shape[1]))
        basis[1:, :] = cols
        return basis @ basis.T

    return embed(evecs[:, near_one]), embed(evecs[:, near_zero])
