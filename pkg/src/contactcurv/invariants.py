"""Induced curvature via the Gauss equation, Ricci/k-Ricci curvature, and the
k-plane Ricci infimum.

Sectional-curvature convention throughout: K(X,Y) = <R(X,Y)Y, X>.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg

from . import ambient
from .errors import DomainError, HypothesisViolationError
from .subpoint import phi_split
from .util import unit_directions

DERIVED_TOL = 1e-10


@dataclass(frozen=True)
class InducedCurvature:
    """Induced 4-index curvature in the tangent frame with derived scalars.

    R[i,j,k,l] = R(e_i, e_j, e_k, e_l); K[i,j] = R(e_i,e_j,e_j,e_i);
    tau = sum_{i<j} K[i,j]; ric[i] = Ricci curvature of e_i.
    """

    R: np.ndarray
    K: np.ndarray
    tau: float
    ric: np.ndarray

    @property
    def n(self):
        return self.R.shape[0]


@dataclass(frozen=True)
class KPlane:
    """k orthonormal tangent vectors (rows, frame coordinates); the first is X."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2:
            raise DomainError("a k-plane needs at least 2 vectors")
        if np.max(np.abs(v @ v.T - np.eye(v.shape[0]))) > 1e-12:
            raise DomainError("k-plane vectors must be orthonormal")

    @property
    def k(self):
        return self.vectors.shape[0]


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of the heuristic outer minimization over unit vectors."""

    restarts: int = 32
    net_size: int = 1024
    step_tol: float = 1e-10
    max_iter: int = 500


@dataclass(frozen=True)
class ThetaKResult:
    value: float
    x: np.ndarray
    plane: np.ndarray
    heuristic_outer: bool = True
    converged: bool = True
    restarts_used: int = 0


def induced_curvature(S, p, cross_check=False):
    """Assemble the induced curvature tensor from the tangential Gauss equation.

    With cross_check=True the result is compared against the generic Gauss
    rearrangement built on top of the ambient curvature operator.
    """
    xi_coeffs = p.tangent_frame @ S.xi
    if abs(np.linalg.norm(xi_coeffs) - 1.0) > 1e-8:
        raise HypothesisViolationError("xi is not tangent at this point")

    n = p.n
    split = phi_split(S, p)
    P = split.P
    eta = p.tangent_frame @ S.eta
    delta = np.eye(n)

    a = (S.c - 3.0 * S.f**2) / 4.0
    b = (S.c + S.f**2) / 4.0
    d = b + S.f_prime

    R = a * (np.einsum("il,jk->ijkl", delta, delta) - np.einsum("ik,jl->ijkl", delta, delta))
    R += b * (
        np.einsum("il,jk->ijkl", P, P)
        - np.einsum("ik,jl->ijkl", P, P)
        - 2.0 * np.einsum("ij,kl->ijkl", P, P)
    )
    ee = np.outer(eta, eta)
    R += d * (
        np.einsum("ik,jl->ijkl", ee, delta)
        - np.einsum("jk,il->ijkl", ee, delta)
        + np.einsum("ik,jl->ijkl", delta, ee)
        - np.einsum("jk,il->ijkl", delta, ee)
    )
    R += np.einsum("ril,rjk->ijkl", p.sigma, p.sigma) - np.einsum(
        "rik,rjl->ijkl", p.sigma, p.sigma
    )

    if cross_check:
        direct = induced_curvature_gauss_direct(S, p)
        err = np.max(np.abs(R - direct))
        if err > 1e-9 * (1.0 + np.max(np.abs(R))):
            raise RuntimeError(f"Gauss-equation cross-check failed, residual {err:.3e}")

    K = np.einsum("ijji->ij", R)
    tau = float(np.sum(np.triu(K, 1)))
    ric = K.sum(axis=1) - np.diagonal(K)
    return InducedCurvature(R=R, K=K, tau=tau, ric=ric)


def induced_curvature_gauss_direct(S, p):
    """Induced curvature from the raw Gauss rearrangement: ambient term plus sigma terms.

    Independent of the tangential expansion used by induced_curvature; the two
    must agree.
    """
    n = p.n
    E = p.tangent_frame
    Rtilde = np.empty((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                vec = ambient.ambient_curvature(S, E[i], E[j], E[k])
                Rtilde[i, j, k, :] = E @ vec
    sig = p.sigma
    return (
        Rtilde
        + np.einsum("ril,rjk->ijkl", sig, sig)
        - np.einsum("rik,rjl->ijkl", sig, sig)
    )


def ricci(IC, x):
    """Ricci curvature of a unit tangent vector x (frame coordinates).

    Trace of the Jacobi quadratic form v -> R(x,v,v,x); independent of how x
    is completed to a frame.
    """
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise DomainError("x must be a unit tangent vector")
    # R(x, e_a, e_a, x) summed over directions e_a of any frame
    diag = np.einsum("i,l,iaal->a", x, x, IC.R)
    return float(np.sum(diag))


def k_ricci(IC, L):
    """k-Ricci curvature of the first vector of L and the plane scalar curvature.

    Returns (Ric_L(X), tau(L)).
    """
    k = L.k
    if not 2 <= k <= IC.n:
        raise DomainError(f"k must be in [2, {IC.n}]")
    V = L.vectors
    RL = np.einsum("ai,bj,ck,dl,ijkl->abcd", V, V, V, V, IC.R)
    KL = np.einsum("abba->ab", RL)
    ric_L = float(np.sum(KL[0, 1:]))
    tau_L = float(np.sum(np.triu(KL, 1)))
    return ric_L, tau_L


def jacobi_form(IC, x):
    """Symmetric matrix of v -> R(x,v,v,x) restricted to the orthocomplement of x.

    Returns (Q, basis) with basis rows an orthonormal basis of x-perp and
    Q the (n-1)x(n-1) restricted form.
    """
    x = np.asarray(x, dtype=float)
    basis = scipy.linalg.null_space(x[None, :]).T
    M = np.einsum("i,l,iakl->ak", x, x, IC.R)
    M = 0.5 * (M + M.T)
    Q = basis @ M @ basis.T
    return 0.5 * (Q + Q.T), basis


def min_k_ricci_at(IC, x, k):
    """Exact infimum over k-planes containing x of Ric_L(x).

    Ky Fan reduction: the infimum of the trace of the Jacobi form over
    (k-1)-subspaces of x-perp is the sum of its k-1 smallest eigenvalues.
    Returns (value, plane) with the minimizing plane (k rows, frame coords).
    """
    Q, basis = jacobi_form(IC, x)
    evals, evecs = np.linalg.eigh(Q)
    value = float(np.sum(evals[: k - 1]))
    plane = np.vstack([x, evecs[:, : k - 1].T @ basis])
    return value, plane


def theta_k(IC, k, search=SearchConfig()):
    """k-plane Ricci infimum theta_k = inf over unit x and k-planes L of Ric_L(x)/(k-1).

    The inner infimum over planes is exact (eigenvalue sum); the outer
    minimization over the unit sphere uses a deterministic direction net plus
    multi-start projected gradient descent, so the result is an upper bound on
    the true infimum and is flagged heuristic.
    """
    n = IC.n
    if not 2 <= k <= n:
        raise DomainError(f"k must be in [2, {n}]")

    def objective(x):
        value, _ = min_k_ricci_at(IC, x, k)
        return value

    candidates = [np.eye(n)[i] for i in range(n)]
    candidates.extend(unit_directions(n, search.net_size))
    values = np.array([objective(x) for x in candidates])
    order = np.argsort(values)

    best_val = values[order[0]]
    best_x = candidates[order[0]]
    converged = True
    restarts = 0
    for idx in order[: search.restarts]:
        restarts += 1
        x, val, ok = _descend(objective, np.array(candidates[idx]), search)
        converged = converged and ok
        if val < best_val:
            best_val, best_x = val, x

    value, plane = min_k_ricci_at(IC, best_x, k)
    return ThetaKResult(
        value=float(value / (k - 1)),
        x=best_x,
        plane=plane,
        heuristic_outer=True,
        converged=converged,
        restarts_used=restarts,
    )


def _descend(objective, x, search):
    """Projected gradient descent on the unit sphere with numerical gradients."""
    h = 1e-6
    step = 0.1
    val = objective(x)
    for _ in range(search.max_iter):
        grad = np.zeros_like(x)
        for i in range(len(x)):
            e = np.zeros_like(x)
            e[i] = h
            grad[i] = (objective(_normalize(x + e)) - objective(_normalize(x - e))) / (2 * h)
        grad -= (grad @ x) * x  # tangent to the sphere
        gnorm = np.linalg.norm(grad)
        if gnorm < search.step_tol:
            return x, val, True
        moved = False
        while step > search.step_tol:
            cand = _normalize(x - step * grad)
            cand_val = objective(cand)
            if cand_val < val - 1e-15:
                x, val = cand, cand_val
                moved = True
                step *= 1.5
                break
            step *= 0.5
        if not moved:
            return x, val, True
    return x, val, False


def _normalize(v):
    return v / np.linalg.norm(v)


def tau_from_coordinate_planes(IC, k):
    """Scalar curvature recovered by averaging tau(L) over coordinate k-planes.

    tau = (1 / C(n-2, k-2)) * sum over index subsets of size k of tau(L).
    """
    n = IC.n
    from math import comb

    total = 0.0
    for subset in combinations(range(n), k):
        V = np.eye(n)[list(subset)]
        _, tau_L = k_ricci(IC, KPlane(V))
        total += tau_L
    return total / comb(n - 2, k - 2)
