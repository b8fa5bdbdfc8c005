"""Named curvature bounds with slack accounting and equality-case diagnosis.

Every report carries the bound name, both sides, the signed slack
(nonnegative iff the bound holds), and a structural diagnosis of the equality
case (totally geodesic / totally umbilical / relative null space membership).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .invariants import ricci
from .subpoint import cr_projectors, mean_curvature, phi_split

HOLDS_TOL = 1e-9
EQUALITY_TOL = 1e-7
GEODESIC_TOL = 1e-9
CLS_CONSISTENCY_TOL = 1e-6


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    sense: str  # "<=" or ">="
    slack: float
    holds: bool
    equality: bool
    diagnosis: str = "none"
    classification_used: str = None
    notes: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "sense": self.sense,
            "slack": self.slack,
            "holds": self.holds,
            "equality": self.equality,
            "diagnosis": self.diagnosis,
            "classification_used": self.classification_used,
            "notes": list(self.notes),
        }


def _report(name, lhs, rhs, sense, diagnosis="none", cls=None, notes=()):
    slack = rhs - lhs if sense == "<=" else lhs - rhs
    scale = 1.0 + abs(lhs) + abs(rhs)
    holds = slack >= -HOLDS_TOL * scale
    equality = abs(slack) < EQUALITY_TOL * scale
    return InequalityReport(
        name=name,
        lhs=float(lhs),
        rhs=float(rhs),
        sense=sense,
        slack=float(slack),
        holds=bool(holds),
        equality=bool(equality),
        diagnosis=diagnosis,
        classification_used=cls,
        notes=tuple(notes),
    )


def identity_tau_check(S, p, IC):
    """Residual of the scalar-curvature / mean-curvature identity; ~0 always."""
    n = p.n
    _, h2 = mean_curvature(p)
    sigma2 = float(np.sum(p.sigma**2))
    norm_P_sq = phi_split(S, p).norm_P_sq
    c, f, fp = S.c, S.f, S.f_prime
    rhs = (
        2.0 * IC.tau
        + sigma2
        - 0.25 * n * (n - 1) * (c - 3.0 * f**2)
        - 0.75 * norm_P_sq * (c + f**2)
        + 2.0 * (n - 1) * ((c + f**2) / 4.0 + fp)
    )
    return float(n**2 * h2 - rhs)


def _scalar_rhs_general(S, n, h2, norm_P_sq):
    c, f, fp = S.c, S.f, S.f_prime
    return (
        0.5 * n**2 * h2
        + 0.125 * n * (n - 1) * (c - 3.0 * f**2)
        + 0.125 * (3.0 * norm_P_sq - 2.0 * (n - 1)) * (c + f**2)
        - (n - 1) * fp
    )


def scalar_rhs_specialized(S, n, h2, cls):
    """RHS of the specialized scalar bound for a slant / invariant /
    anti-invariant / CR classification."""
    c, f, fp = S.c, S.f, S.f_prime
    if cls.kind == "slant":
        t = np.cos(cls.slant_angle) ** 2
        return 0.5 * n**2 * h2 + (n - 1) / 8.0 * (
            n * (c - 3.0 * f**2) + (3.0 * t - 2.0) * (c + f**2) - 8.0 * fp
        )
    if cls.kind == "invariant":
        return 0.5 * n**2 * h2 + (n - 1) / 8.0 * ((n + 1) * c - (3 * n - 1) * f**2 - 8.0 * fp)
    if cls.kind == "anti-invariant":
        return 0.5 * n**2 * h2 + (n - 1) / 8.0 * ((n - 2) * c - (3 * n + 2) * f**2 - 8.0 * fp)
    if cls.kind == "cr":
        return (
            0.5 * n**2 * h2
            + 0.125 * n * (n - 1) * (c - 3.0 * f**2)
            + 0.125 * (6.0 * cls.h - 2.0 * (n - 1)) * (c + f**2)
            - (n - 1) * fp
        )
    raise ConfigurationError(f"no specialized scalar bound for kind {cls.kind!r}")


def _check_cls_consistent(S, p, cls):
    """The specialized bounds assume the |P|^2 identity of the claimed kind."""
    norm_P_sq = phi_split(S, p).norm_P_sq
    n = p.n
    if cls.kind == "slant":
        expected = (n - 1) * np.cos(cls.slant_angle) ** 2
    elif cls.kind == "invariant":
        expected = float(n - 1)
    elif cls.kind == "anti-invariant":
        expected = 0.0
    elif cls.kind == "cr":
        expected = 2.0 * cls.h
    else:
        return norm_P_sq
    if abs(norm_P_sq - expected) > CLS_CONSISTENCY_TOL * (1.0 + expected):
        raise ConfigurationError(
            f"classification {cls.kind!r} inconsistent with the point: "
            f"|P|^2 = {norm_P_sq:.6g}, expected {expected:.6g}"
        )
    return norm_P_sq


def scalar_suite(S, p, IC, cls):
    """General scalar-curvature bound, plus the specialized variant matching cls."""
    n = p.n
    _, h2 = mean_curvature(p)
    norm_P_sq = _check_cls_consistent(S, p, cls)
    sigma_max = float(np.max(np.abs(p.sigma))) if p.sigma.size else 0.0
    diagnosis = "totally geodesic" if sigma_max < GEODESIC_TOL else "none"

    reports = [
        _report("scalar-lc", IC.tau, _scalar_rhs_general(S, n, h2, norm_P_sq), "<=", diagnosis, cls.kind)
    ]
    if cls.kind in ("slant", "invariant", "anti-invariant", "cr"):
        name = {
            "slant": "scalar-lc-slant",
            "invariant": "scalar-lc-inv",
            "anti-invariant": "scalar-lc-anti",
            "cr": "scalar-lc-cr",
        }[cls.kind]
        reports.append(
            _report(name, IC.tau, scalar_rhs_specialized(S, n, h2, cls), "<=", diagnosis, cls.kind)
        )
    return reports


def ricci_rhs_general(S, n, h2, norm_PX_sq, eta_X_sq):
    c, f, fp = S.c, S.f, S.f_prime
    return 0.25 * (
        n**2 * h2
        + (n - 1) * (c - 3.0 * f**2)
        + (3.0 * norm_PX_sq - (n - 2) * eta_X_sq - 1.0) * (c + f**2)
    ) - (1.0 + (n - 2) * eta_X_sq) * fp


def ricci_rhs_specialized(S, n, h2, eta_X_sq, cls):
    c, f, fp = S.c, S.f, S.f_prime
    if cls.kind == "slant":
        t = np.cos(cls.slant_angle) ** 2
        return 0.25 * (
            n**2 * h2
            + (n - 1) * (c - 3.0 * f**2)
            + (3.0 * t - (n + 3.0 * t - 2.0) * eta_X_sq - 1.0) * (c + f**2)
        ) - (1.0 + (n - 2) * eta_X_sq) * fp
    if cls.kind == "invariant":
        return 0.25 * (
            n**2 * h2
            + (n - 1) * (c - 3.0 * f**2)
            + (2.0 - (n + 1) * eta_X_sq) * (c + f**2)
        ) - (1.0 + (n - 2) * eta_X_sq) * fp
    if cls.kind == "anti-invariant":
        return 0.25 * (
            n**2 * h2
            + (n - 1) * (c - 3.0 * f**2)
            - (1.0 + (n - 2) * eta_X_sq) * (c + f**2 + 4.0 * fp)
        )
    raise ConfigurationError(f"no specialized Ricci bound for kind {cls.kind!r}")


def _nullspace_membership(p, x, tol=1e-8):
    """True iff sigma(x, .) = 0, i.e. every shape operator kills x."""
    if p.sigma.size == 0:
        return True
    return float(np.max(np.abs(np.einsum("rij,j->ri", p.sigma, x)))) < tol


def ricci_suite(S, p, IC, x, cls):
    """Ricci bounds for the unit tangent vector x (frame coordinates)."""
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise DomainError("x must be a unit tangent vector")
    n = p.n
    _, h2 = mean_curvature(p)
    _check_cls_consistent(S, p, cls)
    split = phi_split(S, p)
    norm_PX_sq = float(np.sum((split.P @ x) ** 2))
    eta_X_sq = float((p.tangent_frame @ S.eta) @ x) ** 2
    ric_x = ricci(IC, x)

    diagnosis = "none"
    notes = []
    if h2 < GEODESIC_TOL**2:
        if _nullspace_membership(p, x):
            diagnosis = "X in relative null space"
        else:
            notes.append("H = 0 but X not in relative null space")

    reports = [
        _report(
            "ricci-1",
            ric_x,
            ricci_rhs_general(S, n, h2, norm_PX_sq, eta_X_sq),
            "<=",
            diagnosis,
            cls.kind,
            notes,
        )
    ]
    if cls.kind in ("slant", "invariant", "anti-invariant"):
        name = {
            "slant": "ricci-slant",
            "invariant": "ricci-inv",
            "anti-invariant": "ricci-anti",
        }[cls.kind]
        reports.append(
            _report(
                name,
                ric_x,
                ricci_rhs_specialized(S, n, h2, eta_X_sq, cls),
                "<=",
                diagnosis,
                cls.kind,
                notes,
            )
        )
    elif cls.kind == "cr":
        reports.extend(_cr_ricci_reports(S, p, x, ric_x, h2, diagnosis, notes))
    return reports


def _cr_ricci_reports(S, p, x, ric_x, h2, diagnosis, notes):
    """CR Ricci bounds, emitted only when x lies in D or D-perp."""
    n = p.n
    c, f, fp = S.c, S.f, S.f_prime
    proj_d, proj_d_perp = cr_projectors(S, p)
    in_d = np.linalg.norm(proj_d @ x - x) < 1e-7
    in_d_perp = np.linalg.norm(proj_d_perp @ x - x) < 1e-7
    reports = []
    if in_d:
        rhs = 0.25 * (n**2 * h2 + (n + 1) * c - (3 * n - 5) * f**2 - 4.0 * fp)
        reports.append(_report("ricci-cr-1", ric_x, rhs, "<=", diagnosis, "cr", notes))
    elif in_d_perp:
        rhs = 0.25 * (n**2 * h2 + (n - 2) * c - (3 * n - 2) * f**2 - 4.0 * fp)
        reports.append(_report("ricci-cr-2", ric_x, rhs, "<=", diagnosis, "cr", notes))
    # x in neither distribution: the CR-specific bounds do not apply, emit nothing
    return reports


def ricci_equality_sweep(S, p, IC, cls, samples=256):
    """Check whether the Ricci bound is an equality for every unit direction.

    Authoritative criterion: sigma diagonal in the frame with every diagonal
    entry equal to half the trace, per normal direction. A consistency sweep
    over sampled directions is reported alongside.
    """
    from .util import unit_directions

    sig = p.sigma
    if sig.size == 0:
        coeff_ok = True
    else:
        off = sig.copy()
        idx = np.arange(p.n)
        off[:, idx, idx] = 0.0
        diag = np.diagonal(sig, axis1=1, axis2=2)
        traces = diag.sum(axis=1)
        # 2*sigma^r_ii = trace sigma^r for every i, and no off-diagonal entries
        coeff_ok = (
            np.max(np.abs(off)) < 1e-9
            and np.max(np.abs(2.0 * diag - traces[:, None])) < 1e-9
        )

    sampled_equal = True
    for x in unit_directions(p.n, samples):
        rep = ricci_suite(S, p, IC, x, cls)[0]
        if not rep.equality:
            sampled_equal = False
            break

    if not coeff_ok:
        diagnosis = "none"
    elif p.n == 2:
        diagnosis = "totally umbilical point"
    else:
        diagnosis = "totally geodesic point"
    return {
        "equality_all_directions": bool(coeff_ok),
        "sampled_directions_agree": bool(sampled_equal == coeff_ok),
        "diagnosis": diagnosis,
    }


def kricci_rhs(S, n, base, norm_P_sq):
    """RHS of the k-Ricci mean-curvature bound given its curvature base term
    (2*tau/(n(n-1)) or theta_k)."""
    c, f, fp = S.c, S.f, S.f_prime
    return (
        base
        - (c - 3.0 * f**2) / 4.0
        - 3.0 * norm_P_sq * (c + f**2) / (4.0 * n * (n - 1))
        + (2.0 / n) * ((c + f**2) / 4.0 + fp)
    )


def kricci_rhs_specialized(S, n, theta_val, cls):
    c, f, fp = S.c, S.f, S.f_prime
    tail = (2.0 / n) * ((c + f**2) / 4.0 + fp)
    head = theta_val - (c - 3.0 * f**2) / 4.0
    if cls.kind == "slant":
        return head - 3.0 * (c + f**2) * np.cos(cls.slant_angle) ** 2 / (4.0 * n) + tail
    if cls.kind == "invariant":
        return head - 3.0 * (c + f**2) / (4.0 * n) + tail
    if cls.kind == "anti-invariant":
        return head + tail
    if cls.kind == "cr":
        return head - 6.0 * cls.h * (c + f**2) / (4.0 * n * (n - 1)) + tail
    raise ConfigurationError(f"no specialized k-Ricci bound for kind {cls.kind!r}")


def kricci_suite(S, p, IC, k, theta_result, cls):
    """Mean-curvature lower bounds from scalar curvature and from theta_k."""
    n = p.n
    if not 2 <= k <= n:
        raise DomainError(f"k must be in [2, {n}]")
    _, h2 = mean_curvature(p)
    norm_P_sq = _check_cls_consistent(S, p, cls)

    base_tau = 2.0 * IC.tau / (n * (n - 1))
    notes = ("heuristic-outer",) if theta_result.heuristic_outer else ()
    reports = [
        _report("kricci", h2, kricci_rhs(S, n, base_tau, norm_P_sq), ">=", "none", cls.kind),
        _report(
            "kricci-prime",
            h2,
            kricci_rhs(S, n, theta_result.value, norm_P_sq),
            ">=",
            "none",
            cls.kind,
            notes,
        ),
    ]
    if cls.kind in ("slant", "invariant", "anti-invariant", "cr"):
        name = {
            "slant": "kricci-prime-slant",
            "invariant": "kricci-prime-inv",
            "anti-invariant": "kricci-prime-anti",
            "cr": "kricci-prime-cr",
        }[cls.kind]
        reports.append(
            _report(
                name,
                h2,
                kricci_rhs_specialized(S, n, theta_result.value, cls),
                ">=",
                "none",
                cls.kind,
                notes,
            )
        )
    return reports


def equality_diagnose(p, mode, x=None, tol=1e-8):
    """Structural equality-case tests on the second fundamental form.

    mode "geodesic": sigma = 0; mode "umbilic": sigma(X,Y) = <X,Y> H;
    mode "nullspace": sigma(x, .) = 0 plus the first-direction trace condition.
    """
    sig = p.sigma
    if mode == "geodesic":
        return bool(sig.size == 0 or np.max(np.abs(sig)) < tol)
    if mode == "umbilic":
        if sig.size == 0:
            return True
        traces = np.trace(sig, axis1=1, axis2=2) / p.n
        umb = np.eye(p.n)[None, :, :] * traces[:, None, None]
        return bool(np.max(np.abs(sig - umb)) < tol)
    if mode == "nullspace":
        if x is None:
            raise DomainError("nullspace mode needs a direction x")
        return _nullspace_membership(p, np.asarray(x, dtype=float), tol)
    raise DomainError(f"unknown diagnosis mode {mode!r}")


def nullspace_equality_conditions(p, tol=1e-9):
    """Conditions for equality of the Ricci bound at the first frame direction:
    zero first row of every shape operator off the diagonal, and the first
    diagonal entry equal to the sum of the remaining ones."""
    sig = p.sigma
    if sig.size == 0:
        return True
    row = np.max(np.abs(sig[:, 0, 1:]))
    diag = np.diagonal(sig, axis1=1, axis2=2)
    trace_cond = np.max(np.abs(diag[:, 0] - np.sum(diag[:, 1:], axis=1)))
    return bool(row < tol and trace_cond < tol)
