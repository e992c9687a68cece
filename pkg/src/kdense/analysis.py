"""Verification battery for the K-density characterization.

Checks, on concrete bodies, each identity the characterization rests on:
constancy of the overlap volume along the boundary, uniqueness of the
touch point, the Minkowski-sum shape-operator identity and its difference
body specialization, antipodal curvature symmetry, the difference body
being twice the body, the half-volume cut condition, and the
curvature-support power identity that pins down ellipsoids.
"""

import numpy as np

from . import measure
from .bodies import (boundary_points, curvature, difference_body, normal_at,
                     sphere_directions, tangent_frame)
from .errors import NonUniqueContact, SingularCurvature


class SpreadReport:
    """Min/max/mean statistics of a sampled quantity with an error budget."""

    def __init__(self, name, values, error_budget, extra=None):
        values = np.asarray(values, dtype=float)
        self.name = name
        self.sample_count = len(values)
        self.min = float(np.min(values))
        self.max = float(np.max(values))
        self.mean = float(np.mean(values))
        self.relative_spread = (self.max - self.min) / self.mean if self.mean else np.inf
        self.error_budget = float(error_budget)
        self.values = values
        self.extra = extra or {}

    @property
    def constant(self):
        """True when the spread is within the error budget."""
        return self.relative_spread <= self.error_budget

    def __repr__(self):
        verdict = "constant" if self.constant else "not constant"
        return (f"SpreadReport({self.name}: mean={self.mean:.6g}, "
                f"spread={self.relative_spread:.3g}, "
                f"budget={self.error_budget:.3g} -> {verdict})")


# ---------------------------------------------------------------------------

def touch_point(G, K, x, contact_tol=1e-6, samples=None):
    """The unique point where the boundary of x + K meets G, with its normal.

    For strictly convex differentiable G and K the inscribed copy x + K
    touches G at exactly one boundary point xbar, characterized by the
    outward normal at xbar being the opposite of the one at x.  Raises
    NonUniqueContact when the contact set spreads over an arc (corner or
    flat contact), carrying the offending boundary samples.
    """
    x = np.asarray(x, dtype=float)
    if samples is None:
        samples = 512 if G.dim == 2 else 4096
    U = sphere_directions(G.dim, samples)
    P = boundary_points(G, U)
    g = K.gauge_many(P - x, refine="all")
    top = float(np.max(g))
    hits = np.flatnonzero(g > top - contact_tol)
    dirs = U[hits]
    # angular diameter of the contact directions
    dots = np.clip(dirs @ dirs.T, -1.0, 1.0)
    diam = float(np.max(np.arccos(dots)))
    spacing = 2.0 * np.pi / samples if G.dim == 2 else 2.0 * np.sqrt(4.0 * np.pi / samples)
    if diam > 8.0 * spacing:
        raise NonUniqueContact(
            f"contact set spans an angular diameter of {diam:.3f} rad",
            contact_points=P[hits])
    nu = normal_at(G, x)
    u = -nu
    xbar = boundary_points(G, u[None, :])[0]
    gk = measure.gauge(K, xbar - x)
    if abs(gk - 1.0) > contact_tol:
        raise NonUniqueContact(
            f"touch point fails the inscribed-copy condition "
            f"(gauge_K(xbar - x) = {gk:.8f})", contact_points=P[hits])
    return xbar, u


def kdense_spread(G, K, r, m=64, n=measure.DEFAULT_QMC_POINTS,
                  replicates=measure.DEFAULT_REPLICATES, seed=0):
    """Spread of V(G ^ (x + rK)) over m boundary points of G.

    The spread is a difference of two estimates, so its standard error
    is up to sqrt(2) times the worst single error bar; the budget is
    three times that, relative to the mean, so the verdict compares
    geometry against integration noise.
    """
    if m < 8:
        raise ValueError("need at least 8 boundary samples")
    U = sphere_directions(G.dim, m)
    X = boundary_points(G, U)
    vols, errs = [], []
    for x in X:
        res = measure.intersection_volume(G, K, x, r, n=n,
                                          replicates=replicates, seed=seed)
        vols.append(res.value)
        errs.append(res.stderr)
    budget = 3.0 * np.sqrt(2.0) * max(errs) / np.mean(vols)
    return SpreadReport(f"overlap volume at r={r}", vols, budget,
                        extra={"stderr": errs, "r": r, "points": X})


def petty_check(G, m=256):
    """Spread of kappa(u) / h(u)^(N+1) over the sphere.

    Constant ratio is the ellipsoid signature; directions with degenerate
    curvature are excluded from the statistics and counted in the report.
    """
    N = G.dim
    U = sphere_directions(N, m)
    ratios = []
    singular = 0
    for u in U:
        try:
            kappa = curvature(G, u).kappa
        except SingularCurvature:
            singular += 1
            continue
        ratios.append(kappa / G.support(u) ** (N + 1))
    rep = SpreadReport("kappa / h^(N+1)", ratios, 1e-6,
                       extra={"singular_directions": singular,
                              "constant": float(np.mean(ratios))})
    return rep


def krantz_parks_check(A, B, u):
    """Residual of the Minkowski-sum shape operator identity at u.

    Compares S_{A+B} with [I + S_A^{-1} S_B]^{-1} S_B in the shared frame
    of u; algebraically this is additivity of the reverse Weingarten maps.
    """
    from .bodies import MinkowskiSum
    F = tangent_frame(np.asarray(u, dtype=float))
    S_A = curvature(A, u, frame=F).S
    S_B = curvature(B, u, frame=F).S
    S_AB = curvature(MinkowskiSum(A, B), u, frame=F).S
    rhs = _harmonic_compose(S_A, S_B)
    return float(np.linalg.norm(S_AB - rhs))


def _harmonic_compose(S_A, S_B):
    """S_B (I + S_A^{-1} S_B)^{-1}, the harmonic sum (S_A^{-1}+S_B^{-1})^{-1}.

    The resolvent factor must multiply on the right: the left-multiplied
    reading (I + S_A^{-1} S_B)^{-1} S_B only agrees when the shape
    operators commute, which fails for generic 3D pairs.
    """
    eye = np.eye(len(S_A))
    M = eye + np.linalg.solve(S_A, S_B)
    return np.linalg.solve(M.T, S_B.T).T


def kp1_check(G, u, K=None):
    """Residual of the difference-body shape operator identity at u.

    With K = G + (-G), checks S_K(u) against
    [I + S_G(u)^{-1} S_G(-u)]^{-1} S_G(-u) in a shared frame, and that
    S_G(u) - S_K(u) is positive definite.
    """
    u = np.asarray(u, dtype=float)
    if K is None:
        K = difference_body(G)
    F = tangent_frame(u)
    S_K = curvature(K, u, frame=F).S
    S_Gu = curvature(G, u, frame=F).S
    S_Gmu = curvature(G, -u, frame=F).S
    rhs = _harmonic_compose(S_Gu, S_Gmu)
    diff = 0.5 * ((S_Gu - S_K) + (S_Gu - S_K).T)
    if not _is_positive_definite(diff):
        raise ValueError("S_G(u) - S_K(u) is not positive definite")
    return float(np.linalg.norm(S_K - rhs))


def _is_positive_definite(M):
    if M.shape[0] == 1:
        return M[0, 0] > 0
    if M.shape[0] == 2:
        return M[0, 0] > 0 and M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0] > 0
    return np.min(np.linalg.eigvalsh(M)) > 0


def curvature_symmetry_check(G, m=64):
    """max |kappa(u) - kappa(-u)| over m antipodal direction pairs.

    Degenerate pairs are skipped; their count is returned alongside.
    """
    U = sphere_directions(G.dim, m)
    worst = 0.0
    skipped = 0
    for u in U:
        try:
            k1 = curvature(G, u).kappa
            k2 = curvature(G, -u).kappa
        except SingularCurvature:
            skipped += 1
            continue
        worst = max(worst, abs(k1 - k2))
    return worst, skipped


def symmetry_center(G, m=64):
    """Estimate of the center of symmetry: midpoints of antipodal supports."""
    U = sphere_directions(G.dim, m)
    P = boundary_points(G, U)
    Q = boundary_points(G, -U)
    return np.mean(0.5 * (P + Q), axis=0)


def k_equals_2g_check(G, m=256, budget=1e-8):
    """Spread of h_{G-G}(u) / (2 h_{G-c}(u)) over the sphere.

    c is the symmetry-center estimate of G; the ratio is identically 1
    exactly when the difference body is twice the (centered) body.
    """
    K = difference_body(G)
    c = symmetry_center(G, m)
    U = sphere_directions(G.dim, m)
    hK = K.support_hom(U)
    hG_centered = G.support_hom(U) - U @ c
    ratios = hK / (2.0 * hG_centered)
    return SpreadReport("h_{G-G} / 2 h_{G-c}", ratios, budget,
                        extra={"center": c})


def halfvolume_condition_check(G, K, m=16, n=measure.DEFAULT_QMC_POINTS,
                               replicates=measure.DEFAULT_REPLICATES, seed=0):
    """Spread of V({y in K : y . nu >= 0}) / V(K) over boundary normals of G.

    The half-volume cut condition demands the ratio be 1/2 for every
    boundary normal; the error budget comes from the qmc error bars.
    """
    U = sphere_directions(G.dim, m)
    vk = measure.volume_qmc(K, n=n, replicates=replicates, seed=seed)
    vals, errs = [], []
    for u in U:
        res = measure.halfspace_cut_volume(K, u, n=n, replicates=replicates,
                                           seed=seed)
        vals.append(res.value / vk.value)
        errs.append(res.stderr / vk.value)
    budget = 3.0 * (np.sqrt(2.0) * max(errs) + vk.stderr / vk.value)
    return SpreadReport("half-space cut fraction", vals, budget,
                        extra={"stderr": errs, "volume": vk})
