"""Acceptance battery: one test per release criterion, budgets pinned.

Each test prints a single summary line (visible with pytest -s) and
asserts both the numerical tolerances and the wall-clock budget.
Expected values come from exact oracles (lens areas and volumes,
closed-form curvature), never from the code under test.
"""

import math
import pathlib
import time

import numpy as np
import pytest

from kdense.analysis import (halfvolume_condition_check, kdense_spread,
                             kp1_check, krantz_parks_check, petty_check,
                             touch_point)
from kdense.asymptotics import (large_r_coefficient_closed,
                                large_r_coefficient_numeric,
                                large_r_limit_closed,
                                symmetric_closed_constant)
from kdense.bodies import (Ball, Ellipsoid, FourierBody2D, ReuleauxTriangle2D,
                           Superellipse2D, boundary_points, difference_body,
                           normal_at, sphere_directions)
from kdense.cli import main
from kdense.errors import FlatContact, NonUniqueContact
from kdense.measure import gauge
from kdense.oracles import ball_lens_volume, disk_lens_area

SHIPPED_CONFIG = str(pathlib.Path(__file__).resolve().parent.parent /
                     "configs" / "verify.cfg")


def _report(line):
    print(f"\n[acceptance] {line}")


class TestDeficitDecay2D:
    def test_disk_exponent_and_coefficient(self):
        """Unit disk inside a radius-2 ball: deficit ~ C eps^{3/2}.

        The exact lens-area ladder pins the decay rate at 3/2 and the
        coefficient at the half-Hessian limit 16*sqrt(2)/3; the displayed
        classical-Hessian constant evaluates to exactly 16/3.
        """
        t0 = time.perf_counter()
        G, K = Ball(1.0), Ball(2.0)
        x = np.array([1.0, 0.0])
        oracle = lambda eps: math.pi - disk_lens_area(1.0, 2.0 * (1.0 - eps), 1.0)
        fit = large_r_coefficient_numeric(G, K, x, eps0=0.005, rungs=10,
                                          oracle=oracle)
        closed = large_r_coefficient_closed(G, K, x)
        limit = large_r_limit_closed(G, K, x)
        elapsed = time.perf_counter() - t0
        _report(f"2D decay: exponent={fit.exponent:.4f} (want 1.5 +/- 0.05), "
                f"coeff={fit.coefficient:.6f} vs limit {limit:.6f}, "
                f"closed={closed:.12f} vs 16/3, {elapsed:.2f}s < 1s")
        assert abs(fit.exponent - 1.5) < 0.05
        assert abs(limit - 16.0 * math.sqrt(2.0) / 3.0) < 1e-10
        assert abs(fit.coefficient - limit) < 0.02 * limit
        assert abs(closed - 16.0 / 3.0) < 1e-10
        assert elapsed < 1.0


class TestDeficitDecay3D:
    def test_ball_exponent_and_coefficient(self):
        """Unit ball inside a radius-2 ball: deficit ~ C eps^2.

        The exact lens-volume ladder pins the rate at 2 and the
        coefficient at the half-Hessian limit 8*pi; the displayed
        classical-Hessian constant evaluates to exactly 4*pi, and the
        symmetrized variant differs from it by exactly sqrt(2).
        """
        t0 = time.perf_counter()
        G, K = Ball(1.0, dim=3), Ball(2.0, dim=3)
        x = np.array([1.0, 0.0, 0.0])
        oracle = lambda eps: (4.0 * math.pi / 3.0 -
                              ball_lens_volume(1.0, 2.0 * (1.0 - eps), 1.0))
        fit = large_r_coefficient_numeric(G, K, x, eps0=0.005, rungs=10,
                                          oracle=oracle)
        closed = large_r_coefficient_closed(G, K, x)
        limit = large_r_limit_closed(G, K, x)
        ratio = symmetric_closed_constant(G, K, x) / closed
        elapsed = time.perf_counter() - t0
        _report(f"3D decay: exponent={fit.exponent:.4f} (want 2.0 +/- 0.05), "
                f"coeff={fit.coefficient:.6f} vs limit {limit:.6f}, "
                f"closed={closed:.12f} vs 4*pi, "
                f"symmetric/closed={ratio:.6f} != 1, {elapsed:.2f}s < 5s")
        assert abs(fit.exponent - 2.0) < 0.05
        assert abs(limit - 8.0 * math.pi) < 1e-10
        assert abs(fit.coefficient - limit) < 0.02 * limit
        assert abs(closed - 4.0 * math.pi) < 1e-10
        # the two closed-form variants disagree in 3D by exactly sqrt(2)
        assert abs(ratio - math.sqrt(2.0)) < 1e-10
        assert abs(ratio - 1.0) > 0.1
        assert elapsed < 5.0


class TestFlatContactRegime:
    def test_superellipse_axis_flat_contact(self):
        """Fourth-power flat contact: the deficit decays like eps^{1+1/4},

        slower than the strongly convex eps^{3/2}, so the fit must raise
        FlatContact with exponent 1.25 instead of returning a coefficient.
        """
        t0 = time.perf_counter()
        G = Superellipse2D(4.0)
        K = difference_body(G)
        x = np.array([1.0, 0.0])
        with pytest.raises(FlatContact) as exc:
            large_r_coefficient_numeric(G, K, x, eps0=0.1, rungs=6,
                                        n=2 ** 17, replicates=8, seed=0)
        exponent = exc.value.fit.exponent
        elapsed = time.perf_counter() - t0
        _report(f"flat contact: exponent={exponent:.4f} "
                f"(want 1.25 +/- 0.05), {elapsed:.1f}s < 30s")
        assert abs(exponent - 1.25) < 0.05
        assert elapsed < 30.0


class TestShapeOperatorIdentities:
    def test_random_ellipsoid_pairs(self):
        """Minkowski-sum and difference-body shape operator identities.

        100 random ellipsoid pairs x 100 directions in each of 2D and 3D;
        both residuals must stay at solver precision.
        """
        t0 = time.perf_counter()
        worst = 0.0
        for dim in (2, 3):
            rng = np.random.default_rng(42 + dim)
            U = sphere_directions(dim, 100)
            for _ in range(100):
                M = rng.normal(size=(dim, dim))
                A = Ellipsoid(M @ M.T + 0.3 * np.eye(dim))
                M = rng.normal(size=(dim, dim))
                B = Ellipsoid(M @ M.T + 0.3 * np.eye(dim))
                K = difference_body(A)
                for u in U:
                    worst = max(worst, krantz_parks_check(A, B, u))
                    worst = max(worst, kp1_check(A, u, K=K))
        elapsed = time.perf_counter() - t0
        _report(f"shape operator identities: max residual={worst:.3e} "
                f"< 1e-8, {elapsed:.2f}s < 5s")
        assert worst < 1e-8
        assert elapsed < 5.0


class TestCurvatureSupportRatio:
    def test_ellipse_constant_superellipse_not(self):
        """kappa / h^3 is constant exactly on ellipses.

        For semiaxes (2, 1) the constant is 1/(a b)^2 = 1/4; the
        superellipse must scatter by more than 10%.
        """
        t0 = time.perf_counter()
        rep = petty_check(Ellipsoid.from_semiaxes(2.0, 1.0), m=256)
        rep_s = petty_check(Superellipse2D(4.0), m=256)
        elapsed = time.perf_counter() - t0
        _report(f"curvature-support ratio: ellipse mean={rep.mean:.8f} "
                f"(want 1/4), spread={rep.relative_spread:.2e} < 1e-6; "
                f"superellipse spread={rep_s.relative_spread:.3f} > 0.10; "
                f"{elapsed:.2f}s < 1s")
        assert rep.relative_spread < 1e-6
        assert abs(rep.mean - 0.25) < 1e-9
        assert rep_s.relative_spread > 0.10
        assert elapsed < 1.0


class TestOverlapConstancyDichotomy:
    def test_ellipse_constant_superellipse_not(self):
        """Overlap volume along the boundary: constant for the ellipse

        with its difference body at r in {0.1, 0.5, 0.9}, visibly not
        constant for the superellipse at r = 0.5.
        """
        t0 = time.perf_counter()
        G = Ellipsoid.from_semiaxes(2.0, 1.0)
        K = difference_body(G)
        details = []
        for r in (0.1, 0.5, 0.9):
            rep = kdense_spread(G, K, r, m=64, n=2 ** 17, replicates=8, seed=0)
            details.append(f"r={r}: spread={rep.relative_spread:.2e} "
                           f"budget={rep.error_budget:.2e} "
                           f"{'constant' if rep.constant else 'NOT'}")
            assert rep.constant, details[-1]
        Gs = Superellipse2D(4.0)
        rep_s = kdense_spread(Gs, difference_body(Gs), 0.5, m=64,
                              n=2 ** 17, replicates=8, seed=0)
        elapsed = time.perf_counter() - t0
        _report("overlap constancy: ellipse " + "; ".join(details) +
                f"; superellipse spread={rep_s.relative_spread:.3f} > 1e-2; "
                f"{elapsed:.0f}s < 600s")
        assert not rep_s.constant
        assert rep_s.relative_spread > 1e-2
        assert elapsed < 600.0


class TestHalfVolumeCuts:
    def test_symmetric_pass_offcenter_fail(self):
        """Every centrally symmetric probe body cuts to 1/2 through its

        center for all boundary normals; an off-center ball misses by
        far more than 1%.
        """
        t0 = time.perf_counter()
        symmetric = [
            ("ball", Ball(1.0), Ball(1.0)),
            ("ellipse", Ball(1.0), Ellipsoid.from_semiaxes(2.0, 1.0)),
            ("superellipse", Ball(1.0), Superellipse2D(4.0)),
            ("ellipsoid3", Ball(1.0, dim=3),
             Ellipsoid.from_semiaxes(1.5, 1.0, 0.8)),
        ]
        details = []
        for name, G, K in symmetric:
            rep = halfvolume_condition_check(G, K, m=16, n=2 ** 15,
                                             replicates=4, seed=0)
            dev = max(abs(rep.max - 0.5), abs(rep.min - 0.5))
            details.append(f"{name}: dev={dev:.1e} budget={rep.error_budget:.1e}")
            assert rep.constant, details[-1]
            assert dev <= rep.error_budget, details[-1]
        rep = halfvolume_condition_check(Ball(1.0), Ball(1.0, center=[0.3, 0.0]),
                                         m=16, n=2 ** 15, replicates=4, seed=0)
        dev = max(abs(rep.max - 0.5), abs(rep.min - 0.5))
        elapsed = time.perf_counter() - t0
        _report("half-volume cuts: " + "; ".join(details) +
                f"; off-center dev={dev:.3f} > 0.01; {elapsed:.1f}s < 60s")
        assert dev > 0.01
        assert elapsed < 60.0


class TestTouchPoints:
    def test_postconditions_and_corner_failure(self):
        """The inscribed difference-body copy touches each strictly convex

        body at one boundary point with opposite normal; the Reuleaux
        vertex produces a contact arc and must raise.
        """
        t0 = time.perf_counter()
        zoo = [
            ("disk", Ball(1.0)),
            ("off-center disk", Ball(1.0, center=[0.3, 0.0])),
            ("ellipse", Ellipsoid.from_semiaxes(2.0, 1.0)),
            ("superellipse", Superellipse2D(4.0)),
            ("fourier", FourierBody2D([1.0, 0.0, 0.0, 0.1])),
            ("ellipsoid3", Ellipsoid.from_semiaxes(1.5, 1.0, 0.8)),
        ]
        worst_gauge, worst_align = 0.0, 0.0
        for name, G in zoo:
            K = difference_body(G)
            U = sphere_directions(G.dim, 64)
            # a coarser contact screen suffices in 3D and keeps the
            # sweep fast; the returned point uses the exact normal
            samples = 1024 if G.dim == 3 else None
            for x in boundary_points(G, U):
                xbar, u = touch_point(G, K, x, samples=samples)
                worst_gauge = max(worst_gauge, abs(gauge(G, xbar) - 1.0))
                worst_align = max(worst_align,
                                  abs(float(u @ normal_at(G, x)) + 1.0))
        wheel = ReuleauxTriangle2D(1.0)
        with pytest.raises(NonUniqueContact):
            touch_point(wheel, difference_body(wheel), wheel.vertices[0])
        elapsed = time.perf_counter() - t0
        _report(f"touch points: 64 points x {len(zoo)} bodies, "
                f"max |gauge-1|={worst_gauge:.1e} < 1e-6, "
                f"max |u.nu + 1|={worst_align:.1e}; Reuleaux vertex raises; "
                f"{elapsed:.1f}s < 10s")
        assert worst_gauge < 1e-6
        assert worst_align < 1e-6
        assert elapsed < 10.0


class TestDeterminism:
    def test_shipped_config_byte_identical(self, tmp_path):
        """Two runs of the shipped configuration produce byte-identical CSVs."""
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["verify", SHIPPED_CONFIG, "--out", str(a)]) == 0
        assert main(["verify", SHIPPED_CONFIG, "--out", str(b)]) == 0
        fa = sorted(p.name for p in a.iterdir())
        fb = sorted(p.name for p in b.iterdir())
        assert fa == fb and fa
        same = all((a / n).read_bytes() == (b / n).read_bytes() for n in fa)
        _report(f"determinism: {len(fa)} output files byte-identical: {same}")
        assert same
