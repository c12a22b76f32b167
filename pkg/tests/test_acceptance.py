"""Acceptance criteria, one test each.

Every test prints a single ``criterion NN PASS|FAIL`` line with the worst
measured deviation.  Run as a script to get the same report without pytest.
"""
import math
import sys
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest
from scipy import integrate

sys.path.insert(0, str(Path(__file__).parent))

from shearbounds.cell import (  # noqa: E402
    CellField,
    Material,
    NestedCircles,
    NestedSquares,
    Raster,
    cell_averages,
    evaluate,
    invert_field,
    uniform_field,
)
from shearbounds.fourier import cross_section_profile  # noqa: E402
from shearbounds.monodromy import (  # noqa: E402
    auto_precision,
    build_Q,
    mm_bound,
    mm_lower_mu,
    mm_upper_mu,
    monodromy_peano,
    monodromy_piecewise_exp,
    monodromy_product,
    transfer_residuals,
)
from shearbounds.oracles import Profile1D, direct_bnn, laminate_speed_sq  # noqa: E402
from shearbounds.pwe import pwe_lower_mu, pwe_upper_mu  # noqa: E402
from shearbounds.sweep import bounds_to_speed  # noqa: E402

from conftest import (  # noqa: E402
    EPOXY,
    SILICON,
    STEEL,
    cross_field,
    laminate_field,
    square_field,
    steel_epoxy_circles,
    steel_epoxy_squares,
    three_phase_squares,
    unit,
)

F_GRID = (0.1, 0.25, 0.5, 0.7)


def _raster_cross():
    grid = np.zeros((8, 8), dtype=int)
    grid[2:6, :] = 1
    grid[:, 2:6] = 1
    grid[3:5, 3:5] = 2
    return CellField(Raster(grid), (STEEL, EPOXY, SILICON))


def cubic_fields():
    return {
        "squares": steel_epoxy_squares(0.5),
        "squares-rev": steel_epoxy_squares(0.5, steel_matrix=False),
        "squares-3": three_phase_squares(0.5),
        "circles": steel_epoxy_circles(0.5),
        "circles-3": CellField(NestedCircles((0.45, 0.25)), (STEEL, EPOXY, SILICON)),
        "cross": cross_field(),
        "raster": _raster_cross(),
    }


def lattice(kind, f):
    if kind == "steel-matrix":
        return steel_epoxy_squares(f)
    if kind == "epoxy-matrix":
        return steel_epoxy_squares(f, steel_matrix=False)
    return three_phase_squares(f)


LATTICES = ("steel-matrix", "epoxy-matrix", "three-phase")


@lru_cache(maxsize=None)
def chain(kind, f, N):
    """(pwe lower, mm lower, mm upper, pwe upper, mu_hat(0))."""
    field = lattice(kind, f)
    return (
        pwe_lower_mu(field, N),
        mm_lower_mu(field, N),
        mm_upper_mu(field, N),
        pwe_upper_mu(field, N),
        cell_averages(field)["mu_avg"],
    )


def rel(a, b):
    return abs(a - b) / abs(b)


# --- criteria -------------------------------------------------------------


def criterion_01():
    c, r = 3.7e9, 2100.0
    f = uniform_field(Material(c, r))
    worst = 0.0
    for N in range(7):
        mus = [pwe_lower_mu(f, N), pwe_upper_mu(f, N), mm_lower_mu(f, N), mm_upper_mu(f, N)]
        worst = max(worst, *(rel(m, c) for m in mus))
        speeds = [bounds_to_speed(m, cell_averages(f)["rho_avg"]) for m in mus]
        worst = max(worst, *(rel(s, math.sqrt(c / r)) for s in speeds))
    return worst <= 1e-12, f"max rel dev {worst:.2e} (tol 1e-12), N=0..6"


def criterion_02():
    worst = 0.0
    for field in cubic_fields().values():
        avg = cell_averages(field)
        worst = max(worst, rel(pwe_upper_mu(field, 0), avg["mu_avg"]))
        worst = max(worst, rel(pwe_lower_mu(field, 0), 1.0 / avg["mu_inv_avg"]))
    return worst <= 1e-12, f"max rel dev {worst:.2e} (tol 1e-12) on {len(cubic_fields())} cubic fields"


def _line_average(field, x1, inverse):
    # <mu>_2 (or <1/mu>_2) along x1 = const by quadrature of pointwise values
    edges, _ = field.mu_section(x1)
    pts = [e for e in edges[1:-1]]
    if inverse:
        g = lambda t: 1.0 / evaluate(field, (x1, t))[0]  # noqa: E731
    else:
        g = lambda t: evaluate(field, (x1, t))[0]  # noqa: E731
    return integrate.quad(g, 0.0, 1.0, points=pts or None, epsabs=0.0, epsrel=2e-14, limit=200)[0]


def nested_average_reference(field):
    """(<<mu>_2^-1>_1^-1, <<mu^-1>_2^-1>_1) by nested quadrature."""
    pts = sorted(set(field.geometry.x1_edges()) | {0.5})
    if isinstance(field.geometry, NestedCircles):
        pts = sorted(set(pts) | {0.5 - r for r in field.geometry.radii} | {0.5 + r for r in field.geometry.radii})
    pts = [p for p in pts if 0.0 < p < 1.0]
    kw = dict(points=pts, epsabs=0.0, epsrel=1e-13, limit=500)
    up = 1.0 / integrate.quad(lambda s: 1.0 / _line_average(field, s, False), 0.0, 1.0, **kw)[0]
    low = integrate.quad(lambda s: 1.0 / _line_average(field, s, True), 0.0, 1.0, **kw)[0]
    return up, low


def criterion_03():
    worst = 0.0
    names = []
    for name, field in cubic_fields().items():
        if name == "raster":
            continue
        up_ref, low_ref = nested_average_reference(field)
        opts = dict(refine_tol=1e-10, max_profile_steps=1 << 16)
        up = mm_bound(field, 0, **opts).value
        low = 1.0 / mm_bound(invert_field(field), 0, **opts).value
        worst = max(worst, rel(up, up_ref), rel(low, low_ref))
        names.append(name)
    return worst <= 1e-10, f"max rel dev {worst:.2e} (tol 1e-10) on {', '.join(names)}"


def criterion_04():
    worst = -math.inf
    count = 0
    for kind in LATTICES:
        for f in F_GRID:
            for N in range(6):
                a, b, c, d, mean = chain(kind, f, N)
                eps = 1e-8 * mean
                worst = max(worst, (a - b) / eps, (b - c) / eps, (c - d) / eps)
                count += 1
    ok = worst <= 1.0
    return ok, f"{count} chains, worst violation {worst:.2e} x eps (must be <= 1)"


def criterion_05():
    worst = -math.inf
    for kind in LATTICES:
        for f in F_GRID:
            rows = [chain(kind, f, N) for N in range(7)]
            eps = 1e-8 * rows[0][4]
            for r0, r1 in zip(rows, rows[1:]):
                worst = max(worst, (r1[3] - r0[3]) / eps, (r1[2] - r0[2]) / eps)
                worst = max(worst, (r0[0] - r1[0]) / eps, (r0[1] - r1[1]) / eps)
    cross = cross_field()
    rows = [(pwe_lower_mu(cross, N), mm_lower_mu(cross, N), mm_upper_mu(cross, N), pwe_upper_mu(cross, N)) for N in range(7)]
    eps = 1e-8 * cell_averages(cross)["mu_avg"]
    for r0, r1 in zip(rows, rows[1:]):
        worst = max(worst, (r1[3] - r0[3]) / eps, (r1[2] - r0[2]) / eps, (r0[0] - r1[0]) / eps, (r0[1] - r1[1]) / eps)
    return worst <= 1.0, f"worst step violation {worst:.2e} x eps (must be <= 1), N=0..6"


def criterion_06():
    field = cross_field()
    exact = 2.0
    reached = None
    dominated = True
    worst_mm = 0.0
    for N in range(9):
        mm_up, mm_low = mm_upper_mu(field, N), mm_lower_mu(field, N)
        pw_up, pw_low = pwe_upper_mu(field, N), pwe_lower_mu(field, N)
        err = abs(mm_up - exact) / exact
        worst_mm = max(worst_mm, err)
        if reached is None and err <= 1e-3:
            reached = N
        if abs(mm_up - exact) > abs(pw_up - exact) + 1e-15 or abs(mm_low - exact) > abs(pw_low - exact) + 1e-15:
            dominated = False
    ok = reached is not None and dominated
    return ok, f"|mu_N-2|/2 <= 1e-3 from N={reached}; max MM err {worst_mm:.1e}; MM err <= PWE err: {dominated}"


def criterion_07():
    lam = laminate_field()
    worst = max(rel(mm_upper_mu(lam, N, oracle_mode=True), 1.6) for N in range(5))
    p = Profile1D((0.5,), (1.0, 4.0))
    s = 1.0 / math.sqrt(2.0)
    vals = (
        laminate_speed_sq(p, 1.0, (1.0, 0.0)),
        laminate_speed_sq(p, 1.0, (0.0, 1.0)),
        laminate_speed_sq(p, 1.0, (s, s)),
    )
    speed_dev = max(rel(v, t) for v, t in zip(vals, (1.6, 2.5, 2.05)))
    ok = worst <= 1e-10 and speed_dev <= 4e-16
    return ok, f"MM laminate max rel dev {worst:.1e} (tol 1e-10); speeds {vals} dev {speed_dev:.1e}"


def criterion_08():
    fields = {"squares": steel_epoxy_squares(0.5), "circles": steel_epoxy_circles(0.5)}
    failures = []
    worst = {}
    for name, field in fields.items():
        lo, hi = field.mu_bounds()
        for N in range(6):
            H = build_Q(cross_section_profile(field, N).scaled(1.0 / math.sqrt(lo * hi)))
            bits = auto_precision(H, (0.0, 1.0), False)
            for backend in ("piecewise_exp", "product", "peano"):
                if backend == "piecewise_exp":
                    tm = monodromy_piecewise_exp(H, (0.0, 1.0), bits)
                elif backend == "product":
                    tm = monodromy_product(H, (0.0, 1.0), 4096, bits)
                else:
                    tm = monodromy_peano(H, (0.0, 1.0), 8, bits)
                r = transfer_residuals(tm)
                w = worst.setdefault(backend, dict.fromkeys(r, 0.0))
                for k, v in r.items():
                    w[k] = max(w[k], v)
                bad = [
                    k
                    for k, tol in (("det_error", 1e-8), ("w1_error", 1e-9), ("w2_error", 1e-9), ("symplectic_error", 1e-8))
                    if not r[k] <= tol
                ]
                if bad:
                    failures.append(f"{backend}/{name}/N={N}:{'+'.join(bad)}")
    summary = "; ".join(
        f"{b}: det {w['det_error']:.1e} w {max(w['w1_error'], w['w2_error']):.1e} symp {w['symplectic_error']:.1e}"
        for b, w in worst.items()
    )
    detail = summary if not failures else f"{summary}; {len(failures)} failing cases, e.g. {failures[0]}"
    return not failures, detail


def criterion_09():
    worst = 0.0
    fields = {k: v for k, v in cubic_fields().items() if v.symmetry.even_x1 and k != "raster"}
    for name, field in fields.items():
        for N in range(6):
            opts = dict(refine_tol=None)
            half = mm_bound(field, N, half_period=True, **opts).value
            full = mm_bound(field, N, half_period=False, **opts).value
            worst = max(worst, rel(half, full))
    return worst <= 1e-8, f"max rel dev {worst:.2e} (tol 1e-8) on {', '.join(fields)}, N=0..5"


def criterion_10():
    field = CellField(NestedSquares((0.5,)), (unit(1.0), unit(4.0)))
    ratios = []
    peano_dev = 0.0
    for N in (1, 2):
        H = build_Q(cross_section_profile(field, N))
        ref = monodromy_piecewise_exp(H).matrix
        scale = np.max(np.abs(ref))
        errs = [np.max(np.abs(monodromy_product(H, (0.0, 1.0), 4096 << j).matrix - ref)) / scale for j in range(4)]
        ratios += [float(a / b) for a, b in zip(errs, errs[1:])]
        for order in (6, 8):
            M = monodromy_peano(H, (0.0, 1.0), order).matrix
            peano_dev = max(peano_dev, np.max(np.abs(M - ref)) / scale)
            peano_dev = max(peano_dev, rel(mm_upper_mu(field, N, "peano", peano_order=order), mm_upper_mu(field, N)))
    ok = all(1.7 <= r <= 2.3 for r in ratios) and peano_dev <= 1e-6
    return ok, f"product error ratios {[round(r, 3) for r in ratios]}; peano max rel dev {peano_dev:.1e}"


def criterion_11():
    worst = 0.0
    for field in (square_field(), steel_epoxy_squares(0.25), three_phase_squares(0.5), cross_field()):
        for N in range(4):
            worst = max(worst, rel(direct_bnn(field, N, [1e-2, 5e-3]), pwe_upper_mu(field, N)))
    return worst <= 1e-4, f"max rel dev {worst:.2e} (tol 1e-4), N=0..3"


def criterion_12():
    worst = 0.0
    for field in cubic_fields().values():
        inv = invert_field(field)
        for N in range(4):
            worst = max(worst, abs(pwe_lower_mu(field, N) * pwe_upper_mu(inv, N) - 1.0))
            worst = max(worst, abs(mm_lower_mu(field, N, refine_tol=None) * mm_upper_mu(inv, N, refine_tol=None) - 1.0))
    return worst <= 1e-14, f"max |product - 1| {worst:.1e} (tol 1e-14)"


CRITERIA = {
    1: ("constant-field identity", criterion_01),
    2: ("Voigt-Reuss at N=0", criterion_02),
    3: ("nested averages at N=0", criterion_03),
    4: ("ordering chain", criterion_04),
    5: ("monotone convergence", criterion_05),
    6: ("separable oracle convergence", criterion_06),
    7: ("laminate exactness", criterion_07),
    8: ("transfer-matrix invariants", criterion_08),
    9: ("half vs full period", criterion_09),
    10: ("integrator consistency", criterion_10),
    11: ("eigenvalue oracle", criterion_11),
    12: ("reciprocal construction", criterion_12),
}


def report(number):
    title, fn = CRITERIA[number]
    ok, detail = fn()
    line = f"criterion {number:02d} {'PASS' if ok else 'FAIL'} {title}: {detail}"
    return ok, line


# The first-order product rule cannot hold det M = 1 to 1e-8 at any practical
# step count; the criterion is kept at full strength and expected to fail.
KNOWN_FAILURES = {8: "product backend is not determinant-preserving"}


def _param(n):
    marks = [pytest.mark.xfail(reason=KNOWN_FAILURES[n], strict=True)] if n in KNOWN_FAILURES else []
    return pytest.param(n, id=f"c{n:02d}", marks=marks)


@pytest.mark.parametrize("number", [_param(n) for n in sorted(CRITERIA)])
def test_criterion(number, capsys):
    ok, line = report(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        ok, line = report(n)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
