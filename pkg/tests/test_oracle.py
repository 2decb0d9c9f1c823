import math

import numpy as np
import pytest

from oracle_values import DISK_EPS1_LAMBDA1
from thinspec.geometry import DomainSpec
from thinspec.oracle import (
    MIN_EPS,
    OracleParams,
    OracleRefusal,
    assemble,
    build_grid,
    compare,
    default_ny,
    eigenpairs,
    fd_eigensolve,
    oracle_eigenvalues,
    solve_many,
    thread_cap,
)
from thinspec.asymptotics import Expansion
from thinspec.registry import EXAMPLES

PI = math.pi
RECT = DomainSpec.from_strings("1", "0")


def _rect_levels(height, count):
    vals = sorted(PI**2 * (p * p + (q / height) ** 2) for p in range(1, 8) for q in range(1, 8))
    return vals[:count]


def test_rectangle_mask():
    g = build_grid(RECT, 0.5, 32, 16)
    # interior rows 1..31, and x2 strictly between 0 and 1/2
    assert g.mask.shape == (33, 17)
    assert g.size == 31 * 15
    assert not g.mask[0].any() and not g.mask[-1].any()


def test_disk_area():
    g = build_grid(EXAMPLES["disk"].domain, 1.0, 256)
    area = g.size * g.hx * g.hy
    assert area == pytest.approx(PI / 4, rel=0.02)


def test_bean_thin_grid():
    g = build_grid(EXAMPLES["bean"].domain, 0.05, 64, 16)
    assert g.ny == 16 and g.size > 0
    # at this resolution many columns tie for the widest; x1 = 2/3 is among them
    counts = g.mask.sum(axis=1)
    nearest = int(np.argmin(np.abs(g.x1 - 2 / 3)))
    assert counts[nearest] == counts.max()


def test_default_ny_aspect():
    assert default_ny(RECT, 0.5, 256) == 128
    assert default_ny(RECT, 0.01, 256) == 16


def test_matrix_symmetric_on_rectangle():
    M = assemble(build_grid(RECT, 0.5, 16, 16))
    assert abs(M - M.T).max() < 1e-9


def test_rectangle_ground_state():
    r = oracle_eigenvalues(RECT, 0.5, OracleParams(nx=64))
    assert r.lam[0] == pytest.approx(5 * PI**2, rel=1e-7)


def test_rectangle_low_levels():
    r = oracle_eigenvalues(RECT, 0.5, OracleParams(nx=64, count=4))
    np.testing.assert_allclose(r.lam, _rect_levels(0.5, 4), rtol=5e-3)
    assert not r.degenerate


def test_disk_eps1():
    r = oracle_eigenvalues(EXAMPLES["disk"].domain, 1.0, OracleParams(nx=128))
    assert r.lam[0] == pytest.approx(DISK_EPS1_LAMBDA1, rel=1e-3)
    assert r.within_spread


def test_second_order_convergence():
    d = EXAMPLES["disk"].domain
    exact = DISK_EPS1_LAMBDA1
    errs = [abs(oracle_eigenvalues(d, 1.0, OracleParams(nx=n, refine=False)).lam[0] - exact) for n in (64, 128)]
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_refusal_below_threshold():
    with pytest.raises(OracleRefusal, match="asymptotic series"):
        oracle_eigenvalues(RECT, MIN_EPS / 2)
    with pytest.raises(OracleRefusal):
        solve_many(RECT, [0.5, 0.01])


def test_count_bounds():
    g = build_grid(RECT, 0.5, 16, 16)
    with pytest.raises(ValueError):
        fd_eigensolve(g, 0)
    with pytest.raises(ValueError):
        fd_eigensolve(g, 11)


def test_domain_monotonicity():
    """A smaller domain has a larger ground state eigenvalue."""
    p = OracleParams(nx=64, ny=64)
    small = oracle_eigenvalues(DomainSpec.from_strings("0.8", "0"), 0.5, p).lam[0]
    big = oracle_eigenvalues(RECT, 0.5, p).lam[0]
    assert small > big


def test_symmetric_eigenvector_even():
    g = build_grid(EXAMPLES["disk"].domain, 0.5, 64, 34)
    w, v, res = eigenpairs(g, 1)
    assert res[0] < 1e-8 * w[0]
    x1, x2 = g.nodes()
    u = v[:, 0] * np.sign(v[np.argmax(np.abs(v[:, 0])), 0])
    grid = {(round(a, 9), round(b, 9)): val for a, b, val in zip(x1, x2, u)}
    pairs = [(grid[(a, b)], grid[(a, round(-b, 9))]) for a, b in grid if (a, round(-b, 9)) in grid]
    assert len(pairs) > 0.9 * len(grid)
    a, b = np.array(pairs).T
    np.testing.assert_allclose(a, b, atol=1e-8 * np.max(np.abs(u)))


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("THINSPEC_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("THINSPEC_THREADS", "zero")
    assert thread_cap() >= 1


def test_solve_many_matches_serial(monkeypatch):
    p = OracleParams(nx=32)
    monkeypatch.setenv("THINSPEC_THREADS", "1")
    serial = [r.lam[0] for r in solve_many(RECT, [0.3, 0.5], p)]
    monkeypatch.setenv("THINSPEC_THREADS", "2")
    pooled = [r.lam[0] for r in solve_many(RECT, [0.3, 0.5], p)]
    np.testing.assert_allclose(serial, pooled, rtol=1e-10)


def test_compare_rows():
    e = Expansion(n=1, m=1, k=1, c0=PI**2, coeffs={2: 0.0})
    rows = compare(RECT, e, [0.5], OracleParams(nx=32))
    assert rows[0].eps == 0.5
    # rectangle: series pi^2/eps^2 misses the pi^2 from the x1 direction
    assert rows[0].rel_err == pytest.approx(PI**2 / (5 * PI**2), rel=1e-4)


def test_nonconvex_completes():
    r = oracle_eigenvalues(EXAMPLES["nonconvex"].domain, 0.5, OracleParams(nx=64))
    assert np.isfinite(r.lam[0]) and r.lam[0] > 0
