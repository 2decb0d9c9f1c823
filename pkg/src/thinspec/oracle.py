"""Direct finite-difference eigenvalues of the thin domain.

The domain is {0 < x1 < 1, -eps*h_minus(x1) < x2 < eps*h_plus(x1)}.  Nodes of
a uniform tensor grid that fall strictly inside are unknowns; at nodes next to
the curved boundary the five-point stencil uses the true distance to the
boundary (Shortley-Weller), which keeps the eigenvalue error O(h^2) so that
two resolutions can be combined by Richardson extrapolation.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.optimize import brentq
from scipy.sparse.linalg import ArpackNoConvergence, eigs

from .geometry import DomainSpec

MIN_EPS = 0.02


class OracleError(RuntimeError):
    """The eigenvalue iteration failed or the grid is unusable."""


class OracleRefusal(ValueError):
    """eps is below the range where the direct solve is trustworthy."""


@dataclass(frozen=True)
class OracleParams:
    nx: int = 512
    ny: int | None = None
    count: int = 1
    refine: bool = True
    tol: float = 1e-12
    use_seed: bool = True


@dataclass
class GridDomain:
    d: DomainSpec
    eps: float
    nx: int
    ny: int
    x1: np.ndarray
    x2: np.ndarray
    mask: np.ndarray
    hx: float
    hy: float

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def nodes(self):
        """Physical coordinates of the interior nodes, in unknown order."""
        X1, X2 = np.meshgrid(self.x1, self.x2, indexing="ij")
        return X1[self.mask], X2[self.mask]


@dataclass
class OracleResult:
    eps: float
    coarse: np.ndarray
    fine: np.ndarray | None
    extrapolated: np.ndarray
    residuals: np.ndarray
    degenerate: bool = False
    sizes: tuple = field(default_factory=tuple)

    @property
    def lam(self) -> np.ndarray:
        return self.extrapolated

    @property
    def within_spread(self) -> bool:
        """Extrapolated values stay within one grid-to-grid spread of the fine values."""
        if self.fine is None:
            return True
        spread = np.abs(self.fine - self.coarse)
        return bool(np.all(np.abs(self.extrapolated - self.fine) <= spread + 1e-12 * np.abs(self.fine)))


def default_ny(d: DomainSpec, eps: float, nx: int) -> int:
    """Vertical resolution giving cells of aspect ratio about one."""
    lo, hi = _vertical_extent(d, eps)
    return max(16, int(math.ceil((hi - lo) * nx)))


def _vertical_extent(d: DomainSpec, eps: float):
    xs = np.linspace(0.0, 1.0, 4097)
    with np.errstate(invalid="ignore"):
        top = np.nanmax(eps * d.eval_plus(xs))
        bot = np.nanmin(-eps * d.eval_minus(xs))
    return float(bot), float(top)


def build_grid(d: DomainSpec, eps: float, nx: int, ny: int | None = None) -> GridDomain:
    if eps <= 0:
        raise ValueError("eps must be positive")
    ny = default_ny(d, eps, nx) if ny is None else ny
    if nx < 16 or ny < 16:
        raise ValueError("nx and ny must be at least 16")
    lo, hi = _vertical_extent(d, eps)
    x1 = np.linspace(0.0, 1.0, nx + 1)
    x2 = np.linspace(lo, hi, ny + 1)
    with np.errstate(invalid="ignore"):
        top = eps * d.eval_plus(x1)
        bot = -eps * d.eval_minus(x1)
    mask = (x2[None, :] < top[:, None]) & (x2[None, :] > bot[:, None])
    mask[0, :] = False
    mask[-1, :] = False
    if not mask.any():
        raise OracleError("grid has no interior nodes; refine the grid or increase eps")
    return GridDomain(d, eps, nx, ny, x1, x2, mask, 1.0 / nx, (hi - lo) / ny)


def _crossing(g: GridDomain, y: float, xa: float, xb: float) -> float:
    """Distance from (xa, y) to the first boundary point on the segment towards xb."""
    eps, d = g.eps, g.d

    def gap(x):
        v = min(eps * float(d.eval_plus(x)) - y, y + eps * float(d.eval_minus(x)))
        return v if np.isfinite(v) else -1.0

    if xb in (0.0, 1.0) and gap(xb) >= 0.0:
        return abs(xb - xa)
    xr = brentq(gap, xa, xb, xtol=1e-15, rtol=1e-15)
    return abs(xr - xa)


def assemble(g: GridDomain) -> sparse.csr_matrix:
    """Shortley-Weller discretisation of -Laplacian on the interior nodes."""
    mask = g.mask
    idx = -np.ones(mask.shape, dtype=np.int64)
    idx[mask] = np.arange(g.size)
    I, J = np.nonzero(mask)
    p = idx[I, J]
    with np.errstate(invalid="ignore"):
        top = g.eps * g.d.eval_plus(g.x1)
        bot = -g.eps * g.d.eval_minus(g.x1)
    y = g.x2[J]
    floor = 1e-6

    # neighbour indices (-1 where the neighbour lies outside the domain)
    left, right = idx[I - 1, J], idx[I + 1, J]
    down = np.where(J > 0, idx[I, np.maximum(J - 1, 0)], -1)
    up = np.where(J < g.ny, idx[I, np.minimum(J + 1, g.ny)], -1)

    dl = np.full(g.size, g.hx)
    dr = np.full(g.size, g.hx)
    for arr, nb, step in ((dl, left, -1), (dr, right, 1)):
        for t in np.flatnonzero(nb < 0):
            i = I[t]
            arr[t] = _crossing(g, y[t], g.x1[i], g.x1[i + step])
    dd = np.where(down >= 0, g.hy, np.minimum(y - bot[I], g.hy))
    du = np.where(up >= 0, g.hy, np.minimum(top[I] - y, g.hy))
    dl = np.maximum(dl, floor * g.hx)
    dr = np.maximum(dr, floor * g.hx)
    dd = np.maximum(dd, floor * g.hy)
    du = np.maximum(du, floor * g.hy)

    diag = 2.0 / (dl * dr) + 2.0 / (dd * du)
    rows, cols, vals = [p], [p], [diag]
    for nb, near, far in ((left, dl, dr), (right, dr, dl), (down, dd, du), (up, du, dd)):
        sel = nb >= 0
        rows.append(p[sel])
        cols.append(nb[sel])
        vals.append(-2.0 / (near[sel] * (near[sel] + far[sel])))
    return sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(g.size, g.size),
    )


def _seed(g: GridDomain):
    """psi_0 of the asymptotic profile sampled on the grid, if available."""
    from .asymptotics import profile, sample_profile
    from .geometry import GeometryError, max_data

    try:
        md = max_data(g.d, order=8)
        prof = profile(md)
    except (GeometryError, ValueError):
        return None
    x1, x2 = g.nodes()
    v = sample_profile(prof, g.d, g.eps, x1, x2)
    return v if np.linalg.norm(v) > 0 else None


def eigenpairs(g: GridDomain, count: int = 1, tol: float = 1e-12, use_seed: bool = True):
    """(eigenvalues, eigenvectors, residual norms) on a single grid, ascending."""
    M = assemble(g).tocsc()
    k = min(count, g.size - 2)
    v0 = _seed(g) if use_seed and count == 1 else None
    try:
        w, v = eigs(M, k=k, sigma=0.0, which="LM", v0=v0, tol=tol)
    except ArpackNoConvergence as exc:
        raise OracleError(f"eigenvalue iteration did not converge at eps = {g.eps}") from exc
    order = np.argsort(w.real)
    w = w.real[order]
    v = v[:, order].real
    res = np.array([
        np.linalg.norm(M @ v[:, i] - w[i] * v[:, i]) / np.linalg.norm(v[:, i]) for i in range(k)
    ])
    return w, v, res


def _solve(g: GridDomain, count: int, tol: float, use_seed: bool):
    w, _, res = eigenpairs(g, count, tol, use_seed)
    return w, res


def fd_eigensolve(g: GridDomain, count: int = 1, params: OracleParams = OracleParams()) -> OracleResult:
    """Lowest ``count`` eigenvalues on g and on the grid with half the spacing."""
    if count < 1 or count > 10:
        raise ValueError("count must be between 1 and 10")
    if g.eps < MIN_EPS:
        raise OracleRefusal(
            f"eps = {g.eps} is below {MIN_EPS}; use the asymptotic series in this regime"
        )
    wc, rc = _solve(g, count, params.tol, params.use_seed)
    degenerate = bool(count > 1 and np.min(np.diff(wc)) < 1e-8 * max(1.0, wc[0]))
    if not params.refine:
        return OracleResult(g.eps, wc, None, wc, rc, degenerate, (g.size,))
    gf = build_grid(g.d, g.eps, 2 * g.nx, 2 * g.ny)
    wf, rf = _solve(gf, count, params.tol, params.use_seed)
    ext = (4.0 * wf - wc) / 3.0
    return OracleResult(g.eps, wc, wf, ext, np.maximum(rc, rf), degenerate, (g.size, gf.size))


def oracle_eigenvalues(d: DomainSpec, eps: float, params: OracleParams = OracleParams()) -> OracleResult:
    if eps < MIN_EPS:
        raise OracleRefusal(
            f"eps = {eps} is below {MIN_EPS}; use the asymptotic series in this regime"
        )
    g = build_grid(d, eps, params.nx, params.ny)
    return fd_eigensolve(g, params.count, params)


def thread_cap() -> int:
    raw = os.environ.get("THINSPEC_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def solve_many(d: DomainSpec, eps_list, params: OracleParams = OracleParams()) -> list:
    """One OracleResult per eps; independent solves run in a thread pool."""
    eps_list = list(eps_list)
    for e in eps_list:
        if e < MIN_EPS:
            raise OracleRefusal(f"eps = {e} is below {MIN_EPS}")
    workers = min(thread_cap(), len(eps_list)) or 1
    if workers == 1:
        return [oracle_eigenvalues(d, e, params) for e in eps_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda e: oracle_eigenvalues(d, e, params), eps_list))


@dataclass(frozen=True)
class ComparisonRow:
    eps: float
    lam_oracle: float
    lam_series: float
    rel_err: float


def compare(d: DomainSpec, e, eps_list, params: OracleParams = OracleParams()) -> list:
    """Rows (eps, oracle, series, relative error) for the lowest eigenvalue."""
    results = solve_many(d, eps_list, params)
    rows = []
    for r in results:
        lo = float(r.lam[0])
        ls = float(e(r.eps))
        rows.append(ComparisonRow(r.eps, lo, ls, abs(ls - lo) / lo))
    return rows
