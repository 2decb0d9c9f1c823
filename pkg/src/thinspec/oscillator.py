"""The one-dimensional model operator G_n = -d^2/dxi^2 + A xi^(2k).

For k = 1 (harmonic oscillator) eigenpairs and resolvent solves are exact in
the PolyGauss algebra.  For k >= 2 the eigenpairs come from a second-order
finite-difference discretisation with Richardson extrapolation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite
from scipy import sparse
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import spsolve
from scipy.special import beta

from .polygauss import PolyGauss


class SolvabilityError(ValueError):
    """Right-hand side is not orthogonal to the kernel of G - Lambda."""


class GridTooSmallError(RuntimeError):
    pass


@dataclass(frozen=True)
class Potential:
    n: int
    k: int
    A: float

    def __post_init__(self):
        if self.A <= 0:
            raise ValueError("potential strength A must be positive")

    @classmethod
    def from_maxdata(cls, md, n: int = 1) -> "Potential":
        k = md.k
        A = -2.0 * math.pi**2 * n**2 * md.Hd(2 * k) / (math.factorial(2 * k) * md.H0**3)
        return cls(n=n, k=k, A=A)

    @property
    def omega(self) -> float:
        if self.k != 1:
            raise ValueError("omega is defined for the harmonic case k = 1")
        return math.sqrt(self.A)


@dataclass(frozen=True)
class GridParams:
    points: int = 4096
    half_width: float | None = None
    refine: bool = True
    decay_tol: float = 1e-12


@dataclass
class GridFunc:
    xi: np.ndarray
    values: np.ndarray
    step: float

    def inner(self, other: "GridFunc", power: int = 0) -> float:
        return float(np.sum(self.xi**power * self.values * other.values) * self.step)


def harmonic_eigen(p: Potential, m: int) -> tuple:
    """(Lambda, Phi) for the m-th eigenpair (m >= 1) of the harmonic oscillator."""
    if p.k != 1:
        raise ValueError("harmonic_eigen needs k = 1")
    if m < 1:
        raise ValueError("m counts from 1")
    theta = p.omega
    j = m - 1
    c = hermite.herm2poly([0.0] * j + [1.0])
    c = c * theta ** (np.arange(len(c)) / 2.0)
    c *= (theta / math.pi) ** 0.25 / math.sqrt(2.0**j * math.factorial(j))
    return (2 * m - 1) * theta, PolyGauss(theta, c)


def wkb_estimate(p: Potential, m: int) -> float:
    """Bohr-Sommerfeld estimate of the m-th eigenvalue (exact for k = 1)."""
    k = p.k
    I = beta(1.0 / (2 * k), 1.5) / (2 * k)
    base = p.A ** (1.0 / (2 * k)) * (m - 0.5) * math.pi / (2.0 * I)
    return base ** (2.0 * k / (k + 1))


def default_half_width(p: Potential, m: int) -> float:
    lam = wkb_estimate(p, m)
    k = p.k
    turning = (lam / p.A) ** (1.0 / (2 * k))
    by_potential = (4.0 * lam / p.A) ** (1.0 / (2 * k))
    by_decay = turning + ((k + 1) * 40.0 / math.sqrt(p.A)) ** (1.0 / (k + 1))
    return max(by_potential, by_decay)


def _fd_eigen(p: Potential, m: int, L: float, intervals: int, decay_tol: float):
    h = 2.0 * L / intervals
    xi = np.linspace(-L, L, intervals + 1)[1:-1]
    diag = 2.0 / h**2 + p.A * xi ** (2 * p.k)
    off = np.full(len(xi) - 1, -1.0 / h**2)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(m - 1, m - 1))
    u = v[:, 0] / math.sqrt(h)
    if u[np.argmax(np.abs(u))] < 0:
        u = -u
    edge = max(abs(u[0]), abs(u[-1])) / np.max(np.abs(u))
    if edge > decay_tol:
        raise GridTooSmallError(
            f"eigenfunction has not decayed at the truncation boundary (ratio {edge:.2e})"
        )
    return float(w[0]), GridFunc(xi, u, h)


def anharmonic_eigen_numeric(p: Potential, m: int, grid: GridParams = GridParams()) -> tuple:
    """m-th eigenpair of -u'' + A xi^(2k) u from central differences.

    Two nested grids (spacing h and h/2) are combined by Richardson
    extrapolation in h^2; the returned eigenvector is the fine-grid one.
    """
    L = grid.half_width or default_half_width(p, m)
    lam_c, u_c = _fd_eigen(p, m, L, grid.points, grid.decay_tol)
    if not grid.refine:
        return lam_c, u_c
    lam_f, u_f = _fd_eigen(p, m, L, 2 * grid.points, grid.decay_tol)
    return (4.0 * lam_f - lam_c) / 3.0, u_f


def resolvent_solve(p: Potential, lam: float, phi: PolyGauss, f: PolyGauss, tol: float = 1e-10) -> PolyGauss:
    """Solve (G - Lambda) u = f with u orthogonal to phi (k = 1).

    With u = q(xi) e^{-theta xi^2/2} the equation becomes
    -q'' + 2 theta xi q' + (theta - Lambda) q = coefficients of f,
    which is upper triangular in the monomial basis.
    """
    if p.k != 1:
        raise ValueError("closed-form resolvent needs k = 1; use numeric_resolvent")
    theta = p.omega
    if abs(f.theta - theta) > 1e-12 * theta or abs(phi.theta - theta) > 1e-12 * theta:
        raise ValueError("Gaussian weight does not match the potential")
    overlap = f.inner(phi)
    if abs(overlap) > tol * max(1.0, f.norm()):
        raise SolvabilityError(f"(f, Phi) = {overlap:.3e} is not zero")
    level = (lam / theta - 1.0) / 2.0
    j0 = int(round(level))
    if abs(level - j0) > 1e-9 or j0 < 0:
        raise ValueError("Lambda is not an eigenvalue of the harmonic oscillator")
    fc = f.coeffs
    d = len(fc) - 1
    q = np.zeros(d + 3)
    for j in range(d, -1, -1):
        rhs = fc[j] + (j + 2) * (j + 1) * q[j + 2]
        if j == j0:
            continue
        q[j] = rhs / (2.0 * theta * (j - j0))
    u = PolyGauss(theta, q)
    return u - phi * (u.inner(phi) / phi.inner(phi))


def apply_operator(p: Potential, lam: float, u: PolyGauss) -> PolyGauss:
    """(G - Lambda) u for k = 1, in the PolyGauss algebra."""
    return -u.deriv().deriv() + u.mul_x(2) * p.A - u * lam


def numeric_resolvent(p: Potential, lam: float, phi: GridFunc, f) -> GridFunc:
    """Grid solve of (G - Lambda) u = f, u orthogonal to phi (any k)."""
    xi, h = phi.xi, phi.step
    fv = f(xi) if callable(f) else np.asarray(f, dtype=float)
    n = len(xi)
    main = 2.0 / h**2 + p.A * xi ** (2 * p.k) - lam
    T = sparse.diags([main, np.full(n - 1, -1.0 / h**2), np.full(n - 1, -1.0 / h**2)], [0, 1, -1])
    col = sparse.csr_matrix(phi.values[:, None] * h)
    M = sparse.bmat([[T, col], [col.T, None]], format="csc")
    rhs = np.concatenate([fv - phi.values * np.sum(fv * phi.values) * h, [0.0]])
    sol = spsolve(M, rhs)
    return GridFunc(xi, sol[:-1], h)
