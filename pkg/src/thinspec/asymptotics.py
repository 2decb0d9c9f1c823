"""Closed-form expansion coefficients, the spectral gap and leading profiles.

The eigenvalue expansion reads

    lambda_{n,m}(eps) = eps^-2 * (c0 + sum_{i >= 2k} eta^i c_i),   eta = eps^(1/(k+1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import DomainSpec, GeometryError, MaxData
from .oscillator import (
    GridParams,
    Potential,
    anharmonic_eigen_numeric,
    harmonic_eigen,
    numeric_resolvent,
    resolvent_solve,
)
from .polygauss import PolyGauss

PI2 = math.pi**2


@dataclass
class Expansion:
    n: int
    m: int
    k: int
    c0: float
    coeffs: dict = field(default_factory=dict)

    @property
    def alpha(self) -> float:
        return 1.0 / (self.k + 1)

    @property
    def order(self) -> int:
        return max(self.coeffs, default=0)

    def __call__(self, eps):
        return eval_expansion(self, eps)

    def as_dict(self) -> dict:
        out = {"0": self.c0}
        out.update({str(i): self.coeffs[i] for i in sorted(self.coeffs)})
        return out


def eval_expansion(e: Expansion, eps):
    """Partial sum eps^-2 (c0 + sum_i eta^i c_i) over the stored coefficients."""
    eps = np.asarray(eps, dtype=float)
    if np.any(eps <= 0):
        raise ValueError("eps must be positive")
    eta = eps ** e.alpha
    total = np.full_like(eps, e.c0)
    for i, ci in e.coeffs.items():
        total = total + eta**i * ci
    out = total / eps**2
    return float(out) if out.ndim == 0 else out


def potential(md: MaxData, n: int = 1) -> Potential:
    return Potential.from_maxdata(md, n)


def c0(md: MaxData, n: int = 1) -> float:
    return PI2 * n**2 / md.H0**2


def c2k(md: MaxData, n: int = 1, m: int = 1, grid: GridParams = GridParams()) -> float:
    p = potential(md, n)
    if p.k == 1:
        return harmonic_eigen(p, m)[0]
    return anharmonic_eigen_numeric(p, m, grid)[0]


def _psi1_rhs_scale(md: MaxData, n: int) -> float:
    k = md.k
    return 2 * PI2 * n**2 * md.Hd(2 * k + 1) / (math.factorial(2 * k + 1) * md.H0**3)


def psi1(md: MaxData, n: int = 1, m: int = 1) -> tuple:
    """(Phi, Psi_1) for k = 1, Psi_1 solving (G - Lambda) Psi_1 = s xi^3 Phi."""
    p = potential(md, n)
    lam, phi = harmonic_eigen(p, m)
    f = phi.mul_x(3) * _psi1_rhs_scale(md, n)
    return phi, resolvent_solve(p, lam, phi, f)


def c2k2(md: MaxData, n: int = 1, m: int = 1, grid: GridParams = GridParams()) -> float:
    """Coefficient c_{2k+2} from the four-term formula (any k)."""
    k = md.k
    H0 = md.H0
    f2k1 = 2 * k + 1
    s = _psi1_rhs_scale(md, n)
    if k == 1:
        phi, Psi1 = psi1(md, n, m)
        cross = Psi1.inner(phi, f2k1)
        quad = phi.inner(phi, 2 * k + 2)
        quartic = phi.inner(phi, 4 * k)
    else:
        p = potential(md, n)
        lam, phi = anharmonic_eigen_numeric(p, m, grid)
        if s != 0.0:
            Psi1 = numeric_resolvent(p, lam, phi, s * phi.xi**f2k1 * phi.values)
            cross = Psi1.inner(phi, f2k1)
        else:
            cross = 0.0
        quad = phi.inner(phi, 2 * k + 2)
        quartic = 0.0
    out = PI2 * n**2 * md.hd(1) ** 2 / H0**2
    out -= s * cross
    out -= 2 * PI2 * n**2 * md.Hd(2 * k + 2) / (math.factorial(2 * k + 2) * H0**3) * quad
    if k == 1:
        out += 3 * PI2 * n**2 * md.Hd(2 * k) ** 2 / (math.factorial(2 * k) ** 2 * H0**4) * quartic
    return out


def closed_c2(md: MaxData) -> float:
    _require_k1(md)
    return math.pi * math.sqrt(-md.H[2]) / md.H0**1.5


def closed_c4_c6(md: MaxData) -> tuple:
    """(c4, c6) of the lowest eigenvalue for k = 1 in closed form."""
    _require_k1(md)
    H0 = md.H0
    H2, H3, H4, H5, H6 = (md.Hd(i) for i in range(2, 7))
    h1, h2, h3 = (md.hd(i) for i in range(1, 4))
    c4 = PI2 * h1**2 / H0**2 - 9 * H2 / (16 * H0) - 11 * H3**2 / (144 * H2**2) + H4 / (16 * H2)
    bracket = (
        PI2 * h2**2 / (2 * H0**2)
        - PI2 * (h1 * H3 + H2**2) * h2 / (2 * H0**2 * H2)
        + 83 * H2**2 / (256 * H0**2)
        + 19 * H3**2 * H4 / (384 * H2**3)
        - 155 * H3**4 / (6912 * H2**4)
        + 29 * H3**2 / (384 * H0 * H2)
        - 9 * H4 / (128 * H0)
        - 13 * H3 * H5 / (576 * H2**2)
        - 7 * H4**2 / (768 * H2**2)
        + H6 / (192 * H2)
        + PI2 * H2**2 / (6 * H0**2)
        - PI2 * H2 * h1**2 / (2 * H0**3)
        + PI2 * h3 * h1 / (2 * H0**2)
    )
    c6 = H0**1.5 / (math.pi * math.sqrt(-H2)) * bracket
    return c4, c6


def _require_k1(md: MaxData):
    if md.k != 1:
        raise GeometryError(f"closed forms need k = 1, got k = {md.k}")


def gap_leading(md: MaxData, grid: GridParams = GridParams()) -> float:
    """Leading constant of the first gap: gamma(eps) ~ const * eta^(2k) / eps^2."""
    if md.k == 1:
        return 2.0 * closed_c2(md)
    return c2k(md, 1, 2, grid) - c2k(md, 1, 1, grid)


def closed_expansion(md: MaxData, order: int, n: int = 1, m: int = 1) -> Expansion:
    """c0, c_2k, c_{2k+1} = 0 and c_{2k+2}, truncated at ``order``.

    For the lowest eigenvalue with k = 1 the closed forms go one step further:
    c5 = 0 and c6 from ``closed_c4_c6``.
    """
    k = md.k
    e = Expansion(n=n, m=m, k=k, c0=c0(md, n))
    if order >= 2 * k:
        e.coeffs[2 * k] = c2k(md, n, m)
    if order >= 2 * k + 1:
        e.coeffs[2 * k + 1] = 0.0
    if order >= 2 * k + 2:
        e.coeffs[2 * k + 2] = c2k2(md, n, m)
    if k == 1 and n == 1 and m == 1 and order >= 5:
        e.coeffs[5] = 0.0
        if order >= 6:
            e.coeffs[6] = closed_c4_c6(md)[1]
    return e


def expand(md: MaxData, order: int, n: int = 1, m: int = 1) -> Expansion:
    """Best available expansion: the full recurrence for k = 1, n = 1, else closed forms."""
    if md.k == 1 and n == 1 and order > 4:
        from .recurrence import expand_maxdata

        return expand_maxdata(md, order, m=m)
    if order > 2 * md.k + 2:
        raise ValueError(
            f"order {order} needs the recurrence engine, available only for k = 1, n = 1"
        )
    return closed_expansion(md, order, n, m)


# --------------------------------------------------------------------------
# Profiles


@dataclass
class Profile:
    n: int
    m: int
    phi: PolyGauss
    psi1: PolyGauss | None
    xbar: float
    alpha: float

    def psi0_xi(self, xi1, xi2):
        return self.phi(xi1) * np.sin(math.pi * self.n * np.asarray(xi2))

    def psi1_xi(self, xi1, xi2):
        if self.psi1 is None:
            return np.zeros(np.broadcast(np.asarray(xi1), np.asarray(xi2)).shape)
        return self.psi1(xi1) * np.sin(math.pi * self.n * np.asarray(xi2))


def profile(md: MaxData, n: int = 1, m: int = 1) -> Profile:
    if md.k != 1:
        raise GeometryError("profiles are available for k = 1")
    phi, Psi1 = psi1(md, n, m)
    return Profile(n=n, m=m, phi=phi, psi1=Psi1, xbar=md.xbar, alpha=0.5)


def sample_profile(prof: Profile, d: DomainSpec, eps: float, x1, x2, first_order: bool = False):
    """psi_0 (optionally + eta psi_1) at physical points; zero outside the domain."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    hm = d.eval_minus(x1)
    H = d.eval_H(x1)
    eta = eps**prof.alpha
    with np.errstate(invalid="ignore", divide="ignore"):
        xi1 = (x1 - prof.xbar) / eta
        xi2 = (x2 + eps * hm) / (eps * H)
    inside = np.isfinite(xi2) & (H > 0) & (xi2 > 0) & (xi2 < 1)
    xi2 = np.where(inside, xi2, 0.0)
    vals = prof.psi0_xi(xi1, xi2)
    if first_order:
        vals = vals + eta * prof.psi1_xi(xi1, xi2)
    return np.where(inside, vals, 0.0)
