"""Arbitrary-order construction of the k = 1 expansion (lowest mode family n = 1).

In the stretched variables xi1 = (x1 - xbar)/eta, xi2 in (0, 1) the eigenvalue
problem becomes L(eta) psi = mu psi with

    L(eta) = -eta^2 d1^2 - 2 K12 d1 d2 - K22 d2^2 - K2 d2,

and each K is Taylor expanded in eta.  Matching powers of eta gives, at order i,

    (L0 - c0) psi_i = sum_{j=1}^{i} (mu_j - L_j) psi_{i-j}.

Every psi_i is a finite sum of terms q(xi1) exp(-theta xi1^2/2) xi2^a {sin, cos}(pi xi2),
so the whole construction stays in closed form.  Projecting onto sin(pi xi2) yields
c_i and Psi_{i-2}; the remainder is solved in xi2 for the cross term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exprjet import Jet
from .geometry import DomainSpec, GeometryError, GeometryConfig, MaxData, max_data
from .oscillator import Potential, apply_operator, harmonic_eigen, resolvent_solve
from .polygauss import PolyGauss
from .asymptotics import Expansion, c0 as c0_of

SIN, COS = 0, 1


class RepresentationError(RuntimeError):
    """A forcing term fell outside the polynomial-trigonometric space."""


class UnsupportedOrderError(ValueError):
    pass


@lru_cache(maxsize=None)
def _trig_moments(n: int) -> tuple:
    """int_0^1 xi^a sin^2(pi xi) and int_0^1 xi^a sin(pi xi) cos(pi xi), a < n."""
    x, w = np.polynomial.legendre.leggauss(96)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    s, c = np.sin(np.pi * x), np.cos(np.pi * x)
    pw = x[None, :] ** np.arange(n)[:, None]
    return (pw * s * s) @ w, (pw * s * c) @ w


# --------------------------------------------------------------------------
# Functions of (xi1, xi2)


class Field2D:
    """sum C[b, a, t] xi1^b exp(-theta xi1^2/2) xi2^a trig_t(pi xi2), trig_0 = sin, trig_1 = cos."""

    __slots__ = ("theta", "C")

    def __init__(self, theta: float, C):
        self.theta = float(theta)
        C = np.asarray(C, dtype=float)
        if C.ndim != 3 or C.shape[2] != 2:
            raise ValueError("coefficient array must have shape (B, A, 2)")
        self.C = C

    @classmethod
    def zero(cls, theta):
        return cls(theta, np.zeros((1, 1, 2)))

    @classmethod
    def separable(cls, pg: PolyGauss, a: int = 0, trig: int = SIN, scale: float = 1.0):
        C = np.zeros((len(pg.coeffs), a + 1, 2))
        C[:, a, trig] = pg.coeffs * scale
        return cls(pg.theta, C)

    def _pad(self, B, A):
        out = np.zeros((B, A, 2))
        out[: self.C.shape[0], : self.C.shape[1]] = self.C
        return out

    def __add__(self, other: "Field2D"):
        B = max(self.C.shape[0], other.C.shape[0])
        A = max(self.C.shape[1], other.C.shape[1])
        return Field2D(self.theta, self._pad(B, A) + other._pad(B, A))

    def __neg__(self):
        return Field2D(self.theta, -self.C)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s: float):
        return Field2D(self.theta, self.C * float(s))

    __rmul__ = __mul__

    def d1(self) -> "Field2D":
        B, A, _ = self.C.shape
        out = np.zeros((B + 1, A, 2))
        out[: B - 1] += self.C[1:] * np.arange(1, B)[:, None, None]
        out[1:] -= self.theta * self.C
        return Field2D(self.theta, out)

    def d2(self) -> "Field2D":
        B, A, _ = self.C.shape
        out = np.zeros((B, A, 2))
        a = np.arange(1, A)[None, :]
        out[:, : A - 1, SIN] += self.C[:, 1:, SIN] * a
        out[:, : A - 1, COS] += self.C[:, 1:, COS] * a
        out[:, :, COS] += math.pi * self.C[:, :, SIN]
        out[:, :, SIN] -= math.pi * self.C[:, :, COS]
        return Field2D(self.theta, out)

    def mul_poly2(self, P) -> "Field2D":
        """Multiply by sum P[b, a] xi1^b xi2^a."""
        P = np.atleast_2d(P)
        B, A, _ = self.C.shape
        out = np.zeros((B + P.shape[0] - 1, A + P.shape[1] - 1, 2))
        for (b, a), v in np.ndenumerate(P):
            if v != 0.0:
                out[b : b + B, a : a + A] += v * self.C
        return Field2D(self.theta, out)

    def sin_component(self) -> PolyGauss:
        """2 * (F, sin pi xi2)_{L2(0,1)} as a function of xi1."""
        S, X = _trig_moments(self.C.shape[1])
        p = 2.0 * (self.C[:, :, SIN] @ S + self.C[:, :, COS] @ X)
        return PolyGauss(self.theta, p)

    def boundary_values(self) -> tuple:
        """Polynomials in xi1 of the traces at xi2 = 0 and xi2 = 1."""
        at0 = self.C[:, 0, COS]
        at1 = -self.C[:, :, COS].sum(axis=1)
        return at0, at1

    def __call__(self, xi1, xi2):
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        B, A, _ = self.C.shape
        p1 = xi1[..., None] ** np.arange(B)
        p2 = xi2[..., None] ** np.arange(A)
        s = np.einsum("...b,bat,...a->...t", p1, self.C, p2)
        g = np.exp(-0.5 * self.theta * xi1**2)
        return g * (s[..., SIN] * np.sin(np.pi * xi2) + s[..., COS] * np.cos(np.pi * xi2))

    def norm(self, nodes: int = 64) -> float:
        """L2 norm over R x (0, 1)."""
        B, A, _ = self.C.shape
        x, w = np.polynomial.legendre.leggauss(nodes)
        x, w = 0.5 * (x + 1.0), 0.5 * w
        basis = np.stack([np.sin(np.pi * x), np.cos(np.pi * x)])  # (2, nodes)
        vals = np.einsum("bat,an,tn->bn", self.C, x[None, :] ** np.arange(A)[:, None], basis)
        total = 0.0
        for q in range(len(x)):
            pg = PolyGauss(self.theta, vals[:, q])
            total += w[q] * pg.inner(pg)
        return math.sqrt(max(total, 0.0))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.C)))


def solve_xi2(rhs_sin: np.ndarray, rhs_cos: np.ndarray) -> tuple:
    """Solve phi'' + pi^2 phi = r on (0,1), phi(0) = phi(1) = 0, (phi, sin) = 0.

    ``r = sum_a rhs_sin[..., a] xi^a sin + rhs_cos[..., a] xi^a cos`` (leading
    axes are batched).  Returns (u, v, end_value) with
    ``phi = sum_b u_b xi^b sin + v_b xi^b cos`` and the residual trace at xi = 1.
    """
    d = rhs_sin.shape[-1] - 1
    shape = rhs_sin.shape[:-1] + (d + 3,)
    u = np.zeros(shape)
    v = np.zeros(shape)
    tp = 2.0 * math.pi
    for a in range(d, -1, -1):
        u[..., a + 1] = (rhs_cos[..., a] - (a + 2) * (a + 1) * v[..., a + 2]) / (tp * (a + 1))
        v[..., a + 1] = ((a + 2) * (a + 1) * u[..., a + 2] - rhs_sin[..., a]) / (tp * (a + 1))
    end = -v.sum(axis=-1)
    S, X = _trig_moments(d + 3)
    u[..., 0] = -2.0 * (u[..., 1:] @ S[1:] + v @ X)
    return u, v, end


def solve_cross(R: Field2D, H0: float, tol: float = 1e-9) -> Field2D:
    """Cross term psi~ with -(1/H0^2)(d2^2 + pi^2) psi~ = R, Dirichlet, orthogonal to sin."""
    rs = -(H0**2) * R.C[:, :, SIN]
    rc = -(H0**2) * R.C[:, :, COS]
    u, v, end = solve_xi2(rs, rc)
    scale = max(1.0, float(np.max(np.abs(rs))), float(np.max(np.abs(rc))))
    if np.max(np.abs(end)) > tol * scale * max(1.0, np.max(np.abs(u)) + np.max(np.abs(v))):
        raise RepresentationError("forcing has a sin(pi xi2) component; cross problem not solvable")
    return Field2D(R.theta, np.stack([u, v], axis=-1))


# --------------------------------------------------------------------------
# Taylor data of the transformed coefficients


@dataclass
class KSeries:
    """eta-expansion of K12, K22 and K2; entry j is an array P[b, a] (xi1^b xi2^a)."""

    k: int
    H0: float
    K12: dict
    K22: dict
    K2: dict

    def poly(self, name: str, j: int, xi2_power: int) -> np.ndarray:
        """Coefficient polynomial in xi1 of xi2^power in the order-j term.

        ``name`` is one of P12, Q12, P22, Q22, R22, P2, Q2.
        """
        table = {"12": self.K12, "22": self.K22, "2": self.K2}[name[1:]]
        P = table.get(j)
        if P is None or xi2_power >= P.shape[1]:
            return np.zeros(1)
        return P[:, xi2_power].copy()

    def P(self, name: str, j: int) -> np.ndarray:
        power = {"P": 0, "Q": 1, "R": 2}[name[0]]
        return self.poly(name, j, power)


def _series(values, order):
    """Taylor coefficients from a derivative list, zero-padded to ``order``."""
    c = np.zeros(order + 1)
    vals = list(values)[: order + 1]
    c[: len(vals)] = [v / math.factorial(i) for i, v in enumerate(vals)]
    return c


def taylor_K(md: MaxData, order: int) -> KSeries:
    """Expand K12, K22, K2 in eta up to ``order``.

    Derivatives of H below order 2k are taken as exact zeros.
    """
    k = md.k
    need_H, need_h = order, order - 2 * k
    if len(md.H) - 1 < need_H or len(md.h) - 1 < max(need_h, 1):
        raise GeometryError(
            f"jet order insufficient: need H up to {need_H} and h- up to {need_h}"
        )
    N = order + 2
    Hv = list(md.H)
    for i in range(1, 2 * k):
        if i < len(Hv):
            Hv[i] = 0.0
    H = Jet(md.xbar, _series(Hv, N))
    hm = Jet(md.xbar, _series(md.h, N))
    Hp, Hpp = H.derivative(), H.derivative().derivative()
    hp, hpp = hm.derivative(), hm.derivative().derivative()
    n2 = len(Hpp.coeffs) - 1
    H, Hp, hp = H.truncate(n2), Hp.truncate(n2), hp.truncate(n2)
    invH = H.reciprocal()
    invH2 = invH * invH
    A12 = hp * invH
    B12 = -(Hp * invH)
    E0, E1, E2 = A12 * A12, 2.0 * (A12 * B12), B12 * B12
    K2a = (hpp * H - 2.0 * (hp * Hp)) * invH2
    K2b = (2.0 * (Hp * Hp) - Hpp * H) * invH2

    def mono(j, c, a):
        P = np.zeros((j + 1, a + 1))
        P[j, a] = c
        return P

    K12, K22, K2 = {}, {}, {}
    o12, o2 = 2 * k + 1, 2 * k + 2
    for j in range(1, order + 1):
        terms = []
        if j < len(invH2.coeffs):
            terms.append(mono(j, invH2.coeffs[j], 0))
        l = j - o2
        if 0 <= l < len(E0.coeffs):
            terms += [mono(l, E0.coeffs[l], 0), mono(l, E1.coeffs[l], 1), mono(l, E2.coeffs[l], 2)]
        K22[j] = _sum_polys(terms)
        l = j - o12
        if 0 <= l < len(A12.coeffs):
            K12[j] = _sum_polys([mono(l, A12.coeffs[l], 0), mono(l, B12.coeffs[l], 1)])
        l = j - o2
        if 0 <= l < len(K2a.coeffs):
            K2[j] = _sum_polys([mono(l, K2a.coeffs[l], 0), mono(l, K2b.coeffs[l], 1)])
    return KSeries(k=k, H0=md.H0, K12=K12, K22=K22, K2=K2)


def _sum_polys(terms):
    if not terms:
        return np.zeros((1, 1))
    B = max(t.shape[0] for t in terms)
    A = max(t.shape[1] for t in terms)
    out = np.zeros((B, A))
    for t in terms:
        out[: t.shape[0], : t.shape[1]] += t
    return out


# --------------------------------------------------------------------------
# The recurrence


@dataclass
class RecurrenceState:
    md: MaxData
    ks: KSeries
    potential: Potential
    lam: float
    phi: PolyGauss
    m: int = 1
    order: int = 2
    c: dict = field(default_factory=dict)
    Psi: dict = field(default_factory=dict)
    tilde: dict = field(default_factory=dict)
    f: dict = field(default_factory=dict)
    g: dict = field(default_factory=dict)

    @property
    def theta(self) -> float:
        return self.phi.theta

    def psi(self, i: int) -> Field2D:
        """psi_i = psi~_i + Psi_i sin(pi xi2); unknown Psi_i counts as zero."""
        out = self.tilde.get(i, Field2D.zero(self.theta))
        if i in self.Psi:
            out = out + Field2D.separable(self.Psi[i])
        return out

    def mu(self, j: int) -> float:
        return self.c.get(j, 0.0) if j >= 1 else self.c[0]


def apply_L(state: RecurrenceState, j: int, psi: Field2D) -> Field2D:
    """L_j psi for j >= 1 (the order-eta^j part of the transformed operator)."""
    ks = state.ks
    out = Field2D.zero(psi.theta)
    if j == 2 * ks.k:
        out = out - psi.d1().d1()
    d2 = psi.d2()
    if j in ks.K12:
        out = out - 2.0 * d2.d1().mul_poly2(ks.K12[j])
    if j in ks.K22:
        out = out - d2.d2().mul_poly2(ks.K22[j])
    if j in ks.K2:
        out = out - d2.mul_poly2(ks.K2[j])
    return out


def apply_L0_shifted(state: RecurrenceState, psi: Field2D) -> Field2D:
    """(L0 - c0) psi = -(1/H0^2) (d2^2 + pi^2) psi."""
    H0 = state.md.H0
    return (psi.d2().d2() + psi * math.pi**2) * (-1.0 / H0**2)


def init_state(md: MaxData, order: int, m: int = 1) -> RecurrenceState:
    if md.k != 1:
        raise UnsupportedOrderError(
            f"the recurrence engine handles k = 1 only (got k = {md.k}); "
            "use the closed-form coefficients c0, c_2k, c_2k+2"
        )
    ks = taylor_K(md, order)
    p = Potential.from_maxdata(md, 1)
    lam, phi = harmonic_eigen(p, m)
    st = RecurrenceState(md=md, ks=ks, potential=p, lam=lam, phi=phi, m=m)
    st.c[0] = c0_of(md, 1)
    st.c[2] = lam
    st.Psi[0] = phi
    zero = Field2D.zero(phi.theta)
    st.tilde.update({0: zero, 1: zero, 2: zero})
    st.order = 2
    return st


def known_part(state: RecurrenceState, i: int) -> Field2D:
    """Order-i right-hand side without the c_i psi_0 and Psi_{i-2} contributions."""
    k2 = 2 * state.ks.k
    t = state.tilde[i - k2]
    acc = t * state.lam - apply_L(state, k2, t)
    for j in range(k2 + 1, i):
        psi = state.psi(i - j)
        acc = acc + psi * state.mu(j) - apply_L(state, j, psi)
    return acc - apply_L(state, i, state.psi(0))


def rhs_f(state: RecurrenceState, i: int) -> PolyGauss:
    """f_i = 2 (F~_i, sin pi xi2): sin-projection of the K-terms at order i."""
    k2 = 2 * state.ks.k
    acc = Field2D.zero(state.theta)
    for j in range(k2 + 1, i + 1):
        acc = acc - apply_L(state, j, state.psi(i - j))
    return acc.sin_component()


def advance(state: RecurrenceState, tol: float = 1e-9) -> RecurrenceState:
    """One step i = order + 1: c_i, Psi_{i-2} and the cross term psi~_i."""
    i = state.order + 1
    k2 = 2 * state.ks.k
    if max(state.ks.K22) < i:
        raise UnsupportedOrderError(f"K series was built only up to order {max(state.ks.K22)}")
    known = known_part(state, i)
    g = known.sin_component()
    ci = -g.inner(state.phi)
    Psi = resolvent_solve(state.potential, state.lam, state.phi, g + state.phi * ci)
    R = known + Field2D.separable(state.phi, scale=ci) - Field2D.separable(
        apply_operator(state.potential, state.lam, Psi)
    )
    leftover = R.sin_component()
    if leftover.norm() > tol * max(1.0, g.norm(), Psi.norm()):
        raise RepresentationError(f"order {i}: solvability defect {leftover.norm():.3e}")
    if Psi.degree > 4 * i:
        raise RepresentationError(f"order {i}: xi1 degree {Psi.degree} exceeds the cap {4 * i}")
    state.c[i] = ci
    state.Psi[i - k2] = Psi
    state.g[i] = g
    fi = g
    for j in range(k2 + 1, i):
        if i - j in state.Psi:
            fi = fi - state.Psi[i - j] * state.c[j]
    state.f[i] = fi
    state.tilde[i] = solve_cross(R, state.md.H0, tol)
    state.order = i
    return state


def residual(state: RecurrenceState, i: int) -> Field2D:
    """Order-i coefficient of (L(eta) - mu(eta)) sum_j eta^j psi_j."""
    out = apply_L0_shifted(state, state.psi(i))
    for j in range(1, i + 1):
        psi = state.psi(i - j)
        out = out + apply_L(state, j, psi) - psi * state.mu(j)
    return out


def run(md: MaxData, N: int, m: int = 1) -> RecurrenceState:
    st = init_state(md, N, m)
    while st.order < N:
        advance(st)
    return st


def expand_maxdata(md: MaxData, N: int, m: int = 1) -> Expansion:
    st = run(md, N, m)
    e = Expansion(n=1, m=m, k=1, c0=st.c[0])
    e.coeffs = {i: st.c[i] for i in range(2, N + 1)}
    return e


def expand_to_order(d: DomainSpec, N: int, m: int = 1, cfg: GeometryConfig = GeometryConfig()) -> Expansion:
    """Coefficients c0, c2..cN of the (1, m) eigenvalue for a k = 1 domain."""
    md = max_data(d, max(N + 2, 8), cfg)
    return expand_maxdata(md, N, m)
