"""Thin-domain geometry: the width function H = h+ + h- and its maximum."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exprjet
from .exprjet import Expr, Jet


class GeometryError(ValueError):
    """Input domain violates the admissibility assumptions."""


class MultipleMaximaError(GeometryError):
    pass


class EndpointMaximumError(GeometryError):
    pass


class NonPositiveWidthError(GeometryError):
    pass


class DegenerateMaximumError(GeometryError):
    """No finite flatness order k with H_{2k} < 0 was found."""


@dataclass(frozen=True)
class GeometryConfig:
    scan_points: int = 4096
    # |H_i| <= zero_rtol * |H_2k| counts as zero for i < 2k
    zero_rtol: float = 1e-9
    # the leading Taylor coefficient |H_2k|/(2k)! must exceed significance * H0
    significance: float = 1e-8
    # maxima whose heights agree to this relative tolerance are ties
    tie_rtol: float = 1e-9
    order: int = 16
    max_newton: int = 80


@dataclass(frozen=True)
class DomainSpec:
    """Pair of boundary functions; the domain is -eps*h_minus < x2 < eps*h_plus."""

    h_plus: Expr
    h_minus: Expr

    @classmethod
    def from_strings(cls, h_plus: str, h_minus: str) -> "DomainSpec":
        return cls(exprjet.parse(h_plus), exprjet.parse(h_minus))

    @property
    def H(self) -> Expr:
        return exprjet.BinOp("+", self.h_plus, self.h_minus)

    def eval_plus(self, x):
        return exprjet.evaluate(self.h_plus, x)

    def eval_minus(self, x):
        return exprjet.evaluate(self.h_minus, x)

    def eval_H(self, x):
        return self.eval_plus(x) + self.eval_minus(x)

    def jet_H(self, x: float, order: int, cap: int = 64) -> Jet:
        return exprjet.eval_jet(self.H, x, order, cap=cap)

    def jet_minus(self, x: float, order: int, cap: int = 64) -> Jet:
        return exprjet.eval_jet(self.h_minus, x, order, cap=cap)


@dataclass(frozen=True)
class MaxData:
    """Derivative data of H and h- at the maximiser xbar.

    ``H[i]`` and ``h[i]`` are i-th derivatives (not Taylor coefficients).
    """

    xbar: float
    k: int
    H: tuple
    h: tuple
    order: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(float(v) for v in self.H))
        object.__setattr__(self, "h", tuple(float(v) for v in self.h))
        if self.order == 0:
            object.__setattr__(self, "order", min(len(self.H), len(self.h)) - 1)

    @property
    def H0(self) -> float:
        return self.H[0]

    def Hd(self, i: int) -> float:
        return self.H[i] if i < len(self.H) else _missing("H", i)

    def hd(self, i: int) -> float:
        return self.h[i] if i < len(self.h) else _missing("h", i)

    @property
    def theta(self) -> float:
        """Harmonic frequency pi*sqrt(-H2)/H0^(3/2) (n = 1, k = 1)."""
        if self.k != 1:
            raise GeometryError("theta is defined for k = 1 only")
        return math.pi * math.sqrt(-self.H[2]) / self.H0 ** 1.5


def _missing(name, i):
    raise GeometryError(f"derivative {name}_{i} not available; raise the jet order")


def _H_prime(d: DomainSpec, x: float, m: int) -> tuple:
    """(H^(m)(x), H^(m+1)(x))."""
    der = d.jet_H(x, m + 1).derivatives()
    return der[m], der[m + 1]


def _newton_root(d: DomainSpec, x0: float, m: int, lo: float, hi: float, max_iter: int) -> float:
    """Root of H^(m) near x0, kept inside [lo, hi]; bisection guards Newton."""
    x = x0
    for _ in range(max_iter):
        f, fp = _H_prime(d, x, m)
        if f == 0.0:
            return x
        step = f / fp if fp != 0.0 else math.inf
        xn = x - step
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        # shrink the bracket using the sign of H^(m)
        fl = _H_prime(d, lo, m)[0]
        if np.sign(fl) == np.sign(f):
            lo = x
        else:
            hi = x
        if abs(xn - x) <= 4e-16 * max(1.0, abs(x)):
            return xn
        x = xn
    return x


def _scan(d: DomainSpec, cfg: GeometryConfig):
    xs = np.linspace(0.0, 1.0, cfg.scan_points + 1)
    Hs = d.eval_H(xs)
    interior = Hs[1:-1]
    if np.any(~np.isfinite(interior)):
        bad = xs[1:-1][~np.isfinite(interior)][0]
        raise NonPositiveWidthError(f"H is not evaluable at x = {bad:.6g}")
    if np.any(interior <= 0.0):
        bad = xs[1:-1][interior <= 0.0][0]
        raise NonPositiveWidthError(f"H <= 0 at x = {bad:.6g} inside (0, 1)")
    return xs, np.where(np.isfinite(Hs), Hs, 0.0)


def locate_max(d: DomainSpec, cfg: GeometryConfig = GeometryConfig()) -> float:
    """Unique interior global maximiser of H (dense scan + Newton on H')."""
    xs, Hs = _scan(d, cfg)
    top = Hs.max()
    if top - Hs[1:-1].min() <= 1e-12 * abs(top):
        raise DegenerateMaximumError("no admissible k: H is constant (flat maximum)")
    i = int(np.argmax(Hs))
    if i == 0 or i == len(xs) - 1:
        raise EndpointMaximumError(f"maximum of H at the endpoint x = {xs[i]:g}")
    # candidate peaks: discrete local maxima close to the top value
    peaks = [
        j for j in range(1, len(xs) - 1)
        if Hs[j] >= Hs[j - 1] and Hs[j] >= Hs[j + 1] and Hs[j] >= top - 1e-3 * abs(top)
    ]
    refined = []
    for j in peaks:
        x = _newton_root(d, xs[j], 1, xs[j - 1], xs[j + 1], cfg.max_newton)
        refined.append((float(d.eval_H(x)), x))
    refined.sort(reverse=True)
    best_val, best_x = refined[0]
    for val, x in refined[1:]:
        if best_val - val > cfg.tie_rtol * abs(best_val):
            continue
        # peaks on one flat plateau (no dip of H between them) are the same maximum
        lo, hi = sorted((x, best_x))
        between = Hs[(xs >= lo) & (xs <= hi)]
        dip = best_val - (between.min() if between.size else best_val)
        if dip > cfg.tie_rtol * abs(best_val):
            raise MultipleMaximaError(
                f"H attains its maximum at several points (x = {best_x:.8g}, {x:.8g})"
            )
    for e in (xs[0], xs[-1]):
        if np.isfinite(d.eval_H(e)) and d.eval_H(e) >= best_val * (1 - cfg.tie_rtol):
            raise EndpointMaximumError(f"maximum of H reached at the endpoint x = {e:g}")
    return float(best_x)


def _flatness(H: np.ndarray, cfg: GeometryConfig):
    """k if H_i = 0 for 0 < i < 2k and H_2k < 0 within tolerance, else None."""
    H0 = H[0]
    for k in range(1, (len(H) - 1) // 2 + 1):
        lead = H[2 * k]
        if abs(lead) / math.factorial(2 * k) <= cfg.significance * abs(H0):
            continue
        lower = np.abs(H[1 : 2 * k])
        if np.all(lower <= cfg.zero_rtol * abs(lead)):
            return k
        return None
    return None


def _refine_flat(d: DomainSpec, x0: float, m: int, cfg: GeometryConfig) -> float:
    """Root of H^(m) near x0; the scan maximum of a flat peak can sit many cells away."""
    for w in (2.0 / cfg.scan_points, 0.005, 0.02):
        lo, hi = max(x0 - w, 1e-12), min(x0 + w, 1 - 1e-12)
        if np.sign(_H_prime(d, lo, m)[0]) != np.sign(_H_prime(d, hi, m)[0]):
            return _newton_root(d, x0, m, lo, hi, cfg.max_newton)
    return x0


def max_data(d: DomainSpec, order: int | None = None, cfg: GeometryConfig = GeometryConfig()) -> MaxData:
    """Locate xbar, detect the flatness order k and collect derivatives there."""
    order = cfg.order if order is None else order
    x0 = locate_max(d, cfg)
    for k in range(1, order // 2 + 1):
        # refining on H^(2k-1) keeps xbar well conditioned for flat maxima
        x = x0 if k == 1 else _refine_flat(d, x0, 2 * k - 1, cfg)
        H = d.jet_H(x, order).derivatives()
        lead = H[2 * k]
        if abs(lead) / math.factorial(2 * k) <= cfg.significance * abs(H[0]):
            continue
        if lead >= 0.0:
            raise DegenerateMaximumError(f"H_{2 * k} = {lead:.3g} is nonnegative at xbar")
        if _flatness(H, cfg) == k:
            h = d.jet_minus(x, order).derivatives()
            return MaxData(xbar=x, k=k, H=tuple(H), h=tuple(h), order=order)
        if np.any(np.abs(H[1 : 2 * k]) > 1e-3 * abs(lead)):
            # a genuinely nonzero lower derivative: not a smooth maximum
            break
    raise DegenerateMaximumError(f"no admissible k found up to derivative order {order}")
