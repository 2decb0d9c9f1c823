"""Polynomials times a fixed Gaussian, p(xi) * exp(-theta * xi**2 / 2).

This family is closed under the operations the k = 1 recurrence needs
(sums, multiplication by polynomials, differentiation), and all L2 inner
products reduce to Gaussian moments, so every quantity is exact up to
floating point round-off.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _moments(theta: float, n: int) -> np.ndarray:
    """M_j = int xi^j exp(-theta xi^2) d xi for j = 0..n-1."""
    M = np.zeros(n)
    M[0] = math.sqrt(math.pi / theta)
    for j in range(2, n, 2):
        M[j] = M[j - 2] * (j - 1) / (2.0 * theta)
    M.setflags(write=False)
    return M


def gaussian_moment(theta: float, j: int) -> float:
    return float(_moments(float(theta), j + 1)[j])


def _trim(c: np.ndarray) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1].copy() if len(nz) else np.zeros(1)


class PolyGauss:
    """``sum_j coeffs[j] xi^j * exp(-theta xi^2 / 2)``."""

    __slots__ = ("theta", "coeffs")

    def __init__(self, theta: float, coeffs):
        if theta <= 0:
            raise ValueError("theta must be positive")
        self.theta = float(theta)
        self.coeffs = _trim(coeffs)

    @classmethod
    def zero(cls, theta):
        return cls(theta, [0.0])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, PolyGauss):
            return NotImplemented
        if abs(other.theta - self.theta) > 1e-14 * self.theta:
            raise ValueError("PolyGauss objects carry different Gaussian weights")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return PolyGauss(self.theta, c)

    def __neg__(self):
        return PolyGauss(self.theta, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, PolyGauss):
            raise TypeError("product of two PolyGauss objects changes the weight")
        return PolyGauss(self.theta, self.coeffs * float(s))

    __rmul__ = __mul__

    def __truediv__(self, s):
        return PolyGauss(self.theta, self.coeffs / float(s))

    def mul_poly(self, p) -> "PolyGauss":
        """Multiply by the polynomial with ascending coefficients ``p``."""
        return PolyGauss(self.theta, np.convolve(self.coeffs, np.atleast_1d(p)))

    def mul_x(self, power: int = 1) -> "PolyGauss":
        return PolyGauss(self.theta, np.concatenate([np.zeros(power), self.coeffs]))

    def deriv(self) -> "PolyGauss":
        """d/dxi of p e^{-theta xi^2/2} = (p' - theta xi p) e^{-theta xi^2/2}."""
        c = self.coeffs
        out = np.zeros(len(c) + 1)
        out[: len(c) - 1] += c[1:] * np.arange(1, len(c))
        out[1:] -= self.theta * c
        return PolyGauss(self.theta, out)

    def inner(self, other: "PolyGauss", power: int = 0) -> float:
        """(xi^power * self, other) in L2(R)."""
        other = self._check(other)
        prod = np.convolve(self.coeffs, other.coeffs)
        M = _moments(self.theta, len(prod) + power)
        return float(np.dot(prod, M[power:]))

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self), 0.0))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.polynomial.polynomial.polyval(xi, self.coeffs) * np.exp(-0.5 * self.theta * xi**2)

    def allclose(self, other: "PolyGauss", rtol=1e-9, atol=0.0) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n)
        b = np.zeros(n)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return bool(np.allclose(a, b, rtol=rtol, atol=atol))

    def __repr__(self):
        return f"PolyGauss(theta={self.theta!r}, coeffs={self.coeffs!r})"


def moments(a: PolyGauss, b: PolyGauss, power: int) -> float:
    """(xi^power a, b) in L2(R), evaluated exactly from Gaussian moments."""
    return a.inner(b, power)
