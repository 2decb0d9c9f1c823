"""Independent reference values frozen into the test suite.

Run once before trusting the main code; the printed numbers are pasted into
tests/oracle_values.py.  Nothing here imports thinspec.
"""
import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import j0


def anharmonic_ritz(A: float, k: int, basis: int = 240, omega: float | None = None) -> np.ndarray:
    """Eigenvalues of -u'' + A x^(2k) u in a Hermite-function basis.

    Position is the tridiagonal ladder matrix of an oscillator with frequency
    omega and -d^2 = omega (2N + 1) - omega^2 x^2.  The basis is padded so that
    all matrix powers are exact in the kept block.
    """
    omega = omega or A ** (1.0 / (k + 1))
    n = basis + 2 * k
    off = np.sqrt(np.arange(1, n) / (2.0 * omega))
    X = np.diag(off, 1) + np.diag(off, -1)
    kinetic = np.diag(omega * (2 * np.arange(n) + 1.0)) - omega**2 * (X @ X)
    V = np.linalg.matrix_power(X, 2 * k)
    Hm = (kinetic + A * V)[:basis, :basis]
    return np.linalg.eigvalsh(Hm)


def ground_moment(A: float, k: int, power: int, basis: int = 240) -> float:
    """<x^power> in the ground state of -u'' + A x^(2k) u, from the Ritz vector."""
    omega = A ** (1.0 / (k + 1))
    n = basis + 2 * k + power
    off = np.sqrt(np.arange(1, n) / (2.0 * omega))
    X = np.diag(off, 1) + np.diag(off, -1)
    kinetic = np.diag(omega * (2 * np.arange(n) + 1.0)) - omega**2 * (X @ X)
    Hm = (kinetic + A * np.linalg.matrix_power(X, 2 * k))[:basis, :basis]
    _, vecs = np.linalg.eigh(Hm)
    v = np.zeros(n)
    v[:basis] = vecs[:, 0]
    return float(v @ np.linalg.matrix_power(X, power) @ v)


def main():
    for basis in (120, 180, 240):
        ev = [float(v) for v in anharmonic_ritz(1.0, 2, basis)[:2]]
        print(f"quartic A=1 basis={basis}: {ev[0]!r} {ev[1]!r} gap {ev[1] - ev[0]!r}")
    ev = [float(v) for v in anharmonic_ritz(1.0, 3, 240)[:2]]
    print(f"sextic  A=1: {ev[0]!r} {ev[1]!r}")
    for basis in (120, 240):
        print(f"quartic A=1 <x^6> basis={basis}: {ground_moment(1.0, 2, 6, basis)!r}")
    j01 = float(brentq(j0, 2.0, 3.0, xtol=1e-15))
    print(f"j01 = {j01!r}, 4 j01^2 = {4 * j01**2!r}")
    print(f"rectangle (0,1)x(0,1/2): 5 pi^2 = {5 * math.pi**2!r}")


if __name__ == "__main__":
    main()
