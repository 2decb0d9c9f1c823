"""Named example domains with their reference coefficients.

Reference coefficients are kept as expression strings in the same grammar
as the boundary functions and evaluated on demand, so they stay readable
and exact.  ``digits`` records the printed precision when the reference
values are decimals.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import exprjet
from .geometry import DomainSpec


@dataclass(frozen=True)
class Example:
    name: str
    h_plus: str
    h_minus: str
    # reference (c0, c2, c4, c6)
    reference: tuple
    digits: int | None = None

    @property
    def domain(self) -> DomainSpec:
        return DomainSpec.from_strings(self.h_plus, self.h_minus)

    def reference_values(self) -> dict:
        keys = ("0", "2", "4", "6")
        return {k: float(exprjet.evaluate(exprjet.parse(s), 0.0)) for k, s in zip(keys, self.reference)}


_DISK_H = "sqrt(x-x^2)"
_LEMN_H = "sqrt(-1/2-x^2+sqrt(1+8*x^2)/2)"
_BEAN_H = "sqrt(2*x)*sqrt(1-x+sqrt(1-x)*sqrt(1+3*x))/2"

EXAMPLES = {
    "disk": Example(
        "disk", _DISK_H, _DISK_H,
        ("pi^2", "2*pi", "3", "11/(2*pi)+pi/3"),
    ),
    "lemniscate": Example(
        "lemniscate", _LEMN_H, _LEMN_H,
        ("2*pi^2", "2*sqrt(3)*pi", "97/24", "593/(64*sqrt(3)*pi)+sqrt(3)*pi/4"),
    ),
    "bean": Example(
        "bean", _BEAN_H, _BEAN_H,
        (
            "9*pi^2/16",
            "3*sqrt(15)*pi/8",
            "127/40",
            "24229/(600*sqrt(15)*pi)+5*sqrt(5)*pi/(16*sqrt(3))",
        ),
    ),
    "convex": Example(
        "convex", "sin(pi*x)", "pi*(1-x)/2",
        (
            "36*pi^2/(3*sqrt(3)+2*pi)^2",
            "6*3^(3/4)*pi^2/(3*sqrt(3)+2*pi)^(3/2)",
            "pi^2*(9*(27+6*sqrt(3)*pi+16*pi^2)/(16*(3*sqrt(3)+2*pi)^2)-19/216)",
            "(13273/4608+1807*pi/(sqrt(3)*2304)+5465*pi^2/1296+17257*pi^3/(sqrt(3)*11664))"
            "*3^(-1/4)*pi^2/(3*sqrt(3)+2*pi)^(3/2)",
        ),
    ),
    "nonconvex": Example(
        "nonconvex", "1+sin(7*pi*x/2)", "7*pi*(1-x)/4",
        ("0.210941", "1.79692", "4.35119", "60.5706"),
        digits=6,
    ),
}


def get(name: str) -> Example:
    try:
        return EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
