"""Finite Dirichlet polynomials: sum over a finite index set of c(n) n^(-s).

Coefficients are stored as parallel (sorted indices, complex values)
arrays. Multiplication is index-multiplicative convolution with an
immediate cap on the product index, which keeps intermediate term counts
polynomial in the cap instead of exponential in the number of factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import CapacityError


@dataclass(frozen=True, eq=False)
class DirichletPolynomial:
    indices: np.ndarray  # int64, sorted ascending, all >= 1
    coeffs: np.ndarray  # complex128
    description: str = ""

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        cf = np.asarray(self.coeffs, dtype=np.complex128)
        if idx.shape != cf.shape:
            raise ValueError("indices/coeffs length mismatch")
        if idx.size and (np.any(idx < 1) or np.any(np.diff(idx) <= 0)):
            raise ValueError("indices must be sorted, distinct, >= 1")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coeffs", cf)

    @classmethod
    def from_terms(cls, terms: dict[int, complex], description: str = "") -> "DirichletPolynomial":
        items = sorted((n, c) for n, c in terms.items() if c != 0)
        idx = np.array([n for n, _ in items], dtype=np.int64)
        cf = np.array([c for _, c in items], dtype=np.complex128)
        return cls(idx, cf, description)

    @property
    def terms(self) -> dict[int, complex]:
        return {int(n): complex(c) for n, c in zip(self.indices, self.coeffs)}

    def __len__(self) -> int:
        return int(self.indices.size)

    def coefficient(self, n: int) -> complex:
        j = np.searchsorted(self.indices, n)
        if j < len(self.indices) and self.indices[j] == n:
            return complex(self.coeffs[j])
        return 0.0 + 0.0j

    def evaluate(self, s):
        """Exact finite sum of c(n) n^(-s); s scalar or array."""
        if self.indices.size == 0:
            return np.zeros_like(np.asarray(s, dtype=complex)) if np.ndim(s) else 0j
        ln_n = np.log(self.indices.astype(np.float64))
        s_arr = np.asarray(s, dtype=complex)
        if s_arr.ndim == 0:
            return complex(np.sum(self.coeffs * np.exp(-complex(s) * ln_n)))
        phases = np.exp(-np.multiply.outer(s_arr, ln_n))
        return phases @ self.coeffs

    def restrict(self, length_cap: int) -> "DirichletPolynomial":
        keep = self.indices <= length_cap
        return DirichletPolynomial(self.indices[keep], self.coeffs[keep], self.description)

    def scale(self, factor: complex) -> "DirichletPolynomial":
        return DirichletPolynomial(self.indices, self.coeffs * factor, self.description)

    def add(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        idx = np.concatenate([self.indices, other.indices])
        cf = np.concatenate([self.coeffs, other.coeffs])
        uniq, inv = np.unique(idx, return_inverse=True)
        out = np.zeros(len(uniq), dtype=np.complex128)
        np.add.at(out, inv, cf)
        keep = out != 0
        return DirichletPolynomial(uniq[keep], out[keep])

    def convolve(
        self,
        other: "DirichletPolynomial",
        length_cap: int,
        term_budget: int = 20_000_000,
    ) -> "DirichletPolynomial":
        """Product polynomial; indices multiply, anything past length_cap drops."""
        if self.indices.size == 0 or other.indices.size == 0:
            return DirichletPolynomial(np.array([], dtype=np.int64), np.array([], dtype=complex))
        if self.indices.size * other.indices.size > term_budget:
            raise CapacityError(
                "convolution intermediate would exceed the term budget",
                required=self.indices.size * other.indices.size,
            )
        prod = np.multiply.outer(self.indices, other.indices).ravel()
        keep = prod <= length_cap
        prod = prod[keep]
        vals = np.multiply.outer(self.coeffs, other.coeffs).ravel()[keep]
        uniq, inv = np.unique(prod, return_inverse=True)
        out = np.zeros(len(uniq), dtype=np.complex128)
        np.add.at(out, inv, vals)
        return DirichletPolynomial(uniq, out)

    def export_csv(self, path) -> None:
        """CSV "n,re_coeff,im_coeff" sorted by n, LF line endings."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("n,re_coeff,im_coeff\n")
            for n, c in zip(self.indices, self.coeffs):
                fh.write(f"{int(n)},{c.real:.17g},{c.imag:.17g}\n")


def one() -> DirichletPolynomial:
    return DirichletPolynomial(np.array([1], dtype=np.int64), np.array([1.0 + 0j]))


def truncated_exp(
    poly: DirichletPolynomial,
    K: int,
    length_cap: int,
    term_budget: int = 20_000_000,
) -> DirichletPolynomial:
    """sum_{k <= K} (-1)^k / k! * poly^k, capped at length_cap.

    The alternating truncated exponential: with K ~ 100 * bound and
    |poly| <= bound pointwise, the truncation error is below e^(-99 bound).
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    acc = one()
    power = one()
    for k in range(1, K + 1):
        power = power.convolve(poly, length_cap, term_budget)
        if len(power) == 0:
            break
        coef = (-1.0) ** k / factorial(k)
        acc = acc.add(power.scale(coef))
        if np.max(np.abs(power.coeffs)) / factorial(k) < 1e-305:
            break
    return acc
