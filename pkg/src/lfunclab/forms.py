"""Level-1 holomorphic newforms and their normalized Hecke eigenvalues.

The supported weights are exactly those whose cusp-form space is
one-dimensional, so "the" newform of each weight is unambiguous and the
eigenvalue tables are self-generated from exact q-expansions. Everything
is level 1 with trivial nebentypus: psi(p) = 1 in every formula below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qexpansion
from .errors import (
    DomainError,
    MultiplicativityError,
    OutOfRangeError,
    ParseError,
)
from .primes import factorize, primes_up_to

SUPPORTED_WEIGHTS = qexpansion.SUPPORTED_WEIGHTS


@dataclass(frozen=True)
class FourierExpansion:
    """Exact integer coefficients a(n) = lambda(n) * n^((k-1)/2), 1-indexed."""

    weight: int
    coefficients: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.coefficients)

    def a(self, n: int) -> int:
        if not 1 <= n <= self.length:
            raise OutOfRangeError(f"coefficient index {n} outside 1..{self.length}")
        return self.coefficients[n - 1]

    def normalized(self) -> np.ndarray:
        """lambda table as float64, index n (entry 0 unused)."""
        lam = np.zeros(self.length + 1)
        shift = (self.weight - 1) / 2.0
        ns = np.arange(1, self.length + 1, dtype=np.float64)
        lam[1:] = [float(c) for c in self.coefficients]
        lam[1:] /= ns**shift
        lam.setflags(write=False)
        return lam


@dataclass(frozen=True, eq=False)
class CuspForm:
    """A level-1 holomorphic newform with tabulated eigenvalues.

    Immutable after construction; all evaluators treat it as read-only.
    """

    weight: int
    lam: np.ndarray = field(repr=False)  # lam[n] = lambda(n), lam[0] = 0
    root_number: int
    label: str
    level: int = 1

    @property
    def n_max(self) -> int:
        return len(self.lam) - 1

    @property
    def cache_key(self) -> tuple[int, int]:
        return (self.weight, self.n_max)

    def nebentypus_psi(self, p: int) -> float:
        # trivial character; kept as a named hook because the coefficient
        # formulas are written with psi(p) in them
        return 1.0

    def lam_at(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise OutOfRangeError(f"lambda({n}) not tabulated (n_max={self.n_max})")
        return float(self.lam[n])


def expand_delta(n_max: int) -> FourierExpansion:
    """Exact tau(n) for n <= n_max from the eta-product expansion."""
    return FourierExpansion(12, tuple(qexpansion.expand_delta(n_max)))


def _form_from_expansion(expansion: FourierExpansion, label: str) -> CuspForm:
    k = expansion.weight
    root = 1 if k % 4 == 0 else -1  # i^k for even k
    return CuspForm(weight=k, lam=expansion.normalized(), root_number=root, label=label)


def build_newform(weight: int, n_max: int) -> CuspForm:
    if weight not in SUPPORTED_WEIGHTS:
        raise DomainError(
            f"unsupported weight {weight}; one-dimensional level-1 spaces: "
            f"{sorted(SUPPORTED_WEIGHTS)}"
        )
    coeffs = qexpansion.newform_coefficients(weight, n_max)
    exp = FourierExpansion(weight, tuple(coeffs))
    return _form_from_expansion(exp, label=f"level1-weight{weight}")


def hecke_lambda(form: CuspForm, n: int) -> float:
    """lambda(n) by multiplicativity and the prime-power recursion.

    Independent of the table at composite n: only lambda(p) is read, then
    lambda(p^(j+1)) = lambda(p) lambda(p^j) - lambda(p^(j-1)) at level 1.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    value = 1.0
    for p, a in factorize(n):
        if p > form.n_max:
            raise OutOfRangeError(f"prime {p} beyond tabulated range {form.n_max}")
        lam_p = float(form.lam[p])
        prev, cur = 1.0, lam_p  # lambda(p^0), lambda(p^1)
        for _ in range(a - 1):
            prev, cur = cur, lam_p * cur - prev
        value *= cur if a >= 1 else 1.0
    return value


def multiplicativity_max_error(
    lam: np.ndarray, bound: int
) -> tuple[float, tuple[int, int]]:
    """Worst relative error in lambda(m)lambda(n) = sum_{d|(m,n)} lambda(mn/d^2).

    Scans every pair with mn <= bound. The relative scale is
    max(1, |lhs|, |rhs|) so that near-zero products do not blow up the
    quotient.
    """
    bound = min(bound, len(lam) - 1)
    worst = 0.0
    witness = (1, 1)
    for m in range(1, bound + 1):
        top = bound // m
        if top < 1:
            break
        n_arr = np.arange(1, top + 1)
        lhs = lam[m] * lam[1 : top + 1]
        rhs = np.zeros(top)
        for d in _divisors_small(m):
            sel = n_arr % d == 0
            rhs[sel] += lam[(m // d) * (n_arr[sel] // d)]
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        rel = np.abs(lhs - rhs) / scale
        j = int(np.argmax(rel))
        if rel[j] > worst:
            worst = float(rel[j])
            witness = (m, j + 1)
    return worst, witness


def _divisors_small(m: int) -> list[int]:
    out = [d for d in range(1, int(math.isqrt(m)) + 1) if m % d == 0]
    return sorted(set(out + [m // d for d in out]))


def deligne_max(form: CuspForm) -> tuple[float, int]:
    """max |lambda(p)| over tabulated primes and its argmax prime."""
    ps = np.array(primes_up_to(form.n_max), dtype=np.int64)
    vals = np.abs(form.lam[ps])
    j = int(np.argmax(vals))
    return float(vals[j]), int(ps[j])


def validate_form(form: CuspForm, bound: int | None = None, tol: float = 1e-12) -> None:
    """Multiplicativity + Deligne check; raises MultiplicativityError."""
    bound = bound or form.n_max
    err, pair = multiplicativity_max_error(form.lam, bound)
    if err > tol:
        raise MultiplicativityError(
            f"Hecke multiplicativity violated at (m,n)={pair}: rel err {err:.3e}",
            pair=pair,
        )
    worst, p = deligne_max(form)
    if worst > 2.0 + tol:
        raise MultiplicativityError(
            f"|lambda({p})| = {worst} exceeds the Deligne bound", pair=(p, p)
        )


def write_eigenvalue_file(expansion: FourierExpansion, path) -> None:
    """Plain-text table, one line "n a(n)", LF endings, n ascending from 1."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, c in enumerate(expansion.coefficients, start=1):
            fh.write(f"{i} {c}\n")


def load_eigenvalues(path, weight: int) -> CuspForm:
    """Read an arithmetic-normalization coefficient file and validate it.

    Multiplicativity is checked on every pair with mn <= table length
    before the form is accepted.
    """
    coeffs: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty eigenvalue file", line_number=1)
    for i, line in enumerate(lines, start=1):
        parts = line.split(" ")
        if len(parts) != 2:
            raise ParseError(f"line {i}: expected 'n a(n)', got {line!r}", line_number=i)
        try:
            n, a = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {i}: non-integer field ({exc})", line_number=i)
        if n != i:
            raise ParseError(f"line {i}: index {n} not contiguous from 1", line_number=i)
        coeffs.append(a)
    exp = FourierExpansion(weight, tuple(coeffs))
    form = _form_from_expansion(exp, label=f"loaded-weight{weight}")
    err, pair = multiplicativity_max_error(form.lam, form.n_max)
    if err > 1e-12:
        raise MultiplicativityError(
            f"eigenvalue table fails Hecke multiplicativity at (m,n)={pair} "
            f"(rel err {err:.3e})",
            pair=pair,
        )
    return form
