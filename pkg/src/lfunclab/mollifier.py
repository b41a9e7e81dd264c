"""The auxiliary prime series and the mollifier family.

The building blocks, all at level 1:

  * the von Mangoldt twist: Lambda_f(p^j) = u_j log p where u_0 = 2,
    u_1 = lambda(p), u_(j+1) = lambda(p) u_j - u_(j-1) (power sums of the
    Satake parameters, whose product is 1);
  * the prime series P = sum_{2 <= n <= X} Lambda_f(n) / (n^s log n) and
    its low/high split at Y;
  * truncated exponentials M1 = sum_k (-1)^k/k! P1^k (in dirichlet_poly);
  * the mollifier M = sum mu(n) a(n) lambda(n) n^(-s) over square-free
    smooth indices with the two prime-count constraints.
"""

from __future__ import annotations

import numpy as np

from .dirichlet_poly import DirichletPolynomial, truncated_exp
from .errors import CapacityError, DomainError
from .forms import CuspForm
from .params import Params
from .primes import factorize, prime_powers_up_to, primes_up_to

P_RANGES = ("full", "low", "high", "primes_only")
M_VARIANTS = ("M", "M1", "M2")
A_VARIANTS = ("a", "a1", "a2")


def satake_power_sum(lam_p: float, j: int) -> float:
    """u_j = alpha1^j + alpha2^j with alpha1 alpha2 = 1, alpha1 + alpha2 = lam_p."""
    prev, cur = 2.0, lam_p
    if j == 0:
        return prev
    for _ in range(j - 1):
        prev, cur = cur, lam_p * cur - prev
    return cur


def von_mangoldt_f(form: CuspForm, n: int) -> float:
    """Lambda_f(n): u_j log p at n = p^j, zero off prime powers."""
    if n < 2:
        raise DomainError("von_mangoldt_f needs n >= 2")
    fac = factorize(n)
    if len(fac) != 1:
        return 0.0
    p, j = fac[0]
    return satake_power_sum(form.lam_at(p), j) * np.log(p)


def build_P(form: CuspForm, params: Params, rng: str = "full") -> DirichletPolynomial:
    """Coefficient map of the auxiliary series over the requested index range.

    c(p^j) = u_j / j so that c(n) = Lambda_f(n) / log(n); for primes_only
    the coefficient is just lambda(p). X below 2 gives the empty
    polynomial.
    """
    if rng not in P_RANGES:
        raise DomainError(f"unknown range {rng!r}; expected one of {P_RANGES}")
    X, Y = params.X, params.Y
    terms: dict[int, complex] = {}
    if rng == "primes_only":
        for p in primes_up_to(int(X)):
            if p > form.n_max:
                raise CapacityError(f"prime {p} beyond eigenvalue table", required=p)
            terms[p] = form.lam_at(p)
        return DirichletPolynomial.from_terms(terms, "P0-primes")
    for p, j, q in prime_powers_up_to(X):
        if rng == "low" and q > Y:
            continue
        if rng == "high" and q <= Y:
            continue
        if p > form.n_max:
            raise CapacityError(f"prime {p} beyond eigenvalue table", required=p)
        terms[q] = satake_power_sum(form.lam_at(p), j) / j
    return DirichletPolynomial.from_terms(terms, f"P-{rng}")


def mollifier_coefficient_a(n: int, params: Params, variant: str = "a") -> int:
    """The 0/1 smooth-support indicators behind the mollifier.

    a:  all prime factors <= X, at most K1 primes <= Y (with multiplicity)
        and at most K2 primes in (Y, X].
    a1: all prime factors <= Y and Omega(n) <= K1.
    a2: all prime factors in (Y, X] and Omega(n) <= K2.
    """
    if variant not in A_VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if n < 1:
        raise DomainError("n must be >= 1")
    if n == 1:
        return 1
    low = high = 0
    for p, a in factorize(n):
        if p <= params.Y:
            low += a
        elif p <= params.X:
            high += a
        else:
            return 0
    if variant == "a":
        return int(low <= params.K1 and high <= params.K2)
    if variant == "a1":
        return int(high == 0 and low <= params.K1)
    return int(low == 0 and high <= params.K2)


def _squarefree_smooth_support(
    form: CuspForm,
    plist: list[int],
    low_cut: float,
    caps: tuple[int, int],
    length_cap: int,
    max_terms: int,
):
    """DFS over square-free products of plist with per-band count limits.

    Yields (n, mu(n) * prod lambda(p)); lambda is exactly multiplicative on
    square-free integers, so the product form is exact.
    """
    out: list[tuple[int, float]] = [(1, 1.0)]
    k1_cap, k2_cap = caps

    def walk(start: int, value: int, coeff: float, low: int, high: int) -> None:
        if len(out) > max_terms:
            raise CapacityError(
                "mollifier support exceeds the term budget", required=len(out)
            )
        for i in range(start, len(plist)):
            p = plist[i]
            nxt = value * p
            if nxt > length_cap:
                return
            if p <= low_cut:
                nlow, nhigh = low + 1, high
                if nlow > k1_cap:
                    continue
            else:
                nlow, nhigh = low, high + 1
                if nhigh > k2_cap:
                    # plist is sorted, every later prime also lands high
                    return
            c = -coeff * form.lam_at(p)
            out.append((nxt, c))
            walk(i + 1, nxt, c, nlow, nhigh)

    walk(0, 1, 1.0, 0, 0)
    return out


def build_M(
    form: CuspForm,
    params: Params,
    variant: str = "M",
    length_cap: int = 100_000,
    max_terms: int = 2_000_000,
) -> DirichletPolynomial:
    """Mollifier coefficient map n -> mu(n) a_variant(n) lambda(n), n <= length_cap."""
    if variant not in M_VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    X, Y = params.X, params.Y
    if variant == "M":
        plist = [p for p in primes_up_to(int(X))]
        caps = (params.K1, params.K2)
        low_cut = Y
    elif variant == "M1":
        plist = [p for p in primes_up_to(int(Y))]
        caps = (params.K1, 0)
        low_cut = Y
    else:
        plist = [p for p in primes_up_to(int(X)) if p > Y]
        caps = (0, params.K2)
        low_cut = Y
    for p in plist:
        if p > form.n_max:
            raise CapacityError(f"prime {p} beyond eigenvalue table", required=p)
    support = _squarefree_smooth_support(form, plist, low_cut, caps, length_cap, max_terms)
    return DirichletPolynomial.from_terms(
        {n: c for n, c in support}, f"mollifier-{variant}"
    )


def m1_truncated_exp(
    form: CuspForm,
    params: Params,
    length_cap: int = 20_000,
    term_budget: int = 20_000_000,
) -> DirichletPolynomial:
    """The truncated exponential of -P1 with K1 terms (the M1 surrogate)."""
    p1 = build_P(form, params, "low")
    return truncated_exp(p1, params.K1, length_cap, term_budget)


def b_and_c_coefficients(
    form: CuspForm,
    params: Params,
    length_cap: int = 20_000,
    term_budget: int = 20_000_000,
) -> tuple[dict[int, float], dict[int, float]]:
    """Raw coefficients of the truncated exponential and their mollifier defect.

    Returns (raw, c) where raw(n) is the coefficient of the truncated
    exponential of -P1 and c(n) = raw(n) - mu(n) a1(n) lambda(n). The
    lambda-factored "b(n)" only makes sense at square-free indices, where
    raw(n) = b(n) lambda(n); at general n the raw coefficient itself is
    what the bounds control.
    """
    m1exp = m1_truncated_exp(form, params, length_cap, term_budget)
    from .primes import mobius_table

    mu = mobius_table(length_cap)
    raw: dict[int, float] = {}
    defect: dict[int, float] = {}
    reference: dict[int, float] = {}
    for n in range(1, length_cap + 1):
        if mu[n] != 0 and mollifier_coefficient_a(n, params, "a1"):
            lam_n = 1.0
            for p, _ in factorize(n):
                lam_n *= form.lam_at(p)
            ref = float(mu[n]) * lam_n
            if ref != 0.0:
                reference[n] = ref
    for n, c in zip(m1exp.indices, m1exp.coeffs):
        raw[int(n)] = float(c.real)
    for n in set(raw) | set(reference):
        d = raw.get(n, 0.0) - reference.get(n, 0.0)
        if d != 0.0:
            defect[n] = d
    return raw, defect
