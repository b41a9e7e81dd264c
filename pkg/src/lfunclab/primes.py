"""Elementary sieve machinery: primes, factorizations, mu, Omega.

Everything here is exact integer arithmetic; the coefficient rules of the
mollifier and the moment lab are all factorization-driven, so these tables
are built once per bound and cached.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def prime_sieve(n: int) -> np.ndarray:
    """Boolean array of length n+1 with sieve[p] = True for primes."""
    if n < 1:
        return np.zeros(max(n + 1, 1), dtype=bool)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    sieve.setflags(write=False)
    return sieve


@lru_cache(maxsize=32)
def primes_up_to(n: int) -> tuple[int, ...]:
    return tuple(int(p) for p in np.nonzero(prime_sieve(max(n, 1)))[0])


@lru_cache(maxsize=16)
def smallest_prime_factor(n: int) -> np.ndarray:
    """spf[m] = least prime factor of m (spf[1] = 1)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, int(n**0.5) + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    rest = spf == 0
    spf[rest] = np.arange(n + 1)[rest]
    if n >= 1:
        spf[1] = 1
    spf.setflags(write=False)
    return spf


def factorize(n: int, spf: np.ndarray | None = None) -> list[tuple[int, int]]:
    """Prime factorization [(p, a), ...] by table lookup or trial division."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: list[tuple[int, int]] = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        return out
    d = 2
    while d * d <= n:
        if n % d == 0:
            a = 0
            while n % d == 0:
                n //= d
                a += 1
            out.append((d, a))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=16)
def mobius_table(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    sieve = prime_sieve(n)
    for p in np.nonzero(sieve)[0]:
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    mu.setflags(write=False)
    return mu


@lru_cache(maxsize=16)
def big_omega_table(n: int) -> np.ndarray:
    """Omega[m] = number of prime factors of m counted with multiplicity."""
    om = np.zeros(n + 1, dtype=np.int16)
    for p in primes_up_to(n):
        q = p
        while q <= n:
            om[q::q] += 1
            q *= p
    om.setflags(write=False)
    return om


@lru_cache(maxsize=16)
def divisor_count_table(n: int) -> np.ndarray:
    d = np.ones(n + 1, dtype=np.int32)
    d[0] = 0
    for m in range(2, n + 1):
        d[m::m] += 1
    d.setflags(write=False)
    return d


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, a in factorize(n):
        ds = [d * p**j for d in ds for j in range(a + 1)]
    return sorted(ds)


def prime_powers_up_to(x: float) -> list[tuple[int, int, int]]:
    """All (p, j, p**j) with p prime, j >= 1, p**j <= x."""
    out = []
    for p in primes_up_to(int(x)):
        q, j = p, 1
        while q <= x:
            out.append((p, j, q))
            q *= p
            j += 1
    return sorted(out, key=lambda t: t[2])


def squarefree_smooth_numbers(prime_list, cap, max_count=None):
    """Squarefree integers <= cap composed of the given primes.

    Yields (n, number_of_prime_factors). DFS over the sorted prime list;
    the optional max_count bounds the factor count, which also bounds the
    recursion depth.
    """
    plist = sorted(prime_list)
    out: list[tuple[int, int]] = [(1, 0)]

    def walk(start: int, value: int, count: int) -> None:
        for i in range(start, len(plist)):
            nxt = value * plist[i]
            if nxt > cap:
                return
            out.append((nxt, count + 1))
            if max_count is None or count + 1 < max_count:
                walk(i + 1, nxt, count + 1)

    walk(0, 1, 0)
    return out
