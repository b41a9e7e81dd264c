"""Exact integer q-expansions of the level-1 cusp forms.

Power series live as plain ``list[int]`` coefficient vectors (index =
exponent of q). Products are exact: each polynomial is packed into one
big integer via Kronecker substitution, multiplied (through gmpy2 when
available, whose FFT multiply makes megabit operands cheap), and unpacked
with an offset trick that recovers signed coefficients. Arbitrary
precision is mandatory here; the weight-k arithmetic coefficients grow
like n^((k-1)/2) and rounding would corrupt every multiplicativity test
downstream.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerator
    _mpz = int

SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)

# weight -> (a, b) with weight = 12 + 4a + 6b, newform = Delta * E4^a * E6^b
_EISENSTEIN_EXPONENTS = {
    12: (0, 0),
    16: (1, 0),
    18: (0, 1),
    20: (2, 0),
    22: (1, 1),
    26: (2, 1),
}

_WORD = 64
_INT64_SAFE = 1 << 62


def _pack_nonneg(coeffs, n_words: int) -> int:
    """Pack non-negative coefficients into one integer, n_words 64-bit words per slot."""
    if max(coeffs, default=0) < _INT64_SAFE:
        mat = np.zeros((len(coeffs), n_words), dtype=np.uint64)
        mat[:, 0] = np.asarray(coeffs, dtype=np.uint64)
        return int.from_bytes(mat.tobytes(), "little")
    slot_bytes = 8 * n_words
    buf = bytearray(len(coeffs) * slot_bytes)
    for i, c in enumerate(coeffs):
        if c:
            buf[i * slot_bytes : (i + 1) * slot_bytes] = c.to_bytes(slot_bytes, "little")
    return int.from_bytes(buf, "little")


def _pack_signed(coeffs: list[int], n_words: int) -> int:
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    value = _pack_nonneg(pos, n_words)
    if any(neg):
        value -= _pack_nonneg(neg, n_words)
    return value


def _unpack_signed(total: int, n_out: int, n_words: int) -> list[int]:
    """Inverse of the packing given digits = coeff + 2^(slot_bits-1).

    Subtracting the offset equals flipping the top bit of the top word and
    reading the slot as a little-endian two's-complement integer, which
    keeps the whole unpacking in vectorized word arithmetic.
    """
    slot_bytes = 8 * n_words
    raw = total.to_bytes(n_out * slot_bytes, "little")
    mat = np.frombuffer(raw, dtype=np.uint64).reshape(n_out, n_words)
    top = (mat[:, n_words - 1] ^ np.uint64(1 << 63)).view(np.int64)
    if n_words == 1:
        return top.tolist()
    acc = top.astype(object)
    for j in range(n_words - 2, -1, -1):
        acc = (acc << _WORD) + mat[:, j].astype(object)
    return acc.tolist()


def poly_mul_exact(a: list[int], b: list[int], n_out: int | None = None) -> list[int]:
    """Exact product of integer coefficient lists, truncated to n_out terms."""
    if n_out is None:
        n_out = len(a) + len(b) - 1
    a = list(a[:n_out])
    b = list(b[:n_out])
    max_a = max((abs(c) for c in a), default=0)
    max_b = max((abs(c) for c in b), default=0)
    if max_a == 0 or max_b == 0:
        return [0] * n_out
    # strict bound on any product coefficient, plus two guard bits for the
    # balanced-digit unpacking
    bound = min(len(a), len(b)) * max_a * max_b
    n_words = (bound.bit_length() + 2 + _WORD - 1) // _WORD
    slot_bits = _WORD * n_words
    half = 1 << (slot_bits - 1)

    packed = int(_mpz(_pack_signed(a, n_words)) * _mpz(_pack_signed(b, n_words)))
    mask = (1 << (slot_bits * n_out)) - 1
    offset = int.from_bytes(half.to_bytes(slot_bits // 8, "little") * n_out, "little")
    total = ((packed & mask) + offset) & mask
    return _unpack_signed(total, n_out, n_words)


def eta_cube(n_terms: int) -> list[int]:
    """eta^3 as a q-series: sum_k (-1)^k (2k+1) q^(k(k+1)/2)."""
    out = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        out[k * (k + 1) // 2] = (2 * k + 1) * (-1 if k & 1 else 1)
        k += 1
    return out


# longest eta^24 expansion computed so far; shorter requests slice it
_eta24_cache: list[int] = []


def _eta_pow24(n_terms: int) -> list[int]:
    global _eta24_cache
    if len(_eta24_cache) < n_terms:
        h3 = eta_cube(n_terms)
        h6 = poly_mul_exact(h3, h3, n_terms)
        h12 = poly_mul_exact(h6, h6, n_terms)
        _eta24_cache = poly_mul_exact(h12, h12, n_terms)
    return _eta24_cache[:n_terms]


def _sigma_power_list(n: int, power: int) -> list[int]:
    """[sigma_power(1), ..., sigma_power(n)] with exact integers."""
    out = [0] * (n + 1)
    for d in range(1, n + 1):
        dp = d**power
        for m in range(d, n + 1, d):
            out[m] += dp
    return out[1:]


@lru_cache(maxsize=8)
def eisenstein_e4(n_terms: int) -> tuple[int, ...]:
    sig = _sigma_power_list(max(n_terms - 1, 0), 3)
    return tuple([1] + [240 * s for s in sig])[:n_terms]


@lru_cache(maxsize=8)
def eisenstein_e6(n_terms: int) -> tuple[int, ...]:
    sig = _sigma_power_list(max(n_terms - 1, 0), 5)
    return tuple([1] + [-504 * s for s in sig])[:n_terms]


def expand_delta(n_max: int) -> list[int]:
    """Ramanujan tau values [tau(1), ..., tau(n_max)].

    Delta = q prod (1-q^n)^24 computed as q * (eta^3)^8 with eta^3 given by
    the sparse cube formula, so only three dense squarings are needed.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return _eta_pow24(n_max)


def newform_coefficients(weight: int, n_max: int) -> list[int]:
    """Exact arithmetic coefficients a(1..n_max) of the level-1 newform.

    The spaces S_k(SL_2(Z)) for the supported weights are one-dimensional,
    so Delta * E4^a * E6^b with 12 + 4a + 6b = k is the Hecke eigenform.
    Index i of the result holds a(i+1): Delta carries the leading q, so the
    coefficient of q^(n-1) in the eta/Eisenstein product is a(n).
    """
    from .errors import DomainError

    if weight not in _EISENSTEIN_EXPONENTS:
        raise DomainError(
            f"unsupported weight {weight}; supported: {sorted(_EISENSTEIN_EXPONENTS)}"
        )
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    series = _eta_pow24(n_max)
    a, b = _EISENSTEIN_EXPONENTS[weight]
    for _ in range(a):
        series = poly_mul_exact(series, list(eisenstein_e4(n_max)), n_max)
    for _ in range(b):
        series = poly_mul_exact(series, list(eisenstein_e6(n_max)), n_max)
    return series[:n_max]
