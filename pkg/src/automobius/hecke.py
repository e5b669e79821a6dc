"""Hecke eigenvalues at primes, Satake roots and symmetric-power eigenvalues."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# binary digits kept in the integer square root before rounding to float
NORMALIZE_BITS = 128


def normalize(a: int, p: int, k: int) -> float:
    """lambda(p) = a / p^((k-1)/2), correctly computed to ~128 bits then rounded.

    Works on lambda^2 = a^2 / p^(k-1), which is rational, so only one integer
    square root is taken.
    """
    a = int(a)
    if a == 0:
        return 0.0
    den = p ** (k - 1)
    num = a * a
    # scale so the quotient has at least 2*NORMALIZE_BITS bits
    shift = max(0, (2 * NORMALIZE_BITS - (num.bit_length() - den.bit_length()) + 1) // 2 + 1)
    root = math.isqrt((num << (2 * shift)) // den)
    value = math.ldexp(float(root), -shift)
    return value if a > 0 else -value


@dataclass(frozen=True)
class SatakePair:
    alpha: complex
    beta: complex


def satake(lambda_p: float) -> SatakePair:
    """Roots of X^2 - lambda X + 1.

    For |lambda| <= 2 alpha is the root with nonnegative imaginary part; for
    real roots alpha is the one of modulus >= 1.
    """
    lam = float(lambda_p)
    disc = lam * lam - 4.0
    if disc <= 0.0:
        im = math.sqrt(-disc) / 2.0
        alpha = complex(lam / 2.0, im)
        return SatakePair(alpha, alpha.conjugate())
    alpha = (lam + math.copysign(math.sqrt(disc), lam)) / 2.0
    return SatakePair(complex(alpha), complex(1.0 / alpha))


def satake_alpha(lam):
    """Vectorized ``satake(lam).alpha`` over an array of eigenvalues."""
    lam = np.asarray(lam, dtype=float)
    disc = lam * lam - 4.0
    out = np.empty(lam.shape, dtype=complex)
    inside = disc <= 0.0
    out[inside] = lam[inside] / 2.0 + 0.5j * np.sqrt(-disc[inside])
    out[~inside] = (lam[~inside] + np.copysign(np.sqrt(disc[~inside]), lam[~inside])) / 2.0
    return out


def sym_eigenvalue(lambda_p, j: int):
    """sum_{i=0}^{j} alpha^i beta^(j-i) via S_j = lambda S_{j-1} - S_{j-2}.

    Accepts a float or a numpy array of eigenvalues.
    """
    if j < 0:
        raise ValueError(f"symmetric power must be >= 0, got {j}")
    lam = np.asarray(lambda_p, dtype=float)
    prev, cur = np.zeros_like(lam), np.ones_like(lam)
    for _ in range(j):
        prev, cur = cur, lam * cur - prev
    return float(cur) if cur.ndim == 0 else cur


def sym_eigenvalue_direct(lambda_p: float, j: int) -> complex:
    """Same quantity summed directly over alpha^(2i-j); used for checks."""
    alpha = satake(lambda_p).alpha
    return sum(alpha ** (2 * i - j) for i in range(j + 1))


@dataclass(frozen=True)
class NormalizedEigenvalues:
    """lambda_f(p) for every prime p <= bound, held as parallel arrays."""

    form: str
    primes: np.ndarray
    values: np.ndarray
    source_precision: int = NORMALIZE_BITS

    @property
    def bound(self):
        return int(self.primes[-1]) if len(self.primes) else 1

    @property
    def lambda_at_prime(self):
        return dict(zip(self.primes.tolist(), self.values.tolist()))

    def at(self, p):
        i = int(np.searchsorted(self.primes, p))
        if i >= len(self.primes) or self.primes[i] != p:
            raise KeyError(p)
        return float(self.values[i])

    def restrict(self, primes):
        """Values at ``primes`` (sorted array); KeyError on the first gap."""
        idx = np.searchsorted(self.primes, primes)
        idx = np.minimum(idx, len(self.primes) - 1)
        bad = self.primes[idx] != primes if len(self.primes) else np.ones(len(primes), bool)
        if np.any(bad):
            raise KeyError(int(np.asarray(primes)[bad][0]))
        return self.values[idx]


def deligne_violations(eig: NormalizedEigenvalues, slack=1e-12):
    """Primes at which |lambda(p)| > 2 + slack."""
    return eig.primes[np.abs(eig.values) > 2.0 + slack]
