import math

import numpy as np


def primes_upto(n):
    """All primes <= n as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p::2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def smallest_prime_factor(n):
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_upto(math.isqrt(n)).tolist():
        block = spf[p * p::p]
        block[block == 0] = p
    spf[spf == 0] = np.arange(n + 1)[spf == 0]
    return spf


def factorize(n, spf=None):
    """Prime factorization of ``n`` as a dict {p: e}."""
    out = {}
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def decades(n):
    """Checkpoints 10, 100, ... below ``n``, then ``n`` itself."""
    out = []
    x = 10
    while x < n:
        out.append(x)
        x *= 10
    out.append(n)
    return out
