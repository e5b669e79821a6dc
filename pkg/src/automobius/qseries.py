"""Exact integer q-expansions of level-one modular forms.

Products are done by Kronecker substitution: each truncated series is packed
into one big integer with fixed-width slots and multiplied with GMP, so a
length-10^6 product costs a few seconds instead of 10^12 operations.
"""
from __future__ import annotations

import gzip
import os
from dataclasses import dataclass

import gmpy2

from .errors import ArgumentError, DataError
from .primes import smallest_prime_factor


class IntSeries:
    """Truncated power series sum c[n] q^n, 0 <= n <= N, integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = tuple(int(x) for x in coeffs)
        if not c:
            raise ArgumentError("an IntSeries needs at least the constant term")
        self._c = c

    @property
    def coeffs(self):
        return self._c

    @property
    def N(self):
        return len(self._c) - 1

    def __len__(self):
        return len(self._c)

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other):
        if not isinstance(other, IntSeries):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __mul__(self, other):
        return multiply(self, other)

    def truncate(self, N):
        return IntSeries(self._c[: N + 1])

    def __repr__(self):
        head = ", ".join(str(x) for x in self._c[:6])
        return f"IntSeries(N={self.N}, [{head}{', ...' if len(self._c) > 6 else ''}])"


def _pack(coeffs, nbytes):
    pos = b"".join((x if x > 0 else 0).to_bytes(nbytes, "little") for x in coeffs)
    neg = b"".join((-x if x < 0 else 0).to_bytes(nbytes, "little") for x in coeffs)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _mul_lists(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    if n <= 32:
        return [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n)]
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    # |c_j| <= n * ma * mb < 2^(bits-1), so slots never overflow
    bits = ma.bit_length() + mb.bit_length() + n.bit_length() + 1
    nbytes = (bits + 8) // 8
    width = 8 * nbytes
    z = _pack(a, nbytes) * _pack(b, nbytes)
    one = gmpy2.mpz(1)
    # offset every slot by 2^(width-1) so slots are nonnegative and carry-free
    offset = int.from_bytes(((1 << (width - 1)).to_bytes(nbytes, "little")) * n, "little")
    z = gmpy2.f_mod(z + offset, one << (width * n))
    raw = int(z).to_bytes(nbytes * n, "little")
    half = 1 << (width - 1)
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half for i in range(n)]


def multiply(a: IntSeries, b: IntSeries) -> IntSeries:
    """Cauchy product truncated to the shorter operand."""
    return IntSeries(_mul_lists(list(a.coeffs), list(b.coeffs)))


def _check_N(N):
    if int(N) != N or N < 0:
        raise ArgumentError(f"truncation bound must be a nonnegative integer, got {N!r}")
    return int(N)


def euler_product(N):
    """prod_{n>=1} (1 - q^n) up to q^N, from the pentagonal number theorem."""
    N = _check_N(N)
    c = [0] * (N + 1)
    c[0] = 1
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > N:
            break
        c[g1] += sign
        if g2 <= N:
            c[g2] += sign
        k += 1
    return IntSeries(c)


def delta_expansion(N: int) -> IntSeries:
    """Coefficients tau(n), 0 <= n <= N, of Delta = q prod (1 - q^n)^24."""
    N = _check_N(N)
    if N < 1:
        raise ArgumentError("delta_expansion needs N >= 1")
    p = euler_product(N - 1)
    p3 = multiply(multiply(p, p), p)
    p24 = p3
    for _ in range(3):
        p24 = multiply(p24, p24)
    return IntSeries((0,) + p24.coeffs)


def divisor_sigma_table(k, N):
    """[sigma_k(n) for 0 <= n <= N] with sigma_k(0) = 0, exact."""
    sig = [0] * (N + 1)
    if N >= 1:
        sig[1] = 1
    if N < 2:
        return sig
    spf = smallest_prime_factor(N).tolist()
    ppart = [0] * (N + 1)
    for n in range(2, N + 1):
        p = spf[n]
        q = n // p
        if q % p == 0:
            ppart[n] = ppart[q] * p
        else:
            ppart[n] = p
        pp = ppart[n]
        if pp == n:
            sig[n] = sig[q] + n ** k
        else:
            sig[n] = sig[pp] * sig[n // pp]
    return sig


EISENSTEIN_FACTOR = {4: 240, 6: -504}


def eisenstein(k: int, N: int) -> IntSeries:
    """E_4 = 1 + 240 sum sigma_3(n) q^n or E_6 = 1 - 504 sum sigma_5(n) q^n."""
    if k not in EISENSTEIN_FACTOR:
        raise ArgumentError(f"eisenstein weight must be 4 or 6, got {k!r}")
    N = _check_N(N)
    c = EISENSTEIN_FACTOR[k]
    sig = divisor_sigma_table(k - 1, N)
    return IntSeries([1] + [c * s for s in sig[1:]])


@dataclass(frozen=True)
class EigenformSpec:
    id: str
    weight: int
    recipe: tuple

    def __post_init__(self):
        wt = {"Delta": 12, "E4": 4, "E6": 6}
        if sum(wt[r] for r in self.recipe) != self.weight:
            raise ArgumentError(f"recipe {self.recipe} does not have weight {self.weight}")


# the six weights where the cusp space is one-dimensional
EIGENFORMS = {
    "f12": EigenformSpec("f12", 12, ("Delta",)),
    "f16": EigenformSpec("f16", 16, ("E4", "Delta")),
    "f18": EigenformSpec("f18", 18, ("E6", "Delta")),
    "f20": EigenformSpec("f20", 20, ("E4", "E4", "Delta")),
    "f22": EigenformSpec("f22", 22, ("E4", "E6", "Delta")),
    "f26": EigenformSpec("f26", 26, ("E4", "E4", "E6", "Delta")),
}


def get_spec(spec):
    if isinstance(spec, EigenformSpec):
        return spec
    try:
        return EIGENFORMS[spec]
    except KeyError:
        raise ArgumentError(f"unknown eigenform id {spec!r}; expected one of {sorted(EIGENFORMS)}") from None


class SeriesFactory:
    """Memoizes Delta, E4, E6 and the eigenforms at one truncation bound."""

    def __init__(self, N):
        self.N = _check_N(N)
        self._memo = {}

    def base(self, name):
        if name not in self._memo:
            if name == "Delta":
                self._memo[name] = delta_expansion(self.N)
            else:
                self._memo[name] = eisenstein(int(name[1]), self.N)
        return self._memo[name]

    def form(self, spec):
        spec = get_spec(spec)
        if spec.id in self._memo:
            return self._memo[spec.id]
        # build E4^a E6^b Delta by peeling one Eisenstein factor off a smaller form
        rest = list(spec.recipe)
        if rest == ["Delta"]:
            out = self.base("Delta")
        else:
            first = rest.pop(0)
            sub = [s for s in EIGENFORMS.values() if list(s.recipe) == rest][0]
            out = multiply(self.base(first), self.form(sub))
        self._memo[spec.id] = out
        return out


def eigenform_coeffs(spec, N: int) -> IntSeries:
    """a_f(n), 0 <= n <= N, of the normalized level-one eigenform ``spec``."""
    spec = get_spec(spec)
    return SeriesFactory(N).form(spec)


# cache file: gzip text, first line "# <id> N=<N>", then one "n a(n)" per line
def save_series(series: IntSeries, path, form_id="series"):
    tmp = f"{path}.tmp{os.getpid()}"
    with gzip.open(tmp, "wt", encoding="ascii", compresslevel=3) as fh:
        fh.write(f"# {form_id} N={series.N}\n")
        fh.writelines(f"{n} {c}\n" for n, c in enumerate(series.coeffs))
    os.replace(tmp, path)


def load_series(path) -> IntSeries:
    coeffs = []
    with gzip.open(path, "rt", encoding="ascii") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise DataError(f"{path}: missing series header", path=str(path), line=1)
        for lineno, line in enumerate(fh, start=2):
            n, c = line.split()
            if int(n) != len(coeffs):
                raise DataError(f"{path}: index {n} out of sequence", path=str(path), line=lineno)
            coeffs.append(int(c))
    return IntSeries(coeffs)
