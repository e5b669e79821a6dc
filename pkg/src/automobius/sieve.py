"""Multiplicative extension of local Moebius data and partial sums over n <= N."""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ArgumentError, DataError
from .localfactor import local_data, local_tables
from .primes import decades, factorize, primes_upto
from .repalg import RepExpr

SEGMENT = 1 << 20


@dataclass(frozen=True)
class MobiusTable:
    N: int
    values: np.ndarray  # values[n - 1] = mu_pi(n)
    rep: str
    degree: int

    def __getitem__(self, n):
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return float(self.values[n - 1])

    def save(self, path):
        """Two-column text file ``n,mu(n)`` with 17 significant digits."""
        n = np.arange(1, self.N + 1)
        np.savetxt(path, np.column_stack([n, self.values]), fmt=["%d", "%.17g"], delimiter=",",
                   header=f"rep={self.rep} N={self.N} degree={self.degree}")


@dataclass(frozen=True)
class PartialSumSeries:
    kind: str
    checkpoints: tuple  # ((x, value), ...)

    def __post_init__(self):
        xs = [x for x, _ in self.checkpoints]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ArgumentError("checkpoints must be strictly increasing")

    def as_dict(self):
        return dict(self.checkpoints)


def _sieve_segment(lo, hi, primes, mob, d):
    """mu(n) for lo <= n < hi."""
    seg = np.ones(hi - lo)
    L = hi - lo
    stride_group = (primes < L) | (primes * primes < hi)
    for i in np.flatnonzero(stride_group & (primes < hi)).tolist():
        p = int(primes[i])
        start = -(-lo // p) * p
        if start >= hi:
            continue
        count = (hi - 1 - start) // p + 1
        fac = np.full(count, mob[i, 1])
        a, pa = 2, p * p
        while pa < hi:
            first = -(-lo // pa) * pa
            if first < hi:
                fac[(first - start) // p::pa // p] = mob[i, a] if a <= d else 0.0
            a, pa = a + 1, pa * p
        seg[start - lo::p] *= fac
    big = np.flatnonzero(~stride_group & (primes < hi))
    if len(big):
        # p >= L: at most one multiple per segment, and p^2 >= hi
        pb = primes[big]
        first = -(-lo // pb) * pb
        hit = first < hi
        np.multiply.at(seg, first[hit] - lo, mob[big[hit], 1])
    return seg


def mobius_table(e: RepExpr, N: int, registry, segment=SEGMENT, threads=1) -> MobiusTable:
    """mu_pi(n) for 1 <= n <= N by a segmented multiplicative sieve."""
    if int(N) != N or N < 1:
        raise ArgumentError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    primes = primes_upto(N)
    if len(primes):
        _, mob = local_tables(e, primes, registry)
    else:
        mob = np.ones((0, 2))
    d = mob.shape[1] - 1
    bounds = [(lo, min(lo + segment, N + 1)) for lo in range(1, N + 1, segment)]
    values = np.empty(N)

    def work(b):
        lo, hi = b
        values[lo - 1:hi - 1] = _sieve_segment(lo, hi, primes, mob, d)

    if threads and threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(work, bounds))
    else:
        for b in bounds:
            work(b)
    return MobiusTable(N, values, str(e), d)


def mobius_from_factorization(e: RepExpr, n: int, registry) -> float:
    """mu_pi(n) recomputed from the factorization of n and scalar local data."""
    out = 1.0
    for p, a in factorize(n).items():
        ld = local_data(e, p, registry)
        out *= ld.mobius[a] if a <= ld.degree else 0.0
    return out


def _checkpoints(t, checkpoints):
    xs = decades(t.N) if checkpoints is None else [int(x) for x in checkpoints]
    if any(x < 1 or x > t.N for x in xs):
        raise ArgumentError(f"checkpoints must lie in [1, {t.N}]")
    return xs


def abs_partial_sums(t: MobiusTable, checkpoints=None) -> PartialSumSeries:
    """S(x) = sum_{n <= x} |mu(n)| at each checkpoint."""
    xs = _checkpoints(t, checkpoints)
    cum = np.cumsum(np.abs(t.values))
    return PartialSumSeries("abs_sum", tuple((x, float(cum[x - 1])) for x in xs))


def signed_partial_sums(t: MobiusTable, checkpoints=None) -> PartialSumSeries:
    xs = _checkpoints(t, checkpoints)
    cum = np.cumsum(t.values)
    return PartialSumSeries("signed_sum", tuple((x, float(cum[x - 1])) for x in xs))


# ------------------------------------------------------------ sequences xi

class Xi:
    """A bounded test sequence xi(n), n >= 1."""

    label = "xi"

    def values(self, N):
        raise NotImplementedError


class ConstantXi(Xi):
    label = "1"

    def values(self, N):
        return np.ones(N)


@dataclass
class AdditiveCharacter(Xi):
    alpha: float

    @property
    def label(self):
        return f"e({self.alpha!r})"

    def values(self, N):
        n = np.arange(1, N + 1, dtype=float)
        return np.exp(2j * np.pi * np.mod(self.alpha * n, 1.0))


@dataclass
class FileXi(Xi):
    path: str

    @property
    def label(self):
        return f"file:{self.path}"

    def values(self, N):
        try:
            lines = Path(self.path).read_text().splitlines()
        except OSError as exc:
            raise DataError(f"cannot read xi file {self.path}: {exc.strerror}", path=self.path) from None
        if len(lines) < N:
            raise DataError(f"xi file has {len(lines)} values, need {N}", path=self.path, line=len(lines) + 1)
        out = np.empty(N, dtype=complex)
        for i, line in enumerate(lines[:N]):
            try:
                parts = [float(x) for x in line.split(",")]
            except ValueError:
                raise DataError(f"cannot parse xi value {line[:30]!r}", path=self.path, line=i + 1) from None
            if len(parts) not in (1, 2):
                raise DataError("xi value must be 're' or 're,im'", path=self.path, line=i + 1)
            z = complex(parts[0], parts[1] if len(parts) == 2 else 0.0)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise DataError("xi must be bounded (non-finite value)", path=self.path, line=i + 1)
            out[i] = z
        return out


_CHAR = re.compile(r"^e\(\s*([-+0-9.eE]+)\s*\)$")


def parse_xi(spec: str) -> Xi:
    """'1' | 'e(<alpha>)' | 'file:<path>'."""
    spec = spec.strip()
    if spec == "1":
        return ConstantXi()
    m = _CHAR.match(spec)
    if m:
        return AdditiveCharacter(float(m.group(1)))
    if spec.startswith("file:"):
        return FileXi(spec[5:])
    raise ArgumentError(f"xi must be '1', 'e(<alpha>)' or 'file:<path>', got {spec!r}")


def correlate(t: MobiusTable, xi, N=None, checkpoints=None) -> PartialSumSeries:
    """(1/x) |sum_{n <= x} mu(n) xi(n)| at each checkpoint."""
    if isinstance(xi, str):
        xi = parse_xi(xi)
    N = t.N if N is None else int(N)
    if N > t.N:
        raise ArgumentError(f"table only reaches N={t.N}")
    xs = _checkpoints(MobiusTable(N, t.values[:N], t.rep, t.degree), checkpoints)
    cum = np.cumsum(t.values[:N] * xi.values(N))
    return PartialSumSeries("correlation", tuple((x, float(abs(cum[x - 1])) / x) for x in xs))
