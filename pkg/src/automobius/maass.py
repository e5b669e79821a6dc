"""Maass cusp form eigenvalue files: parsing, validation, registration.

File format::

    R=<spectral parameter>
    1,<lambda(1)>
    n,<lambda(n)>        strictly increasing n, need not be contiguous

Only lambda(p) enters the L-function computations; the other rows exist so
that the Hecke relations and multiplicativity can be checked on load.
"""
from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    CapabilityError,
    DataError,
    HeckeConsistencyError,
    MaassFormatError,
    MultiplicativityError,
    NormalizationError,
)
from .hecke import NormalizedEigenvalues, sym_eigenvalue
from .primes import factorize, smallest_prime_factor

DEFAULT_TOL = 1e-6
MAX_SYM = 4

_HEADER = re.compile(r"^R=([-+0-9.eE]+)$")
_ROW = re.compile(r"^(\d+),([-+0-9.eE]+|nan|inf)$")


@dataclass(frozen=True)
class MaassDataset:
    id: str
    eigenvalue_R: float
    n: np.ndarray
    values: np.ndarray
    source: str = ""
    sha256: str = ""
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index.update(zip(self.n.tolist(), range(len(self.n))))

    @property
    def laplace_eigenvalue(self):
        return 0.25 + self.eigenvalue_R ** 2

    @property
    def lam(self):
        return dict(zip(self.n.tolist(), self.values.tolist()))

    def __len__(self):
        return len(self.n)

    def __contains__(self, n):
        return n in self._index

    def __getitem__(self, n):
        return float(self.values[self._index[n]])

    def eigenvalues(self) -> NormalizedEigenvalues:
        """lambda(p) over the primes present in the file."""
        nmax = int(self.n[-1])
        spf = smallest_prime_factor(max(nmax, 2))
        mask = (self.n >= 2) & (spf[self.n] == self.n)
        return NormalizedEigenvalues(self.id, self.n[mask], self.values[mask], source_precision=53)

    def provenance(self):
        return {"id": self.id, "R": self.eigenvalue_R, "rows": len(self), "source": self.source, "sha256": self.sha256}


def check_sym_capability(j):
    if j > MAX_SYM:
        raise CapabilityError(
            f"Sym^{j} of a Maass form is not known to be cuspidal; only j <= {MAX_SYM} is supported", j=j
        )


def maass_sym_lambda(d: MaassDataset, p: int, j: int) -> float:
    """lambda_{Sym^j}(p) from lambda(p) by S_j = lambda S_{j-1} - S_{j-2}."""
    if j < 0:
        raise ValueError("j must be >= 0")
    check_sym_capability(j)
    if p not in d:
        raise DataError(f"dataset {d.id} has no lambda({p})", p=p)
    return sym_eigenvalue(d[p], j)


def _relerr(x, ref):
    return abs(x - ref) / max(1.0, abs(ref))


def validate(d: MaassDataset, tol=DEFAULT_TOL):
    """Raise DataError subclasses on the first inconsistency."""
    if d.n[0] != 1:
        raise MaassFormatError("first row must be n=1", line=2)
    if abs(d.values[0] - 1.0) > 1e-9:
        raise NormalizationError(f"lambda(1) = {d.values[0]!r}, expected 1", n=1)
    if not np.all(np.isfinite(d.values)):
        bad = int(d.n[~np.isfinite(d.values)][0])
        raise DataError(f"non-finite lambda({bad})", n=bad)
    nmax = int(d.n[-1])
    spf = smallest_prime_factor(max(nmax, 2))
    lam = d.lam
    for p in d.n[(d.n >= 2) & (spf[d.n] == d.n)].tolist():
        # lambda(p) lambda(p^a) = lambda(p^(a+1)) + lambda(p^(a-1))
        prev, cur, a = 1.0, lam[p], 1
        q = p
        while q * p <= nmax and q * p in lam:
            nxt = lam[q * p]
            pred = lam[p] * cur - prev
            if _relerr(nxt, pred) > tol:
                raise HeckeConsistencyError(
                    f"lambda({q * p}) = {nxt!r} but the Hecke relation gives {pred!r}", p=p, a=a + 1
                )
            prev, cur, q, a = cur, nxt, q * p, a + 1
    for n in d.n.tolist():
        if n < 6:
            continue
        fac = factorize(n, spf)
        if len(fac) < 2:
            continue
        parts = [p ** e for p, e in fac.items()]
        if all(q in lam for q in parts):
            pred = math.prod(lam[q] for q in parts)
            if _relerr(lam[n], pred) > tol:
                raise MultiplicativityError(
                    f"lambda({n}) = {lam[n]!r} but the product over prime powers is {pred!r}", n=n
                )


def parse_maass(text: str, name="maass"):
    lines = text.splitlines()
    if not lines:
        raise MaassFormatError("empty file", line=1)
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise MaassFormatError(f"expected header 'R=<decimal>', got {lines[0][:40]!r}", line=1)
    R = float(m.group(1))
    ns, vals = [], []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            if lineno == len(lines):
                continue
            raise MaassFormatError("blank line", line=lineno)
        row = _ROW.match(line)
        if not row:
            raise MaassFormatError(f"malformed row {line[:40]!r}", line=lineno)
        n = int(row.group(1))
        if ns and n <= ns[-1]:
            raise MaassFormatError(f"n={n} is not strictly increasing", line=lineno)
        if not ns and n != 1:
            raise MaassFormatError(f"rows must start at n=1, got n={n}", line=lineno)
        ns.append(n)
        vals.append(float(row.group(2)))
    if not ns:
        raise MaassFormatError("no data rows", line=2)
    return R, np.array(ns, dtype=np.int64), np.array(vals)


def load_maass(path, tol=DEFAULT_TOL, registry=None) -> MaassDataset:
    """Read, validate and optionally register a dataset as ``maass:<stem>``."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    R, ns, vals = parse_maass(raw.decode("ascii", errors="replace"), path.stem)
    d = MaassDataset(f"maass:{path.stem}", R, ns, vals, str(path), hashlib.sha256(raw).hexdigest())
    validate(d, tol)
    if registry is not None:
        registry.add_maass(d)
    return d
